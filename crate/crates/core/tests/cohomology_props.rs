use std::sync::Arc;

use massey_core::cohomology::{
    coboundary, corestrict_character, cup11, extension_from_cocycle, is_cocycle1, is_cocycle2, Cochain1, Cochain2, GModule,
};
use massey_core::groupengine::{closure, CyclicGroup, Group, GroupStore, IndexedGroup, Limits};
use massey_core::unipotent::{phi_cocycle, project, twisted_psi, Side, UnipotentGroup};
use proptest::prelude::*;

fn u3(p: u32) -> Arc<GroupStore<UnipotentGroup>> {
    let u = UnipotentGroup::new(p, 3).unwrap();
    Arc::new(closure(&u, &u.sigmas(), Limits::default()).unwrap().with_table())
}

/// V = F_p^2 through the head block and V^* through the inverse transpose of the tail block.
fn modules(st: &Arc<GroupStore<UnipotentGroup>>, p: u32) -> (Arc<GModule>, Arc<GModule>) {
    let ig: Arc<dyn IndexedGroup> = st.clone();
    let v = GModule::from_fn(p, 2, ig.clone(), |i| project(st.element(i), Side::Head).to_fp_matrix()).unwrap();
    let vd = GModule::from_fn(p, 2, ig, |i| project(st.element(i), Side::Tail).inv().to_fp_matrix().transpose()).unwrap();
    (Arc::new(v), Arc::new(vd))
}

/// k·base + (g ↦ g·v − v)
fn shifted(module: &Arc<GModule>, base: impl Fn(usize) -> Vec<u32>, k: u32, v: &[u32]) -> Cochain1 {
    let p = module.p;
    Cochain1::from_fn(module.clone(), |g| {
        let gv = module.act(g, v);
        base(g).iter().zip(gv.iter().zip(v)).map(|(b, (x, y))| (k * b + x + p - y) % p).collect()
    })
    .unwrap()
}

fn add2(a: &Cochain2, b: &Cochain2) -> Cochain2 {
    let p = a.module.p;
    Cochain2::from_fn(a.module.clone(), |g, h| a.get(g, h).iter().zip(b.get(g, h)).map(|(x, y)| (x + y) % p).collect()).unwrap()
}

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cup_of_cocycles_is_a_cocycle((p, k1, k2, v, w) in prime().prop_flat_map(|p| (
        Just(p), 0..p, 0..p, prop::collection::vec(0..p, 2), prop::collection::vec(0..p, 2)
    ))) {
        let st = u3(p);
        let (mv, mvd) = modules(&st, p);
        let a = shifted(&mv, |g| phi_cocycle(st.element(g)).data, k1, &v);
        let b = shifted(&mvd, |g| twisted_psi(st.element(g)).data, k2, &w);
        prop_assert!(is_cocycle1(&a) && is_cocycle1(&b));
        prop_assert!(is_cocycle2(&cup11(&a, &b).unwrap()));
    }

    /// (m, g) ↦ (m + b(g), g) carries the extension by c + δb onto the extension by c.
    #[test]
    fn cohomologous_cocycles_give_isomorphic_extensions((p, bvals) in prime().prop_flat_map(|p| (
        Just(p), prop::collection::vec(0..p, 27 * 4)
    ))) {
        let st = u3(p);
        let (mv, mvd) = modules(&st, p);
        let a = shifted(&mv, |g| phi_cocycle(st.element(g)).data, 1, &[0, 0]);
        let b = shifted(&mvd, |g| twisted_psi(st.element(g)).data, 1, &[0, 0]);
        let c = cup11(&a, &b).unwrap();
        let m = c.module.clone();
        let prim = Cochain1::from_fn(m.clone(), |g| bvals[g * 4..g * 4 + 4].to_vec()).unwrap();
        let c2 = add2(&c, &coboundary(&prim));
        let (e, e2) = (extension_from_cocycle(&c).unwrap(), extension_from_cocycle(&c2).unwrap());
        let phi = |x: &(Vec<u32>, u32)| {
            let (mm, g) = e2.to_raw(x);
            let shifted: Vec<u32> = mm.iter().zip(prim.get(g as usize)).map(|(x, y)| (x + y) % p).collect();
            e.from_raw(&(shifted, g))
        };
        let n = st.order() as u32;
        let elems: Vec<(Vec<u32>, u32)> = (0..n)
            .flat_map(|g| (0..p.pow(4)).map(move |code| ((0..4).map(|i| (code / p.pow(i)) % p).collect(), g)))
            .collect();
        let step = if p == 2 { 1 } else { 37 };
        for x in elems.iter().step_by(step) {
            for y in elems.iter().step_by(step) {
                prop_assert_eq!(phi(&e2.mul(x, y)), e.mul(&phi(x), &phi(y)));
            }
        }
    }

    /// Corestriction is additive in α and composes along C_p ⊂ C_{p^2} ⊂ C_{p^3}.
    #[test]
    fn corestriction_is_additive_and_transitive((p, a1, a2) in prime().prop_flat_map(|p| (Just(p), 0..p, 0..p))) {
        let n = (p * p * p) as u64;
        let st = closure(&CyclicGroup { order: n }, &[1], Limits::default()).unwrap().with_table();
        let idx = |k: u64| st.index_of(&(k % n)).unwrap();
        let (p64, pp) = (p as u64, (p * p) as u64);
        let small: Vec<usize> = (0..p64).map(|k| idx(k * pp)).collect();
        let mid: Vec<usize> = (0..pp).map(|k| idx(k * p64)).collect();
        // the characters of C_p = ⟨p^2⟩ are x ↦ a·(x / p^2)
        let level = |v: u64| (v / pp) as u32 % p;
        let full_t: Vec<usize> = (0..pp).map(idx).collect();
        let cor = |a: u32| corestrict_character(&st, &small, &full_t, p, |x| level(*st.element(x)) * a % p).unwrap();
        let (d1, d2, sum) = (cor(a1), cor(a2), cor(a1 + a2));
        prop_assert!(sum.iter().zip(d1.iter().zip(&d2)).all(|(s, (x, y))| *s == (x + y) % p));
        // through C_{p^2} = ⟨p⟩, as a group of its own
        let m = closure(&CyclicGroup { order: n }, &[p64], Limits::default()).unwrap().with_table();
        let midx = |k: u64| m.index_of(&(k % n)).unwrap();
        let m_small: Vec<usize> = (0..p64).map(|k| midx(k * pp)).collect();
        let m_t: Vec<usize> = (0..p64).map(|k| midx(k * p64)).collect();
        let inner = corestrict_character(&m, &m_small, &m_t, p, |x| level(*m.element(x)) * a1 % p).unwrap();
        let top_t: Vec<usize> = (0..p64).map(idx).collect();
        let outer = corestrict_character(&st, &mid, &top_t, p, |x| inner[midx(*st.element(x))]).unwrap();
        prop_assert_eq!(outer, d1);
    }
}
