use massey_core::fpcore::{FpMatrix, FpVector};
use massey_core::groupengine::{closure, is_free_cyclic, lower_central_series, Limits};
use massey_core::unipotent::{UniMatrix, UnipotentGroup};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gens(p: u32, n: usize) -> impl Strategy<Value = Vec<UniMatrix>> {
    prop::collection::vec(any::<u64>(), 1..4)
        .prop_map(move |s| s.into_iter().map(|s| UniMatrix::random(p, n, &mut ChaCha8Rng::seed_from_u64(s))).collect())
}

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_idempotent((p, gs) in prime().prop_flat_map(|p| (Just(p), gens(p, 4)))) {
        let u = UnipotentGroup::new(p, 4).unwrap();
        let s = closure(&u, &gs, Limits::default()).unwrap();
        let again = closure(&u, s.elements(), Limits::default()).unwrap();
        prop_assert_eq!(again.order(), s.order());
        prop_assert!(s.order().is_power_of_two() || p != 2);
        prop_assert!(gs.iter().all(|g| s.contains(g)));
    }

    #[test]
    fn lcs_orders_descend_by_powers_of_p((p, gs) in prime().prop_flat_map(|p| (Just(p), gens(p, 4)))) {
        let u = UnipotentGroup::new(p, 4).unwrap();
        let r = lower_central_series(&u, &gs, None, Limits::default());
        prop_assert!(r.complete);
        let o = r.orders();
        prop_assert_eq!(*o.last().unwrap(), 1);
        for w in o.windows(2) {
            prop_assert!(w[1] < w[0] || w[0] == 1);
            let mut idx = w[0] / w[1];
            prop_assert_eq!(w[0] % w[1], 0);
            while idx % p as u64 == 0 {
                idx /= p as u64;
            }
            prop_assert_eq!(idx, 1);
        }
    }

    /// Whenever Σ_g g·v ≠ 0 the translates of v are independent, for G = U_3(F_p) acting on
    /// F_p^3 ⊗ F_p^3 and for C_p acting on F_p^p by shifting.
    #[test]
    fn free_cyclic_lemma((p, v, w) in prime().prop_flat_map(|p| (
        Just(p),
        prop::collection::vec(0..p as i64, 9),
        prop::collection::vec(0..p as i64, p as usize),
    ))) {
        let u = UnipotentGroup::new(p, 3).unwrap();
        let st = closure(&u, &u.sigmas(), Limits::default()).unwrap();
        let action: Vec<FpMatrix> = st.elements().iter().map(|g| { let m = g.to_fp_matrix(); m.kron(&m) }).collect();
        prop_assert!(is_free_cyclic(&action, &FpVector::from_slice(p, &v)).lemma_holds());
        let n = p as usize;
        let mut shift = FpMatrix::zeros(p, n, n);
        for i in 0..n {
            shift.set((i + 1) % n, i, 1);
        }
        let cyc: Vec<FpMatrix> = (0..p as u64).map(|k| shift.pow(k)).collect();
        let r = is_free_cyclic(&cyc, &FpVector::from_slice(p, &w));
        prop_assert!(r.lemma_holds());
        let sum: i64 = w.iter().sum();
        prop_assert_eq!(r.norm_nonzero, sum % p as i64 != 0);
    }
}
