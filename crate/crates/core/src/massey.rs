//! Massey vanishing in the sense of a finite group model, the lifting criterion for maps into
//! tilde G, and the repeated-character witnesses coming from U_{2p+1}.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::{cup11, is_coboundary2, is_coboundary2_dense, Cochain1, Cochain2, ExtElem, GModule};
use crate::error::{contract, Error, Result};
use crate::groupengine::{
    all_subgroups, closure, conjugacy_class_reps, enumerate_homs, CyclicGroup, Group, GroupHom, GroupStore,
    HomLimits, Indexed, IndexedGroup, Limits,
};
use crate::unipotent::{UniMatrix, UnipotentGroup};
use crate::wreath::{build_tilde_un, MatrixModel, Tag, TildeUn, WreathGroup};

/// Characters χ_1, …, χ_n of a finite group, as value tables over the store indices.
pub struct CharacterTuple<G: Group> {
    pub group: Arc<GroupStore<G>>,
    pub p: u32,
    pub chars: Vec<Vec<u32>>,
}

impl<G: Group> CharacterTuple<G> {
    /// Characters given by their values on the store generators; fails when a value list does
    /// not extend to a homomorphism.
    pub fn from_generator_values(group: Arc<GroupStore<G>>, p: u32, values: &[Vec<u32>]) -> Result<Self> {
        let cyc = CyclicGroup { order: p as u64 };
        let ngen = group.generator_indices().len();
        let mut chars = Vec::with_capacity(values.len());
        for (i, v) in values.iter().enumerate() {
            if v.len() != ngen {
                return contract(format!("character {} has {} values for {ngen} generators", i + 1, v.len()));
            }
            let images: Vec<u64> = v.iter().map(|&x| (x % p) as u64).collect();
            let h = GroupHom::from_images(&group, &cyc, images)
                .ok_or_else(|| Error::Contract(format!("character {} is not a homomorphism", i + 1)))?;
            chars.push(h.table.iter().map(|&x| x as u32).collect());
        }
        Ok(CharacterTuple { group, p, chars })
    }

    /// Characters computed elementwise, audited against their generator values.
    pub fn from_fn(group: Arc<GroupStore<G>>, p: u32, n: usize, f: impl Fn(&G::Elem) -> Vec<u32>) -> Result<Self> {
        let tables: Vec<Vec<u32>> = group.elements().iter().map(&f).collect();
        let values: Vec<Vec<u32>> =
            (0..n).map(|i| group.generator_indices().iter().map(|&g| tables[g][i]).collect()).collect();
        let ct = Self::from_generator_values(group, p, &values)?;
        for (x, t) in tables.iter().enumerate() {
            if ct.at(x) != *t {
                return contract("character values are not homomorphic");
            }
        }
        Ok(ct)
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    /// (χ_1(x), …, χ_n(x)) for the element with store index x.
    pub fn at(&self, x: usize) -> Vec<u32> {
        self.chars.iter().map(|c| c[x]).collect()
    }

    pub fn on_generator(&self, j: usize) -> Vec<u32> {
        self.at(self.group.generator_indices()[j])
    }
}

/// A finite group read from a file. The header is "p n kind"; kind `unipotent` is followed by
/// generator matrices in the matrix text format, kind `cyclic` stands for C_n on the generator 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupFile {
    Unipotent { p: u32, n: usize, generators: Vec<UniMatrix> },
    Cyclic { p: u32, order: u64 },
}

impl GroupFile {
    pub fn parse(text: &str) -> Result<GroupFile> {
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
        let header: Vec<&str> = lines.first().ok_or_else(|| Error::Parse("empty group file".into()))?.split_whitespace().collect();
        let [p, n, kind] = header[..] else {
            return Err(Error::Parse("group header must be \"p n kind\"".into()));
        };
        let p: u32 = p.parse().map_err(|_| Error::Parse(format!("bad p '{p}'")))?;
        let n: u64 = n.parse().map_err(|_| Error::Parse(format!("bad n '{n}'")))?;
        match kind {
            "cyclic" if lines.len() == 1 && n > 0 => Ok(GroupFile::Cyclic { p, order: n }),
            "cyclic" => Err(Error::Parse("cyclic group file takes only the header".into())),
            "unipotent" => {
                let n = n as usize;
                let body = &lines[1..];
                if body.len() % (n + 1) != 0 {
                    return Err(Error::Parse(format!("generator blocks need {} lines each", n + 1)));
                }
                let generators = body
                    .chunks(n + 1)
                    .map(|b| UniMatrix::parse(&b.join("\n")))
                    .collect::<Result<Vec<_>>>()?;
                if generators.iter().any(|g| g.p() != p || g.n() != n) {
                    return Err(Error::Parse(format!("generator not in U_{n}(F_{p})")));
                }
                Ok(GroupFile::Unipotent { p, n, generators })
            }
            _ => Err(Error::Parse(format!("unknown group kind '{kind}'"))),
        }
    }

    pub fn p(&self) -> u32 {
        match self {
            GroupFile::Unipotent { p, .. } | GroupFile::Cyclic { p, .. } => *p,
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            GroupFile::Cyclic { p, order } => format!("{p} {order} cyclic\n"),
            GroupFile::Unipotent { p, n, generators } => {
                let mut s = format!("{p} {n} unipotent\n");
                for g in generators {
                    s.push('\n');
                    s.push_str(&g.to_text());
                }
                s
            }
        }
    }
}

/// Character values on generators: characters separated by `;`, generator values by `,`.
/// "1,0;0,1" gives χ_1 = (1, 0) and χ_2 = (0, 1) on two generators.
pub fn parse_chars(spec: &str) -> Result<Vec<Vec<u32>>> {
    spec.split(';')
        .map(|c| {
            c.split(',')
                .map(|v| v.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad character value '{v}'"))))
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    U5,
    TildeU5,
    U3,
    U3w1,
    U3w2,
}

impl Target {
    pub fn arity(self) -> usize {
        match self {
            Target::U5 | Target::TildeU5 => 4,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Target::U5 => "u5",
            Target::TildeU5 => "tilde-u5",
            Target::U3 => "u3",
            Target::U3w1 => "u3w1",
            Target::U3w2 => "u3w2",
        }
    }
}

impl std::str::FromStr for Target {
    type Err = Error;
    fn from_str(s: &str) -> Result<Target> {
        Ok(match s {
            "u5" => Target::U5,
            "tilde-u5" => Target::TildeU5,
            "u3" => Target::U3,
            "u3w1" => Target::U3w1,
            "u3w2" => Target::U3w2,
            _ => return Err(Error::Parse(format!("unknown target {s}"))),
        })
    }
}

/// s_1, …, s_{n−1} of a unipotent matrix.
pub fn s_values(x: &UniMatrix) -> Vec<u32> {
    (0..x.n() - 1).map(|i| x.entry(i, i + 1)).collect()
}

/// A homomorphism ψ from the tuple's group with s_i ∘ ψ = χ_i, searched over `candidates`.
/// The returned map has been re-checked on every element.
pub fn find_compatible<G: Group, C: Group>(
    ct: &CharacterTuple<G>,
    codomain: &C,
    candidates: &[C::Elem],
    chars: impl Fn(&C::Elem) -> Vec<u32>,
    limits: HomLimits,
) -> Result<Option<GroupHom<C>>> {
    let wanted: Vec<Vec<u32>> = (0..ct.group.generator_indices().len()).map(|j| ct.on_generator(j)).collect();
    let needed: BTreeSet<&Vec<u32>> = wanted.iter().collect();
    let pool: Vec<C::Elem> = candidates.iter().filter(|x| needed.contains(&chars(x))).cloned().collect();
    let homs = enumerate_homs(
        &ct.group,
        codomain,
        &pool,
        |j, x| chars(x) == wanted[j],
        HomLimits { max_results: 1, ..limits },
    )?;
    let Some(h) = homs.into_iter().next() else { return Ok(None) };
    if (0..ct.group.order()).any(|x| chars(h.image(x)) != ct.at(x)) {
        return contract("homomorphism is not compatible with the characters");
    }
    Ok(Some(h))
}

#[derive(Clone, Debug, Serialize)]
pub struct Vanishing {
    pub target: Target,
    pub found: bool,
    /// Generator images as matrices: in U_n for unipotent targets, through ι in U_{p+1} for
    /// U_3^{(i)}, and through κ in U_{2p+1} for tilde U_5.
    pub images: Option<Vec<Vec<Vec<u32>>>>,
    /// For tilde U_5: the witness composed with the quotient to U_5 stays compatible.
    pub quotient_compatible: Option<bool>,
}

fn matrix_rows(x: &UniMatrix) -> Vec<Vec<u32>> {
    x.rows()
}

/// Decides whether (χ_1, …, χ_n) vanishes in the sense of the target, exhaustively.
pub fn vanishes_in_sense_of<G: Group + 'static>(ct: &CharacterTuple<G>, target: Target, limits: HomLimits) -> Result<Vanishing> {
    if ct.len() != target.arity() {
        return contract(format!("{} characters for target {}", ct.len(), target.name()));
    }
    let p = ct.p;
    let mut quotient_compatible = None;
    let images = match target {
        Target::U5 | Target::U3 => {
            let u = UnipotentGroup::new(p, target.arity() + 1)?;
            let all = closure(&u, &u.sigmas(), Limits::default())?;
            find_compatible(ct, &u, all.elements(), s_values, limits)?
                .map(|h| h.gen_images.iter().map(matrix_rows).collect())
        }
        Target::U3w1 | Target::U3w2 => {
            let tag = if target == Target::U3w1 { Tag::First } else { Tag::Second };
            let w = WreathGroup::new(p, 2, tag)?;
            let all = closure(&w, &w.generators(), Limits::default())?;
            let model = MatrixModel::new(p)?;
            find_compatible(ct, &w, all.elements(), |x| s_values(&w.f_map(x)), limits)?
                .map(|h| h.gen_images.iter().map(|x| matrix_rows(&model.iota_factor(&w, x))).collect())
        }
        Target::TildeU5 => {
            let tu = build_tilde_un(p, 2)?;
            let model = MatrixModel::new(p)?;
            match lift_compatible(ct, &tu, limits)? {
                None => None,
                Some(psi) => {
                    let u5 = UnipotentGroup::new(p, 5)?;
                    let q = psi.then::<UnipotentGroup>(|x| tu.to_un(&tu.ext.to_raw(x)));
                    let hom_ok = GroupHom::from_images(&ct.group, &u5, q.gen_images.clone())
                        .is_some_and(|h| h.table == q.table);
                    quotient_compatible =
                        Some(hom_ok && (0..ct.group.order()).all(|x| s_values(q.image(x)) == ct.at(x)));
                    Some(psi.gen_images.iter().map(|x| matrix_rows(&model.kappa(&tu.tilde_g, &tu.ext.to_raw(x)))).collect())
                }
            }
        }
    };
    Ok(Vanishing { target, found: images.is_some(), images, quotient_compatible })
}

/// A compatible homomorphism into tilde U_5, or None. Runs over the compatible maps γ into
/// tilde G and lifts the first one whose pulled-back class vanishes.
pub fn lift_compatible<G: Group + 'static>(
    ct: &CharacterTuple<G>,
    tu: &TildeUn,
    limits: HomLimits,
) -> Result<Option<GroupHom<crate::cohomology::ExtensionGroup>>> {
    let tg = tu.tilde_g.clone();
    let ig = Indexed(tg.clone());
    let all: Vec<u32> = (0..tg.order() as u32).collect();
    let wanted: Vec<Vec<u32>> = (0..ct.group.generator_indices().len()).map(|j| ct.on_generator(j)).collect();
    let pool: Vec<u32> = all.into_iter().filter(|&g| wanted.contains(&tg.characters(g as usize))).collect();
    let gammas = enumerate_homs(&ct.group, &ig, &pool, |j, &g| tg.characters(g as usize) == wanted[j], limits)?;
    let domain: Arc<dyn IndexedGroup> = ct.group.clone();
    for gamma in gammas {
        let map: Vec<usize> = gamma.table.iter().map(|&g| g as usize).collect();
        let c = pullback_omega(tu, &domain, &map)?;
        if let Some(b) = is_coboundary2(&c)? {
            // ψ(x) = (−b(x), γ(x)) in raw coordinates
            let p = tu.tilde_g.p;
            let images: Vec<ExtElem> = ct
                .group
                .generator_indices()
                .iter()
                .map(|&x| {
                    let m: Vec<u32> = b.get(x).iter().map(|&v| (p - v) % p).collect();
                    tu.ext.from_raw(&(m, map[x] as u32))
                })
                .collect();
            let psi = GroupHom::from_images(&ct.group, &tu.ext, images)
                .ok_or_else(|| Error::Contract("lift from a coboundary is not a homomorphism".into()))?;
            if (0..ct.group.order()).any(|x| tu.characters(psi.image(x)) != ct.at(x)) {
                return contract("lift is not compatible with the characters");
            }
            return Ok(Some(psi));
        }
    }
    Ok(None)
}

fn pullback_omega(tu: &TildeUn, domain: &Arc<dyn IndexedGroup>, map: &[usize]) -> Result<Cochain2> {
    let m = &tu.omega.module;
    let module = Arc::new(GModule::from_fn(m.p, m.dim, domain.clone(), |x| m.matrix(map[x]).clone())?);
    tu.omega.pullback(module, map)
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftingReport {
    pub order: usize,
    pub lambda_order: usize,
    pub lifts: bool,
    pub orthogonal: bool,
    pub agree: bool,
    /// Dense coboundary solve and direct search for a lift, when run.
    pub lifts_dense: Option<bool>,
    pub lifts_by_search: Option<bool>,
}

impl LiftingReport {
    pub fn consistent(&self) -> bool {
        self.agree && self.lifts_dense.is_none_or(|x| x == self.lifts) && self.lifts_by_search.is_none_or(|x| x == self.lifts)
    }
}

/// Compares liftability of γ: Γ → tilde G with cup-orthogonality of the characters of
/// tilde N_1 and tilde N_2′ restricted to Λ = γ^{-1}(tilde N). `gamma[x]` is the tilde G
/// index of the image of store element x.
pub fn check_lifting_theorem<G: Group + 'static>(
    tu: &TildeUn,
    domain: Arc<GroupStore<G>>,
    gamma: &[usize],
    oracles: bool,
) -> Result<LiftingReport> {
    let tg = &tu.tilde_g;
    let p = tg.p;
    let n = domain.order();
    if gamma.len() != n || gamma[0] != 0 {
        return contract("γ must send the identity to the identity");
    }
    for x in 0..n {
        for &g in domain.generator_indices() {
            if gamma[domain.mul(x, g)] != tg.mul_idx(gamma[x], gamma[g]) {
                return contract("γ is not a homomorphism");
            }
        }
    }
    let dyn_domain: Arc<dyn IndexedGroup> = domain.clone();
    let c = pullback_omega(tu, &dyn_domain, gamma)?;
    let lifts = is_coboundary2(&c)?.is_some();

    let members: Vec<usize> = (0..n).filter(|&x| tg.in_tilde_n(gamma[x])).collect();
    let lam = Arc::new(domain.subgroup(&members)?);
    let to_domain: Vec<usize> = lam.elements().iter().map(|e| domain.index_of(e).expect("member")).collect();
    let lam_dyn: Arc<dyn IndexedGroup> = lam.clone();
    let triv = Arc::new(GModule::trivial(p, 1, lam_dyn));
    let k = tg.wreath(Tag::First).points();
    let restrict = |tag: Tag, u: usize| -> Result<Cochain1> {
        Cochain1::from_fn(triv.clone(), |i| vec![tg.tilde_phi(tag, gamma[to_domain[i]])[u]])
    };
    let mut orthogonal = true;
    'outer: for u in 0..k {
        let x = restrict(Tag::First, u)?;
        for w in 0..k {
            let y = restrict(Tag::Second, w)?;
            if is_coboundary2(&cup11(&x, &y)?)?.is_none() {
                orthogonal = false;
                break 'outer;
            }
        }
    }

    let (lifts_dense, lifts_by_search) = if oracles {
        let dense = is_coboundary2_dense(&c)?.is_some();
        (Some(dense), Some(lifts_by_search(tu, &domain, gamma)?))
    } else {
        (None, None)
    };
    Ok(LiftingReport { order: n, lambda_order: members.len(), lifts, orthogonal, agree: lifts == orthogonal, lifts_dense, lifts_by_search })
}

/// Direct search for a homomorphism into tilde U_n lying over γ.
fn lifts_by_search<G: Group>(tu: &TildeUn, domain: &GroupStore<G>, gamma: &[usize]) -> Result<bool> {
    let p = tu.tilde_g.p;
    let d = tu.omega.module.dim;
    let total = (p as u64).pow(d as u32);
    if total > 1 << 16 {
        return Err(Error::Resource { what: "fibre of tilde U_n over tilde G".into(), partial: 0 });
    }
    let gens: Vec<usize> = domain.generator_indices().iter().map(|&g| gamma[g]).collect();
    let mut pool = Vec::new();
    for &g in &gens {
        for code in 0..total {
            let mut m = vec![0u32; d];
            let mut c = code;
            for e in m.iter_mut() {
                *e = (c % p as u64) as u32;
                c /= p as u64;
            }
            pool.push((m, g as u32));
        }
    }
    let homs = enumerate_homs(domain, &tu.ext, &pool, |j, x| x.1 as usize == gens[j], HomLimits { max_results: 1, ..HomLimits::default() })?;
    Ok(!homs.is_empty())
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepCase {
    pub generators: Vec<usize>,
    #[serde(flatten)]
    pub report: LiftingReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub p: u32,
    pub group_order: usize,
    pub subgroups: usize,
    pub all_agree: bool,
    pub cases: Vec<SweepCase>,
}

/// The lifting criterion for every subgroup of tilde G(F_p), or one per conjugacy class, with
/// γ the inclusion.
pub fn lifting_sweep(p: u32, oracles: bool, up_to_conjugacy: bool) -> Result<SweepReport> {
    let tu = build_tilde_un(p, 2)?;
    let tg = tu.tilde_g.clone();
    if tg.order() > 256 {
        return Err(Error::Resource { what: format!("subgroup lattice of tilde G(F_{p})"), partial: 0 });
    }
    let ig = Indexed(tg.clone());
    let gens: Vec<u32> = tg.generator_idx().into_iter().map(|g| g as u32).collect();
    let store = closure(&ig, &gens, Limits::default())?.with_table();
    let subgroups = all_subgroups(&store);
    let reps = if up_to_conjugacy { conjugacy_class_reps(&store, &subgroups) } else { subgroups };
    let cases: Vec<Result<SweepCase>> = reps
        .par_iter()
        .map(|s| {
            let sub = Arc::new(store.subgroup(&s.members)?.with_table());
            let gamma: Vec<usize> = sub.elements().iter().map(|&e| e as usize).collect();
            let generators = sub.generators().iter().map(|&e| e as usize).collect();
            Ok(SweepCase { generators, report: check_lifting_theorem(&tu, sub, &gamma, oracles)? })
        })
        .collect();
    let cases: Vec<SweepCase> = cases.into_iter().collect::<Result<_>>()?;
    Ok(SweepReport {
        p,
        group_order: store.order(),
        subgroups: cases.len(),
        all_agree: cases.iter().all(|c| c.report.consistent()),
        cases,
    })
}

/// A homomorphism into U_{k+1} obtained from κ ∘ ψ by dropping `leading` rows and columns at
/// the top and `trailing` at the bottom. `pattern[i]` is the index of the character that s_{i+1}
/// recovers.
#[derive(Clone, Debug)]
pub struct RepeatedWitness {
    pub leading: usize,
    pub trailing: usize,
    pub pattern: Vec<usize>,
    pub hom: GroupHom<UnipotentGroup>,
}

/// Compose with π^a and π′^b, keeping the block of size n − a − b starting at a.
pub fn truncate(hom: &GroupHom<UnipotentGroup>, leading: usize, trailing: usize) -> Result<GroupHom<UnipotentGroup>> {
    let n = hom.gen_images.first().map_or(0, |x| x.n());
    if leading + trailing + 2 > n {
        return contract("truncation leaves no U_2 block");
    }
    let len = n - leading - trailing;
    Ok(hom.then::<UnipotentGroup>(|x| x.block(leading, len)))
}

/// For ψ compatible with (χ_1, χ_2, χ_3, χ_4), homomorphisms into U_{k+1} compatible with
/// (χ_1 repeated p−1−a times, χ_2, χ_3, χ_4 repeated p−1−b times) for 0 ≤ a, b ≤ p−2.
pub fn repeated_massey_witness<G: Group>(
    ct: &CharacterTuple<G>,
    tu: &TildeUn,
    model: &MatrixModel,
    psi: &GroupHom<crate::cohomology::ExtensionGroup>,
) -> Result<Vec<RepeatedWitness>> {
    let n = ct.group.order();
    if ct.len() != 4 || (0..n).any(|x| tu.characters(psi.image(x)) != ct.at(x)) {
        return contract("ψ is not compatible with the characters");
    }
    let p = model.p as usize;
    let full = psi.then::<UnipotentGroup>(|x| model.kappa(&tu.tilde_g, &tu.ext.to_raw(x)));
    let ug = UnipotentGroup::new(model.p, 2 * p + 1)?;
    if GroupHom::from_images(&ct.group, &ug, full.gen_images.clone()).is_none_or(|h| h.table != full.table) {
        return contract("κ ∘ ψ is not a homomorphism");
    }
    let mut out = Vec::new();
    for a in 0..p - 1 {
        for b in 0..p - 1 {
            let hom = truncate(&full, a, b)?;
            let mut pattern = vec![0; p - 1 - a];
            pattern.extend([1, 2]);
            pattern.extend(std::iter::repeat_n(3, p - 1 - b));
            let ok = (0..n).all(|x| {
                let s = s_values(hom.image(x));
                let chi = ct.at(x);
                s.len() == pattern.len() && s.iter().zip(&pattern).all(|(v, &i)| *v == chi[i])
            });
            if !ok {
                return contract("truncated witness is not compatible");
            }
            out.push(RepeatedWitness { leading: a, trailing: b, pattern, hom });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::ExtensionGroup;

    fn cyclic_tuple(p: u32, values: &[u32]) -> CharacterTuple<CyclicGroup> {
        let g = Arc::new(closure(&CyclicGroup { order: p as u64 }, &[1], Limits::default()).unwrap());
        let v: Vec<Vec<u32>> = values.iter().map(|&x| vec![x]).collect();
        CharacterTuple::from_generator_values(g, p, &v).unwrap()
    }

    fn tilde_tuple(tu: &TildeUn) -> CharacterTuple<ExtensionGroup> {
        let store = Arc::new(closure(&tu.ext, &tu.canonical_generators(), Limits::default()).unwrap());
        CharacterTuple::from_fn(store, tu.tilde_g.p, 4, |x| tu.characters(x)).unwrap()
    }

    #[test]
    fn rejects_non_characters() {
        let g = Arc::new(closure(&CyclicGroup { order: 4 }, &[1], Limits::default()).unwrap());
        assert!(CharacterTuple::from_generator_values(g.clone(), 2, &[vec![1]]).is_ok());
        assert!(CharacterTuple::from_generator_values(g, 3, &[vec![1]]).is_err());
    }

    #[test]
    fn c3_equal_characters() {
        let ct = cyclic_tuple(3, &[1, 1]);
        assert!(vanishes_in_sense_of(&ct, Target::U3, HomLimits::default()).unwrap().found);
        assert!(!vanishes_in_sense_of(&ct, Target::U3w1, HomLimits::default()).unwrap().found);
    }

    #[test]
    fn u5_identity() {
        for p in [2u32, 3] {
            let u = UnipotentGroup::new(p, 5).unwrap();
            let store = Arc::new(closure(&u, &u.sigmas(), Limits::default()).unwrap());
            let ct = CharacterTuple::from_fn(store, p, 4, s_values).unwrap();
            let r = vanishes_in_sense_of(&ct, Target::U5, HomLimits::default()).unwrap();
            assert!(r.found);
        }
    }

    #[test]
    fn tilde_u5_f2() {
        let tu = build_tilde_un(2, 2).unwrap();
        let ct = tilde_tuple(&tu);
        assert_eq!(ct.group.order(), 1024);
        let r = vanishes_in_sense_of(&ct, Target::U5, HomLimits::default()).unwrap();
        assert!(r.found);
        let t = vanishes_in_sense_of(&ct, Target::TildeU5, HomLimits::default()).unwrap();
        assert!(t.found);
        assert_eq!(t.quotient_compatible, Some(true));
    }

    #[test]
    fn trivial_group_lifts() {
        let tu = build_tilde_un(2, 2).unwrap();
        let g = Arc::new(closure(&CyclicGroup { order: 1 }, &[], Limits::default()).unwrap());
        let r = check_lifting_theorem(&tu, g, &[0], true).unwrap();
        assert!(r.lifts && r.orthogonal && r.consistent());
    }

    #[test]
    fn identity_on_tilde_g() {
        let tu = build_tilde_un(2, 2).unwrap();
        let ig = Indexed(tu.tilde_g.clone());
        let gens: Vec<u32> = tu.tilde_g.generator_idx().into_iter().map(|g| g as u32).collect();
        let store = Arc::new(closure(&ig, &gens, Limits::default()).unwrap().with_table());
        let gamma: Vec<usize> = store.elements().iter().map(|&e| e as usize).collect();
        let r = check_lifting_theorem(&tu, store, &gamma, true).unwrap();
        assert!(r.consistent(), "{r:?}");
    }

    #[test]
    fn sweep_f2() {
        let r = lifting_sweep(2, true, true).unwrap();
        assert_eq!(r.group_order, 64);
        assert!(r.all_agree, "{:?}", r.cases.iter().filter(|c| !c.report.consistent()).collect::<Vec<_>>());
        assert!(r.cases.iter().any(|c| !c.report.lifts));
        assert!(r.cases.iter().any(|c| c.report.lifts));
    }

    #[test]
    fn repeated_p2_and_p3() {
        for p in [2u32, 3] {
            let tu = build_tilde_un(p, 2).unwrap();
            let model = MatrixModel::new(p).unwrap();
            let gens = tu.canonical_generators();
            // Γ generated by the product of the canonical generators, ψ the inclusion
            let x = gens.iter().skip(1).fold(gens[0].clone(), |a, b| tu.ext.mul(&a, b));
            let g = Arc::new(closure(&tu.ext, &[x], Limits::default()).unwrap());
            let ct = CharacterTuple::from_fn(g.clone(), p, 4, |y| tu.characters(y)).unwrap();
            let psi = GroupHom::from_images(&g, &tu.ext, g.generators().to_vec()).unwrap();
            let out = repeated_massey_witness(&ct, &tu, &model, &psi).unwrap();
            assert_eq!(out.len(), (p as usize - 1).pow(2));
            let first = &out[0];
            assert_eq!(first.hom.gen_images[0].n(), 2 * p as usize + 1);
            if p == 3 {
                assert_eq!(first.pattern, vec![0, 0, 1, 2, 3, 3]);
                let u3 = truncate(&first.hom, 2, 2).unwrap();
                assert_eq!(s_values(&u3.gen_images[0]), vec![ct.on_generator(0)[1], ct.on_generator(0)[2]]);
            }
        }
    }
}
