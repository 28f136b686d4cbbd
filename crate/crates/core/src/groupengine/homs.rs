use serde::Serialize;

use super::group::Group;
use super::store::GroupStore;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct HomLimits {
    /// Bound on visited search nodes.
    pub max_nodes: u64,
    pub max_results: usize,
}

impl Default for HomLimits {
    fn default() -> Self {
        HomLimits { max_nodes: 10_000_000, max_results: usize::MAX }
    }
}

/// A homomorphism from a materialized domain, with the image of every element.
#[derive(Clone, Debug)]
pub struct GroupHom<C: Group> {
    pub gen_images: Vec<C::Elem>,
    /// Image of domain element i.
    pub table: Vec<C::Elem>,
}

impl<C: Group> GroupHom<C> {
    /// Checks that the generator assignment extends to a homomorphism.
    pub fn from_images<D: Group>(domain: &GroupStore<D>, codomain: &C, images: Vec<C::Elem>) -> Option<Self> {
        let table = extend(domain, codomain, &images, images.len())?;
        let table = table.into_iter().map(|x| x.expect("domain generated by its generators")).collect();
        Some(GroupHom { gen_images: images, table })
    }

    pub fn image(&self, i: usize) -> &C::Elem {
        &self.table[i]
    }

    /// Composes with a map on the codomain that is assumed to be a homomorphism.
    pub fn then<E: Group>(&self, f: impl Fn(&C::Elem) -> E::Elem) -> GroupHom<E> {
        GroupHom { gen_images: self.gen_images.iter().map(&f).collect(), table: self.table.iter().map(&f).collect() }
    }
}

/// Partial map on ⟨g_0, …, g_{k−1}⟩ defined by walking the Cayley graph; None on a clash.
fn extend<D: Group, C: Group>(
    domain: &GroupStore<D>,
    codomain: &C,
    images: &[C::Elem],
    k: usize,
) -> Option<Vec<Option<C::Elem>>> {
    let gens = &domain.generator_indices()[..k];
    let mut map: Vec<Option<C::Elem>> = vec![None; domain.order()];
    map[0] = Some(codomain.identity());
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let fx = map[x].clone().expect("queued");
        for (j, &g) in gens.iter().enumerate() {
            let y = domain.mul(x, g);
            let fy = codomain.mul(&fx, &images[j]);
            match &map[y] {
                Some(v) if *v != fy => return None,
                Some(_) => {}
                None => {
                    map[y] = Some(fy);
                    queue.push(y);
                }
            }
        }
    }
    Some(map)
}

/// All homomorphisms from `domain` to the group generated inside `candidates`, subject to
/// `allowed(generator position, image)`. Results are in lexicographic order of the generator
/// images, each image list ordered by the sorted candidate pool.
pub fn enumerate_homs<D: Group, C: Group>(
    domain: &GroupStore<D>,
    codomain: &C,
    candidates: &[C::Elem],
    allowed: impl Fn(usize, &C::Elem) -> bool,
    limits: HomLimits,
) -> Result<Vec<GroupHom<C>>> {
    let k = domain.generator_indices().len();
    let mut pool: Vec<C::Elem> = candidates.to_vec();
    pool.sort();
    pool.dedup();
    let orders: Vec<u64> = pool.iter().map(|x| codomain.element_order(x)).collect();
    let per_gen: Vec<Vec<usize>> = (0..k)
        .map(|j| {
            let o = domain.group().element_order(&domain.generators()[j]);
            (0..pool.len()).filter(|&c| o % orders[c] == 0 && allowed(j, &pool[c])).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut nodes = 0u64;
    let mut images: Vec<C::Elem> = Vec::with_capacity(k);
    search(domain, codomain, &pool, &per_gen, &mut images, &mut out, &mut nodes, limits)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search<D: Group, C: Group>(
    domain: &GroupStore<D>,
    codomain: &C,
    pool: &[C::Elem],
    per_gen: &[Vec<usize>],
    images: &mut Vec<C::Elem>,
    out: &mut Vec<GroupHom<C>>,
    nodes: &mut u64,
    limits: HomLimits,
) -> Result<()> {
    let j = images.len();
    if j == per_gen.len() {
        if let Some(h) = GroupHom::from_images(domain, codomain, images.clone()) {
            out.push(h);
        }
        return Ok(());
    }
    for &c in &per_gen[j] {
        *nodes += 1;
        if *nodes > limits.max_nodes {
            return Err(Error::Resource { what: "homomorphism search".into(), partial: out.len() as u64 });
        }
        images.push(pool[c].clone());
        if extend(domain, codomain, images, j + 1).is_some() {
            search(domain, codomain, pool, per_gen, images, out, nodes, limits)?;
            if out.len() >= limits.max_results {
                images.pop();
                return Ok(());
            }
        }
        images.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupengine::{closure, CyclicGroup, Limits};
    use crate::unipotent::{s_proj, sigma, UnipotentGroup};

    #[test]
    fn trivial_domain() {
        let c1 = CyclicGroup { order: 1 };
        let d = closure(&c1, &[], Limits::default()).unwrap();
        let u3 = UnipotentGroup::new(3, 3).unwrap();
        let all = closure(&u3, &u3.sigmas(), Limits::default()).unwrap();
        let h = enumerate_homs(&d, &u3, all.elements(), |_, _| true, HomLimits::default()).unwrap();
        assert_eq!(h.len(), 1);
    }

    #[test]
    fn c3_into_u3() {
        let c3 = CyclicGroup { order: 3 };
        let d = closure(&c3, &[1], Limits::default()).unwrap();
        let u3 = UnipotentGroup::new(3, 3).unwrap();
        let all = closure(&u3, &u3.sigmas(), Limits::default()).unwrap();
        let s12 = sigma(3, 3, 1).mul(&sigma(3, 3, 2));
        assert!(u3.pow(&s12, 3).is_identity());
        let want = |_: usize, x: &crate::unipotent::UniMatrix| {
            s_proj(x, 1).unwrap().value() == 1 && s_proj(x, 2).unwrap().value() == 1
        };
        let homs = enumerate_homs(&d, &u3, all.elements(), want, HomLimits::default()).unwrap();
        // oracle: every element with s_1 = s_2 = 1 in U_3(F_3) has order 3
        let direct = all.elements().iter().filter(|x| want(0, x)).count();
        assert_eq!(homs.len(), direct);
        assert!(homs.iter().any(|h| h.gen_images[0] == s12));
        // counts for every hom C_3 → U_3(F_3): all 27 elements have order dividing 3
        let every = enumerate_homs(&d, &u3, all.elements(), |_, _| true, HomLimits::default()).unwrap();
        assert_eq!(every.len(), 27);
    }

    #[test]
    fn node_limit() {
        let c3 = CyclicGroup { order: 3 };
        let d = closure(&c3, &[1], Limits::default()).unwrap();
        let u3 = UnipotentGroup::new(3, 3).unwrap();
        let all = closure(&u3, &u3.sigmas(), Limits::default()).unwrap();
        let r = enumerate_homs(&d, &u3, all.elements(), |_, _| true, HomLimits { max_nodes: 5, max_results: 100 });
        assert!(matches!(r, Err(Error::Resource { .. })));
    }
}
