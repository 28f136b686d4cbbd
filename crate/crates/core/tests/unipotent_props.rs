use massey_core::fpcore::FpMatrix;
use massey_core::unipotent::{project, s_proj, section, sn_act, split_section, Side, SnElement, UniMatrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn uni(p: u32, n: usize) -> impl Strategy<Value = UniMatrix> {
    any::<u64>().prop_map(move |s| UniMatrix::random(p, n, &mut ChaCha8Rng::seed_from_u64(s)))
}

fn sn(p: u32) -> impl Strategy<Value = SnElement> {
    prop::collection::vec(0..p as i64, 4)
        .prop_map(move |v| SnElement::new(p, 5, FpMatrix::from_rows(p, &[v[..2].to_vec(), v[2..].to_vec()]).unwrap()).unwrap())
}

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5])
}

proptest! {
    #[test]
    fn s_maps_are_homomorphisms((p, g, h) in prime().prop_flat_map(|p| (Just(p), uni(p, 5), uni(p, 5)))) {
        let gh = g.mul(&h);
        for i in 1..5 {
            prop_assert_eq!(s_proj(&gh, i).unwrap(), s_proj(&g, i).unwrap() + s_proj(&h, i).unwrap());
        }
        prop_assert_eq!(g.mul(&g.inv()), UniMatrix::identity(p, 5));
    }

    #[test]
    fn projections_are_homomorphisms((g, h) in prime().prop_flat_map(|p| (uni(p, 5), uni(p, 5)))) {
        for side in [Side::Head, Side::Tail] {
            prop_assert_eq!(project(&g.mul(&h), side), project(&g, side).mul(&project(&h, side)));
        }
    }

    #[test]
    fn text_format_round_trips(g in prime().prop_flat_map(|p| uni(p, 5))) {
        prop_assert_eq!(UniMatrix::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn s5_is_elementary_abelian((p, a, b) in prime().prop_flat_map(|p| (Just(p), sn(p), sn(p)))) {
        let (x, y) = (a.to_matrix(), b.to_matrix());
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        let mut acc = UniMatrix::identity(p, 5);
        for _ in 0..p {
            acc = acc.mul(&x);
        }
        prop_assert!(acc.is_identity());
    }

    #[test]
    fn sn_act_is_an_action(
        (g1, g2, k1, k2, h) in prime().prop_flat_map(|p| (uni(p, 3), uni(p, 3), uni(p, 3), uni(p, 3), sn(p)))
    ) {
        let lhs = sn_act(&g1.mul(&k1), &g2.mul(&k2), &h).unwrap();
        let rhs = sn_act(&g1, &g2, &sn_act(&k1, &k2, &h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn split_section_inverts_the_section(
        (g1, g2, h) in prime().prop_flat_map(|p| (uni(p, 3), uni(p, 3), sn(p)))
    ) {
        let g = h.to_matrix().mul(&section(&g1, &g2));
        prop_assert_eq!(split_section(&g), (h, g1, g2));
    }
}
