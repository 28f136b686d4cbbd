use massey_core::fpcore::{finite_field, CyclicUnits, Field, PolyQuotient};
use massey_core::variety::{eval_poly, norm_form, solve_finite_field, solve_norm_form, vandermonde_solve};
use proptest::prelude::*;

fn field() -> impl Strategy<Value = (u64, u32)> {
    prop::sample::select(vec![(7u64, 3u32), (4, 3), (13, 3), (5, 2), (9, 2), (11, 5)])
}

fn zeta(q: u64, p: u32) -> (massey_core::fpcore::Fq, massey_core::fpcore::FqElem) {
    let f = finite_field(q).unwrap();
    let z = CyclicUnits::new(f.clone()).gen_pow(((q - 1) / p as u64) as i64);
    (f, z)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn interpolation_recovers_polynomials(q in prop::sample::select(vec![7u64, 8, 9, 13, 16]), coeffs in prop::collection::vec(0u64..16, 1..6)) {
        let f = finite_field(q).unwrap();
        let c: Vec<_> = coeffs.iter().map(|&v| f.from_index(v % q)).collect();
        prop_assume!((c.len() as u64) < q);
        let pts: Vec<_> = (0..c.len() as u64).map(|i| { let x = f.from_index(i); let y = eval_poly(&f, &c, &x); (x, y) }).collect();
        prop_assert_eq!(vandermonde_solve(&f, &pts).unwrap(), c);
    }

    #[test]
    fn norm_form_is_multiplicative(((q, p), b, x, y) in field().prop_flat_map(|(q, p)| (
        Just((q, p)), 1..q, prop::collection::vec(0..q, p as usize), prop::collection::vec(0..q, p as usize)
    ))) {
        let (f, z) = zeta(q, p);
        let b = f.from_index(b);
        let ext = PolyQuotient::binomial(f.clone(), p as usize, &b).unwrap();
        let (x, y): (Vec<_>, Vec<_>) = (x.iter().map(|&v| f.from_index(v)).collect(), y.iter().map(|&v| f.from_index(v)).collect());
        let n = |v: &[_]| norm_form(&f, &z, &b, v).unwrap();
        let nx = n(&x);
        prop_assert!(nx[1..].iter().all(|c| f.is_zero(c)));
        prop_assert_eq!(n(&ext.mul(&x, &y)), ext.mul(&nx, &n(&y)));
    }

    #[test]
    fn norm_solutions_have_the_right_norm(((q, p), b, c) in field().prop_flat_map(|(q, p)| (Just((q, p)), 1..q, 1..q))) {
        let (f, z) = zeta(q, p);
        let (b, c) = (f.from_index(b), f.from_index(c));
        let x = solve_norm_form(&f, &z, &b, &c, p as usize).unwrap();
        let ext = PolyQuotient::binomial(f.clone(), p as usize, &b).unwrap();
        prop_assert_eq!(norm_form(&f, &z, &b, &x).unwrap(), ext.constant(&c));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn solver_output_checks(((q, p), abcd) in prop::sample::select(vec![(7u64, 3u32), (4, 3), (5, 2), (9, 2), (13, 2)])
        .prop_flat_map(|(q, p)| (Just((q, p)), prop::array::uniform4(1..q))))
    {
        let r = solve_finite_field(q, p, abcd).unwrap();
        prop_assert!(r.check.holds(), "{:?}", r.check);
        prop_assert!(r.components_hold);
    }
}
