use massey_core::fpcore::{Field, FpVector};
use massey_core::localfield::{kummer_ext, Local};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field() -> impl Strategy<Value = (u64, u32)> {
    prop::sample::select(vec![(7u64, 3u32), (4, 3), (13, 3), (5, 2), (9, 2), (11, 5)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classes_are_multiplicative(((q, p), seed) in (field(), any::<u64>())) {
        let l = Local::new(q, p).unwrap();
        let f = &l.base;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let (x, y) = (f.random(&mut rng, -6..=6), f.random(&mut rng, -6..=6));
            prop_assert_eq!(f.class_of(&f.mul(&x, &y)).unwrap(), f.class_of(&x).unwrap().add(&f.class_of(&y).unwrap()));
            prop_assert_eq!(f.class_of(&f.inv(&x)).unwrap(), f.class_of(&x).unwrap().neg());
        }
    }

    #[test]
    fn symbols_are_bilinear_and_antisymmetric(((q, p), seed) in (field(), any::<u64>())) {
        let l = Local::new(q, p).unwrap();
        let f = &l.base;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let minus_one = f.monomial(f.residue().neg(&f.residue().one()), 0);
        for _ in 0..10 {
            let (x, x2, y) = (f.random(&mut rng, -5..=5), f.random(&mut rng, -5..=5), f.random(&mut rng, -5..=5));
            let s = |a: &_, b: &_| f.tame_symbol(a, b).unwrap();
            prop_assert_eq!(s(&f.mul(&x, &x2), &y), (s(&x, &y) + s(&x2, &y)) % p);
            prop_assert_eq!((s(&x, &y) + s(&y, &x)) % p, 0);
            prop_assert_eq!(s(&x, &f.mul(&minus_one, &x)), 0);
            prop_assert_eq!(s(&x, &y), l.symbol(&f.class_of(&x).unwrap(), &f.class_of(&y).unwrap()));
        }
    }

    #[test]
    fn extension_models_are_consistent(((q, p), u, t) in field().prop_flat_map(|(q, p)| (Just((q, p)), 0..p, 0..p))) {
        prop_assume!(p > 2);
        let l = Local::new(q, p).unwrap();
        let e = kummer_ext(&l, &FpVector { p, data: vec![u, t] }).unwrap();
        let c = e.checks();
        prop_assert!(c.all(), "{:?}", c);
    }
}
