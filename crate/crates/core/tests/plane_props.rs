use proptest::prelude::*;

use planeaut::fields::Field;
use planeaut::json::{aut_from_json, aut_to_json};
use planeaut::plane::{decompose_endo, PlaneAut, PlaneEndo};
use planeaut::poly::BiPoly;
use planeaut::random;
use planeaut::Error;

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::rationals()), Just(Field::cyclotomic(3)), Just(Field::rational_functions(1, "x"))]
}

fn polydegree() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(2u32..=4, 0..=3)
}

fn short_polydegree() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(2u32..=4, 0..=2)
}

fn tame(field: &Field, pd: &[u32], seed: u64) -> PlaneEndo {
    random::tame_map(field, &mut random::rng(seed), pd, 9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_round_trip(field in field_strategy(), pd in short_polydegree(), seed in any::<u64>()) {
        let f = tame(&field, &pd, seed);
        let a = PlaneAut::invert(&f).unwrap();
        prop_assert_eq!(a.word().recompose(), f.clone());
        prop_assert_eq!(a.polydegree(), pd.clone());
        // factor by factor keeps intermediate degrees small
        prop_assert!(a.word().inverse().apply(&f).is_identity());
        prop_assert_eq!(a.degree(), pd.iter().product::<u32>().max(1));
    }

    #[test]
    fn polydegree_two_sided_affine_invariance(pd in polydegree(), seed in any::<u64>()) {
        let field = Field::rationals();
        let mut rng = random::rng(seed ^ 1);
        let f = PlaneAut::invert(&tame(&field, &pd, seed)).unwrap();
        let a = PlaneAut::from_affine(random::affine(&field, &mut rng, 5));
        let b = PlaneAut::from_affine(random::affine(&field, &mut rng, 5));
        let h = a.compose(&f).unwrap().compose(&b).unwrap();
        prop_assert_eq!(decompose_endo(h.forward()).unwrap().polydegree(), pd.clone());
        let mut rev = pd.clone();
        rev.reverse();
        prop_assert_eq!(decompose_endo(f.inverse()).unwrap().polydegree(), rev);
    }

    #[test]
    fn composition_degree_is_submultiplicative(
        p in prop::collection::vec(2u32..=3, 0..=2),
        q in prop::collection::vec(2u32..=3, 0..=2),
        seed in any::<u64>(),
    ) {
        let field = Field::rationals();
        let f = tame(&field, &p, seed);
        let g = tame(&field, &q, seed.wrapping_add(7));
        let fg = f.compose(&g).unwrap();
        let (df, dg, dfg) = (f.degree().unwrap(), g.degree().unwrap(), fg.degree().unwrap());
        prop_assert!(dfg <= df * dg);
        // when the words concatenate without cancellation the bound is attained
        let mut joined = q.clone();
        joined.extend(&p);
        if decompose_endo(&fg).unwrap().polydegree() == joined {
            prop_assert_eq!(dfg, df * dg);
        }
    }

    #[test]
    fn json_round_trip(field in field_strategy(), pd in short_polydegree(), seed in any::<u64>()) {
        let a = PlaneAut::invert(&tame(&field, &pd, seed)).unwrap();
        let v = aut_to_json(&a);
        let back = aut_from_json(&v, None).unwrap();
        prop_assert_eq!(back.forward(), a.forward());
        prop_assert_eq!(aut_to_json(&back), v);
    }

    #[test]
    fn non_invertible_monomial_maps_are_rejected(i in 2u32..=4, seed in any::<u64>()) {
        let field = Field::rationals();
        let a = PlaneAut::invert(&tame(&field, &[2], seed)).unwrap();
        // (z1^i, z2) has Jacobian i z1^{i-1}; conjugating by a keeps it non-invertible
        let bad = PlaneEndo::new(BiPoly::monomial(&field, field.int(1), i, 0), BiPoly::z2(&field)).unwrap();
        let h = a.forward().compose(&bad).unwrap().compose(a.inverse()).unwrap();
        prop_assert!(matches!(PlaneAut::invert(&h), Err(Error::NotAnAutomorphism(_))));
    }
}
