use proptest::prelude::*;

use planeaut::equivariant::classify::one_parameter_member;
use planeaut::equivariant::{build_fiber, conjugate_by_diagonal, extract_fiber};
use planeaut::fields::Field;
use planeaut::plane::PlaneAut;
use planeaut::random;
use planeaut::selftest::random_fiber;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_forms_are_unique(d in prop::collection::vec(2u32..=4, 0..=2), seed in any::<u64>()) {
        let field = Field::cyclotomic(6);
        let fnf = random_fiber(&field, &mut random::rng(seed), &d);
        prop_assert_eq!(extract_fiber(&build_fiber(&fnf).unwrap()).unwrap(), fnf);
    }

    #[test]
    fn diagonal_conjugation_formula(d in prop::collection::vec(2u32..=4, 0..=2), seed in any::<u64>()) {
        let field = Field::cyclotomic(6);
        let mut rng = random::rng(seed);
        let fnf = random_fiber(&field, &mut rng, &d);
        let l0 = random::nonzero_constant(&field, &mut rng, 2);
        let l1 = random::nonzero_constant(&field, &mut rng, 2);
        let g = PlaneAut::diagonal(l0.clone(), l1.clone()).unwrap();
        let direct = PlaneAut::compose_all(&[&g.inv(), &build_fiber(&fnf).unwrap(), &g]).unwrap();
        prop_assert_eq!(extract_fiber(&direct).unwrap(), conjugate_by_diagonal(&l0, &l1, &fnf).unwrap());
    }

    #[test]
    fn torus_family_members_commute(v in 2u32..=4, a1 in 1i64..=5, b in -5i64..=5, a2 in 1i64..=5, t in 2i64..=4) {
        let field = Field::rationals();
        let f = one_parameter_member(&field, v, field.int(a1), field.int(b), field.int(a2)).unwrap();
        let g = PlaneAut::diagonal(field.int(t).powi(v as i64).unwrap(), field.int(t)).unwrap();
        let (fg, gf) = (f.compose(&g).unwrap(), g.compose(&f).unwrap());
        prop_assert_eq!(fg.forward(), gf.forward());
    }
}
