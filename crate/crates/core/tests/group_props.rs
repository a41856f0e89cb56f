use proptest::prelude::*;

use planeaut::fields::Field;
use planeaut::group::{linearize_over_field, verify_linearization, GroupAction};
use planeaut::linalg::mat2;
use planeaut::plane::{AffineMap, PlaneAut};
use planeaut::random;

/// Finite-order linear maps with their orders; the field must contain the eigenvalues.
fn linear_model(which: u8) -> (Field, mat2::Mat2, u32) {
    match which {
        0 => {
            let f = Field::rationals();
            (f.clone(), mat2::diag(f.int(-1), f.int(1)), 2)
        }
        1 => {
            let f = Field::cyclotomic(4);
            (f.clone(), [[f.int(0), f.int(-1)], [f.int(1), f.int(0)]], 4)
        }
        _ => {
            let f = Field::cyclotomic(3);
            let z = f.zeta();
            (f.clone(), mat2::diag(z.clone(), z.powi(2).unwrap()), 3)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn conjugated_linear_groups_linearize(which in 0u8..3, pd in prop::collection::vec(2u32..=3, 0..=2), seed in any::<u64>()) {
        let (field, m, n) = linear_model(which);
        let phi = PlaneAut::invert(&random::tame_map(&field, &mut random::rng(seed), &pd, 3)).unwrap();
        let lin = PlaneAut::from_affine(AffineMap::linear(m).unwrap());
        let g = GroupAction::cyclic(phi.compose(&lin).unwrap().compose(&phi.inv()).unwrap(), n).unwrap();
        let (psi, rho) = linearize_over_field(&g).unwrap();
        prop_assert!(verify_linearization(&psi, &g, &rho));
        for img in &rho.images {
            prop_assert!(mat2::is_identity(&mat2::pow(img, n)));
        }
    }
}
