use proptest::prelude::*;

use planeaut::dvr::{commutes_with_all, is_integral_aut, linearized_group, remove_pole};
use planeaut::family::{
    is_polynomial_family, linearize_family_generic, pole_set, remove_all_poles, verify_specialization, FamilyAction,
};
use planeaut::fields::{Cyclo, DvrContext, Elem, Field, Scalar, UniPoly};
use planeaut::group::{verify_linearization, GroupAction, LinearRep};
use planeaut::linalg::mat2;
use planeaut::plane::{ElementaryMap, PlaneAut};
use planeaut::random;

fn qx() -> Field {
    Field::rational_functions(1, "x")
}

/// (z1 + Σ c_j z2^j, z2).
fn shear(field: &Field, coeffs: &[(usize, Elem)]) -> PlaneAut {
    let top = coeffs.iter().map(|(j, _)| *j).max().unwrap_or(0);
    let mut p = vec![Elem::zero(field); top + 1];
    for (j, c) in coeffs {
        p[*j] = p[*j].add(c);
    }
    PlaneAut::from_elementary(&ElementaryMap::shear(UniPoly::new(field, p)))
}

/// Tame map over ℚ, read over ℚ(x).
fn constant_chart(field: &Field, seed: u64) -> PlaneAut {
    let q = Field::rationals();
    let g = PlaneAut::invert(&random::tame_map(&q, &mut random::rng(seed), &[2], 3)).unwrap();
    g.map_coeffs(field, |c| field.coerce(c.clone())).unwrap()
}

fn center(field: &Field, a: i64) -> Cyclo {
    field.base_field().int(a).as_cyclo().unwrap()
}

proptest! {
    // each case expands the full α; the kr acceptance suite covers 50 more instances
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn descent_reaches_an_integral_linearizer(
        n1 in -5i64..=5, n2 in -5i64..=5, e1 in 1i64..=3, e2 in 1i64..=3, seed in any::<u64>(),
    ) {
        prop_assume!(n1 != 0 || n2 != 0);
        let field = qx();
        let x = field.x();
        // equivariant for diag(1, -1): only even powers of z2
        let beta = shear(&field, &[
            (2, field.int(n1).div(&x.powi(e1).unwrap()).unwrap()),
            (4, field.int(n2).div(&x.powi(e2).unwrap()).unwrap()),
        ]);
        let psi = beta.compose(&constant_chart(&field, seed)).unwrap();
        let rho = LinearRep { images: vec![mat2::diag(Field::rationals().int(1), Field::rationals().int(-1))] };
        let g = GroupAction::cyclic(psi.inv().compose(&rho.over(&field).as_auts()[0]).unwrap().compose(&psi).unwrap(), 2).unwrap();
        let ctx = DvrContext::new(field.rf_ctx().unwrap().clone(), center(&field, 0));
        let (alpha, psi_t, trace) = remove_pole(&psi, &rho, &ctx).unwrap();
        let w = trace.w_sequence(&ctx);
        prop_assert!(w.windows(2).all(|p| p[0] > p[1]), "w trace {:?}", w);
        prop_assert_eq!(w.last(), Some(&0));
        prop_assert!(trace.steps.len() as u32 <= w[0]);
        prop_assert!(commutes_with_all(&alpha, &linearized_group(&psi, &rho).unwrap()).unwrap());
        prop_assert!(is_integral_aut(&psi_t, &ctx));
        prop_assert!(verify_linearization(&psi_t, &g, &rho));
        let composed = psi.compose(&alpha).unwrap();
        prop_assert_eq!(composed.forward(), psi_t.forward());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pole_set_finds_rational_centers(
        centers in prop::collection::btree_set(-6i64..=6, 1..=3), e in 1i64..=2,
    ) {
        let field = qx();
        let x = field.x();
        let mut den = Elem::one(&field);
        for &a in &centers {
            den = den.mul(&x.sub(&field.int(a)).powi(e).unwrap());
        }
        let psi = shear(&field, &[(2, Elem::one(&field).div(&den).unwrap())]);
        let found = pole_set(&psi);
        let mut want: Vec<Cyclo> = centers.iter().map(|&a| center(&field, a)).collect();
        want.sort_by(|a, b| a.total_cmp(b));
        prop_assert_eq!(found.centers, want);
        prop_assert!(found.nonrational.is_empty());
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn families_specialize_coherently(c in prop::collection::vec(-4i64..=4, 1..=3), seed in any::<u64>()) {
        prop_assume!(c.iter().any(|&v| v != 0));
        let field = qx();
        let x = field.x();
        let mut cx = Elem::zero(&field);
        for (i, &v) in c.iter().enumerate() {
            cx = cx.add(&field.int(v).mul(&x.powi(i as i64).unwrap()));
        }
        // (-z1 + c(x) z2^2, z2) squares to the identity for every x
        let reflect = PlaneAut::diagonal(field.int(-1), field.int(1)).unwrap();
        let gen0 = shear(&field, &[(2, cx)]).compose(&reflect).unwrap();
        let chart = constant_chart(&field, seed);
        let gen = chart.inv().compose(&gen0).unwrap().compose(&chart).unwrap();
        let nu = FamilyAction::new(GroupAction::cyclic(gen, 2).unwrap(), vec![]).unwrap();
        let (psi, rho) = linearize_family_generic(&nu).unwrap();
        let report = remove_all_poles(&psi, &rho, &nu).unwrap();
        prop_assert!(report.verified);
        prop_assert!(report.residual_poles.is_empty());
        prop_assert!(is_polynomial_family(&report.psi));
        let mut rng = random::rng(seed);
        for _ in 0..3 {
            let a = random::constant(&field.base_field(), &mut rng, 20).as_cyclo().unwrap();
            prop_assert!(verify_specialization(&report, &nu, &a).unwrap());
        }
        let again = remove_all_poles(&report.psi, &report.rho, &nu).unwrap();
        prop_assert_eq!(again.psi.forward(), report.psi.forward());
        prop_assert!(again.poles_removed.is_empty());
    }
}
