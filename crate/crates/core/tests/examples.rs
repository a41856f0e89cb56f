//! Worked examples with frozen expected values.

use serde_json::json;

use planeaut::dvr::{commutes_with_all, is_integral_aut, linearized_group, remove_pole};
use planeaut::equivariant::classify::{
    centralizer_structure_noncyclic, classify_ad_centralizer, classify_fiber_centralizer, CaseTag, DiagonalGroup,
    NoncyclicGroup, SubgroupTag,
};
use planeaut::equivariant::{build_fiber, conjugate_by_diagonal, extract_fiber, is_equivariant, FiberNormalForm, SParams};
use planeaut::family::{
    is_polynomial_family, linearize_family_generic, remove_all_poles, verify_family, verify_specialization, FamilyAction,
};
use planeaut::fields::{DvrContext, Elem, Field, Scalar, UniPoly};
use planeaut::group::{cyclic_reduce, linearize_over_field, verify_linearization, GroupAction, LinearRep};
use planeaut::json::{aut_from_json, endo_from_json};
use planeaut::linalg::mat2;
use planeaut::plane::{decompose_endo, PlaneAut, PlaneEndo};
use planeaut::random;

fn endo(field: &str, c1: &str, c2: &str) -> PlaneEndo {
    endo_from_json(&json!({"field": field, "components": [c1, c2]}), None).unwrap()
}

fn aut(field: &str, c1: &str, c2: &str) -> PlaneAut {
    aut_from_json(&json!({"field": field, "components": [c1, c2]}), None).unwrap()
}

fn upoly(field: &Field, coeffs: &[i64]) -> UniPoly<Elem> {
    UniPoly::new(field, coeffs.iter().map(|&c| field.int(c)).collect())
}

#[test]
fn composition_substitutes_the_inner_map() {
    let f = endo("Q", "z1 + z2^2", "z2");
    let g = endo("Q", "z2", "z1");
    let fg = f.compose(&g).unwrap();
    assert_eq!(fg, endo("Q", "z2 + z1^2", "z1"));
    let q = Field::rationals();
    let mut rng = random::rng(11);
    for _ in 0..5 {
        let pt = [random::constant(&q, &mut rng, 50), random::constant(&q, &mut rng, 50)];
        assert_eq!(fg.eval(&pt).unwrap(), f.eval(&g.eval(&pt).unwrap()).unwrap());
    }
}

#[test]
fn henon_map_has_one_syllable() {
    let f = endo("Q", "z2", "z1 + z2^2");
    let d = decompose_endo(&f).unwrap();
    assert_eq!(d.polydegree(), vec![2]);
    assert_eq!(d.recompose(), f);
}

#[test]
fn two_syllable_word_round_trips() {
    // e2∘a∘e1 with a outside the triangular group
    let e1 = endo("Q", "z1 + z2^2", "z2");
    let a = endo("Q", "z1 + 2*z2", "3*z1 + 5*z2");
    let e2 = endo("Q", "z1 + z2^3", "z2");
    let f = e2.compose(&a).unwrap().compose(&e1).unwrap();
    let d = decompose_endo(&f).unwrap();
    assert_eq!(d.polydegree(), vec![2, 3]);
    assert_eq!(d.recompose(), f);
    let inv = d.inverse();
    assert_eq!(inv.polydegree(), vec![3, 2]);
    assert!(inv.apply(&f).is_identity());
}

#[test]
fn seeded_word_inverse_composes_to_identity() {
    let f = random::tame_map(&Field::rationals(), &mut random::rng(5), &[2, 2], 9);
    let a = PlaneAut::invert(&f).unwrap();
    assert_eq!(a.polydegree(), vec![2, 2]);
    assert!(a.inverse().compose(&f).unwrap().is_identity());
}

#[test]
fn conjugated_reflection_reduces_to_affine() {
    let phi = aut("Q", "z1 + z2^2", "z2");
    let rho0 = aut("Q", "z1", "-z2");
    let g = PlaneAut::compose_all(&[&phi, &rho0, &phi.inv()]).unwrap();
    let (c, r) = cyclic_reduce(&g).unwrap();
    assert!(r.is_affine());
    let back = PlaneAut::compose_all(&[&c.inv(), &g, &c]).unwrap();
    assert_eq!(back.forward(), r.forward());
}

#[test]
fn order_three_family_linearizes_to_its_eigenvalues() {
    let field = Field::rational_functions(3, "x");
    let phi = aut("Q(zeta_3)(x)", "z1 + x*z2^2", "z2");
    let lin = aut("Q(zeta_3)(x)", "zeta*z1", "zeta^2*z2");
    let g = GroupAction::cyclic(PlaneAut::compose_all(&[&phi, &lin, &phi.inv()]).unwrap(), 3).unwrap();
    let (psi, rho) = linearize_over_field(&g).unwrap();
    assert!(verify_linearization(&psi, &g, &rho));
    let z = field.zeta();
    assert_eq!(rho.images, vec![mat2::diag(z.clone(), z.mul(&z))]);
}

#[test]
fn elementary_involution_linearizes_by_an_elementary_map() {
    let g = GroupAction::cyclic(aut("Q", "-z1 + z2^2", "z2"), 2).unwrap();
    let (psi, rho) = linearize_over_field(&g).unwrap();
    assert!(verify_linearization(&psi, &g, &rho));
    assert!(psi.polydegree().len() <= 1);
    let q = Field::rationals();
    assert_eq!(rho.images, vec![mat2::diag(q.int(-1), q.int(1))]);
    // swapping the eigenvalues must be detected
    let swapped = LinearRep { images: vec![mat2::diag(q.int(1), q.int(-1))] };
    assert!(!verify_linearization(&psi, &g, &swapped));
}

#[test]
fn fiber_normal_forms() {
    let q = Field::rationals();
    let id = SParams::identity(&q);
    let one = build_fiber(&FiberNormalForm::new(id.clone(), vec![upoly(&q, &[0, 1])])).unwrap();
    assert_eq!(one.forward(), &endo("Q", "z1 + z2^2", "z2"));
    let two = build_fiber(&FiberNormalForm::new(id, vec![upoly(&q, &[0, 1]), upoly(&q, &[0, 1])])).unwrap();
    assert_eq!(two.polydegree(), vec![2, 2]);
    let s = SParams { alpha: q.int(2), alpha_p: q.int(0), beta: q.int(3), beta_p: q.int(0) };
    let fnf = FiberNormalForm::new(s, vec![upoly(&q, &[0, 0, 1])]);
    let f = build_fiber(&fnf).unwrap();
    assert_eq!(f.polydegree(), vec![3]);
    assert_eq!(extract_fiber(&f).unwrap(), fnf);
}

#[test]
fn central_conjugation_reparametrizes() {
    let q = Field::rationals();
    let fnf = FiberNormalForm::new(SParams::identity(&q), vec![upoly(&q, &[1, 1]), upoly(&q, &[0, 0, 3])]);
    let out = conjugate_by_diagonal(&q.int(2), &q.int(2), &fnf).unwrap();
    assert_eq!(out.q, vec![upoly(&q, &[1, 2]), upoly(&q, &[0, 0, 12])]);
}

#[test]
fn order_three_quadratic_fiber() {
    let g = DiagonalGroup::cyclic(3, 2);
    let c = classify_fiber_centralizer(&[2], &g).unwrap();
    let f = &c.fibers[0];
    assert!(f.nonempty);
    assert_eq!(f.s_tag, SubgroupTag::D);
    assert_eq!(f.allowed, vec![vec![1]]);
    assert_eq!(f.exponents, vec![Some(2)]);
}

#[test]
fn order_three_centralizer_cases() {
    let g = DiagonalGroup::cyclic(3, 2);
    let c = classify_ad_centralizer(&[2], &g).unwrap();
    assert_eq!(c.case, CaseTag::TwoFibers);
    let live: Vec<_> = c.fibers.iter().filter(|f| f.nonempty).map(|f| f.anchors).collect();
    assert_eq!(live, vec![(false, false), (true, true)]);
    // m = 2: the diagonal fibers are empty, the mixed ones are not (brute force agrees)
    let c = classify_ad_centralizer(&[2, 2], &g).unwrap();
    let live: Vec<_> = c.fibers.iter().filter(|f| f.nonempty).map(|f| f.anchors).collect();
    assert_eq!(live, vec![(true, false), (false, true)]);
    assert_eq!(classify_ad_centralizer(&[2], &DiagonalGroup::torus(2, 1)).unwrap().case, CaseTag::SingleFiber);
}

#[test]
fn torus_centralizers() {
    let c = |a, b| centralizer_structure_noncyclic(&NoncyclicGroup::Torus(a, b)).unwrap();
    assert_eq!(c(1, 1).case, CaseTag::AffineGl2G);
    let (t21, t12) = (c(2, 1), c(1, 2));
    assert_eq!((t21.case, t21.v, t21.swapped), (CaseTag::OneParameterFamily, Some(2), false));
    assert_eq!((t12.case, t12.v, t12.swapped), (CaseTag::OneParameterFamily, Some(2), true));
}

#[test]
fn even_shear_commutes_with_the_second_reflection() {
    let f = endo("Q", "z1 + z2^2", "z2");
    let q = Field::rationals();
    let second = GroupAction::linear(&[mat2::diag(q.int(1), q.int(-1))], Some(vec![2])).unwrap();
    let first = GroupAction::linear(&[mat2::diag(q.int(-1), q.int(1))], Some(vec![2])).unwrap();
    assert!(is_equivariant(&f, &second));
    assert!(!is_equivariant(&f, &first));
}

#[test]
fn simple_pole_is_removed() {
    let field = Field::rational_functions(1, "x");
    let psi = aut("Q(x)", "z1 + z2^2/x", "z2");
    let q = Field::rationals();
    let rho = LinearRep { images: vec![mat2::diag(q.int(1), q.int(-1))] };
    let g = GroupAction::cyclic(PlaneAut::compose_all(&[&psi.inv(), &rho.over(&field).as_auts()[0], &psi]).unwrap(), 2)
        .unwrap();
    let ctx = DvrContext::new(field.rf_ctx().unwrap().clone(), field.base_field().int(0).as_cyclo().unwrap());
    let (alpha, psi_t, trace) = remove_pole(&psi, &rho, &ctx).unwrap();
    // the scalar normalization at the start raises w before the two steps
    assert_eq!(trace.w_sequence(&ctx), vec![4, 1, 0]);
    assert!(commutes_with_all(&alpha, &linearized_group(&psi, &rho).unwrap()).unwrap());
    assert!(is_integral_aut(&psi_t, &ctx));
    assert!(verify_linearization(&psi_t, &g, &rho));
}

fn family(gen: PlaneAut, order: u32) -> FamilyAction {
    FamilyAction::new(GroupAction::cyclic(gen, order).unwrap(), vec![]).unwrap()
}

#[test]
fn cubic_shear_family_pipeline() {
    let phi = aut("Q(x)", "z1 + x*z2^3", "z2");
    let rho0 = aut("Q(x)", "-z1", "z2");
    let nu = family(PlaneAut::compose_all(&[&phi, &rho0, &phi.inv()]).unwrap(), 2);
    let (psi, rho) = linearize_family_generic(&nu).unwrap();
    assert!(verify_linearization(&psi, &nu.group, &rho));
    let report = remove_all_poles(&psi, &rho, &nu).unwrap();
    assert!(report.verified && verify_family(&report, &nu));
    assert!(is_polynomial_family(&report.psi));
    let q = Field::rationals();
    let mut rng = random::rng(3);
    for _ in 0..10 {
        let a = random::constant(&q, &mut rng, 40).as_cyclo().unwrap();
        assert!(verify_specialization(&report, &nu, &a).unwrap());
    }
    let mut tampered = report.clone();
    tampered.psi = PlaneAut::identity(nu.field());
    assert!(!verify_family(&tampered, &nu));
}

#[test]
fn cyclotomic_family_keeps_its_eigenvalues() {
    let field = Field::rational_functions(3, "x");
    let phi = aut("Q(zeta_3)(x)", "z1 + x*z2^2", "z2");
    let lin = aut("Q(zeta_3)(x)", "zeta*z1", "zeta^2*z2");
    let nu = family(PlaneAut::compose_all(&[&phi, &lin, &phi.inv()]).unwrap(), 3);
    let (psi, rho) = linearize_family_generic(&nu).unwrap();
    let k = field.base_field();
    let z = k.zeta();
    assert_eq!(rho.images, vec![mat2::diag(z.clone(), z.mul(&z))]);
    let report = remove_all_poles(&psi, &rho, &nu).unwrap();
    assert!(report.verified);
}

#[test]
fn pole_of_a_shear_linearizer_is_cleared() {
    // ψ⁻¹∘diag(1,-1)∘ψ = (z1, -z2), a constant family, with ψ carrying a pole at 0
    let psi = aut("Q(x)", "z1 + z2^2/x", "z2");
    let nu = family(aut("Q(x)", "z1", "-z2"), 2);
    let q = Field::rationals();
    let rho = LinearRep { images: vec![mat2::diag(q.int(1), q.int(-1))] };
    let report = remove_all_poles(&psi, &rho, &nu).unwrap();
    assert_eq!(report.poles_removed, vec![q.int(0).as_cyclo().unwrap()]);
    assert!(report.verified && is_polynomial_family(&report.psi));
}
