use rand::Rng;

use super::{
    is_polynomial_family, linearize_family_generic, pole_set, remove_all_poles, resume, verify_family,
    verify_specialization, CentralizerShape, FamilyAction,
};
use crate::error::{Error, Result};
use crate::fields::{Cyclo, Elem, Field, Scalar, UniPoly};
use crate::group::{GroupAction, LinearRep};
use crate::linalg::mat2;
use crate::plane::{ElementaryMap, PlaneAut, PlaneEndo};
use crate::random::{self, TestRng};
use crate::selftest::SuiteReport;

/// A family ν together with a linearizer carrying poles at x = 0 and x = 1.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub label: String,
    pub nu: FamilyAction,
    pub psi: PlaneAut,
    pub rho: LinearRep,
}

fn lift(aut: &PlaneEndo, target: &Field) -> Result<PlaneAut> {
    PlaneAut::invert(&aut.map_coeffs(target, |c| target.coerce(c.clone())))
}

/// (z₁ + c·z₂^power, z₂).
pub(crate) fn shear1(c: Elem, power: usize) -> PlaneAut {
    let field = c.field();
    let mut coeffs = vec![Elem::zero(&field); power + 1];
    coeffs[power] = c;
    PlaneAut::from_elementary(&ElementaryMap::shear(UniPoly::new(&field, coeffs)))
}

/// (z₁, z₂ + c·z₁^power).
pub(crate) fn shear2(c: Elem, power: usize) -> Result<PlaneAut> {
    let tau = PlaneAut::swap(&c.field());
    PlaneAut::compose_all(&[&tau, &shear1(c, power), &tau])
}

/// Polynomial-in-x coordinate change: a random tame map over κ after an x-dependent shear.
fn parameter_chart(field: &Field, rng: &mut TestRng) -> Result<PlaneAut> {
    let kappa = field.base_field();
    let x = field.x();
    let c = random::nonzero_constant(field, rng, 3);
    let power = rng.gen_range(2..=3);
    let shear = shear1(x.add(&c), power);
    lift(&random::tame_map(&kappa, rng, &[2], 3), field)?.compose(&shear)
}

/// An equivariant factor for diagonal ρ with poles exactly at 0 and 1.
fn pole_factor(rho: &LinearRep, field: &Field, rng: &mut TestRng) -> Result<PlaneAut> {
    let x = field.x();
    let one = Elem::one(field);
    let (e0, e1) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let den = x.powi(e0)?.mul(&x.sub(&one).powi(e1)?);
    let c = random::nonzero_constant(field, rng, 4).div(&den)?;
    let eig: Vec<(Elem, Elem)> = rho
        .images
        .iter()
        .map(|m| (field.coerce(m[0][0].clone()), field.coerce(m[1][1].clone())))
        .collect();
    // z₁ + c·z₂^k commutes with diag(λ₁, λ₂) iff λ₁ = λ₂^k; symmetrically for z₂ + c·z₁^k
    let upper = |k: i64| eig.iter().all(|(l1, l2)| l2.powi(k).is_ok_and(|p| p == *l1));
    let lower = |k: i64| eig.iter().all(|(l1, l2)| l1.powi(k).is_ok_and(|p| p == *l2));
    let mut core = None;
    for k in 2..=4 {
        if upper(k) {
            core = Some(shear1(c.clone(), k as usize));
            break;
        }
        if lower(k) {
            core = Some(shear2(c.clone(), k as usize)?);
            break;
        }
    }
    let a = rng.gen_range(0..=1);
    let diag = PlaneAut::diagonal(x.powi(a)?.mul(&x.sub(&one).powi(1 - a)?), one.clone())?;
    match core {
        Some(s) => s.compose(&diag),
        None => Ok(diag),
    }
}

pub fn family_corpus(seed: u64) -> Result<Vec<FamilyInstance>> {
    let mut rng = random::rng(seed ^ 0x4641);
    let mut out = Vec::new();
    for i in 0..10 {
        let (label, k) = match i {
            0..=1 => ("Z2 diag(-1,1)", 1),
            2..=3 => ("Z2 -id", 1),
            4..=6 => ("Z3 diag(z3,z3^2)", 3),
            _ => ("torus(2,1)", 1),
        };
        let field = Field::rational_functions(k, "x");
        let chart = parameter_chart(&field, &mut rng)?;
        let group = match i {
            0..=6 => {
                let (m, n) = match i {
                    0..=1 => (mat2::diag(field.int(-1), field.int(1)), 2),
                    2..=3 => (mat2::diag(field.int(-1), field.int(-1)), 2),
                    _ => {
                        let z = field.zeta();
                        (mat2::diag(z.clone(), z.mul(&z)), 3)
                    }
                };
                let rho = GroupAction::linear(&[m], Some(vec![n]))?;
                GroupAction::cyclic(chart.inv().compose(&rho.generators[0])?.compose(&chart)?, n)?
            }
            _ => GroupAction::torus(&field, 2, 1, Some(chart.inv()))?,
        };
        let nu = FamilyAction::new(group, vec![])?;
        let (psi0, rho) = linearize_family_generic(&nu)?;
        let beta = pole_factor(&rho, &field, &mut rng)?;
        let psi = beta.compose(&psi0)?;
        out.push(FamilyInstance { label: label.to_string(), nu, psi, rho });
    }
    Ok(out)
}

fn random_point(field: &Field, rng: &mut TestRng) -> Cyclo {
    let r = num_rational::BigRational::new(rng.gen_range(-30i64..=30).into(), rng.gen_range(1i64..=7).into());
    Cyclo::from_rational(field.base(), r)
}

pub fn family_suite(seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("family");
    let corpus = match family_corpus(seed) {
        Ok(c) => c,
        Err(e) => {
            r.fail(format!("corpus: {e}"));
            return r;
        }
    };
    let mut rng = random::rng(seed ^ 0x5350);
    let mut removed = 0;
    for (i, inst) in corpus.iter().enumerate() {
        let field = inst.nu.field().clone();
        let res = (|| -> Result<()> {
            let poles = pole_set(&inst.psi);
            let (zero, one) = (Cyclo::zero(field.base()), Cyclo::one(field.base()));
            r.check(poles.centers.contains(&zero) && poles.centers.contains(&one), || {
                format!("family {i} ({}): engineered poles missing, got {:?}", inst.label, poles.centers)
            });
            let report = remove_all_poles(&inst.psi, &inst.rho, &inst.nu)?;
            removed += report.poles_removed.len();
            r.check(report.verified && verify_family(&report, &inst.nu), || {
                format!("family {i} ({}): symbolic verification failed", inst.label)
            });
            r.check(report.residual_poles.is_empty() && is_polynomial_family(&report.psi), || {
                format!("family {i} ({}): output keeps poles {:?}", inst.label, report.residual_poles)
            });
            for t in &report.traces {
                r.check(t.w_sequence.windows(2).all(|p| p[0] > p[1]) && t.w_sequence.last() == Some(&0), || {
                    format!("family {i}: w trace at {} is {:?}", t.center, t.w_sequence)
                });
            }
            if inst.label.starts_with("torus") {
                let glue = report.gluing.as_ref();
                r.check(
                    glue.is_some_and(|g| matches!(g.shape, CentralizerShape::Upper(2) | CentralizerShape::Lower(2))),
                    || format!("family {i}: torus family not glued in the weight-2 centralizer"),
                );
                if let Some(g) = glue {
                    let rho = inst.rho.over(&field).as_auts();
                    r.check(crate::dvr::commutes_with_all(&g.map, &rho)?, || format!("family {i}: gluing map not equivariant"));
                }
            }
            let mut tries = 0;
            let mut done = 0;
            while done < 10 && tries < 100 {
                tries += 1;
                let a = random_point(&field, &mut rng);
                if inst.nu.excluded.contains(&a) {
                    continue;
                }
                done += 1;
                r.check(verify_specialization(&report, &inst.nu, &a)?, || format!("family {i}: specialization at {a} fails"));
            }
            let again = resume(&report, &inst.nu)?;
            r.check(again.psi.forward() == report.psi.forward() && again.poles_removed == report.poles_removed, || {
                format!("family {i}: resuming a verified report changed it")
            });
            let rerun = remove_all_poles(&report.psi, &report.rho, &inst.nu)?;
            r.check(rerun.psi.forward() == report.psi.forward() && rerun.poles_removed.is_empty(), || {
                format!("family {i}: second pass moved the linearizer")
            });
            Ok(())
        })();
        if let Err(e) = res {
            r.fail(format!("family {i} ({}): {e}", inst.label));
        }
    }
    r.notes.push(format!("{} families, {removed} poles removed", corpus.len()));
    r
}

/// Guards that must reject: a pole at a non-rational center.
pub fn negative_checks(checks: &mut usize, failures: &mut Vec<String>) {
    let field = Field::rational_functions(1, "x");
    let res = (|| -> Result<(bool, bool)> {
        let x = field.x();
        let den = x.mul(&x).add(&field.int(1));
        let psi = shear2(Elem::one(&field).div(&den)?, 2)?;
        let poles = pole_set(&psi);
        let flagged = poles.centers.is_empty()
            && poles.warnings("x") == vec!["non-rational pole factor x^2 + 1".to_string()];
        let rho = GroupAction::linear(&[mat2::diag(field.int(-1), field.int(1))], Some(vec![2]))?;
        let nu = FamilyAction::new(rho, vec![])?;
        let lin = LinearRep { images: vec![mat2::diag(field.base_field().int(-1), field.base_field().int(1))] };
        let rejected = matches!(remove_all_poles(&psi, &lin, &nu), Err(Error::ResidualNonRationalPoles(_)));
        Ok((flagged, rejected))
    })();
    *checks += 2;
    match res {
        Ok((flagged, rejected)) => {
            if !flagged {
                failures.push("pole_set did not flag x^2 + 1 as non-rational".into());
            }
            if !rejected {
                failures.push("pole removal accepted a non-rational pole".into());
            }
        }
        Err(e) => failures.push(format!("non-rational pole check: {e}")),
    }
}
