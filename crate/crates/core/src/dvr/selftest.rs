use std::collections::BTreeMap;

use rand::Rng;

use super::{
    coordinate_mate, endo_valuation, is_integral_aut, linearized_group, perturbation_bound, remove_pole,
    commutes_with_all,
};
use crate::error::{Error, Result};
use crate::fields::{Cyclo, DvrContext, Elem, Field, Scalar, UniPoly};
use crate::group::LinearRep;
use crate::linalg::mat2;
use crate::plane::{AffineMap, ElementaryMap, PlaneAut, PlaneEndo};
use crate::poly::{BiPoly, Mono};
use crate::random::{self, TestRng};
use crate::selftest::SuiteReport;

/// A pole-carrying linearizer ψ = β∘χ of the group χ⁻¹∘ρ∘χ, with β equivariant.
#[derive(Clone, Debug)]
pub struct KrInstance {
    pub label: String,
    pub rho: LinearRep,
    pub psi: PlaneAut,
    pub group: Vec<PlaneAut>,
    pub ctx: DvrContext,
}

pub fn local_ring_at_zero(field: &Field) -> DvrContext {
    DvrContext::new(field.rf_ctx().expect("function field").clone(), Cyclo::zero(field.base()))
}

fn lift(aut: &PlaneEndo, target: &Field) -> Result<PlaneAut> {
    PlaneAut::invert(&aut.map_coeffs(target, |c| target.coerce(c.clone())))
}

/// n·x^{−e} with n a nonzero constant.
fn polar(field: &Field, rng: &mut TestRng, e: i64) -> Elem {
    random::nonzero_constant(field, rng, 4).mul(&field.x().powi(-e).expect("nonzero"))
}

fn shear1(c: Elem, power: usize) -> Result<PlaneAut> {
    let field = c.field();
    let mut coeffs = vec![Elem::zero(&field); power + 1];
    coeffs[power] = c;
    Ok(PlaneAut::from_elementary(&ElementaryMap::shear(UniPoly::new(&field, coeffs))))
}

/// (z₁, z₂ + c·z₁^power).
fn shear2(c: Elem, power: usize) -> Result<PlaneAut> {
    let tau = PlaneAut::swap(&c.field());
    PlaneAut::compose_all(&[&tau, &shear1(c, power)?, &tau])
}

/// One equivariant pole-carrying factor for each group shape.
fn bad_factor(kind: usize, field: &Field, rng: &mut TestRng) -> Result<PlaneAut> {
    let e = rng.gen_range(1..=3);
    let c = polar(field, rng, e);
    let a = rng.gen_range(0..=1);
    let diag = PlaneAut::diagonal(field.x().powi(a)?, field.int(1))?;
    let core = match kind {
        // diag(−1, 1): z₂ + c·z₁²
        0 => shear2(c, 2)?,
        // −id: odd shears, or any linear map
        1 => {
            if rng.gen_bool(0.5) {
                shear1(c, 3)?
            } else {
                let one = Elem::one(field);
                PlaneAut::from_affine(AffineMap::linear([[one.clone(), c], [Elem::zero(field), one]])?)
            }
        }
        // diag(ζ, ζ²) over ℚ(ζ₃)
        2 => {
            if rng.gen_bool(0.5) {
                shear1(c, 2)?
            } else {
                shear2(c, 2)?
            }
        }
        // torus of weight (2, 1)
        _ => shear1(c, 2)?,
    };
    core.compose(&diag)
}

pub fn kr_corpus(seed: u64) -> Result<Vec<KrInstance>> {
    let mut rng = random::rng(seed ^ 0x4b52);
    let mut out = Vec::new();
    for i in 0..50 {
        let kind = i % 4;
        let k = if kind == 2 { 3 } else { 1 };
        let field = Field::rational_functions(k, "x");
        let kappa = field.base_field();
        let ctx = local_ring_at_zero(&field);
        let images = match kind {
            0 => vec![mat2::diag(kappa.int(-1), kappa.int(1))],
            1 => vec![mat2::diag(kappa.int(-1), kappa.int(-1))],
            2 => {
                let z = kappa.zeta();
                vec![mat2::diag(z.clone(), z.mul(&z))]
            }
            _ => vec![mat2::diag(kappa.int(4), kappa.int(2))],
        };
        let rho = LinearRep { images };
        let chi = lift(&random::tame_map(&kappa, &mut rng, &[2], 3), &field)?;
        let beta = bad_factor(kind, &field, &mut rng)?;
        let psi = beta.compose(&chi)?;
        let group = linearized_group(&chi, &rho)?;
        let label = ["diag(-1,1)", "-id", "diag(z3,z3^2)", "torus(2,1)"][kind].to_string();
        out.push(KrInstance { label, rho, psi, group, ctx });
    }
    Ok(out)
}

pub fn kr_suite(seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("kr");
    let corpus = match kr_corpus(seed) {
        Ok(c) => c,
        Err(e) => {
            r.fail(format!("corpus: {e}"));
            return r;
        }
    };
    let mut steps_total = 0;
    for (i, inst) in corpus.iter().enumerate() {
        let res = (|| -> Result<()> {
            let (alpha, psi_t, trace) = remove_pole(&inst.psi, &inst.rho, &inst.ctx)?;
            steps_total += trace.steps.len();
            let ws = trace.w_sequence(&inst.ctx);
            r.check(ws.windows(2).all(|p| p[0] > p[1]) && ws.last() == Some(&0), || {
                format!("instance {i} ({}): w sequence {ws:?}", inst.label)
            });
            let rho_auts = inst.rho.over(inst.psi.field()).as_auts();
            for (j, st) in trace.steps.iter().enumerate() {
                r.check(commutes_with_all(&st.conjugate, &rho_auts)?, || format!("instance {i}: step {j} not equivariant"));
            }
            r.check(commutes_with_all(&alpha, &inst.group)?, || format!("instance {i}: total α not equivariant"));
            r.check(is_integral_aut(&psi_t, &inst.ctx), || format!("instance {i}: output not integral"));
            let relinearized = linearized_group(&psi_t, &inst.rho)?;
            let same = relinearized.iter().zip(&inst.group).all(|(a, b)| a.forward() == b.forward());
            r.check(same, || format!("instance {i}: output does not linearize the group"));
            Ok(())
        })();
        if let Err(e) = res {
            r.fail(format!("instance {i} ({}): {e}", inst.label));
        }
    }
    r.notes.push(format!("{steps_total} descent steps over {} instances", corpus.len()));
    r
}

/// Tuples, innermost first, with integral composition: (α⁻¹∘γ, α), (β⁻¹∘γ, α⁻¹∘β, α), and a
/// few integral pairs.
pub fn perturbation_corpus(seed: u64) -> Result<Vec<Vec<PlaneEndo>>> {
    let mut rng = random::rng(seed ^ 0x5054);
    let field = Field::rational_functions(1, "x");
    let one = Elem::one(&field);
    let mut out = Vec::new();
    for i in 0..20 {
        let integral = |rng: &mut TestRng| -> Result<PlaneAut> {
            let c = random::constant(&field, rng, 3).add(&random::constant(&field, rng, 3).mul(&field.x()));
            let b = random::nonzero_constant(&field, rng, 3);
            let s = shear1(c, 2)?;
            let d = PlaneAut::diagonal(one.clone(), b)?;
            s.compose(&d)
        };
        if i < 4 {
            out.push(vec![integral(&mut rng)?.forward().clone(), integral(&mut rng)?.forward().clone()]);
            continue;
        }
        let e = 1 + (i % 2) as i64;
        let a = shear1(polar(&field, &mut rng, e), 2)?;
        let gamma = integral(&mut rng)?;
        if i % 5 == 4 {
            let b = PlaneAut::diagonal(polar(&field, &mut rng, 1), field.x())?;
            out.push(vec![
                b.inv().compose(&gamma)?.forward().clone(),
                a.inv().compose(&b)?.forward().clone(),
                a.forward().clone(),
            ]);
        } else {
            out.push(vec![a.inv().compose(&gamma)?.forward().clone(), a.forward().clone()]);
        }
    }
    Ok(out)
}

/// Coefficients as sparse Laurent polynomials in t = x: exponent ↦ constant.
type Laurent = BTreeMap<i64, Cyclo>;
/// Bivariate polynomial with Laurent coefficients.
type LPoly = BTreeMap<Mono, Laurent>;

fn laurent_of(c: &Elem) -> Option<Laurent> {
    let mut out = Laurent::new();
    match c {
        Elem::C(c) => {
            if !c.is_zero() {
                out.insert(0, c.clone());
            }
        }
        Elem::R(r) => {
            // the denominator must be a monomial c·x^e
            let den = r.den();
            let e = den.degree()?;
            if den.coeffs()[..e].iter().any(|c| !c.is_zero()) {
                return None;
            }
            let inv = den.coeffs()[e].inv().ok()?;
            for (i, c) in r.num().coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.insert(i as i64 - e as i64, c.mul(&inv));
                }
            }
        }
    }
    Some(out)
}

fn lpoly_of(p: &BiPoly) -> Option<LPoly> {
    p.terms().iter().map(|(m, c)| laurent_of(c).map(|l| (*m, l))).collect()
}

fn laurent_add_into(acc: &mut Laurent, e: i64, c: Cyclo) {
    let slot = acc.entry(e).or_insert_with(|| Cyclo::zero(c.field()));
    *slot = slot.add(&c);
    if slot.is_zero() {
        acc.remove(&e);
    }
}

fn lpoly_mul(a: &LPoly, b: &LPoly) -> LPoly {
    let mut out = LPoly::new();
    for (ma, la) in a {
        for (mb, lb) in b {
            let slot = out.entry(Mono(ma.0 + mb.0, ma.1 + mb.1)).or_default();
            for (ea, ca) in la {
                for (eb, cb) in lb {
                    laurent_add_into(slot, ea + eb, ca.mul(cb));
                }
            }
        }
    }
    out.retain(|_, l| !l.is_empty());
    out
}

fn lpoly_one(field: &Field) -> LPoly {
    [(Mono(0, 0), [(0, Cyclo::one(field.base()))].into_iter().collect())].into_iter().collect()
}

/// outer(inner₁, inner₂).
fn lpoly_compose(outer: &[LPoly; 2], inner: &[LPoly; 2], field: &Field) -> [LPoly; 2] {
    let mut pows: [Vec<LPoly>; 2] = [vec![lpoly_one(field)], vec![lpoly_one(field)]];
    let mut out = [LPoly::new(), LPoly::new()];
    for (c, comp) in outer.iter().enumerate() {
        for (m, coeff) in comp {
            for v in 0..2 {
                let e = if v == 0 { m.0 } else { m.1 } as usize;
                while pows[v].len() <= e {
                    let next = lpoly_mul(pows[v].last().unwrap(), &inner[v]);
                    pows[v].push(next);
                }
            }
            let prod = lpoly_mul(&pows[0][m.0 as usize], &pows[1][m.1 as usize]);
            for (mm, l) in prod {
                let slot = out[c].entry(mm).or_default();
                for (e, x) in &l {
                    for (e2, y) in coeff {
                        laurent_add_into(slot, e + e2, x.mul(y));
                    }
                }
            }
        }
        out[c].retain(|_, l| !l.is_empty());
    }
    out
}

fn lpoly_valuation(p: &[LPoly; 2]) -> Option<i64> {
    p.iter().flat_map(|c| c.values()).filter_map(|l| l.keys().next().copied()).min()
}

/// α + t^r·P with P supported on monomials of degree ≤ top, small integer coefficients.
fn perturb(a: &[LPoly; 2], field: &Field, top: u32, r: i64, rng: &mut TestRng) -> [LPoly; 2] {
    let mut out = a.clone();
    for comp in out.iter_mut() {
        for d in 0..=top {
            for i in 0..=d {
                let n = rng.gen_range(-3i64..=3);
                if n != 0 && rng.gen_bool(0.5) {
                    let c = Cyclo::from_rational(field.base(), num_rational::BigRational::from_integer(n.into()));
                    laurent_add_into(comp.entry(Mono(i, d - i)).or_default(), r, c);
                }
            }
            comp.retain(|_, l| !l.is_empty());
        }
    }
    out
}

fn chain_valuation(maps: &[[LPoly; 2]], field: &Field) -> Option<i64> {
    let mut acc = maps[0].clone();
    for m in &maps[1..] {
        acc = lpoly_compose(m, &acc, field);
    }
    lpoly_valuation(&acc)
}

pub fn perturbation_suite(seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("perturbation");
    let mut rng = random::rng(seed ^ 0x7072);
    let corpus = match perturbation_corpus(seed) {
        Ok(c) => c,
        Err(e) => {
            r.fail(format!("corpus: {e}"));
            return r;
        }
    };
    let mut broken_below = 0;
    let mut radii = Vec::new();
    for (i, tuple) in corpus.iter().enumerate() {
        let field = tuple[0].field().clone();
        let ctx = local_ring_at_zero(&field);
        let res = (|| -> Result<()> {
            let bound = perturbation_bound(tuple, &ctx)?;
            radii.push(bound);
            let integral_inputs = tuple.iter().all(|a| endo_valuation(a, &ctx).is_ok_and(|v| v >= 0));
            if integral_inputs {
                r.check(bound == 0, || format!("tuple {i}: integral inputs gave r = {bound}"));
            }
            let sparse: Vec<[LPoly; 2]> = tuple
                .iter()
                .map(|a| Some([lpoly_of(&a.p1)?, lpoly_of(&a.p2)?]))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Schema("coefficient is not a Laurent polynomial".into()))?;
            let top = tuple.iter().map(|a| a.degree().unwrap_or(0)).max().unwrap_or(0);
            for _ in 0..50 {
                let perturbed: Vec<[LPoly; 2]> = sparse.iter().map(|a| perturb(a, &field, top, bound, &mut rng)).collect();
                let v = chain_valuation(&perturbed, &field);
                r.check(v.is_none_or(|v| v >= 0), || format!("tuple {i}: perturbation at r = {bound} gave valuation {v:?}"));
            }
            if bound >= 1 {
                let perturbed: Vec<[LPoly; 2]> =
                    sparse.iter().map(|a| perturb(a, &field, top, bound - 1, &mut rng)).collect();
                if chain_valuation(&perturbed, &field).is_some_and(|v| v < 0) {
                    broken_below += 1;
                }
            }
            Ok(())
        })();
        if let Err(e) = res {
            r.fail(format!("tuple {i}: {e}"));
        }
    }
    r.notes.push(format!("radii {radii:?}; {broken_below} tuples lost integrality at radius r − 1"));
    r
}

pub fn negative_checks(checks: &mut usize, failures: &mut Vec<String>) {
    let k = Field::rationals();
    let z1z2 = BiPoly::from_terms(&k, [(Mono(1, 1), k.int(1))]);
    let trivial = LinearRep { images: vec![mat2::identity(&k)] };
    *checks += 1;
    if !matches!(coordinate_mate(&z1z2, &trivial), Err(Error::NotACoordinate(_))) {
        failures.push("coordinate_mate accepted z1*z2".into());
    }
}
