//! Linearization of polynomial families of group actions over κ[x]: generic linearization
//! over κ(x), then removal of the finitely many poles.

pub mod selftest;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dvr::{descend, is_integral_aut};
use crate::error::{Error, Result};
use crate::fields::{Cyclo, CycloField, DvrContext, Elem, Field, KPoly, RatFunc, Scalar, UniPoly, Valuation};
use crate::group::{linearize_over_field, verify_linearization, GroupAction, GroupKind, LinearRep};
use crate::linalg;
use crate::plane::{PlaneAut, PlaneEndo};
use crate::poly::{BiPoly, Mono};

/// A group acting on the plane over κ[x]: generators are automorphisms over κ(x) whose
/// coefficients are regular away from the `excluded` points.
#[derive(Clone, Debug)]
pub struct FamilyAction {
    pub group: GroupAction,
    pub excluded: Vec<Cyclo>,
}

impl FamilyAction {
    pub fn new(group: GroupAction, mut excluded: Vec<Cyclo>) -> Result<FamilyAction> {
        if !group.field().is_function_field() {
            return Err(Error::Schema("family generators must have coefficients in κ(x)".into()));
        }
        excluded.sort_by(|a, b| a.total_cmp(b));
        excluded.dedup();
        for (i, g) in group.generators.iter().enumerate() {
            let poles = pole_set(g);
            if let Some(a) = poles.centers.iter().find(|a| !excluded.contains(a)) {
                return Err(Error::Schema(format!("generator {i} has a pole at x = {a} that is not excluded")));
            }
        }
        Ok(FamilyAction { group, excluded })
    }

    pub fn field(&self) -> &Field {
        self.group.field()
    }

    /// The action at x = a, over κ.
    pub fn specialize(&self, a: &Cyclo) -> Result<Vec<PlaneEndo>> {
        self.group.generators.iter().map(|g| specialize_endo(g.forward(), a)).collect()
    }
}

/// Poles of an automorphism over κ(x): κ-rational centers, ascending, and whatever part of
/// the denominators has no κ-rational root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleSet {
    pub centers: Vec<Cyclo>,
    pub nonrational: Vec<KPoly>,
}

impl PoleSet {
    pub fn is_empty(&self) -> bool {
        self.centers.is_empty() && self.nonrational.is_empty()
    }

    pub fn warnings(&self, var: &str) -> Vec<String> {
        self.nonrational.iter().map(|p| format!("non-rational pole factor {}", crate::json::kpoly_text(p, var))).collect()
    }
}

/// The global centralizer element used for non-cyclic groups.
#[derive(Clone, Debug)]
pub struct Gluing {
    pub shape: CentralizerShape,
    pub alpha1: Elem,
    pub alpha2: Elem,
    pub beta: Elem,
    /// c with ψ̃ = c∘ψ.
    pub map: PlaneAut,
}

/// Equivariant automorphisms of a diagonal non-cyclic action: diagonal maps, possibly with
/// one extra monomial z₂^v in the first (`Upper`) or z₁^v in the second (`Lower`) component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentralizerShape {
    Diagonal,
    Upper(u32),
    Lower(u32),
}

#[derive(Clone, Debug)]
pub struct PoleTrace {
    pub center: Cyclo,
    pub w_sequence: Vec<u32>,
    pub steps: Vec<((u32, u32), (i64, i64))>,
}

#[derive(Clone, Debug)]
pub struct LinearizationReport {
    pub psi: PlaneAut,
    pub rho: LinearRep,
    pub poles_removed: Vec<Cyclo>,
    pub residual_poles: Vec<Cyclo>,
    pub traces: Vec<PoleTrace>,
    pub gluing: Option<Gluing>,
    pub verified: bool,
}

/// Linearization over κ(x), with ρ forced to have constant entries.
pub fn linearize_family_generic(nu: &FamilyAction) -> Result<(PlaneAut, LinearRep)> {
    let (psi, rho) = linearize_over_field(&nu.group)?;
    Ok((psi, constant_rep(&rho, &nu.field().base_field())?))
}

fn constant_rep(rho: &LinearRep, kappa: &Field) -> Result<LinearRep> {
    let c = |e: &Elem| -> Result<Elem> {
        let k = match e {
            Elem::C(c) => Some(c.clone()),
            Elem::R(r) => r.as_constant(),
        };
        k.map(|c| kappa.embed(&c))
            .ok_or_else(|| Error::GroupReductionFailed("linear representation depends on the parameter".into()))
    };
    let images = rho
        .images
        .iter()
        .map(|m| Ok([[c(&m[0][0])?, c(&m[0][1])?], [c(&m[1][0])?, c(&m[1][1])?]]))
        .collect::<Result<Vec<_>>>()?;
    Ok(LinearRep { images })
}

fn denominators(f: &PlaneAut) -> Vec<KPoly> {
    let mut out: Vec<KPoly> = Vec::new();
    for c in f.forward().coefficients().chain(f.inverse().coefficients()) {
        if let Some(r) = c.as_ratfunc() {
            let d = r.den().monic();
            if !d.is_constant() && !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

/// Poles of f and f⁻¹.
pub fn pole_set(f: &PlaneAut) -> PoleSet {
    let base = f.field().base().clone();
    let mut centers: Vec<Cyclo> = Vec::new();
    let mut rest = KPoly::one(&base);
    for d in denominators(f) {
        let mut cur = d;
        for r in rational_roots(&cur) {
            let a = Cyclo::from_rational(&base, r);
            let (_, cof) = cur.split_root(&a);
            cur = cof;
            if !centers.contains(&a) {
                centers.push(a);
            }
        }
        if !cur.is_constant() {
            let sq = squarefree(&cur.monic());
            let g = rest.gcd(&sq);
            rest = rest.mul(&sq.div_exact(&g).expect("gcd divides"));
        }
    }
    centers.sort_by(|a, b| a.total_cmp(b));
    let nonrational = if rest.is_constant() { vec![] } else { vec![rest.monic()] };
    PoleSet { centers, nonrational }
}

fn squarefree(p: &KPoly) -> KPoly {
    let g = p.gcd(&p.derivative());
    if g.is_constant() {
        p.clone()
    } else {
        p.div_exact(&g).expect("gcd divides").monic()
    }
}

/// Rational roots of a polynomial with cyclotomic coefficients: the common rational roots
/// of its power-basis components.
fn rational_roots(p: &KPoly) -> Vec<BigRational> {
    let q = CycloField::rationals();
    let n = p.ctx().degree();
    let mut g: Option<KPoly> = None;
    for i in 0..n {
        let comp: Vec<Cyclo> = p
            .coeffs()
            .iter()
            .map(|c| Cyclo::from_rational(&q, c.coeffs().get(i).cloned().unwrap_or_else(BigRational::zero)))
            .collect();
        let comp = KPoly::new(&q, comp);
        if comp.is_zero() {
            continue;
        }
        g = Some(match g {
            None => comp,
            Some(h) => h.gcd(&comp),
        });
    }
    let Some(g) = g else { return vec![] };
    if g.is_constant() {
        return vec![];
    }
    let lcm = g.coeffs().iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denominator_lcm()));
    let ints: Vec<BigInt> = g
        .coeffs()
        .iter()
        .map(|c| (c.as_rational().expect("rational") * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).expect("nonzero");
    if low > 0 {
        roots.push(BigRational::zero());
    }
    let (a0, an) = (ints[low].abs(), ints[ints.len() - 1].abs());
    let (ps, qs) = (divisors(&a0), divisors(&an));
    for pn in &ps {
        for qd in &qs {
            for sign in [1i64, -1] {
                let r = BigRational::new(pn * BigInt::from(sign), qd.clone());
                if r.is_zero() || roots.contains(&r) {
                    continue;
                }
                if g.eval(&Cyclo::from_rational(&q, r.clone())).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Positive divisors by trial division. A cofactor above 10¹² left after dividing out the
/// small primes is treated as prime.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &p * &p <= m && p <= limit {
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            primes.push((p.clone(), e));
        }
        p += 1;
    }
    if m > BigInt::one() {
        primes.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Evaluate every coefficient at x = a.
pub fn specialize_endo(f: &PlaneEndo, a: &Cyclo) -> Result<PlaneEndo> {
    let kappa = f.field().base_field();
    f.try_map_coeffs(&kappa, |c| match c {
        Elem::C(c) => Ok(Elem::C(c.clone())),
        Elem::R(r) => r.eval(a).map(Elem::C),
    })
}

/// Every coefficient of ψ and ψ⁻¹ lies in κ[x].
pub fn is_polynomial_family(psi: &PlaneAut) -> bool {
    psi.forward().coefficients().chain(psi.inverse().coefficients()).all(|c| c.as_ratfunc().is_none_or(RatFunc::is_polynomial))
}

/// Removes every pole of a linearization of `nu`.
pub fn remove_all_poles(psi: &PlaneAut, rho: &LinearRep, nu: &FamilyAction) -> Result<LinearizationReport> {
    let field = nu.field().clone();
    let rho = constant_rep(rho, &field.base_field())?;
    if psi.field() != &field {
        return Err(Error::DescriptorMismatch("linearizer and family over different fields".into()));
    }
    if !verify_linearization(psi, &nu.group, &rho.over(&field)) {
        return Err(Error::NotLinearizing("ψ does not conjugate the family to ρ".into()));
    }
    let poles = pole_set(psi);
    if !poles.nonrational.is_empty() {
        let var = field.rf_ctx().map(|c| c.var.clone()).unwrap_or_else(|| "x".into());
        return Err(Error::ResidualNonRationalPoles(format!(
            "{}; enlarge the constant field so that these poles become rational",
            poles.warnings(&var).join(", ")
        )));
    }
    let shape = glue_shape(nu, &rho)?;
    let (psi_t, traces, gluing) = match shape {
        None => {
            let (p, t) = remove_sequentially(psi, &rho, &poles.centers)?;
            (p, t, None)
        }
        Some(shape) => {
            let (p, t, g) = remove_glued(psi, &rho, &poles.centers, shape)?;
            (p, t, Some(g))
        }
    };
    let residual = pole_set(&psi_t);
    let mut report = LinearizationReport {
        psi: psi_t,
        rho,
        poles_removed: poles.centers.into_iter().filter(|a| !residual.centers.contains(a)).collect(),
        residual_poles: residual.centers,
        traces,
        gluing,
        verified: false,
    };
    report.verified = verify_family(&report, nu);
    Ok(report)
}

/// Returns a verified report unchanged; otherwise reruns the pole removal on its ψ.
pub fn resume(report: &LinearizationReport, nu: &FamilyAction) -> Result<LinearizationReport> {
    if report.verified && verify_family(report, nu) {
        return Ok(report.clone());
    }
    remove_all_poles(&report.psi, &report.rho, nu)
}

fn dvr_at(field: &Field, a: &Cyclo) -> DvrContext {
    DvrContext::new(field.rf_ctx().expect("function field").clone(), a.clone())
}

fn trace_of(center: &Cyclo, trace: &crate::dvr::KRTrace, ctx: &DvrContext) -> PoleTrace {
    PoleTrace { center: center.clone(), w_sequence: trace.w_sequence(ctx), steps: trace.digest() }
}

/// One center at a time; each removal must shrink the pole set.
fn remove_sequentially(psi: &PlaneAut, rho: &LinearRep, centers: &[Cyclo]) -> Result<(PlaneAut, Vec<PoleTrace>)> {
    let field = psi.field().clone();
    let mut cur = psi.clone();
    let mut before = pole_set(&cur).centers;
    let mut traces = Vec::new();
    for a in centers {
        let ctx = dvr_at(&field, a);
        if is_integral_aut(&cur, &ctx) {
            continue;
        }
        let trace = descend(&cur, rho, &ctx)?;
        let next = trace.psi.clone();
        let after = pole_set(&next).centers;
        if after.contains(a) || after.len() >= before.len() || after.iter().any(|p| !before.contains(p)) {
            return Err(Error::IterationCap(format!(
                "pole set did not shrink at x = {a}: {} -> {}",
                before.len(),
                after.len()
            )));
        }
        traces.push(trace_of(a, &trace, &ctx));
        cur = next;
        before = after;
    }
    Ok((cur, traces))
}

/// The explicit centralizer family when the action is non-cyclic with a finite-dimensional
/// centralizer; None selects sequential removal.
fn glue_shape(nu: &FamilyAction, rho: &LinearRep) -> Result<Option<CentralizerShape>> {
    if !rho.all_diagonal() {
        return Ok(None);
    }
    let eig: Vec<(Elem, Elem)> = rho.images.iter().map(|m| (m[0][0].clone(), m[1][1].clone())).collect();
    match &nu.group.kind {
        GroupKind::Cyclic(_) => Ok(None),
        GroupKind::FiniteAbelian(orders) => {
            if image_is_cyclic(&eig, orders) {
                Ok(None)
            } else {
                Ok(Some(CentralizerShape::Diagonal))
            }
        }
        GroupKind::Torus(a, b) => {
            if *a == 0 || *b == 0 || a == b || a.signum() != b.signum() {
                return Ok(None);
            }
            let pow_matches = |x: &Elem, y: &Elem, v: u32| eig.len() == 1 && y.powi(v as i64).is_ok_and(|p| p == *x);
            let (l1, l2) = (&eig[0].0, &eig[0].1);
            let big = a.abs().max(b.abs()) as u32;
            for v in 2..=big {
                if pow_matches(l1, l2, v) {
                    return Ok(Some(CentralizerShape::Upper(v)));
                }
                if pow_matches(l2, l1, v) {
                    return Ok(Some(CentralizerShape::Lower(v)));
                }
            }
            Ok(Some(CentralizerShape::Diagonal))
        }
    }
}

/// Whether the diagonal pairs generate a cyclic group.
fn image_is_cyclic(eig: &[(Elem, Elem)], orders: &[u32]) -> bool {
    let one = Elem::one(&eig[0].0.field());
    let mut elems: Vec<(Elem, Elem)> = vec![(one.clone(), one)];
    for ((l1, l2), &n) in eig.iter().zip(orders) {
        let mut next = elems.clone();
        for e in &elems {
            let mut cur = e.clone();
            for _ in 1..n {
                cur = (cur.0.mul(l1), cur.1.mul(l2));
                if !next.contains(&cur) {
                    next.push(cur.clone());
                }
            }
        }
        elems = next;
    }
    let size = elems.len();
    elems.iter().any(|(a, b)| {
        let mut cur = (a.clone(), b.clone());
        let mut k = 1;
        while !(cur.0.is_one() && cur.1.is_one()) {
            cur = (cur.0.mul(a), cur.1.mul(b));
            k += 1;
        }
        k == size
    })
}

/// Local centralizer element at one pole, read as (A, B, E) in (A z₁ + B z₂^v, E z₂) after
/// orienting `Lower` shapes.
struct LocalFactor {
    center: Cyclo,
    a: Elem,
    b: Elem,
    e: Elem,
}

fn read_factor(c: &PlaneEndo, shape: CentralizerShape, center: &Cyclo) -> Result<LocalFactor> {
    let field = c.field().clone();
    let (p, q, swap) = match shape {
        CentralizerShape::Lower(_) => (&c.p2, &c.p1, true),
        _ => (&c.p1, &c.p2, false),
    };
    let m = |i: u32, j: u32| if swap { Mono(j, i) } else { Mono(i, j) };
    let v = match shape {
        CentralizerShape::Upper(v) | CentralizerShape::Lower(v) => Some(v),
        CentralizerShape::Diagonal => None,
    };
    let ok_p = p.terms().keys().all(|k| *k == m(1, 0) || v.is_some_and(|v| *k == m(0, v)));
    let ok_q = q.terms().keys().all(|k| *k == m(0, 1));
    if !ok_p || !ok_q {
        return Err(Error::GroupReductionFailed(format!(
            "local equivariant factor at x = {center} lies outside the centralizer family"
        )));
    }
    let get = |poly: &BiPoly, mono: Mono| poly.terms().get(&mono).cloned().unwrap_or_else(|| Elem::zero(&field));
    Ok(LocalFactor {
        center: center.clone(),
        a: get(p, m(1, 0)),
        b: v.map(|v| get(p, m(0, v))).unwrap_or_else(|| Elem::zero(&field)),
        e: get(q, m(0, 1)),
    })
}

fn val(e: &Elem, a: &Cyclo) -> Valuation {
    crate::fields::valuation_lenient(e, a)
}

fn t_power(field: &Field, a: &Cyclo, n: i64) -> Result<Elem> {
    let t = field.x().sub(&field.embed(a));
    t.powi(n)
}

/// Per-pole removal (independent, run concurrently), then one global element of the
/// centralizer family matching every local answer up to a unit.
fn remove_glued(
    psi: &PlaneAut,
    rho: &LinearRep,
    centers: &[Cyclo],
    shape: CentralizerShape,
) -> Result<(PlaneAut, Vec<PoleTrace>, Gluing)> {
    let field = psi.field().clone();
    let results: Vec<Result<(PlaneAut, PoleTrace)>> = std::thread::scope(|s| {
        let handles: Vec<_> = centers
            .iter()
            .map(|a| {
                let field = &field;
                s.spawn(move || {
                    let ctx = dvr_at(field, a);
                    let trace = descend(psi, rho, &ctx)?;
                    Ok((trace.left.clone(), trace_of(a, &trace, &ctx)))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("pole removal worker panicked")).collect()
    });
    let mut factors = Vec::new();
    let mut traces = Vec::new();
    for (a, r) in centers.iter().zip(results) {
        let (c, trace) = r?;
        factors.push(read_factor(c.forward(), shape, a)?);
        traces.push(trace);
    }
    let mut alpha1 = Elem::one(&field);
    let mut alpha2 = Elem::one(&field);
    for f in &factors {
        let (va, ve) = (finite(val(&f.a, &f.center))?, finite(val(&f.e, &f.center))?);
        alpha1 = alpha1.mul(&t_power(&field, &f.center, va)?);
        alpha2 = alpha2.mul(&t_power(&field, &f.center, ve)?);
    }
    let v = match shape {
        CentralizerShape::Upper(v) | CentralizerShape::Lower(v) => v,
        CentralizerShape::Diagonal => 0,
    };
    let beta = if v == 0 { Elem::zero(&field) } else { interpolate_beta(&field, &factors, &alpha1, v)? };
    let (z1, z2) = (BiPoly::z1(&field), BiPoly::z2(&field));
    let mono = |i, j| BiPoly::monomial(&field, beta.clone(), i, j);
    let endo = match shape {
        CentralizerShape::Lower(v) => PlaneEndo::new(z1.scale(&alpha2), z2.scale(&alpha1).add(&mono(v, 0)))?,
        CentralizerShape::Upper(v) => PlaneEndo::new(z1.scale(&alpha1).add(&mono(0, v)), z2.scale(&alpha2))?,
        CentralizerShape::Diagonal => PlaneEndo::new(z1.scale(&alpha1), z2.scale(&alpha2))?,
    };
    // `Lower` was read with the components swapped; undo that for the reported units
    let (alpha1, alpha2) = match shape {
        CentralizerShape::Lower(_) => (alpha2, alpha1),
        _ => (alpha1, alpha2),
    };
    let map = PlaneAut::invert(&endo)?;
    let psi_t = map.compose(psi)?;
    Ok((psi_t, traces, Gluing { shape, alpha1, alpha2, beta, map }))
}

fn finite(v: Valuation) -> Result<i64> {
    v.finite().ok_or_else(|| Error::GroupReductionFailed("local factor has a vanishing diagonal entry".into()))
}

/// β with v_a(β − T_a) ≥ v·v_a(E_a) at every center, T_a = α₁·B_a/A_a, and no other poles.
/// Written as P/D with D = Π (x−a)^{m_a}; P solves the Hermite conditions.
fn interpolate_beta(field: &Field, factors: &[LocalFactor], alpha1: &Elem, v: u32) -> Result<Elem> {
    let kappa = field.base_field();
    let mut targets = Vec::new();
    let mut den = Elem::one(field);
    let mut ms = Vec::new();
    for f in factors {
        let t = alpha1.mul(&f.b).div(&f.a)?;
        let n = v as i64 * finite(val(&f.e, &f.center))?;
        let m = match val(&t, &f.center) {
            Valuation::Finite(vt) => 0.max(-vt),
            Valuation::Infinity => 0,
        };
        den = den.mul(&t_power(field, &f.center, m)?);
        ms.push((m, n));
        targets.push(t);
    }
    // conditions: Taylor coefficients of D·T_a at a, orders 0..K_a
    let mut rows: Vec<(Cyclo, usize, Cyclo)> = Vec::new();
    for ((f, t), (m, n)) in factors.iter().zip(&targets).zip(&ms) {
        let k = m + n;
        if k <= 0 {
            continue;
        }
        let dt = den.mul(t);
        let taylor = match dt.as_ratfunc() {
            Some(r) => r.taylor(&f.center, k as usize)?,
            None => {
                let c = dt.as_cyclo().expect("constant");
                let mut v = vec![Cyclo::zero(field.base()); k as usize];
                v[0] = c;
                v
            }
        };
        for (j, c) in taylor.into_iter().enumerate() {
            rows.push((f.center.clone(), j, c));
        }
    }
    if rows.is_empty() {
        return Ok(Elem::zero(field));
    }
    let ncols = rows.len();
    let matrix: linalg::Matrix = rows
        .iter()
        .map(|(a, j, _)| (0..ncols).map(|i| Elem::C(taylor_of_power(a, i, *j))).collect())
        .collect();
    let rhs: Vec<Elem> = rows.iter().map(|(_, _, c)| Elem::C(c.clone())).collect();
    let sol = linalg::solve(&kappa, &matrix, &rhs, ncols)
        .ok_or_else(|| Error::GroupReductionFailed("interpolation conditions are inconsistent".into()))?;
    let coeffs: Vec<Cyclo> = sol.iter().map(|e| e.as_cyclo().expect("constant")).collect();
    let p = RatFunc::from_poly(field.rf_ctx().expect("function field"), UniPoly::new(field.base(), coeffs));
    Elem::R(p).div(&den)
}

/// Coefficient of (x−a)^j in x^i, that is C(i, j)·a^{i−j}.
fn taylor_of_power(a: &Cyclo, i: usize, j: usize) -> Cyclo {
    if j > i {
        return Cyclo::zero(a.field());
    }
    let mut binom = BigInt::one();
    for k in 0..j {
        binom = binom * BigInt::from(i - k) / BigInt::from(k + 1);
    }
    a.pow((i - j) as u64).scale_rational(&BigRational::from_integer(binom))
}

/// Symbolic check of ψ∘ν(g)∘ψ⁻¹ = ρ(g) per generator plus the integrality audit.
pub fn verify_family(report: &LinearizationReport, nu: &FamilyAction) -> bool {
    let field = nu.field();
    if report.psi.field() != field || !report.residual_poles.is_empty() {
        return false;
    }
    let Ok(rho) = constant_rep(&report.rho, &field.base_field()) else { return false };
    if report.psi.forward().compose(report.psi.inverse()).map_or(true, |e| !e.is_identity()) {
        return false;
    }
    verify_linearization(&report.psi, &nu.group, &rho.over(field)) && is_polynomial_family(&report.psi)
}

/// The same identity at x = a, computed over κ.
pub fn verify_specialization(report: &LinearizationReport, nu: &FamilyAction, a: &Cyclo) -> Result<bool> {
    let f = specialize_endo(report.psi.forward(), a)?;
    let f_inv = specialize_endo(report.psi.inverse(), a)?;
    if !f.compose(&f_inv)?.is_identity() {
        return Ok(false);
    }
    for (g, m) in nu.specialize(a)?.iter().zip(&report.rho.images) {
        let lin = PlaneEndo::new(
            BiPoly::z1(f.field()).scale(&m[0][0]).add(&BiPoly::z2(f.field()).scale(&m[0][1])),
            BiPoly::z1(f.field()).scale(&m[1][0]).add(&BiPoly::z2(f.field()).scale(&m[1][1])),
        )?;
        if f.compose(g)? != lin.compose(&f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::selftest::{shear1, shear2};
    use super::*;
    use crate::linalg::mat2;

    fn constant_family(images: Vec<mat2::Mat2>, orders: Vec<u32>) -> FamilyAction {
        FamilyAction::new(GroupAction::linear(&images, Some(orders)).unwrap(), vec![]).unwrap()
    }

    #[test]
    fn constant_family_needs_no_change() {
        let f = Field::rational_functions(1, "x");
        let nu = constant_family(vec![mat2::diag(f.int(-1), f.int(1))], vec![2]);
        let (psi, _) = linearize_family_generic(&nu).unwrap();
        assert!(psi.is_identity());
    }

    #[test]
    fn poles_of_simple_denominators() {
        let f = Field::rational_functions(1, "x");
        let x = f.x();
        assert!(pole_set(&shear1(x.clone(), 2)).is_empty());
        let c = Elem::one(&f).div(&x.mul(&x.sub(&f.int(1)))).unwrap();
        let p = pole_set(&shear1(c, 2));
        assert_eq!(p.centers, vec![Cyclo::zero(f.base()), Cyclo::one(f.base())]);
        assert!(p.nonrational.is_empty());
        let c = Elem::one(&f).div(&x.mul(&x).add(&f.int(1))).unwrap();
        let p = pole_set(&shear1(c, 2));
        assert!(p.centers.is_empty());
        assert_eq!(p.warnings("x"), vec!["non-rational pole factor x^2 + 1"]);
    }

    #[test]
    fn rational_centers_over_cyclotomic_constants() {
        // (x − 1/2)(x − ζ₃): only 1/2 is found, the other factor is reported
        let f = Field::rational_functions(3, "x");
        let x = f.x();
        let den = x.sub(&f.rat(1, 2)).mul(&x.sub(&f.zeta()));
        let p = pole_set(&shear1(Elem::one(&f).div(&den).unwrap(), 2));
        assert_eq!(p.centers, vec![Cyclo::from_rational(f.base(), BigRational::new(1.into(), 2.into()))]);
        assert_eq!(p.nonrational.len(), 1);
        assert_eq!(p.nonrational[0].degree(), Some(1));
    }

    #[test]
    fn single_pole_shear_is_removed() {
        let f = Field::rational_functions(1, "x");
        let nu = constant_family(vec![mat2::diag(f.int(1), f.int(-1))], vec![2]);
        let kappa = f.base_field();
        let rho = LinearRep { images: vec![mat2::diag(kappa.int(1), kappa.int(-1))] };
        let psi = shear1(f.x().inv().unwrap(), 2);
        let report = remove_all_poles(&psi, &rho, &nu).unwrap();
        assert!(report.verified);
        assert_eq!(report.poles_removed, vec![Cyclo::zero(f.base())]);
        assert!(is_polynomial_family(&report.psi));
        assert!(report.gluing.is_none());

        let mut tampered = report.clone();
        tampered.psi = shear2(f.int(1), 2).unwrap().compose(&report.psi).unwrap();
        assert!(!verify_family(&tampered, &nu));
    }

    #[test]
    fn klein_four_is_glued_diagonally() {
        let f = Field::rational_functions(1, "x");
        let nu = constant_family(vec![mat2::diag(f.int(-1), f.int(1)), mat2::diag(f.int(1), f.int(-1))],
            vec![2, 2],
        );
        let kappa = f.base_field();
        let rho = LinearRep {
            images: vec![mat2::diag(kappa.int(-1), kappa.int(1)), mat2::diag(kappa.int(1), kappa.int(-1))],
        };
        let x = f.x();
        let psi = PlaneAut::diagonal(x.mul(&x.sub(&f.int(1))).inv().unwrap(), x.clone()).unwrap();
        let report = remove_all_poles(&psi, &rho, &nu).unwrap();
        assert!(report.verified);
        assert_eq!(report.gluing.as_ref().map(|g| g.shape), Some(CentralizerShape::Diagonal));
        assert!(report.psi.is_affine());
    }

    #[test]
    fn torus_gluing_matches_both_poles() {
        let f = Field::rational_functions(1, "x");
        let nu = FamilyAction::new(GroupAction::torus(&f, 2, 1, None).unwrap(), vec![]).unwrap();
        let (psi0, rho) = linearize_family_generic(&nu).unwrap();
        let x = f.x();
        let c = f.int(3).div(&x.mul(&x.sub(&f.int(1))).mul(&x)).unwrap();
        let psi = shear1(c, 2).compose(&psi0).unwrap();
        let report = remove_all_poles(&psi, &rho, &nu).unwrap();
        assert!(report.verified, "{report:?}");
        let g = report.gluing.unwrap();
        assert_eq!(g.shape, CentralizerShape::Upper(2));
        assert!(crate::dvr::commutes_with_all(&g.map, &rho.over(&f).as_auts()).unwrap());
    }

    #[test]
    fn idempotent_on_verified_reports() {
        let f = Field::rational_functions(1, "x");
        let nu = constant_family(vec![mat2::diag(f.int(-1), f.int(-1))], vec![2]);
        let kappa = f.base_field();
        let rho = LinearRep { images: vec![mat2::diag(kappa.int(-1), kappa.int(-1))] };
        let psi = shear1(f.x().sub(&f.int(1)).powi(-2).unwrap(), 3);
        let report = remove_all_poles(&psi, &rho, &nu).unwrap();
        let again = resume(&report, &nu).unwrap();
        assert_eq!(again.psi.forward(), report.psi.forward());
        assert_eq!(again.poles_removed, report.poles_removed);
    }
}
