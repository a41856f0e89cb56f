//! Pole removal for linearizations over κ(x) at one center, by descent on the w-invariant.

pub mod groebner;
pub mod selftest;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fields::{valuation_lenient, DvrContext, Elem, Field, Scalar, Valuation};
use crate::group::LinearRep;
use crate::linalg::{self, mat2::Mat2};
use crate::plane::{PlaneAut, PlaneEndo};
use crate::poly::{BiPoly, Mono};
use groebner::MPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoValuationReport {
    pub v: i64,
    pub w1: u32,
    pub w2: u32,
    pub integral: bool,
}

impl EndoValuationReport {
    pub fn w(&self) -> u32 {
        self.w1 + self.w2
    }
}

/// One descent step. ψ∘α∘ψ⁻¹ = τ⁻¹∘γ∘τ is stored instead of α itself, which has much larger
/// degree; `alpha` expands it on demand.
#[derive(Clone, Debug)]
pub struct KRStep {
    pub w_before: (u32, u32),
    pub curve: BiPoly,
    pub tau: PlaneAut,
    pub r: (i64, i64),
    pub psi_before: PlaneAut,
    pub conjugate: PlaneAut,
}

impl KRStep {
    /// α = ψ⁻¹∘(τ⁻¹∘γ∘τ)∘ψ.
    pub fn alpha(&self) -> Result<PlaneAut> {
        PlaneAut::compose_all(&[&self.psi_before.inv(), &self.conjugate, &self.psi_before])
    }
}

#[derive(Clone, Debug)]
pub struct KRTrace {
    pub steps: Vec<KRStep>,
    /// The integral linearizer reached.
    pub psi: PlaneAut,
    /// c commuting with ρ and with psi = c∘(input linearizer).
    pub left: PlaneAut,
}

impl KRTrace {
    /// w before each step followed by the final w.
    pub fn w_sequence(&self, ctx: &DvrContext) -> Vec<u32> {
        let mut s: Vec<u32> = self.steps.iter().map(|st| st.w_before.0 + st.w_before.1).collect();
        s.push(w_invariant(&self.psi, ctx).map(|r| r.w()).unwrap_or(u32::MAX));
        s
    }

    /// (w₁, w₂) before each step with the exponents (r₁, r₂) it used.
    pub fn digest(&self) -> Vec<((u32, u32), (i64, i64))> {
        step_digest(&self.steps)
    }
}

pub fn poly_valuation(p: &BiPoly, ctx: &DvrContext) -> Valuation {
    p.terms().values().map(|c| valuation_lenient(c, &ctx.center)).min().unwrap_or(Valuation::Infinity)
}

pub fn endo_valuation(f: &PlaneEndo, ctx: &DvrContext) -> Result<i64> {
    check_field(f.field(), ctx)?;
    poly_valuation(&f.p1, ctx).min(poly_valuation(&f.p2, ctx)).finite().ok_or(Error::ZeroEndomorphism)
}

fn check_field(field: &Field, ctx: &DvrContext) -> Result<()> {
    match field.rf_ctx() {
        Some(r) if **r == *ctx.field => Ok(()),
        _ => Err(Error::DescriptorMismatch(format!("{field} is not the fraction field of the local ring"))),
    }
}

pub fn w_invariant(f: &PlaneAut, ctx: &DvrContext) -> Result<EndoValuationReport> {
    let v = endo_valuation(f.forward(), ctx)?;
    if v < 0 {
        return Err(Error::NotIntegralInput(format!("valuation {v}")));
    }
    let w = |p: &BiPoly| match poly_valuation(p, ctx) {
        Valuation::Finite(x) if x < 0 => (-x) as u32,
        _ => 0,
    };
    let (w1, w2) = (w(&f.inverse().p1), w(&f.inverse().p2));
    Ok(EndoValuationReport { v, w1, w2, integral: w1 == 0 && w2 == 0 })
}

/// Whether f and f⁻¹ both have integral coefficients.
pub fn is_integral_aut(f: &PlaneAut, ctx: &DvrContext) -> bool {
    w_invariant(f, ctx).is_ok_and(|r| r.integral)
}

fn t_elem(field: &Field, ctx: &DvrContext, n: i64) -> Elem {
    field.coerce(Elem::R(ctx.t_pow(n)))
}

/// (t^{a} z₁, t^{b} z₂).
fn t_diagonal(field: &Field, ctx: &DvrContext, a: i64, b: i64) -> Result<PlaneAut> {
    PlaneAut::diagonal(t_elem(field, ctx, a), t_elem(field, ctx, b))
}

/// The group elements ψ⁻¹∘ρ(g)∘ψ that ψ linearizes.
pub fn linearized_group(psi: &PlaneAut, rho: &LinearRep) -> Result<Vec<PlaneAut>> {
    let field = psi.field();
    rho.over(field).as_auts().iter().map(|r| PlaneAut::compose_all(&[&psi.inv(), r, psi])).collect()
}

pub fn commutes_with_all(alpha: &PlaneAut, gens: &[PlaneAut]) -> Result<bool> {
    for g in gens {
        if alpha.compose(g)?.forward() != g.compose(alpha)?.forward() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_rep(rho: &LinearRep) -> Result<()> {
    if rho.images.is_empty() {
        return Err(Error::NotLinearizing("empty representation".into()));
    }
    for m in &rho.images {
        if m.iter().flatten().any(|e| e.as_cyclo().is_none()) {
            return Err(Error::NotLinearizing("representation has nonconstant entries".into()));
        }
        if linalg::mat2::det(m).is_zero() {
            return Err(Error::NotLinearizing("singular representation matrix".into()));
        }
    }
    Ok(())
}

/// ψ ↦ ψ∘α with α = ψ⁻¹∘β∘ψ, β the scalar t^{−v(ψ)}.
pub fn normalize_valuation(psi: &PlaneAut, rho: &LinearRep, ctx: &DvrContext) -> Result<(PlaneAut, PlaneAut)> {
    check_rep(rho)?;
    let (beta, psi1) = normalize_left(psi, ctx)?;
    if beta.is_identity() {
        return Ok((beta, psi1));
    }
    let alpha = psi.inv().compose(&psi1)?;
    Ok((alpha, psi1))
}

/// The scalar β and β∘ψ.
fn normalize_left(psi: &PlaneAut, ctx: &DvrContext) -> Result<(PlaneAut, PlaneAut)> {
    let field = psi.field();
    let v = endo_valuation(psi.forward(), ctx)?;
    if v == 0 {
        return Ok((PlaneAut::identity(field), psi.clone()));
    }
    let beta = t_diagonal(field, ctx, -v, -v)?;
    let psi1 = beta.compose(psi)?;
    Ok((beta, psi1))
}

fn residue_poly(p: &BiPoly, kappa: &Field, ctx: &DvrContext) -> Result<BiPoly> {
    let mut terms = Vec::new();
    for (m, c) in p.terms() {
        let r = match c {
            Elem::R(r) => ctx.residue(r)?,
            Elem::C(c) => c.clone(),
        };
        terms.push((*m, kappa.embed(&r)));
    }
    Ok(BiPoly::from_terms(kappa, terms))
}

/// Residue map modulo t.
pub fn residue_endo(f: &PlaneEndo, ctx: &DvrContext) -> Result<PlaneEndo> {
    let kappa = f.field().base_field();
    PlaneEndo::new(residue_poly(&f.p1, &kappa, ctx)?, residue_poly(&f.p2, &kappa, ctx)?)
}

fn to_mpoly(p: &BiPoly, nvars: usize, at: (usize, usize)) -> MPoly {
    let mut out = MPoly::zero(p.field(), nvars);
    for (m, c) in p.terms() {
        let mut e = vec![0; nvars];
        e[at.0] = m.0;
        e[at.1] = m.1;
        out.terms.insert(e, c.clone());
    }
    out
}

/// Generator of the kernel of κ[u,v] → κ[z₁,z₂], u ↦ ψ̄₁, v ↦ ψ̄₂, returned as a polynomial
/// in (z₁, z₂) standing for (u, v); monic for lex order with u > v.
pub fn image_curve_mod_t(psi: &PlaneEndo, ctx: &DvrContext) -> Result<BiPoly> {
    let v = endo_valuation(psi, ctx)?;
    if v != 0 {
        return Err(Error::NotNormalized(v));
    }
    let bar = residue_endo(psi, ctx)?;
    let kappa = bar.field().clone();
    // variables z₁ > z₂ > u > v
    let gens = [
        MPoly::var(&kappa, 4, 2).sub(&to_mpoly(&bar.p1, 4, (0, 1))),
        MPoly::var(&kappa, 4, 3).sub(&to_mpoly(&bar.p2, 4, (0, 1))),
    ];
    let elim = groebner::elimination(&groebner::groebner(&gens), 2);
    match elim.len() {
        0 => Err(Error::NotDegenerate),
        1 => {
            let terms = elim[0].terms.iter().map(|(e, c)| (Mono(e[2], e[3]), c.clone()));
            Ok(BiPoly::from_terms(&kappa, terms))
        }
        _ => Err(Error::NotACoordinate("residue map collapses to a point".into())),
    }
}

fn linear_image(p: &BiPoly, m: &Mat2) -> BiPoly {
    let f = p.field();
    let l1 = BiPoly::z1(f).scale(&m[0][0]).add(&BiPoly::z2(f).scale(&m[0][1]));
    let l2 = BiPoly::z1(f).scale(&m[1][0]).add(&BiPoly::z2(f).scale(&m[1][1]));
    p.substitute(&l1, &l2)
}

/// λ with q = λ·p, if any.
fn proportional(q: &BiPoly, p: &BiPoly) -> Option<Elem> {
    let (m, c) = p.terms().iter().next_back()?;
    let lam = q.coeff(m.0, m.1).div(c).ok()?;
    (*q == p.scale(&lam)).then_some(lam)
}

/// Mate h with κ[f,h] = κ[z₁,z₂], adjusted so that τ = (f,h) diagonalizes ρ.
pub fn coordinate_mate(f: &BiPoly, rho: &LinearRep) -> Result<(BiPoly, PlaneAut)> {
    let kappa = f.field().clone();
    let rho = rho.over(&kappa);
    for m in &rho.images {
        if proportional(&linear_image(f, m), f).is_none() {
            return Err(Error::NotInvariantLine("f∘ρ(g) is not a multiple of f".into()));
        }
    }
    let deg = f.degree().unwrap_or(0);
    if deg == 0 {
        return Err(Error::NotACoordinate("constant polynomial".into()));
    }
    let candidates = if deg == 1 { linear_mates(f, &rho) } else { slice_mates(f) };
    for h in candidates {
        let h = match character_shift(&h, &rho) {
            Some(h) => h,
            None => continue,
        };
        if let Ok(tau) = PlaneAut::invert(&PlaneEndo::new(f.clone(), h.clone())?) {
            return Ok((h, tau));
        }
    }
    Err(Error::NotACoordinate(format!("no mate of degree below {}", deg.max(2))))
}

/// Complementary eigen-forms for a linear f.
fn linear_mates(f: &BiPoly, rho: &LinearRep) -> Vec<BiPoly> {
    let kappa = f.field();
    let (a, b) = (f.coeff(1, 0), f.coeff(0, 1));
    let mut out = Vec::new();
    for h in [BiPoly::z1(kappa), BiPoly::z2(kappa), BiPoly::z1(kappa).add(&BiPoly::z2(kappa))] {
        let independent = !a.mul(&h.coeff(0, 1)).sub(&b.mul(&h.coeff(1, 0))).is_zero();
        let eigen = rho.images.iter().all(|m| proportional(&linear_image(&h, m), &h).is_some());
        if independent && eigen {
            out.push(h);
        }
    }
    out
}

/// Solutions of f_{z₂}·h_{z₁} − f_{z₁}·h_{z₂} = 1 by increasing degree.
fn slice_mates(f: &BiPoly) -> Vec<BiPoly> {
    let kappa = f.field().clone();
    let (fz1, fz2) = (f.d_z1(), f.d_z2());
    let top = f.degree().unwrap_or(1).saturating_sub(1).max(1);
    let mut out = Vec::new();
    for dh in 1..=top {
        let monos: Vec<Mono> = (1..=dh).flat_map(|d| (0..=d).map(move |i| Mono(i, d - i))).collect();
        let images: Vec<BiPoly> = monos
            .iter()
            .map(|m| {
                let h = BiPoly::monomial(&kappa, Elem::one(&kappa), m.0, m.1);
                fz2.mul(&h.d_z1()).sub(&fz1.mul(&h.d_z2()))
            })
            .collect();
        let mut rows_of: BTreeMap<Mono, usize> = BTreeMap::new();
        for im in &images {
            for m in im.terms().keys() {
                let n = rows_of.len();
                rows_of.entry(*m).or_insert(n);
            }
        }
        let n = rows_of.len();
        rows_of.entry(Mono(0, 0)).or_insert(n);
        let mut mat = vec![vec![Elem::zero(&kappa); monos.len()]; rows_of.len()];
        for (col, im) in images.iter().enumerate() {
            for (m, c) in im.terms() {
                mat[rows_of[m]][col] = c.clone();
            }
        }
        let mut rhs = vec![Elem::zero(&kappa); rows_of.len()];
        rhs[rows_of[&Mono(0, 0)]] = Elem::one(&kappa);
        if let Some(sol) = linalg::solve(&kappa, &mat, &rhs, monos.len()) {
            let terms = monos.iter().zip(sol).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (*m, c));
            out.push(BiPoly::from_terms(&kappa, terms));
        }
    }
    out
}

/// h + c with (h + c)∘ρ(g) = μ(g)·(h + c) for all g, if h∘ρ(g) = μh + const.
fn character_shift(h: &BiPoly, rho: &LinearRep) -> Option<BiPoly> {
    let kappa = h.field().clone();
    let mut shift: Option<Elem> = None;
    let mut data = Vec::new();
    for m in &rho.images {
        let img = linear_image(h, m);
        let lin = h.sub(&BiPoly::constant(&kappa, h.constant_term()));
        let img_lin = img.sub(&BiPoly::constant(&kappa, img.constant_term()));
        let mu = proportional(&img_lin, &lin)?;
        // h∘M = μ·h + c_M
        let c_m = img.constant_term().sub(&mu.mul(&h.constant_term()));
        data.push((mu.clone(), c_m.clone()));
        if shift.is_none() && !mu.is_one() {
            shift = Some(c_m.div(&mu.sub(&Elem::one(&kappa))).ok()?);
        }
    }
    let c = shift.unwrap_or_else(|| Elem::zero(&kappa));
    data.iter().all(|(mu, c_m)| c_m.add(&c).sub(&mu.mul(&c)).is_zero()).then(|| h.add(&BiPoly::constant(&kappa, c)))
}

fn descent_step(psi: &PlaneAut, rho: &LinearRep, ctx: &DvrContext) -> Result<(PlaneAut, KRStep)> {
    check_rep(rho)?;
    let field = psi.field().clone();
    let kappa = field.base_field();
    let v = endo_valuation(psi.forward(), ctx)?;
    if v != 0 {
        return Err(Error::NotNormalized(v));
    }
    let before = w_invariant(psi, ctx)?;
    if before.integral {
        return Err(Error::NotDegenerate);
    }
    let curve = image_curve_mod_t(psi.forward(), ctx)?;
    let (_, tau) = coordinate_mate(&curve, &rho.over(&kappa))?;
    let tau_k = tau.map_coeffs(&field, |c| field.coerce(c.clone()))?;
    let tpsi = tau_k.compose(psi)?;
    let val = |p: &BiPoly| poly_valuation(p, ctx).finite().ok_or(Error::ZeroEndomorphism);
    let (r1, r2) = (val(&tpsi.forward().p1)?, val(&tpsi.forward().p2)?);
    if r1 < 1 || r2 < 0 {
        return Err(Error::NotDegenerate);
    }
    let gamma = t_diagonal(&field, ctx, -r1, -r2)?;
    let conjugate = PlaneAut::compose_all(&[&tau_k.inv(), &gamma, &tau_k])?;
    // α∘g = g∘α for g = ψ⁻¹∘ρ(g)∘ψ exactly when ψ∘α∘ψ⁻¹ commutes with ρ(g)
    if !commutes_with_all(&conjugate, &rho.over(&field).as_auts())? {
        return Err(Error::NotLinearizing("step factor is not equivariant".into()));
    }
    let psi1 = conjugate.compose(psi)?;
    let step = KRStep { w_before: (before.w1, before.w2), curve, tau, r: (r1, r2), psi_before: psi.clone(), conjugate };
    Ok((psi1, step))
}

/// One descent step: α = (τ∘ψ)⁻¹∘γ∘(τ∘ψ) with γ = (t^{−r₁}z₁, t^{−r₂}z₂).
pub fn kr_step(psi: &PlaneAut, rho: &LinearRep, ctx: &DvrContext) -> Result<(PlaneAut, PlaneAut, KRStep)> {
    let (psi1, step) = descent_step(psi, rho, ctx)?;
    Ok((step.alpha()?, psi1, step))
}

/// α ∈ Aut^G over κ(x) with ψ∘α integral at the center, with the descent trace.
pub fn remove_pole(psi: &PlaneAut, rho: &LinearRep, ctx: &DvrContext) -> Result<(PlaneAut, PlaneAut, KRTrace)> {
    let trace = descend(psi, rho, ctx)?;
    if trace.steps.is_empty() && trace.psi.forward() == psi.forward() {
        return Ok((PlaneAut::identity(psi.field()), trace.psi.clone(), trace));
    }
    let alpha_total = psi.inv().compose(&trace.psi)?;
    if !commutes_with_all(&alpha_total, &linearized_group(psi, rho)?)? {
        return Err(Error::NotLinearizing("accumulated factor fails the final check".into()));
    }
    Ok((alpha_total, trace.psi.clone(), trace))
}

/// The descent alone: an integral linearizer at the center without expanding α, whose
/// equivariance rests on the per-step conjugate checks.
pub fn descend(psi: &PlaneAut, rho: &LinearRep, ctx: &DvrContext) -> Result<KRTrace> {
    check_rep(rho)?;
    if is_integral_aut(psi, ctx) {
        return Ok(KRTrace { steps: vec![], psi: psi.clone(), left: PlaneAut::identity(psi.field()) });
    }
    let (mut left, mut cur) = normalize_left(psi, ctx)?;
    let cap = w_invariant(&cur, ctx)?.w();
    let mut steps = Vec::new();
    let mut w = cap;
    while w > 0 {
        if steps.len() as u32 >= cap {
            return Err(Error::IterationCap(format!("w stuck at {w} after {} steps: {:?}", steps.len(), step_digest(&steps))));
        }
        let (next, step) = descent_step(&cur, rho, ctx)?;
        left = step.conjugate.compose(&left)?;
        steps.push(step);
        cur = next;
        if endo_valuation(cur.forward(), ctx)? != 0 {
            let (beta, next) = normalize_left(&cur, ctx)?;
            left = beta.compose(&left)?;
            cur = next;
        }
        let nw = w_invariant(&cur, ctx)?.w();
        if nw >= w {
            return Err(Error::IterationCap(format!("w did not drop: {w} -> {nw}: {:?}", step_digest(&steps))));
        }
        w = nw;
    }
    Ok(KRTrace { steps, psi: cur, left })
}

fn step_digest(steps: &[KRStep]) -> Vec<((u32, u32), (i64, i64))> {
    steps.iter().map(|s| (s.w_before, s.r)).collect()
}

/// Max-plus image of a generic polynomial: monomial ↦ degree of its coefficient in the
/// generic coefficient variables.
type Tropical = BTreeMap<Mono, u32>;

fn trop_mul(a: &Tropical, b: &Tropical) -> Tropical {
    let mut r = Tropical::new();
    for (ma, da) in a {
        for (mb, db) in b {
            let e = r.entry(Mono(ma.0 + mb.0, ma.1 + mb.1)).or_insert(0);
            *e = (*e).max(da + db);
        }
    }
    r
}

fn trop_add_into(acc: &mut Tropical, b: &Tropical) {
    for (m, d) in b {
        let e = acc.entry(*m).or_insert(0);
        *e = (*e).max(*d);
    }
}

fn trop_pow(a: &Tropical, n: u32) -> Tropical {
    let mut r: Tropical = [(Mono(0, 0), 0)].into_iter().collect();
    for _ in 0..n {
        r = trop_mul(&r, a);
    }
    r
}

fn generic_component(deg: u32) -> Tropical {
    (0..=deg).flat_map(|d| (0..=d).map(move |i| (Mono(i, d - i), 1))).collect()
}

/// Perturbation radius r = s·d·v₀ for the composition α_m∘⋯∘α_1 (alphas[0] applied first):
/// every tuple agreeing with alphas to order r at the center still composes to an integral
/// map. With I the monomials up to the largest degree, s = 2·m·#I counts the coefficient
/// slots, d is the largest coefficient degree of the generic composition and v₀ the largest
/// pole order among the given coefficients.
pub fn perturbation_bound(alphas: &[PlaneEndo], ctx: &DvrContext) -> Result<i64> {
    let Some(first) = alphas.first() else { return Ok(0) };
    let mut comp = first.clone();
    for a in &alphas[1..] {
        comp = a.compose(&comp)?;
    }
    if endo_valuation(&comp, ctx)? < 0 {
        return Err(Error::CompositionNotIntegral);
    }
    let v0 = alphas
        .iter()
        .flat_map(|a| a.coefficients())
        .filter_map(|c| valuation_lenient(c, &ctx.center).finite())
        .map(|v| -v)
        .max()
        .unwrap_or(0)
        .max(0);
    if v0 == 0 {
        return Ok(0);
    }
    let top = alphas.iter().map(|a| a.degree().unwrap_or(0)).max().unwrap_or(0);
    let slots = ((top as i64 + 1) * (top as i64 + 2)) / 2;
    let s = 2 * alphas.len() as i64 * slots;
    let generic = generic_component(top);
    let mut acc = [generic.clone(), generic.clone()];
    for _ in 1..alphas.len() {
        let mut next = [Tropical::new(), Tropical::new()];
        for slot in next.iter_mut() {
            for (m, dc) in &generic {
                let mut t = trop_mul(&trop_pow(&acc[0], m.0), &trop_pow(&acc[1], m.1));
                t.values_mut().for_each(|x| *x += dc);
                trop_add_into(slot, &t);
            }
        }
        acc = next;
    }
    let d = acc.iter().flat_map(|c| c.values()).copied().max().unwrap_or(0) as i64;
    Ok(s * d * v0)
}
