//! Fiber normal forms s∘e_{q_m}∘τ∘e_{q_{m−1}}∘τ∘⋯∘τ∘e_{q_1}.

use crate::error::{Error, Result};
use crate::fields::{Elem, Field, Scalar, UniPoly};
use crate::plane::{AffineMap, ElementaryMap, PlaneAut};

/// (z₁,z₂) ↦ (αz₁+α′, βz₂+β′).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SParams {
    pub alpha: Elem,
    pub alpha_p: Elem,
    pub beta: Elem,
    pub beta_p: Elem,
}

impl SParams {
    pub fn identity(field: &Field) -> SParams {
        SParams {
            alpha: Elem::one(field),
            alpha_p: Elem::zero(field),
            beta: Elem::one(field),
            beta_p: Elem::zero(field),
        }
    }

    pub fn diagonal(alpha: Elem, beta: Elem) -> SParams {
        let f = alpha.field();
        SParams { alpha, alpha_p: Elem::zero(&f), beta, beta_p: Elem::zero(&f) }
    }

    pub fn to_affine(&self) -> Result<AffineMap> {
        let f = self.alpha.field();
        AffineMap::new(
            [[self.alpha.clone(), Elem::zero(&f)], [Elem::zero(&f), self.beta.clone()]],
            [self.alpha_p.clone(), self.beta_p.clone()],
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberNormalForm {
    pub s: SParams,
    pub q: Vec<UniPoly<Elem>>,
    pub d: Vec<u32>,
}

impl FiberNormalForm {
    /// Polydegree read off the q_j.
    pub fn new(s: SParams, q: Vec<UniPoly<Elem>>) -> FiberNormalForm {
        let d = q.iter().map(|p| p.degree().map_or(0, |e| e as u32 + 1)).collect();
        FiberNormalForm { s, q, d }
    }

    pub fn with_polydegree(s: SParams, q: Vec<UniPoly<Elem>>, d: Vec<u32>) -> FiberNormalForm {
        FiberNormalForm { s, q, d }
    }

    pub fn field(&self) -> Field {
        self.s.alpha.field()
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }
}

/// e_q = (z₁ + z₂q(z₂), z₂).
pub fn e_q(q: &UniPoly<Elem>) -> ElementaryMap {
    let x = UniPoly::x(q.ctx());
    ElementaryMap::shear(q.mul(&x))
}

pub fn build_fiber(fnf: &FiberNormalForm) -> Result<PlaneAut> {
    if fnf.d.len() != fnf.q.len() {
        return Err(Error::DegreeMismatch(format!("{} polynomials for {} degrees", fnf.q.len(), fnf.d.len())));
    }
    for (j, (q, &d)) in fnf.q.iter().zip(&fnf.d).enumerate() {
        if d < 2 || q.degree() != Some(d as usize - 1) {
            return Err(Error::DegreeMismatch(format!("q_{} has degree {:?}, expected {}", j + 1, q.degree(), d as i64 - 1)));
        }
    }
    let field = fnf.field();
    let tau = PlaneAut::swap(&field);
    let mut f = PlaneAut::identity(&field);
    for (j, q) in fnf.q.iter().enumerate() {
        if j > 0 {
            f = tau.compose(&f)?;
        }
        f = PlaneAut::from_elementary(&e_q(q)).compose(&f)?;
    }
    PlaneAut::from_affine(fnf.s.to_affine()?).compose(&f)
}

/// Recover (s, q) from a member of the fiber over (0,0).
pub fn extract_fiber(f: &PlaneAut) -> Result<FiberNormalForm> {
    let field = f.field().clone();
    let tau = PlaneAut::swap(&field);
    let mut qs = Vec::new();
    let mut cur = f.clone();
    loop {
        let w = cur.word().clone();
        let m = w.len();
        if m <= 1 {
            if !w.affines[0].is_triangular() || !w.affines[m].is_triangular() {
                return Err(Error::NotInFiber("outer affine factors are not triangular".into()));
            }
            let e = elementary_of(cur.forward())?;
            if m == 0 && !e.p.coeff(1).is_zero() {
                return Err(Error::NotInFiber("affine part outside the scaling group".into()));
            }
            let s = SParams {
                alpha: e.alpha.clone(),
                alpha_p: e.p.coeff(0),
                beta: e.beta.clone(),
                beta_p: e.beta_p.clone(),
            };
            if m == 1 {
                let p = e.p.sub(&UniPoly::constant(e.p.coeff(0))).scale(&e.alpha.inv()?);
                qs.push(shift_down(&p));
            }
            let fnf = FiberNormalForm::new(s, qs);
            if build_fiber(&fnf)?.forward() != f.forward() {
                return Err(Error::NotInFiber("rebuilt map differs".into()));
            }
            return Ok(fnf);
        }
        if !w.affines[0].is_triangular() {
            return Err(Error::NotInFiber("innermost affine factor is not triangular".into()));
        }
        let inner = PlaneAut::from_elementary(&w.elementaries[0]).compose(&PlaneAut::from_affine(w.affines[0].clone()))?;
        let e = elementary_of(inner.forward())?;
        let a2 = &w.affines[1].m;
        // choose the shear so that a₂∘X∘τ stays triangular
        let b = a2[1][1].div(&e.alpha.mul(&a2[1][0]))?;
        let lin = UniPoly::monomial(b.mul(&e.beta), 1);
        let p = e.p.scale(&e.alpha.inv()?).add(&lin);
        let p = p.sub(&UniPoly::constant(p.coeff(0)));
        let q = shift_down(&p);
        let eq = PlaneAut::from_elementary(&e_q(&q));
        qs.push(q);
        cur = cur.compose(&eq.inv())?.compose(&tau)?;
    }
}

/// p(z₂)/z₂ for p with zero constant term.
fn shift_down(p: &UniPoly<Elem>) -> UniPoly<Elem> {
    UniPoly::new(p.ctx(), p.coeffs().iter().skip(1).cloned().collect())
}

/// Read (αz₁+p(z₂), βz₂+β′) off an endomorphism, or fail.
pub(crate) fn elementary_of(f: &crate::plane::PlaneEndo) -> Result<ElementaryMap> {
    let field = f.field().clone();
    let bad = || Error::NotInFiber("not of elementary shape".into());
    if f.p2.degree().unwrap_or(0) > 1 || !f.p2.coeff(1, 0).is_zero() {
        return Err(bad());
    }
    let alpha = f.p1.coeff(1, 0);
    let rest = f.p1.sub(&crate::poly::BiPoly::z1(&field).scale(&alpha));
    let p = rest.as_upoly_z2().ok_or_else(bad)?;
    ElementaryMap::new(alpha, f.p2.coeff(0, 1), f.p2.coeff(0, 0), p).map_err(|_| bad())
}

/// g⁻¹∘f_{s,q}∘g for g = diag(λ₀, λ₁), by closed formulas.
pub fn conjugate_by_diagonal(lambda0: &Elem, lambda1: &Elem, fnf: &FiberNormalForm) -> Result<FiberNormalForm> {
    let m = fnf.q.len();
    let lam = |j: usize| if j % 2 == 0 { lambda0 } else { lambda1 };
    let mut p = Vec::with_capacity(m);
    for (idx, q) in fnf.q.iter().enumerate() {
        let j = idx + 1;
        let (lj, lj1) = (lam(j), lam(j + 1));
        let ratio = lj.div(lj1)?;
        let mut pw = Elem::one(&lj.field());
        let coeffs = q
            .coeffs()
            .iter()
            .map(|c| {
                let r = c.mul(&pw).mul(&ratio);
                pw = pw.mul(lj);
                r
            })
            .collect();
        p.push(UniPoly::new(q.ctx(), coeffs));
    }
    let s = &fnf.s;
    if m == 0 {
        let sigma = SParams {
            alpha: s.alpha.clone(),
            alpha_p: s.alpha_p.div(lambda0)?,
            beta: s.beta.clone(),
            beta_p: s.beta_p.div(lambda1)?,
        };
        return Ok(FiberNormalForm::with_polydegree(sigma, p, fnf.d.clone()));
    }
    let sigma = SParams {
        alpha: s.alpha.mul(lam(m + 1)).div(lambda0)?,
        alpha_p: s.alpha_p.div(lambda0)?,
        beta: s.beta.mul(lam(m)).div(lambda1)?,
        beta_p: s.beta_p.div(lambda1)?,
    };
    Ok(FiberNormalForm::with_polydegree(sigma, p, fnf.d.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::BiPoly;

    fn up(f: &Field, c: &[i64]) -> UniPoly<Elem> {
        UniPoly::new(f, c.iter().map(|&x| f.int(x)).collect())
    }

    #[test]
    fn single_shear() {
        let f = Field::rationals();
        let fnf = FiberNormalForm::new(SParams::identity(&f), vec![up(&f, &[0, 1])]);
        let g = build_fiber(&fnf).unwrap();
        assert_eq!(g.forward().p1, BiPoly::from_ints(&f, &[(1, 0, 1), (0, 2, 1)]));
        assert_eq!(extract_fiber(&g).unwrap(), fnf);
    }

    #[test]
    fn two_syllables_round_trip() {
        let f = Field::rationals();
        let s = SParams { alpha: f.int(2), alpha_p: f.int(-1), beta: f.int(3), beta_p: f.int(5) };
        let fnf = FiberNormalForm::new(s, vec![up(&f, &[1, 2]), up(&f, &[-1, 0, 4])]);
        let g = build_fiber(&fnf).unwrap();
        assert_eq!(g.polydegree(), vec![2, 3]);
        assert_eq!(extract_fiber(&g).unwrap(), fnf);
    }

    #[test]
    fn henon_is_not_in_fiber() {
        let f = Field::rationals();
        let h = crate::plane::PlaneEndo::new(BiPoly::z2(&f), BiPoly::from_ints(&f, &[(1, 0, 1), (0, 2, 1)])).unwrap();
        let h = PlaneAut::invert(&h).unwrap();
        assert!(matches!(extract_fiber(&h), Err(Error::NotInFiber(_))));
    }

    #[test]
    fn degree_mismatch() {
        let f = Field::rationals();
        let fnf = FiberNormalForm::with_polydegree(SParams::identity(&f), vec![up(&f, &[0, 1])], vec![3]);
        assert!(matches!(build_fiber(&fnf), Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn diagonal_conjugation_example() {
        let f = Field::rationals();
        let fnf = FiberNormalForm::new(SParams::identity(&f), vec![up(&f, &[0, 1])]);
        let c = conjugate_by_diagonal(&f.int(2), &f.int(3), &fnf).unwrap();
        assert_eq!(c.q[0], UniPoly::new(&f, vec![f.int(0), f.rat(9, 2)]));
        let g = PlaneAut::diagonal(f.int(2), f.int(3)).unwrap();
        let direct = PlaneAut::compose_all(&[&g.inv(), &build_fiber(&fnf).unwrap(), &g]).unwrap();
        assert_eq!(extract_fiber(&direct).unwrap(), c);
    }
}
