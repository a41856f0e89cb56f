use crate::error::{Error, Result};
use crate::fields::{Elem, Field, Scalar, UniPoly};
use crate::linalg::mat2::{self, Mat2};
use crate::poly::{BiPoly, PowerCache};

/// A polynomial map (z₁, z₂) ↦ (p1, p2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneEndo {
    pub p1: BiPoly,
    pub p2: BiPoly,
}

impl PlaneEndo {
    pub fn new(p1: BiPoly, p2: BiPoly) -> Result<PlaneEndo> {
        if p1.field() != p2.field() {
            return Err(Error::DescriptorMismatch("components over different fields".into()));
        }
        Ok(PlaneEndo { p1, p2 })
    }

    pub fn identity(field: &Field) -> PlaneEndo {
        PlaneEndo { p1: BiPoly::z1(field), p2: BiPoly::z2(field) }
    }

    /// The transposition (z₂, z₁).
    pub fn swap(field: &Field) -> PlaneEndo {
        PlaneEndo { p1: BiPoly::z2(field), p2: BiPoly::z1(field) }
    }

    pub fn field(&self) -> &Field {
        self.p1.field()
    }

    /// max of the component degrees; `None` when both vanish.
    pub fn degree(&self) -> Option<u32> {
        match (self.p1.degree(), self.p2.degree()) {
            (None, d) | (d, None) => d,
            (Some(a), Some(b)) => Some(a.max(b)),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.field())
    }

    pub fn component(&self, j: usize) -> &BiPoly {
        if j == 0 {
            &self.p1
        } else {
            &self.p2
        }
    }

    /// self∘g.
    pub fn compose(&self, g: &PlaneEndo) -> Result<PlaneEndo> {
        if self.field() != g.field() {
            return Err(Error::DescriptorMismatch(format!("{} vs {}", self.field(), g.field())));
        }
        let mut cache = PowerCache::new(g.p2.clone());
        let p1 = self.p1.substitute_with(&g.p1, &mut cache);
        let p2 = self.p2.substitute_with(&g.p1, &mut cache);
        Ok(PlaneEndo { p1, p2 })
    }

    pub fn eval(&self, pt: &[Elem; 2]) -> Result<[Elem; 2]> {
        for c in pt {
            if c.field() != *self.field() && c.field() != self.field().base_field() {
                return Err(Error::DescriptorMismatch("point outside the coefficient field".into()));
            }
        }
        Ok([self.p1.eval(&pt[0], &pt[1]), self.p2.eval(&pt[0], &pt[1])])
    }

    pub fn map_coeffs(&self, target: &Field, f: impl Fn(&Elem) -> Elem) -> PlaneEndo {
        PlaneEndo { p1: self.p1.map_coeffs(target, &f), p2: self.p2.map_coeffs(target, &f) }
    }

    pub fn try_map_coeffs(&self, target: &Field, f: impl Fn(&Elem) -> Result<Elem>) -> Result<PlaneEndo> {
        Ok(PlaneEndo { p1: self.p1.try_map_coeffs(target, &f)?, p2: self.p2.try_map_coeffs(target, &f)? })
    }

    /// Scale both components by a common scalar.
    pub fn scale(&self, c: &Elem) -> PlaneEndo {
        PlaneEndo { p1: self.p1.scale(c), p2: self.p2.scale(c) }
    }

    pub fn sub(&self, o: &PlaneEndo) -> PlaneEndo {
        PlaneEndo { p1: self.p1.sub(&o.p1), p2: self.p2.sub(&o.p2) }
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Elem> {
        self.p1.terms().values().chain(self.p2.terms().values())
    }
}

/// z ↦ M·z + t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub m: Mat2,
    pub t: [Elem; 2],
}

impl AffineMap {
    pub fn new(m: Mat2, t: [Elem; 2]) -> Result<AffineMap> {
        if mat2::det(&m).is_zero() {
            return Err(Error::NotAnAutomorphism("singular linear part".into()));
        }
        Ok(AffineMap { m, t })
    }

    pub fn identity(f: &Field) -> AffineMap {
        AffineMap { m: mat2::identity(f), t: [Elem::zero(f), Elem::zero(f)] }
    }

    pub fn linear(m: Mat2) -> Result<AffineMap> {
        let f = m[0][0].field();
        Self::new(m, [Elem::zero(&f), Elem::zero(&f)])
    }

    pub fn swap(f: &Field) -> AffineMap {
        AffineMap {
            m: [[Elem::zero(f), Elem::one(f)], [Elem::one(f), Elem::zero(f)]],
            t: [Elem::zero(f), Elem::zero(f)],
        }
    }

    pub fn translation(a: Elem, b: Elem) -> AffineMap {
        let f = a.field();
        AffineMap { m: mat2::identity(&f), t: [a, b] }
    }

    pub fn field(&self) -> Field {
        self.m[0][0].field()
    }

    /// Reads an affine map off an endomorphism of degree ≤ 1.
    pub fn from_endo(e: &PlaneEndo) -> Result<AffineMap> {
        if e.degree().unwrap_or(0) > 1 {
            return Err(Error::DegreeMismatch("map is not affine".into()));
        }
        let m = [[e.p1.coeff(1, 0), e.p1.coeff(0, 1)], [e.p2.coeff(1, 0), e.p2.coeff(0, 1)]];
        Self::new(m, [e.p1.coeff(0, 0), e.p2.coeff(0, 0)])
    }

    pub fn to_endo(&self) -> PlaneEndo {
        let f = self.field();
        let row = |i: usize| {
            let mut p = BiPoly::z1(&f).scale(&self.m[i][0]);
            p.add_assign(&BiPoly::z2(&f).scale(&self.m[i][1]));
            p.add_assign(&BiPoly::constant(&f, self.t[i].clone()));
            p
        };
        PlaneEndo { p1: row(0), p2: row(1) }
    }

    /// self∘o.
    pub fn compose(&self, o: &AffineMap) -> AffineMap {
        let m = mat2::mul(&self.m, &o.m);
        let mt = mat2::apply(&self.m, &o.t);
        AffineMap { m, t: [mt[0].add(&self.t[0]), mt[1].add(&self.t[1])] }
    }

    pub fn inverse(&self) -> AffineMap {
        let mi = mat2::inv(&self.m).expect("invertible by construction");
        let t = mat2::apply(&mi, &self.t);
        AffineMap { m: mi, t: [t[0].neg(), t[1].neg()] }
    }

    /// self∘g for a polynomial map g.
    pub fn apply(&self, g: &PlaneEndo) -> PlaneEndo {
        let f = g.field().clone();
        let row = |i: usize| {
            let mut p = g.p1.scale(&self.m[i][0]);
            p.add_assign(&g.p2.scale(&self.m[i][1]));
            p.add_assign(&BiPoly::constant(&f, self.t[i].clone()));
            p
        };
        PlaneEndo { p1: row(0), p2: row(1) }
    }

    pub fn apply_point(&self, v: &[Elem; 2]) -> [Elem; 2] {
        let w = mat2::apply(&self.m, v);
        [w[0].add(&self.t[0]), w[1].add(&self.t[1])]
    }

    /// Membership in Aff ∩ E: the linear part is upper triangular.
    /// The matrix part as a linear map.
    pub fn linear_part(&self) -> AffineMap {
        AffineMap { m: self.m.clone(), t: [Elem::zero(&self.field()), Elem::zero(&self.field())] }
    }

    pub fn is_triangular(&self) -> bool {
        self.m[1][0].is_zero()
    }

    pub fn is_identity(&self) -> bool {
        mat2::is_identity(&self.m) && self.t.iter().all(|c| c.is_zero())
    }

    pub fn is_linear(&self) -> bool {
        self.t.iter().all(|c| c.is_zero())
    }

    /// As an elementary map; requires `is_triangular`.
    pub fn to_elementary(&self) -> ElementaryMap {
        debug_assert!(self.is_triangular());
        let f = self.field();
        ElementaryMap {
            alpha: self.m[0][0].clone(),
            beta: self.m[1][1].clone(),
            beta_p: self.t[1].clone(),
            p: UniPoly::new(&f, vec![self.t[0].clone(), self.m[0][1].clone()]),
        }
    }
}

/// (z₁, z₂) ↦ (α z₁ + p(z₂), β z₂ + β′).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryMap {
    pub alpha: Elem,
    pub beta: Elem,
    pub beta_p: Elem,
    pub p: UniPoly<Elem>,
}

impl ElementaryMap {
    pub fn new(alpha: Elem, beta: Elem, beta_p: Elem, p: UniPoly<Elem>) -> Result<ElementaryMap> {
        if alpha.is_zero() || beta.is_zero() {
            return Err(Error::NotAnAutomorphism("elementary map with zero scaling".into()));
        }
        Ok(ElementaryMap { alpha, beta, beta_p, p })
    }

    /// (z₁ + p(z₂), z₂).
    pub fn shear(p: UniPoly<Elem>) -> ElementaryMap {
        let f = p.ctx().clone();
        ElementaryMap { alpha: Elem::one(&f), beta: Elem::one(&f), beta_p: Elem::zero(&f), p }
    }

    pub fn field(&self) -> Field {
        self.alpha.field()
    }

    /// Degree as a plane map: max(1, deg p).
    pub fn degree(&self) -> u32 {
        self.p.degree().unwrap_or(0).max(1) as u32
    }

    pub fn to_endo(&self) -> PlaneEndo {
        self.apply(&PlaneEndo::identity(&self.field()))
    }

    pub fn is_affine(&self) -> bool {
        self.p.degree().unwrap_or(0) <= 1
    }

    pub fn to_affine(&self) -> AffineMap {
        debug_assert!(self.is_affine());
        let f = self.field();
        AffineMap {
            m: [[self.alpha.clone(), self.p.coeff(1)], [Elem::zero(&f), self.beta.clone()]],
            t: [self.p.coeff(0), self.beta_p.clone()],
        }
    }

    /// The affine substitution u ↦ (u − β′)/β as a univariate polynomial.
    fn unshift(&self) -> UniPoly<Elem> {
        let f = self.field();
        let bi = self.beta.inv().expect("nonzero");
        UniPoly::new(&f, vec![self.beta_p.neg().mul(&bi), bi])
    }

    pub fn inverse(&self) -> ElementaryMap {
        let f = self.field();
        let ai = self.alpha.inv().expect("nonzero");
        let bi = self.beta.inv().expect("nonzero");
        let p = self.p.compose(&self.unshift()).scale(&ai.neg());
        ElementaryMap { alpha: ai, beta: bi.clone(), beta_p: self.beta_p.neg().mul(&bi), p: UniPoly::new(&f, p.into_coeffs()) }
    }

    /// self∘o.
    pub fn compose(&self, o: &ElementaryMap) -> ElementaryMap {
        let f = self.field();
        let inner = UniPoly::new(&f, vec![o.beta_p.clone(), o.beta.clone()]);
        let p = o.p.scale(&self.alpha).add(&self.p.compose(&inner));
        ElementaryMap {
            alpha: self.alpha.mul(&o.alpha),
            beta: self.beta.mul(&o.beta),
            beta_p: self.beta.mul(&o.beta_p).add(&self.beta_p),
            p,
        }
    }

    /// self∘g.
    pub fn apply(&self, g: &PlaneEndo) -> PlaneEndo {
        let f = g.field().clone();
        let mut p1 = g.p1.scale(&self.alpha);
        let mut acc = BiPoly::zero(&f);
        for c in self.p.coeffs().iter().rev() {
            if !acc.is_zero() {
                acc = acc.mul(&g.p2);
            }
            acc.add_assign(&BiPoly::constant(&f, c.clone()));
        }
        p1.add_assign(&acc);
        let mut p2 = g.p2.scale(&self.beta);
        p2.add_assign(&BiPoly::constant(&f, self.beta_p.clone()));
        PlaneEndo { p1, p2 }
    }

    /// Splits self = ê∘s with ê = (z₁ + p̂(z₂), z₂), p̂ free of constant and linear
    /// terms, and s triangular affine.
    pub fn canonicalize(&self) -> (ElementaryMap, AffineMap) {
        let f = self.field();
        let big_p = self.p.compose(&self.unshift());
        let c0 = big_p.coeff(0);
        let c1 = big_p.coeff(1);
        let mut hat = big_p.into_coeffs();
        for c in hat.iter_mut().take(2) {
            *c = Elem::zero(&f);
        }
        let e_hat = ElementaryMap::shear(UniPoly::new(&f, hat));
        // s = (α z1 + c0 + c1 (β z2 + β′), β z2 + β′)
        let s = AffineMap {
            m: [[self.alpha.clone(), c1.mul(&self.beta)], [Elem::zero(&f), self.beta.clone()]],
            t: [c0.add(&c1.mul(&self.beta_p)), self.beta_p.clone()],
        };
        (e_hat, s)
    }

    pub fn is_canonical(&self) -> bool {
        self.alpha.is_one()
            && self.beta.is_one()
            && self.beta_p.is_zero()
            && self.p.coeff(0).is_zero()
            && self.p.coeff(1).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn compose_examples() {
        let f = q();
        let e = PlaneEndo::new(BiPoly::from_ints(&f, &[(1, 0, 1), (0, 2, 1)]), BiPoly::z2(&f)).unwrap();
        let tau = PlaneEndo::swap(&f);
        let c = e.compose(&tau).unwrap();
        assert_eq!(c.p1, BiPoly::from_ints(&f, &[(0, 1, 1), (2, 0, 1)]));
        assert_eq!(c.p2, BiPoly::z1(&f));
        let einv = PlaneEndo::new(BiPoly::from_ints(&f, &[(1, 0, 1), (0, 2, -1)]), BiPoly::z2(&f)).unwrap();
        assert!(e.compose(&einv).unwrap().is_identity());
        assert_eq!(e.eval(&[f.int(0), f.int(2)]).unwrap(), [f.int(4), f.int(2)]);
    }

    #[test]
    fn elementary_algebra() {
        let f = q();
        let e = ElementaryMap::new(
            f.int(2),
            f.int(3),
            f.int(1),
            UniPoly::new(&f, vec![f.int(1), f.int(-1), f.int(4), f.int(1)]),
        )
        .unwrap();
        let id = PlaneEndo::identity(&f);
        assert_eq!(e.inverse().apply(&e.to_endo()), id);
        let (hat, s) = e.canonicalize();
        assert!(hat.is_canonical());
        assert_eq!(hat.apply(&s.to_endo()), e.to_endo());
        let e2 = ElementaryMap::shear(UniPoly::new(&f, vec![f.int(0), f.int(0), f.int(5)]));
        assert_eq!(e2.compose(&e).to_endo(), e2.to_endo().compose(&e.to_endo()).unwrap());
    }

    #[test]
    fn affine_algebra() {
        let f = q();
        let a = AffineMap::new([[f.int(1), f.int(2)], [f.int(3), f.int(4)]], [f.int(5), f.int(-1)]).unwrap();
        assert!(a.compose(&a.inverse()).is_identity());
        assert_eq!(AffineMap::from_endo(&a.to_endo()).unwrap(), a);
        let e = a.apply(&PlaneEndo::swap(&f));
        assert_eq!(e, a.to_endo().compose(&PlaneEndo::swap(&f)).unwrap());
    }
}
