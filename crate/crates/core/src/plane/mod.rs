//! Endomorphisms and automorphisms of the affine plane.

mod maps;
mod word;

pub use maps::{AffineMap, ElementaryMap, PlaneEndo};
pub use word::{decompose_endo, normalize_word, Factor, TameDecomposition};

use crate::error::{Error, Result};
use crate::fields::{Elem, Field, Scalar};
use crate::poly::BiPoly;

/// An automorphism with its exact inverse and canonical amalgam word.
#[derive(Clone, Debug)]
pub struct PlaneAut {
    forward: PlaneEndo,
    inverse: PlaneEndo,
    word: TameDecomposition,
}

impl PartialEq for PlaneAut {
    fn eq(&self, o: &Self) -> bool {
        self.forward == o.forward
    }
}
impl Eq for PlaneAut {}

/// A point of P¹: the line {z₂ = λz₁} for finite λ, or the z₂-axis for ∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjPoint {
    Finite(Elem),
    Infinity,
}

impl PlaneAut {
    /// Certify `f` as invertible; fails with `NotAnAutomorphism`.
    pub fn invert(f: &PlaneEndo) -> Result<PlaneAut> {
        let word = decompose_endo(f)?;
        let inverse = word.inverse().recompose();
        Ok(PlaneAut { forward: f.clone(), inverse, word })
    }

    pub fn from_word(word: TameDecomposition) -> PlaneAut {
        let forward = word.recompose();
        let inverse = word.inverse().recompose();
        PlaneAut { forward, inverse, word }
    }

    pub fn identity(field: &Field) -> PlaneAut {
        Self::from_affine(AffineMap::identity(field))
    }

    pub fn swap(field: &Field) -> PlaneAut {
        Self::from_affine(AffineMap::swap(field))
    }

    pub fn from_affine(a: AffineMap) -> PlaneAut {
        Self::from_word(TameDecomposition::affine(a))
    }

    pub fn from_elementary(e: &ElementaryMap) -> PlaneAut {
        Self::from_word(normalize_word(&e.field(), vec![Factor::E(e.clone())]))
    }

    /// Diagonal linear map (a z₁, b z₂).
    pub fn diagonal(a: Elem, b: Elem) -> Result<PlaneAut> {
        Ok(Self::from_affine(AffineMap::linear(crate::linalg::mat2::diag(a, b))?))
    }

    pub fn forward(&self) -> &PlaneEndo {
        &self.forward
    }

    pub fn inverse(&self) -> &PlaneEndo {
        &self.inverse
    }

    pub fn word(&self) -> &TameDecomposition {
        &self.word
    }

    pub fn field(&self) -> &Field {
        self.forward.field()
    }

    pub fn degree(&self) -> u32 {
        self.forward.degree().unwrap_or(0)
    }

    pub fn polydegree(&self) -> Vec<u32> {
        self.word.polydegree()
    }

    pub fn is_affine(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.forward.is_identity()
    }

    /// The inverse as an automorphism.
    pub fn inv(&self) -> PlaneAut {
        PlaneAut { forward: self.inverse.clone(), inverse: self.forward.clone(), word: self.word.inverse() }
    }

    /// self∘o, computed through the amalgam words.
    pub fn compose(&self, o: &PlaneAut) -> Result<PlaneAut> {
        if self.field() != o.field() {
            return Err(Error::DescriptorMismatch(format!("{} vs {}", self.field(), o.field())));
        }
        Ok(Self::from_word(o.word.then(&self.word)))
    }

    /// Compose a chain left to right: maps[0]∘maps[1]∘….
    pub fn compose_all(maps: &[&PlaneAut]) -> Result<PlaneAut> {
        let mut acc = maps[0].clone();
        for m in &maps[1..] {
            acc = acc.compose(m)?;
        }
        Ok(acc)
    }

    /// g⁻¹∘self∘g.
    pub fn conjugate_by(&self, g: &PlaneAut) -> Result<PlaneAut> {
        g.inv().compose(self)?.compose(g)
    }

    pub fn pow(&self, n: u32) -> PlaneAut {
        let mut acc = PlaneAut::identity(self.field());
        for _ in 0..n {
            acc = acc.compose(self).expect("same field");
        }
        acc
    }

    pub fn map_coeffs(&self, target: &Field, f: impl Fn(&Elem) -> Elem) -> Result<PlaneAut> {
        PlaneAut::invert(&self.forward.map_coeffs(target, f))
    }

    /// The anchor line: the line through the origin whose image has degree below deg f.
    pub fn anchor_line(&self) -> Result<ProjPoint> {
        anchor_line(&self.forward)
    }
}

/// Anchor line read from the top homogeneous form F = c·L^d of the dominant component.
pub fn anchor_line(f: &PlaneEndo) -> Result<ProjPoint> {
    let d = f.degree().unwrap_or(0);
    if d <= 1 {
        return Err(Error::DegreeTooLow(format!("degree {d}")));
    }
    let field = f.field().clone();
    let comp = if f.p1.degree() == Some(d) { &f.p1 } else { &f.p2 };
    let form = comp.homogeneous(d);
    let c0 = form.coeff(0, d);
    let (line, point) = if !c0.is_zero() {
        let a = form.coeff(1, d - 1).div(&c0.mul(&field.int(d as i64)))?;
        let l = BiPoly::z1(&field).scale(&a).add(&BiPoly::z2(&field));
        (l.pow(d).scale(&c0), ProjPoint::Finite(a.neg()))
    } else {
        let c = form.coeff(d, 0);
        (BiPoly::z1(&field).pow(d).scale(&c), ProjPoint::Infinity)
    };
    if line != form {
        return Err(Error::NotAnAutomorphism("top form is not a power of a linear form".into()));
    }
    Ok(point)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_examples() {
        let f = Field::rationals();
        let e = PlaneEndo::new(BiPoly::from_ints(&f, &[(1, 0, 1), (0, 2, 1)]), BiPoly::z2(&f)).unwrap();
        assert_eq!(anchor_line(&e).unwrap(), ProjPoint::Finite(f.int(0)));
        let sw = PlaneEndo::swap(&f).compose(&e).unwrap();
        assert_eq!(anchor_line(&sw).unwrap(), ProjPoint::Finite(f.int(0)));
        let aut = PlaneAut::invert(&sw).unwrap();
        assert_eq!(aut.inv().anchor_line().unwrap(), ProjPoint::Infinity);
        assert!(matches!(anchor_line(&PlaneEndo::identity(&f)), Err(Error::DegreeTooLow(_))));
    }

    #[test]
    fn invert_examples() {
        let f = Field::rationals();
        let e = PlaneEndo::new(BiPoly::from_ints(&f, &[(1, 0, 1), (0, 2, 1)]), BiPoly::z2(&f)).unwrap();
        let a = PlaneAut::invert(&e).unwrap();
        assert_eq!(a.inverse().p1, BiPoly::from_ints(&f, &[(1, 0, 1), (0, 2, -1)]));
        let d = PlaneEndo::new(BiPoly::from_ints(&f, &[(1, 0, 2)]), BiPoly::from_ints(&f, &[(0, 1, 3)])).unwrap();
        let da = PlaneAut::invert(&d).unwrap();
        assert_eq!(da.inverse().p1, BiPoly::z1(&f).scale(&f.rat(1, 2)));
        assert_eq!(da.inverse().p2, BiPoly::z2(&f).scale(&f.rat(1, 3)));
        assert!(da.polydegree().is_empty());
        let c = a.compose(&da).unwrap();
        assert_eq!(c.forward(), &e.compose(&d).unwrap());
        assert!(c.compose(&c.inv()).unwrap().is_identity());
    }
}
