//! Sparse bivariate polynomials in z₁, z₂.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::fields::{Cyclo, CycloField, Elem, Field, Scalar, UniPoly};

/// Exponent pair (i, j) of z₁^i z₂^j, ordered by total degree then by i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub u32, pub u32);

impl Mono {
    pub fn degree(self) -> u32 {
        self.0 + self.1
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then(self.0.cmp(&o.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    field: Field,
    terms: BTreeMap<Mono, Elem>,
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})", c)?;
            if m.0 > 0 {
                write!(f, "*z1^{}", m.0)?;
            }
            if m.1 > 0 {
                write!(f, "*z2^{}", m.1)?;
            }
        }
        Ok(())
    }
}

impl BiPoly {
    pub fn zero(field: &Field) -> BiPoly {
        BiPoly { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, c: Elem) -> BiPoly {
        Self::monomial(field, c, 0, 0)
    }

    pub fn one(field: &Field) -> BiPoly {
        Self::constant(field, Elem::one(field))
    }

    pub fn monomial(field: &Field, c: Elem, i: u32, j: u32) -> BiPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono(i, j), field.coerce(c));
        }
        BiPoly { field: field.clone(), terms }
    }

    pub fn z1(field: &Field) -> BiPoly {
        Self::monomial(field, Elem::one(field), 1, 0)
    }

    pub fn z2(field: &Field) -> BiPoly {
        Self::monomial(field, Elem::one(field), 0, 1)
    }

    /// Collects terms, summing repeats and dropping zeros.
    pub fn from_terms(field: &Field, terms: impl IntoIterator<Item = (Mono, Elem)>) -> BiPoly {
        let mut map: BTreeMap<Mono, Elem> = BTreeMap::new();
        for (m, c) in terms {
            let c = field.coerce(c);
            match map.get_mut(&m) {
                Some(v) => v.add_assign(&c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        BiPoly { field: field.clone(), terms: map }
    }

    /// Convenience for integer-coefficient literals: `[(i, j, c), ...]`.
    pub fn from_ints(field: &Field, terms: &[(u32, u32, i64)]) -> BiPoly {
        Self::from_terms(field, terms.iter().map(|&(i, j, c)| (Mono(i, j), field.int(c))))
    }

    /// p(z₂) as a bivariate polynomial.
    pub fn from_upoly_z2(field: &Field, p: &UniPoly<Elem>) -> BiPoly {
        Self::from_terms(field, p.coeffs().iter().enumerate().map(|(j, c)| (Mono(0, j as u32), c.clone())))
    }

    /// p(z₁) as a bivariate polynomial.
    pub fn from_upoly_z1(field: &Field, p: &UniPoly<Elem>) -> BiPoly {
        Self::from_terms(field, p.coeffs().iter().enumerate().map(|(i, c)| (Mono(i as u32, 0), c.clone())))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Elem> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Mono, Elem> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Elem {
        self.terms.get(&Mono(i, j)).cloned().unwrap_or_else(|| Elem::zero(&self.field))
    }

    /// Total degree; `None` stands for −∞ (zero polynomial).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn degree_in_z1(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.0).max()
    }

    pub fn degree_in_z2(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.1).max()
    }

    pub fn constant_term(&self) -> Elem {
        self.coeff(0, 0)
    }

    pub fn is_constant(&self) -> bool {
        self.degree().unwrap_or(0) == 0
    }

    /// The homogeneous component of degree d.
    pub fn homogeneous(&self, d: u32) -> BiPoly {
        let terms = self.terms.range(Mono(0, d)..=Mono(d, 0));
        BiPoly { field: self.field.clone(), terms: terms.map(|(m, c)| (*m, c.clone())).collect() }
    }

    /// Top-degree homogeneous component.
    pub fn leading_form(&self) -> BiPoly {
        match self.degree() {
            Some(d) => self.homogeneous(d),
            None => self.clone(),
        }
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let (big, small) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            match terms.get_mut(m) {
                Some(v) => {
                    v.add_assign(c);
                    if v.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(*m, c.clone());
                }
            }
        }
        BiPoly { field: self.field.clone(), terms }
    }

    pub fn add_assign(&mut self, o: &BiPoly) {
        for (m, c) in &o.terms {
            match self.terms.get_mut(m) {
                Some(v) => {
                    v.add_assign(c);
                    if v.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(*m, c.clone());
                }
            }
        }
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly { field: self.field.clone(), terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Elem) -> BiPoly {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        if c.is_one() {
            return self.clone();
        }
        BiPoly { field: self.field.clone(), terms: self.terms.iter().map(|(m, a)| (*m, a.mul(c))).collect() }
    }

    /// Multiply by z₁^a z₂^b.
    pub fn shift_exponents(&self, a: u32, b: u32) -> BiPoly {
        BiPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, c)| (Mono(m.0 + a, m.1 + b), c.clone())).collect(),
        }
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.field);
        }
        if o.terms.len() == 1 {
            let (m, c) = o.terms.iter().next().unwrap();
            return self.scale(c).shift_exponents(m.0, m.1);
        }
        if self.terms.len() == 1 {
            return o.mul(self);
        }
        if let Field::Cyclo(base) = &self.field {
            return self.mul_cleared(o, base);
        }
        let d1 = self.degree_in_z1().unwrap() + o.degree_in_z1().unwrap();
        let d2 = self.degree_in_z2().unwrap() + o.degree_in_z2().unwrap();
        let w = d2 as usize + 1;
        let mut acc: Vec<Option<Elem>> = vec![None; (d1 as usize + 1) * w];
        for (ma, a) in &self.terms {
            for (mb, b) in &o.terms {
                let idx = (ma.0 + mb.0) as usize * w + (ma.1 + mb.1) as usize;
                let p = a.mul(b);
                match &mut acc[idx] {
                    Some(v) => v.add_assign(&p),
                    slot => *slot = Some(p),
                }
            }
        }
        let mut terms = BTreeMap::new();
        for (idx, v) in acc.into_iter().enumerate() {
            if let Some(v) = v {
                if !v.is_zero() {
                    terms.insert(Mono((idx / w) as u32, (idx % w) as u32), v);
                }
            }
        }
        BiPoly { field: self.field.clone(), terms }
    }

    /// Numerators over a common denominator, one integer vector per term.
    fn cleared(&self) -> (Vec<(Mono, Vec<BigInt>)>, BigInt) {
        let mut den = BigInt::one();
        for c in self.terms.values() {
            let c = c.as_cyclo().expect("constant field");
            den = den.lcm(&c.denominator_lcm());
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let c = c.as_cyclo().expect("constant field");
                let v = c.coeffs().iter().map(|r| r.numer() * (&den / r.denom())).collect();
                (*m, v)
            })
            .collect();
        (terms, den)
    }

    /// Product over ℚ(ζ_k) with integer accumulation and a single normalization per term.
    fn mul_cleared(&self, o: &BiPoly, base: &Arc<CycloField>) -> BiPoly {
        let n = base.degree();
        let (a, da) = self.cleared();
        let (b, db) = o.cleared();
        let d1 = self.degree_in_z1().unwrap() + o.degree_in_z1().unwrap();
        let d2 = self.degree_in_z2().unwrap() + o.degree_in_z2().unwrap();
        let w = d2 as usize + 1;
        let len = 2 * n - 1;
        let mut acc: Vec<Option<Vec<BigInt>>> = vec![None; (d1 as usize + 1) * w];
        for (ma, va) in &a {
            for (mb, vb) in &b {
                let idx = (ma.0 + mb.0) as usize * w + (ma.1 + mb.1) as usize;
                let slot = acc[idx].get_or_insert_with(|| vec![BigInt::zero(); len]);
                for (i, x) in va.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in vb.iter().enumerate() {
                        if !y.is_zero() {
                            slot[i + j] += x * y;
                        }
                    }
                }
            }
        }
        let den = da * db;
        let mut terms = BTreeMap::new();
        for (idx, v) in acc.into_iter().enumerate() {
            if let Some(v) = v {
                let c = Cyclo::from_int_over(base, v, &den);
                if !c.is_zero() {
                    terms.insert(Mono((idx / w) as u32, (idx % w) as u32), Elem::C(c));
                }
            }
        }
        BiPoly { field: self.field.clone(), terms }
    }

    pub fn pow(&self, mut e: u32) -> BiPoly {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// self(p1, p2): substitute z₁ ↦ p1, z₂ ↦ p2.
    pub fn substitute(&self, p1: &BiPoly, p2: &BiPoly) -> BiPoly {
        let mut pows2 = PowerCache::new(p2.clone());
        self.substitute_with(p1, &mut pows2)
    }

    /// Substitution sharing a power cache for the z₂-image.
    pub fn substitute_with(&self, p1: &BiPoly, pows2: &mut PowerCache) -> BiPoly {
        if self.is_zero() {
            return Self::zero(&self.field);
        }
        // group by the z1 exponent, Horner in p1
        let top = self.degree_in_z1().unwrap();
        let mut rows: Vec<Vec<(u32, &Elem)>> = vec![Vec::new(); top as usize + 1];
        for (m, c) in &self.terms {
            rows[m.0 as usize].push((m.1, c));
        }
        let mut acc = Self::zero(&self.field);
        for i in (0..=top as usize).rev() {
            if !acc.is_zero() {
                acc = acc.mul(p1);
            }
            for &(j, c) in &rows[i] {
                acc.add_assign(&pows2.get(j).scale(c));
            }
        }
        acc
    }

    pub fn eval(&self, a: &Elem, b: &Elem) -> Elem {
        let mut acc = Elem::zero(&self.field);
        for (m, c) in &self.terms {
            acc.add_assign(&c.mul(&a.pow(m.0 as u64)).mul(&b.pow(m.1 as u64)));
        }
        acc
    }

    /// Partial derivative with respect to z₁.
    pub fn d_z1(&self) -> BiPoly {
        let f = &self.field;
        Self::from_terms(
            f,
            self.terms.iter().filter(|(m, _)| m.0 > 0).map(|(m, c)| (Mono(m.0 - 1, m.1), c.mul(&f.int(m.0 as i64)))),
        )
    }

    /// Partial derivative with respect to z₂.
    pub fn d_z2(&self) -> BiPoly {
        let f = &self.field;
        Self::from_terms(
            f,
            self.terms.iter().filter(|(m, _)| m.1 > 0).map(|(m, c)| (Mono(m.0, m.1 - 1), c.mul(&f.int(m.1 as i64)))),
        )
    }

    /// Exchange z₁ and z₂.
    pub fn swap_vars(&self) -> BiPoly {
        BiPoly { field: self.field.clone(), terms: self.terms.iter().map(|(m, c)| (Mono(m.1, m.0), c.clone())).collect() }
    }

    /// As a polynomial in z₂ alone, if z₁ does not occur.
    pub fn as_upoly_z2(&self) -> Option<UniPoly<Elem>> {
        if self.terms.keys().any(|m| m.0 > 0) {
            return None;
        }
        let d = self.degree_in_z2().unwrap_or(0) as usize;
        let mut v = vec![Elem::zero(&self.field); if self.is_zero() { 0 } else { d + 1 }];
        for (m, c) in &self.terms {
            v[m.1 as usize] = c.clone();
        }
        Some(UniPoly::new(&self.field, v))
    }

    /// Apply a coefficient map, landing in another field.
    pub fn map_coeffs(&self, target: &Field, f: impl Fn(&Elem) -> Elem) -> BiPoly {
        Self::from_terms(target, self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn try_map_coeffs(&self, target: &Field, f: impl Fn(&Elem) -> Result<Elem>) -> Result<BiPoly> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            out.push((*m, f(c)?));
        }
        Ok(Self::from_terms(target, out))
    }

    /// Terms of degree ≤ 1 only.
    pub fn is_affine(&self) -> bool {
        self.degree().unwrap_or(0) <= 1
    }

    /// Drop the constant term.
    pub fn without_constant(&self) -> BiPoly {
        let mut t = self.terms.clone();
        t.remove(&Mono(0, 0));
        BiPoly { field: self.field.clone(), terms: t }
    }
}

/// Memoized powers p⁰, p¹, … of a fixed polynomial.
pub struct PowerCache {
    pows: Vec<BiPoly>,
}

impl PowerCache {
    pub fn new(p: BiPoly) -> PowerCache {
        let one = BiPoly::one(p.field());
        PowerCache { pows: vec![one, p] }
    }

    pub fn base(&self) -> &BiPoly {
        &self.pows[1]
    }

    pub fn get(&mut self, e: u32) -> &BiPoly {
        while self.pows.len() <= e as usize {
            let next = self.pows.last().unwrap().mul(&self.pows[1]);
            self.pows.push(next);
        }
        &self.pows[e as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let mut v = vec![Mono(0, 2), Mono(1, 0), Mono(2, 0), Mono(1, 1), Mono(0, 0)];
        v.sort();
        assert_eq!(v, vec![Mono(0, 0), Mono(1, 0), Mono(0, 2), Mono(1, 1), Mono(2, 0)]);
    }

    #[test]
    fn arithmetic_and_substitution() {
        let q = Field::rationals();
        let f = BiPoly::from_ints(&q, &[(1, 0, 1), (0, 2, 1)]);
        let g = BiPoly::from_ints(&q, &[(1, 0, 1), (0, 2, -1)]);
        assert_eq!(f.add(&g), BiPoly::from_ints(&q, &[(1, 0, 2)]));
        assert_eq!(f.mul(&g), BiPoly::from_ints(&q, &[(2, 0, 1), (0, 4, -1)]));
        let s = f.substitute(&BiPoly::z2(&q), &BiPoly::z1(&q));
        assert_eq!(s, BiPoly::from_ints(&q, &[(0, 1, 1), (2, 0, 1)]));
        assert_eq!(f.degree(), Some(2));
        assert_eq!(BiPoly::zero(&q).degree(), None);
        assert_eq!(f.leading_form(), BiPoly::from_ints(&q, &[(0, 2, 1)]));
        assert_eq!(f.eval(&q.int(0), &q.int(2)), q.int(4));
    }

    #[test]
    fn derivatives() {
        let q = Field::rationals();
        let f = BiPoly::from_ints(&q, &[(2, 1, 3), (0, 3, 1)]);
        assert_eq!(f.d_z1(), BiPoly::from_ints(&q, &[(1, 1, 6)]));
        assert_eq!(f.d_z2(), BiPoly::from_ints(&q, &[(2, 0, 3), (0, 2, 3)]));
    }
}
