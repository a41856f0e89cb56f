use std::fmt;

use super::Scalar;
use crate::error::{Error, Result};

/// Dense univariate polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly<K: Scalar> {
    ctx: K::Ctx,
    coeffs: Vec<K>,
}

impl<K: Scalar> fmt::Debug for UniPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl<K: Scalar> UniPoly<K> {
    pub fn new(ctx: &K::Ctx, mut coeffs: Vec<K>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { ctx: ctx.clone(), coeffs }
    }

    pub fn zero(ctx: &K::Ctx) -> Self {
        UniPoly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn one(ctx: &K::Ctx) -> Self {
        Self::constant(K::one(ctx))
    }

    pub fn constant(c: K) -> Self {
        let ctx = c.ctx();
        Self::new(&ctx, vec![c])
    }

    /// The monomial c·x^e.
    pub fn monomial(c: K, e: usize) -> Self {
        let ctx = c.ctx();
        let mut v = vec![K::zero(&ctx); e];
        v.push(c);
        Self::new(&ctx, v)
    }

    /// The variable x.
    pub fn x(ctx: &K::Ctx) -> Self {
        Self::monomial(K::one(ctx), 1)
    }

    /// x − a.
    pub fn linear_root(a: &K) -> Self {
        let ctx = a.ctx();
        Self::new(&ctx, vec![a.neg(), K::one(&ctx)])
    }

    pub fn ctx(&self) -> &K::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<K> {
        self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> K {
        self.coeffs.get(i).cloned().unwrap_or_else(|| K::zero(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&K> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => v.push(a.add(b)),
                (Some(a), None) => v.push(a.clone()),
                (None, Some(b)) => v.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        Self::new(&self.ctx, v)
    }

    pub fn neg(&self) -> Self {
        UniPoly { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        UniPoly { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.ctx);
        }
        if o.coeffs.len() == 1 {
            return self.scale(&o.coeffs[0]);
        }
        if self.coeffs.len() == 1 {
            return o.scale(&self.coeffs[0]);
        }
        let mut v = vec![K::zero(&self.ctx); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j].add_assign(&a.mul(b));
                }
            }
        }
        Self::new(&self.ctx, v)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx);
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

    /// Euclidean division: `self = q·d + r` with deg r < deg d.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(&self.ctx), self.clone()));
        }
        let mut q = vec![K::zero(&self.ctx); r.len() - dd];
        for i in (0..q.len()).rev() {
            let top = &r[i + dd];
            if top.is_zero() {
                continue;
            }
            let c = top.mul(&lead_inv);
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    r[i + j] = r[i + j].sub(&c.mul(dc));
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((Self::new(&self.ctx, q), Self::new(&self.ctx, r)))
    }

    /// Exact quotient; the caller guarantees divisibility.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        debug_assert!(r.is_zero(), "inexact polynomial division");
        Ok(q)
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero lead")),
        }
    }

    /// Monic gcd (zero iff both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        for (p, q) in [(self, o), (o, self)] {
            if let Some((root, e)) = p.linear_power() {
                let m = q.root_multiplicity(&root).min(e);
                let lin = Self::new(&self.ctx, vec![root.neg(), K::one(&self.ctx)]);
                return lin.pow(m as u32);
            }
        }
        let mut a = self.monic();
        let mut b = o.monic();
        while !b.is_zero() {
            if b.degree() == Some(0) {
                return Self::one(&self.ctx);
            }
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// (a, e) when self = c·(x − a)^e with e ≥ 1.
    fn linear_power(&self) -> Option<(K, usize)> {
        let e = self.degree().filter(|&e| e >= 1)?;
        let lead = &self.coeffs[e];
        let root = self.coeffs[e - 1].div(&lead.mul(&K::from_i64(&self.ctx, e as i64))).ok()?.neg();
        if self.coeffs[..e - 1].iter().all(|c| c.is_zero()) && root.is_zero() {
            return Some((root, e));
        }
        let lin = Self::new(&self.ctx, vec![root.neg(), K::one(&self.ctx)]);
        (lin.pow(e as u32).scale(lead) == *self).then_some((root, e))
    }

    /// Multiplicity of a as a root; unbounded for the zero polynomial.
    fn root_multiplicity(&self, a: &K) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() {
            // synthetic division by (x − a)
            let n = p.coeffs.len();
            let mut q = vec![K::zero(&self.ctx); n - 1];
            let mut carry = K::zero(&self.ctx);
            for i in (0..n).rev() {
                let v = p.coeffs[i].add(&carry.mul(a));
                if i == 0 {
                    if !v.is_zero() {
                        return m;
                    }
                } else {
                    q[i - 1] = v.clone();
                }
                carry = v;
            }
            p = Self::new(&self.ctx, q);
            m += 1;
        }
        m
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// p(q(x)).
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// p(x + a).
    pub fn shift(&self, a: &K) -> Self {
        let lin = Self::new(&self.ctx, vec![a.clone(), K::one(&self.ctx)]);
        self.compose(&lin)
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&K::from_i64(&self.ctx, i as i64)))
            .collect();
        Self::new(&self.ctx, v)
    }

    /// Largest e with (x − a)^e dividing self, and the cofactor. Panics on zero input.
    pub fn split_root(&self, a: &K) -> (u32, Self) {
        assert!(!self.is_zero(), "multiplicity of a root of zero");
        let mut cur = self.clone();
        let mut e = 0;
        loop {
            // synthetic division by (x - a)
            let n = cur.coeffs.len();
            if n <= 1 {
                return (e, cur);
            }
            let mut q = vec![K::zero(&self.ctx); n - 1];
            let mut carry = K::zero(&self.ctx);
            for i in (1..n).rev() {
                carry = carry.mul(a).add(&cur.coeffs[i]);
                q[i - 1] = carry.clone();
            }
            let rem = carry.mul(a).add(&cur.coeffs[0]);
            if !rem.is_zero() {
                return (e, cur);
            }
            cur = Self::new(&self.ctx, q);
            e += 1;
        }
    }

    pub fn map<L: Scalar>(&self, ctx: &L::Ctx, f: impl Fn(&K) -> L) -> UniPoly<L> {
        UniPoly::new(ctx, self.coeffs.iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::cyclo::{Cyclo, CycloField};

    fn poly(v: &[i64]) -> UniPoly<Cyclo> {
        let f = CycloField::rationals();
        UniPoly::new(&f, v.iter().map(|&c| Cyclo::from_i64(&f, c)).collect())
    }

    #[test]
    fn divrem_and_gcd() {
        let a = poly(&[-1, 0, 1]);
        let b = poly(&[-1, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q, poly(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&poly(&[1, 1])), poly(&[1, 1]));
        assert_eq!(a.gcd(&poly(&[2, 1])), poly(&[1]));
    }

    #[test]
    fn split_root_multiplicity() {
        let f = CycloField::rationals();
        let p = poly(&[-2, 1]).pow(3).mul(&poly(&[1, 1]));
        let (e, rest) = p.split_root(&Cyclo::from_i64(&f, 2));
        assert_eq!(e, 3);
        assert_eq!(rest, poly(&[1, 1]));
    }

    #[test]
    fn compose_shift_derivative() {
        let f = CycloField::rationals();
        let p = poly(&[1, 0, 1]);
        assert_eq!(p.shift(&Cyclo::from_i64(&f, 1)), poly(&[2, 2, 1]));
        assert_eq!(p.compose(&poly(&[0, 0, 1])), poly(&[1, 0, 0, 0, 1]));
        assert_eq!(p.derivative(), poly(&[0, 2]));
    }
}
