use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::cyclo::{Cyclo, CycloField};
use super::upoly::UniPoly;
use crate::error::{Error, Result};

/// κ(x) for a cyclotomic κ, with a named variable.
#[derive(Debug)]
pub struct RfCtx {
    pub base: Arc<CycloField>,
    pub var: String,
}

impl PartialEq for RfCtx {
    fn eq(&self, o: &Self) -> bool {
        self.base.k() == o.base.k() && self.var == o.var
    }
}
impl Eq for RfCtx {}

impl RfCtx {
    pub fn new(base: Arc<CycloField>, var: &str) -> Arc<RfCtx> {
        Arc::new(RfCtx { base, var: var.to_string() })
    }
}

pub type KPoly = UniPoly<Cyclo>;

/// Reduced fraction num/den with monic den.
#[derive(Clone)]
pub struct RatFunc {
    ctx: Arc<RfCtx>,
    num: KPoly,
    den: KPoly,
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &Self) -> bool {
        *self.ctx == *o.ctx && self.num == o.num && self.den == o.den
    }
}
impl Eq for RatFunc {}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "{:?}/{:?}", self.num, self.den)
        }
    }
}

/// Valuation value: an integer or the +∞ sentinel of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn add(self, o: Valuation) -> Valuation {
        match (self, o) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

/// The local ring κ[x] at x = center, with uniformizer t = x − center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DvrContext {
    pub field: Arc<RfCtx>,
    pub center: Cyclo,
}

impl DvrContext {
    pub fn new(field: Arc<RfCtx>, center: Cyclo) -> DvrContext {
        assert_eq!(center.field().k(), field.base.k(), "center must lie in the base field");
        DvrContext { field, center }
    }

    /// t = x − center.
    pub fn uniformizer(&self) -> RatFunc {
        RatFunc::from_poly(&self.field, KPoly::linear_root(&self.center))
    }

    /// t^n for any integer n.
    pub fn t_pow(&self, n: i64) -> RatFunc {
        let t = KPoly::linear_root(&self.center).pow(n.unsigned_abs() as u32);
        if n >= 0 {
            RatFunc::from_poly(&self.field, t)
        } else {
            RatFunc::from_parts(&self.field, KPoly::one(&self.field.base), t).expect("nonzero")
        }
    }

    pub fn valuation(&self, a: &RatFunc) -> Result<Valuation> {
        if *a.ctx != *self.field {
            return Err(Error::DescriptorMismatch("element and valuation ring disagree".into()));
        }
        Ok(a.valuation_at(&self.center))
    }

    pub fn residue(&self, a: &RatFunc) -> Result<Cyclo> {
        if *a.ctx != *self.field {
            return Err(Error::DescriptorMismatch("element and valuation ring disagree".into()));
        }
        a.residue_at(&self.center)
    }
}

impl RatFunc {
    pub fn ctx(&self) -> &Arc<RfCtx> {
        &self.ctx
    }

    pub fn num(&self) -> &KPoly {
        &self.num
    }

    pub fn den(&self) -> &KPoly {
        &self.den
    }

    pub fn zero(ctx: &Arc<RfCtx>) -> RatFunc {
        RatFunc { ctx: ctx.clone(), num: KPoly::zero(&ctx.base), den: KPoly::one(&ctx.base) }
    }

    pub fn one(ctx: &Arc<RfCtx>) -> RatFunc {
        Self::constant(ctx, Cyclo::one(&ctx.base))
    }

    pub fn constant(ctx: &Arc<RfCtx>, c: Cyclo) -> RatFunc {
        Self::from_poly(ctx, KPoly::constant(c))
    }

    pub fn from_poly(ctx: &Arc<RfCtx>, p: KPoly) -> RatFunc {
        RatFunc { ctx: ctx.clone(), num: p, den: KPoly::one(&ctx.base) }
    }

    /// The variable x.
    pub fn x(ctx: &Arc<RfCtx>) -> RatFunc {
        Self::from_poly(ctx, KPoly::x(&ctx.base))
    }

    /// num/den reduced to canonical form.
    pub fn from_parts(ctx: &Arc<RfCtx>, num: KPoly, den: KPoly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(ctx));
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g)?, den.div_exact(&g)?)
            }
        };
        let lead = den.lead().expect("nonzero").clone();
        if lead.is_one() {
            return Ok(RatFunc { ctx: ctx.clone(), num, den });
        }
        let li = lead.inv()?;
        Ok(RatFunc { ctx: ctx.clone(), num: num.scale(&li), den: den.scale(&li) })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The base-field value when the element is constant.
    pub fn as_constant(&self) -> Option<Cyclo> {
        if self.den.is_one() && self.num.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(&self.ctx, self.num.add(&o.num));
        }
        if self.den == o.den {
            let n = self.num.add(&o.num);
            return Self::from_parts(&self.ctx, n, self.den.clone()).expect("nonzero den");
        }
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        let d = self.den.mul(&o.den);
        Self::from_parts(&self.ctx, n, d).expect("nonzero den")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { ctx: self.ctx.clone(), num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.ctx);
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(&self.ctx, self.num.mul(&o.num));
        }
        // cross-cancel so the product is already reduced
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let (n1, d2) = if g1.is_one() {
            (self.num.clone(), o.den.clone())
        } else {
            (self.num.div_exact(&g1).unwrap(), o.den.div_exact(&g1).unwrap())
        };
        let (n2, d1) = if g2.is_one() {
            (o.num.clone(), self.den.clone())
        } else {
            (o.num.div_exact(&g2).unwrap(), self.den.div_exact(&g2).unwrap())
        };
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lead = den.lead().expect("nonzero").clone();
        if lead.is_one() {
            RatFunc { ctx: self.ctx.clone(), num, den }
        } else {
            let li = lead.inv().unwrap();
            RatFunc { ctx: self.ctx.clone(), num: num.scale(&li), den: den.scale(&li) }
        }
    }

    pub fn scale(&self, c: &Cyclo) -> RatFunc {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        RatFunc { ctx: self.ctx.clone(), num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lead = self.num.lead().unwrap().inv()?;
        Ok(RatFunc { ctx: self.ctx.clone(), num: self.den.scale(&lead), den: self.num.scale(&lead) })
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }

    /// Order of vanishing at x = a.
    pub fn valuation_at(&self, a: &Cyclo) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinity;
        }
        let (vn, _) = self.num.split_root(a);
        let (vd, _) = self.den.split_root(a);
        Valuation::Finite(vn as i64 - vd as i64)
    }

    /// Value at x = a; `NotIntegral` when a is a pole.
    pub fn residue_at(&self, a: &Cyclo) -> Result<Cyclo> {
        match self.valuation_at(a) {
            Valuation::Infinity => Ok(Cyclo::zero(&self.ctx.base)),
            Valuation::Finite(v) if v < 0 => Err(Error::NotIntegral(v)),
            Valuation::Finite(v) if v > 0 => Ok(Cyclo::zero(&self.ctx.base)),
            Valuation::Finite(_) => self.num.eval(a).div(&self.den.eval(a)),
        }
    }

    /// Substitute x = a when a is not a pole.
    pub fn eval(&self, a: &Cyclo) -> Result<Cyclo> {
        let d = self.den.eval(a);
        if d.is_zero() {
            return Err(Error::NotIntegral(self.valuation_at(a).finite().unwrap_or(0)));
        }
        self.num.eval(a).div(&d)
    }

    /// First `n` Taylor coefficients at x = a of an element regular there.
    pub fn taylor(&self, a: &Cyclo, n: usize) -> Result<Vec<Cyclo>> {
        let num = self.num.shift(a);
        let den = self.den.shift(a);
        let d0 = den.coeff(0);
        if d0.is_zero() {
            return Err(Error::NotIntegral(self.valuation_at(a).finite().unwrap_or(-1)));
        }
        let d0i = d0.inv()?;
        let mut out: Vec<Cyclo> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = num.coeff(i);
            for j in 1..=i {
                let dj = den.coeff(j);
                if !dj.is_zero() {
                    acc = acc.sub(&dj.mul(&out[i - j]));
                }
            }
            out.push(acc.mul(&d0i));
        }
        Ok(out)
    }

    /// Principal part at x = a: the unique Σ_{i≥1} c_i (x−a)^{−i} with self − it regular at a.
    pub fn principal_part(&self, a: &Cyclo) -> RatFunc {
        let v = match self.valuation_at(a) {
            Valuation::Finite(v) if v < 0 => (-v) as usize,
            _ => return Self::zero(&self.ctx),
        };
        let t = KPoly::linear_root(a);
        let tv = t.pow(v as u32);
        let shifted = self.mul(&Self::from_poly(&self.ctx, tv.clone()));
        let coeffs = shifted.taylor(a, v).expect("regular after clearing the pole");
        // Σ_{i<v} c_i t^i, over t^v
        let mut num = KPoly::zero(&self.ctx.base);
        for (i, c) in coeffs.iter().enumerate() {
            num = num.add(&t.pow(i as u32).scale(c));
        }
        Self::from_parts(&self.ctx, num, tv).expect("nonzero")
    }

    /// Monic κ[x]-factor of the denominator.
    pub fn denominator(&self) -> &KPoly {
        &self.den
    }

    pub fn total_cmp(&self, o: &RatFunc) -> Ordering {
        let c = |a: &KPoly, b: &KPoly| {
            a.coeffs().len().cmp(&b.coeffs().len()).then_with(|| {
                for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                    let o = x.total_cmp(y);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
        };
        c(&self.den, &o.den).then_with(|| c(&self.num, &o.num))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<RfCtx> {
        RfCtx::new(CycloField::rationals(), "x")
    }

    fn p(v: &[i64]) -> KPoly {
        let f = CycloField::rationals();
        KPoly::new(&f, v.iter().map(|&c| Cyclo::from_i64(&f, c)).collect())
    }

    fn c(v: i64) -> Cyclo {
        Cyclo::from_i64(&CycloField::rationals(), v)
    }

    #[test]
    fn gcd_normalization() {
        let r = RatFunc::from_parts(&ctx(), p(&[-1, 0, 1]), p(&[-1, 1])).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.num(), &p(&[1, 1]));
        let s = RatFunc::from_parts(&ctx(), p(&[2]), p(&[4, 2])).unwrap();
        assert_eq!(s.den(), &p(&[2, 1]));
        assert_eq!(s.num(), &p(&[1]));
    }

    #[test]
    fn valuations_and_residues() {
        let a = RatFunc::from_parts(&ctx(), p(&[-2, 1]).pow(3), p(&[-1, 1])).unwrap();
        assert_eq!(a.valuation_at(&c(2)), Valuation::Finite(3));
        let inv_x = RatFunc::from_parts(&ctx(), p(&[1]), p(&[0, 1])).unwrap();
        assert_eq!(inv_x.valuation_at(&c(0)), Valuation::Finite(-1));
        assert_eq!(RatFunc::zero(&ctx()).valuation_at(&c(0)), Valuation::Infinity);
        let b = RatFunc::from_parts(&ctx(), p(&[1, 0, 1]), p(&[3, 1])).unwrap();
        let third = Cyclo::from_rational(
            &CycloField::rationals(),
            num_rational::BigRational::new(1.into(), 3.into()),
        );
        assert_eq!(b.residue_at(&c(0)).unwrap(), third);
        assert_eq!(inv_x.residue_at(&c(0)), Err(Error::NotIntegral(-1)));
        let t = RatFunc::from_poly(&ctx(), p(&[-5, 1]));
        assert!(t.residue_at(&c(5)).unwrap().is_zero());
    }

    #[test]
    fn principal_parts() {
        // 1/(x^2 (x-1)) at 0 is -1/x^2 - 1/x
        let a = RatFunc::from_parts(&ctx(), p(&[1]), p(&[0, 0, -1, 1])).unwrap();
        let pp = a.principal_part(&c(0));
        let expect = RatFunc::from_parts(&ctx(), p(&[-1, -1]), p(&[0, 0, 1])).unwrap();
        assert_eq!(pp, expect);
        let rest = a.sub(&pp);
        assert!(rest.valuation_at(&c(0)) >= Valuation::Finite(0));
    }
}
