//! Coefficient domains: ℚ, ℚ(ζ_k) and κ(x), plus valuations at points of the line.

pub mod cyclo;
pub mod ratfunc;
pub mod upoly;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use cyclo::{Cyclo, CycloField};
pub use ratfunc::{DvrContext, KPoly, RatFunc, RfCtx, Valuation};
pub use upoly::UniPoly;

use crate::error::{Error, Result};

/// Minimal field interface shared by the concrete scalar types.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Ctx: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_rational(ctx: &Self::Ctx, r: BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;

    fn from_i64(ctx: &Self::Ctx, v: i64) -> Self {
        Self::from_rational(ctx, BigRational::from_integer(BigInt::from(v)))
    }

    fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    fn add_assign(&mut self, o: &Self) {
        *self = self.add(o);
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx());
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
}

impl Scalar for Cyclo {
    type Ctx = Arc<CycloField>;
    fn ctx(&self) -> Self::Ctx {
        self.field().clone()
    }
    fn zero(ctx: &Self::Ctx) -> Self {
        Cyclo::zero(ctx)
    }
    fn one(ctx: &Self::Ctx) -> Self {
        Cyclo::one(ctx)
    }
    fn from_rational(ctx: &Self::Ctx, r: BigRational) -> Self {
        Cyclo::from_rational(ctx, r)
    }
    fn is_zero(&self) -> bool {
        Cyclo::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Cyclo::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        Cyclo::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Cyclo::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Cyclo::mul(self, o)
    }
    fn neg(&self) -> Self {
        Cyclo::neg(self)
    }
    fn inv(&self) -> Result<Self> {
        Cyclo::inv(self)
    }
    fn add_assign(&mut self, o: &Self) {
        Cyclo::add_assign(self, o)
    }
    fn pow(&self, e: u64) -> Self {
        Cyclo::pow(self, e)
    }
}

/// A coefficient field: ℚ(ζ_k) (k = 1 is ℚ) or κ(x) over such a κ.
#[derive(Clone, Debug)]
pub enum Field {
    Cyclo(Arc<CycloField>),
    RatFunc(Arc<RfCtx>),
}

impl PartialEq for Field {
    fn eq(&self, o: &Self) -> bool {
        match (self, o) {
            (Field::Cyclo(a), Field::Cyclo(b)) => a.k() == b.k(),
            (Field::RatFunc(a), Field::RatFunc(b)) => **a == **b,
            _ => false,
        }
    }
}
impl Eq for Field {}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Cyclo(c) if c.is_rationals() => write!(f, "Q"),
            Field::Cyclo(c) => write!(f, "Q(zeta_{})", c.k()),
            Field::RatFunc(r) if r.base.is_rationals() => write!(f, "Q({})", r.var),
            Field::RatFunc(r) => write!(f, "Q(zeta_{})({})", r.base.k(), r.var),
        }
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field::Cyclo(CycloField::rationals())
    }

    pub fn cyclotomic(k: u32) -> Field {
        Field::Cyclo(CycloField::get(k))
    }

    pub fn rational_functions(k: u32, var: &str) -> Field {
        Field::RatFunc(RfCtx::new(CycloField::get(k), var))
    }

    /// The constant field κ.
    pub fn base(&self) -> &Arc<CycloField> {
        match self {
            Field::Cyclo(c) => c,
            Field::RatFunc(r) => &r.base,
        }
    }

    pub fn base_field(&self) -> Field {
        Field::Cyclo(self.base().clone())
    }

    pub fn rf_ctx(&self) -> Option<&Arc<RfCtx>> {
        match self {
            Field::RatFunc(r) => Some(r),
            Field::Cyclo(_) => None,
        }
    }

    pub fn is_function_field(&self) -> bool {
        matches!(self, Field::RatFunc(_))
    }

    /// Same constants adjoined with a variable.
    pub fn with_variable(&self, var: &str) -> Field {
        Field::rational_functions(self.base().k(), var)
    }

    pub fn zeta(&self) -> Elem {
        self.embed(&Cyclo::zeta(self.base()))
    }

    /// Image of a base-field constant.
    pub fn embed(&self, c: &Cyclo) -> Elem {
        match self {
            Field::Cyclo(_) => Elem::C(c.clone()),
            Field::RatFunc(r) => Elem::R(RatFunc::constant(r, c.clone())),
        }
    }

    /// Moves a base constant into this field; other elements pass through.
    pub fn coerce(&self, e: Elem) -> Elem {
        match (self, e) {
            (Field::RatFunc(r), Elem::C(c)) => Elem::R(RatFunc::constant(r, c)),
            (_, e) => e,
        }
    }

    pub fn int(&self, v: i64) -> Elem {
        Elem::from_i64(self, v)
    }

    pub fn rat(&self, n: i64, d: i64) -> Elem {
        Elem::from_rational(self, BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// The transcendental x (panics for a constant field).
    pub fn x(&self) -> Elem {
        match self {
            Field::RatFunc(r) => Elem::R(RatFunc::x(r)),
            Field::Cyclo(_) => panic!("constant field has no variable"),
        }
    }
}

/// A scalar of some `Field`.
#[derive(Clone)]
pub enum Elem {
    C(Cyclo),
    R(RatFunc),
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::C(c) => write!(f, "{:?}", c),
            Elem::R(r) => write!(f, "{:?}", r),
        }
    }
}

impl PartialEq for Elem {
    fn eq(&self, o: &Self) -> bool {
        match (self, o) {
            (Elem::C(a), Elem::C(b)) => a == b,
            (Elem::R(a), Elem::R(b)) => a == b,
            (Elem::C(a), Elem::R(b)) | (Elem::R(b), Elem::C(a)) => b.as_constant().as_ref() == Some(a),
        }
    }
}
impl Eq for Elem {}

impl Elem {
    pub fn field(&self) -> Field {
        match self {
            Elem::C(c) => Field::Cyclo(c.field().clone()),
            Elem::R(r) => Field::RatFunc(r.ctx().clone()),
        }
    }

    /// Base-field value if the element is constant.
    pub fn as_cyclo(&self) -> Option<Cyclo> {
        match self {
            Elem::C(c) => Some(c.clone()),
            Elem::R(r) => r.as_constant(),
        }
    }

    pub fn as_ratfunc(&self) -> Option<&RatFunc> {
        match self {
            Elem::R(r) => Some(r),
            Elem::C(_) => None,
        }
    }

    /// Rational value if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_cyclo().and_then(|c| c.as_rational())
    }

    pub fn as_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        let r = self.as_rational()?;
        if r.is_integer() {
            r.to_integer().to_i64()
        } else {
            None
        }
    }

    fn lift(c: &Cyclo, like: &RatFunc) -> RatFunc {
        RatFunc::constant(like.ctx(), c.clone())
    }

    pub fn total_cmp(&self, o: &Elem) -> Ordering {
        match (self, o) {
            (Elem::C(a), Elem::C(b)) => a.total_cmp(b),
            (Elem::R(a), Elem::R(b)) => a.total_cmp(b),
            (Elem::C(a), Elem::R(b)) => Self::lift(a, b).total_cmp(b),
            (Elem::R(a), Elem::C(b)) => a.total_cmp(&Self::lift(b, a)),
        }
    }

    pub fn powi(&self, e: i64) -> Result<Elem> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }
}

impl Scalar for Elem {
    type Ctx = Field;

    fn ctx(&self) -> Field {
        self.field()
    }
    fn zero(ctx: &Field) -> Self {
        match ctx {
            Field::Cyclo(c) => Elem::C(Cyclo::zero(c)),
            Field::RatFunc(r) => Elem::R(RatFunc::zero(r)),
        }
    }
    fn one(ctx: &Field) -> Self {
        match ctx {
            Field::Cyclo(c) => Elem::C(Cyclo::one(c)),
            Field::RatFunc(r) => Elem::R(RatFunc::one(r)),
        }
    }
    fn from_rational(ctx: &Field, v: BigRational) -> Self {
        ctx.embed(&Cyclo::from_rational(ctx.base(), v))
    }
    fn is_zero(&self) -> bool {
        match self {
            Elem::C(c) => c.is_zero(),
            Elem::R(r) => r.is_zero(),
        }
    }
    fn is_one(&self) -> bool {
        match self {
            Elem::C(c) => c.is_one(),
            Elem::R(r) => r.is_one(),
        }
    }
    fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (Elem::C(a), Elem::C(b)) => Elem::C(a.add(b)),
            (Elem::R(a), Elem::R(b)) => Elem::R(a.add(b)),
            (Elem::C(a), Elem::R(b)) => Elem::R(Self::lift(a, b).add(b)),
            (Elem::R(a), Elem::C(b)) => Elem::R(a.add(&Self::lift(b, a))),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (Elem::C(a), Elem::C(b)) => Elem::C(a.mul(b)),
            (Elem::R(a), Elem::R(b)) => match (a.as_constant(), b.as_constant()) {
                (Some(c), _) => Elem::R(b.scale(&c)),
                (_, Some(c)) => Elem::R(a.scale(&c)),
                _ => Elem::R(a.mul(b)),
            },
            (Elem::C(a), Elem::R(b)) | (Elem::R(b), Elem::C(a)) => Elem::R(b.scale(a)),
        }
    }
    fn neg(&self) -> Self {
        match self {
            Elem::C(c) => Elem::C(c.neg()),
            Elem::R(r) => Elem::R(r.neg()),
        }
    }
    fn inv(&self) -> Result<Self> {
        match self {
            Elem::C(c) => Ok(Elem::C(c.inv()?)),
            Elem::R(r) => Ok(Elem::R(r.inv()?)),
        }
    }
    fn add_assign(&mut self, o: &Self) {
        match (&mut *self, o) {
            (Elem::C(a), Elem::C(b)) => a.add_assign(b),
            _ => *self = Scalar::add(&*self, o),
        }
    }
}

/// Binary field operation selector for [`field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked arithmetic: both operands must carry the same field descriptor.
pub fn field_arith(a: &Elem, b: &Elem, op: ArithOp) -> Result<Elem> {
    if a.field() != b.field() {
        return Err(Error::DescriptorMismatch(format!("{} vs {}", a.field(), b.field())));
    }
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b)?,
    })
}

/// Valuation of a function-field element at the center of `ctx`.
pub fn valuation(a: &Elem, ctx: &DvrContext) -> Result<Valuation> {
    match a {
        Elem::R(r) => ctx.valuation(r),
        Elem::C(_) => Err(Error::DescriptorMismatch("constant field element has no valuation".into())),
    }
}

/// Reduction modulo the uniformizer of an element of the valuation ring.
pub fn residue(a: &Elem, ctx: &DvrContext) -> Result<Cyclo> {
    match a {
        Elem::R(r) => ctx.residue(r),
        Elem::C(_) => Err(Error::DescriptorMismatch("constant field element has no residue".into())),
    }
}

/// Valuation at a point, treating constants as units.
pub fn valuation_lenient(a: &Elem, center: &Cyclo) -> Valuation {
    match a {
        Elem::R(r) => r.valuation_at(center),
        Elem::C(c) if c.is_zero() => Valuation::Infinity,
        Elem::C(_) => Valuation::Finite(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checked_arith() {
        let q = Field::rationals();
        let k3 = Field::cyclotomic(3);
        let s = field_arith(&q.rat(1, 2), &q.rat(1, 3), ArithOp::Add).unwrap();
        assert_eq!(s, q.rat(5, 6));
        assert!(matches!(
            field_arith(&q.int(1), &k3.int(1), ArithOp::Add),
            Err(Error::DescriptorMismatch(_))
        ));
        assert_eq!(field_arith(&q.int(1), &q.int(0), ArithOp::Div), Err(Error::DivisionByZero));
        let z = k3.zeta();
        assert!(field_arith(&z, &z.pow(2), ArithOp::Mul).unwrap().is_one());
    }

    #[test]
    fn mixed_promotion() {
        let f = Field::rational_functions(1, "x");
        let x = f.x();
        let c = Elem::C(Cyclo::from_i64(&CycloField::rationals(), 3));
        let s = x.add(&c);
        assert_eq!(s.field(), f);
        assert_eq!(f.int(3), c);
        assert_eq!(s.sub(&x), c);
    }
}
