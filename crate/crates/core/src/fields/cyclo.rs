use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The field ℚ(ζ_k) presented as ℚ[x]/(Φ_k). `k = 1` is ℚ itself.
#[derive(Debug)]
pub struct CycloField {
    k: u32,
    /// Φ_k, ascending, monic.
    phi: Vec<i64>,
    /// `reduce[j]` is x^(n+j) mod Φ_k for j < n - 1.
    reduce: Vec<Vec<i64>>,
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
    }
}
impl Eq for CycloField {}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dl = den.len();
    let lead = den[dl - 1];
    let mut q = vec![0i64; num.len() + 1 - dl];
    for i in (0..q.len()).rev() {
        let c = rem[i + dl - 1] / lead;
        q[i] = c;
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

fn cyclotomic_poly(k: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&k) {
        return p.clone();
    }
    let mut p = vec![0i64; k as usize + 1];
    p[0] = -1;
    p[k as usize] = 1;
    for d in 1..k {
        if k % d == 0 {
            let pd = cyclotomic_poly(d, memo);
            p = poly_div_exact(&p, &pd);
        }
    }
    memo.insert(k, p.clone());
    p
}

impl CycloField {
    fn build(k: u32) -> CycloField {
        let mut memo = HashMap::new();
        let phi = cyclotomic_poly(k, &mut memo);
        let n = phi.len() - 1;
        // x^n = -(phi_0 + ... + phi_{n-1} x^{n-1})
        let mut cur: Vec<i64> = phi[..n].iter().map(|c| -c).collect();
        let mut reduce = Vec::new();
        for _ in 0..n.saturating_sub(1).max(1) {
            reduce.push(cur.clone());
            // multiply by x and reduce
            let top = cur[n - 1];
            let mut next = vec![0i64; n];
            for i in (1..n).rev() {
                next[i] = cur[i - 1];
            }
            for i in 0..n {
                next[i] -= top * phi[i];
            }
            cur = next;
        }
        CycloField { k, phi, reduce }
    }

    /// Shared handle for ℚ(ζ_k); fields are cached per k.
    pub fn get(k: u32) -> Arc<CycloField> {
        assert!(k >= 1, "cyclotomic order must be positive");
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard.entry(k).or_insert_with(|| Arc::new(CycloField::build(k))).clone()
    }

    pub fn rationals() -> Arc<CycloField> {
        Self::get(1)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Degree of the extension, φ(k).
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn minimal_poly(&self) -> &[i64] {
        &self.phi
    }

    /// Reduce an integer coefficient vector modulo Φ_k (monic, so no denominators appear).
    pub fn reduce_int(&self, c: &mut Vec<BigInt>) {
        let n = self.degree();
        for j in (n..c.len()).rev() {
            let top = std::mem::take(&mut c[j]);
            if top.is_zero() {
                continue;
            }
            for (i, &p) in self.phi[..n].iter().enumerate() {
                if p != 0 {
                    c[j - n + i] -= &top * p;
                }
            }
        }
        c.resize(n, BigInt::zero());
    }

    pub fn is_rationals(&self) -> bool {
        self.k == 1
    }

    /// Number of roots of unity contained in the field.
    pub fn roots_of_unity_count(&self) -> u32 {
        if self.k % 2 == 1 {
            2 * self.k
        } else {
            self.k
        }
    }
}

/// Element of ℚ(ζ_k) in the power basis, reduced modulo Φ_k.
#[derive(Clone)]
pub struct Cyclo {
    field: Arc<CycloField>,
    c: Vec<BigRational>,
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.field.k == other.field.k && self.c == other.c
    }
}
impl Eq for Cyclo {}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.len() == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})z{}", c, self.field.k)?,
                _ => write!(f, "({})z{}^{}", c, self.field.k, i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Cyclo {
    pub fn zero(field: &Arc<CycloField>) -> Cyclo {
        Cyclo { field: field.clone(), c: vec![BigRational::zero(); field.degree()] }
    }

    pub fn one(field: &Arc<CycloField>) -> Cyclo {
        Self::from_rational(field, BigRational::one())
    }

    pub fn from_rational(field: &Arc<CycloField>, r: BigRational) -> Cyclo {
        let mut z = Self::zero(field);
        z.c[0] = r;
        z
    }

    pub fn from_i64(field: &Arc<CycloField>, v: i64) -> Cyclo {
        Self::from_rational(field, BigRational::from_integer(BigInt::from(v)))
    }

    /// Builds an element from power-basis coefficients of any length, reducing mod Φ_k.
    pub fn from_coeffs(field: &Arc<CycloField>, coeffs: Vec<BigRational>) -> Cyclo {
        let n = field.degree();
        if coeffs.len() <= n {
            let mut c = coeffs;
            c.resize(n, BigRational::zero());
            return Cyclo { field: field.clone(), c };
        }
        // reduce from the top using x^j = x^{j-n} * x^n
        let mut c = coeffs;
        let phi = &field.phi;
        for j in (n..c.len()).rev() {
            let top = std::mem::take(&mut c[j]);
            if top.is_zero() {
                continue;
            }
            for i in 0..n {
                if phi[i] != 0 {
                    let delta = &top * BigRational::from_integer(BigInt::from(phi[i]));
                    c[j - n + i] -= delta;
                }
            }
        }
        c.truncate(n);
        Cyclo { field: field.clone(), c }
    }

    /// (Σ nums_i ζ^i) / den, reducing the numerator vector first.
    pub fn from_int_over(field: &Arc<CycloField>, mut nums: Vec<BigInt>, den: &BigInt) -> Cyclo {
        field.reduce_int(&mut nums);
        let c = nums.into_iter().map(|v| BigRational::new(v, den.clone())).collect();
        Cyclo { field: field.clone(), c }
    }

    /// The primitive root ζ_k (equal to x in the power basis).
    pub fn zeta(field: &Arc<CycloField>) -> Cyclo {
        Self::from_coeffs(field, vec![BigRational::zero(), BigRational::one()])
    }

    /// ζ_k^e for any integer exponent.
    pub fn zeta_pow(field: &Arc<CycloField>, e: i64) -> Cyclo {
        let k = field.k as i64;
        let e = e.rem_euclid(k) as u64;
        Self::zeta(field).pow(e)
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.c[1..].iter().all(|c| c.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, o: &Cyclo) -> Cyclo {
        let c = self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect();
        Cyclo { field: self.field.clone(), c }
    }

    pub fn sub(&self, o: &Cyclo) -> Cyclo {
        let c = self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect();
        Cyclo { field: self.field.clone(), c }
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo { field: self.field.clone(), c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn add_assign(&mut self, o: &Cyclo) {
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    pub fn scale_rational(&self, r: &BigRational) -> Cyclo {
        Cyclo { field: self.field.clone(), c: self.c.iter().map(|a| a * r).collect() }
    }

    pub fn mul(&self, o: &Cyclo) -> Cyclo {
        let n = self.field.degree();
        if n == 1 {
            return Cyclo { field: self.field.clone(), c: vec![&self.c[0] * &o.c[0]] };
        }
        if let Some(r) = o.as_rational() {
            return self.scale_rational(&r);
        }
        if let Some(r) = self.as_rational() {
            return o.scale_rational(&r);
        }
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut c: Vec<BigRational> = prod[..n].to_vec();
        for (j, top) in prod[n..].iter().enumerate() {
            if top.is_zero() {
                continue;
            }
            for (i, r) in self.field.reduce[j].iter().enumerate() {
                if *r != 0 {
                    c[i] += top * BigRational::from_integer(BigInt::from(*r));
                }
            }
        }
        Cyclo { field: self.field.clone(), c }
    }

    pub fn inv(&self) -> Result<Cyclo> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.field.degree();
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, r.recip()));
        }
        // columns: self * x^j
        let mut cols = Vec::with_capacity(n);
        let mut cur = self.clone();
        let x = Self::zeta(&self.field);
        for _ in 0..n {
            cols.push(cur.c.clone());
            cur = cur.mul(&x);
        }
        // augmented matrix rows i: [cols[0][i] .. cols[n-1][i] | e_0[i]]
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..n).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::DivisionByZero)?;
            m.swap(col, piv);
            let p = m[col][col].recip();
            for v in m[col].iter_mut() {
                *v *= &p;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for cc in col..=n {
                        let d = &f * &m[col][cc];
                        m[r][cc] -= d;
                    }
                }
            }
        }
        let c = m.into_iter().map(|row| row[n].clone()).collect();
        Ok(Cyclo { field: self.field.clone(), c })
    }

    pub fn div(&self, o: &Cyclo) -> Result<Cyclo> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Cyclo {
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

    pub fn powi(&self, e: i64) -> Result<Cyclo> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Multiplicative order if the element is a root of unity.
    pub fn root_of_unity_order(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let bound = self.field.roots_of_unity_count();
        let mut cur = self.clone();
        for j in 1..=bound {
            if cur.is_one() {
                return if bound % j == 0 { Some(j) } else { None };
            }
            cur = cur.mul(self);
        }
        None
    }

    /// Total order used for reproducible sorting: lexicographic on power-basis coefficients.
    pub fn total_cmp(&self, o: &Cyclo) -> Ordering {
        for (a, b) in self.c.iter().zip(&o.c) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.c.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn is_negative_rational(&self) -> bool {
        self.as_rational().map(|r| r.is_negative()).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(CycloField::get(1).minimal_poly(), &[-1, 1]);
        assert_eq!(CycloField::get(2).minimal_poly(), &[1, 1]);
        assert_eq!(CycloField::get(3).minimal_poly(), &[1, 1, 1]);
        assert_eq!(CycloField::get(4).minimal_poly(), &[1, 0, 1]);
        assert_eq!(CycloField::get(6).minimal_poly(), &[1, -1, 1]);
        assert_eq!(CycloField::get(12).minimal_poly(), &[1, 0, -1, 0, 1]);
    }

    #[test]
    fn rational_sum() {
        let f = CycloField::rationals();
        let a = Cyclo::from_rational(&f, q(1, 2));
        let b = Cyclo::from_rational(&f, q(1, 3));
        assert_eq!(a.add(&b).as_rational(), Some(q(5, 6)));
    }

    #[test]
    fn zeta_relations() {
        for k in [3u32, 4, 5, 6, 8, 12] {
            let f = CycloField::get(k);
            let z = Cyclo::zeta(&f);
            assert!(z.pow(k as u64).is_one(), "k={k}");
            assert!(!z.pow(k as u64 - 1).is_one());
            assert_eq!(z.root_of_unity_order(), Some(k));
            let zi = z.inv().unwrap();
            assert!(zi.mul(&z).is_one());
        }
        let f3 = CycloField::get(3);
        let z = Cyclo::zeta(&f3);
        assert!(z.mul(&z.pow(2)).is_one());
        assert_eq!(Cyclo::from_i64(&f3, -1).root_of_unity_order(), Some(2));
        assert_eq!(z.neg().root_of_unity_order(), Some(6));
    }

    #[test]
    fn inverse_of_nonunit_combination() {
        let f = CycloField::get(5);
        let z = Cyclo::zeta(&f);
        let a = z.add(&Cyclo::from_i64(&f, 2)).mul(&z.pow(3).sub(&Cyclo::from_rational(&f, q(1, 7))));
        let ai = a.inv().unwrap();
        assert!(a.mul(&ai).is_one());
        assert_eq!(Cyclo::zero(&f).inv(), Err(Error::DivisionByZero));
    }
}
