//! Dense exact linear algebra over a `Field`.

use crate::fields::{Elem, Field, Scalar};

pub type Matrix = Vec<Vec<Elem>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for v in m[row].iter_mut().skip(col) {
                *v = v.mul(&inv);
            }
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for c in col..other.len() {
                if !pivot_row[c].is_zero() {
                    other[c] = other[c].sub(&f.mul(&pivot_row[c]));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    pivots
}

/// Basis of {v : m·v = 0}.
pub fn nullspace(field: &Field, m: &Matrix, ncols: usize) -> Vec<Vec<Elem>> {
    let mut a: Matrix = m.iter().filter(|r| r.iter().any(|c| !c.is_zero())).cloned().collect();
    let pivots = rref(&mut a, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Elem::zero(field); ncols];
        v[f] = Elem::one(field);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = a[r][f].neg();
        }
        basis.push(v);
    }
    basis
}

/// One solution of m·v = rhs, if consistent.
pub fn solve(field: &Field, m: &Matrix, rhs: &[Elem], ncols: usize) -> Option<Vec<Elem>> {
    let mut a: Matrix = m
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref(&mut a, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut v = vec![Elem::zero(field); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = a[r][ncols].clone();
    }
    Some(v)
}

/// 2×2 matrix helpers.
pub mod mat2 {
    use super::*;
    use crate::error::Result;

    pub type Mat2 = [[Elem; 2]; 2];

    pub fn identity(f: &Field) -> Mat2 {
        [[Elem::one(f), Elem::zero(f)], [Elem::zero(f), Elem::one(f)]]
    }

    pub fn diag(a: Elem, b: Elem) -> Mat2 {
        let f = a.field();
        [[a, Elem::zero(&f)], [Elem::zero(&f), b]]
    }

    pub fn det(m: &Mat2) -> Elem {
        m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]))
    }

    pub fn trace(m: &Mat2) -> Elem {
        m[0][0].add(&m[1][1])
    }

    pub fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }

    pub fn apply(m: &Mat2, v: &[Elem; 2]) -> [Elem; 2] {
        [m[0][0].mul(&v[0]).add(&m[0][1].mul(&v[1])), m[1][0].mul(&v[0]).add(&m[1][1].mul(&v[1]))]
    }

    pub fn inv(m: &Mat2) -> Result<Mat2> {
        let di = det(m).inv()?;
        Ok([
            [m[1][1].mul(&di), m[0][1].neg().mul(&di)],
            [m[1][0].neg().mul(&di), m[0][0].mul(&di)],
        ])
    }

    pub fn pow(m: &Mat2, e: u32) -> Mat2 {
        let mut acc = identity(&m[0][0].field());
        for _ in 0..e {
            acc = mul(&acc, m);
        }
        acc
    }

    pub fn is_identity(m: &Mat2) -> bool {
        m[0][0].is_one() && m[1][1].is_one() && m[0][1].is_zero() && m[1][0].is_zero()
    }

    pub fn is_diagonal(m: &Mat2) -> bool {
        m[0][1].is_zero() && m[1][0].is_zero()
    }

    pub fn is_scalar(m: &Mat2) -> bool {
        is_diagonal(m) && m[0][0] == m[1][1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_solve() {
        let q = Field::rationals();
        let m: Matrix = vec![vec![q.int(1), q.int(2), q.int(3)], vec![q.int(2), q.int(4), q.int(6)]];
        let ns = nullspace(&q, &m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let s = (0..3).fold(q.int(0), |acc, i| acc.add(&m[0][i].mul(&v[i])));
            assert!(s.is_zero());
        }
        let a: Matrix = vec![vec![q.int(2), q.int(1)], vec![q.int(1), q.int(-1)]];
        let x = solve(&q, &a, &[q.int(3), q.int(0)], 2).unwrap();
        assert_eq!(x, vec![q.int(1), q.int(1)]);
        assert!(solve(&q, &m, &[q.int(1), q.int(1)], 3).is_none());
    }
}
