//! Linear algebra over the coefficient space: all endomorphisms of bounded degree commuting
//! with given linear maps.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::fields::{Elem, Field, Scalar};
use crate::linalg::{self, mat2::Mat2};
use crate::plane::{PlaneAut, PlaneEndo};
use crate::poly::{BiPoly, Mono};

pub const MAX_BOUND: u32 = 10;

/// Solution space of f∘g = g∘f with deg f ≤ bound.
#[derive(Clone, Debug)]
pub struct Commutant {
    pub field: Field,
    pub bound: u32,
    pub basis: Vec<PlaneEndo>,
    slots: Vec<(usize, Mono)>,
}

fn monomials(bound: u32) -> Vec<Mono> {
    let mut v = Vec::new();
    for d in 0..=bound {
        for i in (0..=d).rev() {
            v.push(Mono(i, d - i));
        }
    }
    v
}

pub fn solve_commutant_bruteforce(bound: u32, gens: &[Mat2]) -> Result<Commutant> {
    if bound > MAX_BOUND {
        return Err(Error::BoundTooLarge(bound));
    }
    let field = gens.first().map(|g| g[0][0].field()).unwrap_or_else(Field::rationals);
    let monos = monomials(bound);
    let slots: Vec<(usize, Mono)> = (0..2).flat_map(|c| monos.iter().map(move |m| (c, *m))).collect();
    let ncols = slots.len();
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for g in gens {
        let lin = [
            BiPoly::z1(&field).scale(&g[0][0]).add(&BiPoly::z2(&field).scale(&g[0][1])),
            BiPoly::z1(&field).scale(&g[1][0]).add(&BiPoly::z2(&field).scale(&g[1][1])),
        ];
        // equation rows keyed by (output component, output monomial)
        let mut eqs: BTreeMap<(usize, Mono), Vec<Elem>> = BTreeMap::new();
        let mut put = |r: usize, m: Mono, col: usize, c: Elem| {
            let row = eqs.entry((r, m)).or_insert_with(|| vec![Elem::zero(&field); ncols]);
            row[col] = row[col].add(&c);
        };
        for (col, &(c, m)) in slots.iter().enumerate() {
            let sub = lin[0].pow(m.0).mul(&lin[1].pow(m.1));
            for (mm, coef) in sub.terms() {
                put(c, *mm, col, coef.clone());
            }
            for (r, grow) in g.iter().enumerate() {
                if !grow[c].is_zero() {
                    put(r, m, col, grow[c].neg());
                }
            }
        }
        rows.extend(eqs.into_values());
    }
    let null = linalg::nullspace(&field, &rows, ncols);
    let basis = null.iter().map(|v| endo_from_vector(&field, &slots, v)).collect();
    Ok(Commutant { field, bound, basis, slots })
}

fn endo_from_vector(field: &Field, slots: &[(usize, Mono)], v: &[Elem]) -> PlaneEndo {
    let mut comps = [BiPoly::zero(field), BiPoly::zero(field)];
    for ((c, m), x) in slots.iter().zip(v) {
        if !x.is_zero() {
            comps[*c] = comps[*c].add(&BiPoly::monomial(field, x.clone(), m.0, m.1));
        }
    }
    let [p1, p2] = comps;
    PlaneEndo::new(p1, p2).expect("same field")
}

impl Commutant {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn vector(&self, f: &PlaneEndo) -> Option<Vec<Elem>> {
        if f.degree().unwrap_or(0) > self.bound {
            return None;
        }
        Some(self.slots.iter().map(|(c, m)| f.component(*c).coeff(m.0, m.1)).collect())
    }

    /// Membership of f in the span of the basis, by an exact linear solve.
    pub fn contains(&self, f: &PlaneEndo) -> bool {
        let Some(v) = self.vector(f) else { return false };
        if self.basis.is_empty() {
            return v.iter().all(|x| x.is_zero());
        }
        let cols: Vec<Vec<Elem>> = self.basis.iter().map(|b| self.vector(b).expect("in range")).collect();
        let m: Vec<Vec<Elem>> = (0..self.slots.len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        linalg::solve(&self.field, &m, &v, cols.len()).is_some()
    }

    /// Σ coords_i · basis_i.
    pub fn combination(&self, coords: &[Elem]) -> PlaneEndo {
        let mut f = PlaneEndo::new(BiPoly::zero(&self.field), BiPoly::zero(&self.field)).expect("same field");
        for (b, c) in self.basis.iter().zip(coords) {
            f = PlaneEndo::new(f.p1.add(&b.p1.scale(c)), f.p2.add(&b.p2.scale(c))).expect("same field");
        }
        f
    }

    /// The invertibility side condition: the combination if it is an automorphism.
    pub fn automorphism_at(&self, coords: &[Elem]) -> Option<PlaneAut> {
        PlaneAut::invert(&self.combination(coords)).ok()
    }

    /// Monomials occurring in some basis element, per component.
    pub fn support(&self) -> [BTreeSet<Mono>; 2] {
        let mut s = [BTreeSet::new(), BTreeSet::new()];
        for b in &self.basis {
            for c in 0..2 {
                s[c].extend(b.component(c).terms().keys().copied());
            }
        }
        s
    }

    /// Whether every automorphism in the space has degree ≤ 1. Checked through leading forms:
    /// an automorphism of degree ≥ 2 has leading forms c₁ℓ^{D₁}, c₂ℓ^{D₂} with D₁ | D₂ or
    /// D₂ | D₁, which forces pure powers of z₁ or z₂ in the support.
    pub fn automorphisms_are_affine(&self) -> bool {
        let sup = self.support();
        let pure = |c: usize, var: usize, d: u32| {
            let m = if var == 0 { Mono(d, 0) } else { Mono(0, d) };
            sup[c].contains(&m)
        };
        for var in 0..2 {
            for d1 in 1..=self.bound {
                for d2 in 1..=self.bound {
                    if d1.max(d2) < 2 || (d2 % d1 != 0 && d1 % d2 != 0) {
                        continue;
                    }
                    if pure(0, var, d1) && pure(1, var, d2) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mat2;

    #[test]
    fn trivial_group_gives_affine_maps() {
        let f = Field::rationals();
        let c = solve_commutant_bruteforce(1, &[mat2::identity(&f)]).unwrap();
        assert_eq!(c.dim(), 6);
    }

    #[test]
    fn torus_two_one() {
        let f = Field::rationals();
        let c = solve_commutant_bruteforce(3, &[mat2::diag(f.int(4), f.int(2))]).unwrap();
        let sup = c.support();
        assert_eq!(sup[0], [Mono(1, 0), Mono(0, 2)].into_iter().collect());
        assert_eq!(sup[1], [Mono(0, 1)].into_iter().collect());
        assert_eq!(c.dim(), 3);
    }

    #[test]
    fn bound_guard() {
        let f = Field::rationals();
        assert_eq!(solve_commutant_bruteforce(11, &[mat2::identity(&f)]).unwrap_err(), Error::BoundTooLarge(11));
    }
}
