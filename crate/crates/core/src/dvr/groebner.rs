//! Lexicographic Gröbner bases over a constant field, enough for eliminating two
//! variables from a four-variable ideal.

use std::collections::BTreeMap;

use crate::fields::{Elem, Field, Scalar};

/// Polynomial in a fixed number of variables; exponent vectors compare lexicographically
/// with variable 0 largest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    pub field: Field,
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Elem>,
}

impl MPoly {
    pub fn zero(field: &Field, nvars: usize) -> MPoly {
        MPoly { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> MPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly::term(field, e, Elem::one(field))
    }

    pub fn term(field: &Field, exps: Vec<u32>, c: Elem) -> MPoly {
        let nvars = exps.len();
        let mut p = MPoly::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<(&Vec<u32>, &Elem)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, e: Vec<u32>, c: Elem) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.neg());
        }
        r
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero(&self.field, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                r.add_term(ea.iter().zip(eb).map(|(a, b)| a + b).collect(), ca.mul(cb));
            }
        }
        r
    }

    /// self − c·x^shift·o.
    fn sub_shifted(&mut self, o: &MPoly, c: &Elem, shift: &[u32]) {
        for (e, ce) in &o.terms {
            let ne: Vec<u32> = e.iter().zip(shift).map(|(a, b)| a + b).collect();
            self.add_term(ne, ce.mul(c).neg());
        }
    }

    pub fn monic(&self) -> MPoly {
        let Some((_, lc)) = self.lead() else { return self.clone() };
        let inv = lc.inv().expect("nonzero leading coefficient");
        MPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.mul(&inv))).collect(),
        }
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// Full reduction of f modulo the list.
pub fn reduce(f: &MPoly, basis: &[MPoly]) -> MPoly {
    let mut rem = MPoly::zero(&f.field, f.nvars);
    let mut p = f.clone();
    while let Some((e, c)) = p.lead().map(|(e, c)| (e.clone(), c.clone())) {
        let divisor = basis.iter().find(|g| g.lead().is_some_and(|(ge, _)| divides(ge, &e)));
        match divisor {
            Some(g) => {
                let (ge, gc) = g.lead().expect("nonzero");
                let shift: Vec<u32> = e.iter().zip(ge).map(|(a, b)| a - b).collect();
                let q = c.div(gc).expect("nonzero leading coefficient");
                p.sub_shifted(g, &q, &shift);
            }
            None => {
                p.terms.remove(&e);
                rem.terms.insert(e, c);
            }
        }
    }
    rem
}

fn s_poly(f: &MPoly, g: &MPoly) -> MPoly {
    let (fe, fc) = f.lead().expect("nonzero");
    let (ge, gc) = g.lead().expect("nonzero");
    let l = lcm(fe, ge);
    let sf: Vec<u32> = l.iter().zip(fe).map(|(a, b)| a - b).collect();
    let sg: Vec<u32> = l.iter().zip(ge).map(|(a, b)| a - b).collect();
    let mut r = MPoly::zero(&f.field, f.nvars);
    r.sub_shifted(f, &fc.inv().expect("nonzero").neg(), &sf);
    r.sub_shifted(g, &gc.inv().expect("nonzero"), &sg);
    r
}

/// Reduced lex Gröbner basis (Buchberger with the coprime-leading-term criterion).
pub fn groebner(gens: &[MPoly]) -> Vec<MPoly> {
    let mut basis: Vec<MPoly> = gens.iter().filter(|g| !g.is_zero()).map(MPoly::monic).collect();
    let mut pairs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while let Some((i, j)) = pairs.pop() {
        let (ei, ej) = (basis[i].lead().unwrap().0, basis[j].lead().unwrap().0);
        if ei.iter().zip(ej).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let r = reduce(&s_poly(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            basis.push(r.monic());
            let n = basis.len() - 1;
            pairs.extend((0..n).map(|i| (i, n)));
        }
    }
    // minimal then reduced
    let mut minimal: Vec<MPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let e = g.lead().unwrap().0;
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let he = h.lead().unwrap().0;
            j != i && divides(he, e) && (he != e || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<MPoly> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let (e, c) = {
            let (e, c) = minimal[i].lead().unwrap();
            (e.clone(), c.clone())
        };
        let mut tail = minimal[i].clone();
        tail.terms.remove(&e);
        let mut g = reduce(&tail, &others);
        g.terms.insert(e, c);
        out.push(g.monic());
    }
    out.sort_by(|a, b| a.lead().unwrap().0.cmp(b.lead().unwrap().0));
    out
}

/// Elements of a lex basis free of the first `k` variables.
pub fn elimination(basis: &[MPoly], k: usize) -> Vec<MPoly> {
    basis.iter().filter(|g| g.terms.keys().all(|e| e[..k].iter().all(|&x| x == 0))).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twisted_cubic_projection() {
        // (z, u − z², v − z³) eliminating z leaves u³ − v²
        let f = Field::rationals();
        let z = MPoly::var(&f, 3, 0);
        let u = MPoly::var(&f, 3, 1);
        let v = MPoly::var(&f, 3, 2);
        let g1 = u.sub(&z.mul(&z));
        let g2 = v.sub(&z.mul(&z).mul(&z));
        let gb = groebner(&[g1, g2]);
        let el = elimination(&gb, 1);
        assert_eq!(el.len(), 1);
        let want = u.mul(&u).mul(&u).sub(&v.mul(&v)).monic();
        assert_eq!(el[0], want);
    }
}
