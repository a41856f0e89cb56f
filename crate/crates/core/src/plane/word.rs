use crate::error::{Error, Result};
use crate::fields::{Field, Scalar};
use crate::poly::PowerCache;

use super::maps::{AffineMap, ElementaryMap, PlaneEndo};

/// f = a_{m+1}∘e_m∘a_m∘…∘e_1∘a_1, stored innermost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameDecomposition {
    /// a_1, …, a_{m+1}.
    pub affines: Vec<AffineMap>,
    /// e_1, …, e_m, each canonical: (z₁ + p(z₂), z₂) with deg p ≥ 2 and no constant or linear term.
    pub elementaries: Vec<ElementaryMap>,
}

/// One syllable of an amalgam word.
#[derive(Clone, Debug)]
pub enum Factor {
    A(AffineMap),
    E(ElementaryMap),
}

impl Factor {
    pub fn apply(&self, g: &PlaneEndo) -> PlaneEndo {
        match self {
            Factor::A(a) => a.apply(g),
            Factor::E(e) => e.apply(g),
        }
    }

    pub fn inverse(&self) -> Factor {
        match self {
            Factor::A(a) => Factor::A(a.inverse()),
            Factor::E(e) => Factor::E(e.inverse()),
        }
    }
}

impl TameDecomposition {
    pub fn affine(a: AffineMap) -> TameDecomposition {
        TameDecomposition { affines: vec![a], elementaries: Vec::new() }
    }

    pub fn field(&self) -> Field {
        self.affines[0].field()
    }

    /// Number of elementary syllables m.
    pub fn len(&self) -> usize {
        self.elementaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elementaries.is_empty()
    }

    pub fn polydegree(&self) -> Vec<u32> {
        self.elementaries.iter().map(|e| e.degree()).collect()
    }

    /// Syllables innermost first.
    pub fn factors(&self) -> Vec<Factor> {
        let mut out = Vec::with_capacity(2 * self.elementaries.len() + 1);
        for (i, a) in self.affines.iter().enumerate() {
            out.push(Factor::A(a.clone()));
            if let Some(e) = self.elementaries.get(i) {
                out.push(Factor::E(e.clone()));
            }
        }
        out
    }

    /// word∘g.
    pub fn apply(&self, g: &PlaneEndo) -> PlaneEndo {
        let mut cur = self.affines[0].apply(g);
        for (e, a) in self.elementaries.iter().zip(&self.affines[1..]) {
            cur = a.apply(&e.apply(&cur));
        }
        cur
    }

    /// The composed polynomial map.
    pub fn recompose(&self) -> PlaneEndo {
        self.apply(&PlaneEndo::identity(&self.field()))
    }

    /// Word of the inverse map (reversed syllables, each inverted; stays canonical).
    pub fn inverse(&self) -> TameDecomposition {
        TameDecomposition {
            affines: self.affines.iter().rev().map(|a| a.inverse()).collect(),
            elementaries: self.elementaries.iter().rev().map(|e| e.inverse()).collect(),
        }
    }

    /// Normal form of outer∘self.
    pub fn then(&self, outer: &TameDecomposition) -> TameDecomposition {
        let mut f = self.factors();
        f.extend(outer.factors());
        normalize_word(&self.field(), f)
    }
}

fn merge(a: &Factor, b: &Factor) -> Option<Factor> {
    // b applied after a: result b∘a
    match (a, b) {
        (Factor::A(x), Factor::A(y)) => Some(Factor::A(y.compose(x))),
        (Factor::E(x), Factor::E(y)) => Some(Factor::E(y.compose(x))),
        (Factor::A(x), Factor::E(y)) if x.is_triangular() => Some(Factor::E(y.compose(&x.to_elementary()))),
        (Factor::E(x), Factor::A(y)) if y.is_triangular() => Some(Factor::E(y.to_elementary().compose(x))),
        _ => None,
    }
}

/// Reduce an arbitrary syllable list (innermost first) to the canonical alternating form.
pub fn normalize_word(field: &Field, factors: Vec<Factor>) -> TameDecomposition {
    let mut w: Vec<Factor> = Vec::with_capacity(factors.len());
    for f in factors {
        let mut cur = match f {
            Factor::E(e) if e.is_affine() => Factor::A(e.to_affine()),
            other => other,
        };
        // fold into the stack top while possible
        loop {
            let Some(top) = w.last() else { break };
            match merge(top, &cur) {
                Some(m) => {
                    w.pop();
                    cur = match m {
                        Factor::E(e) if e.is_affine() => Factor::A(e.to_affine()),
                        other => other,
                    };
                }
                None => break,
            }
        }
        w.push(cur);
    }
    // the stack now alternates; pad with identities at both ends
    let mut affines = Vec::new();
    let mut elementaries = Vec::new();
    for f in w {
        match f {
            Factor::A(a) => affines.push(a),
            Factor::E(e) => {
                if affines.len() == elementaries.len() {
                    affines.push(AffineMap::identity(field));
                }
                elementaries.push(e);
            }
        }
    }
    if affines.len() == elementaries.len() {
        affines.push(AffineMap::identity(field));
    }
    // push each elementary's triangular part into the affine below it
    for (j, e) in elementaries.iter_mut().enumerate() {
        let (hat, s) = e.canonicalize();
        *e = hat;
        affines[j] = s.compose(&affines[j]);
    }
    TameDecomposition { affines, elementaries }
}

/// Amalgam decomposition by leading-form degree reduction.
pub fn decompose_endo(f: &PlaneEndo) -> Result<TameDecomposition> {
    let field = f.field().clone();
    let mut g = f.clone();
    // peeled syllables, outermost first
    let mut peeled: Vec<Factor> = Vec::new();
    // cache of powers of the component currently used as divisor
    let mut cache: Option<(usize, PowerCache)> = None;
    loop {
        let (d1, d2) = match (g.p1.degree(), g.p2.degree()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::NotAnAutomorphism("a component is zero".into())),
        };
        if d1 <= 1 && d2 <= 1 {
            break;
        }
        // reduce the larger component by a power of the smaller one
        let (big, small) = if d1 >= d2 { (0usize, 1usize) } else { (1, 0) };
        let (db, ds) = if big == 0 { (d1, d2) } else { (d2, d1) };
        if ds == 0 || db % ds != 0 {
            return Err(Error::NotAnAutomorphism(format!("degrees ({d1}, {d2}) do not divide")));
        }
        let k = db / ds;
        let fresh = !matches!(&cache, Some((idx, pc)) if *idx == small && pc.base() == g.component(small));
        if fresh {
            cache = Some((small, PowerCache::new(g.component(small).clone())));
        }
        let pc = &mut cache.as_mut().unwrap().1;
        let power = pc.get(k);
        let top_big = g.component(big).leading_form();
        let top_pow = power.leading_form();
        let (mb, cb) = top_big.terms().iter().next_back().unwrap();
        let cp = top_pow.coeff(mb.0, mb.1);
        if cp.is_zero() {
            return Err(Error::NotAnAutomorphism("leading forms are not proportional".into()));
        }
        let c = cb.div(&cp)?;
        if top_big != top_pow.scale(&c) {
            return Err(Error::NotAnAutomorphism("leading forms are not proportional".into()));
        }
        let reduced = g.component(big).sub(&power.scale(&c));
        let shear = ElementaryMap::shear(crate::fields::UniPoly::monomial(c, k as usize));
        if big == 0 {
            g = PlaneEndo { p1: reduced, p2: g.p2.clone() };
            peeled.push(Factor::E(shear));
        } else {
            g = PlaneEndo { p1: g.p1.clone(), p2: reduced };
            let tau = AffineMap::swap(&field);
            peeled.push(Factor::A(tau.clone()));
            peeled.push(Factor::E(shear));
            peeled.push(Factor::A(tau));
        }
    }
    let a = AffineMap::from_endo(&g)?;
    let mut factors = vec![Factor::A(a)];
    factors.extend(peeled.into_iter().rev());
    Ok(normalize_word(&field, factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::UniPoly;
    use crate::poly::BiPoly;

    #[test]
    fn henon_word() {
        let f = Field::rationals();
        let h = PlaneEndo::new(BiPoly::z2(&f), BiPoly::from_ints(&f, &[(1, 0, 1), (0, 2, 1)])).unwrap();
        let d = decompose_endo(&h).unwrap();
        assert_eq!(d.polydegree(), vec![2]);
        assert_eq!(d.recompose(), h);
    }

    #[test]
    fn two_syllables() {
        let f = Field::rationals();
        let e1 = ElementaryMap::shear(UniPoly::new(&f, vec![f.int(0), f.int(0), f.int(1)]));
        let e2 = ElementaryMap::shear(UniPoly::new(&f, vec![f.int(1), f.int(0), f.int(0), f.int(2)]));
        let a = AffineMap::new([[f.int(1), f.int(2)], [f.int(3), f.int(5)]], [f.int(0), f.int(1)]).unwrap();
        let g = e2.apply(&a.apply(&e1.to_endo()));
        let d = decompose_endo(&g).unwrap();
        assert_eq!(d.polydegree(), vec![2, 3]);
        assert_eq!(d.recompose(), g);
        assert!(!d.affines[1].is_triangular());
        assert!(d.elementaries.iter().all(|e| e.is_canonical()));
        assert!(d.inverse().apply(&g).is_identity());
    }

    #[test]
    fn rejects_non_automorphisms() {
        let f = Field::rationals();
        let a = PlaneEndo::new(BiPoly::from_ints(&f, &[(2, 0, 1)]), BiPoly::z2(&f)).unwrap();
        let b = PlaneEndo::new(BiPoly::z1(&f), BiPoly::from_ints(&f, &[(1, 1, 1)])).unwrap();
        assert!(matches!(decompose_endo(&a), Err(Error::NotAnAutomorphism(_))));
        assert!(matches!(decompose_endo(&b), Err(Error::NotAnAutomorphism(_))));
    }
}
