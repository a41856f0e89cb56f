//! Membership descriptions for equivariant automorphisms of fixed polydegree under diagonal groups.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::fields::{Elem, Field, Scalar};
use crate::linalg::mat2::{self, Mat2};
use crate::plane::PlaneAut;

use super::fiber::{extract_fiber, FiberNormalForm};

/// Ŝ ⊇ T ⊇ D ⊇ Z, plus the transpose of T.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupTag {
    SHat,
    T,
    TTranspose,
    D,
    Z,
}

impl SubgroupTag {
    pub fn name(self) -> &'static str {
        match self {
            SubgroupTag::SHat => "S-hat",
            SubgroupTag::T => "T",
            SubgroupTag::TTranspose => "T-transpose",
            SubgroupTag::D => "D",
            SubgroupTag::Z => "Z",
        }
    }
}

/// ⟨diag(ζ_k^a, ζ_k^b)⟩ for k ≥ 1, or the torus t ↦ diag(t^a, t^b) when k = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiagonalGroup {
    pub a: i64,
    pub b: i64,
    pub k: u32,
}

impl DiagonalGroup {
    /// ⟨(ζ_k^e z₁, ζ_k z₂)⟩.
    pub fn cyclic(k: u32, e: i64) -> DiagonalGroup {
        DiagonalGroup { a: e, b: 1, k }
    }

    pub fn torus(a: i64, b: i64) -> DiagonalGroup {
        DiagonalGroup { a, b, k: 0 }
    }

    pub fn is_torus(&self) -> bool {
        self.k == 0
    }

    pub fn swapped(&self) -> DiagonalGroup {
        DiagonalGroup { a: self.b, b: self.a, k: self.k }
    }

    pub fn congruent(&self, x: i64, y: i64) -> bool {
        if self.k == 0 {
            x == y
        } else {
            (x - y).rem_euclid(self.k as i64) == 0
        }
    }

    /// Contained in the scalar matrices.
    pub fn is_central(&self) -> bool {
        self.congruent(self.a, self.b)
    }

    /// Smallest field containing the generator.
    pub fn field(&self) -> Field {
        if self.k <= 2 {
            Field::rationals()
        } else {
            Field::cyclotomic(self.k)
        }
    }

    /// Generator matrix; for a torus the element t = 2.
    pub fn generator(&self) -> Result<Mat2> {
        self.generator_over(&self.field())
    }

    pub fn generator_over(&self, field: &Field) -> Result<Mat2> {
        let base = match self.k {
            0 => field.int(2),
            1 => field.int(1),
            2 => field.int(-1),
            k => {
                let z = field.zeta();
                if field.base().k() != k {
                    return Err(Error::UnsupportedGroup(format!("field {field} lacks a primitive {k}-th root of unity")));
                }
                z
            }
        };
        Ok(mat2::diag(base.powi(self.a)?, base.powi(self.b)?))
    }

    pub fn order(&self) -> Option<u32> {
        match self.k {
            0 => None,
            k => {
                let g = (self.a.rem_euclid(k as i64) as u64).gcd(&(k as u64)).gcd(&(self.b.rem_euclid(k as i64) as u64));
                Some(k / g.max(1) as u32)
            }
        }
    }
}

/// The group H_{d₁} = {(λ^{d₁}z₁, λz₂) : λ ∈ H}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HdGroup {
    pub d1: u32,
    /// None for the full multiplicative group.
    pub k: Option<u32>,
    /// Exponent e of the input ⟨(ζ_k^e z₁, ζ_k z₂)⟩.
    pub e: i64,
}

impl HdGroup {
    /// Match a diagonal group against H_{d₁}; the flag reports whether the swapped normalization was used.
    pub fn normalize(g: &DiagonalGroup, d1: u32) -> Result<(HdGroup, bool)> {
        let (k, d1i) = (g.k, d1 as i64);
        if g.k == 0 {
            if g.b == 1 && g.a == d1i {
                return Ok((HdGroup { d1, k: None, e: g.a }, false));
            }
            if g.a == 1 && g.b == d1i {
                return Ok((HdGroup { d1, k: None, e: g.b }, true));
            }
            return Err(Error::UnsupportedGroup(format!("torus weights ({}, {}) are not ({d1}, 1)", g.a, g.b)));
        }
        let try_shape = |a: i64, b: i64| -> Option<i64> {
            // need b a unit so that ζ^b generates; then e = a·b⁻¹
            let kk = k as i64;
            let bi = inverse_mod(b, kk)?;
            let e = (a * bi).rem_euclid(kk);
            (e - d1i).rem_euclid(kk).eq(&0).then_some(e)
        };
        if let Some(e) = try_shape(g.a, g.b) {
            return Ok((HdGroup { d1, k: Some(k), e }, false));
        }
        if let Some(e) = try_shape(g.b, g.a) {
            return Ok((HdGroup { d1, k: Some(k), e }, true));
        }
        Err(Error::UnsupportedGroup(format!("diag exponents ({}, {}) mod {k} do not match d1 = {d1}", g.a, g.b)))
    }
}

fn inverse_mod(x: i64, k: i64) -> Option<i64> {
    if k == 1 {
        return Some(0);
    }
    let e = x.extended_gcd(&k);
    (e.gcd == 1).then(|| e.x.rem_euclid(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    Fiber,
    BundleOverP1xP1,
    TwoFibers,
    SingleFiber,
    Empty,
    AffineGl2G,
    OneParameterFamily,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::Fiber => "fiber",
            CaseTag::BundleOverP1xP1 => "bundle-over-P1xP1",
            CaseTag::TwoFibers => "two-fibers",
            CaseTag::SingleFiber => "single-fiber",
            CaseTag::Empty => "empty",
            CaseTag::AffineGl2G => "affine-GL2G",
            CaseTag::OneParameterFamily => "one-parameter-family",
        }
    }
}

/// Equivariant maps A∘f_{s,q}∘B with A, B ∈ {id, τ}; anchors are (anchor of f, anchor of f⁻¹)
/// with `true` meaning ∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberDescription {
    pub anchors: (bool, bool),
    pub nonempty: bool,
    pub s_tag: SubgroupTag,
    pub alpha_p_free: bool,
    pub beta_p_free: bool,
    /// Allowed exponents i of z₂^i in q_j.
    pub allowed: Vec<Vec<u32>>,
    /// l_j ∈ {1,…,k} when the allowed i+1 form one residue class mod k.
    pub exponents: Vec<Option<u32>>,
    /// Number of nonzero-scalar parameters and of free parameters.
    pub coordinate_count: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerDescription {
    pub case: CaseTag,
    pub polydegree: Vec<u32>,
    pub group: DiagonalGroup,
    pub fibers: Vec<FiberDescription>,
    /// Exponent v of the family (α₁z₁+βz₂^v, α₂z₂).
    pub v: Option<u32>,
    /// Whether the normalization swapped the coordinates.
    pub swapped: bool,
    /// Allowed monomials per component for the affine or one-parameter cases.
    pub monomials: Option<[Vec<(u32, u32)>; 2]>,
}

impl FiberDescription {
    /// f' ∘ g_in = g_out ∘ f' for f' = f_{s,q}, with g_in = BgB and g_out = AgA.
    fn compute(d: &[u32], g: &DiagonalGroup, outer_swap: bool, inner_swap: bool) -> FiberDescription {
        let gin = if inner_swap { g.swapped() } else { *g };
        let gout = if outer_swap { g.swapped() } else { *g };
        let m = d.len();
        let x = |j: usize| if j % 2 == 0 { gin.a } else { gin.b };
        let mut allowed = Vec::with_capacity(m);
        let mut exponents = Vec::with_capacity(m);
        let mut nonempty = true;
        for (idx, &dj) in d.iter().enumerate() {
            let j = idx + 1;
            let ok: Vec<u32> = (0..dj).filter(|&i| g.congruent(x(j) * (i as i64 + 1), x(j + 1))).collect();
            if !ok.contains(&(dj - 1)) {
                nonempty = false;
            }
            exponents.push(residue_class(g, x(j), x(j + 1)));
            allowed.push(ok);
        }
        let (top_a, top_b) = if m == 0 { (gin.a, gin.b) } else { (x(m + 1), x(m)) };
        if !g.congruent(top_a, gout.a) || !g.congruent(top_b, gout.b) {
            nonempty = false;
        }
        let alpha_p_free = g.congruent(gout.a, 0);
        let beta_p_free = g.congruent(gout.b, 0);
        let s_tag = match (alpha_p_free, beta_p_free) {
            (true, true) => SubgroupTag::SHat,
            (true, false) => SubgroupTag::T,
            (false, true) => SubgroupTag::TTranspose,
            (false, false) => SubgroupTag::D,
        };
        let free = allowed.iter().map(|a| a.len().saturating_sub(1)).sum::<usize>() + alpha_p_free as usize + beta_p_free as usize;
        FiberDescription {
            anchors: (inner_swap, outer_swap),
            nonempty,
            s_tag,
            alpha_p_free,
            beta_p_free,
            allowed,
            exponents,
            coordinate_count: (2 + m, free),
        }
    }

    /// Constraint check on a normal form of the matching polydegree.
    pub fn admits(&self, fnf: &FiberNormalForm) -> bool {
        if !self.nonempty || fnf.q.len() != self.allowed.len() {
            return false;
        }
        if (!self.alpha_p_free && !fnf.s.alpha_p.is_zero()) || (!self.beta_p_free && !fnf.s.beta_p.is_zero()) {
            return false;
        }
        fnf.q.iter().zip(&self.allowed).all(|(q, ok)| {
            q.degree().is_some_and(|dq| ok.contains(&(dq as u32)))
                && q.coeffs().iter().enumerate().all(|(i, c)| c.is_zero() || ok.contains(&(i as u32)))
        })
    }

    /// Membership of an automorphism A∘f'∘B in this fiber.
    pub fn contains(&self, f: &PlaneAut) -> bool {
        let tau = PlaneAut::swap(f.field());
        let mut core = f.clone();
        if self.anchors.1 {
            core = match tau.compose(&core) {
                Ok(c) => c,
                Err(_) => return false,
            };
        }
        if self.anchors.0 {
            core = match core.compose(&tau) {
                Ok(c) => c,
                Err(_) => return false,
            };
        }
        match extract_fiber(&core) {
            Ok(fnf) => self.admits(&fnf),
            Err(_) => false,
        }
    }
}

/// Residue l ∈ {1,…,k} with x·l ≡ y, when x is a unit mod k.
fn residue_class(g: &DiagonalGroup, x: i64, y: i64) -> Option<u32> {
    if g.k == 0 {
        return (x != 0 && y % x == 0 && y / x >= 1).then(|| (y / x) as u32);
    }
    let k = g.k as i64;
    let xi = inverse_mod(x, k)?;
    let l = (y * xi).rem_euclid(k);
    Some(if l == 0 { k as u32 } else { l as u32 })
}

/// 𝓕_d^G: equivariant members of the fiber over (0,0).
pub fn classify_fiber_centralizer(d: &[u32], g: &DiagonalGroup) -> Result<CentralizerDescription> {
    check_polydegree(d)?;
    let fib = FiberDescription::compute(d, g, false, false);
    let swapped = d.first().is_some_and(|&d1| matches!(HdGroup::normalize(g, d1), Ok((_, true))));
    Ok(CentralizerDescription {
        case: if fib.nonempty { CaseTag::Fiber } else { CaseTag::Empty },
        polydegree: d.to_vec(),
        group: *g,
        fibers: vec![fib],
        v: None,
        swapped,
        monomials: None,
    })
}

fn check_polydegree(d: &[u32]) -> Result<()> {
    if d.iter().any(|&x| x < 2) {
        return Err(Error::DegreeMismatch(format!("polydegree entries must be at least 2: {d:?}")));
    }
    Ok(())
}

/// 𝓐_d^G split by the anchor lines of f and f⁻¹.
pub fn classify_ad_centralizer(d: &[u32], g: &DiagonalGroup) -> Result<CentralizerDescription> {
    check_polydegree(d)?;
    let combos = [(false, false), (true, true), (true, false), (false, true)];
    let fibers: Vec<FiberDescription> =
        combos.iter().map(|&(inner, outer)| FiberDescription::compute(d, g, outer, inner)).collect();
    let live = fibers.iter().filter(|f| f.nonempty).count();
    let case = if g.is_central() && fibers[0].nonempty {
        CaseTag::BundleOverP1xP1
    } else {
        match live {
            0 => CaseTag::Empty,
            1 => CaseTag::SingleFiber,
            _ => CaseTag::TwoFibers,
        }
    };
    Ok(CentralizerDescription {
        case,
        polydegree: d.to_vec(),
        group: *g,
        fibers,
        v: None,
        swapped: false,
        monomials: None,
    })
}

impl CentralizerDescription {
    /// Membership predicate for an automorphism over a field containing the group.
    pub fn contains(&self, f: &PlaneAut) -> bool {
        if f.polydegree() != self.polydegree && self.monomials.is_none() {
            return false;
        }
        match self.case {
            CaseTag::AffineGl2G | CaseTag::OneParameterFamily => {
                let mons = self.monomials.as_ref().expect("set for these cases");
                (0..2).all(|c| {
                    f.forward().component(c).terms().keys().all(|m| mons[c].contains(&(m.0, m.1)))
                })
            }
            CaseTag::BundleOverP1xP1 => self.contains_via_sections(f),
            _ => self.fibers.iter().any(|fib| fib.contains(f)),
        }
    }

    /// Central groups commute with every linear map, so move both anchors to 0 by the linear
    /// parts of the outer affine factors and test the fiber over (0,0).
    fn contains_via_sections(&self, f: &PlaneAut) -> bool {
        let w = f.word();
        let m = w.len();
        let lin = |a: &crate::plane::AffineMap| crate::plane::AffineMap::linear(a.m.clone()).map(PlaneAut::from_affine);
        let (Ok(inner), Ok(outer)) = (lin(&w.affines[0]), lin(&w.affines[m])) else { return false };
        let Ok(core) = PlaneAut::compose_all(&[&outer.inv(), f, &inner.inv()]) else { return false };
        match extract_fiber(&core) {
            Ok(fnf) => self.fibers[0].admits(&fnf),
            Err(_) => false,
        }
    }
}

/// Finite diagonal group generated by diag(ζ_k^{a_i}, ζ_k^{b_i}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDiagonalGroup {
    pub k: u32,
    pub gens: Vec<(i64, i64)>,
}

impl FiniteDiagonalGroup {
    fn elements(&self) -> BTreeSet<(i64, i64)> {
        let k = self.k as i64;
        let mut set = BTreeSet::from([(0, 0)]);
        loop {
            let mut next = set.clone();
            for &(x, y) in &set {
                for &(a, b) in &self.gens {
                    next.insert(((x + a).rem_euclid(k), (y + b).rem_euclid(k)));
                }
            }
            if next.len() == set.len() {
                return set;
            }
            set = next;
        }
    }

    pub fn is_cyclic(&self) -> bool {
        let els = self.elements();
        let n = els.len() as i64;
        let k = self.k as i64;
        els.iter().any(|&(x, y)| {
            let ord = |v: i64| if v == 0 { 1 } else { k / v.gcd(&k) };
            ord(x).lcm(&ord(y)) == n
        })
    }

    pub fn generators(&self, field: &Field) -> Result<Vec<Mat2>> {
        self.gens.iter().map(|&(a, b)| DiagonalGroup { a, b, k: self.k }.generator_over(field)).collect()
    }

    /// Characters of z₁, z₂ (as exponent vectors) agree on all generators.
    fn same_character(&self) -> bool {
        self.gens.iter().all(|&(a, b)| (a - b).rem_euclid(self.k as i64) == 0)
    }

    fn trivial_on(&self, coord: usize) -> bool {
        self.gens.iter().all(|&(a, b)| (if coord == 0 { a } else { b }).rem_euclid(self.k as i64) == 0)
    }
}

/// Non-cyclic reductive data for the global centralizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NoncyclicGroup {
    Torus(i64, i64),
    Finite(FiniteDiagonalGroup),
}

pub fn centralizer_structure_noncyclic(g: &NoncyclicGroup) -> Result<CentralizerDescription> {
    match g {
        NoncyclicGroup::Torus(a, b) => {
            let (a, b) = (*a, *b);
            if a <= 0 || b <= 0 {
                return Err(Error::UnsupportedGroup(format!("torus weights ({a}, {b}) must be positive")));
            }
            let gg = a.gcd(&b);
            let (a, b) = (a / gg, b / gg);
            let group = DiagonalGroup::torus(a, b);
            let (v, swapped) = if b == 1 && a >= 2 {
                (Some(a as u32), false)
            } else if a == 1 && b >= 2 {
                (Some(b as u32), true)
            } else {
                (None, false)
            };
            let monomials = match v {
                Some(v) if !swapped => [vec![(1, 0), (0, v)], vec![(0, 1)]],
                Some(v) => [vec![(1, 0)], vec![(0, 1), (v, 0)]],
                None if a == b => [vec![(1, 0), (0, 1)], vec![(1, 0), (0, 1)]],
                None => [vec![(1, 0)], vec![(0, 1)]],
            };
            Ok(CentralizerDescription {
                case: if v.is_some() { CaseTag::OneParameterFamily } else { CaseTag::AffineGl2G },
                polydegree: v.map(|v| vec![v]).unwrap_or_default(),
                group,
                fibers: vec![],
                v,
                swapped,
                monomials: Some(monomials),
            })
        }
        NoncyclicGroup::Finite(fg) => {
            if fg.is_cyclic() {
                return Err(Error::GroupIsCyclic);
            }
            let mut mons = [vec![(1, 0)], vec![(0, 1)]];
            if fg.same_character() {
                mons[0].push((0, 1));
                mons[1].push((1, 0));
            }
            for c in 0..2 {
                if fg.trivial_on(c) {
                    mons[c].push((0, 0));
                }
                mons[c].sort();
            }
            Ok(CentralizerDescription {
                case: CaseTag::AffineGl2G,
                polydegree: vec![],
                group: DiagonalGroup { a: 0, b: 0, k: fg.k },
                fibers: vec![],
                v: None,
                swapped: false,
                monomials: Some(mons),
            })
        }
    }
}

/// Elements of the family as a map; used for spot checks.
pub fn one_parameter_member(field: &Field, v: u32, a1: Elem, beta: Elem, a2: Elem) -> Result<PlaneAut> {
    use crate::poly::BiPoly;
    let p1 = BiPoly::z1(field).scale(&a1).add(&BiPoly::monomial(field, beta, 0, v));
    let p2 = BiPoly::z2(field).scale(&a2);
    PlaneAut::invert(&crate::plane::PlaneEndo::new(p1, p2)?)
}
