//! Randomized oracle suites shared by the acceptance target and the `selftest` command.

use rand::Rng;

use crate::equivariant::{
    build_fiber, centralizer_structure_noncyclic, classify_ad_centralizer, classify_fiber_centralizer,
    conjugate_by_diagonal, extract_fiber, solve_commutant_bruteforce, CaseTag, DiagonalGroup, FiberDescription,
    FiberNormalForm, FiniteDiagonalGroup, NoncyclicGroup, SParams, SubgroupTag,
};
use crate::error::Result;
use crate::fields::{Elem, Field, Scalar, UniPoly};
use crate::plane::{PlaneAut, PlaneEndo};
use crate::poly::Mono;
use crate::random::{self, TestRng};

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub(crate) fn new(name: &str) -> SuiteReport {
        SuiteReport { name: name.to_string(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks > 0
    }

    pub(crate) fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }

    pub(crate) fn fail(&mut self, what: String) {
        self.checks += 1;
        if self.failures.len() < 20 {
            self.failures.push(what);
        }
    }
}

pub const SUITES: &[&str] =
    &["decompose", "polydegree", "diagonal", "fiber", "noncyclic", "kr", "perturbation", "family", "negative"];

pub fn run_suite(name: &str, seed: u64) -> Option<SuiteReport> {
    Some(match name {
        "decompose" => decompose_suite(seed),
        "polydegree" => polydegree_suite(seed),
        "diagonal" => diagonal_suite(seed),
        "fiber" => fiber_suite(seed),
        "noncyclic" => noncyclic_suite(),
        "kr" => crate::dvr::selftest::kr_suite(seed),
        "perturbation" => crate::dvr::selftest::perturbation_suite(seed),
        "family" => crate::family::selftest::family_suite(seed),
        "negative" => negative_suite(),
        _ => return None,
    })
}

/// 200 tame maps over ℚ with polydegree entries in {2,3,4}, length ≤ 3, coefficients in [−9, 9].
pub fn decomposition_corpus(seed: u64) -> Vec<(Vec<u32>, PlaneEndo)> {
    let f = Field::rationals();
    let mut rng = random::rng(seed);
    (0..200)
        .map(|_| {
            let pd = random::polydegree(&mut rng, &[2, 3, 4], 3);
            let g = random::tame_map(&f, &mut rng, &pd, 9);
            (pd, g)
        })
        .collect()
}

pub fn decompose_suite(seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("decompose");
    for (i, (pd, g)) in decomposition_corpus(seed).iter().enumerate() {
        match PlaneAut::invert(g) {
            Ok(a) => {
                r.check(a.word().recompose() == *g, || format!("map {i}: recompose differs"));
                r.check(a.polydegree() == *pd, || format!("map {i}: polydegree {:?} vs {pd:?}", a.polydegree()));
                // apply the inverse word factor by factor so degrees shrink
                r.check(a.word().inverse().apply(g).is_identity(), || format!("map {i}: inverse∘f ≠ id"));
            }
            Err(e) => r.fail(format!("map {i}: {e}")),
        }
    }
    r
}

pub fn polydegree_suite(seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("polydegree");
    let f = Field::rationals();
    let mut rng = random::rng(seed ^ 0x9e37_79b9);
    for (i, (pd, g)) in decomposition_corpus(seed).iter().enumerate() {
        let a = random::affine(&f, &mut rng, 9);
        let b = random::affine(&f, &mut rng, 9);
        let res = (|| -> Result<(Vec<u32>, Vec<u32>)> {
            let inv = PlaneAut::invert(g)?;
            // the endomorphism a∘g∘b is expanded from the word, then decomposed afresh
            let h = PlaneAut::from_affine(a).compose(&inv)?.compose(&PlaneAut::from_affine(b))?;
            let two_sided = PlaneAut::invert(h.forward())?.polydegree();
            let fresh_inverse = PlaneAut::invert(inv.inverse())?.polydegree();
            Ok((two_sided, fresh_inverse))
        })();
        match res {
            Ok((two_sided, inv)) => {
                r.check(two_sided == *pd, || format!("map {i}: affine composition changed {pd:?} to {two_sided:?}"));
                let mut rev = pd.clone();
                rev.reverse();
                r.check(inv == rev, || format!("map {i}: inverse polydegree {inv:?}, expected {rev:?}"));
            }
            Err(e) => r.fail(format!("map {i}: {e}")),
        }
    }
    r
}

fn random_s(field: &Field, rng: &mut TestRng) -> SParams {
    SParams {
        alpha: random::nonzero_constant(field, rng, 3),
        alpha_p: random::constant(field, rng, 3),
        beta: random::nonzero_constant(field, rng, 3),
        beta_p: random::constant(field, rng, 3),
    }
}

/// Random normal form with polydegree `d`.
pub fn random_fiber(field: &Field, rng: &mut TestRng, d: &[u32]) -> FiberNormalForm {
    let s = random_s(field, rng);
    let q = d.iter().map(|&dj| random::upoly(field, rng, dj as usize - 1, 3)).collect();
    FiberNormalForm::new(s, q)
}

pub fn diagonal_suite(seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("diagonal");
    let field = Field::cyclotomic(6);
    let mut rng = random::rng(seed.wrapping_add(3));
    for i in 0..100 {
        let m = rng.gen_range(0..=2);
        let d: Vec<u32> = (0..m).map(|_| rng.gen_range(2..=4)).collect();
        let fnf = random_fiber(&field, &mut rng, &d);
        let l0 = random::nonzero_constant(&field, &mut rng, 2);
        let l1 = random::nonzero_constant(&field, &mut rng, 2);
        let res = (|| -> Result<bool> {
            let formula = conjugate_by_diagonal(&l0, &l1, &fnf)?;
            let g = PlaneAut::diagonal(l0.clone(), l1.clone())?;
            let direct = PlaneAut::compose_all(&[&g.inv(), &build_fiber(&fnf)?, &g])?;
            Ok(extract_fiber(&direct)? == formula)
        })();
        match res {
            Ok(ok) => r.check(ok, || format!("instance {i}: formula differs from direct conjugation (d = {d:?})")),
            Err(e) => r.fail(format!("instance {i}: {e}")),
        }
    }
    r
}

/// Polydegrees with entries ≥ 2 and sum ≤ 6.
pub fn small_polydegrees() -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, left: u32, out: &mut Vec<Vec<u32>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        for d in 2..=left {
            prefix.push(d);
            rec(prefix, left - d, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), 6, &mut out);
    out
}

/// Zero the coefficients a fiber description forbids, keeping the top ones.
fn project(fnf: &FiberNormalForm, desc: &FiberDescription) -> FiberNormalForm {
    let field = fnf.field();
    let mut s = fnf.s.clone();
    if !desc.alpha_p_free {
        s.alpha_p = Elem::zero(&field);
    }
    if !desc.beta_p_free {
        s.beta_p = Elem::zero(&field);
    }
    let q = fnf
        .q
        .iter()
        .zip(&desc.allowed)
        .map(|(q, ok)| {
            let top = q.degree().unwrap_or(0);
            let c = q
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| if i == top || ok.contains(&(i as u32)) { c.clone() } else { Elem::zero(&field) })
                .collect();
            UniPoly::new(&field, c)
        })
        .collect();
    FiberNormalForm::new(s, q)
}

fn place(f: &PlaneAut, desc: &FiberDescription) -> Result<PlaneAut> {
    let tau = PlaneAut::swap(f.field());
    let mut g = f.clone();
    if desc.anchors.0 {
        g = g.compose(&tau)?;
    }
    if desc.anchors.1 {
        g = tau.compose(&g)?;
    }
    Ok(g)
}

pub fn fiber_suite(seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("fiber");
    let mut rng = random::rng(seed.wrapping_add(4));
    let mut empties = 0;
    for d in small_polydegrees() {
        let bound: u32 = d.iter().product();
        for k in 1..=6u32 {
            for e in 0..k as i64 {
                let g = DiagonalGroup::cyclic(k, e);
                let field = g.field();
                let res = (|| -> Result<()> {
                    let brute = solve_commutant_bruteforce(bound, &[g.generator()?])?;
                    let fib = classify_fiber_centralizer(&d, &g)?;
                    let ad = classify_ad_centralizer(&d, &g)?;
                    if fib.case == CaseTag::Empty {
                        empties += 1;
                    }
                    for desc in &ad.fibers {
                        for trial in 0..4 {
                            let raw = random_fiber(&field, &mut rng, &d);
                            let fnf = if trial < 2 { raw } else { project(&raw, desc) };
                            let f = place(&build_fiber(&fnf)?, desc)?;
                            let truth = brute.contains(f.forward());
                            let in_fiber = desc.anchors == (false, false);
                            if in_fiber {
                                let said = fib.contains(&f);
                                r.check(said == truth, || {
                                    format!("d={d:?} k={k} e={e}: fiber predicate {said}, brute force {truth}")
                                });
                            }
                            let said = ad.contains(&f);
                            r.check(said == truth, || {
                                format!("d={d:?} k={k} e={e} anchors={:?}: predicate {said}, brute force {truth}", desc.anchors)
                            });
                            if trial >= 2 && desc.nonempty && ad.case != CaseTag::BundleOverP1xP1 {
                                r.check(truth, || format!("d={d:?} k={k} e={e}: projected sample not equivariant"));
                            }
                        }
                    }
                    if ad.case == CaseTag::BundleOverP1xP1 {
                        for _ in 0..2 {
                            let fnf = project(&random_fiber(&field, &mut rng, &d), &ad.fibers[0]);
                            let l1 = PlaneAut::from_affine(random::affine(&field, &mut rng, 3).linear_part());
                            let l2 = PlaneAut::from_affine(random::affine(&field, &mut rng, 3).linear_part());
                            let f = PlaneAut::compose_all(&[&l1, &build_fiber(&fnf)?, &l2])?;
                            let truth = brute.contains(f.forward());
                            let said = ad.contains(&f);
                            r.check(said == truth && truth, || {
                                format!("d={d:?} k={k} e={e}: bundle section sample predicate {said}, brute force {truth}")
                            });
                        }
                    }
                    Ok(())
                })();
                if let Err(err) = res {
                    r.fail(format!("d={d:?} k={k} e={e}: {err}"));
                }
            }
        }
    }
    // parity obstruction and the k | d₁ shape
    let even = classify_fiber_centralizer(&[2, 2], &DiagonalGroup::cyclic(3, 2));
    r.check(matches!(&even, Ok(c) if c.case == CaseTag::Empty), || "d=(2,2), k=3 not empty".into());
    let with_t = classify_fiber_centralizer(&[4], &DiagonalGroup::cyclic(2, 0));
    r.check(
        matches!(&with_t, Ok(c) if c.fibers[0].s_tag == SubgroupTag::T && c.fibers[0].allowed[0] == vec![1, 3]),
        || format!("k | d1 shape wrong: {with_t:?}"),
    );
    r.notes.push(format!("{empties} (d, k, e) combinations with empty fiber centralizer"));
    r
}

pub fn noncyclic_suite() -> SuiteReport {
    let mut r = SuiteReport::new("noncyclic");
    let q = Field::rationals();
    for v in 2..=4i64 {
        for swapped in [false, true] {
            let (a, b) = if swapped { (1, v) } else { (v, 1) };
            let res = (|| -> Result<()> {
                let desc = centralizer_structure_noncyclic(&NoncyclicGroup::Torus(a, b))?;
                let g = DiagonalGroup::torus(a, b).generator()?;
                let brute = solve_commutant_bruteforce(v as u32 + 1, &[g])?;
                let mons = desc.monomials.clone().expect("monomials");
                let sup = brute.support();
                for c in 0..2 {
                    let want: std::collections::BTreeSet<Mono> = mons[c].iter().map(|&(i, j)| Mono(i, j)).collect();
                    r.check(sup[c] == want, || format!("torus ({a},{b}) component {c}: {:?} vs {want:?}", sup[c]));
                }
                r.check(brute.dim() == 3, || format!("torus ({a},{b}): dimension {}", brute.dim()));
                r.check(desc.v == Some(v as u32) && desc.case == CaseTag::OneParameterFamily, || {
                    format!("torus ({a},{b}): description {desc:?}")
                });
                let coords = [q.int(2), q.int(-3), q.int(5)];
                r.check(brute.automorphism_at(&coords).is_some(), || "family member not invertible".into());
                Ok(())
            })();
            if let Err(e) = res {
                r.fail(format!("torus ({a},{b}): {e}"));
            }
        }
    }
    let groups = [
        FiniteDiagonalGroup { k: 2, gens: vec![(1, 0), (0, 1)] },
        FiniteDiagonalGroup { k: 3, gens: vec![(1, 0), (0, 1)] },
        FiniteDiagonalGroup { k: 6, gens: vec![(1, 0), (0, 3)] },
    ];
    for fg in groups {
        let res = (|| -> Result<()> {
            let desc = centralizer_structure_noncyclic(&NoncyclicGroup::Finite(fg.clone()))?;
            let field = if fg.k <= 2 { Field::rationals() } else { Field::cyclotomic(fg.k) };
            let brute = solve_commutant_bruteforce(6, &fg.generators(&field)?)?;
            let sup = brute.support();
            let mons = desc.monomials.clone().expect("monomials");
            for c in 0..2 {
                let low: std::collections::BTreeSet<Mono> = sup[c].iter().filter(|m| m.0 + m.1 <= 1).copied().collect();
                let want: std::collections::BTreeSet<Mono> = mons[c].iter().map(|&(i, j)| Mono(i, j)).collect();
                r.check(low == want, || format!("group {fg:?} component {c}: {low:?} vs {want:?}"));
            }
            r.check(brute.automorphisms_are_affine(), || format!("group {fg:?}: nonlinear automorphism possible"));
            r.check(desc.case == CaseTag::AffineGl2G, || format!("group {fg:?}: case {:?}", desc.case));
            Ok(())
        })();
        if let Err(e) = res {
            r.fail(format!("group {fg:?}: {e}"));
        }
    }
    let cyc = centralizer_structure_noncyclic(&NoncyclicGroup::Finite(FiniteDiagonalGroup { k: 6, gens: vec![(2, 0), (0, 3)] }));
    r.check(cyc == Err(crate::Error::GroupIsCyclic), || "cyclic group not rejected".into());
    r
}

pub fn negative_suite() -> SuiteReport {
    let mut r = SuiteReport::new("negative");
    let f = Field::rationals();
    let bad = [
        PlaneEndo::new(crate::poly::BiPoly::from_ints(&f, &[(2, 0, 1)]), crate::poly::BiPoly::z2(&f)),
        PlaneEndo::new(crate::poly::BiPoly::z1(&f), crate::poly::BiPoly::from_ints(&f, &[(1, 1, 1)])),
    ];
    for b in bad {
        let b = b.expect("valid endo");
        let res = PlaneAut::invert(&b);
        r.check(matches!(res, Err(crate::Error::NotAnAutomorphism(_))), || format!("accepted {b:?}"));
    }
    crate::dvr::selftest::negative_checks(&mut r.checks, &mut r.failures);
    crate::family::selftest::negative_checks(&mut r.checks, &mut r.failures);
    r
}
