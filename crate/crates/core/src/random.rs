//! Seeded random objects for property checks and self-tests.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fields::{Cyclo, Elem, Field, Scalar, UniPoly};
use crate::plane::{AffineMap, ElementaryMap, PlaneEndo};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed from `PLANEAUT_SEED`, defaulting to 0.
pub fn env_seed() -> u64 {
    std::env::var("PLANEAUT_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(0)
}

/// Element of the constant field with power-basis integer coordinates in [−bound, bound].
pub fn constant(field: &Field, rng: &mut TestRng, bound: i64) -> Elem {
    let base = field.base();
    let coeffs =
        (0..base.degree()).map(|_| num_rational::BigRational::from_integer(rng.gen_range(-bound..=bound).into())).collect();
    field.embed(&Cyclo::from_coeffs(base, coeffs))
}

pub fn nonzero_constant(field: &Field, rng: &mut TestRng, bound: i64) -> Elem {
    loop {
        let c = constant(field, rng, bound);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Random polynomial of exact degree `deg`.
pub fn upoly(field: &Field, rng: &mut TestRng, deg: usize, bound: i64) -> UniPoly<Elem> {
    let mut c: Vec<Elem> = (0..deg).map(|_| constant(field, rng, bound)).collect();
    c.push(nonzero_constant(field, rng, bound));
    UniPoly::new(field, c)
}

pub fn affine(field: &Field, rng: &mut TestRng, bound: i64) -> AffineMap {
    loop {
        let mut e = || constant(field, rng, bound);
        let m = [[e(), e()], [e(), e()]];
        let t = [e(), e()];
        if let Ok(a) = AffineMap::new(m, t) {
            return a;
        }
    }
}

/// Affine map outside the triangular subgroup, so words do not collapse.
pub fn affine_not_triangular(field: &Field, rng: &mut TestRng, bound: i64) -> AffineMap {
    loop {
        let a = affine(field, rng, bound);
        if !a.is_triangular() {
            return a;
        }
    }
}

pub fn elementary(field: &Field, rng: &mut TestRng, deg: usize, bound: i64) -> ElementaryMap {
    ElementaryMap::new(
        nonzero_constant(field, rng, bound),
        nonzero_constant(field, rng, bound),
        constant(field, rng, bound),
        upoly(field, rng, deg, bound),
    )
    .expect("nonzero scalings")
}

/// a_{m+1}∘e_m∘…∘e_1∘a_1 with deg e_j = degrees[j] and interior affines off the triangular group.
pub fn tame_map(field: &Field, rng: &mut TestRng, degrees: &[u32], bound: i64) -> PlaneEndo {
    let mut g = affine(field, rng, bound).to_endo();
    for (j, &d) in degrees.iter().enumerate() {
        g = elementary(field, rng, d as usize, bound).apply(&g);
        let a = if j + 1 == degrees.len() { affine(field, rng, bound) } else { affine_not_triangular(field, rng, bound) };
        g = a.apply(&g);
    }
    g
}

/// Polydegree with entries in `choices` and length in 0..=max_len.
pub fn polydegree(rng: &mut TestRng, choices: &[u32], max_len: usize) -> Vec<u32> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| choices[rng.gen_range(0..choices.len())]).collect()
}
