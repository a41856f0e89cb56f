//! Equivariant automorphisms: fiber normal forms, diagonal conjugation, centralizer
//! classification and a brute-force commutant oracle.

pub mod classify;
pub mod commutant;
pub mod fiber;

pub use classify::{
    centralizer_structure_noncyclic, classify_ad_centralizer, classify_fiber_centralizer, CaseTag,
    CentralizerDescription, DiagonalGroup, FiberDescription, FiniteDiagonalGroup, HdGroup, NoncyclicGroup, SubgroupTag,
};
pub use commutant::{solve_commutant_bruteforce, Commutant};
pub use fiber::{build_fiber, conjugate_by_diagonal, e_q, extract_fiber, FiberNormalForm, SParams};

use crate::group::GroupAction;
use crate::plane::PlaneEndo;

/// f∘g = g∘f for every generator.
pub fn is_equivariant(f: &PlaneEndo, g: &GroupAction) -> bool {
    g.generators.iter().all(|gen| match (f.compose(gen.forward()), gen.forward().compose(f)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    })
}
