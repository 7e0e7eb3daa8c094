//! Matrices over `Z_k`, fair submatrices, and covering quadruple systems.

mod construct;
mod covers;
mod local_search;
pub(crate) mod matrix;
mod profile;
mod quad;
pub mod scan;
mod turan;

pub use construct::{count_fair_quads, product_construction, quads_from_matrix, union_product};
pub use covers::{covers, verify_profiles, ProfileOutcome, ProfileReport, Witness, MAX_SIDE};
pub use local_search::{check_lemma_backed, local_search_minimize, LocalSearchOutcome};
pub use matrix::{find_fair_submatrix, is_fair, random_matrix, Modulus, ZkMatrix};
pub use profile::{Family, Profile, ProfileSet};
pub use quad::{Quad, QuadSystem};
pub use turan::{turan_extremal_graph, turan_part_sizes, turan_t, EdgeSet};

/// `C(n, 2)`.
pub fn pairs(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// `C(n, r)` in exact integer arithmetic; `None` on overflow.
pub fn binomial(n: u64, r: u64) -> Option<u64> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}
