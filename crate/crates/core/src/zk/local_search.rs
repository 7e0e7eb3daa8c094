//! Descent on the matrix seed of a fair-submatrix system.
//!
//! Starting from [`random_matrix`], entries are visited in row-major order and
//! each entry moves to the smallest value that strictly lowers the number of
//! fair submatrices (first improvement). Passes repeat until a full pass
//! makes no move or the evaluation budget runs out. Every matrix yields a
//! covering system for lemma-backed profiles, so the result stays valid
//! throughout; it is re-verified before returning.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zk::{count_fair_quads, quads_from_matrix, random_matrix, verify_profiles};
use crate::zk::{ProfileSet, QuadSystem, ZkMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSearchOutcome {
    pub matrix: ZkMatrix,
    pub quads: QuadSystem,
    pub start_size: u64,
    pub moves: u64,
    /// Entry visits performed; bounded by the budget.
    pub evaluations: u64,
    /// True when the last pass made no move.
    pub local_minimum: bool,
}

/// Checks that fair-submatrix systems over `Z_k` cover every profile.
///
/// A profile is covered when it dominates `(2, k+1)` or `(k+1, 2)`, or, for
/// even `k`, `(3, k)` or `(k, 3)`.
pub fn check_lemma_backed(k: u32, profiles: &ProfileSet) -> Result<()> {
    let k = k as usize;
    for p in profiles.iter() {
        let (a, b) = (p.a(), p.b());
        let two_rows = b > k || a > k;
        let three_rows = k.is_multiple_of(2) && ((a >= 3 && b >= k) || (a >= k && b >= 3));
        if !(two_rows || three_rows) {
            return Err(Error::CoverageNotGuaranteed { k: k as u32, a, b });
        }
    }
    Ok(())
}

pub fn local_search_minimize(
    n: usize,
    m: usize,
    k: u32,
    profiles: &ProfileSet,
    seed: u64,
    budget: u64,
) -> Result<LocalSearchOutcome> {
    check_lemma_backed(k, profiles)?;
    profiles.check_feasible(n, m)?;
    if k > 1 << 16 {
        return Err(Error::TooLarge(format!("local search modulus {k}")));
    }
    let mut x = random_matrix(n, m, k, seed)?;
    let start_size = count_fair_quads(&x)?;
    let (moves, evaluations, local_minimum) = descend(&mut x, budget);

    let quads = quads_from_matrix(&x)?;
    let report = verify_profiles(&quads, profiles)?;
    if let Some(bad) = report.first_failure() {
        return Err(Error::CoverageViolated {
            a: bad.profile.a(),
            b: bad.profile.b(),
        });
    }
    Ok(LocalSearchOutcome {
        matrix: x,
        quads,
        start_size,
        moves,
        evaluations,
        local_minimum,
    })
}

/// Returns `(moves, evaluations, reached_local_minimum)`.
fn descend(x: &mut ZkMatrix, budget: u64) -> (u64, u64, bool) {
    let (n, m) = (x.rows(), x.cols());
    let k = x.k();
    let mut counts = vec![0u64; k.get() as usize];
    let mut moves = 0;
    let mut evaluations = 0;
    loop {
        let mut improved = false;
        for r in 0..n {
            for c in 0..m {
                if evaluations >= budget {
                    return (moves, evaluations, false);
                }
                evaluations += 1;
                // counts[w]: fair submatrices through (r, c) if x_rc were w.
                // With rows r, j and columns c, q the submatrix is fair iff
                // w = x_jc + x_rq - x_jq.
                counts.fill(0);
                for j in (0..n).filter(|&j| j != r) {
                    let x_jc = x.get(j, c);
                    for q in (0..m).filter(|&q| q != c) {
                        let w = k.sub(k.add(x_jc, x.get(r, q)), x.get(j, q));
                        counts[w as usize] += 1;
                    }
                }
                let current = x.get(r, c) as usize;
                if let Some(w) = (0..counts.len()).find(|&w| counts[w] < counts[current]) {
                    x.set(r, c, w as u32);
                    moves += 1;
                    improved = true;
                }
            }
        }
        if !improved {
            return (moves, evaluations, true);
        }
    }
}
