//! Exhaustive and sampled scans for matrices without a fair submatrix.
//!
//! The exhaustive scan walks all `k^(rows·cols)` matrices in lexicographic
//! row-major order, split into fixed-size chunks that run on rayon workers.
//! The sampled scan draws matrices from per-chunk PCG32 streams. In both
//! cases the chunking is independent of the worker count, so counts and the
//! reported first failure are reproducible.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::ZkRng;
use crate::zk::matrix::{find_fair_with, RepeatScratch};
use crate::zk::{Modulus, ZkMatrix};

const CHUNK: u64 = 1 << 14;

/// Refuse exhaustive scans larger than this many matrices.
pub const MAX_EXHAUSTIVE_CASES: u64 = 1 << 36;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FairScan {
    pub k: u32,
    pub rows: usize,
    pub cols: usize,
    pub cases: u64,
    /// Matrices with no fair 2x2 submatrix.
    pub failures: u64,
    pub first_failure: Option<ZkMatrix>,
}

fn check_shape(k: u32, rows: usize, cols: usize) -> Result<Modulus> {
    let modulus = Modulus::new(k as u64)?;
    if rows < 2 || cols < 2 {
        return Err(Error::Dimension {
            rows,
            cols,
            requirement: "at least 2 rows and 2 columns",
        });
    }
    Ok(modulus)
}

/// Number of matrices in the exhaustive scan, if it is within the cap.
pub fn exhaustive_case_count(k: u32, rows: usize, cols: usize) -> Option<u64> {
    let cells = u32::try_from(rows.checked_mul(cols)?).ok()?;
    (k as u64)
        .checked_pow(cells)
        .filter(|&c| c <= MAX_EXHAUSTIVE_CASES)
}

struct ChunkResult {
    failures: u64,
    first: Option<u64>,
}

pub fn exhaustive_fair_scan(k: u32, rows: usize, cols: usize) -> Result<FairScan> {
    let modulus = check_shape(k, rows, cols)?;
    let cases = exhaustive_case_count(k, rows, cols).ok_or_else(|| {
        Error::TooLarge(format!(
            "exhaustive scan of {rows}x{cols} matrices over Z_{k}"
        ))
    })?;
    let chunks = cases.div_ceil(CHUNK);
    let results: Vec<ChunkResult> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(cases);
            let mut x = ZkMatrix::zeros(modulus, rows, cols);
            decode_case(start, k, x.entries_mut());
            let mut diffs = Vec::with_capacity(cols);
            let mut scratch = RepeatScratch::new(modulus);
            let mut out = ChunkResult {
                failures: 0,
                first: None,
            };
            for index in start..end {
                if find_fair_with(&x, &mut diffs, &mut scratch).is_none() {
                    out.failures += 1;
                    out.first.get_or_insert(index);
                }
                increment(x.entries_mut(), k);
            }
            out
        })
        .collect();

    let failures = results.iter().map(|r| r.failures).sum();
    let first_failure = results.iter().find_map(|r| r.first).map(|index| {
        let mut x = ZkMatrix::zeros(modulus, rows, cols);
        decode_case(index, k, x.entries_mut());
        x
    });
    Ok(FairScan {
        k,
        rows,
        cols,
        cases,
        failures,
        first_failure,
    })
}

/// Scans `samples` uniformly random matrices.
pub fn sampled_fair_scan(
    k: u32,
    rows: usize,
    cols: usize,
    samples: u64,
    seed: u64,
) -> Result<FairScan> {
    let modulus = check_shape(k, rows, cols)?;
    let chunks = samples.div_ceil(CHUNK);
    let results: Vec<(u64, Option<ZkMatrix>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = CHUNK.min(samples - c * CHUNK);
            let mut rng = ZkRng::with_stream(seed, c);
            let mut x = ZkMatrix::zeros(modulus, rows, cols);
            let mut diffs = Vec::with_capacity(cols);
            let mut scratch = RepeatScratch::new(modulus);
            let mut failures = 0;
            let mut first = None;
            for _ in 0..count {
                for e in x.entries_mut() {
                    *e = rng.below(k);
                }
                if find_fair_with(&x, &mut diffs, &mut scratch).is_none() {
                    failures += 1;
                    first.get_or_insert_with(|| x.clone());
                }
            }
            (failures, first)
        })
        .collect();
    Ok(FairScan {
        k,
        rows,
        cols,
        cases: samples,
        failures: results.iter().map(|r| r.0).sum(),
        first_failure: results.into_iter().find_map(|r| r.1),
    })
}

/// Writes case `index` as base-`k` digits, most significant first.
fn decode_case(mut index: u64, k: u32, entries: &mut [u32]) {
    for e in entries.iter_mut().rev() {
        *e = (index % k as u64) as u32;
        index /= k as u64;
    }
}

fn increment(entries: &mut [u32], k: u32) {
    for e in entries.iter_mut().rev() {
        *e += 1;
        if *e < k {
            return;
        }
        *e = 0;
    }
}
