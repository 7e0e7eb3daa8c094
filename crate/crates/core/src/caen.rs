//! The two-part 4-graph built from a binary matrix.
//!
//! Vertices are `A = {a_0..a_{n-1}}` and `B = {b_0..b_{m-1}}`. Every 4-subset
//! of A and every 4-subset of B is an edge (kept implicit), and a mixed
//! quadruple `{a_i, a_j, b_p, b_q}` is an edge when
//! `x_ip + x_iq + x_jp + x_jq` is even.
//!
//! Summary JSON: `{n, m, e22_count, e40_count, e04_count, density_num,
//! density_den, covered}`.

use itertools::Itertools;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zk::{binomial, Quad, QuadSystem, ZkMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourGraph {
    n: usize,
    m: usize,
    e22: QuadSystem,
}

/// A 5-set of vertices, split into its A-part and B-part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiveSet {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

pub fn build_caen(x: &ZkMatrix) -> Result<FourGraph> {
    if x.k().get() != 2 {
        return Err(Error::NotBinary(x.k().get()));
    }
    x.require_at_least_2x2()?;
    let (n, m) = (x.rows(), x.cols());
    let mut e22 = Vec::new();
    for (i, j) in (0..n).tuple_combinations() {
        for (p, q) in (0..m).tuple_combinations() {
            if (x.get(i, p) + x.get(i, q) + x.get(j, p) + x.get(j, q)).is_multiple_of(2) {
                e22.push(Quad { i, j, p, q });
            }
        }
    }
    Ok(FourGraph {
        n,
        m,
        e22: QuadSystem::from_sorted(n, m, e22),
    })
}

impl FourGraph {
    /// A 4-graph with an arbitrary mixed edge set.
    pub fn from_parts(e22: QuadSystem) -> Self {
        FourGraph {
            n: e22.n(),
            m: e22.m(),
            e22,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn e22(&self) -> &QuadSystem {
        &self.e22
    }

    pub fn e40_count(&self) -> u64 {
        binomial(self.n as u64, 4).expect("side size fits")
    }

    pub fn e04_count(&self) -> u64 {
        binomial(self.m as u64, 4).expect("side size fits")
    }

    pub fn edge_count(&self) -> u64 {
        self.e40_count() + self.e04_count() + self.e22.len() as u64
    }

    /// Whether the 5-set (A-part `a`, B-part `b`) contains an edge.
    fn spans_edge(&self, a: &[usize], b: &[usize]) -> bool {
        if a.len() >= 4 || b.len() >= 4 {
            return true;
        }
        if a.len() < 2 || b.len() < 2 {
            return false;
        }
        a.iter().tuple_combinations().any(|(&i, &j)| {
            b.iter()
                .tuple_combinations()
                .any(|(&p, &q)| self.e22.contains(&Quad { i, j, p, q }))
        })
    }
}

/// Returns the lexicographically first 5-set of `A ∪ B` (A listed before B)
/// that contains no edge, or `None` if every 5-set spans an edge.
pub fn verify_cover5(h: &FourGraph) -> Result<Option<FiveSet>> {
    let total = h.n + h.m;
    if total < 5 {
        return Err(Error::InvalidArgument(format!(
            "5-set check needs at least 5 vertices, got {total}"
        )));
    }
    let split = |set: &[usize]| -> (Vec<usize>, Vec<usize>) {
        let a = set.iter().copied().filter(|&v| v < h.n).collect();
        let b = set
            .iter()
            .filter(|&&v| v >= h.n)
            .map(|&v| v - h.n)
            .collect();
        (a, b)
    };
    Ok((0..total - 4).into_par_iter().find_map_first(|first| {
        (first + 1..total).combinations(4).find_map(|rest| {
            let mut set = Vec::with_capacity(5);
            set.push(first);
            set.extend(rest);
            let (a, b) = split(&set);
            (!h.spans_edge(&a, &b)).then_some(FiveSet { a, b })
        })
    }))
}

/// `α(H) <= 4`, read as: every 5-set spans an edge.
pub fn independence_number_below_five(h: &FourGraph) -> Result<bool> {
    Ok(verify_cover5(h)?.is_none())
}

/// Edge density `|E| / C(n+m, 4)`.
pub fn caen_density(h: &FourGraph) -> Ratio<u64> {
    let all = binomial((h.n + h.m) as u64, 4).expect("vertex count fits");
    Ratio::new(h.edge_count(), all.max(1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourGraphSummary {
    pub n: usize,
    pub m: usize,
    pub e22_count: u64,
    pub e40_count: u64,
    pub e04_count: u64,
    pub density_num: u64,
    pub density_den: u64,
    pub covered: bool,
}

impl FourGraphSummary {
    pub fn new(h: &FourGraph) -> Result<Self> {
        let density = caen_density(h);
        Ok(FourGraphSummary {
            n: h.n,
            m: h.m,
            e22_count: h.e22.len() as u64,
            e40_count: h.e40_count(),
            e04_count: h.e04_count(),
            density_num: *density.numer(),
            density_den: *density.denom(),
            covered: independence_number_below_five(h)?,
        })
    }
}
