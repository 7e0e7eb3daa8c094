//! Graph Turán numbers `T(n, s, 2)` and their extremal graphs.
//!
//! `T(n, s, 2)` is the least number of edges of an `n`-vertex graph with no
//! independent set of size `s`. The extremal graph is a disjoint union of
//! `s - 1` cliques whose sizes differ by at most one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple graph on vertices `0..n`, edges stored as sorted `(u, v)` with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSet {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl EdgeSet {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = Vec::new();
        for (u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u},{v}) invalid on {n} vertices"
                )));
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        out.dedup();
        Ok(EdgeSet { n, edges: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }
}

fn check_args(n: usize, s: usize) -> Result<()> {
    if n < 1 || s < 2 {
        return Err(Error::InvalidArgument(format!(
            "Turán parameters need n >= 1 and s >= 2, got n={n}, s={s}"
        )));
    }
    Ok(())
}

/// `T(n, s, 2) = t·n - (s-1)·t(t+1)/2` with `t = floor(n / (s-1))`.
pub fn turan_t(n: usize, s: usize) -> Result<u64> {
    check_args(n, s)?;
    let parts = (s - 1) as u128;
    let n = n as u128;
    let t = n / parts;
    let value = t * n - parts * t * (t + 1) / 2;
    u64::try_from(value).map_err(|_| Error::TooLarge(format!("T({n},{s},2)")))
}

/// Sizes of the `s - 1` near-equal cliques, larger parts first.
pub fn turan_part_sizes(n: usize, s: usize) -> Result<Vec<usize>> {
    check_args(n, s)?;
    let parts = s - 1;
    let (base, extra) = (n / parts, n % parts);
    Ok((0..parts)
        .map(|idx| base + usize::from(idx < extra))
        .collect())
}

/// Disjoint union of `s - 1` cliques on consecutive vertex blocks.
pub fn turan_extremal_graph(n: usize, s: usize) -> Result<EdgeSet> {
    let sizes = turan_part_sizes(n, s)?;
    let mut edges = Vec::new();
    let mut start = 0;
    for size in sizes {
        for u in start..start + size {
            for v in u + 1..start + size {
                edges.push((u, v));
            }
        }
        start += size;
    }
    Ok(EdgeSet { n, edges })
}
