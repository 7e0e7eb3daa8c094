use crate::error::Result;
use crate::zk::matrix::row_differences;
use crate::zk::turan::turan_extremal_graph;
use crate::zk::{Profile, ProfileSet, Quad, QuadSystem, ZkMatrix};

/// All quadruples `(i, j, p, q)` whose 2x2 submatrix of `x` is fair.
///
/// For a row pair the columns are bucketed by `x_ip - x_jp`; fair column
/// pairs are exactly the pairs inside one bucket.
pub fn quads_from_matrix(x: &ZkMatrix) -> Result<QuadSystem> {
    x.require_at_least_2x2()?;
    let (n, m) = (x.rows(), x.cols());
    let mut quads = Vec::new();
    let mut diffs = Vec::with_capacity(m);
    // next_same[p]: the next column after p with the same difference.
    let mut next_same = vec![usize::MAX; m];
    let mut last = DiffTable::new(x.k().get());
    for i in 0..n {
        for j in i + 1..n {
            row_differences(x, i, j, &mut diffs);
            for p in (0..m).rev() {
                next_same[p] = last.replace(diffs[p], p);
            }
            last.clear(&diffs);
            for p in 0..m {
                let mut q = next_same[p];
                while q != usize::MAX {
                    quads.push(Quad { i, j, p, q });
                    q = next_same[q];
                }
            }
        }
    }
    // Emitted in (i, j, p, q) order already.
    Ok(QuadSystem::from_sorted(n, m, quads))
}

/// `|quads_from_matrix(x)|` without materializing the system.
pub fn count_fair_quads(x: &ZkMatrix) -> Result<u64> {
    x.require_at_least_2x2()?;
    let n = x.rows();
    let mut diffs = Vec::with_capacity(x.cols());
    let mut counts = DiffTable::new(x.k().get());
    let mut total = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            row_differences(x, i, j, &mut diffs);
            for &d in &diffs {
                total += counts.bump(d);
            }
            counts.clear(&diffs);
        }
    }
    Ok(total)
}

/// Small value-indexed table with a hash-map fallback for huge moduli.
struct DiffTable {
    dense: Vec<usize>,
    sparse: std::collections::HashMap<u32, usize>,
}

const EMPTY: usize = usize::MAX;

impl DiffTable {
    fn new(k: u32) -> Self {
        let dense = if k <= 1 << 16 {
            vec![EMPTY; k as usize]
        } else {
            Vec::new()
        };
        DiffTable {
            dense,
            sparse: Default::default(),
        }
    }

    fn slot(&mut self, v: u32) -> &mut usize {
        if self.dense.is_empty() {
            self.sparse.entry(v).or_insert(EMPTY)
        } else {
            &mut self.dense[v as usize]
        }
    }

    /// Stores `value` under `v`, returning the previous value.
    fn replace(&mut self, v: u32, value: usize) -> usize {
        std::mem::replace(self.slot(v), value)
    }

    /// Increments the count under `v`, returning the count before.
    fn bump(&mut self, v: u32) -> u64 {
        let slot = self.slot(v);
        let before = if *slot == EMPTY { 0 } else { *slot };
        *slot = before + 1;
        before as u64
    }

    fn clear(&mut self, touched: &[u32]) {
        if self.dense.is_empty() {
            self.sparse.clear();
        } else {
            for &v in touched {
                self.dense[v as usize] = EMPTY;
            }
        }
    }
}

/// Product of the extremal graphs: A-edges of `T(n, a)` times B-edges of `T(m, b)`.
///
/// Any `a`-subset of A contains an edge of the first graph and any `b`-subset
/// of B an edge of the second, so the product covers `profile`.
pub fn product_construction(n: usize, m: usize, profile: Profile) -> Result<QuadSystem> {
    profile.check_feasible(n, m)?;
    let ga = turan_extremal_graph(n, profile.a())?;
    let gb = turan_extremal_graph(m, profile.b())?;
    let mut quads = Vec::with_capacity(ga.len() * gb.len());
    for &(i, j) in ga.edges() {
        for &(p, q) in gb.edges() {
            quads.push(Quad { i, j, p, q });
        }
    }
    Ok(QuadSystem::from_sorted(n, m, quads))
}

/// Deduplicated union of the per-profile product constructions.
pub fn union_product(n: usize, m: usize, profiles: &ProfileSet) -> Result<QuadSystem> {
    let mut out = QuadSystem::empty(n, m);
    for &profile in profiles.iter() {
        out = out.union(&product_construction(n, m, profile)?)?;
    }
    Ok(out)
}
