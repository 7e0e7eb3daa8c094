use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::ZkRng;
use crate::zk::Quad;

/// The modulus `k` of `Z_k`; always at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u32")]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(k: u64) -> Result<Self> {
        if k < 2 || k > u32::MAX as u64 {
            return Err(Error::InvalidModulus(k));
        }
        Ok(Modulus(k as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn add(self, x: u32, y: u32) -> u32 {
        ((x as u64 + y as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, x: u32, y: u32) -> u32 {
        ((x as u64 + self.0 as u64 - y as u64) % self.0 as u64) as u32
    }
}

impl TryFrom<u64> for Modulus {
    type Error = Error;
    fn try_from(k: u64) -> Result<Self> {
        Modulus::new(k)
    }
}

impl From<Modulus> for u32 {
    fn from(k: Modulus) -> u32 {
        k.0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A row-major matrix over `Z_k`.
///
/// Serialized as `{"k": int, "rows": int, "cols": int, "entries": [...]}`;
/// deserialization re-checks the entry count and range.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct ZkMatrix {
    k: Modulus,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

#[derive(Deserialize)]
struct RawMatrix {
    k: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl TryFrom<RawMatrix> for ZkMatrix {
    type Error = Error;
    fn try_from(raw: RawMatrix) -> Result<Self> {
        let k = Modulus::new(raw.k)?;
        let mut entries = Vec::with_capacity(raw.entries.len());
        for (index, &value) in raw.entries.iter().enumerate() {
            if value >= k.get() as u64 {
                return Err(Error::EntryOutOfRange {
                    index,
                    value,
                    k: k.get(),
                });
            }
            entries.push(value as u32);
        }
        ZkMatrix::new(k, raw.rows, raw.cols, entries)
    }
}

impl ZkMatrix {
    pub fn new(k: Modulus, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        let expected = rows
            .checked_mul(cols)
            .ok_or_else(|| Error::TooLarge(format!("{rows}x{cols} matrix")))?;
        if entries.len() != expected {
            return Err(Error::EntryCount {
                got: entries.len(),
                expected,
            });
        }
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, &v)| v >= k.get()) {
            return Err(Error::EntryOutOfRange {
                index,
                value: value as u64,
                k: k.get(),
            });
        }
        Ok(ZkMatrix {
            k,
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from nested rows; every row must have the same length.
    pub fn from_rows<R: AsRef<[u32]>>(k: Modulus, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::EntryCount {
                    got: row.len(),
                    expected: cols,
                });
            }
            entries.extend_from_slice(row);
        }
        ZkMatrix::new(k, rows.len(), cols, entries)
    }

    pub fn zeros(k: Modulus, rows: usize, cols: usize) -> Self {
        ZkMatrix {
            k,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    #[inline]
    pub fn k(&self) -> Modulus {
        self.k
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of bounds"
        );
        self.entries[r * self.cols + c]
    }

    /// Panics if the position is out of bounds or the value is not in `Z_k`.
    pub fn set(&mut self, r: usize, c: usize, value: u32) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of bounds"
        );
        assert!(value < self.k.get(), "value {value} not in Z_{}", self.k);
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [u32] {
        &mut self.entries
    }

    /// The 2x2 submatrix on rows `i,j` and columns `p,q`.
    pub fn submatrix(&self, quad: Quad) -> ZkMatrix {
        let Quad { i, j, p, q } = quad;
        ZkMatrix {
            k: self.k,
            rows: 2,
            cols: 2,
            entries: vec![
                self.get(i, p),
                self.get(i, q),
                self.get(j, p),
                self.get(j, q),
            ],
        }
    }

    pub fn transpose(&self) -> ZkMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c));
            }
        }
        ZkMatrix {
            k: self.k,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub(crate) fn require_at_least_2x2(&self) -> Result<()> {
        if self.rows < 2 || self.cols < 2 {
            return Err(Error::Dimension {
                rows: self.rows,
                cols: self.cols,
                requirement: "at least 2 rows and 2 columns",
            });
        }
        Ok(())
    }
}

/// True iff `x11 + x22 = x12 + x21` in `Z_k`.
pub fn is_fair(m: &ZkMatrix) -> Result<bool> {
    if m.rows != 2 || m.cols != 2 {
        return Err(Error::Dimension {
            rows: m.rows,
            cols: m.cols,
            requirement: "a 2x2 matrix",
        });
    }
    let k = m.k;
    let e = &m.entries;
    Ok(k.add(e[0], e[3]) == k.add(e[1], e[2]))
}

/// Column differences `(x_ip - x_jp) mod k` for the row pair `(i, j)`.
///
/// Columns `p < q` form a fair submatrix with rows `i, j` exactly when their
/// differences coincide.
#[inline]
pub(crate) fn row_differences(m: &ZkMatrix, i: usize, j: usize, out: &mut Vec<u32>) {
    out.clear();
    let k = m.k;
    out.extend(m.row(i).iter().zip(m.row(j)).map(|(&a, &b)| k.sub(a, b)));
}

/// Lexicographically smallest `(i, j, p, q)` with a fair submatrix, if any.
pub fn find_fair_submatrix(m: &ZkMatrix) -> Result<Option<Quad>> {
    m.require_at_least_2x2()?;
    let mut diffs = Vec::with_capacity(m.cols);
    let mut scratch = RepeatScratch::new(m.k);
    Ok(find_fair_with(m, &mut diffs, &mut scratch))
}

pub(crate) fn find_fair_with(
    m: &ZkMatrix,
    diffs: &mut Vec<u32>,
    scratch: &mut RepeatScratch,
) -> Option<Quad> {
    for i in 0..m.rows {
        for j in i + 1..m.rows {
            row_differences(m, i, j, diffs);
            if let Some((p, q)) = scratch.first_repeat_pair(diffs) {
                return Some(Quad { i, j, p, q });
            }
        }
    }
    None
}

/// Largest modulus for which repeat detection uses a value-indexed table.
const TABLE_LIMIT: u32 = 1 << 16;

pub(crate) struct RepeatScratch {
    next: Vec<usize>,
}

impl RepeatScratch {
    pub(crate) fn new(k: Modulus) -> Self {
        let len = if k.get() <= TABLE_LIMIT {
            k.get() as usize
        } else {
            0
        };
        RepeatScratch {
            next: vec![usize::MAX; len],
        }
    }

    /// Smallest `(p, q)`, `p < q`, with `d[p] == d[q]`, ordered by `p` then `q`.
    pub(crate) fn first_repeat_pair(&mut self, d: &[u32]) -> Option<(usize, usize)> {
        if self.next.is_empty() {
            return (0..d.len())
                .find_map(|p| (p + 1..d.len()).find(|&q| d[q] == d[p]).map(|q| (p, q)));
        }
        // Right-to-left: after visiting p, next[d[p]] is the nearest repeat after p.
        let mut best = None;
        for p in (0..d.len()).rev() {
            let v = d[p] as usize;
            if self.next[v] != usize::MAX {
                best = Some((p, self.next[v]));
            }
            self.next[v] = p;
        }
        for &v in d {
            self.next[v as usize] = usize::MAX;
        }
        best
    }
}

/// Matrix with entries drawn independently and uniformly from `Z_k`.
pub fn random_matrix(n: usize, m: usize, k: u32, seed: u64) -> Result<ZkMatrix> {
    let modulus = Modulus::new(k as u64)?;
    if n < 2 || m < 2 {
        return Err(Error::Dimension {
            rows: n,
            cols: m,
            requirement: "at least 2 rows and 2 columns",
        });
    }
    let mut rng = ZkRng::new(seed);
    let entries = (0..n * m).map(|_| rng.below(k)).collect();
    ZkMatrix::new(modulus, n, m, entries)
}
