use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The quadruple `{a_i, a_j, b_p, b_q}` with `i < j` indexing side A and
/// `p < q` indexing side B (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 4]", into = "[usize; 4]")]
pub struct Quad {
    pub i: usize,
    pub j: usize,
    pub p: usize,
    pub q: usize,
}

impl Quad {
    pub fn new(i: usize, j: usize, p: usize, q: usize) -> Self {
        Quad { i, j, p, q }
    }

    pub fn is_valid_for(&self, n: usize, m: usize) -> bool {
        self.i < self.j && self.j < n && self.p < self.q && self.q < m
    }

    /// Same quadruple with the roles of A and B exchanged.
    pub fn swapped(self) -> Quad {
        Quad {
            i: self.p,
            j: self.q,
            p: self.i,
            q: self.j,
        }
    }
}

impl From<[usize; 4]> for Quad {
    fn from([i, j, p, q]: [usize; 4]) -> Self {
        Quad { i, j, p, q }
    }
}

impl From<Quad> for [usize; 4] {
    fn from(x: Quad) -> Self {
        [x.i, x.j, x.p, x.q]
    }
}

/// A set of quadruples over sides of size `n` (A) and `m` (B), kept sorted
/// and free of duplicates.
///
/// JSON form: `{"n": int, "m": int, "quads": [[i,j,p,q], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSystem")]
pub struct QuadSystem {
    n: usize,
    m: usize,
    quads: Vec<Quad>,
}

#[derive(Deserialize)]
struct RawSystem {
    n: usize,
    m: usize,
    quads: Vec<[usize; 4]>,
}

impl TryFrom<RawSystem> for QuadSystem {
    type Error = Error;
    fn try_from(raw: RawSystem) -> Result<Self> {
        QuadSystem::new(raw.n, raw.m, raw.quads.into_iter().map(Quad::from))
    }
}

impl QuadSystem {
    pub fn new(n: usize, m: usize, quads: impl IntoIterator<Item = Quad>) -> Result<Self> {
        let mut quads: Vec<Quad> = quads.into_iter().collect();
        if let Some(bad) = quads.iter().find(|x| !x.is_valid_for(n, m)) {
            return Err(Error::InvalidQuad {
                i: bad.i,
                j: bad.j,
                p: bad.p,
                q: bad.q,
                n,
                m,
            });
        }
        quads.sort_unstable();
        quads.dedup();
        Ok(QuadSystem { n, m, quads })
    }

    /// Caller guarantees validity, order, and uniqueness.
    pub(crate) fn from_sorted(n: usize, m: usize, quads: Vec<Quad>) -> Self {
        debug_assert!(quads.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(quads.iter().all(|x| x.is_valid_for(n, m)));
        QuadSystem { n, m, quads }
    }

    pub fn empty(n: usize, m: usize) -> Self {
        QuadSystem {
            n,
            m,
            quads: Vec::new(),
        }
    }

    /// Every one of the `C(n,2)·C(m,2)` quadruples.
    pub fn complete(n: usize, m: usize) -> Self {
        let mut quads = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for p in 0..m {
                    for q in p + 1..m {
                        quads.push(Quad { i, j, p, q });
                    }
                }
            }
        }
        QuadSystem { n, m, quads }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    pub fn quads(&self) -> &[Quad] {
        &self.quads
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Quad> {
        self.quads.iter()
    }

    pub fn contains(&self, quad: &Quad) -> bool {
        self.quads.binary_search(quad).is_ok()
    }

    pub fn union(&self, other: &QuadSystem) -> Result<QuadSystem> {
        if (self.n, self.m) != (other.n, other.m) {
            return Err(Error::InvalidArgument(format!(
                "cannot union systems over ({},{}) and ({},{})",
                self.n, self.m, other.n, other.m
            )));
        }
        let mut quads = self.quads.clone();
        quads.extend_from_slice(&other.quads);
        quads.sort_unstable();
        quads.dedup();
        Ok(QuadSystem::from_sorted(self.n, self.m, quads))
    }

    /// The same system read with A and B exchanged.
    pub fn swapped(&self) -> QuadSystem {
        let mut quads: Vec<Quad> = self.quads.iter().map(|x| x.swapped()).collect();
        quads.sort_unstable();
        QuadSystem::from_sorted(self.m, self.n, quads)
    }
}

impl<'a> IntoIterator for &'a QuadSystem {
    type Item = &'a Quad;
    type IntoIter = std::slice::Iter<'a, Quad>;
    fn into_iter(self) -> Self::IntoIter {
        self.quads.iter()
    }
}
