//! The graph `G_k`: vertices are functions `Z_k -> Z_k`, and `f ~ g` when
//! `f - g` is a bijection of `Z_k`.
//!
//! The graph has `k^k` vertices and is never materialized; adjacency is
//! evaluated on demand. Translation `f -> f + h` and precomposition with a
//! permutation `f -> f ∘ π` are automorphisms, which the clique search uses
//! to fix the zero function and the identity.

mod checkpoint;
mod clique;

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zk::{Modulus, ZkMatrix};

pub use checkpoint::{CheckpointState, CHECKPOINT_VERSION};
pub use clique::{max_clique, CheckpointConfig, CliqueConfig, CliqueResult, StopReason};

/// A function `Z_k -> Z_k` stored as its value table.
///
/// Text form is the comma-separated table, e.g. `"0,1,2"` for the identity on
/// `Z_3`; the modulus is the table length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FnVec {
    k: Modulus,
    values: Vec<u32>,
}

impl FnVec {
    pub fn new(k: Modulus, values: Vec<u32>) -> Result<Self> {
        if values.len() != k.get() as usize {
            return Err(Error::EntryCount {
                got: values.len(),
                expected: k.get() as usize,
            });
        }
        if let Some((index, &v)) = values.iter().enumerate().find(|(_, &v)| v >= k.get()) {
            return Err(Error::EntryOutOfRange {
                index,
                value: v as u64,
                k: k.get(),
            });
        }
        Ok(FnVec { k, values })
    }

    pub fn zero(k: Modulus) -> Self {
        FnVec {
            k,
            values: vec![0; k.get() as usize],
        }
    }

    pub fn identity(k: Modulus) -> Self {
        Self::linear(k, 1)
    }

    /// `x -> a·x mod k`.
    pub fn linear(k: Modulus, a: u32) -> Self {
        let kk = k.get() as u64;
        FnVec {
            k,
            values: (0..kk).map(|x| (a as u64 * x % kk) as u32).collect(),
        }
    }

    pub fn k(&self) -> Modulus {
        self.k
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn is_bijection(&self) -> bool {
        is_permutation(&self.values, self.k.get())
    }

    /// Pointwise sum `f + h`.
    pub fn add(&self, h: &FnVec) -> Result<FnVec> {
        check_same_k(self, h)?;
        let k = self.k;
        Ok(FnVec {
            k,
            values: self
                .values
                .iter()
                .zip(&h.values)
                .map(|(&a, &b)| k.add(a, b))
                .collect(),
        })
    }

    /// `x -> self(perm[x])`; `perm` must be a permutation of `0..k`.
    pub fn compose(&self, perm: &[usize]) -> Result<FnVec> {
        let k = self.k.get() as usize;
        let is_perm = perm.len() == k && {
            let mut seen = vec![false; k];
            perm.iter()
                .all(|&x| x < k && !std::mem::replace(&mut seen[x], true))
        };
        if !is_perm {
            return Err(Error::InvalidArgument(format!(
                "{perm:?} is not a permutation of Z_{k}"
            )));
        }
        Ok(FnVec {
            k: self.k,
            values: perm.iter().map(|&x| self.values[x]).collect(),
        })
    }
}

impl fmt::Display for FnVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.values.iter().join(","))
    }
}

impl FromStr for FnVec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad function value {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        let k = Modulus::new(values.len() as u64)?;
        FnVec::new(k, values)
    }
}

impl TryFrom<String> for FnVec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FnVec> for String {
    fn from(f: FnVec) -> String {
        f.to_string()
    }
}

fn check_same_k(f: &FnVec, g: &FnVec) -> Result<()> {
    if f.k != g.k {
        return Err(Error::ModulusMismatch {
            left: f.k.get(),
            right: g.k.get(),
        });
    }
    Ok(())
}

pub(crate) fn is_permutation(values: &[u32], k: u32) -> bool {
    if k <= 128 {
        let mut seen = 0u128;
        for &v in values {
            let bit = 1u128 << v;
            if seen & bit != 0 {
                return false;
            }
            seen |= bit;
        }
        true
    } else {
        let mut seen = vec![false; k as usize];
        values
            .iter()
            .all(|&v| !std::mem::replace(&mut seen[v as usize], true))
    }
}

/// True iff `x -> f[x] - g[x] mod k` is a bijection.
#[inline]
pub(crate) fn difference_is_bijection(f: &[u32], g: &[u32], k: u32) -> bool {
    if k <= 128 {
        let mut seen = 0u128;
        for (&a, &b) in f.iter().zip(g) {
            let d = if a >= b { a - b } else { a + k - b };
            let bit = 1u128 << d;
            if seen & bit != 0 {
                return false;
            }
            seen |= bit;
        }
        true
    } else {
        let m = Modulus::new(k as u64).expect("k >= 2");
        let diff: Vec<u32> = f.iter().zip(g).map(|(&a, &b)| m.sub(a, b)).collect();
        is_permutation(&diff, k)
    }
}

/// Adjacency in `G_k`.
pub fn is_edge(f: &FnVec, g: &FnVec) -> Result<bool> {
    check_same_k(f, g)?;
    Ok(difference_is_bijection(&f.values, &g.values, f.k.get()))
}

pub fn smallest_prime_factor(k: Modulus) -> u32 {
    let k = k.get();
    (2u32..)
        .take_while(|d| (*d as u64) * (*d as u64) <= k as u64)
        .find(|d| k.is_multiple_of(*d))
        .unwrap_or(k)
}

/// The functions `f_i(x) = i·x`, `0 <= i < p(k)`, which are pairwise adjacent.
pub fn canonical_clique(k: Modulus) -> Vec<FnVec> {
    (0..smallest_prime_factor(k))
        .map(|i| FnVec::linear(k, i))
        .collect()
}

/// Stacks the value tables as rows of a `|fs| x k` matrix.
///
/// The matrix has no fair 2x2 submatrix iff the functions are pairwise
/// adjacent in `G_k`.
pub fn matrix_from_functions(fs: &[FnVec]) -> Result<ZkMatrix> {
    let first = fs
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty function list".into()))?;
    let mut entries = Vec::with_capacity(fs.len() * first.values.len());
    for f in fs {
        check_same_k(first, f)?;
        entries.extend_from_slice(&f.values);
    }
    ZkMatrix::new(first.k, fs.len(), first.values.len(), entries)
}

/// Largest `k` accepted by [`count_triangles`].
pub const TRIANGLE_CAP: u32 = 5;

/// Exact number of triangles in `G_k`.
///
/// By translation every vertex lies in the same number of triangles as the
/// zero function, namely the number `E` of adjacent pairs among its
/// neighbours (the bijections). Hence the total is `k^k · E / 3`.
pub fn count_triangles(k: u32) -> Result<u128> {
    let modulus = Modulus::new(k as u64)?;
    if k > TRIANGLE_CAP {
        return Err(Error::TriangleCap {
            k,
            cap: TRIANGLE_CAP,
        });
    }
    let perms: Vec<Vec<u32>> = (0..k).permutations(k as usize).collect();
    let mut pairs = 0u128;
    for (idx, s) in perms.iter().enumerate() {
        for t in &perms[idx + 1..] {
            if difference_is_bijection(s, t, modulus.get()) {
                pairs += 1;
            }
        }
    }
    let vertices = (k as u128).pow(k);
    debug_assert_eq!(vertices * pairs % 3, 0);
    Ok(vertices * pairs / 3)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zk(k: u64) -> Modulus {
        Modulus::new(k).unwrap()
    }

    #[test]
    fn edge_examples() {
        for k in 2..10 {
            let z = FnVec::zero(zk(k));
            let id = FnVec::identity(zk(k));
            assert!(is_edge(&z, &id).unwrap());
            assert!(!is_edge(&id, &id).unwrap());
        }
        let a: FnVec = "0,0".parse().unwrap();
        let b: FnVec = "1,1".parse().unwrap();
        assert!(!is_edge(&a, &b).unwrap());
    }

    #[test]
    fn edge_rejects_mixed_moduli() {
        let a = FnVec::zero(zk(3));
        let b = FnVec::zero(zk(4));
        assert!(matches!(
            is_edge(&a, &b),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn g2_is_a_four_cycle() {
        let verts: Vec<FnVec> = ["0,0", "0,1", "1,0", "1,1"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let mut degrees = [0; 4];
        let mut edges = 0;
        for a in 0..4 {
            for b in a + 1..4 {
                if is_edge(&verts[a], &verts[b]).unwrap() {
                    degrees[a] += 1;
                    degrees[b] += 1;
                    edges += 1;
                }
            }
        }
        assert_eq!(edges, 4);
        assert_eq!(degrees, [2, 2, 2, 2]);
    }

    #[test]
    fn prime_factors() {
        assert_eq!(smallest_prime_factor(zk(9)), 3);
        assert_eq!(smallest_prime_factor(zk(4)), 2);
        assert_eq!(smallest_prime_factor(zk(7)), 7);
        assert_eq!(smallest_prime_factor(zk(2)), 2);
        assert_eq!(smallest_prime_factor(zk(91)), 7);
        assert_eq!(smallest_prime_factor(zk(97)), 97);
    }

    #[test]
    fn canonical_cliques() {
        let c3: Vec<String> = canonical_clique(zk(3))
            .iter()
            .map(|f| f.to_string())
            .collect();
        assert_eq!(c3, vec!["0,0,0", "0,1,2", "0,2,1"]);
        let c4 = canonical_clique(zk(4));
        assert_eq!(c4, vec![FnVec::zero(zk(4)), FnVec::identity(zk(4))]);
        for k in 2..=30 {
            let c = canonical_clique(zk(k));
            assert_eq!(c.len() as u32, smallest_prime_factor(zk(k)));
            for (a, f) in c.iter().enumerate() {
                for g in &c[a + 1..] {
                    assert!(is_edge(f, g).unwrap(), "k={k}: {f} vs {g}");
                }
            }
        }
    }

    #[test]
    fn bridge_examples() {
        let m = matrix_from_functions(&canonical_clique(zk(3))).unwrap();
        assert_eq!(m.rows(), 3);
        assert!(crate::zk::find_fair_submatrix(&m).unwrap().is_none());
        let m = matrix_from_functions(&canonical_clique(zk(5))).unwrap();
        assert_eq!((m.rows(), m.cols()), (5, 5));
        assert!(crate::zk::find_fair_submatrix(&m).unwrap().is_none());
        let z = FnVec::zero(zk(4));
        let m = matrix_from_functions(&[z.clone(), z]).unwrap();
        assert!(crate::zk::find_fair_submatrix(&m).unwrap().is_some());
        assert!(matrix_from_functions(&[]).is_err());
        assert!(matrix_from_functions(&[FnVec::zero(zk(3)), FnVec::zero(zk(4))]).is_err());
    }

    #[test]
    fn text_form() {
        let f: FnVec = "0, 1,2".parse().unwrap();
        assert_eq!(f, FnVec::identity(zk(3)));
        assert_eq!(f.to_string(), "0,1,2");
        assert!("0,3,1".parse::<FnVec>().is_err());
        assert!("0".parse::<FnVec>().is_err());
        assert!("0,x".parse::<FnVec>().is_err());
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, "\"0,1,2\"");
    }

    #[test]
    fn translation_and_composition() {
        let k = zk(5);
        let f: FnVec = "0,2,4,1,3".parse().unwrap();
        let h: FnVec = "1,1,0,3,2".parse().unwrap();
        assert_eq!(f.add(&h).unwrap().to_string(), "1,3,4,4,0");
        assert_eq!(
            f.compose(&[4, 3, 2, 1, 0]).unwrap().to_string(),
            "3,1,4,2,0"
        );
        assert!(f.compose(&[0, 0, 1, 2, 3]).is_err());
        assert!(FnVec::linear(k, 2).is_bijection());
        assert!(!FnVec::zero(k).is_bijection());
    }

    #[test]
    fn triangle_cap() {
        assert!(matches!(count_triangles(6), Err(Error::TriangleCap { .. })));
        assert!(count_triangles(1).is_err());
        assert_eq!(count_triangles(2).unwrap(), 0);
    }
}
