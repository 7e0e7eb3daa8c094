//! Coverage checking: does every `(a, b)`-set contain a quadruple?
//!
//! A-subsets are enumerated in lexicographic order, and for each of them the
//! B-subsets in lexicographic order; the reported witness is the first
//! uncovered pair in that order. Work is split across rayon workers by
//! A-subset and merged with `find_first`, so the witness does not depend on
//! the worker count.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zk::{Profile, ProfileSet, QuadSystem};

/// Side sizes above this are rejected; B-neighbourhoods are stored as `u64` masks.
pub const MAX_SIDE: usize = 64;

/// An uncovered pair of subsets, `a` of side A and `b` of side B.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Witness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

/// For every A-pair `(i, j)`, the graph on B formed by the quads through it.
pub(crate) struct PairGraphs {
    n: usize,
    m: usize,
    /// `adj[(i * n + j) * m + p]` has bit `q` set iff `(i, j, p, q)` is present
    /// (stored symmetrically in `p`, `q`).
    adj: Vec<u64>,
}

impl PairGraphs {
    pub(crate) fn new(system: &QuadSystem) -> Result<Self> {
        let (n, m) = (system.n(), system.m());
        if n > MAX_SIDE || m > MAX_SIDE {
            return Err(Error::TooLarge(format!(
                "coverage check supports sides up to {MAX_SIDE}, got n={n}, m={m}"
            )));
        }
        let mut adj = vec![0u64; n * n * m];
        for x in system {
            let base = (x.i * n + x.j) * m;
            adj[base + x.p] |= 1 << x.q;
            adj[base + x.q] |= 1 << x.p;
        }
        Ok(PairGraphs { n, m, adj })
    }

    /// Union over all pairs inside `a_subset` of their B-graphs.
    fn union_for(&self, a_subset: &[usize], out: &mut [u64]) {
        out.fill(0);
        for (idx, &i) in a_subset.iter().enumerate() {
            for &j in &a_subset[idx + 1..] {
                let base = (i * self.n + j) * self.m;
                for (o, &w) in out.iter_mut().zip(&self.adj[base..base + self.m]) {
                    *o |= w;
                }
            }
        }
    }
}

#[inline]
fn spans_edge(union: &[u64], b_subset: &[usize], mask: u64) -> bool {
    b_subset.iter().any(|&p| union[p] & mask != 0)
}

/// First uncovered `(a, b)`-set, or `None` when the system covers `profile`.
pub fn covers(system: &QuadSystem, profile: Profile) -> Result<Option<Witness>> {
    let (n, m) = (system.n(), system.m());
    profile.check_feasible(n, m)?;
    let graphs = PairGraphs::new(system)?;
    Ok(first_uncovered(&graphs, profile))
}

pub(crate) fn first_uncovered(graphs: &PairGraphs, profile: Profile) -> Option<Witness> {
    let (n, m) = (graphs.n, graphs.m);
    let a_subsets: Vec<Vec<usize>> = (0..n).combinations(profile.a()).collect();
    a_subsets.par_iter().find_map_first(|a_subset| {
        let mut union = vec![0u64; m];
        graphs.union_for(a_subset, &mut union);
        (0..m)
            .combinations(profile.b())
            .find(|b_subset| {
                let mask = b_subset.iter().fold(0u64, |acc, &p| acc | 1 << p);
                !spans_edge(&union, b_subset, mask)
            })
            .map(|b| Witness {
                a: a_subset.clone(),
                b,
            })
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileOutcome {
    pub profile: Profile,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub pass: bool,
    pub outcomes: Vec<ProfileOutcome>,
}

impl ProfileReport {
    pub fn first_failure(&self) -> Option<&ProfileOutcome> {
        self.outcomes.iter().find(|o| o.witness.is_some())
    }
}

/// Runs [`covers`] for every profile of `profiles`.
pub fn verify_profiles(system: &QuadSystem, profiles: &ProfileSet) -> Result<ProfileReport> {
    profiles.check_feasible(system.n(), system.m())?;
    let graphs = PairGraphs::new(system)?;
    let outcomes: Vec<ProfileOutcome> = profiles
        .iter()
        .map(|&profile| ProfileOutcome {
            profile,
            witness: first_uncovered(&graphs, profile),
        })
        .collect();
    Ok(ProfileReport {
        pass: outcomes.iter().all(|o| o.witness.is_none()),
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zk::{product_construction, quads_from_matrix, random_matrix, Quad};

    fn p(a: usize, b: usize) -> Profile {
        Profile::new(a, b).unwrap()
    }

    #[test]
    fn complete_system_covers() {
        let s = QuadSystem::complete(5, 4);
        for a in 2..=5 {
            for b in 2..=4 {
                assert_eq!(covers(&s, p(a, b)).unwrap(), None);
            }
        }
    }

    #[test]
    fn empty_system_reports_first_set() {
        let s = QuadSystem::empty(5, 6);
        assert_eq!(
            covers(&s, p(3, 4)).unwrap(),
            Some(Witness {
                a: vec![0, 1, 2],
                b: vec![0, 1, 2, 3]
            })
        );
    }

    #[test]
    fn witness_is_lexicographically_first() {
        // Only (0,1,0,1) present: the (2,2)-set ({0,1},{0,1}) is covered and
        // the next in order, ({0,1},{0,2}), is the witness.
        let s = QuadSystem::new(3, 3, [Quad::new(0, 1, 0, 1)]).unwrap();
        assert_eq!(
            covers(&s, p(2, 2)).unwrap(),
            Some(Witness {
                a: vec![0, 1],
                b: vec![0, 2]
            })
        );
    }

    #[test]
    fn fair_system_covers_k_plus_one_columns() {
        for seed in 0..5 {
            let x = random_matrix(8, 8, 3, seed).unwrap();
            let s = quads_from_matrix(&x).unwrap();
            assert_eq!(covers(&s, p(2, 4)).unwrap(), None);
            assert_eq!(covers(&s, p(4, 2)).unwrap(), None);
        }
    }

    #[test]
    fn product_covers_its_profile() {
        let s = product_construction(4, 4, p(3, 3)).unwrap();
        assert_eq!(covers(&s, p(3, 3)).unwrap(), None);
        assert!(covers(&s, p(2, 2)).unwrap().is_some());
    }

    #[test]
    fn verify_profiles_reports_each() {
        let s = QuadSystem::empty(4, 4);
        let ps: ProfileSet = "3,3".parse().unwrap();
        let r = verify_profiles(&s, &ps).unwrap();
        assert!(!r.pass);
        assert_eq!(
            r.first_failure().unwrap().witness,
            Some(Witness {
                a: vec![0, 1, 2],
                b: vec![0, 1, 2]
            })
        );

        let all: ProfileSet = "k2:2".parse().unwrap();
        assert!(
            verify_profiles(&QuadSystem::complete(4, 4), &all)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn infeasible_and_oversized_inputs_error() {
        let s = QuadSystem::empty(3, 3);
        assert!(matches!(covers(&s, p(4, 2)), Err(Error::Infeasible { .. })));
        let big = QuadSystem::empty(65, 3);
        assert!(matches!(covers(&big, p(2, 2)), Err(Error::TooLarge(_))));
    }
}
