//! Brute-force oracles shared by the integration suites.
#![allow(dead_code)]

use itertools::Itertools;
use quadturan::exact::enumerate_bad_sets;
use quadturan::gk::{is_edge, FnVec};
use quadturan::zk::{Modulus, ProfileSet, QuadSystem};

/// Minimum edge count of an `n`-vertex graph with no independent `s`-set,
/// over all `2^C(n,2)` graphs.
pub fn turan_by_all_graphs(n: usize, s: usize) -> u64 {
    let edges: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let subsets: Vec<Vec<usize>> = (0..n).combinations(s).collect();
    let mut best = u64::MAX;
    for mask in 0u32..1 << edges.len() {
        let count = mask.count_ones() as u64;
        if count >= best {
            continue;
        }
        let adj = |u: usize, v: usize| {
            let idx = edges
                .iter()
                .position(|&e| e == (u.min(v), u.max(v)))
                .unwrap();
            mask >> idx & 1 == 1
        };
        let ok = subsets
            .iter()
            .all(|set| set.iter().tuple_combinations().any(|(&u, &v)| adj(u, v)));
        if ok {
            best = count;
        }
    }
    best
}

/// Same minimum, searched by increasing edge count.
pub fn turan_by_increasing_edges(n: usize, s: usize) -> u64 {
    let edges: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let subsets: Vec<Vec<usize>> = (0..n).combinations(s).collect();
    for e in 0..=edges.len() {
        for chosen in edges.iter().combinations(e) {
            let ok = subsets.iter().all(|set| {
                chosen
                    .iter()
                    .any(|&&(u, v)| set.contains(&u) && set.contains(&v))
            });
            if ok {
                return e as u64;
            }
        }
    }
    unreachable!("the complete graph always works")
}

pub fn all_functions(k: u32) -> Vec<FnVec> {
    let modulus = Modulus::new(k as u64).unwrap();
    (0..k as usize)
        .map(|_| 0..k)
        .multi_cartesian_product()
        .map(|v| FnVec::new(modulus, v).unwrap())
        .collect()
}

#[allow(clippy::needless_range_loop)]
pub fn naive_triangles(k: u32) -> u128 {
    let verts = all_functions(k);
    let n = verts.len();
    let adj: Vec<Vec<bool>> = verts
        .iter()
        .map(|f| verts.iter().map(|g| is_edge(f, g).unwrap()).collect())
        .collect();
    let mut count = 0;
    for a in 0..n {
        for b in a + 1..n {
            if !adj[a][b] {
                continue;
            }
            for c in b + 1..n {
                if adj[a][c] && adj[b][c] {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Whether some `size`-subset of the candidates covers every bad set,
/// by plain enumeration. `masks[c]` is the set of bad sets candidate `c` hits.
pub fn some_cover_of_size(masks: &[u64], full: u64, size: usize) -> bool {
    fn go(masks: &[u64], full: u64, start: usize, left: usize, acc: u64) -> bool {
        if left == 0 {
            return acc == full;
        }
        (start..=masks.len() - left).any(|c| go(masks, full, c + 1, left - 1, acc | masks[c]))
    }
    size <= masks.len() && go(masks, full, 0, size, 0)
}

/// Minimum cover size by exhaustive subset enumeration. Covering is monotone
/// under adding quads, so the minimum is `q` exactly when a `q`-subset covers
/// and no `(q-1)`-subset does. The scan starts at `hint`, moves down while a
/// smaller subset covers, then up until one does.
pub fn oracle_min_cover(n: usize, m: usize, profiles: &ProfileSet, hint: usize) -> usize {
    let bad = enumerate_bad_sets(n, m, profiles).unwrap();
    assert!(bad.len() <= 64);
    let cands = QuadSystem::complete(n, m);
    let masks: Vec<u64> = cands
        .iter()
        .map(|q| {
            bad.iter()
                .enumerate()
                .filter(|(_, s)| s.contains(q))
                .fold(0, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    let full = if bad.len() == 64 {
        u64::MAX
    } else {
        (1 << bad.len()) - 1
    };
    let mut q = hint;
    while q > 0 && some_cover_of_size(&masks, full, q - 1) {
        q -= 1;
    }
    while !some_cover_of_size(&masks, full, q) {
        q += 1;
    }
    q
}
