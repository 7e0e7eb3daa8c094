//! Exact minimum covering systems on tiny instances.
//!
//! The universe is the list of "bad sets": every `(a-subset of A, b-subset
//! of B)` for every profile. A quadruple covers a bad set when its A-pair lies
//! in the A-subset and its B-pair in the B-subset. The minimum number of
//! quadruples covering all bad sets is found by set-cover branch and bound:
//! branch on the uncovered bad set with the fewest remaining coverers, and
//! bound with the larger of a greedy packing of bad sets that share no
//! available coverer and the per-pair Turán demand.

mod bounds;

use std::time::{Duration, Instant};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::zk::{binomial, pairs, turan_t, ProfileSet, Quad, QuadSystem};

pub use bounds::{bounds_report, BoundsConfig, BoundsReport, ExactStatus, RandomSample};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BadSet {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl BadSet {
    pub fn contains(&self, quad: &Quad) -> bool {
        self.a.contains(&quad.i)
            && self.a.contains(&quad.j)
            && self.b.contains(&quad.p)
            && self.b.contains(&quad.q)
    }
}

/// All `(a, b)`-sets over all profiles, sorted and deduplicated.
pub fn enumerate_bad_sets(n: usize, m: usize, profiles: &ProfileSet) -> Result<Vec<BadSet>> {
    profiles.check_feasible(n, m)?;
    let mut out = Vec::new();
    for profile in profiles.iter() {
        for a in (0..n).combinations(profile.a()) {
            for b in (0..m).combinations(profile.b()) {
                out.push(BadSet { a: a.clone(), b });
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Size thresholds beyond which exact search is not attempted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactLimits {
    pub max_candidates: usize,
    pub max_bad_sets: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits {
            max_candidates: 400,
            max_bad_sets: 5000,
        }
    }
}

impl ExactLimits {
    /// Whether the instance fits, sized without enumerating it.
    pub fn admits(&self, n: usize, m: usize, profiles: &ProfileSet) -> bool {
        let candidates = pairs(n).saturating_mul(pairs(m));
        let bad_sets = profiles.iter().try_fold(0u64, |acc, p| {
            let count =
                binomial(n as u64, p.a() as u64)?.checked_mul(binomial(m as u64, p.b() as u64)?)?;
            acc.checked_add(count)
        });
        candidates <= self.max_candidates as u64
            && bad_sets.is_some_and(|b| b <= self.max_bad_sets as u64)
    }
}

#[derive(Debug, Clone)]
pub struct CoverInstance {
    n: usize,
    m: usize,
    profiles: ProfileSet,
    bad_sets: Vec<BadSet>,
    candidates: Vec<Quad>,
    /// `incidence[s]`: indices of the candidates contained in bad set `s`.
    incidence: Vec<Vec<usize>>,
}

impl CoverInstance {
    pub fn new(n: usize, m: usize, profiles: &ProfileSet) -> Result<Self> {
        let bad_sets = enumerate_bad_sets(n, m, profiles)?;
        let candidates = QuadSystem::complete(n, m).quads().to_vec();
        let incidence = bad_sets
            .iter()
            .map(|s| {
                let mut ids: Vec<usize> =
                    s.a.iter()
                        .tuple_combinations()
                        .cartesian_product(s.b.iter().tuple_combinations())
                        .map(|((&i, &j), (&p, &q))| {
                            candidates
                                .binary_search(&Quad { i, j, p, q })
                                .expect("every quad is a candidate")
                        })
                        .collect();
                ids.sort_unstable();
                ids
            })
            .collect();
        Ok(CoverInstance {
            n,
            m,
            profiles: profiles.clone(),
            bad_sets,
            candidates,
            incidence,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn profiles(&self) -> &ProfileSet {
        &self.profiles
    }

    pub fn bad_sets(&self) -> &[BadSet] {
        &self.bad_sets
    }

    pub fn candidates(&self) -> &[Quad] {
        &self.candidates
    }

    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    pub fn within(&self, limits: &ExactLimits) -> bool {
        self.candidates.len() <= limits.max_candidates && self.bad_sets.len() <= limits.max_bad_sets
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverBudget {
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSolution {
    pub size: usize,
    pub system: QuadSystem,
    /// True when `size` is proven minimal.
    pub exact: bool,
    pub nodes: u64,
}

/// `Q(n, m, P) >= max C(n,2)·T(m,b,2)` over profiles `(2, b)`, and
/// symmetrically `C(m,2)·T(n,a,2)` over `(a, 2)`: each A-pair must lie in
/// quads whose B-pairs leave no independent `b`-set. Zero when no profile
/// has a side equal to 2.
pub fn lower_bound_pairs(n: usize, m: usize, profiles: &ProfileSet) -> Result<u64> {
    let mut best = 0;
    for p in profiles.iter() {
        if p.a() == 2 && m >= 1 {
            best = best.max(pairs(n) * turan_t(m, p.b())?);
        }
        if p.b() == 2 && n >= 1 {
            best = best.max(pairs(m) * turan_t(n, p.a())?);
        }
    }
    Ok(best)
}

type Bits = Vec<u64>;

fn bits(len: usize) -> Bits {
    vec![0; len.div_ceil(64).max(1)]
}

#[inline]
fn set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

#[inline]
fn clear(b: &mut Bits, i: usize) {
    b[i / 64] &= !(1 << (i % 64));
}

fn ones(b: &Bits) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(w, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            (word != 0).then(|| {
                let t = word.trailing_zeros() as usize;
                word &= word - 1;
                w * 64 + t
            })
        })
    })
}

fn count_and(a: &Bits, b: &Bits) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x & y).count_ones() as usize)
        .sum()
}

fn is_zero(a: &Bits) -> bool {
    a.iter().all(|&w| w == 0)
}

pub fn exact_min_cover(inst: &CoverInstance, budget: &SolverBudget) -> CoverSolution {
    try_min_cover(inst, budget, None).expect("instance sides were validated on construction")
}

/// As [`exact_min_cover`], starting from a known cover. An `incumbent` that
/// does not cover every bad set, or has the wrong sides, is ignored.
pub fn exact_min_cover_with(
    inst: &CoverInstance,
    budget: &SolverBudget,
    incumbent: &QuadSystem,
) -> CoverSolution {
    try_min_cover(inst, budget, Some(incumbent))
        .expect("instance sides were validated on construction")
}

fn try_min_cover(
    inst: &CoverInstance,
    budget: &SolverBudget,
    incumbent: Option<&QuadSystem>,
) -> Result<CoverSolution> {
    let nb = inst.bad_sets.len();
    let nc = inst.candidates.len();
    let mut covers_of = vec![bits(nb); nc];
    let mut coverers = vec![bits(nc); nb];
    for (s, ids) in inst.incidence.iter().enumerate() {
        for &c in ids {
            set(&mut covers_of[c], s);
            set(&mut coverers[s], c);
        }
    }
    let mut uncovered = bits(nb);
    (0..nb).for_each(|s| set(&mut uncovered, s));
    let mut allowed = bits(nc);
    (0..nc).for_each(|c| set(&mut allowed, c));

    let mut best = greedy_cover(&covers_of, &uncovered);
    if let Some(seed) = incumbent.and_then(|q| as_cover(inst, &covers_of, q)) {
        if seed.len() < best.len() {
            best = seed;
        }
    }
    let mut solver = Solver {
        covers_of: &covers_of,
        coverers: &coverers,
        demand: PairDemand::new(inst)?,
        best,
        nodes: 0,
        max_nodes: budget.max_nodes.unwrap_or(u64::MAX),
        deadline: budget.time_limit.map(|t| Instant::now() + t),
        aborted: false,
    };
    let mut chosen = Vec::new();
    solver.search(&uncovered, &allowed, &mut chosen);

    let system = QuadSystem::from_sorted(
        inst.n,
        inst.m,
        solver
            .best
            .iter()
            .sorted()
            .map(|&c| inst.candidates[c])
            .collect(),
    );
    Ok(CoverSolution {
        size: system.len(),
        system,
        exact: !solver.aborted,
        nodes: solver.nodes,
    })
}

/// Position of the pair `i < j` in the lexicographic list of pairs of `0..n`.
fn pair_index(i: usize, j: usize, n: usize) -> usize {
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Per-pair demand: for a profile `(2, b)`, the quads through any A-pair must
/// leave no independent `b`-set in B, so every cover has at least `T(m, b)`
/// quads on each A-pair. Symmetrically for `(a, 2)` and B-pairs.
struct PairDemand {
    a_pair: Vec<usize>,
    b_pair: Vec<usize>,
    need_a: usize,
    need_b: usize,
    count_a: Vec<usize>,
    count_b: Vec<usize>,
    deficit_a: usize,
    deficit_b: usize,
}

impl PairDemand {
    fn new(inst: &CoverInstance) -> Result<Self> {
        let (n, m) = (inst.n, inst.m);
        let mut need_a = 0;
        let mut need_b = 0;
        for p in inst.profiles.iter() {
            if p.a() == 2 {
                need_a = need_a.max(turan_t(m, p.b())? as usize);
            }
            if p.b() == 2 {
                need_b = need_b.max(turan_t(n, p.a())? as usize);
            }
        }
        let (pa, pb) = (pairs(n) as usize, pairs(m) as usize);
        Ok(PairDemand {
            a_pair: inst
                .candidates
                .iter()
                .map(|q| pair_index(q.i, q.j, n))
                .collect(),
            b_pair: inst
                .candidates
                .iter()
                .map(|q| pair_index(q.p, q.q, m))
                .collect(),
            need_a,
            need_b,
            count_a: vec![0; pa],
            count_b: vec![0; pb],
            deficit_a: need_a * pa,
            deficit_b: need_b * pb,
        })
    }

    fn bound(&self) -> usize {
        self.deficit_a.max(self.deficit_b)
    }

    fn push(&mut self, c: usize) {
        let a = &mut self.count_a[self.a_pair[c]];
        if *a < self.need_a {
            self.deficit_a -= 1;
        }
        *a += 1;
        let b = &mut self.count_b[self.b_pair[c]];
        if *b < self.need_b {
            self.deficit_b -= 1;
        }
        *b += 1;
    }

    fn pop(&mut self, c: usize) {
        let a = &mut self.count_a[self.a_pair[c]];
        *a -= 1;
        if *a < self.need_a {
            self.deficit_a += 1;
        }
        let b = &mut self.count_b[self.b_pair[c]];
        *b -= 1;
        if *b < self.need_b {
            self.deficit_b += 1;
        }
    }
}

/// Candidate indices of `q`, if it is a cover of this instance.
fn as_cover(inst: &CoverInstance, covers_of: &[Bits], q: &QuadSystem) -> Option<Vec<usize>> {
    if (q.n(), q.m()) != (inst.n, inst.m) {
        return None;
    }
    let ids: Vec<usize> = q
        .iter()
        .map(|quad| inst.candidates.binary_search(quad).ok())
        .collect::<Option<_>>()?;
    let mut hit = bits(inst.bad_sets.len());
    for &c in &ids {
        for (h, cov) in hit.iter_mut().zip(&covers_of[c]) {
            *h |= cov;
        }
    }
    (ones(&hit).count() == inst.bad_sets.len()).then_some(ids)
}

/// Repeatedly takes the candidate covering the most uncovered bad sets
/// (lowest index on ties).
fn greedy_cover(covers_of: &[Bits], uncovered: &Bits) -> Vec<usize> {
    let mut left = uncovered.clone();
    let mut picked = Vec::new();
    while !is_zero(&left) {
        let (c, gain) = covers_of
            .iter()
            .enumerate()
            .map(|(c, cov)| (c, count_and(cov, &left)))
            .fold((0, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
        assert!(gain > 0, "every bad set has a coverer");
        for (w, cov) in left.iter_mut().zip(&covers_of[c]) {
            *w &= !cov;
        }
        picked.push(c);
    }
    picked
}

struct Solver<'a> {
    covers_of: &'a [Bits],
    coverers: &'a [Bits],
    demand: PairDemand,
    best: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    aborted: bool,
}

impl Solver<'_> {
    fn search(&mut self, uncovered: &Bits, allowed: &Bits, chosen: &mut Vec<usize>) {
        if self.nodes >= self.max_nodes
            || (self.nodes.is_multiple_of(256)
                && self.deadline.is_some_and(|d| Instant::now() >= d))
        {
            self.aborted = true;
            return;
        }
        self.nodes += 1;
        if is_zero(uncovered) {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        let Some((branch_set, bound)) = self.packing(uncovered, allowed) else {
            return;
        };
        if chosen.len() + bound.max(self.demand.bound()) >= self.best.len() {
            return;
        }

        let mut options: Vec<(usize, usize)> = ones(&self.coverers[branch_set])
            .filter(|&c| allowed[c / 64] >> (c % 64) & 1 == 1)
            .map(|c| (c, count_and(&self.covers_of[c], uncovered)))
            .collect();
        options.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

        let mut allowed = allowed.clone();
        for (c, _) in options {
            let next: Bits = uncovered
                .iter()
                .zip(&self.covers_of[c])
                .map(|(u, cov)| u & !cov)
                .collect();
            chosen.push(c);
            self.demand.push(c);
            self.search(&next, &allowed, chosen);
            self.demand.pop(c);
            chosen.pop();
            if self.aborted {
                return;
            }
            // later siblings exclude c
            clear(&mut allowed, c);
        }
    }

    /// Returns the branching bad set (fewest available coverers, lowest index
    /// on ties) and a packing lower bound, or `None` if some uncovered set has
    /// no available coverer.
    fn packing(&self, uncovered: &Bits, allowed: &Bits) -> Option<(usize, usize)> {
        let mut sets: Vec<(usize, usize)> = ones(uncovered)
            .map(|s| (count_and(&self.coverers[s], allowed), s))
            .collect();
        sets.sort_unstable();
        if sets[0].0 == 0 {
            return None;
        }
        let mut used = vec![0u64; allowed.len()];
        let mut bound = 0;
        for &(_, s) in &sets {
            let avail = self.coverers[s].iter().zip(allowed).map(|(c, a)| c & a);
            if avail.clone().zip(&used).all(|(x, u)| x & u == 0) {
                bound += 1;
                for (u, x) in used.iter_mut().zip(avail) {
                    *u |= x;
                }
            }
        }
        Some((sets[0].1, bound))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zk::verify_profiles;

    fn ps(s: &str) -> ProfileSet {
        s.parse().unwrap()
    }

    fn solve(n: usize, m: usize, p: &str) -> CoverSolution {
        let inst = CoverInstance::new(n, m, &ps(p)).unwrap();
        exact_min_cover(&inst, &SolverBudget::default())
    }

    #[test]
    fn bad_set_counts() {
        assert_eq!(
            enumerate_bad_sets(2, 2, &ps("2,2")).unwrap(),
            vec![BadSet {
                a: vec![0, 1],
                b: vec![0, 1]
            }]
        );
        assert_eq!(enumerate_bad_sets(3, 3, &ps("2,2")).unwrap().len(), 9);
        assert_eq!(enumerate_bad_sets(2, 5, &ps("2,3")).unwrap().len(), 10);
        assert!(enumerate_bad_sets(2, 5, &ps("3,2")).is_err());
    }

    #[test]
    fn incidence_matches_containment() {
        let inst = CoverInstance::new(4, 4, &ps("3,3;2,4")).unwrap();
        for (s, ids) in inst.incidence().iter().enumerate() {
            let want: Vec<usize> = (0..inst.candidates().len())
                .filter(|&c| inst.bad_sets()[s].contains(&inst.candidates()[c]))
                .collect();
            assert_eq!(ids, &want);
            let (a, b) = (inst.bad_sets()[s].a.len(), inst.bad_sets()[s].b.len());
            assert_eq!(ids.len(), a * (a - 1) * b * (b - 1) / 4);
        }
    }

    #[test]
    fn trivial_minima() {
        assert_eq!(solve(2, 2, "2,2").size, 1);
        assert_eq!(solve(3, 3, "2,2").size, 9);
        assert_eq!(solve(2, 3, "2,3").size, 1);
    }

    #[test]
    fn two_row_instances_match_turan() {
        for m in 3..=6 {
            let sol = solve(2, m, "2,3");
            assert!(sol.exact);
            assert_eq!(sol.size as u64, turan_t(m, 3).unwrap(), "m={m}");
            assert!(verify_profiles(&sol.system, &ps("2,3")).unwrap().pass);
        }
    }

    #[test]
    fn budget_exhaustion_keeps_a_valid_cover() {
        let inst = CoverInstance::new(5, 6, &ps("2,3;3,2")).unwrap();
        let sol = exact_min_cover(
            &inst,
            &SolverBudget {
                max_nodes: Some(1),
                time_limit: None,
            },
        );
        assert!(!sol.exact);
        assert!(verify_profiles(&sol.system, inst.profiles()).unwrap().pass);
    }

    #[test]
    fn incumbent_at_the_lower_bound_closes_the_search() {
        let p = ProfileSet::family_k2(3).unwrap();
        let inst = CoverInstance::new(5, 6, &p).unwrap();
        let seed = (0..20)
            .map(|s| {
                crate::zk::local_search_minimize(5, 6, 3, &p, s, 100_000)
                    .unwrap()
                    .quads
            })
            .min_by_key(|q| q.len())
            .unwrap();
        assert_eq!(seed.len() as u64, lower_bound_pairs(5, 6, &p).unwrap());
        let sol = exact_min_cover_with(&inst, &SolverBudget::default(), &seed);
        assert!(sol.exact);
        assert_eq!(sol.size, seed.len());
        assert_eq!(sol.nodes, 1);

        // a non-cover is ignored
        let bogus = QuadSystem::empty(5, 6);
        let budget = SolverBudget {
            max_nodes: Some(10),
            time_limit: None,
        };
        let plain = exact_min_cover_with(&inst, &budget, &bogus);
        assert!(verify_profiles(&plain.system, &p).unwrap().pass);
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound_pairs(4, 4, &ps("2,2")).unwrap(), 36);
        assert_eq!(lower_bound_pairs(2, 5, &ps("2,3")).unwrap(), 4);
        assert_eq!(lower_bound_pairs(5, 5, &ps("3,3")).unwrap(), 0);
        let p42 = ProfileSet::family_k2(4).unwrap();
        assert_eq!(lower_bound_pairs(8, 8, &p42).unwrap(), 28 * 4);
        // asymmetric sides: max of the two products
        let got = lower_bound_pairs(12, 10, &p42).unwrap();
        let want = (66 * turan_t(10, 5).unwrap()).max(45 * turan_t(12, 5).unwrap());
        assert_eq!(got, want);
    }

    #[test]
    fn limits_agree_with_built_instances() {
        let limits = ExactLimits {
            max_candidates: 36,
            max_bad_sets: 48,
        };
        for (n, m, p) in [
            (4, 4, "2,3;3,2"),
            (4, 4, "2,2"),
            (3, 5, "2,3;3,2"),
            (4, 5, "2,2"),
        ] {
            let p = ps(p);
            let inst = CoverInstance::new(n, m, &p).unwrap();
            assert_eq!(limits.admits(n, m, &p), inst.within(&limits), "{n} {m} {p}");
        }
        assert!(!ExactLimits::default().admits(60, 60, &ps("k3:4")));
    }

    #[test]
    fn pair_index_is_lex_position() {
        for n in 2..8 {
            let all: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
            for (idx, &(i, j)) in all.iter().enumerate() {
                assert_eq!(pair_index(i, j, n), idx);
            }
        }
    }

    #[test]
    fn bits_helpers() {
        let mut b = bits(130);
        for i in [0, 63, 64, 129] {
            set(&mut b, i);
        }
        assert_eq!(ones(&b).collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        clear(&mut b, 64);
        assert_eq!(ones(&b).count(), 3);
    }
}
