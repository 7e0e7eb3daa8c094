//! Maximum clique search in `G_k`.
//!
//! Every clique of size at least two can be moved by an automorphism to one
//! containing the zero function and the identity: translate some member to
//! zero, then precompose with the inverse of another member (a bijection,
//! being adjacent to zero). The remaining members are then permutations
//! `σ` with `σ - id` bijective (orthomorphisms of `Z_k`), so
//! `ω(G_k) = 2 + ω(O_k)` where `O_k` is the graph `G_k` induces on the
//! orthomorphisms. `O_k` is enumerated by backtracking and searched with a
//! colouring-bounded branch and bound.
//!
//! Optionally the search stops as soon as it reaches `k`: in a clique the
//! values `f(1) - f(0)` are pairwise distinct (equal values give a fair
//! submatrix on columns 0, 1), so no clique exceeds `k`.
//!
//! Top-level branches run in fixed-size chunks. Within a chunk every branch
//! sees the incumbent from the start of the chunk and the same node
//! allowance, so results do not depend on the number of workers.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gk::checkpoint::{CheckpointState, CHECKPOINT_VERSION};
use crate::gk::{canonical_clique, difference_is_bijection, is_edge, FnVec};
use crate::zk::Modulus;

#[derive(Debug, Clone)]
pub struct CheckpointConfig {
    pub path: PathBuf,
    /// Minimum time between checkpoint writes; a final write always happens.
    pub interval: Duration,
}

#[derive(Debug, Clone)]
pub struct CliqueConfig {
    /// Branch-and-bound node limit. Orthomorphism enumeration is bounded by
    /// `max_orthomorphisms` and the time limit instead.
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
    pub max_orthomorphisms: usize,
    /// Stop as soon as a clique of size `k` is known.
    pub column_bound: bool,
    /// Top-level branches per synchronization round.
    pub chunk_size: usize,
    pub checkpoint: Option<CheckpointConfig>,
}

impl Default for CliqueConfig {
    fn default() -> Self {
        CliqueConfig {
            max_nodes: None,
            time_limit: None,
            max_orthomorphisms: 20_000,
            column_bound: true,
            chunk_size: 64,
            checkpoint: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    NodeBudget,
    TimeBudget,
    OrthomorphismCap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueResult {
    pub k: u32,
    pub size: usize,
    /// Sorted, pairwise adjacent.
    pub witness: Vec<FnVec>,
    /// True when `size` is proven to be the clique number.
    pub exact: bool,
    pub stop_reason: Option<StopReason>,
    pub orthomorphisms: Option<usize>,
    pub nodes: u64,
    pub resumed_from: Option<usize>,
}

pub fn max_clique(k: u32, cfg: &CliqueConfig) -> Result<CliqueResult> {
    let modulus = Modulus::new(k as u64)?;
    let deadline = cfg.time_limit.map(|t| Instant::now() + t);
    let seed = canonical_clique(modulus);
    let upper = if cfg.column_bound {
        k as usize
    } else {
        usize::MAX
    };

    let mut result = CliqueResult {
        k,
        size: seed.len(),
        witness: seed.clone(),
        exact: false,
        stop_reason: None,
        orthomorphisms: None,
        nodes: 0,
        resumed_from: None,
    };
    if seed.len() >= upper {
        result.exact = true;
        return Ok(result);
    }

    let verts = match enumerate_orthomorphisms(k, cfg.max_orthomorphisms, deadline) {
        Ok(v) => v,
        Err(reason) => {
            result.stop_reason = Some(reason);
            return Ok(result);
        }
    };
    result.orthomorphisms = Some(verts.len());
    let graph = OrthGraph::new(k, verts);
    let cap = upper.saturating_sub(2);
    let plan = graph.branch_plan();

    // Canonical members f_2, ..., f_{p-1} are orthomorphisms.
    let mut best: Vec<usize> = seed[2..]
        .iter()
        .map(|f| {
            graph
                .index_of(f.values())
                .expect("linear maps below p(k) are orthomorphisms")
        })
        .collect();
    let mut next_branch = 0;
    let mut nodes = 0u64;

    let checkpoint = cfg.checkpoint.as_ref();
    if let Some(ck) = checkpoint {
        if let Some(state) = CheckpointState::load(&ck.path)? {
            let restored = graph.restore(&state, modulus, &ck.path)?;
            if restored.len() > best.len() {
                best = restored;
            }
            next_branch = state.next_branch;
            nodes = state.nodes;
            result.resumed_from = Some(next_branch);
        }
    }

    let chunk = cfg.chunk_size.max(1);
    let mut last_save = Instant::now();
    let mut stop = None;
    while next_branch < plan.order.len() && best.len() < cap {
        if cfg.max_nodes.is_some_and(|max| nodes >= max) {
            stop = Some(StopReason::NodeBudget);
        } else if deadline.is_some_and(|d| Instant::now() >= d) {
            stop = Some(StopReason::TimeBudget);
        } else {
            let end = (next_branch + chunk).min(plan.order.len());
            let incumbent = best.len();
            let limits = Limits {
                node_cap: cfg.max_nodes.map_or(u64::MAX, |max| max - nodes),
                deadline,
                cap,
            };
            let outcomes: Vec<BranchOutcome> = (next_branch..end)
                .into_par_iter()
                .map(|b| graph.search_branch(&plan, b, incumbent, &limits))
                .collect();
            let mut advanced = next_branch;
            for out in outcomes {
                nodes += out.nodes;
                if let Some(c) = out.found.filter(|c| c.len() > best.len()) {
                    best = c;
                }
                match out.aborted {
                    None if stop.is_none() => advanced += 1,
                    None => {}
                    Some(reason) => {
                        stop.get_or_insert(reason);
                    }
                }
            }
            next_branch = advanced;
        }

        let finished = stop.is_some() || next_branch >= plan.order.len() || best.len() >= cap;
        if let Some(ck) = checkpoint {
            if finished || last_save.elapsed() >= ck.interval {
                graph
                    .snapshot(modulus, next_branch, &best, nodes)
                    .save(&ck.path)?;
                last_save = Instant::now();
            }
        }
        if stop.is_some() {
            break;
        }
    }
    if let Some(ck) = checkpoint {
        // covers resumes that were already complete on entry
        graph
            .snapshot(modulus, next_branch, &best, nodes)
            .save(&ck.path)?;
    }

    result.exact = stop.is_none();
    result.stop_reason = stop;
    result.nodes = nodes;
    if result.exact {
        best = graph
            .lex_first_clique(best.len())
            .expect("a clique of the proven size exists");
    }
    result.size = best.len() + 2;
    result.witness = graph.to_functions(modulus, &best);
    debug_assert!(pairwise_adjacent(&result.witness));
    Ok(result)
}

pub(crate) fn pairwise_adjacent(fs: &[FnVec]) -> bool {
    fs.iter()
        .enumerate()
        .all(|(a, f)| fs[a + 1..].iter().all(|g| is_edge(f, g).unwrap_or(false)))
}

/// All permutations `σ` of `Z_k` with `σ - id` a permutation, in
/// lexicographic order of their value tables.
fn enumerate_orthomorphisms(
    k: u32,
    cap: usize,
    deadline: Option<Instant>,
) -> std::result::Result<Vec<Vec<u32>>, StopReason> {
    if k > 64 {
        return Err(StopReason::OrthomorphismCap);
    }
    let mut e = Enumerator {
        k,
        cap,
        deadline,
        values: Vec::with_capacity(k as usize),
        out: Vec::new(),
        visits: 0,
    };
    e.extend(0, 0)?;
    Ok(e.out)
}

struct Enumerator {
    k: u32,
    cap: usize,
    deadline: Option<Instant>,
    values: Vec<u32>,
    out: Vec<Vec<u32>>,
    visits: u64,
}

impl Enumerator {
    fn extend(&mut self, used_values: u64, used_diffs: u64) -> std::result::Result<(), StopReason> {
        self.visits += 1;
        if self.visits.is_multiple_of(4096) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(StopReason::TimeBudget);
        }
        let x = self.values.len() as u32;
        if x == self.k {
            if self.out.len() >= self.cap {
                return Err(StopReason::OrthomorphismCap);
            }
            self.out.push(self.values.clone());
            return Ok(());
        }
        for v in 0..self.k {
            let d = (v + self.k - x) % self.k;
            if used_values >> v & 1 == 0 && used_diffs >> d & 1 == 0 {
                self.values.push(v);
                self.extend(used_values | 1 << v, used_diffs | 1 << d)?;
                self.values.pop();
            }
        }
        Ok(())
    }
}

struct OrthGraph {
    verts: Vec<Vec<u32>>,
    words: usize,
    adj: Vec<u64>,
    degree: Vec<usize>,
}

struct BranchPlan {
    order: Vec<usize>,
    position: Vec<usize>,
}

struct Limits {
    node_cap: u64,
    deadline: Option<Instant>,
    cap: usize,
}

struct BranchOutcome {
    found: Option<Vec<usize>>,
    nodes: u64,
    aborted: Option<StopReason>,
}

impl OrthGraph {
    fn new(k: u32, verts: Vec<Vec<u32>>) -> Self {
        let n = verts.len();
        let words = n.div_ceil(64).max(1);
        let mut adj = vec![0u64; n * words];
        adj.par_chunks_mut(words).enumerate().for_each(|(u, row)| {
            for (v, other) in verts.iter().enumerate() {
                if v != u && difference_is_bijection(&verts[u], other, k) {
                    row[v / 64] |= 1 << (v % 64);
                }
            }
        });
        let degree = adj
            .chunks(words)
            .map(|row| row.iter().map(|w| w.count_ones() as usize).sum())
            .collect();
        OrthGraph {
            verts,
            words,
            adj,
            degree,
        }
    }

    #[inline]
    fn has(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    fn index_of(&self, values: &[u32]) -> Option<usize> {
        self.verts
            .binary_search_by(|v| v.as_slice().cmp(values))
            .ok()
    }

    /// Vertices by descending degree, ties by lexicographic value table.
    fn branch_plan(&self) -> BranchPlan {
        let mut order: Vec<usize> = (0..self.verts.len()).collect();
        order.sort_by(|&a, &b| self.degree[b].cmp(&self.degree[a]).then(a.cmp(&b)));
        let mut position = vec![0; order.len()];
        for (pos, &v) in order.iter().enumerate() {
            position[v] = pos;
        }
        BranchPlan { order, position }
    }

    /// Cliques whose earliest vertex in branch order is `order[b]`.
    fn search_branch(
        &self,
        plan: &BranchPlan,
        b: usize,
        incumbent: usize,
        limits: &Limits,
    ) -> BranchOutcome {
        let root = plan.order[b];
        let cand: Vec<usize> = (0..self.verts.len())
            .filter(|&u| plan.position[u] > b && self.has(root, u))
            .collect();
        let mut search = Search {
            graph: self,
            limits,
            nodes: 0,
            best_len: incumbent,
            best: None,
            aborted: None,
        };
        let mut current = vec![root];
        search.expand(&mut current, cand);
        BranchOutcome {
            found: search.best,
            nodes: search.nodes,
            aborted: search.aborted,
        }
    }

    /// Candidates ordered by degree within `cand` (descending, ties by
    /// index), greedily coloured; returned sorted by colour with colours
    /// starting at 1.
    fn colour(&self, cand: &[usize]) -> Vec<(usize, usize)> {
        let mut ordered: Vec<(usize, usize)> = cand
            .iter()
            .map(|&u| (u, cand.iter().filter(|&&w| self.has(u, w)).count()))
            .collect();
        ordered.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (u, _) in ordered {
            match classes
                .iter_mut()
                .find(|class| class.iter().all(|&w| !self.has(u, w)))
            {
                Some(class) => class.push(u),
                None => classes.push(vec![u]),
            }
        }
        classes
            .into_iter()
            .enumerate()
            .flat_map(|(c, class)| class.into_iter().map(move |u| (u, c + 1)))
            .collect()
    }

    /// Lexicographically least clique (as a sorted index list) of the given size.
    fn lex_first_clique(&self, target: usize) -> Option<Vec<usize>> {
        let all: Vec<usize> = (0..self.verts.len()).collect();
        let mut current = Vec::with_capacity(target);
        self.lex_dfs(&all, target, &mut current).then_some(current)
    }

    fn lex_dfs(&self, cand: &[usize], target: usize, current: &mut Vec<usize>) -> bool {
        if current.len() == target {
            return true;
        }
        for (idx, &v) in cand.iter().enumerate() {
            if current.len() + (cand.len() - idx) < target {
                return false;
            }
            let next: Vec<usize> = cand[idx + 1..]
                .iter()
                .copied()
                .filter(|&u| self.has(v, u))
                .collect();
            current.push(v);
            if self.lex_dfs(&next, target, current) {
                return true;
            }
            current.pop();
        }
        false
    }

    fn to_functions(&self, k: Modulus, clique: &[usize]) -> Vec<FnVec> {
        let mut out = vec![FnVec::zero(k), FnVec::identity(k)];
        out.extend(clique.iter().map(|&v| FnVec {
            k,
            values: self.verts[v].clone(),
        }));
        out.sort();
        out
    }

    fn snapshot(
        &self,
        k: Modulus,
        next_branch: usize,
        best: &[usize],
        nodes: u64,
    ) -> CheckpointState {
        CheckpointState {
            version: CHECKPOINT_VERSION,
            k: k.get(),
            orthomorphisms: self.verts.len(),
            next_branch,
            best_size: best.len() + 2,
            witness: self.to_functions(k, best),
            nodes,
        }
    }

    /// Maps a checkpointed witness back to orthomorphism indices.
    fn restore(
        &self,
        state: &CheckpointState,
        k: Modulus,
        path: &std::path::Path,
    ) -> Result<Vec<usize>> {
        let bad = |reason: String| Error::Checkpoint {
            path: path.to_path_buf(),
            reason,
        };
        if state.k != k.get() || state.orthomorphisms != self.verts.len() {
            return Err(bad(format!(
                "checkpoint is for k={} with {} orthomorphisms, search has k={} with {}",
                state.k,
                state.orthomorphisms,
                k.get(),
                self.verts.len()
            )));
        }
        if state.next_branch > self.verts.len() {
            return Err(bad(format!(
                "next_branch {} out of range",
                state.next_branch
            )));
        }
        let (zero, id) = (FnVec::zero(k), FnVec::identity(k));
        if !state.witness.contains(&zero)
            || !state.witness.contains(&id)
            || state.witness.len() != state.best_size
            || !pairwise_adjacent(&state.witness)
        {
            return Err(bad("witness is not a normalized clique".into()));
        }
        state
            .witness
            .iter()
            .filter(|f| **f != zero && **f != id)
            .map(|f| {
                self.index_of(f.values())
                    .ok_or_else(|| bad(format!("{f} is not an orthomorphism")))
            })
            .collect()
    }
}

struct Search<'a> {
    graph: &'a OrthGraph,
    limits: &'a Limits,
    nodes: u64,
    best_len: usize,
    best: Option<Vec<usize>>,
    aborted: Option<StopReason>,
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.aborted.is_some() || self.best_len >= self.limits.cap
    }

    fn expand(&mut self, current: &mut Vec<usize>, cand: Vec<usize>) {
        if self.done() {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.limits.node_cap {
            self.aborted = Some(StopReason::NodeBudget);
            return;
        }
        if self.nodes.is_multiple_of(1024)
            && self.limits.deadline.is_some_and(|d| Instant::now() >= d)
        {
            self.aborted = Some(StopReason::TimeBudget);
            return;
        }
        if cand.is_empty() {
            if current.len() > self.best_len {
                self.best_len = current.len();
                self.best = Some(current.clone());
            }
            return;
        }
        let coloured = self.graph.colour(&cand);
        // After trying coloured[idx], only coloured[..idx] remain available.
        for idx in (0..coloured.len()).rev() {
            let (v, colour) = coloured[idx];
            if current.len() + colour <= self.best_len {
                return;
            }
            let next: Vec<usize> = coloured[..idx]
                .iter()
                .map(|&(u, _)| u)
                .filter(|&u| self.graph.has(v, u))
                .collect();
            current.push(v);
            self.expand(current, next);
            current.pop();
            if self.done() {
                return;
            }
        }
    }
}
