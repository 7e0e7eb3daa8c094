//! Consolidated lower and upper bounds for one `(n, m, k, family)` instance.
//!
//! CSV columns (schema version 1):
//!
//! ```text
//! schema_version,n,m,k,family,lower_bound,product_upper,random_mean,random_std,fair_best,best_constructed,exact,exact_status,theorem_reference,total_ms
//! ```
//!
//! `exact` is empty unless the instance was solved to optimality.

use std::time::Instant;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    exact_min_cover_with, lower_bound_pairs, CoverInstance, ExactLimits, SolverBudget,
};
use crate::io::SCHEMA_VERSION;
use crate::rng::DEFAULT_SEED;
use crate::zk::{count_fair_quads, local_search_minimize, pairs, random_matrix, QuadSystem};
use crate::zk::{union_product, Family, ProfileSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsConfig {
    pub seeds: Vec<u64>,
    /// Entry visits per local-search run.
    pub local_search_budget: u64,
    pub exact_budget: SolverBudget,
    pub exact_limits: ExactLimits,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig {
            seeds: (DEFAULT_SEED..DEFAULT_SEED + 20).collect(),
            local_search_budget: 100_000,
            exact_budget: SolverBudget {
                max_nodes: Some(1_000_000),
                time_limit: None,
            },
            exact_limits: ExactLimits::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSample {
    pub seed: u64,
    /// Fair-submatrix count of `random_matrix(n, m, k, seed)`.
    pub size: u64,
    /// Size after local search from the same seed.
    pub local_search_size: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactStatus {
    Solved,
    /// Budget ran out; the exact value is unknown.
    Truncated,
    /// Instance above [`ExactLimits`].
    Skipped,
}

impl ExactStatus {
    pub fn tag(&self) -> &'static str {
        match self {
            ExactStatus::Solved => "solved",
            ExactStatus::Truncated => "truncated",
            ExactStatus::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub lower_ms: f64,
    pub product_ms: f64,
    pub random_ms: f64,
    pub local_search_ms: f64,
    pub exact_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub schema_version: u32,
    pub n: usize,
    pub m: usize,
    pub k: u32,
    pub family: Family,
    pub profiles: ProfileSet,
    pub lower_bound: u64,
    /// Size of the union of per-profile product constructions.
    pub product_upper: u64,
    pub random_samples: Vec<RandomSample>,
    pub random_mean: f64,
    pub random_std: f64,
    /// `(1/k)·C(n,2)·C(m,2)`, the mean size of a random construction.
    pub random_reference: f64,
    /// Smallest fair-submatrix system seen (random or after descent).
    pub fair_best: u64,
    pub best_constructed: u64,
    pub exact: Option<u64>,
    pub exact_status: ExactStatus,
    pub exact_nodes: u64,
    /// `n²m²/(4k)` as a reduced fraction.
    pub theorem_reference_num: u64,
    pub theorem_reference_den: u64,
    pub timings: Timings,
}

impl BoundsReport {
    pub fn theorem_reference(&self) -> Ratio<u64> {
        Ratio::new(self.theorem_reference_num, self.theorem_reference_den)
    }

    /// `lower_bound <= exact <= best_constructed <= product_upper`.
    pub fn is_consistent(&self) -> bool {
        let mid = self.exact.unwrap_or(self.lower_bound);
        self.lower_bound <= mid
            && mid <= self.best_constructed
            && self.best_constructed <= self.product_upper
            && self.best_constructed <= self.fair_best
    }

    pub fn csv_header() -> &'static str {
        "schema_version,n,m,k,family,lower_bound,product_upper,random_mean,random_std,\
         fair_best,best_constructed,exact,exact_status,theorem_reference,total_ms"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.3},{:.3},{},{},{},{},{}/{},{:.1}",
            self.schema_version,
            self.n,
            self.m,
            self.k,
            self.family.tag(),
            self.lower_bound,
            self.product_upper,
            self.random_mean,
            self.random_std,
            self.fair_best,
            self.best_constructed,
            self.exact.map(|e| e.to_string()).unwrap_or_default(),
            self.exact_status.tag(),
            self.theorem_reference_num,
            self.theorem_reference_den,
            self.timings.total_ms,
        )
    }
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

pub fn bounds_report(
    n: usize,
    m: usize,
    k: u32,
    family: Family,
    cfg: &BoundsConfig,
) -> Result<BoundsReport> {
    let start = Instant::now();
    if family == Family::K3 && k % 2 == 1 {
        return Err(Error::CoverageNotGuaranteed {
            k,
            a: 3,
            b: k as usize,
        });
    }
    if cfg.seeds.is_empty() {
        return Err(Error::InvalidArgument(
            "bounds report needs at least one seed".into(),
        ));
    }
    let profiles = family.profiles(k as usize)?;
    profiles.check_feasible(n, m)?;
    let mut timings = Timings::default();

    let t = Instant::now();
    let lower_bound = lower_bound_pairs(n, m, &profiles)?;
    timings.lower_ms = ms(t);

    let t = Instant::now();
    let product = union_product(n, m, &profiles)?;
    let product_upper = product.len() as u64;
    timings.product_ms = ms(t);

    let t = Instant::now();
    let mut sizes = Vec::with_capacity(cfg.seeds.len());
    for &seed in &cfg.seeds {
        sizes.push(count_fair_quads(&random_matrix(n, m, k, seed)?)?);
    }
    timings.random_ms = ms(t);

    let t = Instant::now();
    let mut random_samples = Vec::with_capacity(cfg.seeds.len());
    let mut best_system: Option<QuadSystem> = None;
    for (&seed, &size) in cfg.seeds.iter().zip(&sizes) {
        let ls = local_search_minimize(n, m, k, &profiles, seed, cfg.local_search_budget)?;
        if best_system
            .as_ref()
            .is_none_or(|b| ls.quads.len() < b.len())
        {
            best_system = Some(ls.quads.clone());
        }
        random_samples.push(RandomSample {
            seed,
            size,
            local_search_size: ls.quads.len() as u64,
        });
    }
    timings.local_search_ms = ms(t);

    let count = sizes.len() as f64;
    let random_mean = sizes.iter().sum::<u64>() as f64 / count;
    let random_std = if sizes.len() > 1 {
        let ss: f64 = sizes
            .iter()
            .map(|&s| (s as f64 - random_mean).powi(2))
            .sum();
        (ss / (count - 1.0)).sqrt()
    } else {
        0.0
    };
    let fair_best = random_samples
        .iter()
        .map(|s| s.size.min(s.local_search_size))
        .min()
        .expect("at least one seed");

    let t = Instant::now();
    let (exact, exact_status, exact_nodes) = if cfg.exact_limits.admits(n, m, &profiles) {
        let inst = CoverInstance::new(n, m, &profiles)?;
        let incumbent = match best_system {
            Some(q) if q.len() < product.len() => q,
            _ => product,
        };
        let sol = exact_min_cover_with(&inst, &cfg.exact_budget, &incumbent);
        if sol.exact {
            (Some(sol.size as u64), ExactStatus::Solved, sol.nodes)
        } else {
            (None, ExactStatus::Truncated, sol.nodes)
        }
    } else {
        (None, ExactStatus::Skipped, 0)
    };
    timings.exact_ms = ms(t);

    let nm = (n as u64 * m as u64).pow(2);
    let theorem = Ratio::new(nm, 4 * k as u64);
    timings.total_ms = ms(start);

    Ok(BoundsReport {
        schema_version: SCHEMA_VERSION,
        n,
        m,
        k,
        family,
        profiles,
        lower_bound,
        product_upper,
        random_samples,
        random_mean,
        random_std,
        random_reference: (pairs(n) * pairs(m)) as f64 / k as f64,
        fair_best,
        best_constructed: fair_best.min(product_upper),
        exact,
        exact_status,
        exact_nodes,
        theorem_reference_num: *theorem.numer(),
        theorem_reference_den: *theorem.denom(),
        timings,
    })
}
