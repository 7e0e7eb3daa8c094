use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use quadturan::caen::{build_caen, verify_cover5, FourGraphSummary};
use quadturan::exact::{
    bounds_report, exact_min_cover, lower_bound_pairs, BoundsConfig, BoundsReport, CoverInstance,
    ExactLimits, ExactStatus, SolverBudget,
};
use quadturan::gk::{count_triangles, max_clique, CheckpointConfig, CliqueConfig};
use quadturan::io::{load_json, save_json, SCHEMA_VERSION};
use quadturan::rng::DEFAULT_SEED;
use quadturan::zk::scan::exhaustive_fair_scan;
use quadturan::zk::{
    local_search_minimize, pairs, quads_from_matrix, random_matrix, verify_profiles, Family,
    ProfileSet, QuadSystem, ZkMatrix,
};
use serde_json::{json, Value};

use crate::args::{Budget, Cli, Command, Format, ProfileArgs, Suite};
use crate::Status;

/// Overrides the directory for `clique --long-running` checkpoints.
pub const CHECKPOINT_DIR_VAR: &str = "QUADTURAN_CHECKPOINT_DIR";

pub const BENCH_HEADER: &str = "schema_version,suite,instance,result,wall_ms,workers";

pub fn run(cli: &Cli) -> Result<Status> {
    match &cli.command {
        Command::Construct {
            n,
            m,
            k,
            seed,
            optimize,
            profiles,
            budget_nodes,
        } => construct(
            cli,
            *n,
            *m,
            *k,
            seed.unwrap_or(DEFAULT_SEED),
            *optimize,
            profiles,
            *budget_nodes,
        ),
        Command::Verify { quads, profiles } => verify(cli, quads, profiles),
        Command::Exact {
            n,
            m,
            profiles,
            budget,
        } => exact(cli, *n, *m, profiles, budget),
        Command::Bounds {
            n,
            m,
            family,
            seeds,
            budget,
        } => bounds(cli, *n, *m, family, seeds.as_deref(), budget),
        Command::Clique {
            k,
            budget,
            long_running,
            checkpoint_interval_s,
        } => clique(cli, *k, budget, *long_running, *checkpoint_interval_s),
        Command::Triangles { k } => {
            let triangles = count_triangles(*k)?;
            emit(
                cli,
                &json!({"schema_version": SCHEMA_VERSION, "k": k, "triangles": triangles}),
            )?;
            Ok(Status::Ok)
        }
        Command::Caen { n, m, seed, matrix } => caen(cli, *n, *m, *seed, matrix.as_deref()),
        Command::Bench { suite } => bench(cli, *suite),
    }
}

fn profile_set(args: &ProfileArgs) -> Result<Option<ProfileSet>> {
    let text = args.profiles.as_ref().or(args.family.as_ref());
    text.map(|s| s.parse().with_context(|| format!("invalid profiles {s:?}")))
        .transpose()
}

fn require_profiles(args: &ProfileArgs) -> Result<ProfileSet> {
    profile_set(args)?.context("one of --profiles or --family is required")
}

fn solver_budget(b: &Budget) -> SolverBudget {
    SolverBudget {
        max_nodes: b.budget_nodes,
        time_limit: b.budget_ms.map(Duration::from_millis),
    }
}

/// Writes one payload to `--out` or stdout.
fn write_out(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

/// JSON, or a one-row CSV of the payload's scalar top-level fields.
fn emit(cli: &Cli, payload: &Value) -> Result<()> {
    let text = match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(payload)?),
        Format::Csv => scalar_csv(payload)?,
    };
    write_out(cli, &text)
}

fn scalar_csv(payload: &Value) -> Result<String> {
    let Value::Object(map) = payload else {
        bail!("CSV output needs an object payload");
    };
    let (keys, vals): (Vec<&str>, Vec<String>) = map
        .iter()
        .filter_map(|(k, v)| match v {
            Value::String(s) => Some((k.as_str(), s.clone())),
            Value::Number(_) | Value::Bool(_) => Some((k.as_str(), v.to_string())),
            Value::Null => Some((k.as_str(), String::new())),
            _ => None,
        })
        .unzip();
    csv_text(std::iter::once(keys.iter().map(|k| k.to_string()).collect()).chain([vals]))
}

fn csv_text(records: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.write_record(&r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[allow(clippy::too_many_arguments)]
fn construct(
    cli: &Cli,
    n: usize,
    m: usize,
    k: u32,
    seed: u64,
    optimize: bool,
    profiles: &ProfileArgs,
    budget: u64,
) -> Result<Status> {
    let profiles = match profile_set(profiles)? {
        Some(p) => p,
        None => ProfileSet::family_k2(k as usize)?,
    };
    let (matrix, quads, start_size) = if optimize {
        let out = local_search_minimize(n, m, k, &profiles, seed, budget)?;
        (out.matrix, out.quads, out.start_size)
    } else {
        let x = random_matrix(n, m, k, seed)?;
        let q = quads_from_matrix(&x)?;
        let size = q.len() as u64;
        (x, q, size)
    };
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let matrix_path = dir.join("matrix.json");
    let quads_path = dir.join("quads.json");
    save_json(&matrix_path, &matrix)?;
    save_json(&quads_path, &quads)?;

    let reference = (pairs(n) * pairs(m)) as f64 / k as f64;
    let summary = json!({
        "schema_version": SCHEMA_VERSION,
        "n": n,
        "m": m,
        "k": k,
        "seed": seed,
        "optimized": optimize,
        "profiles": profiles.to_string(),
        "start_size": start_size,
        "size": quads.len(),
        "reference": reference,
        "matrix": matrix_path.display().to_string(),
        "quads": quads_path.display().to_string(),
    });
    let text = match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&summary)?),
        Format::Csv => scalar_csv(&summary)?,
    };
    std::io::stdout().write_all(text.as_bytes())?;
    Ok(Status::Ok)
}

fn verify(cli: &Cli, quads: &Path, profiles: &ProfileArgs) -> Result<Status> {
    let profiles = require_profiles(profiles)?;
    let system: QuadSystem =
        load_json(quads).with_context(|| format!("reading quad system {}", quads.display()))?;
    let report = verify_profiles(&system, &profiles)?;
    let mut payload = serde_json::to_value(&report)?;
    payload["schema_version"] = json!(SCHEMA_VERSION);
    payload["quads"] = json!(system.len());
    emit(cli, &payload)?;
    Ok(if report.pass {
        Status::Ok
    } else {
        Status::VerifyFailed
    })
}

fn exact(cli: &Cli, n: usize, m: usize, profiles: &ProfileArgs, budget: &Budget) -> Result<Status> {
    let profiles = require_profiles(profiles)?;
    profiles.check_feasible(n, m)?;
    let limits = ExactLimits::default();
    if !limits.admits(n, m, &profiles) {
        bail!(
            "instance too large for exact search (limits: {} candidate quads, {} bad sets)",
            limits.max_candidates,
            limits.max_bad_sets
        );
    }
    let inst = CoverInstance::new(n, m, &profiles)?;
    let sol = exact_min_cover(&inst, &solver_budget(budget));
    emit(
        cli,
        &json!({
            "schema_version": SCHEMA_VERSION,
            "n": n,
            "m": m,
            "profiles": profiles.to_string(),
            "size": sol.size,
            "exact": sol.exact,
            "nodes": sol.nodes,
            "candidates": inst.candidates().len(),
            "bad_sets": inst.bad_sets().len(),
            "lower_bound": lower_bound_pairs(n, m, &profiles)?,
            "system": sol.system,
        }),
    )?;
    Ok(if sol.exact {
        Status::Ok
    } else {
        Status::BudgetExhausted
    })
}

fn parse_family(text: &str) -> Result<(Family, u32)> {
    let (name, k) = text
        .split_once(':')
        .with_context(|| format!("expected k2:<k> or k3:<k>, got {text:?}"))?;
    let family = match name.trim() {
        "k2" => Family::K2,
        "k3" => Family::K3,
        other => bail!("unknown family {other:?}"),
    };
    let k = k
        .trim()
        .parse()
        .with_context(|| format!("bad modulus in {text:?}"))?;
    Ok((family, k))
}

fn bounds(
    cli: &Cli,
    n: usize,
    m: usize,
    family: &str,
    seeds: Option<&[u64]>,
    budget: &Budget,
) -> Result<Status> {
    let (family, k) = parse_family(family)?;
    let mut cfg = BoundsConfig::default();
    if let Some(seeds) = seeds {
        cfg.seeds = seeds.to_vec();
    }
    if budget.budget_nodes.is_some() || budget.budget_ms.is_some() {
        cfg.exact_budget = solver_budget(budget);
    }
    let report = bounds_report(n, m, k, family, &cfg)?;
    let text = match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report)?),
        Format::Csv => format!("{}\n{}\n", BoundsReport::csv_header(), report.csv_row()),
    };
    write_out(cli, &text)?;
    Ok(if report.exact_status == ExactStatus::Truncated {
        Status::BudgetExhausted
    } else {
        Status::Ok
    })
}

fn clique(
    cli: &Cli,
    k: u32,
    budget: &Budget,
    long_running: bool,
    interval_s: u64,
) -> Result<Status> {
    let budgeted = budget.budget_ms.is_some() || budget.budget_nodes.is_some();
    if k >= 9 && !long_running && !budgeted {
        bail!("clique search for k >= 9 needs --long-running or an explicit budget");
    }
    let checkpoint = long_running.then(|| {
        let dir = std::env::var_os(CHECKPOINT_DIR_VAR)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."));
        CheckpointConfig {
            path: dir.join(format!("clique-k{k}.json")),
            interval: Duration::from_secs(interval_s),
        }
    });
    if let Some(ck) = &checkpoint {
        if let Some(parent) = ck.path.parent() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let cfg = CliqueConfig {
        max_nodes: budget.budget_nodes,
        time_limit: budget.budget_ms.map(Duration::from_millis),
        checkpoint: checkpoint.clone(),
        ..CliqueConfig::default()
    };
    let result = max_clique(k, &cfg)?;
    let mut payload = serde_json::to_value(&result)?;
    payload["schema_version"] = json!(SCHEMA_VERSION);
    payload["checkpoint"] = json!(checkpoint.map(|c| c.path.display().to_string()));
    emit(cli, &payload)?;
    Ok(if result.exact {
        Status::Ok
    } else {
        Status::BudgetExhausted
    })
}

fn caen(
    cli: &Cli,
    n: Option<usize>,
    m: Option<usize>,
    seed: Option<u64>,
    matrix: Option<&Path>,
) -> Result<Status> {
    let (x, seed) = match matrix {
        Some(path) => {
            let x: ZkMatrix =
                load_json(path).with_context(|| format!("reading matrix {}", path.display()))?;
            (x, None)
        }
        None => {
            let seed = seed.unwrap_or(DEFAULT_SEED);
            let (n, m) = (n.context("--n is required")?, m.context("--m is required")?);
            (random_matrix(n, m, 2, seed)?, Some(seed))
        }
    };
    let h = build_caen(&x)?;
    let summary = FourGraphSummary::new(&h)?;
    let mut payload = serde_json::to_value(&summary)?;
    payload["schema_version"] = json!(SCHEMA_VERSION);
    payload["seed"] = json!(seed);
    if !summary.covered {
        payload["witness"] = serde_json::to_value(verify_cover5(&h)?)?;
    }
    emit(cli, &payload)?;
    Ok(if summary.covered {
        Status::Ok
    } else {
        Status::VerifyFailed
    })
}

struct BenchRow {
    suite: &'static str,
    instance: String,
    result: String,
    wall_ms: f64,
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let t = Instant::now();
    let out = f()?;
    Ok((out, t.elapsed().as_secs_f64() * 1e3))
}

fn bench(cli: &Cli, suite: Suite) -> Result<Status> {
    let want = |s: Suite| suite == Suite::All || suite == s;
    let mut rows = Vec::new();
    if want(Suite::Lemmas) {
        for (k, r, c) in [(2u32, 2, 3), (3, 2, 4), (4, 2, 5), (2, 3, 2), (4, 3, 4)] {
            let (scan, ms) = timed(|| Ok(exhaustive_fair_scan(k, r, c)?))?;
            rows.push(BenchRow {
                suite: "lemmas",
                instance: format!("k={k} {r}x{c}"),
                result: format!("cases={} failures={}", scan.cases, scan.failures),
                wall_ms: ms,
            });
        }
    }
    if want(Suite::Clique) {
        for k in 2..=9 {
            let (r, ms) = timed(|| Ok(max_clique(k, &CliqueConfig::default())?))?;
            rows.push(BenchRow {
                suite: "clique",
                instance: format!("k={k}"),
                result: format!("size={} exact={}", r.size, r.exact),
                wall_ms: ms,
            });
        }
    }
    if want(Suite::Exact) {
        for (n, m, p) in [(4usize, 4usize, "k2:2"), (3, 5, "2,3"), (4, 4, "3,3")] {
            let profiles: ProfileSet = p.parse()?;
            let (sol, ms) = timed(|| {
                let inst = CoverInstance::new(n, m, &profiles)?;
                Ok(exact_min_cover(&inst, &SolverBudget::default()))
            })?;
            rows.push(BenchRow {
                suite: "exact",
                instance: format!("n={n} m={m} P={profiles}"),
                result: format!("size={} exact={}", sol.size, sol.exact),
                wall_ms: ms,
            });
        }
    }
    if want(Suite::Caen) {
        let (covered, ms) = timed(|| {
            let mut covered = 0;
            for seed in 0..100 {
                let h = build_caen(&random_matrix(6, 6, 2, seed)?)?;
                covered += usize::from(verify_cover5(&h)?.is_none());
            }
            Ok(covered)
        })?;
        rows.push(BenchRow {
            suite: "caen",
            instance: "n=6 m=6 seeds=100".into(),
            result: format!("covered={covered}"),
            wall_ms: ms,
        });
    }

    let text = match cli.format {
        Format::Csv => {
            let header = BENCH_HEADER.split(',').map(String::from).collect();
            csv_text(std::iter::once(header).chain(rows.iter().map(|r| {
                vec![
                    SCHEMA_VERSION.to_string(),
                    r.suite.to_string(),
                    r.instance.clone(),
                    r.result.clone(),
                    format!("{:.3}", r.wall_ms),
                    cli.workers.to_string(),
                ]
            })))?
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "schema_version": SCHEMA_VERSION,
                        "suite": r.suite,
                        "instance": r.instance,
                        "result": r.result,
                        "wall_ms": r.wall_ms,
                        "workers": cli.workers,
                    })
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&rows)?)
        }
    };
    write_out(cli, &text)?;
    Ok(Status::Ok)
}
