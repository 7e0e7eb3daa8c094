use std::time::Duration;

use quadturan::gk::{
    canonical_clique, is_edge, matrix_from_functions, max_clique, CheckpointConfig,
    CheckpointState, CliqueConfig, CliqueResult, StopReason,
};
use quadturan::zk::{find_fair_submatrix, Modulus};

fn pairwise(r: &CliqueResult) -> bool {
    r.witness
        .iter()
        .enumerate()
        .all(|(i, f)| r.witness[i + 1..].iter().all(|g| is_edge(f, g).unwrap()))
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn clique_numbers_up_to_eight() {
    for (k, want) in [(2, 2), (3, 3), (4, 2), (5, 5), (6, 2), (7, 7), (8, 2)] {
        let r = max_clique(k, &CliqueConfig::default()).unwrap();
        assert!(r.exact, "k={k}");
        assert_eq!(r.size, want, "k={k}");
        assert_eq!(r.witness.len(), want);
        assert!(pairwise(&r));
        let x = matrix_from_functions(&r.witness).unwrap();
        if want >= 2 {
            assert_eq!(find_fair_submatrix(&x).unwrap(), None);
        }
    }
}

#[test]
fn full_search_agrees_with_column_bound() {
    for k in 2..=7 {
        let plain = CliqueConfig {
            column_bound: false,
            ..CliqueConfig::default()
        };
        let a = max_clique(k, &plain).unwrap();
        let b = max_clique(k, &CliqueConfig::default()).unwrap();
        assert!(a.exact);
        assert_eq!(a.size, b.size, "k={k}");
        assert!(pairwise(&a));
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let cfg = CliqueConfig {
        column_bound: false,
        chunk_size: 3,
        ..CliqueConfig::default()
    };
    for k in [5, 7, 9] {
        let one = in_pool(1, || max_clique(k, &cfg).unwrap());
        let four = in_pool(4, || max_clique(k, &cfg).unwrap());
        assert_eq!(one, four, "k={k}");
    }
    let truncated = CliqueConfig {
        max_nodes: Some(40),
        ..cfg
    };
    let one = in_pool(1, || max_clique(7, &truncated).unwrap());
    let four = in_pool(4, || max_clique(7, &truncated).unwrap());
    assert_eq!(one, four);
}

#[test]
fn nine_has_clique_number_three() {
    let r = max_clique(9, &CliqueConfig::default()).unwrap();
    assert!(r.exact);
    assert_eq!(r.size, 3);
    assert_eq!(r.orthomorphisms, Some(2025));
    assert!(pairwise(&r));
    assert_eq!(canonical_clique(Modulus::new(9).unwrap()).len(), 3);
}

#[test]
fn interrupted_search_resumes_from_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g9.json");
    let ck = CheckpointConfig {
        path: path.clone(),
        interval: Duration::ZERO,
    };
    let interrupted = max_clique(
        9,
        &CliqueConfig {
            max_nodes: Some(500),
            chunk_size: 50,
            checkpoint: Some(ck.clone()),
            ..CliqueConfig::default()
        },
    )
    .unwrap();
    assert!(!interrupted.exact);
    assert_eq!(interrupted.stop_reason, Some(StopReason::NodeBudget));
    let saved = CheckpointState::load(&path).unwrap().unwrap();
    assert!(saved.next_branch > 0 && saved.next_branch < 2025);
    assert_eq!(saved.nodes, interrupted.nodes);

    let resumed = max_clique(
        9,
        &CliqueConfig {
            checkpoint: Some(ck),
            ..CliqueConfig::default()
        },
    )
    .unwrap();
    assert_eq!(resumed.resumed_from, Some(saved.next_branch));
    assert!(resumed.exact);
    assert_eq!(resumed.size, 3);

    let fresh = max_clique(9, &CliqueConfig::default()).unwrap();
    assert_eq!(resumed.witness, fresh.witness);
    assert_eq!(resumed.nodes, fresh.nodes);
    let done = CheckpointState::load(&path).unwrap().unwrap();
    assert_eq!(done.next_branch, 2025);
}

#[test]
fn corrupt_or_foreign_checkpoints_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{not json").unwrap();
    let cfg = CliqueConfig {
        checkpoint: Some(CheckpointConfig {
            path: path.clone(),
            interval: Duration::from_secs(60),
        }),
        ..CliqueConfig::default()
    };
    assert!(max_clique(9, &cfg).is_err());

    // a k=7 checkpoint fed to a k=9 run
    std::fs::remove_file(&path).unwrap();
    let seven = CliqueConfig {
        column_bound: false,
        ..cfg.clone()
    };
    max_clique(7, &seven).unwrap();
    assert!(max_clique(9, &cfg).is_err());
}
