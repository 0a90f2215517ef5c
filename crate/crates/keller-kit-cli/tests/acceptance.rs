//! Acceptance suite: one test per release criterion. Each prints a single
//! `criterion N: PASS` line (visible with `--nocapture`) after its checks.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use keller_kit::game::solve::{chooser_wins_brute, chooser_wins_with, replay_certificate};
use keller_kit::game::DistinctnessMode;
use keller_kit::instances::{enumerate_first_columns, enumerate_systems, random_system};
use keller_kit::oracle::{
    enumerate_solutions, exists_solution, extendable, Answer, SearchBudget,
};
use keller_kit::poset::gen::{enumerate_branching, gen_branching};
use keller_kit::poset::paths::{disjoint_full_paths, PathMode, PathOutcome};
use keller_kit::poset::{check_lemma, check_proposition, is_wide, SubPoset};
use keller_kit::solver::{solve, FirstColumn};
use keller_kit::system::{Elem, SetSystem, SolutionMatrix};
use keller_kit::verify::verify_solution;

use keller_kit_cli::formats;

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Seeded dimensions sweeping n ∈ {2..5}, k ∈ {1..6}, alphabet ∈ {n..8}.
fn seeded_dims(seed: u64, ns: &[usize]) -> (usize, usize, usize) {
    let n = ns[(seed % ns.len() as u64) as usize];
    let k = 1 + ((seed / 4) % 6) as usize;
    let alphabet = n + ((seed / 24) % (9 - n as u64)) as usize;
    (n, k, alphabet)
}

/// A first column that is always valid: the smallest unused element per row.
fn greedy_first_column(sys: &SetSystem) -> Vec<Elem> {
    let mut used = BTreeSet::new();
    (0..sys.n())
        .map(|i| {
            let e = sys.set(i, 0).iter().find(|e| !used.contains(e)).unwrap();
            used.insert(e);
            Elem(e)
        })
        .collect()
}

fn first_column_of(sol: &SolutionMatrix) -> Vec<Elem> {
    sol.rows.iter().map(|r| r.values[0]).collect()
}

#[test]
fn criterion_1_solver_certification() {
    let start = Instant::now();
    let total = 2000;
    for seed in 0..total {
        let (n, k, alphabet) = seeded_dims(seed, &[2, 3, 4, 5]);
        let sys = random_system(n, k, alphabet, seed);
        let sol = solve(&sys, None).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let report = verify_solution(&sys, &sol).unwrap();
        assert!(report.pass(), "seed {seed}: {:?}", report.violations);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!("criterion 1: PASS ({total} seeded systems certified in {elapsed:.2?})");
}

#[test]
fn criterion_2_first_column_extension() {
    // Exhaustive slice: every (2, k ≤ 3)-system over a 3-element alphabet,
    // every valid first column.
    let budget = SearchBudget::default();
    let mut columns = 0usize;
    for k in 1..=3usize {
        for sys in enumerate_systems(2, k, 3) {
            for p in enumerate_first_columns(&sys) {
                let sol = solve(&sys, Some(&p)).unwrap();
                assert_eq!(first_column_of(&sol), p.values(), "k={k} {:?}", p.values());
                assert_eq!(
                    extendable(&sys, &p, budget).unwrap(),
                    Answer::Yes,
                    "k={k} {:?}",
                    p.values()
                );
                columns += 1;
            }
        }
    }

    // Sampled slice: ≥ 500 instances with n ∈ {3,4}, pinned to a valid column.
    let sampled = 500u64;
    for seed in 0..sampled {
        let (n, k, alphabet) = seeded_dims(seed, &[3, 4]);
        let sys = random_system(n, k, alphabet, 10_000 + seed);
        let p = FirstColumn::new(&sys, greedy_first_column(&sys)).unwrap();
        let sol = solve(&sys, Some(&p)).unwrap();
        assert_eq!(first_column_of(&sol), p.values(), "seed {seed}");
    }
    println!("criterion 2: PASS ({columns} exhaustive columns, {sampled} sampled instances)");
}

#[test]
fn criterion_3_oracle_agreement() {
    let budget = SearchBudget::default();
    let mut systems = 0usize;
    for sys in enumerate_systems(2, 2, 3) {
        assert_eq!(exists_solution(&sys, budget).unwrap(), Answer::Yes, "system {systems}");
        let all = enumerate_solutions(&sys, budget).unwrap();
        assert!(all.exhausted, "system {systems}");
        let sol = solve(&sys, None).unwrap();
        assert!(all.solutions.contains(&sol), "system {systems}");
        systems += 1;
    }
    assert_eq!(systems, 256);
    println!("criterion 3: PASS ({systems} exhaustive (2,2)-systems agree)");
}

#[test]
fn criterion_4_shipped_fixtures_and_mutations() {
    let dir = fixture_dir();
    let mut mutations = 0usize;
    for n in 3..=7usize {
        let sys = formats::read_instance(&dir.join(format!("cyclic-n{n}.json"))).unwrap();
        let sol = formats::read_solution(
            &dir.join(format!("cyclic-n{n}-solution.json")),
            sys.alphabet(),
        )
        .unwrap();
        assert!(verify_solution(&sys, &sol).unwrap().pass(), "n = {n}");
        for i in 0..n {
            for j in 0..n - 1 {
                let original = sol.rows[i].values[j];
                for v in 0..n as u32 {
                    if Elem(v) == original {
                        continue;
                    }
                    let mut tampered = sol.clone();
                    tampered.rows[i].values[j] = Elem(v);
                    let report = verify_solution(&sys, &tampered).unwrap();
                    assert!(
                        !report.pass(),
                        "n={n}: changing row {i} column {j} to {v} went unnoticed"
                    );
                    mutations += 1;
                }
            }
        }
    }
    println!("criterion 4: PASS (5 fixtures certify; {mutations} mutations all caught)");
}

#[test]
fn criterion_5_game_exactness() {
    let modes = [DistinctnessMode::PerRound, DistinctnessMode::EndOnly];
    for mode in modes {
        assert!(chooser_wins_brute(2, mode).unwrap(), "{mode}");
        assert!(chooser_wins_brute(3, mode).unwrap(), "{mode}");
        let fast = chooser_wins_with(4, mode, 0).unwrap().chooser_wins;
        assert_eq!(fast, chooser_wins_brute(4, mode).unwrap(), "{mode}");
        for n in 2..=4 {
            let analysis = chooser_wins_with(n, mode, 0).unwrap();
            let cert = analysis.certificate.expect("small games are chooser wins");
            let stats = replay_certificate(&cert).unwrap();
            assert!(stats.positions_visited > 0);
        }
    }

    let start = Instant::now();
    let single = chooser_wins_with(5, DistinctnessMode::PerRound, 1).unwrap();
    let pooled = chooser_wins_with(5, DistinctnessMode::PerRound, 4).unwrap();
    let again = chooser_wins_with(5, DistinctnessMode::PerRound, 4).unwrap();
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    assert_eq!(single.chooser_wins, pooled.chooser_wins);
    assert_eq!(single.certificate, pooled.certificate);
    assert_eq!(pooled.certificate, again.certificate);
    println!(
        "criterion 5: PASS (brute agreement n<=4, replays clean, n=5 x3 in {elapsed:.2?})"
    );
}

#[test]
fn criterion_6_leaf_counting_suites() {
    // Exhaustive: every rooted branching family on 3 and 4 elements.
    let mut exhaustive = 0usize;
    for (n, expected) in [(3usize, 21usize), (4, 1223)] {
        let families = enumerate_branching(n).unwrap();
        assert_eq!(families.len(), expected, "n = {n}");
        for family in &families {
            let lemma = check_lemma(family);
            assert_eq!(lemma.failed_precondition(), None);
            assert!(lemma.inequality_holds(), "n={n} {:?}", family.sets());
            if is_wide(family) {
                let prop = check_proposition(family);
                assert!(prop.leaf_bound_holds(), "n={n} {:?}", family.sets());
                assert!(prop.charges_hold(), "n={n} {:?}", family.sets());
            }
            exhaustive += 1;
        }
    }

    // Generated: ≥ 10^4 wide rooted branching families on 5..7 elements.
    let densities = [0.2, 0.5, 0.8];
    let mut generated = 0usize;
    for n in 5..=7usize {
        for seed in 0..3336u64 {
            let density = densities[(seed % 3) as usize];
            let family = gen_branching(n, seed, density).unwrap();
            let lemma = check_lemma(&family);
            assert!(lemma.pass(), "n={n} seed={seed}");
            let prop = check_proposition(&family);
            assert_eq!(prop.failed_precondition(), None, "n={n} seed={seed}");
            assert!(prop.leaf_bound_holds(), "n={n} seed={seed}");
            assert!(prop.charges_hold(), "n={n} seed={seed}");
            generated += 1;
        }
    }
    assert!(generated >= 10_000);
    println!("criterion 6: PASS ({exhaustive} exhaustive + {generated} generated families)");
}

#[test]
fn criterion_7_disjoint_paths() {
    // Leaf mode on generated families across every supported ground size.
    let mut leaf_checked = 0usize;
    for n in 2..=8usize {
        for seed in 0..30u64 {
            let density = [0.3, 0.7][(seed % 2) as usize];
            let family = gen_branching(n, seed, density).unwrap();
            match disjoint_full_paths(&family, PathMode::Leaf).unwrap() {
                PathOutcome::Paths(bundle) => {
                    assert_eq!(bundle.paths.len(), n, "n={n} seed={seed}");
                    assert_disjoint_increasing(&bundle.paths, &family, n, None);
                }
                other => panic!("n={n} seed={seed}: {other:?}"),
            }
            leaf_checked += 1;
        }
    }

    // Full mode on the open Boolean family: exactly n singleton→co-singleton
    // paths for every n in 3..8.
    for n in 3..=8usize {
        let family = SubPoset::boolean_without_top(n);
        match disjoint_full_paths(&family, PathMode::Full).unwrap() {
            PathOutcome::Paths(bundle) => {
                assert_eq!(bundle.paths.len(), n, "n = {n}");
                assert_disjoint_increasing(&bundle.paths, &family, n, Some(n as u32 - 1));
            }
            other => panic!("n = {n}: {other:?}"),
        }
    }
    println!("criterion 7: PASS ({leaf_checked} leaf-mode families, full mode n=3..8)");
}

/// Paths must start at distinct singletons, climb one member at a time inside
/// the family, share no vertex, and (full mode) end at the target cardinality.
fn assert_disjoint_increasing(
    paths: &[Vec<u32>],
    family: &SubPoset,
    n: usize,
    last_popcount: Option<u32>,
) {
    let mut seen = BTreeSet::new();
    let mut starts = BTreeSet::new();
    for path in paths {
        assert!(!path.is_empty());
        assert_eq!(path[0].count_ones(), 1, "paths start at singletons");
        starts.insert(path[0]);
        if let Some(target) = last_popcount {
            assert_eq!(path.last().unwrap().count_ones(), target);
        }
        let mut prev: Option<u32> = None;
        for &vertex in path {
            assert!(family.contains(vertex), "vertex outside the family");
            assert!(seen.insert(vertex), "vertex {vertex:b} reused across paths");
            if let Some(p) = prev {
                assert_eq!(vertex & p, p, "steps move strictly upward");
                assert_eq!(vertex.count_ones(), p.count_ones() + 1, "steps are covers");
            }
            prev = Some(vertex);
        }
    }
    assert_eq!(starts.len(), n, "every singleton is used exactly once");
}

#[test]
fn criterion_8_byte_identical_outputs() {
    let bin = env!("CARGO_BIN_EXE_keller-kit");
    let dir = tempfile::tempdir().unwrap();
    let open_b4 = dir.path().join("open-b4.json");
    let members: Vec<Vec<u32>> = (0u32..15)
        .map(|mask| (0..4).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect())
        .collect();
    fs::write(
        &open_b4,
        formats::render(&serde_json::json!({ "members": members, "n": 4 })),
    )
    .unwrap();
    let instance = fixture_dir().join("cyclic-n4.json");

    // (command-line, emitted file name) pairs exercised under each setting.
    let runs: Vec<(Vec<String>, Option<&str>)> = vec![
        (
            vec!["game".into(), "solve".into(), "--n".into(), "4".into()],
            Some("certificate-n4.json"),
        ),
        (
            vec![
                "game".into(), "sim".into(), "--n".into(), "3".into(),
                "--trials".into(), "5".into(), "--seed".into(), "9".into(),
            ],
            None,
        ),
        (
            vec!["solve".into(), instance.to_str().unwrap().into()],
            Some("sol.json"),
        ),
        (
            vec![
                "poset".into(), "paths".into(), open_b4.to_str().unwrap().into(),
                "--mode".into(), "full".into(),
            ],
            Some("paths.json"),
        ),
    ];

    for (args, emitted) in &runs {
        let mut captured: Option<(String, Option<Vec<u8>>)> = None;
        for threads in ["0", "1", "4"] {
            for _ in 0..2 {
                let work = tempfile::tempdir().unwrap();
                let mut full_args = args.clone();
                if let Some(name) = emitted {
                    full_args.push("--emit".into());
                    full_args.push(name.to_string());
                }
                let out = Command::new(bin)
                    .args(&full_args)
                    .current_dir(work.path())
                    .env("KELLER_KIT_THREADS", threads)
                    .output()
                    .unwrap();
                assert!(
                    out.status.success(),
                    "{args:?}: {}",
                    String::from_utf8_lossy(&out.stderr)
                );
                let stdout = String::from_utf8(out.stdout).unwrap();
                let bytes = emitted.map(|name| fs::read(work.path().join(name)).unwrap());
                match &captured {
                    None => captured = Some((stdout, bytes)),
                    Some((expect_out, expect_bytes)) => {
                        assert_eq!(&stdout, expect_out, "{args:?} threads={threads}");
                        assert_eq!(&bytes, expect_bytes, "{args:?} threads={threads}");
                    }
                }
            }
        }
    }
    println!("criterion 8: PASS (4 commands byte-identical across 6 runs each)");
}
