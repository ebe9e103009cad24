//! End-to-end acceptance suite. Each test checks one release criterion at its
//! pinned tolerance and prints a single pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcms::channels::ChannelSet;
use qcms::cli::{run_sweep, SweepConfig};
use qcms::coding;
use qcms::engine;
use qcms::sim::{
    self, MonteCarloConfig, PermKind, PropertyCaps, WildcardKind,
};
use qcms::subseq::PermPolicy;

fn report(number: u8, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {number:02} {name}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {number:02} {name}: {detail}");
}

fn set(spec: &str) -> ChannelSet {
    ChannelSet::parse(spec).unwrap()
}

#[test]
fn c01_pair_coding_table_fidelity() {
    let table: [((u8, u8), (u8, u8)); 16] = [
        ((0, 0), (1, 0)),
        ((0, 1), (1, 2)),
        ((0, 2), (1, 3)),
        ((0, 3), (1, 4)),
        ((1, 0), (2, 0)),
        ((1, 1), (2, 1)),
        ((1, 2), (2, 3)),
        ((1, 3), (2, 4)),
        ((2, 0), (3, 0)),
        ((2, 1), (3, 1)),
        ((2, 2), (3, 2)),
        ((2, 3), (3, 4)),
        ((3, 0), (4, 0)),
        ((3, 1), (4, 1)),
        ((3, 2), (4, 2)),
        ((3, 3), (4, 3)),
    ];
    let mut matched = 0;
    for ((hi, lo), expected) in table {
        if coding::code_pair(hi, lo).unwrap() == expected {
            matched += 1;
        }
    }
    report(
        1,
        "pair-coding table fidelity",
        matched == 16,
        &format!("{matched}/16 rows match"),
    );
}

#[test]
fn c02_bootstrap_worked_example() {
    let bs = coding::build_bootstrap(200, 5).unwrap();
    let rendered = bs.to_string();
    report(
        2,
        "bootstrap worked example",
        rendered == "R001021" && bs.len() == 7,
        &format!("build_bootstrap(200, 5) = {rendered}, L={}", bs.len()),
    );
}

#[test]
fn c03_bound_arithmetic() {
    let bound = engine::mttr_bound(6, 4, 200).unwrap();
    report(
        3,
        "bound arithmetic",
        bound == 847,
        &format!("mttr_bound(6, 4, 200) = {bound}"),
    );
}

#[test]
fn c04_guaranteed_rendezvous() {
    // (i) the heterogeneous reference scenario
    let reference = sim::verify_bound(
        200,
        &set("1-6"),
        &set("1,7,8,9"),
        PermPolicy::Ascending,
    )
    .unwrap();
    assert_eq!(reference.selection_pairs, 24);

    // (ii) a battery of small scenarios: every ordered size combination from
    // {1,2,4,5,6} at G=1, plus random fillers, all with N <= 25
    let sizes = [1usize, 2, 4, 5, 6];
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE97);
    let mut scenarios: Vec<(u32, ChannelSet, ChannelSet)> = Vec::new();
    for &n_a in &sizes {
        for &n_b in &sizes {
            let n = rng.gen_range(15..=25u32);
            let scenario = sim::sample_scenario(
                n,
                n_a as f64 / f64::from(n),
                n_b as f64 / f64::from(n),
                1,
                &mut rng,
            )
            .unwrap();
            scenarios.push((
                n,
                scenario.available_a().clone(),
                scenario.available_b().clone(),
            ));
        }
    }
    while scenarios.len() < 50 {
        let n = rng.gen_range(12..=25u32);
        let n_a = sizes[rng.gen_range(0..sizes.len())];
        let n_b = sizes[rng.gen_range(0..sizes.len())];
        let overlap = rng.gen_range(1..=n_a.min(n_b) as u32);
        let scenario = sim::sample_scenario(
            n,
            n_a as f64 / f64::from(n),
            n_b as f64 / f64::from(n),
            overlap,
            &mut rng,
        )
        .unwrap();
        scenarios.push((
            n,
            scenario.available_a().clone(),
            scenario.available_b().clone(),
        ));
    }

    let mut violations = Vec::new();
    let mut trials = reference.trials;
    for (n, set_a, set_b) in &scenarios {
        let outcome = sim::verify_bound(*n, set_a, set_b, PermPolicy::Ascending).unwrap();
        trials += outcome.trials;
        if !outcome.pass {
            violations.push(format!(
                "N={n} C_A={set_a} C_B={set_b}: max {} > bound {}",
                outcome.max_ttr, outcome.bound
            ));
        }
    }

    let pass = reference.pass && violations.is_empty();
    report(
        4,
        "guaranteed rendezvous",
        pass,
        &format!(
            "reference scenario max TTR {} <= {} over {} pairs; {} small scenarios, {} trials total, violations: {}",
            reference.max_ttr,
            reference.bound,
            reference.selection_pairs,
            scenarios.len(),
            trials,
            if violations.is_empty() {
                "none".to_string()
            } else {
                violations.join("; ")
            }
        ),
    );
}

#[test]
fn c05_property_suites() {
    let caps = PropertyCaps::default();
    assert_eq!(caps.concat_pairs, 4);
    assert_eq!(caps.rotation_channel_counts, vec![4, 5, 16, 17, 200, 256]);
    assert_eq!(caps.r_column_drifts, 101);
    assert_eq!(caps.prime_limit, 1000);
    let suite = sim::run_property_suite(&caps);
    let detail: Vec<String> = suite
        .entries
        .iter()
        .map(|e| {
            format!(
                "{} [{} cases, {}]",
                e.name,
                e.outcome.cases,
                if e.outcome.passed() { "ok" } else { "violated" }
            )
        })
        .collect();
    report(
        5,
        "exhaustive property suites",
        suite.all_passed(),
        &detail.join("; "),
    );
}

fn scene_ettr(theta_a: f64, theta_b: f64, overlap: u32, seed: u64) -> f64 {
    sim::monte_carlo(&MonteCarloConfig {
        channel_count: 200,
        theta_a,
        theta_b,
        overlap,
        trials: 30_000,
        drift_max: 50,
        wildcard: WildcardKind::Random,
        permutation: PermKind::Shuffled,
        master_seed: seed,
    })
    .unwrap()
    .ettr
}

#[test]
fn c06_scene1_ettr_reference_values() {
    // N=200, theta_a=0.3, theta_b=0.4, drift U[0,50], 30000 trials;
    // policies: random wildcard fill, per-trial shuffled permutations
    let targets = [(1u32, 4527.0), (5, 962.0), (10, 477.0)];
    let mut details = Vec::new();
    let mut pass = true;
    for (overlap, target) in targets {
        let ettr = scene_ettr(0.3, 0.4, overlap, 601);
        let deviation = (ettr - target) / target;
        pass &= deviation.abs() <= 0.12;
        details.push(format!(
            "G={overlap}: ettr={ettr:.1} vs {target} ({:+.1}%)",
            deviation * 100.0
        ));
    }
    report(
        6,
        "scene 1 ETTR within 12% (wildcard=random, perm=shuffled)",
        pass,
        &details.join("; "),
    );
}

#[test]
fn c07_scene3_ettr_reference_values() {
    // N=200, theta_a=0.1, G=1, drift U[0,50], 30000 trials;
    // policies: random wildcard fill, per-trial shuffled permutations
    let targets = [(0.1f64, 429.0), (0.3, 1153.0), (0.5, 1943.0)];
    let mut details = Vec::new();
    let mut pass = true;
    for (theta_b, target) in targets {
        let ettr = scene_ettr(0.1, theta_b, 1, 701);
        let deviation = (ettr - target) / target;
        pass &= deviation.abs() <= 0.12;
        details.push(format!(
            "theta_b={theta_b}: ettr={ettr:.1} vs {target} ({:+.1}%)",
            deviation * 100.0
        ));
    }
    report(
        7,
        "scene 3 ETTR within 12% (wildcard=random, perm=shuffled)",
        pass,
        &details.join("; "),
    );
}

#[test]
fn c08_ettr_trend_checks() {
    let base = SweepConfig {
        scene: 1,
        overlap: None,
        channel_count: None,
        theta_a: None,
        theta_b: None,
        trials: 30_000,
        drift_max: 50,
        master_seed: 801,
        wildcard: WildcardKind::Random,
        permutation: PermKind::Shuffled,
    };
    // scene 1 direction: ETTR non-increasing in G, 5% noise margin
    let scene1 = run_sweep(&base).unwrap();
    let mut pass = true;
    let mut worst = String::from("monotone");
    for window in scene1.windows(2) {
        if window[1].ettr > window[0].ettr * 1.05 {
            pass = false;
            worst = format!(
                "G={}: {:.1} rises above G={}: {:.1}",
                window[1].param, window[1].ettr, window[0].param, window[0].ettr
            );
        }
    }
    // scene 2 direction: ETTR non-decreasing in N, 5% noise margin
    // (absolute scene 2 levels are not targets; G fixed at 5)
    let scene2 = run_sweep(&SweepConfig {
        scene: 2,
        overlap: Some(5),
        ..base.clone()
    })
    .unwrap();
    let mut worst2 = String::from("monotone");
    for window in scene2.windows(2) {
        if window[1].ettr < window[0].ettr * 0.95 {
            pass = false;
            worst2 = format!(
                "N={}: {:.1} drops below N={}: {:.1}",
                window[1].param, window[1].ettr, window[0].param, window[0].ettr
            );
        }
    }
    report(
        8,
        "ETTR trends across scenes 1 and 2",
        pass,
        &format!(
            "scene1 G=1..10 ({:.0}..{:.0}): {worst}; scene2 N=40..220 at G=5 ({:.0}..{:.0}): {worst2}",
            scene1.first().unwrap().ettr,
            scene1.last().unwrap().ettr,
            scene2.first().unwrap().ettr,
            scene2.last().unwrap().ettr,
        ),
    );
}

#[test]
fn c09_baseline_geometric_oracle() {
    // mean TTR of two memoryless uniform hoppers is a·b/G
    let cases = [
        (set("1,2"), set("2,3"), 4.0),
        (set("1-5"), set("4-7"), 10.0),
        (set("1-10"), set("10-19"), 100.0),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (set_a, set_b, expected) in cases {
        let mean = sim::baseline_mean_ttr(&set_a, &set_b, 100_000, 901).unwrap();
        let deviation = (mean - expected) / expected;
        pass &= deviation.abs() <= 0.05;
        details.push(format!(
            "a*b/G={expected}: mean={mean:.2} ({:+.1}%)",
            deviation * 100.0
        ));
    }
    report(
        9,
        "random-baseline geometric oracle",
        pass,
        &details.join("; "),
    );
}

#[test]
fn c10_sweep_reproducibility() {
    let exe = env!("CARGO_BIN_EXE_qcms");
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.csv");
    let second = dir.path().join("second.csv");
    for path in [&first, &second] {
        let status = std::process::Command::new(exe)
            .args([
                "sweep",
                "--scene",
                "1",
                "--trials",
                "300",
                "--seed",
                "99",
                "--format",
                "csv",
                "--out",
            ])
            .arg(path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let bytes_a = std::fs::read(&first).unwrap();
    let bytes_b = std::fs::read(&second).unwrap();
    report(
        10,
        "sweep reproducibility",
        bytes_a == bytes_b,
        &format!(
            "two runs with the same master seed produced byte-identical CSV ({} bytes)",
            bytes_a.len()
        ),
    );
}
