//! Command-line surface: sequence inspection, invariant verification, bound
//! verification, Monte Carlo runs and parameter sweeps.
//!
//! Machine-readable output is deterministic: the same command line and master
//! seed always produce byte-identical files. Every file embeds the tool
//! version, the full parameter set, and the master seed.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::channels::ChannelSet;
use crate::coding;
use crate::engine::{self, WildcardPolicy};
use crate::sim::{
    self, BoundVerification, MonteCarloConfig, PermKind, PropertyCaps, PropertyReport,
    SummaryStats, WildcardKind,
};
use crate::subseq::{self, PermPolicy};
use crate::{Error, Result};

/// Fixed column order of sweep and simulate CSV output.
pub const SWEEP_CSV_HEADER: &str = "scene,param,trials,ettr,mttr_observed,ci95,seed";

const TOOL_NAME: &str = "qcms";
const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "qcms",
    version,
    about = "Quinary-coded channel hopping: sequence inspection, guaranteed-rendezvous verification, and TTR experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the bootstrap sequence for a selected channel.
    Bootstrap {
        /// Total number of channels.
        #[arg(long)]
        n: u32,
        /// Selected channel index.
        #[arg(long)]
        r: u32,
    },
    /// Print the R-type and λ-type subsequences for a channel set.
    Subseq {
        /// Available channel set, e.g. "1-6" or "1,7,8,9".
        #[arg(long)]
        c: String,
        /// Selected channel; prints the R-type subsequence when given.
        #[arg(long)]
        r: Option<u32>,
        /// Print a single λ-type subsequence instead of all five.
        #[arg(long)]
        lambda: Option<u8>,
        #[arg(long, value_enum, default_value_t = PermArg::Ascending)]
        perm: PermArg,
        /// Master seed (used by the shuffled permutation policy).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the per-slot channel sequence of one user.
    Sequence {
        /// Total number of channels.
        #[arg(long)]
        n: u32,
        /// Available channel set.
        #[arg(long)]
        c: String,
        /// Selected channel.
        #[arg(long)]
        r: u32,
        /// Number of slots to print.
        #[arg(long, default_value_t = 70)]
        slots: u64,
        #[arg(long, value_enum, default_value_t = WildcardArg::Random)]
        wildcard: WildcardArg,
        #[arg(long, value_enum, default_value_t = PermArg::Ascending)]
        perm: PermArg,
        /// Master seed for wildcard fills and shuffled permutations.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustively verify the rendezvous bound for a two-user scenario.
    Verify {
        /// Total number of channels.
        #[arg(long)]
        n: u32,
        /// Channel set of user A.
        #[arg(long)]
        ca: String,
        /// Channel set of user B.
        #[arg(long)]
        cb: String,
        #[arg(long, value_enum, default_value_t = PermArg::Ascending)]
        perm: PermArg,
        /// Master seed (used by the shuffled permutation policy).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo TTR estimation for one parameter point.
    Simulate {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reproduce a ready-made experiment scene as a parameter sweep.
    Sweep {
        /// Scene number: 1 sweeps the overlap G, 2 sweeps the channel count
        /// N, 3 sweeps the ratio θ_B.
        #[arg(long)]
        scene: u8,
        /// Overlap G. Required for scene 2; fixed parameter override for
        /// scene 3; rejected for scene 1 (G is swept there).
        #[arg(long)]
        g: Option<u32>,
        /// Channel count override (scenes 1 and 3).
        #[arg(long)]
        n: Option<u32>,
        /// Ratio θ_A override.
        #[arg(long)]
        theta_a: Option<f64>,
        /// Ratio θ_B override (scenes 1 and 2).
        #[arg(long)]
        theta_b: Option<f64>,
        #[arg(long, default_value_t = 30000)]
        trials: u64,
        #[arg(long, default_value_t = 50)]
        drift_max: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = WildcardArg::Random)]
        wildcard: WildcardArg,
        /// Defaults to per-trial shuffled permutations; ascending ones
        /// correlate the common channels' slot positions and inflate ETTR.
        #[arg(long, value_enum, default_value_t = PermArg::Shuffled)]
        perm: PermArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the exhaustive sequence-invariant suite.
    Properties {
        /// Coded pairs per concatenation for the digit-pattern checks.
        #[arg(long, default_value_t = 4)]
        concat_pairs: usize,
        /// Channel counts for the rotation-overlap check, e.g. "4,5,16".
        #[arg(long, default_value = "4,5,16,17,200,256")]
        rotation_ns: String,
        /// Number of drifts for the R-column rendezvous check.
        #[arg(long, default_value_t = 101)]
        r_drifts: u64,
        /// Prime ceiling for the coprimality check.
        #[arg(long, default_value_t = 1000)]
        prime_limit: u64,
        /// Built-in coverage scenarios to sweep (0..=3).
        #[arg(long, default_value_t = 3)]
        coverage_cases: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Monte Carlo parameters shared by `simulate`.
#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Total number of channels.
    #[arg(long)]
    n: u32,
    /// Available-channel ratio of user A.
    #[arg(long)]
    theta_a: f64,
    /// Available-channel ratio of user B.
    #[arg(long)]
    theta_b: f64,
    /// Number of common channels.
    #[arg(long)]
    g: u32,
    #[arg(long, default_value_t = 30000)]
    trials: u64,
    /// Drift is drawn uniformly from [0, drift-max] per trial.
    #[arg(long, default_value_t = 50)]
    drift_max: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = WildcardArg::Random)]
    wildcard: WildcardArg,
    /// Defaults to per-trial shuffled permutations; ascending ones correlate
    /// the common channels' slot positions and inflate ETTR.
    #[arg(long, value_enum, default_value_t = PermArg::Shuffled)]
    perm: PermArg,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Machine-readable output format for --out.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv, requires = "out")]
    format: FormatArg,
    /// Write machine-readable output to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WildcardArg {
    Random,
    Nomatch,
}

impl WildcardArg {
    fn kind(self) -> WildcardKind {
        match self {
            WildcardArg::Random => WildcardKind::Random,
            WildcardArg::Nomatch => WildcardKind::NoMatch,
        }
    }

    fn label(self) -> &'static str {
        match self {
            WildcardArg::Random => "random",
            WildcardArg::Nomatch => "nomatch",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PermArg {
    Ascending,
    Shuffled,
}

impl PermArg {
    fn kind(self) -> PermKind {
        match self {
            PermArg::Ascending => PermKind::Ascending,
            PermArg::Shuffled => PermKind::Shuffled,
        }
    }

    fn policy(self, seed: u64) -> PermPolicy {
        match self {
            PermArg::Ascending => PermPolicy::Ascending,
            PermArg::Shuffled => PermPolicy::Shuffled { seed },
        }
    }

    fn label(self) -> &'static str {
        match self {
            PermArg::Ascending => "ascending",
            PermArg::Shuffled => "shuffled",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// One row of sweep output; columns in CSV order.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub scene: String,
    pub param: String,
    pub trials: u64,
    pub ettr: f64,
    pub mttr_observed: u64,
    pub ci95: f64,
    pub seed: u64,
}

/// Metadata embedded in every machine-readable artifact.
#[derive(Debug, Clone, Serialize)]
struct RunMeta {
    tool: &'static str,
    version: &'static str,
    params: String,
    master_seed: u64,
}

#[derive(Debug, Serialize)]
struct SweepDocument<'a> {
    #[serde(flatten)]
    meta: &'a RunMeta,
    rows: &'a [SweepRow],
}

#[derive(Debug, Serialize)]
struct VerifyDocument<'a> {
    #[serde(flatten)]
    meta: &'a RunMeta,
    report: &'a BoundVerification,
}

#[derive(Debug, Serialize)]
struct PropertyLine {
    name: String,
    pass: bool,
    cases: u64,
    violation: Option<String>,
}

#[derive(Debug, Serialize)]
struct PropertyDocument<'a> {
    #[serde(flatten)]
    meta: &'a RunMeta,
    properties: Vec<PropertyLine>,
}

/// Entry point for the `qcms` binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command) -> Result<ExitCode> {
    match command {
        Command::Bootstrap { n, r } => {
            let bs = coding::build_bootstrap(n, r)?;
            println!("{}, L={}", bs, bs.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Subseq {
            c,
            r,
            lambda,
            perm,
            seed,
        } => {
            let channels = ChannelSet::parse(&c)?;
            if let Some(r) = r {
                if !channels.contains(r) {
                    return Err(Error::SelectedChannelNotAvailable(r));
                }
                println!("R-type (K=10): {}", render_slots(subseq::gen_r_type(r).slots()));
            }
            let lambdas: Vec<u8> = match lambda {
                Some(l) => vec![l],
                None => (0..5).collect(),
            };
            for l in lambdas {
                let seq = subseq::gen_lambda_type(&channels, l, perm.policy(seed))?;
                println!("{l}-type (K={}): {}", seq.len(), render_slots(seq.slots()));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sequence {
            n,
            c,
            r,
            slots,
            wildcard,
            perm,
            seed,
        } => {
            let channels = ChannelSet::parse(&c)?;
            let sched = engine::build_schedule(n, &channels, r, perm.policy(seed))?;
            let policy = match wildcard {
                WildcardArg::Random => WildcardPolicy::RandomFill { seed },
                WildcardArg::Nomatch => WildcardPolicy::NoMatch,
            };
            println!(
                "N={n} C={channels} R={r} bootstrap={} wildcard={} perm={} seed={seed}",
                sched.bootstrap(),
                wildcard.label(),
                perm.label()
            );
            let len = sched.bootstrap().len() as u64;
            let mut line = String::new();
            for t in 0..slots {
                if !line.is_empty() {
                    line.push(' ');
                }
                let _ = write!(line, "{}", sched.channel_at(t, policy));
                if (t + 1) % len == 0 || t + 1 == slots {
                    println!("{line}");
                    line.clear();
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            n,
            ca,
            cb,
            perm,
            seed,
            output,
        } => {
            let set_a = ChannelSet::parse(&ca)?;
            let set_b = ChannelSet::parse(&cb)?;
            let report = sim::verify_bound(n, &set_a, &set_b, perm.policy(seed))?;
            let meta = RunMeta {
                tool: TOOL_NAME,
                version: TOOL_VERSION,
                params: format!(
                    "verify --n {n} --ca {set_a} --cb {set_b} --perm {} --seed {seed}",
                    perm.label()
                ),
                master_seed: seed,
            };
            println!(
                "{}: max TTR {} <= bound {} over {} selection pairs, {} trials (worst R_A={} R_B={} drift={})",
                if report.pass { "PASS" } else { "FAIL" },
                report.max_ttr,
                report.bound,
                report.selection_pairs,
                report.trials,
                report.worst_selected_a,
                report.worst_selected_b,
                report.worst_drift,
            );
            if let Some(path) = &output.out {
                let text = match output.format {
                    FormatArg::Json => {
                        json_pretty(&VerifyDocument {
                            meta: &meta,
                            report: &report,
                        })
                    }
                    FormatArg::Csv => verify_csv(&meta, &report),
                };
                fs::write(path, text).map_err(|e| io_error(path, &e))?;
            }
            Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Simulate { experiment, output } => {
            let cfg = MonteCarloConfig {
                channel_count: experiment.n,
                theta_a: experiment.theta_a,
                theta_b: experiment.theta_b,
                overlap: experiment.g,
                trials: experiment.trials,
                drift_max: experiment.drift_max,
                wildcard: experiment.wildcard.kind(),
                permutation: experiment.perm.kind(),
                master_seed: experiment.seed,
            };
            let stats = sim::monte_carlo(&cfg)?;
            println!(
                "trials={} ettr={:.2} stddev={:.2} ci95=±{:.2} mttr_observed={} \
                 (N={} theta_a={} theta_b={} G={} drift_max={} wildcard={} perm={} seed={})",
                stats.trials,
                stats.ettr,
                stats.ttr_stddev,
                stats.ci95_halfwidth,
                stats.mttr_observed,
                experiment.n,
                experiment.theta_a,
                experiment.theta_b,
                experiment.g,
                experiment.drift_max,
                experiment.wildcard.label(),
                experiment.perm.label(),
                experiment.seed,
            );
            if let Some(path) = &output.out {
                let meta = RunMeta {
                    tool: TOOL_NAME,
                    version: TOOL_VERSION,
                    params: format!(
                        "simulate --n {} --theta-a {} --theta-b {} --g {} --trials {} \
                         --drift-max {} --wildcard {} --perm {} --seed {}",
                        experiment.n,
                        experiment.theta_a,
                        experiment.theta_b,
                        experiment.g,
                        experiment.trials,
                        experiment.drift_max,
                        experiment.wildcard.label(),
                        experiment.perm.label(),
                        experiment.seed,
                    ),
                    master_seed: experiment.seed,
                };
                let rows = vec![sweep_row(
                    "simulate",
                    experiment.g.to_string(),
                    experiment.seed,
                    &stats,
                )];
                write_rows(path, output.format, &meta, &rows)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            scene,
            g,
            n,
            theta_a,
            theta_b,
            trials,
            drift_max,
            seed,
            wildcard,
            perm,
            output,
        } => {
            let cfg = SweepConfig {
                scene,
                overlap: g,
                channel_count: n,
                theta_a,
                theta_b,
                trials,
                drift_max,
                master_seed: seed,
                wildcard: wildcard.kind(),
                permutation: perm.kind(),
            };
            let rows = run_sweep(&cfg)?;
            let meta = RunMeta {
                tool: TOOL_NAME,
                version: TOOL_VERSION,
                params: format!(
                    "sweep --scene {scene}{}{}{}{} --trials {trials} --drift-max {drift_max} \
                     --wildcard {} --perm {} --seed {seed}",
                    opt_flag("--g", &cfg.overlap),
                    opt_flag("--n", &cfg.channel_count),
                    opt_flag("--theta-a", &cfg.theta_a),
                    opt_flag("--theta-b", &cfg.theta_b),
                    wildcard.label(),
                    perm.label(),
                ),
                master_seed: seed,
            };
            println!("{SWEEP_CSV_HEADER}");
            for row in &rows {
                println!("{}", csv_row(row));
            }
            println!(
                "# wildcard={} perm={} drift_max={drift_max}",
                wildcard.label(),
                perm.label()
            );
            if let Some(path) = &output.out {
                write_rows(path, output.format, &meta, &rows)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Properties {
            concat_pairs,
            rotation_ns,
            r_drifts,
            prime_limit,
            coverage_cases,
            output,
        } => {
            let rotation_channel_counts = parse_u32_list(&rotation_ns)?;
            let caps = PropertyCaps {
                concat_pairs,
                rotation_channel_counts,
                r_column_drifts: r_drifts,
                prime_limit,
                coverage_cases,
            };
            let report = sim::run_property_suite(&caps);
            print_property_report(&report);
            if let Some(path) = &output.out {
                let meta = RunMeta {
                    tool: TOOL_NAME,
                    version: TOOL_VERSION,
                    params: format!(
                        "properties --concat-pairs {concat_pairs} --rotation-ns {rotation_ns} \
                         --r-drifts {r_drifts} --prime-limit {prime_limit} --coverage-cases {coverage_cases}"
                    ),
                    master_seed: 0,
                };
                let lines: Vec<PropertyLine> = report
                    .entries
                    .iter()
                    .map(|e| PropertyLine {
                        name: e.name.to_string(),
                        pass: e.outcome.passed(),
                        cases: e.outcome.cases,
                        violation: e.outcome.violation.clone(),
                    })
                    .collect();
                let text = match output.format {
                    FormatArg::Json => json_pretty(&PropertyDocument {
                        meta: &meta,
                        properties: lines,
                    }),
                    FormatArg::Csv => {
                        let mut out = meta_preamble(&meta);
                        out.push_str("name,pass,cases\n");
                        for line in &lines {
                            let _ = writeln!(out, "{},{},{}", line.name, line.pass, line.cases);
                        }
                        out
                    }
                };
                fs::write(path, text).map_err(|e| io_error(path, &e))?;
            }
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

/// Parameters of one sweep invocation.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub scene: u8,
    pub overlap: Option<u32>,
    pub channel_count: Option<u32>,
    pub theta_a: Option<f64>,
    pub theta_b: Option<f64>,
    pub trials: u64,
    pub drift_max: u64,
    pub master_seed: u64,
    pub wildcard: WildcardKind,
    pub permutation: PermKind,
}

/// Runs one experiment scene. Scene 1 sweeps the overlap `G` from 1 to 10 at
/// fixed N=200, θ_A=0.3, θ_B=0.4. Scene 2 sweeps N from 40 to 220 at fixed
/// ratios and explicit `G`. Scene 3 sweeps θ_B from 0.10 to 0.55 at fixed
/// N=200, θ_A=0.1, G=1.
///
/// Every row uses the same master seed, so sweeping a parameter compares
/// matched per-trial randomness.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let base = |theta_a_default: f64, theta_b_default: f64, n_default: u32| MonteCarloConfig {
        channel_count: cfg.channel_count.unwrap_or(n_default),
        theta_a: cfg.theta_a.unwrap_or(theta_a_default),
        theta_b: cfg.theta_b.unwrap_or(theta_b_default),
        overlap: 1,
        trials: cfg.trials,
        drift_max: cfg.drift_max,
        wildcard: cfg.wildcard,
        permutation: cfg.permutation,
        master_seed: cfg.master_seed,
    };
    match cfg.scene {
        1 => {
            if cfg.overlap.is_some() {
                return Err(Error::InfeasibleScenario(
                    "scene 1 sweeps --g; do not fix it".into(),
                ));
            }
            let mc = base(0.3, 0.4, 200);
            (1u32..=10)
                .map(|g| {
                    let stats = sim::monte_carlo(&MonteCarloConfig { overlap: g, ..mc.clone() })?;
                    Ok(sweep_row("scene1", g.to_string(), cfg.master_seed, &stats))
                })
                .collect()
        }
        2 => {
            let overlap = cfg.overlap.ok_or_else(|| {
                Error::InfeasibleScenario("scene 2 requires an explicit --g".into())
            })?;
            if cfg.channel_count.is_some() {
                return Err(Error::InfeasibleScenario(
                    "scene 2 sweeps --n; do not fix it".into(),
                ));
            }
            let mc = base(0.3, 0.4, 0);
            (40u32..=220)
                .step_by(20)
                .map(|n| {
                    let stats = sim::monte_carlo(&MonteCarloConfig {
                        channel_count: n,
                        overlap,
                        ..mc.clone()
                    })?;
                    Ok(sweep_row("scene2", n.to_string(), cfg.master_seed, &stats))
                })
                .collect()
        }
        3 => {
            if cfg.theta_b.is_some() {
                return Err(Error::InfeasibleScenario(
                    "scene 3 sweeps --theta-b; do not fix it".into(),
                ));
            }
            let mc = MonteCarloConfig {
                overlap: cfg.overlap.unwrap_or(1),
                ..base(0.1, 0.0, 200)
            };
            (10u32..=55)
                .step_by(5)
                .map(|percent| {
                    let theta_b = f64::from(percent) / 100.0;
                    let stats = sim::monte_carlo(&MonteCarloConfig { theta_b, ..mc.clone() })?;
                    Ok(sweep_row(
                        "scene3",
                        format!("{theta_b:.2}"),
                        cfg.master_seed,
                        &stats,
                    ))
                })
                .collect()
        }
        other => Err(Error::InfeasibleScenario(format!(
            "unknown scene {other}; expected 1, 2 or 3"
        ))),
    }
}

fn sweep_row(scene: &str, param: String, seed: u64, stats: &SummaryStats) -> SweepRow {
    SweepRow {
        scene: scene.to_string(),
        param,
        trials: stats.trials,
        ettr: stats.ettr,
        mttr_observed: stats.mttr_observed,
        ci95: stats.ci95_halfwidth,
        seed,
    }
}

fn csv_row(row: &SweepRow) -> String {
    format!(
        "{},{},{},{:.6},{},{:.6},{}",
        row.scene, row.param, row.trials, row.ettr, row.mttr_observed, row.ci95, row.seed
    )
}

fn meta_preamble(meta: &RunMeta) -> String {
    format!(
        "# {} {}\n# params: {}\n# master-seed: {}\n",
        meta.tool, meta.version, meta.params, meta.master_seed
    )
}

/// Serializes sweep rows: `#`-prefixed metadata lines, the fixed header, one
/// line per row.
pub fn sweep_csv_text(rows: &[SweepRow], params: &str, master_seed: u64) -> String {
    let meta = RunMeta {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        params: params.to_string(),
        master_seed,
    };
    let mut out = meta_preamble(&meta);
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&csv_row(row));
        out.push('\n');
    }
    out
}

fn write_rows(
    path: &PathBuf,
    format: FormatArg,
    meta: &RunMeta,
    rows: &[SweepRow],
) -> Result<()> {
    let text = match format {
        FormatArg::Csv => {
            let mut out = meta_preamble(meta);
            out.push_str(SWEEP_CSV_HEADER);
            out.push('\n');
            for row in rows {
                out.push_str(&csv_row(row));
                out.push('\n');
            }
            out
        }
        FormatArg::Json => json_pretty(&SweepDocument { meta, rows }),
    };
    fs::write(path, text).map_err(|e| io_error(path, &e))
}

fn verify_csv(meta: &RunMeta, report: &BoundVerification) -> String {
    let mut out = meta_preamble(meta);
    out.push_str("bound,max_ttr,pass,worst_ra,worst_rb,worst_drift,selection_pairs,trials\n");
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        report.bound,
        report.max_ttr,
        report.pass,
        report.worst_selected_a,
        report.worst_selected_b,
        report.worst_drift,
        report.selection_pairs,
        report.trials
    );
    out
}

fn print_property_report(report: &PropertyReport) {
    for entry in &report.entries {
        match &entry.outcome.violation {
            None => println!(
                "PASS {} (cases={})",
                entry.name, entry.outcome.cases
            ),
            Some(violation) => println!(
                "FAIL {} (cases={}): {}",
                entry.name, entry.outcome.cases, violation
            ),
        }
    }
}

fn render_slots(slots: &[subseq::Slot]) -> String {
    let mut out = String::new();
    for (i, slot) in slots.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        match slot {
            subseq::Slot::Fixed(c) => {
                let _ = write!(out, "{c}");
            }
            subseq::Slot::Wildcard => out.push('*'),
        }
    }
    out
}

fn parse_u32_list(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| Error::ChannelSetSyntax(text.to_string()))
        })
        .collect()
}

fn opt_flag<T: std::fmt::Display>(flag: &str, value: &Option<T>) -> String {
    match value {
        Some(v) => format!(" {flag} {v}"),
        None => String::new(),
    }
}

fn json_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable documents");
    text.push('\n');
    text
}

fn io_error(path: &std::path::Path, e: &std::io::Error) -> Error {
    Error::Io(format!("cannot write {}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_scene_validation() {
        let cfg = SweepConfig {
            scene: 2,
            overlap: None,
            channel_count: None,
            theta_a: None,
            theta_b: None,
            trials: 10,
            drift_max: 50,
            master_seed: 0,
            wildcard: WildcardKind::Random,
            permutation: PermKind::Ascending,
        };
        assert!(run_sweep(&cfg).is_err(), "scene 2 needs --g");
        assert!(run_sweep(&SweepConfig { scene: 4, ..cfg.clone() }).is_err());
        assert!(
            run_sweep(&SweepConfig {
                scene: 1,
                overlap: Some(3),
                ..cfg.clone()
            })
            .is_err(),
            "scene 1 sweeps G"
        );
        assert!(
            run_sweep(&SweepConfig {
                scene: 3,
                theta_b: Some(0.2),
                ..cfg
            })
            .is_err(),
            "scene 3 sweeps theta_b"
        );
    }

    #[test]
    fn sweep_rows_are_deterministic() {
        let cfg = SweepConfig {
            scene: 1,
            overlap: None,
            channel_count: Some(40),
            theta_a: Some(0.25),
            theta_b: Some(0.3),
            trials: 50,
            drift_max: 10,
            master_seed: 21,
            wildcard: WildcardKind::Random,
            permutation: PermKind::Ascending,
        };
        let first = run_sweep(&cfg).unwrap();
        let second = run_sweep(&cfg).unwrap();
        let text_a = sweep_csv_text(&first, "test", 21);
        let text_b = sweep_csv_text(&second, "test", 21);
        assert_eq!(text_a, text_b);
        assert_eq!(first.len(), 10);
        assert!(text_a.contains(SWEEP_CSV_HEADER));
    }

    #[test]
    fn csv_header_is_bit_exact() {
        assert_eq!(SWEEP_CSV_HEADER, "scene,param,trials,ettr,mttr_observed,ci95,seed");
        let row = SweepRow {
            scene: "scene1".into(),
            param: "1".into(),
            trials: 10,
            ettr: 12.5,
            mttr_observed: 99,
            ci95: 0.25,
            seed: 7,
        };
        assert_eq!(csv_row(&row), "scene1,1,10,12.500000,99,0.250000,7");
    }

    #[test]
    fn scene3_param_grid_covers_published_points() {
        let cfg = SweepConfig {
            scene: 3,
            overlap: None,
            channel_count: Some(40),
            theta_a: Some(0.1),
            theta_b: None,
            trials: 5,
            drift_max: 5,
            master_seed: 1,
            wildcard: WildcardKind::Random,
            permutation: PermKind::Ascending,
        };
        let rows = run_sweep(&cfg).unwrap();
        let params: Vec<&str> = rows.iter().map(|r| r.param.as_str()).collect();
        assert_eq!(rows.len(), 10);
        assert!(params.contains(&"0.10"));
        assert!(params.contains(&"0.30"));
        assert!(params.contains(&"0.50"));
        assert!(params.contains(&"0.55"));
    }
}
