use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use arc_phase::estimate::{heisenberg_epsilon, sample_budget};
use arc_phase::fisher::info_curve;
use arc_phase::harness::output::{self, Manifest};
use arc_phase::harness::{self, ExperimentConfig, ThetaSource};
use arc_phase::refine::refine_arcs;
use arc_phase::{Angle, Arc, NoiseModel};

const DEFAULT_TRIALS: u64 = 10_000;
const FULL_TRIALS: u64 = 100_000;

#[derive(Parser)]
#[command(
    name = "arc-phase",
    version,
    about = "Iterative phase estimation with confidence arcs"
)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the estimator on simulated data and print one row per trial.
    Simulate {
        /// True phase in [0, 1), or `random`.
        #[arg(long, default_value = "random")]
        theta: String,
        #[arg(long)]
        stages: u32,
        /// Measurements per stage, split between x and y.
        #[arg(long)]
        ntot: u64,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        /// Write CSV here (plus a manifest beside it) instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Noiseless coverage grid: N_tot in {20,30,40,50}, l in {6..9}.
    Table1 {
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        /// Use 100,000 trials per cell.
        #[arg(long, conflicts_with = "trials")]
        full: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Noisy coverage grid at N_tot = 30: r in {2^-4..2^-8}, l in {4..9}.
    Table2 {
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, conflicts_with = "trials")]
        full: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean fidelity cost against channel uses with epsilon = 2^-2l.
    Scaling {
        #[arg(long, default_value_t = 3)]
        lmin: u32,
        #[arg(long)]
        lmax: u32,
        #[arg(long, default_value_t = 2_000)]
        trials: u64,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-use SLD and Fisher information by stage.
    Fisher {
        #[arg(long)]
        noise: f64,
        #[arg(long)]
        kmax: u32,
    },
    /// Measurements needed per stage for coverage 1 - epsilon.
    Samplesize {
        #[arg(long)]
        stages: u32,
        /// Defaults to 2^-2l.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Fold measured stage arcs from a JSON file into a final arc.
    Refine {
        #[arg(long)]
        input: PathBuf,
    },
}

/// `{"width": 0.3333, "lowers": [x1, x2, ...]}`
#[derive(Deserialize)]
struct RefineInput {
    width: f64,
    lowers: Vec<f64>,
}

fn emit(out: Option<PathBuf>, csv: &str, manifest: Manifest) -> Result<()> {
    match out {
        Some(path) => {
            let m = output::write_results(&path, csv, &manifest)
                .with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {} and {}", path.display(), m.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn trials_or_full(trials: u64, full: bool) -> u64 {
    if full {
        FULL_TRIALS
    } else {
        trials
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Simulate {
            theta,
            stages,
            ntot,
            noise,
            seed,
            trials,
            out,
        } => {
            let source = if theta == "random" {
                ThetaSource::Uniform
            } else {
                let v: f64 = theta
                    .parse()
                    .with_context(|| format!("bad --theta {theta:?}"))?;
                ThetaSource::Fixed(Angle::try_new(v)?)
            };
            let cfg = ExperimentConfig::new(stages, ntot, NoiseModel::new(noise)?, trials, seed)
                .with_theta(source);
            let outcomes = harness::run_trials(&cfg)?;
            let hits = outcomes.iter().filter(|o| o.hit).count() as u64;
            let report = harness::CoverageReport::from_hits(stages, trials, hits);
            eprintln!("{}", output::report_summary(&report));
            let manifest = Manifest::new("simulate", seed)
                .with("theta", theta)
                .with("stages", stages)
                .with("ntot", ntot)
                .with("noise", noise)
                .with("trials", trials);
            emit(out, &output::trials_csv(&outcomes), manifest)
        }
        Command::Table1 {
            trials,
            full,
            seed,
            out,
        } => {
            let trials = trials_or_full(trials, full);
            let cells = harness::table1(trials, seed)?;
            let manifest = Manifest::new("table1", seed).with("trials", trials);
            emit(out, &output::table1_csv(&cells), manifest)
        }
        Command::Table2 {
            trials,
            full,
            seed,
            out,
        } => {
            let trials = trials_or_full(trials, full);
            let cells = harness::table2(trials, seed)?;
            let manifest = Manifest::new("table2", seed)
                .with("trials", trials)
                .with("ntot", harness::TABLE2_TOTAL);
            emit(out, &output::table2_csv(&cells), manifest)
        }
        Command::Scaling {
            lmin,
            lmax,
            trials,
            noise,
            seed,
            out,
        } => {
            if lmin == 0 || lmin > lmax {
                bail!("need 1 <= lmin <= lmax, got lmin={lmin} lmax={lmax}");
            }
            let rows =
                harness::scaling_experiment(lmin..=lmax, trials, NoiseModel::new(noise)?, seed)?;
            if let Some(slope) = harness::heisenberg_slope(&rows) {
                eprintln!("log-log slope of cost/(ln n)^2 vs n: {slope:.3}");
            }
            let manifest = Manifest::new("scaling", seed)
                .with("lmin", lmin)
                .with("lmax", lmax)
                .with("trials", trials)
                .with("noise", noise);
            emit(out, &output::scaling_csv(&rows), manifest)
        }
        Command::Fisher { noise, kmax } => {
            print!("{}", output::fisher_csv(&info_curve(noise, kmax)?));
            Ok(())
        }
        Command::Samplesize { stages, epsilon } => {
            let eps = epsilon.unwrap_or_else(|| heisenberg_epsilon(stages));
            let b = sample_budget(stages, eps)?;
            println!("stages,epsilon,n_per_basis,n_total_per_stage,channel_uses");
            println!(
                "{},{},{},{},{}",
                b.stages,
                b.epsilon,
                b.per_basis,
                b.total_per_stage,
                b.channel_uses()
            );
            Ok(())
        }
        Command::Refine { input } => {
            let text = fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let parsed: RefineInput =
                serde_json::from_str(&text).context("parsing refine input")?;
            let arcs = parsed
                .lowers
                .iter()
                .map(|&x| Arc::new(x, parsed.width))
                .collect::<arc_phase::Result<Vec<_>>>()?;
            let (estimate, arc) = refine_arcs(&arcs)?;
            let report = json!({
                "stages": arcs.len(),
                "lower": arc.lower().value(),
                "upper": arc.upper(),
                "width": arc.width(),
                "estimate": estimate.value(),
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring thread pool")?;
    }
    run(cli.command)
}
