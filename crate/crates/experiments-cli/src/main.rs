use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use experiments_cli::config::{resolve, Overrides};
use experiments_cli::{run, Experiment, ExperimentReport};

#[derive(Parser)]
#[command(name = "gpkdv", version, about = "Gross-Pitaevskii / KdV long-wave experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariant drift along a dark-soliton run
    Conservation(RunArgs),
    /// Explicit vs recursive densities and renormalization chains
    Densities(RunArgs),
    /// GP invariants against their rescaled slow counterparts
    ScalingIdentity(RunArgs),
    /// Gap between slow combinations and KdV functionals
    Bridge(RunArgs),
    /// GP slow fields against KdV solutions
    KdvCompare(RunArgs),
    /// Growth of the counter-propagating component
    VGrowth(RunArgs),
    /// KdV residual of the GP slow fields
    Consistency(RunArgs),
    /// Lab-frame fields against the free wave equation
    WaveRegime(RunArgs),
    /// Every experiment with its defaults, one subdirectory each
    All(RunArgs),
}

#[derive(Args, Clone, Default)]
struct RunArgs {
    /// Flat `key = value` configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated, strictly decreasing
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<f64>>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    grid_n: Option<usize>,
    #[arg(long)]
    grid_length: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (defaults to the number of cores)
    #[arg(long)]
    threads: Option<usize>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            epsilons: self.epsilon.clone(),
            tau_max: self.tau_max,
            grid_n: self.grid_n,
            grid_length: self.grid_length,
            dt: self.dt,
            seed: self.seed,
            out: self.out.clone(),
        }
    }
}

fn print_report(r: &ExperimentReport) {
    println!("[{}] config {}", r.config.experiment, &r.config.hash()[..16]);
    for v in &r.verdicts {
        let tag = match (v.pass, v.gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "info",
        };
        println!("  {tag} {}: {:.6e} (tolerance {:.3e})", v.name, v.measured, v.tolerance);
    }
    for s in &r.slopes {
        println!("  slope {}: {:.4} +/- {:.4} ({} points)", s.name, s.slope, s.width, s.points);
    }
    println!("  wall clock {:.2} s, written to {}", r.wall_clock, r.config.out.display());
}

fn execute(experiment: Experiment, args: &RunArgs, out: Option<PathBuf>) -> Result<bool> {
    let text = match &args.config {
        Some(p) => Some(std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?),
        None => None,
    };
    let mut ov = args.overrides();
    if out.is_some() {
        ov.out = out;
    }
    let cfg = resolve(experiment, text.as_deref(), &ov)?;
    let report = run(&cfg)?;
    report.write(&cfg.out)?;
    print_report(&report);
    Ok(report.passed())
}

fn main_inner(cli: Cli) -> Result<bool> {
    let (single, args) = match &cli.command {
        Command::Conservation(a) => (Some(Experiment::Conservation), a),
        Command::Densities(a) => (Some(Experiment::Densities), a),
        Command::ScalingIdentity(a) => (Some(Experiment::ScalingIdentity), a),
        Command::Bridge(a) => (Some(Experiment::Bridge), a),
        Command::KdvCompare(a) => (Some(Experiment::KdvCompare), a),
        Command::VGrowth(a) => (Some(Experiment::VGrowth), a),
        Command::Consistency(a) => (Some(Experiment::Consistency), a),
        Command::WaveRegime(a) => (Some(Experiment::WaveRegime), a),
        Command::All(a) => (None, a),
    };
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match single {
        Some(e) => execute(e, args, None),
        None => {
            if args.overrides().has_physics() || args.config.is_some() {
                bail!("`all` accepts only --out, --seed and --threads");
            }
            let base = args.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            let mut ok = true;
            for e in Experiment::ALL {
                ok &= execute(e, args, Some(base.join(e.name())))?;
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
