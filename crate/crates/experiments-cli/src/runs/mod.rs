use std::time::Instant;

use anyhow::Result;

use crate::config::{Experiment, ExperimentConfig};
use crate::report::ExperimentReport;

mod flows;
mod invariants;

pub use flows::{run_consistency, run_kdv_compare, run_v_growth, run_wave_regime};
pub use invariants::{run_bridge, run_conservation, run_densities, run_scaling_identity};

/// Validates `config`, runs its experiment and stamps the wall-clock time.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let start = Instant::now();
    let mut report = match config.experiment {
        Experiment::Conservation => run_conservation(config),
        Experiment::Densities => run_densities(config),
        Experiment::ScalingIdentity => run_scaling_identity(config),
        Experiment::Bridge => run_bridge(config),
        Experiment::KdvCompare => run_kdv_compare(config),
        Experiment::VGrowth => run_v_growth(config),
        Experiment::Consistency => run_consistency(config),
        Experiment::WaveRegime => run_wave_regime(config),
    }?;
    report.wall_clock = start.elapsed().as_secs_f64();
    Ok(report)
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}
