use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use sha2::{Digest, Sha256};
use slow_scaling::original_time;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum)]
pub enum Experiment {
    Conservation,
    Densities,
    ScalingIdentity,
    Bridge,
    KdvCompare,
    VGrowth,
    Consistency,
    WaveRegime,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Conservation,
        Experiment::Densities,
        Experiment::ScalingIdentity,
        Experiment::Bridge,
        Experiment::KdvCompare,
        Experiment::VGrowth,
        Experiment::Consistency,
        Experiment::WaveRegime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Conservation => "conservation",
            Experiment::Densities => "densities",
            Experiment::ScalingIdentity => "scaling-identity",
            Experiment::Bridge => "bridge",
            Experiment::KdvCompare => "kdv-compare",
            Experiment::VGrowth => "v-growth",
            Experiment::Consistency => "consistency",
            Experiment::WaveRegime => "wave-regime",
        }
    }

    /// Whether the run is parameterized by a list of ε values.
    pub fn sweeps_epsilon(self) -> bool {
        !matches!(self, Experiment::Conservation | Experiment::Densities)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s.trim())
            .ok_or_else(|| anyhow!("unknown experiment '{s}'"))
    }
}

/// Parameters of one run. Lengths and point counts refer to the slow box for the
/// ε experiments and to the original box otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub epsilons: Vec<f64>,
    pub grid_length: f64,
    pub grid_n: usize,
    pub tau_max: f64,
    pub t_max: f64,
    /// GP time step in original time.
    pub dt: f64,
    /// KdV step, and the half-width of centered τ differences.
    pub dtau: f64,
    pub soliton_c: f64,
    pub seed: u64,
    /// Number of randomized fields.
    pub samples: usize,
    pub max_steps: u64,
    /// Bound on `‖N⁰‖_{H³} + ε‖∂⁴N⁰‖ + ‖∂ₓΘ⁰‖_{H³}` accepted by kdv-compare.
    pub k0: f64,
    pub out: PathBuf,
}

const MAX_POINTS: usize = 1 << 20;

impl ExperimentConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let base = ExperimentConfig {
            experiment,
            epsilons: vec![],
            grid_length: 80.0,
            grid_n: 512,
            tau_max: 1.0,
            t_max: 10.0,
            dt: 0.01,
            dtau: 1e-3,
            soliton_c: 1.0,
            seed: 0,
            samples: 20,
            max_steps: 20_000_000,
            k0: 100.0,
            out: PathBuf::from("out").join(experiment.name()),
        };
        match experiment {
            Experiment::Conservation => ExperimentConfig {
                grid_length: 128.0,
                grid_n: 4096,
                dt: 1e-3,
                samples: 1,
                ..base
            },
            Experiment::Densities => ExperimentConfig {
                grid_length: 2.0 * std::f64::consts::PI,
                grid_n: 64,
                samples: 10,
                ..base
            },
            Experiment::ScalingIdentity => ExperimentConfig {
                epsilons: vec![0.5, 0.3, 0.1],
                grid_n: 2048,
                ..base
            },
            Experiment::Bridge => ExperimentConfig {
                epsilons: vec![0.4, 0.3, 0.2, 0.1],
                grid_n: 4096,
                ..base
            },
            Experiment::KdvCompare => ExperimentConfig {
                epsilons: vec![0.4, 0.3, 0.2, 0.15, 0.1],
                dt: 0.005,
                ..base
            },
            Experiment::VGrowth => ExperimentConfig { epsilons: vec![0.4, 0.3, 0.2], tau_max: 2.0, ..base },
            Experiment::Consistency => ExperimentConfig {
                epsilons: vec![0.4, 0.3, 0.2, 0.1],
                tau_max: 2.0,
                ..base
            },
            Experiment::WaveRegime => ExperimentConfig {
                epsilons: vec![0.4, 0.3, 0.2],
                grid_length: 160.0,
                tau_max: 0.1,
                dt: 0.02,
                ..base
            },
        }
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let num = |v: &str| v.parse::<f64>().with_context(|| format!("{key}: '{v}' is not a number"));
        match key.trim() {
            "experiment" => self.experiment = v.parse()?,
            "epsilon" | "epsilons" => {
                self.epsilons = v
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| num(s.trim()))
                    .collect::<Result<_>>()?
            }
            "grid_length" => self.grid_length = num(v)?,
            "grid_n" => self.grid_n = v.parse().with_context(|| format!("grid_n: '{v}'"))?,
            "tau_max" => self.tau_max = num(v)?,
            "t_max" => self.t_max = num(v)?,
            "dt" => self.dt = num(v)?,
            "dtau" => self.dtau = num(v)?,
            "soliton_c" => self.soliton_c = num(v)?,
            "seed" => self.seed = v.parse().with_context(|| format!("seed: '{v}'"))?,
            "samples" => self.samples = v.parse().with_context(|| format!("samples: '{v}'"))?,
            "max_steps" => self.max_steps = v.parse().with_context(|| format!("max_steps: '{v}'"))?,
            "k0" => self.k0 = num(v)?,
            "out" => self.out = PathBuf::from(v),
            other => bail!("unknown configuration key '{other}'"),
        }
        Ok(())
    }

    /// Defaults of the experiment named in `text` (or `fallback`), then every setting.
    pub fn from_text(text: &str, fallback: Experiment) -> Result<Self> {
        let pairs = parse_flat(text)?;
        let exp = match pairs.iter().find(|(k, _)| k == "experiment") {
            Some((_, v)) => v.parse()?,
            None => fallback,
        };
        let mut cfg = Self::defaults(exp);
        for (k, v) in &pairs {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.grid_n.is_power_of_two() || self.grid_n < 8 {
            bail!("grid_n must be a power of two >= 8, got {}", self.grid_n);
        }
        if self.grid_n > MAX_POINTS {
            bail!("grid_n {} exceeds the memory guard {MAX_POINTS}", self.grid_n);
        }
        for (name, v) in [
            ("grid_length", self.grid_length),
            ("tau_max", self.tau_max),
            ("t_max", self.t_max),
            ("dt", self.dt),
            ("dtau", self.dtau),
            ("k0", self.k0),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                bail!("{name} must be positive, got {v}");
            }
        }
        if !(0.0..std::f64::consts::SQRT_2).contains(&self.soliton_c) {
            bail!("soliton_c must lie in [0, sqrt 2), got {}", self.soliton_c);
        }
        if self.samples == 0 {
            bail!("samples must be positive");
        }
        if self.experiment.sweeps_epsilon() {
            if self.epsilons.is_empty() {
                bail!("{} needs at least one epsilon", self.experiment);
            }
            if let Some(e) = self.epsilons.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
                bail!("epsilon values must lie in (0, 1), got {e}");
            }
            if self.epsilons.windows(2).any(|w| w[1] >= w[0]) {
                bail!("epsilon values must be strictly decreasing");
            }
            let smallest = *self.epsilons.last().expect("non-empty");
            let span = match self.experiment {
                Experiment::WaveRegime => self.tau_max / smallest.powi(3),
                Experiment::Bridge | Experiment::ScalingIdentity => 0.0,
                _ => original_time(smallest, self.tau_max),
            };
            let steps = span / self.dt;
            if steps > self.max_steps as f64 {
                bail!(
                    "epsilon {smallest} needs {steps:.3e} GP steps, above the budget of {} (raise dt or max_steps)",
                    self.max_steps
                );
            }
            let points = self.grid_n as f64;
            if points > MAX_POINTS as f64 {
                bail!("original grid too large for epsilon {smallest}");
            }
        } else if self.experiment == Experiment::Conservation && self.t_max / self.dt > self.max_steps as f64 {
            bail!("t_max / dt exceeds the step budget of {}", self.max_steps);
        }
        Ok(())
    }

    /// Canonical `(key, value)` listing used for the summary and the hash.
    pub fn echo(&self) -> Vec<(String, String)> {
        let eps: Vec<String> = self.epsilons.iter().map(|e| format!("{e}")).collect();
        vec![
            ("experiment".into(), self.experiment.name().into()),
            ("epsilon".into(), eps.join(",")),
            ("grid_length".into(), format!("{}", self.grid_length)),
            ("grid_n".into(), self.grid_n.to_string()),
            ("tau_max".into(), format!("{}", self.tau_max)),
            ("t_max".into(), format!("{}", self.t_max)),
            ("dt".into(), format!("{}", self.dt)),
            ("dtau".into(), format!("{}", self.dtau)),
            ("soliton_c".into(), format!("{}", self.soliton_c)),
            ("seed".into(), self.seed.to_string()),
            ("samples".into(), self.samples.to_string()),
            ("max_steps".into(), self.max_steps.to_string()),
            ("k0".into(), format!("{}", self.k0)),
        ]
    }

    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in self.echo() {
            h.update(k.as_bytes());
            h.update(b"=");
            h.update(v.as_bytes());
            h.update(b"\n");
        }
        format!("{:x}", h.finalize())
    }
}

/// `key = value` lines; `#` starts a comment.
pub fn parse_flat(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected 'key = value', got '{raw}'", i + 1))?;
        let k = k.trim();
        if k.is_empty() {
            bail!("line {}: empty key", i + 1);
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Command-line settings layered over the defaults and the config file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub epsilons: Option<Vec<f64>>,
    pub tau_max: Option<f64>,
    pub grid_n: Option<usize>,
    pub grid_length: Option<f64>,
    pub dt: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(e) = &self.epsilons {
            cfg.epsilons = e.clone();
        }
        if let Some(v) = self.tau_max {
            cfg.tau_max = v;
        }
        if let Some(v) = self.grid_n {
            cfg.grid_n = v;
        }
        if let Some(v) = self.grid_length {
            cfg.grid_length = v;
        }
        if let Some(v) = self.dt {
            cfg.dt = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.out {
            cfg.out = v.clone();
        }
    }

    /// Settings that only make sense for a single experiment.
    pub fn has_physics(&self) -> bool {
        self.epsilons.is_some()
            || self.tau_max.is_some()
            || self.grid_n.is_some()
            || self.grid_length.is_some()
            || self.dt.is_some()
    }
}

/// Defaults, then the file (if any), then the overrides. The file may not name a
/// different experiment.
pub fn resolve(experiment: Experiment, file: Option<&str>, overrides: &Overrides) -> Result<ExperimentConfig> {
    let mut cfg = match file {
        Some(text) => ExperimentConfig::from_text(text, experiment)?,
        None => ExperimentConfig::defaults(experiment),
    };
    if cfg.experiment != experiment {
        bail!("config file is for '{}', not '{experiment}'", cfg.experiment);
    }
    overrides.apply(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}
