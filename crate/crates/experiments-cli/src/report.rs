use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use spectral_core::loglog_slope;

use crate::config::ExperimentConfig;

/// One `(ε, τ, value)` sample with optional trailing columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub epsilon: f64,
    pub tau: f64,
    pub value: f64,
    pub extra: Vec<f64>,
}

impl Row {
    pub fn new(epsilon: f64, tau: f64, value: f64) -> Self {
        Row { epsilon, tau, value, extra: Vec::new() }
    }

    pub fn with(mut self, extra: impl IntoIterator<Item = f64>) -> Self {
        self.extra.extend(extra);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub extra: Vec<String>,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn new(name: impl Into<String>, extra: &[&str]) -> Self {
        Table { name: name.into(), extra: extra.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Row) {
        debug_assert_eq!(row.extra.len(), self.extra.len(), "table {}", self.name);
        self.rows.push(row);
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["epsilon".to_string(), "tau".to_string(), "value".to_string()];
        h.extend(self.extra.iter().cloned());
        h
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
        w.write_record(self.header())?;
        for r in &self.rows {
            let mut rec = vec![num(r.epsilon), num(r.tau), num(r.value)];
            rec.extend(r.extra.iter().map(|&v| num(v)));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub name: String,
    pub slope: f64,
    /// rms residual of the log-log fit
    pub residual: f64,
    /// standard error of the slope
    pub width: f64,
    pub points: usize,
}

impl SlopeFit {
    /// Least squares on `ln y` against `ln x`; `None` below four points or for
    /// nonpositive data.
    pub fn fit(name: impl Into<String>, x: &[f64], y: &[f64]) -> Option<SlopeFit> {
        let m = x.len();
        if m < 4 || m != y.len() || x.iter().chain(y).any(|v| !(*v > 0.0 && v.is_finite())) {
            return None;
        }
        let (slope, residual) = loglog_slope(x, y);
        let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        let mean = lx.iter().sum::<f64>() / m as f64;
        let sxx: f64 = lx.iter().map(|a| (a - mean).powi(2)).sum();
        let width = (residual * residual * m as f64 / (m - 2) as f64 / sxx).sqrt();
        Some(SlopeFit { name: name.into(), slope, residual, width, points: m })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub tolerance: f64,
    /// Non-gating verdicts are reported but do not decide the run.
    pub gating: bool,
}

impl Verdict {
    /// `measured ≤ tolerance`
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Verdict { name: name.into(), pass: measured <= tolerance, measured, tolerance, gating: true }
    }

    /// `|measured - target| ≤ tolerance`, recorded as the deviation.
    pub fn within(name: impl Into<String>, measured: f64, target: f64, tolerance: f64) -> Self {
        let dev = (measured - target).abs();
        Verdict { name: name.into(), pass: dev <= tolerance, measured, tolerance, gating: true }
    }

    /// `measured ≥ bound`
    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Verdict { name: name.into(), pass: measured >= bound, measured, tolerance: bound, gating: true }
    }

    pub fn informational(mut self) -> Self {
        self.gating = false;
        self
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub tables: Vec<Table>,
    pub slopes: Vec<SlopeFit>,
    pub verdicts: Vec<Verdict>,
    pub info: BTreeMap<String, f64>,
    pub wall_clock: f64,
}

#[derive(Serialize)]
struct Summary<'a> {
    run: RunSection<'a>,
    config: BTreeMap<String, String>,
    verdict: &'a [Verdict],
    slope: &'a [SlopeFit],
    info: &'a BTreeMap<String, f64>,
    table: Vec<TableEntry>,
}

#[derive(Serialize)]
struct RunSection<'a> {
    experiment: &'a str,
    config_hash: String,
    pass: bool,
    wall_clock_seconds: f64,
}

#[derive(Serialize)]
struct TableEntry {
    name: String,
    file: String,
    rows: usize,
}

impl ExperimentReport {
    pub fn new(config: &ExperimentConfig) -> Self {
        ExperimentReport {
            config: config.clone(),
            tables: Vec::new(),
            slopes: Vec::new(),
            verdicts: Vec::new(),
            info: BTreeMap::new(),
            wall_clock: 0.0,
        }
    }

    /// Every gating verdict holds.
    pub fn passed(&self) -> bool {
        self.verdicts.iter().filter(|v| v.gating).all(|v| v.pass)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn slope(&self, name: &str) -> Option<&SlopeFit> {
        self.slopes.iter().find(|s| s.name == name)
    }

    pub fn info(&mut self, key: impl Into<String>, value: f64) {
        self.info.insert(key.into(), value);
    }

    pub fn summary_toml(&self) -> Result<String> {
        let s = Summary {
            run: RunSection {
                experiment: self.config.experiment.name(),
                config_hash: self.config.hash(),
                pass: self.passed(),
                wall_clock_seconds: self.wall_clock,
            },
            config: self.config.echo().into_iter().collect(),
            verdict: &self.verdicts,
            slope: &self.slopes,
            info: &self.info,
            table: self
                .tables
                .iter()
                .map(|t| TableEntry { name: t.name.clone(), file: format!("{}.csv", t.name), rows: t.rows.len() })
                .collect(),
        };
        Ok(toml::to_string(&s)?)
    }

    /// Writes `<name>.csv` per table and `summary.toml` into `dir`; returns the paths.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut out = Vec::new();
        for t in &self.tables {
            if t.name.contains(['/', '\\']) || t.name.starts_with('.') {
                bail!("table name '{}' would leave the output directory", t.name);
            }
            let p = dir.join(format!("{}.csv", t.name));
            t.write_csv(&p)?;
            out.push(p);
        }
        let p = dir.join("summary.toml");
        fs::write(&p, self.summary_toml()?).with_context(|| format!("writing {}", p.display()))?;
        out.push(p);
        Ok(out)
    }
}
