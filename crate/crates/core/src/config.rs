//! Run configuration shared by the command-line front end: built-in
//! defaults, then an optional JSON file, then explicit flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::LocalHamiltonian;
use crate::minima::ScanOptions;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("invalid value: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(ConfigError::Invalid(format!(
                "format must be csv or json, got {s:?}"
            ))),
        }
    }
}

/// Every setting optional, as read from `--config` or collected from flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub hamiltonian: Option<String>,
    pub scan_step: Option<f64>,
    pub refine_tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub c_bins: Option<usize>,
    pub f_bins: Option<usize>,
    pub min_count: Option<usize>,
}

impl ConfigOverrides {
    pub fn from_json_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Json {
            path: path.to_owned(),
            source,
        })
    }

    /// Fields set in `other` replace those in `self`.
    pub fn merged(self, other: ConfigOverrides) -> Self {
        Self {
            seed: other.seed.or(self.seed),
            samples: other.samples.or(self.samples),
            hamiltonian: other.hamiltonian.or(self.hamiltonian),
            scan_step: other.scan_step.or(self.scan_step),
            refine_tol: other.refine_tol.or(self.refine_tol),
            out: other.out.or(self.out),
            format: other.format.or(self.format),
            workers: other.workers.or(self.workers),
            c_bins: other.c_bins.or(self.c_bins),
            f_bins: other.f_bins.or(self.f_bins),
            min_count: other.min_count.or(self.min_count),
        }
    }
}

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_BINS: usize = 20;
pub const DEFAULT_MIN_COUNT: usize = 50;

/// Where a run writes its table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Output {
    /// No `--out` given.
    None,
    /// `--out -`.
    Stdout,
    File(PathBuf),
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: u64,
    pub hamiltonian: LocalHamiltonian,
    pub scan_step: f64,
    pub refine_tol: f64,
    pub out: Output,
    pub format: Format,
    pub workers: usize,
    pub c_bins: usize,
    pub f_bins: usize,
    pub min_count: usize,
}

impl RunConfig {
    /// Fills unset fields from the defaults and checks that every number is positive.
    pub fn resolve(
        o: ConfigOverrides,
        default_samples: u64,
        default_hamiltonian: LocalHamiltonian,
    ) -> Result<Self, ConfigError> {
        let scan = ScanOptions::default();
        let hamiltonian = match o.hamiltonian {
            Some(s) => s
                .parse()
                .map_err(|e| ConfigError::Invalid(format!("hamiltonian {s:?}: {e}")))?,
            None => default_hamiltonian,
        };
        let out = match o.out {
            None => Output::None,
            Some(p) if p.as_os_str() == "-" => Output::Stdout,
            Some(p) => Output::File(p),
        };
        let cfg = Self {
            seed: o.seed.unwrap_or(DEFAULT_SEED),
            samples: o.samples.unwrap_or(default_samples),
            hamiltonian,
            scan_step: o.scan_step.unwrap_or(scan.scan_step),
            refine_tol: o.refine_tol.unwrap_or(scan.refine_tol),
            out,
            format: o.format.unwrap_or_default(),
            workers: o.workers.unwrap_or_else(default_workers),
            c_bins: o.c_bins.unwrap_or(DEFAULT_BINS),
            f_bins: o.f_bins.unwrap_or(DEFAULT_BINS),
            min_count: o.min_count.unwrap_or(DEFAULT_MIN_COUNT),
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), ConfigError> {
        let positive = [
            ("samples", self.samples as f64),
            ("scan-step", self.scan_step),
            ("refine-tol", self.refine_tol),
            ("workers", self.workers as f64),
            ("c-bins", self.c_bins as f64),
            ("f-bins", self.f_bins as f64),
            ("min-count", self.min_count as f64),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::Invalid(format!(
                    "--{name} must be positive, got {v}"
                )));
            }
        }
        if self.out == Output::Stdout && self.format == Format::Csv {
            return Err(ConfigError::Invalid(
                "standard output only carries JSON: use --format json with --out -, or give a file path".into(),
            ));
        }
        Ok(())
    }

    pub fn scan(&self) -> ScanOptions {
        ScanOptions {
            scan_step: self.scan_step,
            refine_tol: self.refine_tol,
            ..ScanOptions::default()
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file_cfg() -> ConfigOverrides {
        serde_json::from_str(r#"{"seed": 9, "samples": 50, "format": "json", "out": "x.json"}"#)
            .unwrap()
    }

    #[test]
    fn flags_override_file_which_overrides_defaults() {
        let flags = ConfigOverrides {
            samples: Some(7),
            ..Default::default()
        };
        let cfg =
            RunConfig::resolve(file_cfg().merged(flags), 1000, LocalHamiltonian::h_i()).unwrap();
        assert_eq!((cfg.seed, cfg.samples, cfg.format), (9, 7, Format::Json));
        assert_eq!(cfg.min_count, DEFAULT_MIN_COUNT);
        assert_eq!(cfg.out, Output::File("x.json".into()));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(serde_json::from_str::<ConfigOverrides>(r#"{"sead": 1}"#).is_err());
        let bad = ConfigOverrides {
            scan_step: Some(-1.0),
            ..Default::default()
        };
        assert!(RunConfig::resolve(bad, 1, LocalHamiltonian::h_i()).is_err());
        let stdout_csv = ConfigOverrides {
            out: Some("-".into()),
            ..Default::default()
        };
        assert!(RunConfig::resolve(stdout_csv, 1, LocalHamiltonian::h_i()).is_err());
        let h = ConfigOverrides {
            hamiltonian: Some("custom:2,1".into()),
            ..Default::default()
        };
        assert_eq!(
            RunConfig::resolve(h, 1, LocalHamiltonian::h_i())
                .unwrap()
                .hamiltonian,
            LocalHamiltonian::h_ii()
        );
    }
}
