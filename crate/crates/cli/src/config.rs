use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use clap::ValueEnum;
use serde::Serialize;

use projsphere::algebra::{AlgebraDescriptor, MAX_DIM};

/// Environment variable for the worker-pool size.
pub const WORKER_VAR: &str = "PROJSPHERE_WORKERS";

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<projsphere::Error> for ConfigError {
    fn from(e: projsphere::Error) -> Self {
        ConfigError(e.to_string())
    }
}

impl From<std::io::Error> for ConfigError {
    fn from(e: std::io::Error) -> Self {
        ConfigError(e.to_string())
    }
}

pub fn config_error<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum AlgebraKind {
    FullMatrix,
    SymmetricJordan,
    Diagonal,
}

impl AlgebraKind {
    pub fn build(self, n: usize) -> projsphere::Result<Arc<AlgebraDescriptor>> {
        match self {
            AlgebraKind::FullMatrix => AlgebraDescriptor::full_matrix(n),
            AlgebraKind::SymmetricJordan => AlgebraDescriptor::symmetric_jordan(n),
            AlgebraKind::Diagonal => AlgebraDescriptor::diagonal(n),
        }
    }
}

/// Dimension list: comma-separated entries, each `n` or an inclusive range
/// `a..b` (also `a-b`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Dims(pub Vec<usize>);

impl FromStr for Dims {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let bounds = part.split_once("..").or_else(|| part.split_once('-'));
            let (lo, hi) = match bounds {
                Some((a, b)) => (parse_dim(a)?, parse_dim(b.trim_start_matches('='))?),
                None => {
                    let n = parse_dim(part)?;
                    (n, n)
                }
            };
            if lo > hi {
                return Err(format!("empty range {part}"));
            }
            out.extend(lo..=hi);
        }
        if out.is_empty() {
            return Err("no dimensions given".into());
        }
        out.sort_unstable();
        out.dedup();
        Ok(Dims(out))
    }
}

fn parse_dim(s: &str) -> Result<usize, String> {
    let n: usize = s.trim().parse().map_err(|_| format!("bad dimension {s:?}"))?;
    if n == 0 || n > MAX_DIM {
        return Err(format!("dimension {n} outside 1..={MAX_DIM}"));
    }
    Ok(n)
}

/// Sizes the global rayon pool from the environment.
pub fn init_workers() -> Result<(), ConfigError> {
    let Ok(raw) = std::env::var(WORKER_VAR) else {
        return Ok(());
    };
    let workers: usize = match raw.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return config_error(format!("worker count must be a positive integer, got {raw:?}")),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| ConfigError(e.to_string()))
}

pub fn check_tolerances(tol: f64, margin: f64) -> Result<(), ConfigError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return config_error(format!("tol must be positive and finite, got {tol}"));
    }
    if !(margin > 0.0 && margin.is_finite()) {
        return config_error(format!("margin must be positive and finite, got {margin}"));
    }
    if tol > margin {
        return config_error(format!("tol ({tol}) must not exceed margin ({margin})"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_parse() {
        assert_eq!("2..4".parse::<Dims>().unwrap().0, vec![2, 3, 4]);
        assert_eq!("2-3,6".parse::<Dims>().unwrap().0, vec![2, 3, 6]);
        assert_eq!("5, 2".parse::<Dims>().unwrap().0, vec![2, 5]);
        assert_eq!("1..=2".parse::<Dims>().unwrap().0, vec![1, 2]);
        assert!("0".parse::<Dims>().is_err());
        assert!("4..2".parse::<Dims>().is_err());
        assert!("".parse::<Dims>().is_err());
        assert!("x".parse::<Dims>().is_err());
    }

    #[test]
    fn tolerance_rules() {
        assert!(check_tolerances(1e-9, 1e-6).is_ok());
        assert!(check_tolerances(1e-3, 1e-6).is_err());
        assert!(check_tolerances(0.0, 1e-6).is_err());
    }
}
