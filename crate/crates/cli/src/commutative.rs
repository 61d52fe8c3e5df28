use rand::Rng;
use serde::Serialize;

use projsphere::random::{seeded_rng, stream_id};
use projsphere::sphere::{commutative_double_sph, second_member, MAX_GRID_DIM, MAX_GRID_RES};

use crate::config::{config_error, ConfigError, Dims};
use crate::report::{fmt_vec, Report, SCHEMA_VERSION};

/// Members listed per row.
pub const MEMBER_CAP: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct CommutativeConfig {
    pub seed: u64,
    pub dims: Dims,
    pub count: usize,
    pub grid_res: usize,
}

impl CommutativeConfig {
    pub fn new(seed: u64, dims: Dims, count: usize, grid_res: usize) -> Result<Self, ConfigError> {
        if let Some(&n) = dims.0.iter().find(|&&n| n > MAX_GRID_DIM) {
            return config_error(format!("grid too fine: dimension {n} exceeds {MAX_GRID_DIM}"));
        }
        if grid_res == 0 || grid_res > MAX_GRID_RES {
            return config_error(format!("grid too fine: resolution {grid_res} outside 1..={MAX_GRID_RES}"));
        }
        Ok(Self {
            seed,
            dims,
            count,
            grid_res,
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Projection,
    NonProjection,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutativeRow {
    pub dim: usize,
    pub kind: Kind,
    pub target: Vec<f64>,
    pub member_count: usize,
    pub singleton: bool,
    /// First members in grid order, at most [`MEMBER_CAP`].
    pub members: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_member: Option<Vec<f64>>,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutativeSummary {
    pub projections: usize,
    pub non_projections: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutativeReport {
    pub schema: u32,
    pub command: &'static str,
    pub config: CommutativeConfig,
    pub rows: Vec<CommutativeRow>,
    pub summary: CommutativeSummary,
}

fn row(a: Vec<f64>, kind: Kind, grid_res: usize) -> Result<CommutativeRow, ConfigError> {
    let d = commutative_double_sph(&a, grid_res)?;
    let second = second_member(&a)?;
    let singleton = d.is_singleton();
    let ok = d.contains(&a)
        && match kind {
            Kind::Projection => singleton,
            Kind::NonProjection => !singleton && second.as_ref().is_some_and(|x| d.contains(x) && *x != a),
        };
    Ok(CommutativeRow {
        dim: a.len(),
        kind,
        member_count: d.len(),
        singleton,
        members: d.iter().take(MEMBER_CAP).collect(),
        second_member: second,
        target: a,
        ok,
    })
}

/// A grid point of the positive unit sphere with an interior coordinate.
fn sample_non_projection<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<f64> {
    let mut a: Vec<f64> = (0..n).map(|_| rng.random_range(0..=k) as f64 / k as f64).collect();
    let top = rng.random_range(0..n);
    a[top] = 1.0;
    if a.iter().all(|&v| v == 0.0 || v == 1.0) {
        let j = (top + 1 + rng.random_range(0..n - 1)) % n;
        a[j] = rng.random_range(1..k) as f64 / k as f64;
    }
    a
}

pub fn run(cfg: &CommutativeConfig) -> Result<CommutativeReport, ConfigError> {
    let mut rows = Vec::new();
    for &n in &cfg.dims.0 {
        for mask in 1..(1usize << n) {
            let p = (0..n).map(|i| ((mask >> i) & 1) as f64).collect();
            rows.push(row(p, Kind::Projection, cfg.grid_res)?);
        }
        // a single coordinate of norm one is 1; a grid of resolution 1 has no interior
        if n < 2 || cfg.grid_res < 2 {
            continue;
        }
        let mut rng = seeded_rng(cfg.seed, stream_id(n, 0));
        for _ in 0..cfg.count {
            rows.push(row(sample_non_projection(n, cfg.grid_res, &mut rng), Kind::NonProjection, cfg.grid_res)?);
        }
    }
    let count = |k: Kind| rows.iter().filter(|r| r.kind == k).count();
    let summary = CommutativeSummary {
        projections: count(Kind::Projection),
        non_projections: count(Kind::NonProjection),
        failures: rows.iter().filter(|r| !r.ok).count(),
    };
    Ok(CommutativeReport {
        schema: SCHEMA_VERSION,
        command: "commutative",
        config: cfg.clone(),
        rows,
        summary,
    })
}

impl Report for CommutativeReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["dim", "kind", "target", "member_count", "singleton", "second_member", "ok"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.dim.to_string(),
                    match r.kind {
                        Kind::Projection => "projection".into(),
                        Kind::NonProjection => "non_projection".into(),
                    },
                    fmt_vec(&r.target),
                    r.member_count.to_string(),
                    r.singleton.to_string(),
                    r.second_member.as_deref().map(fmt_vec).unwrap_or_default(),
                    r.ok.to_string(),
                ]
            })
            .collect()
    }

    fn csv_summary(&self) -> Vec<String> {
        let s = &self.summary;
        vec![
            "SUMMARY".into(),
            format!("projections={}", s.projections),
            format!("non_projections={}", s.non_projections),
            format!("failures={}", s.failures),
        ]
    }

    fn all_ok(&self) -> bool {
        self.summary.failures == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_dimensional_example() {
        let cfg = CommutativeConfig::new(1, "2".parse().unwrap(), 0, 4).unwrap();
        let rep = run(&cfg).unwrap();
        assert_eq!(rep.rows.len(), 3);
        assert!(rep.rows.iter().all(|r| r.singleton && r.members == vec![r.target.clone()]));
        let r = row(vec![1.0, 0.5], Kind::NonProjection, 64).unwrap();
        assert!(r.ok && r.member_count > 1);
        assert_eq!(r.second_member, Some(vec![1.0, 0.0]));
    }

    #[test]
    fn rejects_fine_grids() {
        assert!(CommutativeConfig::new(1, "5".parse().unwrap(), 1, 4).is_err());
        assert!(CommutativeConfig::new(1, "2".parse().unwrap(), 1, 0).is_err());
    }
}
