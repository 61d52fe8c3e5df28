use std::collections::BTreeMap;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use projsphere::algebra::Element;
use projsphere::instances::generate;
use projsphere::witness::{refute_membership, verify_certificate, Verdict};

use crate::config::{check_tolerances, config_error, AlgebraKind, ConfigError, Dims};
use crate::report::{fmt_f64, Report, SCHEMA_VERSION};

pub const CONFIRMED: &str = "CONFIRMED";

#[derive(Debug, Clone, Serialize)]
pub struct RefuteConfig {
    pub seed: u64,
    pub dims: Dims,
    pub count: usize,
    pub tol: f64,
    pub margin: f64,
    pub algebra: AlgebraKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<PathBuf>,
    #[serde(skip)]
    given: Option<(Element, Element)>,
}

#[derive(Deserialize)]
struct InstanceFile {
    p: Element,
    b: Element,
}

impl RefuteConfig {
    pub fn new(
        seed: u64,
        dims: Dims,
        count: usize,
        tol: f64,
        margin: f64,
        algebra: AlgebraKind,
        instance: Option<PathBuf>,
    ) -> Result<Self, ConfigError> {
        check_tolerances(tol, margin)?;
        let given = match &instance {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                let file: InstanceFile = serde_json::from_str(&text)
                    .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
                Some((file.p, file.b))
            }
            None => {
                if let Some(&n) = dims.0.iter().find(|&&n| n < 2) {
                    return config_error(format!("refute needs dimensions ≥ 2, got {n}"));
                }
                None
            }
        };
        Ok(Self {
            seed,
            dims,
            count,
            tol,
            margin,
            algebra,
            instance,
            given,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RefuteRow {
    pub index: usize,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// Case tag, `CONFIRMED`, or `ERROR`.
    pub case_tag: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RefuteSummary {
    pub total: usize,
    pub verified: usize,
    pub unverified: usize,
    pub cases: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_gap: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RefuteReport {
    pub schema: u32,
    pub command: &'static str,
    pub config: RefuteConfig,
    pub rows: Vec<RefuteRow>,
    pub summary: RefuteSummary,
}

type Checked = (String, Option<f64>, bool, Option<String>);

fn classify(p: &Element, b: &Element, tol: f64, margin: f64) -> projsphere::Result<Checked> {
    match refute_membership(p.algebra(), p, b, tol, margin) {
        Ok(Verdict::Confirmed) => Ok((CONFIRMED.into(), None, true, None)),
        Ok(Verdict::Refuted(cert)) => {
            let ok = verify_certificate(p, b, &cert, tol, margin);
            Ok((cert.case_tag.name().into(), Some(cert.gap), ok, None))
        }
        Err(e @ projsphere::Error::Inconclusive { .. }) => Ok(("ERROR".into(), None, false, Some(e.to_string()))),
        Err(e) => Err(e),
    }
}

fn check(p: &Element, b: &Element, tol: f64, margin: f64) -> Checked {
    classify(p, b, tol, margin).unwrap_or_else(|e| ("ERROR".into(), None, false, Some(e.to_string())))
}

pub fn run(cfg: &RefuteConfig) -> Result<RefuteReport, ConfigError> {
    let rows = match &cfg.given {
        Some((p, b)) => {
            // invalid input is a configuration problem, not an unverified instance
            let (case_tag, gap, verified, error) = classify(p, b, cfg.tol, cfg.margin)?;
            vec![RefuteRow {
                index: 0,
                dim: p.algebra().dim(),
                rank: None,
                family: None,
                case_tag,
                gap,
                verified,
                error,
            }]
        }
        None => {
            let algebras = cfg
                .dims
                .0
                .iter()
                .map(|&n| cfg.algebra.build(n))
                .collect::<projsphere::Result<Vec<_>>>()?;
            let jobs: Vec<(usize, usize)> = (0..algebras.len())
                .flat_map(|a| (0..cfg.count).map(move |i| (a, i)))
                .collect();
            jobs.par_iter()
                .map(|&(a, i)| {
                    let alg = &algebras[a];
                    let dim = alg.dim();
                    match generate(alg, cfg.seed, i) {
                        Ok(inst) => {
                            let (case_tag, gap, verified, error) = check(&inst.p, &inst.b, cfg.tol, cfg.margin);
                            RefuteRow {
                                index: i,
                                dim,
                                rank: Some(inst.rank),
                                family: Some(inst.family.name().into()),
                                case_tag,
                                gap,
                                verified,
                                error,
                            }
                        }
                        Err(e) => RefuteRow {
                            index: i,
                            dim,
                            rank: None,
                            family: None,
                            case_tag: "ERROR".into(),
                            gap: None,
                            verified: false,
                            error: Some(e.to_string()),
                        },
                    }
                })
                .collect()
        }
    };
    let mut cases = BTreeMap::new();
    for r in &rows {
        *cases.entry(r.case_tag.clone()).or_insert(0) += 1;
    }
    let verified = rows.iter().filter(|r| r.verified).count();
    let min_gap = rows.iter().filter_map(|r| r.gap).reduce(f64::min);
    Ok(RefuteReport {
        schema: SCHEMA_VERSION,
        command: "refute",
        config: cfg.clone(),
        summary: RefuteSummary {
            total: rows.len(),
            verified,
            unverified: rows.len() - verified,
            cases,
            min_gap,
        },
        rows,
    })
}

impl Report for RefuteReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["index", "dim", "rank", "family", "case_tag", "gap", "verified", "error"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.index.to_string(),
                    r.dim.to_string(),
                    r.rank.map(|k| k.to_string()).unwrap_or_default(),
                    r.family.clone().unwrap_or_default(),
                    r.case_tag.clone(),
                    r.gap.map(fmt_f64).unwrap_or_default(),
                    r.verified.to_string(),
                    r.error.clone().unwrap_or_default(),
                ]
            })
            .collect()
    }

    fn csv_summary(&self) -> Vec<String> {
        let s = &self.summary;
        let cases = s.cases.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
        vec![
            "SUMMARY".into(),
            format!("total={}", s.total),
            format!("verified={}", s.verified),
            format!("unverified={}", s.unverified),
            cases,
            s.min_gap.map(fmt_f64).unwrap_or_default(),
        ]
    }

    fn all_ok(&self) -> bool {
        self.summary.unverified == 0
    }
}
