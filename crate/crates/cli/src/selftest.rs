use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use projsphere::algebra::AlgebraDescriptor;
use projsphere::calculus::{apply_fc, make_f, make_f_inv, range_projection, sqrt_pos, PiecewiseLinear};
use projsphere::eigen::jacobi_eigen;
use projsphere::instances::{cs_triple, generate};
use projsphere::jordan::{check_peirce_rules, jordan_product, u_operator};
use projsphere::matrix::CMat;
use projsphere::random::{random_positive, random_projection, random_self_adjoint, seeded_rng};
use projsphere::sphere::{dichotomy_state, in_sph_of, sample_sph, DichotomyBranch, SphFamily};
use projsphere::witness::{cs_refinement_check, refute_membership, verify_certificate, Verdict, DEFAULT_MARGIN, DEFAULT_TOL};

use crate::commutative::{self, CommutativeConfig};
use crate::config::{config_error, ConfigError};
use crate::report::{fmt_f64, Report, SCHEMA_VERSION};

pub const SUITES: [&str; 9] = [
    "eigen",
    "calculus",
    "jordan",
    "peirce",
    "sphere",
    "commutative",
    "witness",
    "dichotomy",
    "cs_refinement",
];

/// Residual bound shared by the numeric suites.
const SUITE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct SelftestConfig {
    pub seed: u64,
    pub suites: Vec<String>,
    pub tamper: bool,
}

impl SelftestConfig {
    pub fn new(seed: u64, suites: Option<Vec<String>>, tamper: bool) -> Result<Self, ConfigError> {
        let suites = match suites {
            None => SUITES.iter().map(|s| s.to_string()).collect(),
            Some(list) => {
                let list: Vec<String> = list.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                if list.is_empty() {
                    return config_error("no suites selected");
                }
                if let Some(bad) = list.iter().find(|s| !SUITES.contains(&s.as_str())) {
                    return config_error(format!("unknown suite {bad:?}; known: {}", SUITES.join(", ")));
                }
                // canonical order, no duplicates
                SUITES.iter().filter(|s| list.iter().any(|l| l == *s)).map(|s| s.to_string()).collect()
            }
        };
        Ok(Self { seed, suites, tamper })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub pass: bool,
    pub max_residual: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestSummary {
    pub passed: usize,
    pub failed: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub schema: u32,
    pub command: &'static str,
    pub config: SelftestConfig,
    pub rows: Vec<SuiteResult>,
    pub summary: SelftestSummary,
}

type SuiteOut = projsphere::Result<(f64, String)>;

fn full(n: usize) -> Arc<AlgebraDescriptor> {
    AlgebraDescriptor::full_matrix(n).expect("small dimension")
}

fn eigen(rng: &mut ChaCha8Rng) -> SuiteOut {
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = 1 + i % 12;
        let h = random_self_adjoint(&full(n), rng).scale(rng.random_range(0.1..10.0));
        let m = h.matrix().expect("matrix algebra");
        let spec = jacobi_eigen(m)?;
        let v = spec.vectors.as_ref().expect("matrix spectra carry vectors");
        let rebuilt = CMat::spectral_synthesis(v, &spec.values);
        let scale = spec.spectral_radius().max(f64::MIN_POSITIVE);
        let ortho = (&(&v.adjoint() * v) - &CMat::identity(n)).frobenius_norm();
        worst = worst.max((&rebuilt - m).frobenius_norm() / scale).max(ortho);
    }
    Ok((worst, "100 matrices, reconstruction and orthonormality".into()))
}

fn calculus(rng: &mut ChaCha8Rng) -> SuiteOut {
    let mut worst = 0.0f64;
    for i in 0..50 {
        let n = 2 + i % 5;
        let a = random_positive(&full(n), 0.0, 1.0, rng)?;
        let id = apply_fc(&PiecewiseLinear::identity(0.0, 1.0)?, &a)?;
        worst = worst.max(id.distance(&a)?);
        let root = sqrt_pos(&a)?;
        worst = worst.max(root.square().distance(&a)?);
        let rank = 1 + i % n;
        let values: Vec<f64> = (0..n).map(|j| if j < n - rank { 0.0 } else { rng.random_range(0.2..1.0) }).collect();
        let b = projsphere::random::random_with_spectrum(a.algebra(), &values, rng)?;
        let r = range_projection(&b)?;
        worst = worst.max(r.square().distance(&r)?).max(r.mul(&b)?.distance(&b)?);
        let nc = rng.random_range(0.05..1.0);
        let (f, f_inv) = (make_f(nc)?, make_f_inv(nc)?);
        for k in 0..=10 {
            let t = 0.5 + 0.05 * k as f64;
            worst = worst.max((f.eval(f_inv.eval(t)?)? - t).abs());
        }
    }
    Ok((worst, "identity, square root, range projection, f ∘ f⁻¹".into()))
}

fn jordan(rng: &mut ChaCha8Rng) -> SuiteOut {
    let mut worst = 0.0f64;
    for i in 0..60 {
        let n = 2 + i % 4;
        let alg = if i % 2 == 0 { full(n) } else { AlgebraDescriptor::symmetric_jordan(n)? };
        let a = random_self_adjoint(&alg, rng);
        let b = random_self_adjoint(&alg, rng);
        let ab = jordan_product(&a, &b)?;
        worst = worst.max(ab.distance(&jordan_product(&b, &a)?)?);
        let a2 = a.square();
        let lhs = jordan_product(&a2, &ab)?;
        let rhs = jordan_product(&a, &jordan_product(&a2, &b)?)?;
        worst = worst.max(lhs.distance(&rhs)?);
        let u = u_operator(&a, &b)?;
        let quadratic = jordan_product(&ab, &a)?.scale(2.0).sub(&jordan_product(&a2, &b)?)?;
        worst = worst.max(u.distance(&quadratic)?);
        if alg.is_associative() {
            worst = worst.max(u.distance(&a.mul(&b)?.mul(&a)?.hermitian_part())?);
        }
    }
    Ok((worst, "commutativity, Jordan identity, U_a(b) against aba".into()))
}

fn peirce(rng: &mut ChaCha8Rng) -> SuiteOut {
    let mut worst = 0.0f64;
    for i in 0..20 {
        let n = 2 + i % 4;
        let alg = if i % 2 == 0 { full(n) } else { AlgebraDescriptor::symmetric_jordan(n)? };
        let p = random_projection(&alg, 1 + i % (n - 1).max(1), rng)?;
        worst = worst.max(check_peirce_rules(&p, 4, rng.random())?.max());
    }
    Ok((worst, "20 projections, multiplication rules".into()))
}

fn sphere(rng: &mut ChaCha8Rng) -> SuiteOut {
    let families = [SphFamily::Orthogonal, SphFamily::Corner, SphFamily::Tail];
    let mut worst = 0.0f64;
    let mut outside = 0;
    for i in 0..30 {
        let n = 2 + i % 4;
        let p = random_projection(&full(n), 1 + i % (n - 1), rng)?;
        for (_, s) in sample_sph(&p, 6, rng.random(), &families)? {
            worst = worst.max((s.norm() - 1.0).abs()).max((s.distance(&p)? - 1.0).abs());
            if !in_sph_of(&p, &s, SUITE_TOL)? {
                outside += 1;
            }
        }
    }
    if outside > 0 {
        worst = worst.max(1.0);
    }
    Ok((worst, format!("180 samples, {outside} outside the sphere")))
}

fn commutative_suite(seed: u64) -> SuiteOut {
    let cfg = CommutativeConfig::new(seed, "1..4".parse().expect("valid dims"), 10, 16).expect("valid config");
    let rep = commutative::run(&cfg).map_err(|e| projsphere::Error::PreconditionFailed(e.0))?;
    let failures = rep.summary.failures;
    Ok((
        if failures == 0 { 0.0 } else { 1.0 },
        format!("{} rows, {failures} failures", rep.rows.len()),
    ))
}

fn witness(seed: u64, tamper: bool) -> SuiteOut {
    let mut worst = 0.0f64;
    let mut unverified = 0;
    let mut total = 0;
    for n in 2..=4 {
        let alg = full(n);
        for i in 0..30 {
            let inst = generate(&alg, seed, i)?;
            total += 1;
            match refute_membership(&alg, &inst.p, &inst.b, DEFAULT_TOL, DEFAULT_MARGIN) {
                Ok(Verdict::Confirmed) => {}
                Ok(Verdict::Refuted(mut cert)) => {
                    if tamper {
                        cert.witness = cert.witness.scale(0.5);
                    }
                    let s = &cert.witness;
                    worst = worst.max((s.norm() - 1.0).abs()).max((s.distance(&inst.p)? - 1.0).abs());
                    if !verify_certificate(&inst.p, &inst.b, &cert, DEFAULT_TOL, DEFAULT_MARGIN) {
                        unverified += 1;
                    }
                }
                Err(_) => unverified += 1,
            }
        }
    }
    if unverified > 0 {
        worst = worst.max(1.0);
    }
    Ok((worst, format!("{total} instances, {unverified} unverified")))
}

fn dichotomy(rng: &mut ChaCha8Rng) -> SuiteOut {
    let families = [SphFamily::Orthogonal, SphFamily::Corner, SphFamily::Tail];
    let mut worst = 0.0f64;
    for i in 0..40 {
        let n = 2 + i % 4;
        let alg = full(n);
        let p = random_projection(&alg, 1 + (i / 4) % n, rng)?;
        let (_, s) = sample_sph(&p, 1, rng.random(), &families)?.remove(0);
        let (state, branch) = dichotomy_state(&s, &p)?;
        let (fu, fv) = (state.eval(&s)?.re, state.eval(&p)?.re);
        let (eu, ev) = match branch {
            DichotomyBranch::FirstIsOne => (1.0, 0.0),
            DichotomyBranch::SecondIsOne => (0.0, 1.0),
        };
        worst = worst.max((fu - eu).abs()).max((fv - ev).abs());
    }
    Ok((worst, "40 pairs (s, p), state values".into()))
}

fn cs_refinement(rng: &mut ChaCha8Rng) -> SuiteOut {
    let mut worst = 0.0f64;
    for i in 0..100 {
        let alg = full(2 + i % 4);
        let (phi, a, b) = cs_triple(&alg, rng)?;
        worst = worst.max(cs_refinement_check(&phi, &a, &b, 1e-10)?);
    }
    Ok((worst, "100 triples, |φ(a∘b)|".into()))
}

fn run_suite(name: &str, seed: u64, tamper: bool) -> SuiteResult {
    let stream = SUITES.iter().position(|s| *s == name).unwrap_or(0) as u64;
    let mut rng = seeded_rng(seed, 0x5e1f_0000 + stream);
    let out = match name {
        "eigen" => eigen(&mut rng),
        "calculus" => calculus(&mut rng),
        "jordan" => jordan(&mut rng),
        "peirce" => peirce(&mut rng),
        "sphere" => sphere(&mut rng),
        "commutative" => commutative_suite(seed),
        "witness" => witness(seed, tamper),
        "dichotomy" => dichotomy(&mut rng),
        "cs_refinement" => cs_refinement(&mut rng),
        _ => unreachable!("suite names are validated"),
    };
    match out {
        Ok((residual, detail)) => SuiteResult {
            suite: name.into(),
            pass: residual <= SUITE_TOL,
            max_residual: residual,
            detail,
        },
        Err(e) => SuiteResult {
            suite: name.into(),
            pass: false,
            max_residual: f64::INFINITY,
            detail: format!("error: {e}"),
        },
    }
}

pub fn run(cfg: &SelftestConfig) -> SelftestReport {
    let rows: Vec<SuiteResult> = cfg.suites.iter().map(|s| run_suite(s, cfg.seed, cfg.tamper)).collect();
    let failed: Vec<String> = rows.iter().filter(|r| !r.pass).map(|r| r.suite.clone()).collect();
    SelftestReport {
        schema: SCHEMA_VERSION,
        command: "selftest",
        config: cfg.clone(),
        summary: SelftestSummary {
            passed: rows.len() - failed.len(),
            failed,
        },
        rows,
    }
}

impl Report for SelftestReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["suite", "pass", "max_residual", "detail"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| vec![r.suite.clone(), r.pass.to_string(), fmt_f64(r.max_residual), r.detail.clone()])
            .collect()
    }

    fn csv_summary(&self) -> Vec<String> {
        vec![
            "SUMMARY".into(),
            format!("passed={}", self.summary.passed),
            format!("failed={}", self.summary.failed.join(";")),
        ]
    }

    fn all_ok(&self) -> bool {
        self.summary.failed.is_empty()
    }
}
