//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs as a plain binary (`harness = false`).

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use projsphere::algebra::{AlgebraDescriptor, Corner, Element};
use projsphere::eigen::jacobi_eigen;
use projsphere::instances::generate;
use projsphere::jordan::{check_peirce_rules, u_operator, JordanBackend, ResidualReport};
use projsphere::matrix::{CMat, C64};
use projsphere::random::{
    random_general, random_positive, random_projection, random_self_adjoint, random_unit_vector,
    random_with_spectrum, seeded_rng,
};
use projsphere::sphere::{commutative_double_sph, dichotomy_state, sample_sph, second_member, DichotomyBranch, PureState, SphFamily};
use projsphere::witness::{
    cs_refinement_check, jordan_refute_membership, refute_membership, unit_refuter, verify_certificate, CaseTag,
    Verdict, DEFAULT_MARGIN, DEFAULT_TOL,
};
use rand::Rng;

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn full(n: usize) -> Arc<AlgebraDescriptor> {
    AlgebraDescriptor::full_matrix(n).unwrap()
}

fn totality() -> Outcome {
    let mut times = Vec::new();
    let mut tags: BTreeMap<CaseTag, usize> = BTreeMap::new();
    let (mut verified, mut failures) = (0usize, Vec::new());
    let start = Instant::now();
    for n in 2..=6 {
        let alg = full(n);
        for i in 0..500 {
            let inst = generate(&alg, SEED, i).unwrap();
            let t = Instant::now();
            let verdict = refute_membership(&alg, &inst.p, &inst.b, DEFAULT_TOL, DEFAULT_MARGIN);
            times.push(t.elapsed());
            match verdict {
                Ok(Verdict::Refuted(cert)) if verify_certificate(&inst.p, &inst.b, &cert, DEFAULT_TOL, DEFAULT_MARGIN) => {
                    verified += 1;
                    *tags.entry(cert.case_tag).or_default() += 1;
                }
                other => failures.push(format!("n={n} i={i}: {other:?}")),
            }
        }
    }
    let total = start.elapsed();
    times.sort();
    let median = times[times.len() / 2];
    let pass = failures.is_empty() && median < Duration::from_millis(10) && total < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "{verified}/2500 verified, median {:.3} ms, total {:.2} s, tags {tags:?}{}",
            median.as_secs_f64() * 1e3,
            total.as_secs_f64(),
            failures.first().map(|f| format!(", first failure {f}")).unwrap_or_default()
        ),
    )
}

fn unit_gap() -> Outcome {
    let mut worst = 0.0f64;
    let mut bad = 0;
    for n in 2..=6 {
        let alg = full(n);
        let mut rng = seeded_rng(SEED, 100 + n as u64);
        for i in 0..200 {
            let bottom = if i % 4 == 0 { 0.0 } else { rng.random_range(0.0..0.95) };
            let b = random_positive(&alg, bottom, 1.0, &mut rng).unwrap();
            match unit_refuter(&alg, &b, DEFAULT_TOL) {
                Ok(Verdict::Refuted(cert)) => {
                    let unit_tag = matches!(cert.case_tag, CaseTag::UnitShifted | CaseTag::UnitSingular);
                    worst = worst.max((cert.gap - (1.0 - bottom)).abs());
                    if !unit_tag {
                        bad += 1;
                    }
                }
                _ => bad += 1,
            }
        }
    }
    outcome(
        bad == 0 && worst <= 1e-8,
        format!("1000 draws, max |gap − (1 − min σ(b))| = {worst:.2e}, non-unit outcomes {bad}"),
    )
}

fn tail_gap() -> Outcome {
    let mut worst = 0.0f64;
    let mut bad = 0;
    let mut rng = seeded_rng(SEED, 200);
    for i in 0..200 {
        let n = 2 + i % 5;
        let alg = full(n);
        let rank = 1 + (i / 5) % (n - 1);
        let p = random_projection(&alg, rank, &mut rng).unwrap();
        let co = Corner::new(&Element::unit(&alg).sub(&p).unwrap()).unwrap();
        let norm_z = rng.random_range(0.05..0.95);
        let bottom = rng.random_range(0.0..norm_z);
        let z = co.embed(&random_positive(co.algebra(), bottom, norm_z, &mut rng).unwrap()).unwrap();
        let b = p.add(&z).unwrap().hermitian_part();
        match refute_membership(&alg, &p, &b, DEFAULT_TOL, DEFAULT_MARGIN) {
            Ok(Verdict::Refuted(cert)) if cert.case_tag == CaseTag::TailShrunk => {
                worst = worst.max((cert.gap - norm_z).abs());
            }
            _ => bad += 1,
        }
    }
    outcome(
        bad == 0 && worst <= 1e-8,
        format!("200 draws, max |gap − ‖z′‖| = {worst:.2e}, non-tail outcomes {bad}"),
    )
}

/// `x` has sup-distance one from every member of `Sph(a) ∩ {0, ½, 1}ⁿ`.
fn certified_by_half_grid(a: &[f64], x: &[f64]) -> bool {
    let n = a.len();
    let sup = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(s, t)| (s - t).abs()).fold(0.0, f64::max);
    (0..3usize.pow(n as u32)).all(|mut code| {
        let s: Vec<f64> = (0..n)
            .map(|_| {
                let v = (code % 3) as f64 / 2.0;
                code /= 3;
                v
            })
            .collect();
        let in_sph = s.contains(&1.0) && sup(&s, a) == 1.0;
        !in_sph || sup(x, &s) == 1.0
    })
}

fn commutative() -> Outcome {
    let k = 64;
    let mut bad = Vec::new();
    for n in 1..=4usize {
        for mask in 1..(1usize << n) {
            let p: Vec<f64> = (0..n).map(|i| ((mask >> i) & 1) as f64).collect();
            let d = commutative_double_sph(&p, k).unwrap();
            if !(d.is_singleton() && d.contains(&p)) {
                bad.push(format!("projection {p:?}"));
            }
        }
    }
    let mut rng = seeded_rng(SEED, 300);
    let mut min_dist = f64::INFINITY;
    for i in 0..50 {
        let n = 1 + i % 4;
        let n = n.max(2);
        let mut a: Vec<f64> = (0..n).map(|_| rng.random_range(0..=k) as f64 / k as f64).collect();
        a[rng.random_range(0..n)] = 1.0;
        let j = (0..n).find(|&j| a[j] != 1.0).unwrap_or(0);
        if a.iter().all(|&v| v == 0.0 || v == 1.0) {
            a[j] = rng.random_range(1..k) as f64 / k as f64;
        }
        let d = commutative_double_sph(&a, k).unwrap();
        let x = second_member(&a).unwrap().expect("non-projection");
        let dist = x.iter().zip(&a).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        min_dist = min_dist.min(dist);
        if d.is_singleton() || !d.contains(&x) || !d.contains(&a) || !certified_by_half_grid(&a, &x) || dist < 1.0 / k as f64 {
            bad.push(format!("non-projection {a:?}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!("15 projections singleton, 50 non-projections with second member (min distance {min_dist:.3}){}", bad.first().map(|b| format!(", failure {b}")).unwrap_or_default()),
    )
}

fn jordan_parity() -> Outcome {
    let mut worst = 0.0f64;
    let mut mismatches = 0;
    for n in 2..=6 {
        let backend = JordanBackend::full_matrix(n).unwrap();
        let alg = backend.algebra().clone();
        for i in 0..500 {
            let inst = generate(&alg, SEED, i).unwrap();
            let assoc = refute_membership(&alg, &inst.p, &inst.b, DEFAULT_TOL, DEFAULT_MARGIN);
            let jord = jordan_refute_membership(&backend, &inst.p, &inst.b, DEFAULT_TOL, DEFAULT_MARGIN);
            match (assoc, jord) {
                (Ok(Verdict::Refuted(a)), Ok(Verdict::Refuted(j))) if a.case_tag == j.case_tag => {
                    worst = worst.max(a.witness.distance(&j.witness).unwrap());
                }
                _ => mismatches += 1,
            }
        }
    }
    let mut sym_bad = 0;
    for i in 0..200 {
        let n = 2 + i % 5;
        let backend = JordanBackend::symmetric(n).unwrap();
        let inst = generate(backend.algebra(), SEED, i).unwrap();
        match jordan_refute_membership(&backend, &inst.p, &inst.b, DEFAULT_TOL, DEFAULT_MARGIN) {
            Ok(Verdict::Refuted(c)) if verify_certificate(&inst.p, &inst.b, &c, DEFAULT_TOL, DEFAULT_MARGIN) => {}
            _ => sym_bad += 1,
        }
    }
    outcome(
        mismatches == 0 && worst <= 1e-8 && sym_bad == 0,
        format!("full_matrix: {mismatches} tag mismatches, max witness distance {worst:.2e}; symmetric: {sym_bad}/200 unverified"),
    )
}

fn peirce_suite() -> Outcome {
    let mut report = ResidualReport::default();
    for (label, make) in [
        ("full", AlgebraDescriptor::full_matrix as fn(usize) -> projsphere::Result<Arc<AlgebraDescriptor>>),
        ("sym", AlgebraDescriptor::symmetric_jordan as fn(usize) -> projsphere::Result<Arc<AlgebraDescriptor>>),
    ] {
        let mut rng = seeded_rng(SEED, 400);
        for i in 0..1000 {
            let n = 2 + i % 3;
            let alg: Arc<AlgebraDescriptor> = make(n).unwrap();
            let a = random_general(&alg, &mut rng);
            let b = random_general(&alg, &mut rng);
            let b2 = b.jordan(&b).unwrap();
            let lhs = a.jordan(&b).unwrap().jordan(&b2).unwrap();
            let rhs = a.jordan(&b2).unwrap().jordan(&b).unwrap();
            report.record(&format!("{label}:jordan_identity"), lhs.distance(&rhs).unwrap());
            let cube = u_operator(&a, &a.adjoint()).unwrap().norm();
            report.record(&format!("{label}:u_norm_cube"), (cube - a.norm().powi(3)).abs());
            let rank = rng.random_range(0..=n);
            let p = random_projection(&alg, rank, &mut rng).unwrap();
            let rules = check_peirce_rules(&p, 1, SEED ^ i as u64).unwrap();
            for r in rules.0 {
                report.record(&format!("{label}:{}", r.name), r.value);
            }
        }
    }
    let worst = report
        .0
        .iter()
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .map(|r| format!("{} = {:.2e}", r.name, r.value))
        .unwrap_or_default();
    outcome(report.max() <= 1e-8, format!("1000 draws per backend, worst {worst}"))
}

fn closed_form_2x2(h: &CMat) -> [f64; 2] {
    let (a, d, b) = (h[(0, 0)].re, h[(1, 1)].re, h[(0, 1)]);
    let mid = (a + d) / 2.0;
    let rad = (((a - d) / 2.0).powi(2) + b.norm_sqr()).sqrt();
    [mid - rad, mid + rad]
}

/// Trigonometric solution of the characteristic cubic of a Hermitian 3×3.
fn closed_form_3x3(h: &CMat) -> [f64; 3] {
    let q = (h[(0, 0)].re + h[(1, 1)].re + h[(2, 2)].re) / 3.0;
    let p1 = h[(0, 1)].norm_sqr() + h[(0, 2)].norm_sqr() + h[(1, 2)].norm_sqr();
    let p2 = (0..3).map(|i| (h[(i, i)].re - q).powi(2)).sum::<f64>() + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q; 3];
    }
    let bm = CMat::from_fn(3, 3, |i, j| {
        let shift = if i == j { C64::new(q, 0.0) } else { C64::new(0.0, 0.0) };
        (h[(i, j)] - shift) / p
    });
    let det = bm[(0, 0)] * (bm[(1, 1)] * bm[(2, 2)] - bm[(1, 2)] * bm[(2, 1)])
        - bm[(0, 1)] * (bm[(1, 0)] * bm[(2, 2)] - bm[(1, 2)] * bm[(2, 0)])
        + bm[(0, 2)] * (bm[(1, 0)] * bm[(2, 1)] - bm[(1, 1)] * bm[(2, 0)]);
    let phi = (det.re / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
    let top = q + 2.0 * p * phi.cos();
    let bottom = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    [bottom, 3.0 * q - top - bottom, top]
}

fn eigensolver() -> Outcome {
    let mut rng = seeded_rng(SEED, 700);
    let mut closed = 0.0f64;
    for i in 0..500 {
        let n = 2 + i % 2;
        let h = random_self_adjoint(&full(n), &mut rng).scale(rng.random_range(0.1..10.0));
        let m = h.matrix().unwrap();
        let vals = jacobi_eigen(m).unwrap().values;
        let expect: Vec<f64> = if n == 2 { closed_form_2x2(m).to_vec() } else { closed_form_3x3(m).to_vec() };
        for (v, e) in vals.iter().zip(&expect) {
            closed = closed.max((v - e).abs());
        }
    }
    let mut recon = 0.0f64;
    for i in 0..500 {
        let n = 1 + i % 32;
        let h = random_self_adjoint(&full(n), &mut rng);
        let m = h.matrix().unwrap();
        let spec = jacobi_eigen(m).unwrap();
        let rebuilt = CMat::spectral_synthesis(spec.vectors.as_ref().unwrap(), &spec.values);
        let scale = spec.spectral_radius().max(f64::MIN_POSITIVE);
        recon = recon.max((&rebuilt - m).frobenius_norm() / scale);
    }
    outcome(
        closed <= 1e-10 && recon <= 1e-10,
        format!("closed-form max error {closed:.2e}, reconstruction max ‖VΛV* − H‖/‖H‖ = {recon:.2e}"),
    )
}

fn dichotomy() -> Outcome {
    let mut pattern = 0.0f64;
    let mut compression = 0.0f64;
    let mut bad = 0;
    let families = [SphFamily::Orthogonal, SphFamily::Corner, SphFamily::Tail];
    let mut rng = seeded_rng(SEED, 800);
    for i in 0..200 {
        let n = 2 + i % 5;
        let alg = full(n);
        let rank = 1 + (i / 5) % n;
        let p = random_projection(&alg, rank, &mut rng).unwrap();
        let samples = match sample_sph(&p, 1, SEED + i as u64, &families) {
            Ok(s) => s,
            Err(_) => {
                bad += 1;
                continue;
            }
        };
        let s = &samples[0].1;
        let Ok((state, branch)) = dichotomy_state(s, &p) else {
            bad += 1;
            continue;
        };
        let (fu, fv) = (state.eval(s).unwrap().re, state.eval(&p).unwrap().re);
        let expect = match branch {
            DichotomyBranch::FirstIsOne => (1.0, 0.0),
            DichotomyBranch::SecondIsOne => (0.0, 1.0),
        };
        pattern = pattern.max((fu - expect.0).abs()).max((fv - expect.1).abs());
        let w = state.support(&alg).unwrap();
        let a = random_general(&alg, &mut rng);
        let uwa = w.mul(&a).unwrap().mul(&w).unwrap();
        let phi_a = state.eval(&a).unwrap();
        let target = w.matrix().unwrap().scale_c(phi_a);
        compression = compression.max((&target - uwa.matrix().unwrap()).frobenius_norm());
    }
    outcome(
        bad == 0 && pattern <= 1e-7 && compression <= 1e-8,
        format!("200 pairs, pattern error {pattern:.2e}, ‖U_w(a) − φ(a)w‖ ≤ {compression:.2e}, failures {bad}"),
    )
}

fn cs_refinement() -> Outcome {
    let mut worst = 0.0f64;
    let mut bad = 0;
    let mut rng = seeded_rng(SEED, 900);
    for i in 0..1000 {
        let n = 2 + i % 5;
        let alg = full(n);
        let mut values: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        values[0] = 0.0;
        let b = random_with_spectrum(&alg, &values, &mut rng).unwrap();
        let spec = b.spectrum().unwrap();
        let kernel = spec.vectors.as_ref().unwrap().column(0);
        let noise = random_unit_vector(n, &mut rng);
        let xi: Vec<C64> = kernel.iter().zip(&noise).map(|(k, r)| k + r * 0.5).collect();
        let state = PureState::from_unnormalized(xi).unwrap();
        let xi = state.vector();
        let overlap: C64 = kernel.iter().zip(xi).map(|(k, x)| k.conj() * x).sum();
        let phase = overlap.conj() / overlap.norm();
        let v: Vec<C64> = kernel.iter().map(|k| k * phase.conj()).collect();
        let vxi: f64 = v.iter().zip(xi).map(|(a, x)| a.conj() * x).sum::<C64>().re;
        let rank_one = CMat::from_fn(n, n, |r, c| v[r] * v[c].conj() / vxi);
        let proj = CMat::from_fn(n, n, |r, c| {
            let id = if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            id - xi[r] * xi[c].conj()
        });
        let m = random_positive(&alg, 0.0, rng.random_range(0.1..2.0), &mut rng).unwrap();
        let sandwich = &(&proj * m.matrix().unwrap()) * &proj;
        let a = Element::from_matrix(&alg, (&rank_one + &sandwich).hermitian_part()).unwrap();
        match cs_refinement_check(&state, &a, &b, 1e-10) {
            Ok(r) => worst = worst.max(r),
            Err(_) => bad += 1,
        }
    }
    outcome(bad == 0 && worst <= 1e-7, format!("1000 triples, max |φ(a∘b)| = {worst:.2e}, precondition failures {bad}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("witness engine totality", totality),
        ("unit gap", unit_gap),
        ("tail gap", tail_gap),
        ("commutative double sphere", commutative),
        ("Jordan parity", jordan_parity),
        ("Peirce and Jordan identities", peirce_suite),
        ("eigensolver", eigensolver),
        ("dichotomy realization", dichotomy),
        ("CS refinement", cs_refinement),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = run();
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!("{status} [{}] {name}: {}", i + 1, result.detail);
        if !result.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
