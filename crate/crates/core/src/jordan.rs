//! Jordan layer: the product `a∘b = ½(ab + ba)`, the quadratic operators,
//! Peirce projectors of a projection and orthogonality tests.
//!
//! Everything here is written with Jordan products only, so it applies to
//! the symmetric backend, which is not closed under the matrix product.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraDescriptor, Element, Kind, PROJECTION_TOL};
use crate::error::{Error, Result};
use crate::matrix::{CMat, C64};
use crate::random::{random_general, seeded_rng};

fn same_backend(a: &Element, b: &Element) -> Result<()> {
    if a.same_algebra(b) {
        Ok(())
    } else {
        Err(Error::BackendMismatch)
    }
}

pub fn jordan_product(a: &Element, b: &Element) -> Result<Element> {
    same_backend(a, b)?;
    a.jordan(b)
}

/// `U_a(x) = 2(a∘x)∘a − a²∘x`.
pub fn u_operator(a: &Element, x: &Element) -> Result<Element> {
    same_backend(a, x)?;
    let twice = a.jordan(x)?.jordan(a)?.scale(2.0);
    twice.sub(&a.jordan(a)?.jordan(x)?)
}

/// `U_{a,b}(x) = (a∘x)∘b + (b∘x)∘a − (a∘b)∘x`.
pub fn u_pair(a: &Element, b: &Element, x: &Element) -> Result<Element> {
    same_backend(a, b)?;
    same_backend(a, x)?;
    let first = a.jordan(x)?.jordan(b)?;
    let second = b.jordan(x)?.jordan(a)?;
    first.add(&second)?.sub(&a.jordan(b)?.jordan(x)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    FullMatrix,
    SymmetricJordan,
}

/// A matrix algebra used through its Jordan structure only.
#[derive(Debug, Clone)]
pub struct JordanBackend {
    algebra: Arc<AlgebraDescriptor>,
    kind: BackendKind,
}

impl JordanBackend {
    pub fn new(algebra: &Arc<AlgebraDescriptor>) -> Result<Self> {
        let kind = match algebra.kind {
            Kind::FullMatrix => BackendKind::FullMatrix,
            Kind::SymmetricJordan => BackendKind::SymmetricJordan,
            _ => {
                return Err(Error::InvalidAlgebra(
                    "Jordan backends are full_matrix or symmetric_jordan".into(),
                ))
            }
        };
        Ok(Self {
            algebra: Arc::clone(algebra),
            kind,
        })
    }

    pub fn full_matrix(n: usize) -> Result<Self> {
        Self::new(&AlgebraDescriptor::full_matrix(n)?)
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        Self::new(&AlgebraDescriptor::symmetric_jordan(n)?)
    }

    pub fn algebra(&self) -> &Arc<AlgebraDescriptor> {
        &self.algebra
    }

    pub fn kind(&self) -> BackendKind {
        self.kind
    }

    pub fn contains(&self, a: &Element) -> bool {
        a.algebra() == &self.algebra
    }

    /// `‖a∘b − (a∘b)ᵀ‖_F`; zero up to rounding on the symmetric backend.
    pub fn closure_defect(&self, a: &Element, b: &Element) -> Result<f64> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::BackendMismatch);
        }
        let prod = a.jordan(b)?;
        Ok(match self.kind {
            BackendKind::FullMatrix => 0.0,
            BackendKind::SymmetricJordan => prod.matrix().map_or(0.0, CMat::symmetric_defect),
        })
    }
}

/// The three Peirce projectors of a projection `p`:
/// `P2 = U_p`, `P1 = 2U_{p,1−p}`, `P0 = U_{1−p}`.
#[derive(Debug, Clone)]
pub struct PeirceProjectors {
    projection: Element,
    complement: Element,
}

impl PeirceProjectors {
    pub fn new(p: &Element) -> Result<Self> {
        if !p.is_projection(PROJECTION_TOL) {
            return Err(Error::NotProjection(p.square().sub(p)?.norm()));
        }
        let complement = Element::unit(p.algebra()).sub(p)?;
        Ok(Self {
            projection: p.clone(),
            complement,
        })
    }

    pub fn projection(&self) -> &Element {
        &self.projection
    }

    /// `P_j(x)` for `j ∈ {0, 1, 2}`.
    pub fn apply(&self, j: usize, x: &Element) -> Result<Element> {
        match j {
            0 => u_operator(&self.complement, x),
            1 => Ok(u_pair(&self.projection, &self.complement, x)?.scale(2.0)),
            2 => u_operator(&self.projection, x),
            _ => Err(Error::ParameterOutOfRange(format!("Peirce index {j} not in 0..=2"))),
        }
    }

    pub fn decompose(&self, x: &Element) -> Result<PeirceDecomposition> {
        Ok(PeirceDecomposition {
            projection: self.projection.clone(),
            parts: [self.apply(0, x)?, self.apply(1, x)?, self.apply(2, x)?],
        })
    }
}

/// `x = x0 + x1 + x2` with `p∘xj = (j/2)·xj`.
#[derive(Debug, Clone)]
pub struct PeirceDecomposition {
    projection: Element,
    parts: [Element; 3],
}

impl PeirceDecomposition {
    pub fn projection(&self) -> &Element {
        &self.projection
    }

    pub fn part(&self, j: usize) -> &Element {
        &self.parts[j]
    }

    pub fn sum(&self) -> Element {
        let s = self.parts[0].add(&self.parts[1]).expect("same algebra");
        s.add(&self.parts[2]).expect("same algebra")
    }

    /// `max_j ‖p∘xj − (j/2)xj‖_F`.
    pub fn eigen_residual(&self) -> f64 {
        (0..3)
            .map(|j| {
                let px = self.projection.jordan(&self.parts[j]).expect("same algebra");
                px.sub(&self.parts[j].scale(j as f64 / 2.0)).expect("same algebra").frobenius_norm()
            })
            .fold(0.0, f64::max)
    }
}

pub fn peirce(p: &Element, x: &Element) -> Result<PeirceDecomposition> {
    if !p.same_algebra(x) {
        return Err(Error::BackendMismatch);
    }
    PeirceProjectors::new(p)?.decompose(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedResidual {
    pub name: String,
    pub value: f64,
}

/// Named maximum residuals; serializes as a JSON array.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ResidualReport(pub Vec<NamedResidual>);

impl ResidualReport {
    /// Records `value`, keeping the maximum per name.
    pub fn record(&mut self, name: &str, value: f64) {
        match self.0.iter_mut().find(|r| r.name == name) {
            Some(r) => r.value = r.value.max(value),
            None => self.0.push(NamedResidual {
                name: name.to_string(),
                value,
            }),
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|r| r.name == name).map(|r| r.value)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().map(|r| r.value).fold(0.0, f64::max)
    }

    pub fn merge(&mut self, other: &ResidualReport) {
        for r in &other.0 {
            self.record(&r.name, r.value);
        }
    }
}

/// Samples random elements and measures the Peirce projector algebra and
/// the multiplication rules. Residuals are Frobenius norms of unit-size draws.
pub fn check_peirce_rules(p: &Element, samples: usize, rng_seed: u64) -> Result<ResidualReport> {
    let proj = PeirceProjectors::new(p)?;
    let alg = p.algebra();
    let mut rng = seeded_rng(rng_seed, 0);
    let mut report = ResidualReport::default();
    let fro = |e: Result<Element>| -> Result<f64> { Ok(e?.frobenius_norm()) };

    for _ in 0..samples {
        let x = random_general(alg, &mut rng);
        let dec = proj.decompose(&x)?;
        report.record("projector_sum", fro(dec.sum().sub(&x))?);
        report.record("peirce_eigenvalue", dec.eigen_residual());
        for j in 0..3 {
            let xj = dec.part(j);
            report.record("projector_idempotent", fro(proj.apply(j, xj)?.sub(xj))?);
            for i in (0..3).filter(|&i| i != j) {
                report.record("projectors_annihilate", proj.apply(i, xj)?.frobenius_norm());
            }
        }

        let mut draw = |j: usize| proj.apply(j, &random_general(alg, &mut rng));
        let (a0, b0) = (draw(0)?, draw(0)?);
        let (a1, c1) = (draw(1)?, draw(1)?);
        let (a2, b2) = (draw(2)?, draw(2)?);

        report.record("a0_circ_a2", a0.jordan(&a2)?.frobenius_norm());
        report.record("u_pair_a0_b0_on_a1", u_pair(&a0, &b0, &c1)?.frobenius_norm());
        let outside = |prod: Element, j: usize| -> Result<f64> {
            Ok(prod.sub(&proj.apply(j, &prod)?)?.frobenius_norm())
        };
        report.record("a2_circ_a2_in_a2", outside(a2.jordan(&b2)?, 2)?);
        report.record("a0_circ_a0_in_a0", outside(a0.jordan(&b0)?, 0)?);
        report.record("a2_circ_a1_in_a1", outside(a2.jordan(&c1)?, 1)?);
        report.record("a0_circ_a1_in_a1", outside(a0.jordan(&c1)?, 1)?);
        report.record("a1_circ_a1_off_a1", proj.apply(1, &a1.jordan(&c1)?)?.frobenius_norm());
    }
    Ok(report)
}

/// `{a, b, x} = (a∘b*)∘x + (x∘b*)∘a − (a∘x)∘b*`.
pub fn triple_product(a: &Element, b: &Element, x: &Element) -> Result<Element> {
    same_backend(a, b)?;
    same_backend(a, x)?;
    let bs = b.adjoint();
    let first = a.jordan(&bs)?.jordan(x)?;
    let second = x.jordan(&bs)?.jordan(a)?;
    first.add(&second)?.sub(&a.jordan(x)?.jordan(&bs)?)
}

/// Symmetrized matrix units that belong to the algebra.
fn jordan_spanning_set(alg: &Arc<AlgebraDescriptor>) -> Vec<Element> {
    let n = alg.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let m = CMat::from_fn(n, n, |r, c| {
                if (r, c) == (i, j) || (r, c) == (j, i) {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            if let Ok(e) = Element::from_matrix(alg, m) {
                out.push(e);
            }
        }
    }
    out
}

/// `a ⊥ b`. Positive pairs use `‖a∘b‖ ≤ tol`; associative algebras use
/// `‖ab*‖ + ‖b*a‖ ≤ tol`; otherwise the triple product `{a, b, ·}` must vanish
/// on a spanning set.
pub fn are_orthogonal(a: &Element, b: &Element, tol: f64) -> bool {
    if !a.same_algebra(b) {
        return false;
    }
    let small = |e: Result<Element>| e.is_ok_and(|e| e.norm() <= tol);
    if a.is_positive(tol) && b.is_positive(tol) {
        return small(a.jordan(b));
    }
    let bs = b.adjoint();
    if a.algebra().is_associative() {
        return match (a.mul(&bs), bs.mul(a)) {
            (Ok(x), Ok(y)) => x.norm() + y.norm() <= tol,
            _ => false,
        };
    }
    jordan_spanning_set(a.algebra())
        .iter()
        .all(|x| small(triple_product(a, b, x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_self_adjoint;

    fn full(n: usize) -> Arc<AlgebraDescriptor> {
        AlgebraDescriptor::full_matrix(n).unwrap()
    }

    fn mat(alg: &Arc<AlgebraDescriptor>, rows: &[&[f64]]) -> Element {
        Element::from_matrix(alg, CMat::from_real_rows(rows)).unwrap()
    }

    fn brute_pair(a: &CMat, b: &CMat, x: &CMat) -> CMat {
        (&(&(a * x) * b) + &(&(b * x) * a)).scale(0.5)
    }

    #[test]
    fn product_examples() {
        let alg = full(2);
        let a = mat(&alg, &[&[0.0, 1.0], &[1.0, 0.0]]);
        let b = Element::from_diag(&alg, &[1.0, 0.0]).unwrap();
        let ab = jordan_product(&a, &b).unwrap();
        assert_eq!(ab, mat(&alg, &[&[0.0, 0.5], &[0.5, 0.0]]));
        assert_eq!(jordan_product(&b, &b).unwrap(), b);
        assert_eq!(jordan_product(&a, &Element::unit(&alg)).unwrap(), a);
        let other = Element::unit(&full(3));
        assert_eq!(jordan_product(&a, &other).unwrap_err(), Error::BackendMismatch);
    }

    #[test]
    fn u_examples() {
        let alg = full(2);
        let mut rng = seeded_rng(11, 0);
        let x = random_general(&alg, &mut rng);
        assert!(u_operator(&Element::unit(&alg), &x).unwrap().distance(&x).unwrap() < 1e-15);

        let p = Element::from_diag(&alg, &[1.0, 0.0]).unwrap();
        let b = mat(&alg, &[&[0.7, 0.2], &[0.2, 0.4]]);
        let upb = u_operator(&p, &b).unwrap();
        assert!(upb.distance(&Element::from_diag(&alg, &[0.7, 0.0]).unwrap()).unwrap() < 1e-15);

        let half = Element::from_diag(&alg, &[0.5, 0.5]).unwrap();
        let n = u_operator(&half, &half.adjoint()).unwrap().norm();
        assert!((n - 0.125).abs() < 1e-15);
    }

    #[test]
    fn u_pair_brute_force() {
        let alg = full(2);
        let a = Element::from_diag(&alg, &[1.0, 0.0]).unwrap();
        let b = Element::from_diag(&alg, &[0.0, 1.0]).unwrap();
        let x = mat(&alg, &[&[0.0, 1.0], &[1.0, 0.0]]);
        let expect = brute_pair(a.matrix().unwrap(), b.matrix().unwrap(), x.matrix().unwrap());
        assert_eq!(expect, CMat::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]));
        let got = u_pair(&a, &b, &x).unwrap();
        assert!((&expect - got.matrix().unwrap()).max_abs() < 1e-15);

        let mut rng = seeded_rng(12, 0);
        let alg = full(3);
        for _ in 0..20 {
            let (a, b, x) = (
                random_general(&alg, &mut rng),
                random_general(&alg, &mut rng),
                random_general(&alg, &mut rng),
            );
            let expect = brute_pair(a.matrix().unwrap(), b.matrix().unwrap(), x.matrix().unwrap());
            assert!((&expect - u_pair(&a, &b, &x).unwrap().matrix().unwrap()).max_abs() < 1e-12);
            let aa = u_pair(&a, &a, &x).unwrap().distance(&u_operator(&a, &x).unwrap()).unwrap();
            assert!(aa < 1e-12);
            let axa = &(a.matrix().unwrap() * x.matrix().unwrap()) * a.matrix().unwrap();
            assert!((&axa - u_operator(&a, &x).unwrap().matrix().unwrap()).max_abs() < 1e-12);
        }
        let one = Element::unit(&alg);
        let x = random_general(&alg, &mut rng);
        assert!(u_pair(&one, &one, &x).unwrap().distance(&x).unwrap() < 1e-15);
    }

    #[test]
    fn backend_kinds() {
        assert_eq!(JordanBackend::full_matrix(2).unwrap().kind(), BackendKind::FullMatrix);
        let sym = JordanBackend::symmetric(3).unwrap();
        let mut rng = seeded_rng(13, 0);
        let a = random_general(sym.algebra(), &mut rng);
        let b = random_general(sym.algebra(), &mut rng);
        assert!(sym.closure_defect(&a, &b).unwrap() < 1e-14);
        assert!(JordanBackend::new(&AlgebraDescriptor::diagonal(2).unwrap()).is_err());
    }

    #[test]
    fn peirce_examples() {
        let alg = full(2);
        let p = Element::from_diag(&alg, &[1.0, 0.0]).unwrap();
        let dec = peirce(&p, &p).unwrap();
        assert_eq!(dec.part(2), &p);
        assert_eq!(dec.part(1).norm(), 0.0);
        assert_eq!(dec.part(0).norm(), 0.0);

        let x = mat(&alg, &[&[0.0, 1.0], &[1.0, 0.0]]);
        let dec = peirce(&p, &x).unwrap();
        assert!(dec.part(1).distance(&x).unwrap() < 1e-15);
        assert!(dec.part(0).norm() < 1e-15 && dec.part(2).norm() < 1e-15);

        let dec = peirce(&p, &Element::unit(&alg)).unwrap();
        assert_eq!(dec.part(2), &p);
        assert_eq!(dec.part(0), &Element::from_diag(&alg, &[0.0, 1.0]).unwrap());
        assert_eq!(dec.part(1).norm(), 0.0);

        let bad = Element::from_diag(&alg, &[0.5, 0.0]).unwrap();
        assert!(matches!(peirce(&bad, &x), Err(Error::NotProjection(_))));
    }

    #[test]
    fn peirce_rules_identity_is_exact() {
        for alg in [full(3), AlgebraDescriptor::symmetric_jordan(3).unwrap()] {
            let report = check_peirce_rules(&Element::unit(&alg), 10, 3).unwrap();
            assert_eq!(report.max(), 0.0, "{report:?}");
        }
    }

    #[test]
    fn peirce_rules_sampled() {
        let alg = full(2);
        let report = check_peirce_rules(&Element::from_diag(&alg, &[1.0, 0.0]).unwrap(), 100, 5).unwrap();
        assert!(report.max() <= 1e-10, "{report:?}");
        let alg = full(3);
        let report = check_peirce_rules(&Element::from_diag(&alg, &[1.0, 1.0, 0.0]).unwrap(), 100, 6).unwrap();
        assert!(report.max() <= 1e-10, "{report:?}");
        let json = serde_json::to_value(&report).unwrap();
        assert!(json.is_array());
    }

    #[test]
    fn orthogonality() {
        let alg = full(2);
        let e1 = Element::from_diag(&alg, &[1.0, 0.0]).unwrap();
        let e2 = Element::from_diag(&alg, &[0.0, 1.0]).unwrap();
        assert!(are_orthogonal(&e1, &e2, 1e-12));
        assert_eq!(e1.add(&e2).unwrap().norm(), 1.0);
        assert!(!are_orthogonal(&e1, &e1, 1e-12));

        // off-diagonal general elements
        let n = Element::from_matrix(&alg, CMat::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])).unwrap();
        assert!(!are_orthogonal(&n, &n, 1e-12));
        let m = Element::from_matrix(&alg, CMat::from_real_rows(&[&[0.0, 0.0], &[0.0, 2.0]])).unwrap();
        assert!(!are_orthogonal(&n, &m, 1e-12));

        let sym = AlgebraDescriptor::symmetric_jordan(2).unwrap();
        let a = Element::from_matrix(&sym, CMat::from_fn(2, 2, |i, j| if i == 0 && j == 0 { C64::new(0.0, 1.0) } else { C64::new(0.0, 0.0) })).unwrap();
        let b = Element::from_diag(&sym, &[0.0, -3.0]).unwrap();
        assert!(are_orthogonal(&a, &b, 1e-12));
        assert!(!are_orthogonal(&a, &a, 1e-12));
    }

    #[test]
    fn jordan_identity_random() {
        let mut rng = seeded_rng(21, 0);
        for alg in [full(3), AlgebraDescriptor::symmetric_jordan(3).unwrap()] {
            for _ in 0..20 {
                let a = random_general(&alg, &mut rng);
                let b = random_self_adjoint(&alg, &mut rng);
                let b2 = b.jordan(&b).unwrap();
                let lhs = a.jordan(&b).unwrap().jordan(&b2).unwrap();
                let rhs = a.jordan(&b2).unwrap().jordan(&b).unwrap();
                assert!(lhs.distance(&rhs).unwrap() < 1e-12);
            }
        }
    }
}
