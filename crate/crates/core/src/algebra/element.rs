use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::{AlgebraDescriptor, SYM_REL_TOL};
use crate::eigen::{jacobi_eigen, Spectrum};
use crate::error::{Error, Result};
use crate::matrix::{CMat, C64};

/// Raw storage of an element.
#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    Matrix(CMat),
    Coords(Vec<f64>),
}

impl Entries {
    fn zip_with(&self, other: &Entries, f: impl Fn(C64, C64) -> C64, g: impl Fn(f64, f64) -> f64) -> Entries {
        match (self, other) {
            (Entries::Matrix(a), Entries::Matrix(b)) => {
                let data = a.as_slice().iter().zip(b.as_slice()).map(|(&x, &y)| f(x, y)).collect();
                Entries::Matrix(CMat::from_row_major(a.rows(), a.cols(), data).expect("shape"))
            }
            (Entries::Coords(a), Entries::Coords(b)) => {
                Entries::Coords(a.iter().zip(b).map(|(&x, &y)| g(x, y)).collect())
            }
            _ => unreachable!("entries of one algebra share a storage kind"),
        }
    }

    pub(crate) fn add(&self, other: &Entries) -> Entries {
        self.zip_with(other, |x, y| x + y, |x, y| x + y)
    }

    pub(crate) fn sub(&self, other: &Entries) -> Entries {
        self.zip_with(other, |x, y| x - y, |x, y| x - y)
    }

    pub(crate) fn scale(&self, s: f64) -> Entries {
        match self {
            Entries::Matrix(a) => Entries::Matrix(a.scale(s)),
            Entries::Coords(c) => Entries::Coords(c.iter().map(|x| x * s).collect()),
        }
    }

    /// Associative product; for coordinates it is pointwise.
    pub(crate) fn product(&self, other: &Entries) -> Entries {
        match (self, other) {
            (Entries::Matrix(a), Entries::Matrix(b)) => Entries::Matrix(a * b),
            (Entries::Coords(a), Entries::Coords(b)) => {
                Entries::Coords(a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            _ => unreachable!("entries of one algebra share a storage kind"),
        }
    }

    /// `½(ab + ba)`.
    pub(crate) fn jordan(&self, other: &Entries) -> Entries {
        match (self, other) {
            (Entries::Matrix(a), Entries::Matrix(b)) => {
                let ab = a * b;
                let ba = b * a;
                Entries::Matrix((&ab + &ba).scale(0.5))
            }
            (Entries::Coords(a), Entries::Coords(b)) => {
                Entries::Coords(a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            _ => unreachable!("entries of one algebra share a storage kind"),
        }
    }

    pub(crate) fn adjoint(&self) -> Entries {
        match self {
            Entries::Matrix(a) => Entries::Matrix(a.adjoint()),
            Entries::Coords(c) => Entries::Coords(c.clone()),
        }
    }

    pub(crate) fn frobenius(&self) -> f64 {
        match self {
            Entries::Matrix(a) => a.frobenius_norm(),
            Entries::Coords(c) => c.iter().map(|x| x * x).sum::<f64>().sqrt(),
        }
    }
}

/// A member of a unital algebra, with a lazily computed eigensystem.
///
/// Elements are immutable; the cached spectrum is computed once and then
/// only read, so elements can be shared freely across threads.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(into = "super::json::ElementRepr", try_from = "super::json::ElementRepr")]
pub struct Element {
    algebra: Arc<AlgebraDescriptor>,
    entries: Entries,
    spectrum: OnceLock<Spectrum>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.entries == other.entries
    }
}

impl Element {
    pub fn new(algebra: &Arc<AlgebraDescriptor>, entries: Entries) -> Result<Self> {
        algebra.validate(&entries)?;
        Ok(Self::raw(algebra, entries))
    }

    pub fn from_matrix(algebra: &Arc<AlgebraDescriptor>, m: CMat) -> Result<Self> {
        Self::new(algebra, Entries::Matrix(m))
    }

    pub fn from_coords(algebra: &Arc<AlgebraDescriptor>, c: Vec<f64>) -> Result<Self> {
        Self::new(algebra, Entries::Coords(c))
    }

    /// Real diagonal element; works for coordinate and matrix storage alike.
    pub fn from_diag(algebra: &Arc<AlgebraDescriptor>, diag: &[f64]) -> Result<Self> {
        if algebra.uses_coords() {
            Self::from_coords(algebra, diag.to_vec())
        } else {
            Self::from_matrix(algebra, CMat::from_real_diag(diag))
        }
    }

    pub(crate) fn raw(algebra: &Arc<AlgebraDescriptor>, entries: Entries) -> Self {
        Self {
            algebra: Arc::clone(algebra),
            entries,
            spectrum: OnceLock::new(),
        }
    }

    pub fn unit(algebra: &Arc<AlgebraDescriptor>) -> Self {
        Self::raw(algebra, algebra.unit_entries())
    }

    pub fn zero(algebra: &Arc<AlgebraDescriptor>) -> Self {
        Self::raw(algebra, algebra.zero_entries())
    }

    pub fn algebra(&self) -> &Arc<AlgebraDescriptor> {
        &self.algebra
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn matrix(&self) -> Option<&CMat> {
        match &self.entries {
            Entries::Matrix(m) => Some(m),
            Entries::Coords(_) => None,
        }
    }

    pub fn coords(&self) -> Option<&[f64]> {
        match &self.entries {
            Entries::Coords(c) => Some(c),
            Entries::Matrix(_) => None,
        }
    }

    /// Copy without the cached eigensystem.
    pub fn fresh(&self) -> Self {
        Self::raw(&self.algebra, self.entries.clone())
    }

    pub fn same_algebra(&self, other: &Element) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra
    }

    pub(crate) fn check_same(&self, other: &Element) -> Result<()> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(Self::raw(&self.algebra, self.entries.add(&other.entries)))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(Self::raw(&self.algebra, self.entries.sub(&other.entries)))
    }

    pub fn scale(&self, s: f64) -> Element {
        Self::raw(&self.algebra, self.entries.scale(s))
    }

    /// Associative product `ab`. Fails on Jordan-only algebras.
    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        if !self.algebra.is_associative() {
            return Err(Error::NotAssociative);
        }
        Ok(Self::raw(&self.algebra, self.entries.product(&other.entries)))
    }

    /// `a ∘ b = ½(ab + ba)`.
    pub fn jordan(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(Self::raw(&self.algebra, self.entries.jordan(&other.entries)))
    }

    /// `a² = a ∘ a`, defined in every algebra here.
    pub fn square(&self) -> Element {
        Self::raw(&self.algebra, self.entries.product(&self.entries))
    }

    pub fn adjoint(&self) -> Element {
        Self::raw(&self.algebra, self.entries.adjoint())
    }

    /// `(a + a*) / 2`.
    pub fn hermitian_part(&self) -> Element {
        match &self.entries {
            Entries::Matrix(m) => Self::raw(&self.algebra, Entries::Matrix(m.hermitian_part())),
            Entries::Coords(_) => self.clone(),
        }
    }

    /// `‖a − a*‖_F`.
    pub fn self_adjoint_defect(&self) -> f64 {
        match &self.entries {
            Entries::Matrix(m) => m.hermitian_defect(),
            Entries::Coords(_) => 0.0,
        }
    }

    /// Frobenius (Euclidean) norm of the stored entries; bounds [`Element::norm`] from above.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.frobenius()
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.self_adjoint_defect() <= SYM_REL_TOL * self.entries.frobenius()
    }

    fn require_self_adjoint(&self) -> Result<()> {
        let residual = self.self_adjoint_defect();
        let allowed = SYM_REL_TOL * self.entries.frobenius();
        if residual > allowed {
            Err(Error::NotSelfAdjoint { residual, allowed })
        } else {
            Ok(())
        }
    }

    /// Eigensystem of a self-adjoint element, computed in the element's own
    /// algebra (for corners this is `σ_{pAp}`).
    pub fn spectrum(&self) -> Result<&Spectrum> {
        if let Some(s) = self.spectrum.get() {
            return Ok(s);
        }
        self.require_self_adjoint()?;
        let computed = match &self.entries {
            Entries::Matrix(m) => jacobi_eigen(m)?,
            Entries::Coords(c) => {
                let mut values = c.clone();
                values.sort_by(f64::total_cmp);
                Spectrum {
                    values,
                    vectors: None,
                }
            }
        };
        Ok(self.spectrum.get_or_init(|| computed))
    }

    pub fn min_spectrum(&self) -> Result<f64> {
        Ok(self.spectrum()?.min())
    }

    pub fn max_spectrum(&self) -> Result<f64> {
        Ok(self.spectrum()?.max())
    }

    /// The C*-norm: spectral radius for self-adjoint elements, largest
    /// singular value otherwise, sup norm for coordinates.
    pub fn norm(&self) -> f64 {
        match &self.entries {
            Entries::Coords(c) => c.iter().map(|x| x.abs()).fold(0.0, f64::max),
            Entries::Matrix(m) => {
                if self.is_self_adjoint() {
                    self.spectrum()
                        .expect("Jacobi failed on a self-adjoint matrix")
                        .spectral_radius()
                } else {
                    let gram = (&m.adjoint() * m).hermitian_part();
                    let s = jacobi_eigen(&gram).expect("Jacobi failed on a Gram matrix");
                    s.max().max(0.0).sqrt()
                }
            }
        }
    }

    pub fn distance(&self, other: &Element) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.is_self_adjoint() && self.min_spectrum().is_ok_and(|m| m >= -tol)
    }

    pub fn is_projection(&self, tol: f64) -> bool {
        if !self.is_self_adjoint() {
            return false;
        }
        let defect = Self::raw(&self.algebra, self.entries.product(&self.entries).sub(&self.entries));
        defect.norm() <= tol
    }

    /// Replaces every eigenvalue `λ` by `f(λ)`: `V f(Λ) V*`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Result<Element> {
        let spec = self.spectrum()?;
        let entries = match &self.entries {
            Entries::Coords(c) => Entries::Coords(c.iter().map(|&x| f(x)).collect()),
            Entries::Matrix(_) => {
                let values: Vec<f64> = spec.values.iter().map(|&x| f(x)).collect();
                let v = spec.vectors.as_ref().expect("matrix spectra carry vectors");
                Entries::Matrix(CMat::spectral_synthesis(v, &values).hermitian_part())
            }
        };
        Ok(Self::raw(&self.algebra, entries))
    }

    /// Like [`Element::map_spectrum`], but the new eigenvalue may depend on
    /// the position in the ascending ordering.
    pub fn replace_spectrum(&self, values: &[f64]) -> Result<Element> {
        let spec = self.spectrum()?;
        if values.len() != spec.values.len() {
            return Err(Error::PreconditionFailed(format!(
                "expected {} eigenvalues, got {}",
                spec.values.len(),
                values.len()
            )));
        }
        let entries = match &self.entries {
            Entries::Coords(c) => {
                let mut order: Vec<usize> = (0..c.len()).collect();
                order.sort_by(|&i, &j| c[i].total_cmp(&c[j]));
                let mut out = vec![0.0; c.len()];
                for (rank, &idx) in order.iter().enumerate() {
                    out[idx] = values[rank];
                }
                Entries::Coords(out)
            }
            Entries::Matrix(_) => {
                let v = spec.vectors.as_ref().expect("matrix spectra carry vectors");
                Entries::Matrix(CMat::spectral_synthesis(v, values).hermitian_part())
            }
        };
        Ok(Self::raw(&self.algebra, entries))
    }
}

/// Eigensystem of a self-adjoint element.
pub fn hermitian_eigen(a: &Element) -> Result<Spectrum> {
    a.spectrum().cloned()
}

pub fn op_norm(a: &Element) -> f64 {
    a.norm()
}

/// `min σ(a)` in the element's own algebra.
pub fn min_spectrum(a: &Element) -> Result<f64> {
    a.min_spectrum()
}
