//! Unital finite-dimensional algebras and their elements.
//!
//! Every [`Element`] carries the [`AlgebraDescriptor`] it lives in. Matrix
//! kinds store dense complex entries; the diagonal kind stores real
//! coordinates and is the exact commutative model `C({1..n})` with the sup
//! norm. Corner algebras `pAp` store elements in compressed coordinates with
//! respect to an orthonormal basis of the range of `p`.

mod corner;
mod element;
mod json;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use corner::{corner, Corner};
pub use element::{hermitian_eigen, min_spectrum, op_norm, Element, Entries};

use crate::error::{Error, Result};
use crate::matrix::CMat;

/// Relative symmetrization tolerance: `‖a − a*‖ ≤ SYM_REL_TOL · ‖a‖`.
pub const SYM_REL_TOL: f64 = 1e-12;

/// Absolute slack on the bottom of the spectrum for positivity.
pub const POS_TOL: f64 = 1e-10;

/// Upper bound on matrix side length.
pub const MAX_DIM: usize = 256;

/// Projection tolerance used when building corners and Peirce projectors.
pub const PROJECTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KindTag {
    FullMatrix,
    Diagonal,
    SymmetricJordan,
    DirectSum,
    Corner,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Kind {
    FullMatrix,
    Diagonal,
    SymmetricJordan,
    DirectSum(Vec<AlgebraDescriptor>),
    Corner(Box<CornerData>),
}

/// How a corner sits inside its parent.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum CornerMap {
    /// Orthonormal columns spanning the range of the projection.
    Basis(CMat),
    /// Coordinates where a diagonal projection equals one.
    Support(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct CornerData {
    pub(crate) parent: Arc<AlgebraDescriptor>,
    pub(crate) projection: Entries,
    pub(crate) map: CornerMap,
}

/// Which unital algebra an element lives in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "json::DescriptorRepr", try_from = "json::DescriptorRepr")]
pub struct AlgebraDescriptor {
    pub(crate) kind: Kind,
    pub(crate) dim: usize,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InvalidAlgebra(format!(
            "dimension {dim} outside 1..={MAX_DIM}"
        )));
    }
    Ok(())
}

impl AlgebraDescriptor {
    /// `M_n(ℂ)`.
    pub fn full_matrix(n: usize) -> Result<Arc<Self>> {
        check_dim(n)?;
        Ok(Arc::new(Self {
            kind: Kind::FullMatrix,
            dim: n,
        }))
    }

    /// `ℂⁿ` with the sup norm; self-adjoint elements stored as real coordinates.
    pub fn diagonal(n: usize) -> Result<Arc<Self>> {
        check_dim(n)?;
        Ok(Arc::new(Self {
            kind: Kind::Diagonal,
            dim: n,
        }))
    }

    /// Complex symmetric `n × n` matrices under the Jordan product.
    /// Closed under `∘` and `*`, not under the matrix product.
    pub fn symmetric_jordan(n: usize) -> Result<Arc<Self>> {
        check_dim(n)?;
        Ok(Arc::new(Self {
            kind: Kind::SymmetricJordan,
            dim: n,
        }))
    }

    /// Block-diagonal direct sum; elements are block-diagonal matrices.
    pub fn direct_sum(summands: Vec<AlgebraDescriptor>) -> Result<Arc<Self>> {
        if summands.is_empty() {
            return Err(Error::InvalidAlgebra("direct sum needs a summand".into()));
        }
        if summands.iter().any(|s| matches!(s.kind, Kind::Corner(_))) {
            return Err(Error::InvalidAlgebra(
                "corner algebras cannot be direct summands".into(),
            ));
        }
        let dim = summands.iter().map(|s| s.dim).sum();
        check_dim(dim)?;
        Ok(Arc::new(Self {
            kind: Kind::DirectSum(summands),
            dim,
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> KindTag {
        match self.kind {
            Kind::FullMatrix => KindTag::FullMatrix,
            Kind::Diagonal => KindTag::Diagonal,
            Kind::SymmetricJordan => KindTag::SymmetricJordan,
            Kind::DirectSum(_) => KindTag::DirectSum,
            Kind::Corner(_) => KindTag::Corner,
        }
    }

    pub fn summands(&self) -> &[AlgebraDescriptor] {
        match &self.kind {
            Kind::DirectSum(s) => s,
            _ => &[],
        }
    }

    /// Parent algebra for corners.
    pub fn parent(&self) -> Option<&Arc<AlgebraDescriptor>> {
        match &self.kind {
            Kind::Corner(c) => Some(&c.parent),
            _ => None,
        }
    }

    pub fn is_associative(&self) -> bool {
        match &self.kind {
            Kind::FullMatrix | Kind::Diagonal => true,
            Kind::SymmetricJordan => false,
            Kind::DirectSum(s) => s.iter().all(Self::is_associative),
            Kind::Corner(c) => c.parent.is_associative(),
        }
    }

    /// Whether elements are stored as real coordinates.
    pub fn uses_coords(&self) -> bool {
        match &self.kind {
            Kind::Diagonal => true,
            Kind::Corner(c) => c.parent.uses_coords(),
            _ => false,
        }
    }

    pub(crate) fn unit_entries(&self) -> Entries {
        if self.uses_coords() {
            Entries::Coords(vec![1.0; self.dim])
        } else {
            Entries::Matrix(CMat::identity(self.dim))
        }
    }

    pub(crate) fn zero_entries(&self) -> Entries {
        if self.uses_coords() {
            Entries::Coords(vec![0.0; self.dim])
        } else {
            Entries::Matrix(CMat::zeros(self.dim, self.dim))
        }
    }

    /// Checks that raw entries describe a member of this algebra.
    pub(crate) fn validate(&self, entries: &Entries) -> Result<()> {
        match (entries, self.uses_coords()) {
            (Entries::Coords(c), true) => {
                if c.len() != self.dim {
                    return Err(Error::InvalidElement(format!(
                        "expected {} coordinates, got {}",
                        self.dim,
                        c.len()
                    )));
                }
                if c.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidElement("non-finite coordinate".into()));
                }
                Ok(())
            }
            (Entries::Matrix(m), false) => {
                if m.rows() != self.dim || m.cols() != self.dim {
                    return Err(Error::InvalidElement(format!(
                        "expected {n}×{n} matrix, got {}×{}",
                        m.rows(),
                        m.cols(),
                        n = self.dim
                    )));
                }
                if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::InvalidElement("non-finite entry".into()));
                }
                let eta = SYM_REL_TOL * m.frobenius_norm();
                self.validate_matrix(m, eta)
            }
            (Entries::Coords(_), false) => Err(Error::InvalidElement(
                "coordinates given for a matrix algebra".into(),
            )),
            (Entries::Matrix(_), true) => Err(Error::InvalidElement(
                "matrix given for a coordinate algebra".into(),
            )),
        }
    }

    fn validate_matrix(&self, m: &CMat, eta: f64) -> Result<()> {
        match &self.kind {
            Kind::FullMatrix => Ok(()),
            Kind::SymmetricJordan => {
                let defect = m.symmetric_defect();
                if defect > eta {
                    return Err(Error::InvalidElement(format!(
                        "not symmetric (‖a − aᵀ‖ = {defect:e})"
                    )));
                }
                Ok(())
            }
            Kind::Diagonal => {
                // only reachable as a direct summand
                let n = m.rows();
                let mut defect = 0.0f64;
                for i in 0..n {
                    for j in 0..n {
                        let z = m[(i, j)];
                        defect = defect.max(if i == j { z.im.abs() } else { z.norm() });
                    }
                }
                if defect > eta {
                    return Err(Error::InvalidElement(format!(
                        "diagonal summand has off-diagonal or imaginary mass {defect:e}"
                    )));
                }
                Ok(())
            }
            Kind::DirectSum(summands) => {
                let mut offset = 0;
                let mut owner = vec![0usize; self.dim];
                for (idx, s) in summands.iter().enumerate() {
                    owner[offset..offset + s.dim].fill(idx);
                    let block = CMat::from_fn(s.dim, s.dim, |i, j| m[(offset + i, offset + j)]);
                    s.validate_matrix(&block, eta)?;
                    offset += s.dim;
                }
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        if owner[i] != owner[j] && m[(i, j)].norm() > eta {
                            return Err(Error::InvalidElement(format!(
                                "entry ({i}, {j}) lies outside the diagonal blocks"
                            )));
                        }
                    }
                }
                Ok(())
            }
            Kind::Corner(c) => {
                let lifted = c.embed_entries(&Entries::Matrix(m.clone()));
                c.parent.validate(&lifted)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::C64;

    #[test]
    fn rejects_bad_dimensions() {
        assert!(AlgebraDescriptor::full_matrix(0).is_err());
        assert!(AlgebraDescriptor::full_matrix(MAX_DIM + 1).is_err());
        assert!(AlgebraDescriptor::direct_sum(vec![]).is_err());
    }

    #[test]
    fn direct_sum_membership() {
        let a = AlgebraDescriptor::full_matrix(2).unwrap();
        let d = AlgebraDescriptor::diagonal(1).unwrap();
        let sum = AlgebraDescriptor::direct_sum(vec![(*a).clone(), (*d).clone()]).unwrap();
        assert_eq!(sum.dim(), 3);
        assert!(sum.is_associative());

        let ok = CMat::from_real_rows(&[&[1.0, 2.0, 0.0], &[3.0, 4.0, 0.0], &[0.0, 0.0, 5.0]]);
        assert!(Element::from_matrix(&sum, ok).is_ok());

        let bad = CMat::from_real_rows(&[&[1.0, 2.0, 1.0], &[3.0, 4.0, 0.0], &[0.0, 0.0, 5.0]]);
        assert!(Element::from_matrix(&sum, bad).is_err());

        let mut imag = CMat::from_real_diag(&[1.0, 1.0, 1.0]);
        imag[(2, 2)] = C64::new(1.0, 1.0);
        assert!(Element::from_matrix(&sum, imag).is_err());
    }

    #[test]
    fn symmetric_membership() {
        let s = AlgebraDescriptor::symmetric_jordan(2).unwrap();
        assert!(!s.is_associative());
        let sym = CMat::from_fn(2, 2, |i, j| C64::new((i + j) as f64, 1.0));
        assert!(Element::from_matrix(&s, sym).is_ok());
        let asym = CMat::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(Element::from_matrix(&s, asym).is_err());
    }

    #[test]
    fn coords_versus_matrix() {
        let d = AlgebraDescriptor::diagonal(2).unwrap();
        assert!(Element::from_matrix(&d, CMat::identity(2)).is_err());
        assert!(Element::from_coords(&d, vec![1.0]).is_err());
        assert!(Element::from_coords(&d, vec![1.0, f64::NAN]).is_err());
    }
}
