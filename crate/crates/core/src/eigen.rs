//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation first rotates the phase of the pivot `a_pq` onto the
//! positive real axis and then applies the classical real plane rotation,
//! so real symmetric input stays real throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{CMat, C64};

/// Sweep cap. Convergence is quadratic; hitting the cap means a kernel bug.
pub const MAX_SWEEPS: usize = 60;

/// Stop once the off-diagonal Frobenius mass is below this times `‖a‖_F`.
pub const OFF_DIAGONAL_THRESHOLD: f64 = 1e-14;

/// Eigenvalues in ascending order, with matching orthonormal eigenvector
/// columns for matrix-backed elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// `None` for coordinate (diagonal) algebras, where the eigenvectors
    /// are the standard basis.
    pub vectors: Option<CMat>,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }
}

fn off_diagonal_mass(a: &CMat) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Diagonalizes a Hermitian matrix. The caller is responsible for passing a
/// Hermitian matrix; only the Hermitian part is read.
pub fn jacobi_eigen(a: &CMat) -> Result<Spectrum> {
    assert!(a.is_square(), "eigen decomposition of a non-square matrix");
    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = CMat::identity(n);
    let scale = m.frobenius_norm();
    let threshold = OFF_DIAGONAL_THRESHOLD * scale;

    let mut sweeps = 0;
    let mut off = off_diagonal_mass(&m);
    while off > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_mass(&m);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    Ok(Spectrum {
        values,
        vectors: Some(v.select_columns(&order)),
    })
}

fn rotate(m: &mut CMat, v: &mut CMat, p: usize, q: usize) {
    let gamma = m[(p, q)];
    let g = gamma.norm();
    if g == 0.0 {
        return;
    }
    let alpha = m[(p, p)].re;
    let beta = m[(q, q)].re;
    // phase that makes the pivot real and positive
    let omega = gamma.conj() / g;

    let theta = (beta - alpha) / (2.0 * g);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = omega * (-s);
    let jqq = omega * c;

    let n = m.rows();
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * jpp + akq * jqp;
        m[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        m[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(alpha - t * g, 0.0);
    m[(q, q)] = C64::new(beta + t * g, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}
