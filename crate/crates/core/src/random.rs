//! Seeded random draws of algebra elements.
//!
//! Every generator takes an explicit RNG. [`seeded_rng`] gives one ChaCha8
//! stream per `(seed, stream)` pair, so instance `i` of dimension `n` is
//! reproducible regardless of how work is scheduled.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgebraDescriptor, Element, Entries, Kind};
use crate::error::{Error, Result};
use crate::matrix::{CMat, C64};

pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream id for instance `index` of dimension `dim`.
pub fn stream_id(dim: usize, index: usize) -> u64 {
    ((dim as u64) << 32) | index as u64
}

fn gauss<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_gauss<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(gauss(rng), gauss(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

/// Unit vector drawn uniformly from the complex sphere in `ℂⁿ`.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| complex_gauss(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

fn block<R: Rng + ?Sized>(kind: &Kind, dim: usize, general: bool, rng: &mut R) -> CMat {
    match kind {
        Kind::FullMatrix => {
            let g = CMat::from_fn(dim, dim, |_, _| complex_gauss(rng));
            if general {
                g
            } else {
                g.hermitian_part()
            }
        }
        Kind::SymmetricJordan => {
            let g = if general {
                CMat::from_fn(dim, dim, |_, _| complex_gauss(rng))
            } else {
                CMat::from_fn(dim, dim, |_, _| C64::new(gauss(rng), 0.0))
            };
            (&g + &g.transpose()).scale(0.5)
        }
        Kind::Diagonal => {
            let d: Vec<f64> = (0..dim).map(|_| gauss(rng)).collect();
            CMat::from_real_diag(&d)
        }
        Kind::DirectSum(summands) => {
            let mut m = CMat::zeros(dim, dim);
            let mut offset = 0;
            for s in summands {
                let b = block(&s.kind, s.dim, general, rng);
                for i in 0..s.dim {
                    for j in 0..s.dim {
                        m[(offset + i, offset + j)] = b[(i, j)];
                    }
                }
                offset += s.dim;
            }
            m
        }
        Kind::Corner(_) => unreachable!("corners are drawn through their parent"),
    }
}

fn draw<R: Rng + ?Sized>(alg: &Arc<AlgebraDescriptor>, general: bool, rng: &mut R) -> Element {
    let entries = match &alg.kind {
        Kind::Corner(c) => {
            let parent = draw(&c.parent, general, rng);
            c.compress_entries(parent.entries())
        }
        Kind::Diagonal => Entries::Coords((0..alg.dim).map(|_| gauss(rng)).collect()),
        kind => Entries::Matrix(block(kind, alg.dim, general, rng)),
    };
    let frob = entries.frobenius();
    let scaled = if frob > 0.0 { entries.scale(1.0 / frob) } else { entries };
    Element::new(alg, scaled).expect("random draw lies in its algebra")
}

/// Self-adjoint element with unit Frobenius norm (GUE-like for full matrices,
/// real symmetric for the symmetric backend).
pub fn random_self_adjoint<R: Rng + ?Sized>(alg: &Arc<AlgebraDescriptor>, rng: &mut R) -> Element {
    draw(alg, false, rng)
}

/// Arbitrary element with unit Frobenius norm (complex Gaussian; complex
/// symmetric for the symmetric backend; real for coordinate algebras).
pub fn random_general<R: Rng + ?Sized>(alg: &Arc<AlgebraDescriptor>, rng: &mut R) -> Element {
    draw(alg, true, rng)
}

/// Self-adjoint element with the given eigenvalues in a random eigenbasis.
pub fn random_with_spectrum<R: Rng + ?Sized>(
    alg: &Arc<AlgebraDescriptor>,
    values: &[f64],
    rng: &mut R,
) -> Result<Element> {
    if values.len() != alg.dim() {
        return Err(Error::PreconditionFailed(format!(
            "need {} eigenvalues, got {}",
            alg.dim(),
            values.len()
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    random_self_adjoint(alg, rng).replace_spectrum(&sorted)
}

/// Projection of the given rank in a random eigenbasis.
pub fn random_projection<R: Rng + ?Sized>(
    alg: &Arc<AlgebraDescriptor>,
    rank: usize,
    rng: &mut R,
) -> Result<Element> {
    let n = alg.dim();
    if rank > n {
        return Err(Error::ParameterOutOfRange(format!("rank {rank} exceeds dimension {n}")));
    }
    let values: Vec<f64> = (0..n).map(|i| if i < n - rank { 0.0 } else { 1.0 }).collect();
    random_with_spectrum(alg, &values, rng)
}

/// Positive element with top eigenvalue `top` and bottom eigenvalue `bottom`
/// (when the dimension allows two), the rest uniform in between.
pub fn random_positive<R: Rng + ?Sized>(
    alg: &Arc<AlgebraDescriptor>,
    bottom: f64,
    top: f64,
    rng: &mut R,
) -> Result<Element> {
    let n = alg.dim();
    let mut values = vec![top];
    if n >= 2 {
        values.push(bottom);
    }
    while values.len() < n {
        values.push(rng.random_range(bottom..=top));
    }
    random_with_spectrum(alg, &values, rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = seeded_rng(7, stream_id(3, 1)).random();
        let b: f64 = seeded_rng(7, stream_id(3, 1)).random();
        let c: f64 = seeded_rng(7, stream_id(3, 2)).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn projections_have_requested_rank() {
        let mut rng = seeded_rng(1, 0);
        for alg in [
            AlgebraDescriptor::full_matrix(4).unwrap(),
            AlgebraDescriptor::symmetric_jordan(4).unwrap(),
            AlgebraDescriptor::diagonal(4).unwrap(),
        ] {
            for rank in 0..=4 {
                let p = random_projection(&alg, rank, &mut rng).unwrap();
                assert!(p.is_projection(1e-12));
                let trace: f64 = p.spectrum().unwrap().values.iter().sum();
                assert!((trace - rank as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn draws_stay_in_structured_algebras() {
        let mut rng = seeded_rng(2, 0);
        let sum = AlgebraDescriptor::direct_sum(vec![
            (*AlgebraDescriptor::symmetric_jordan(2).unwrap()).clone(),
            (*AlgebraDescriptor::diagonal(2).unwrap()).clone(),
        ])
        .unwrap();
        for _ in 0..10 {
            let g = random_general(&sum, &mut rng);
            assert!(Element::new(&sum, g.entries().clone()).is_ok());
            let h = random_positive(&sum, 0.2, 1.0, &mut rng).unwrap();
            assert!((h.norm() - 1.0).abs() < 1e-12);
            assert!((h.min_spectrum().unwrap() - 0.2).abs() < 1e-12);
        }
    }
}
