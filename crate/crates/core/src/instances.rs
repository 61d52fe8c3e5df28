//! Seeded `(p, b)` instances for the witness engine.
//!
//! Instance `i` of an algebra of dimension `n` uses the family `i mod 4` and a
//! projection of rank `1 + (i / 4) mod n`, so every rank meets every family.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraDescriptor, Corner, Element};
use crate::error::{Error, Result};
use crate::matrix::{CMat, C64};
use crate::random::{random_positive, random_projection, random_unit_vector, random_with_spectrum, seeded_rng, stream_id};
use crate::sphere::PureState;

/// Instances with `‖b − p‖` below this are redrawn.
pub const MIN_SEPARATION: f64 = 0.05;

const MAX_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `b` inside the corner of `p`.
    Corner,
    /// `b = p + z′` with `z′` in the complementary corner.
    Tail,
    /// `b = q + b′` with `q ≤ p` rank one and `b′` in the corner of `1 − q`.
    MixedSpectrum,
    /// Normalized convex combination of `p` and a random positive element.
    NearP,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Corner, Family::Tail, Family::MixedSpectrum, Family::NearP];

    pub fn name(self) -> &'static str {
        match self {
            Family::Corner => "corner",
            Family::Tail => "tail",
            Family::MixedSpectrum => "mixed_spectrum",
            Family::NearP => "near_p",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Instance {
    pub index: usize,
    pub family: Family,
    pub rank: usize,
    pub p: Element,
    pub b: Element,
}

/// Instance number `index` for `alg`, fully determined by `seed`.
pub fn generate(alg: &Arc<AlgebraDescriptor>, seed: u64, index: usize) -> Result<Instance> {
    let n = alg.dim();
    let rank = 1 + (index / 4) % n;
    let requested = Family::ALL[index % 4];
    let mut rng = seeded_rng(seed, stream_id(n, index));
    for _ in 0..MAX_ATTEMPTS {
        let p = random_projection(alg, rank, &mut rng)?;
        let (family, b) = draw_b(&p, rank, requested, &mut rng)?;
        let b = b.hermitian_part();
        if b.distance(&p)? >= MIN_SEPARATION {
            return Ok(Instance {
                index,
                family,
                rank,
                p,
                b,
            });
        }
    }
    Err(Error::PreconditionFailed(format!(
        "could not draw a {requested} instance with ‖b − p‖ ≥ {MIN_SEPARATION}"
    )))
}

fn draw_b<R: Rng + ?Sized>(p: &Element, rank: usize, requested: Family, rng: &mut R) -> Result<(Family, Element)> {
    let n = p.algebra().dim();
    let family = match requested {
        Family::Corner if rank == 1 => Family::Tail,
        Family::Tail | Family::MixedSpectrum if rank == n => Family::Corner,
        f => f,
    };
    let b = match family {
        Family::Corner => {
            let corner = Corner::new(p)?;
            let bottom = if rng.random_bool(0.25) { 0.0 } else { rng.random_range(0.0..0.95) };
            corner.embed(&random_positive(corner.algebra(), bottom, 1.0, rng)?)?
        }
        Family::Tail => {
            let co = Corner::new(&Element::unit(p.algebra()).sub(p)?)?;
            let top = if rng.random_bool(0.2) { 1.0 } else { rng.random_range(MIN_SEPARATION..1.0) };
            let bottom = rng.random_range(0.0..=top);
            p.add(&co.embed(&random_positive(co.algebra(), bottom, top, rng)?)?)?
        }
        Family::MixedSpectrum => {
            let corner = Corner::new(p)?;
            let q = corner.embed(&rank_one_projection(corner.algebra(), rng)?)?.hermitian_part();
            let rest = Corner::new(&Element::unit(p.algebra()).sub(&q)?)?;
            let top = rng.random_range(0.3..=1.0);
            q.add(&rest.embed(&random_positive(rest.algebra(), 0.0, top, rng)?)?)?
        }
        Family::NearP => {
            let t = rng.random_range(0.05..=0.6);
            let bottom = rng.random_range(0.0..1.0);
            let r = random_positive(p.algebra(), bottom, 1.0, rng)?;
            let mix = p.scale(1.0 - t).add(&r.scale(t))?.hermitian_part();
            let norm = mix.norm();
            mix.scale(1.0 / norm)
        }
    };
    Ok((family, b))
}

/// `ξξ*` for a random unit vector, in matrix-stored algebras; a random
/// coordinate projection otherwise.
fn rank_one_projection<R: Rng + ?Sized>(alg: &Arc<AlgebraDescriptor>, rng: &mut R) -> Result<Element> {
    let n = alg.dim();
    if alg.uses_coords() {
        let i = rng.random_range(0..n);
        return Element::from_coords(alg, (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect());
    }
    let v = random_unit_vector(n, rng);
    match Element::from_matrix(alg, CMat::from_fn(n, n, |i, j| v[i] * v[j].conj())) {
        Ok(e) => Ok(e),
        // algebras with extra structure: rotate a diagonal rank-one projection
        Err(_) => random_projection(alg, 1, rng),
    }
}

/// A state `φ` and positives `a, b` with `φ(U_a(b)) = 0`, in a full matrix
/// algebra: `b` is singular with unit kernel vector `k`, `ξ` is a perturbation
/// of `k`, and `a = vv*/⟨ξ, v⟩ + (1 − ξξ*)M(1 − ξξ*)` with `v` a phase of `k`,
/// so that `aξ = v ∈ ker b`.
pub fn cs_triple<R: Rng + ?Sized>(alg: &Arc<AlgebraDescriptor>, rng: &mut R) -> Result<(PureState, Element, Element)> {
    let n = alg.dim();
    if alg.uses_coords() || n < 2 {
        return Err(Error::PreconditionFailed("needs a matrix algebra of dimension ≥ 2".into()));
    }
    let mut values: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
    values[0] = 0.0;
    let b = random_with_spectrum(alg, &values, rng)?;
    let kernel = b.spectrum()?.vectors.as_ref().expect("matrix spectra carry vectors").column(0);
    let noise = random_unit_vector(n, rng);
    let state = PureState::from_unnormalized(kernel.iter().zip(&noise).map(|(k, r)| k + r * 0.5).collect())?;
    let xi = state.vector();
    let overlap: C64 = kernel.iter().zip(xi).map(|(k, x)| k.conj() * x).sum();
    let phase = overlap / overlap.norm();
    let v: Vec<C64> = kernel.iter().map(|k| k * phase).collect();
    let vxi = v.iter().zip(xi).map(|(a, x)| a.conj() * x).sum::<C64>().re;
    let rank_one = CMat::from_fn(n, n, |r, c| v[r] * v[c].conj() / vxi);
    let off_xi = CMat::from_fn(n, n, |r, c| {
        let id = if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
        id - xi[r] * xi[c].conj()
    });
    let top = rng.random_range(0.1..2.0);
    let m = random_positive(alg, 0.0, top, rng)?;
    let sandwich = &(&off_xi * m.matrix().expect("matrix algebra")) * &off_xi;
    let a = Element::from_matrix(alg, (&rank_one + &sandwich).hermitian_part())?;
    Ok((state, a, b))
}
