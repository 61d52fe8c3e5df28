//! Continuous functional calculus for self-adjoint elements, restricted to
//! the piecewise-linear functions the witness constructions need.

use serde::{Deserialize, Serialize};

use crate::algebra::{Element, POS_TOL};
use crate::error::{Error, Result};

/// Eigenvalues this far outside a function's domain are clamped onto it.
pub const DOMAIN_MARGIN: f64 = 1e-9;

/// Eigenvalues above this count as support for [`range_projection`].
pub const RANGE_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PiecewiseRepr {
    domain: [f64; 2],
    breakpoints: Vec<[f64; 2]>,
}

/// A continuous piecewise-linear function on `[lo, hi]`, given by its
/// breakpoints (endpoints included).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PiecewiseRepr", into = "PiecewiseRepr")]
pub struct PiecewiseLinear {
    breakpoints: Vec<[f64; 2]>,
}

impl TryFrom<PiecewiseRepr> for PiecewiseLinear {
    type Error = Error;

    fn try_from(r: PiecewiseRepr) -> Result<Self> {
        let f = Self::new(r.breakpoints)?;
        if f.domain() != (r.domain[0], r.domain[1]) {
            return Err(Error::ParameterOutOfRange(format!(
                "domain {:?} does not match breakpoints",
                r.domain
            )));
        }
        Ok(f)
    }
}

impl From<PiecewiseLinear> for PiecewiseRepr {
    fn from(f: PiecewiseLinear) -> Self {
        let (lo, hi) = f.domain();
        Self {
            domain: [lo, hi],
            breakpoints: f.breakpoints,
        }
    }
}

impl PiecewiseLinear {
    pub fn new(breakpoints: Vec<[f64; 2]>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::ParameterOutOfRange("no breakpoints".into()));
        }
        if breakpoints.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::ParameterOutOfRange("non-finite breakpoint".into()));
        }
        if breakpoints.windows(2).any(|w| w[0][0] >= w[1][0]) {
            return Err(Error::ParameterOutOfRange(
                "breakpoints must be strictly ascending".into(),
            ));
        }
        Ok(Self { breakpoints })
    }

    pub fn identity(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![[lo, lo], [hi, hi]])
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breakpoints[0][0], self.breakpoints[self.breakpoints.len() - 1][0])
    }

    pub fn breakpoints(&self) -> &[[f64; 2]] {
        &self.breakpoints
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&t) {
            return Err(Error::DomainViolation { value: t, lo, hi });
        }
        let idx = self.breakpoints.partition_point(|b| b[0] < t);
        let bp = &self.breakpoints;
        if idx < bp.len() && bp[idx][0] == t {
            return Ok(bp[idx][1]);
        }
        let [t0, v0] = bp[idx - 1];
        let [t1, v1] = bp[idx];
        Ok(v0 + (t - t0) / (t1 - t0) * (v1 - v0))
    }

    /// Evaluates after clamping points within `margin` of the domain.
    pub fn eval_clamped(&self, t: f64, margin: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if t < lo - margin || t > hi + margin || t.is_nan() {
            return Err(Error::DomainViolation { value: t, lo, hi });
        }
        self.eval(t.clamp(lo, hi))
    }
}

/// `f(a) = V f(Λ) V*` for self-adjoint `a`, computed in `a`'s own algebra.
pub fn apply_fc(fun: &PiecewiseLinear, a: &Element) -> Result<Element> {
    let spec = a.spectrum()?;
    for &x in &spec.values {
        fun.eval_clamped(x, DOMAIN_MARGIN)?;
    }
    a.map_spectrum(|x| {
        fun.eval_clamped(x, DOMAIN_MARGIN)
            .expect("eigenvalues were checked against the domain")
    })
}

/// `f(t) = ½ + t / (2‖c‖)` on `[0, ‖c‖]`.
pub fn make_f(norm_c: f64) -> Result<PiecewiseLinear> {
    if norm_c.is_nan() || norm_c <= 0.0 || !norm_c.is_finite() {
        return Err(Error::NonpositiveParameter(norm_c));
    }
    PiecewiseLinear::new(vec![[0.0, 0.5], [norm_c, 1.0]])
}

/// `f⁻¹(s) = 2‖c‖(s − ½)` on `[0, 1]`.
pub fn make_f_inv(norm_c: f64) -> Result<PiecewiseLinear> {
    if norm_c.is_nan() || norm_c <= 0.0 || !norm_c.is_finite() {
        return Err(Error::NonpositiveParameter(norm_c));
    }
    PiecewiseLinear::new(vec![[0.0, -norm_c], [0.5, 0.0], [1.0, norm_c]])
}

/// One on `[0, t₀+ε]`, affine down to zero at `1−ε`, zero on `[1−ε, 1]`.
pub fn make_g(t0: f64, eps: f64) -> Result<PiecewiseLinear> {
    if !(0.0..1.0).contains(&t0) {
        return Err(Error::ParameterOutOfRange(format!("t0 = {t0} not in [0, 1)")));
    }
    if !(eps > 0.0 && eps < (1.0 - t0) / 2.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "eps = {eps} not in (0, {})",
            (1.0 - t0) / 2.0
        )));
    }
    PiecewiseLinear::new(vec![[0.0, 1.0], [t0 + eps, 1.0], [1.0 - eps, 0.0], [1.0, 0.0]])
}

/// Identity on `[0, ‖z‖−ε]`, ramps up to one at `‖z‖`, one on `[‖z‖, 1]`.
pub fn make_h(norm_z: f64, eps: f64) -> Result<PiecewiseLinear> {
    if !(norm_z > 0.0 && norm_z <= 1.0) {
        return Err(Error::ParameterOutOfRange(format!("norm_z = {norm_z} not in (0, 1]")));
    }
    if !(eps > 0.0 && eps < norm_z) {
        return Err(Error::ParameterOutOfRange(format!("eps = {eps} not in (0, {norm_z})")));
    }
    let knee = norm_z - eps;
    let mut bp = vec![[0.0, 0.0], [knee, knee], [norm_z, 1.0]];
    if norm_z < 1.0 {
        bp.push([1.0, 1.0]);
    }
    PiecewiseLinear::new(bp)
}

/// Positive square root.
pub fn sqrt_pos(a: &Element) -> Result<Element> {
    require_positive(a)?;
    a.map_spectrum(|x| x.max(0.0).sqrt())
}

/// Spectral projection onto eigenvalues above [`RANGE_THRESHOLD`].
pub fn range_projection(a: &Element) -> Result<Element> {
    range_projection_with(a, RANGE_THRESHOLD)
}

pub fn range_projection_with(a: &Element, threshold: f64) -> Result<Element> {
    require_positive(a)?;
    a.map_spectrum(|x| if x > threshold { 1.0 } else { 0.0 })
}

fn require_positive(a: &Element) -> Result<()> {
    let min = a.min_spectrum()?;
    if min < -POS_TOL {
        return Err(Error::NotPositive(min));
    }
    Ok(())
}
