//! The positive unit sphere, spheres around sets, the exact oracle for
//! diagonal algebras and the rank-one state attached to a pair at distance one.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraDescriptor, Corner, Element, Entries};
use crate::error::{Error, Result};
use crate::matrix::{CMat, C64};
use crate::random::{random_positive, random_unit_vector, seeded_rng};

/// Largest dimension accepted by [`commutative_double_sph`].
pub const MAX_GRID_DIM: usize = 4;
/// Largest grid resolution accepted by [`commutative_double_sph`].
pub const MAX_GRID_RES: usize = 256;

/// Positive with norm one, both within `tol`.
pub fn in_positive_sphere(a: &Element, tol: f64) -> bool {
    a.is_positive(tol) && (a.norm() - 1.0).abs() <= tol
}

/// `s` lies in the positive unit sphere at distance one from `target`.
pub fn in_sph_of(target: &Element, s: &Element, tol: f64) -> Result<bool> {
    let dist = s.distance(target)?;
    Ok(in_positive_sphere(s, tol) && (dist - 1.0).abs() <= tol)
}

/// `s` lies in the positive unit sphere at distance one from every target.
pub fn in_sph_of_set(targets: &[Element], s: &Element, tol: f64) -> Result<bool> {
    if !in_positive_sphere(s, tol) {
        return Ok(false);
    }
    for t in targets {
        if (s.distance(t)? - 1.0).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The sphere around a point `a` of the diagonal algebra, as constraints.
///
/// For `x ∈ [0,1]ⁿ`, `|xᵢ − aᵢ| = 1` forces `{xᵢ, aᵢ} = {0, 1}`, so membership
/// needs `max x = 1` plus some `i ∈ I0` with `xᵢ = 0` or `i ∈ I1` with `xᵢ = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereConstraintSet {
    pub dim: usize,
    /// Indices with `aᵢ = 1`.
    #[serde(rename = "I0")]
    pub ones: Vec<usize>,
    /// Indices with `aᵢ = 0`.
    #[serde(rename = "I1")]
    pub zeros: Vec<usize>,
}

impl SphereConstraintSet {
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim
            && x.iter().all(|v| (0.0..=1.0).contains(v))
            && x.contains(&1.0)
            && (self.ones.iter().any(|&i| x[i] == 0.0) || self.zeros.iter().any(|&i| x[i] == 1.0))
    }
}

fn check_target(a: &[f64]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::NotInPositiveSphere("empty coordinate vector".into()));
    }
    if a.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::NotInPositiveSphere(format!("{a:?} leaves [0, 1]")));
    }
    if !a.contains(&1.0) {
        return Err(Error::NotInPositiveSphere(format!("{a:?} has no coordinate equal to 1")));
    }
    Ok(())
}

pub fn commutative_sph_set(a: &[f64]) -> Result<SphereConstraintSet> {
    check_target(a)?;
    let pick = |val: f64| a.iter().enumerate().filter(|(_, &v)| v == val).map(|(i, _)| i).collect();
    Ok(SphereConstraintSet {
        dim: a.len(),
        ones: pick(1.0),
        zeros: pick(0.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Level {
    Zero,
    Interior,
    One,
}

fn level(v: f64) -> Level {
    if v == 0.0 {
        Level::Zero
    } else if v == 1.0 {
        Level::One
    } else {
        Level::Interior
    }
}

/// Grid points of the double sphere of a diagonal target.
///
/// Distance one to a point of `[0,1]ⁿ` depends only on which coordinates are
/// 0, 1 or interior, and both spheres are unions of such pattern classes.
/// Membership is therefore decided per class against the finite certifying
/// subset `Sph(a) ∩ {0, ½, 1}ⁿ` and is exact on the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleSphere {
    dim: usize,
    grid_res: usize,
    constraints: SphereConstraintSet,
    classes: Vec<Vec<Level>>,
}

impl DoubleSphere {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid_res(&self) -> usize {
        self.grid_res
    }

    pub fn constraints(&self) -> &SphereConstraintSet {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        let interior = self.grid_res.saturating_sub(1);
        self.classes
            .iter()
            .map(|c| interior.pow(c.iter().filter(|&&l| l == Level::Interior).count() as u32))
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_singleton(&self) -> bool {
        self.len() == 1
    }

    /// Grid membership; `x` must have coordinates `j/k`.
    pub fn contains(&self, x: &[f64]) -> bool {
        let k = self.grid_res as f64;
        x.len() == self.dim
            && x.iter().all(|&v| (0.0..=1.0).contains(&v) && (v * k).round() == v * k)
            && self.classes.iter().any(|c| c.iter().zip(x).all(|(&l, &v)| l == level(v)))
    }

    /// Members in class order, lazily.
    pub fn iter(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        let k = self.grid_res;
        self.classes.iter().flat_map(move |class| {
            let free: Vec<usize> = (0..class.len()).filter(|&i| class[i] == Level::Interior).collect();
            let inner = k.saturating_sub(1);
            let count = inner.pow(free.len() as u32);
            (0..count).map(move |mut idx| {
                let mut x: Vec<f64> = class
                    .iter()
                    .map(|l| if *l == Level::One { 1.0 } else { 0.0 })
                    .collect();
                for &i in &free {
                    x[i] = (idx % inner + 1) as f64 / k as f64;
                    idx /= inner;
                }
                x
            })
        })
    }
}

/// Whether pattern class `x` lies in the double sphere of the constraint set.
fn class_in_double_sphere(c: &SphereConstraintSet, class: &[Level]) -> bool {
    if !class.contains(&Level::One) {
        return false;
    }
    // Some s in Sph(a) avoids distance one from x exactly when s can be 1 at
    // a coordinate where x is not 0 and also activate a constraint of a.
    let nonzero = |i: usize| class[i] != Level::Zero;
    if c.zeros.iter().any(|&i| nonzero(i)) {
        return false;
    }
    let escapes = c.ones.iter().any(|&i| {
        class[i] != Level::One && (0..class.len()).any(|j| j != i && nonzero(j))
    });
    !escapes
}

pub fn commutative_double_sph(a: &[f64], grid_res: usize) -> Result<DoubleSphere> {
    let n = a.len();
    if n > MAX_GRID_DIM || grid_res == 0 || grid_res > MAX_GRID_RES {
        return Err(Error::GridTooFine {
            n,
            k: grid_res,
            max_n: MAX_GRID_DIM,
            max_k: MAX_GRID_RES,
        });
    }
    let constraints = commutative_sph_set(a)?;
    let levels = [Level::Zero, Level::Interior, Level::One];
    let mut classes = Vec::new();
    for code in 0..3usize.pow(n as u32) {
        let mut rest = code;
        let class: Vec<Level> = (0..n)
            .map(|_| {
                let l = levels[rest % 3];
                rest /= 3;
                l
            })
            .collect();
        if grid_res == 1 && class.contains(&Level::Interior) {
            continue;
        }
        if class_in_double_sphere(&constraints, &class) {
            classes.push(class);
        }
    }
    Ok(DoubleSphere {
        dim: n,
        grid_res,
        constraints,
        classes,
    })
}

/// A member of the double sphere of `a` other than `a`, for non-projections:
/// keep `a`'s zeros and ones, and push every other coordinate to whichever of
/// 0 and 1 is farther. Its sup-distance from `a` is at least ½.
pub fn second_member(a: &[f64]) -> Result<Option<Vec<f64>>> {
    check_target(a)?;
    if a.iter().all(|&v| v == 0.0 || v == 1.0) {
        return Ok(None);
    }
    Ok(Some(
        a.iter()
            .map(|&v| match level(v) {
                Level::Zero => 0.0,
                Level::One => 1.0,
                Level::Interior => {
                    if v < 0.5 {
                        1.0
                    } else {
                        0.0
                    }
                }
            })
            .collect(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphFamily {
    /// `d ⊥ p` with `‖d‖ = 1`.
    Orthogonal,
    /// `x` in `pAp` with `‖x‖ = 1` and `0 ∈ σ_{pAp}(x)`.
    Corner,
    /// `p + y` with `y` positive of norm one in the complementary corner.
    Tail,
}

/// Draws `count` members of `Sph(p)`, cycling through the requested
/// families that are available for `p`.
pub fn sample_sph(
    p: &Element,
    count: usize,
    rng_seed: u64,
    families: &[SphFamily],
) -> Result<Vec<(SphFamily, Element)>> {
    let corner = Corner::new(p)?;
    let complement = Element::unit(p.algebra()).sub(p)?;
    let co_corner = match Corner::new(&complement) {
        Ok(c) => Some(c),
        Err(Error::ZeroProjection) => None,
        Err(e) => return Err(e),
    };
    let usable: Vec<SphFamily> = families
        .iter()
        .copied()
        .filter(|f| match f {
            SphFamily::Orthogonal | SphFamily::Tail => co_corner.is_some(),
            SphFamily::Corner => corner.rank() >= 2,
        })
        .collect();
    if usable.is_empty() {
        return Err(Error::NoFamilyAvailable(format!(
            "none of {families:?} applies to a projection of rank {} in dimension {}",
            corner.rank(),
            p.algebra().dim()
        )));
    }
    let mut rng = seeded_rng(rng_seed, 0);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let family = usable[i % usable.len()];
        let s = match family {
            SphFamily::Orthogonal => {
                let c = co_corner.as_ref().expect("checked");
                let bottom = rng.random_range(0.0..1.0);
                c.embed(&random_positive(c.algebra(), bottom, 1.0, &mut rng)?)?
            }
            SphFamily::Corner => {
                let x = random_positive(corner.algebra(), 0.0, 1.0, &mut rng)?;
                corner.embed(&x)?
            }
            SphFamily::Tail => {
                let c = co_corner.as_ref().expect("checked");
                let bottom = rng.random_range(0.0..1.0);
                let y = c.embed(&random_positive(c.algebra(), bottom, 1.0, &mut rng)?)?;
                p.add(&y)?
            }
        };
        out.push((family, s.hermitian_part()));
    }
    Ok(out)
}

/// A vector state `φ(a) = ⟨aξ, ξ⟩` with support `w = ξξ*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    vector: Vec<C64>,
}

impl PureState {
    /// Requires `‖ξ‖₂ = 1` within `1e-12`.
    pub fn new(vector: Vec<C64>) -> Result<Self> {
        let norm = vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vector.is_empty() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::PreconditionFailed(format!("state vector has norm {norm}")));
        }
        Ok(Self { vector })
    }

    pub fn from_unnormalized(vector: Vec<C64>) -> Result<Self> {
        let norm = vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= 0.0 {
            return Err(Error::PreconditionFailed("zero state vector".into()));
        }
        Self::new(vector.into_iter().map(|z| z / norm).collect())
    }

    pub fn basis(n: usize, i: usize) -> Result<Self> {
        Self::new((0..n).map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self {
            vector: random_unit_vector(n, rng),
        }
    }

    pub fn vector(&self) -> &[C64] {
        &self.vector
    }

    /// `⟨aξ, ξ⟩`.
    pub fn eval(&self, a: &Element) -> Result<C64> {
        if a.algebra().dim() != self.vector.len() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(match a.entries() {
            Entries::Matrix(m) => {
                let av = m.mat_vec(&self.vector);
                av.iter().zip(&self.vector).map(|(x, v)| x * v.conj()).sum()
            }
            Entries::Coords(c) => C64::new(
                c.iter().zip(&self.vector).map(|(x, v)| x * v.norm_sqr()).sum(),
                0.0,
            ),
        })
    }

    /// `w = ξξ*`, checked to be a member of `alg` and a projection.
    pub fn support(&self, alg: &Arc<AlgebraDescriptor>) -> Result<Element> {
        let n = self.vector.len();
        let w = if alg.uses_coords() {
            Element::from_coords(alg, self.vector.iter().map(|z| z.norm_sqr()).collect())?
        } else {
            Element::from_matrix(alg, CMat::from_fn(n, n, |i, j| self.vector[i] * self.vector[j].conj()))?
        };
        if !w.is_projection(1e-10) {
            return Err(Error::PreconditionFailed("state support is not a projection here".into()));
        }
        Ok(w)
    }
}

/// Which of the pair the state sees as one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DichotomyBranch {
    /// `(φ(u), φ(v)) = (1, 0)`.
    FirstIsOne,
    /// `(φ(u), φ(v)) = (0, 1)`.
    SecondIsOne,
}

/// For positive contractions `u, v` with `‖u − v‖ = 1` (in particular for
/// norm-one pairs), a unit eigenvector of `u − v` at `±1`; `0 ≤ u, v ≤ 1`
/// forces `φ` to take the values `(1, 0)` or `(0, 1)` on the pair.
pub fn dichotomy_state(u: &Element, v: &Element) -> Result<(PureState, DichotomyBranch)> {
    const PRE_TOL: f64 = 1e-8;
    let diff = u.sub(v)?;
    for (name, x) in [("u", u), ("v", v)] {
        if !x.is_positive(PRE_TOL) || x.norm() > 1.0 + PRE_TOL {
            return Err(Error::PreconditionFailed(format!("{name} is not a positive contraction")));
        }
    }
    let dist = diff.norm();
    if (dist - 1.0).abs() > PRE_TOL {
        return Err(Error::PreconditionFailed(format!("‖u − v‖ = {dist}, expected 1")));
    }
    let n = u.algebra().dim();
    let (top, bottom) = (diff.max_spectrum()?, diff.min_spectrum()?);
    let branch = if (top - 1.0).abs() <= (bottom + 1.0).abs() {
        DichotomyBranch::FirstIsOne
    } else {
        DichotomyBranch::SecondIsOne
    };
    let state = match diff.entries() {
        Entries::Coords(c) => {
            let pick = match branch {
                DichotomyBranch::FirstIsOne => c.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)),
                DichotomyBranch::SecondIsOne => c.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)),
            };
            PureState::basis(n, pick.expect("nonempty").0)?
        }
        Entries::Matrix(_) => {
            let spec = diff.spectrum()?;
            let col = match branch {
                DichotomyBranch::FirstIsOne => n - 1,
                DichotomyBranch::SecondIsOne => 0,
            };
            let vectors = spec.vectors.as_ref().expect("matrix spectra carry vectors");
            PureState::from_unnormalized(vectors.column(col))?
        }
    };
    Ok((state, branch))
}
