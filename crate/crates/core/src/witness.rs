//! Refuting `b ∈ Sph(Sph(p))` for a projection `p` and a positive norm-one
//! `b ≠ p`: the engine builds some `s ∈ Sph(p)` with `‖b − s‖ ≠ 1` and
//! returns it as a certificate that [`verify_certificate`] re-checks from
//! scratch.
//!
//! Branches, with `e = U_p(b)` and `c = U_{1−p}(b)`:
//!
//! * `UNIT_*`: `c ≈ 0`, so `b` lives in the corner `pAp`; shift by the bottom
//!   of the spectrum and renormalize.
//! * `D_CASE`: `‖e‖ < 1`; a function of `c` orthogonal to `p`.
//! * `Z_CASE`: `‖e‖ = 1` but `σ_{pAp}(e) ≠ {1}`; split `p` by a cut-off of `e`.
//! * `TAIL_*`: `e = p`, so `b = p + c`; either `b` itself or `p + h(c)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraDescriptor, Corner, Element, PROJECTION_TOL};
use crate::calculus::{apply_fc, make_f, make_g, make_h, range_projection};
use crate::error::{Error, Result};
use crate::jordan::{are_orthogonal, jordan_product, u_operator, JordanBackend};
use crate::sphere::PureState;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MARGIN: f64 = 1e-6;

/// Tolerance of the internal checks on the intermediate `z` element.
const INTERNAL_TOL: f64 = 1e-8;

/// Factor on `tol` for spectral classification.
const CLASSIFY_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseTag {
    UnitSingular,
    UnitShifted,
    DCase,
    ZCase,
    TailNormOne,
    TailShrunk,
}

impl CaseTag {
    pub const ALL: [CaseTag; 6] = [
        CaseTag::UnitSingular,
        CaseTag::UnitShifted,
        CaseTag::DCase,
        CaseTag::ZCase,
        CaseTag::TailNormOne,
        CaseTag::TailShrunk,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::UnitSingular => "UNIT_SINGULAR",
            CaseTag::UnitShifted => "UNIT_SHIFTED",
            CaseTag::DCase => "D_CASE",
            CaseTag::ZCase => "Z_CASE",
            CaseTag::TailNormOne => "TAIL_NORM_ONE",
            CaseTag::TailShrunk => "TAIL_SHRUNK",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The four norms a certificate claims.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckedNorms {
    pub s: f64,
    pub s_minus_p: f64,
    pub min_eig_s: f64,
    pub b_minus_s: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CaseParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_zprime: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub case_tag: CaseTag,
    pub witness: Element,
    pub norms: CheckedNorms,
    /// `|‖b − s‖ − 1|`.
    pub gap: f64,
    pub params: CaseParams,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "certificate", rename_all = "snake_case")]
pub enum Verdict {
    /// `b = p` within tolerance.
    Confirmed,
    Refuted(Box<WitnessCertificate>),
}

impl Verdict {
    pub fn certificate(&self) -> Option<&WitnessCertificate> {
        match self {
            Verdict::Confirmed => None,
            Verdict::Refuted(c) => Some(c),
        }
    }

    pub fn is_confirmed(&self) -> bool {
        matches!(self, Verdict::Confirmed)
    }
}

/// How `U_a(x)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductPath {
    /// `a·x·a`.
    Associative,
    /// `2(a∘x)∘a − a²∘x`.
    Jordan,
}

impl ProductPath {
    fn for_algebra(alg: &AlgebraDescriptor) -> Self {
        if alg.is_associative() {
            ProductPath::Associative
        } else {
            ProductPath::Jordan
        }
    }

    /// `U_a(x)` for self-adjoint `a, x`, symmetrized.
    pub fn quadratic(self, a: &Element, x: &Element) -> Result<Element> {
        let raw = match self {
            ProductPath::Associative => a.mul(x)?.mul(a)?,
            ProductPath::Jordan => u_operator(a, x)?,
        };
        Ok(raw.hermitian_part())
    }
}

/// Everything the branches share.
struct Setup<'a> {
    path: ProductPath,
    p: &'a Element,
    b: &'a Element,
    tol: f64,
    corner: Corner,
    /// Corner of `1 − p`; absent when `p = 1`.
    co_corner: Option<Corner>,
    complement: Element,
    /// `U_p(b)` in corner coordinates.
    e_corner: Element,
    /// `U_{1−p}(b)`.
    c: Element,
    norm_c: f64,
}

impl<'a> Setup<'a> {
    fn new(path: ProductPath, p: &'a Element, b: &'a Element, tol: f64) -> Result<Self> {
        let corner = Corner::new(p)?;
        let complement = Element::unit(p.algebra()).sub(p)?;
        let co_corner = match Corner::new(&complement) {
            Ok(c) => Some(c),
            Err(Error::ZeroProjection) => None,
            Err(e) => return Err(e),
        };
        let e = path.quadratic(p, b)?;
        let e_corner = corner.compress(&e)?.hermitian_part();
        let c = path.quadratic(&complement, b)?;
        let norm_c = c.norm();
        Ok(Self {
            path,
            p,
            b,
            tol,
            corner,
            co_corner,
            complement,
            e_corner,
            c,
            norm_c,
        })
    }

    fn primary(&self) -> Result<CaseTag> {
        let threshold = 1.0 - CLASSIFY_FACTOR * self.tol;
        if self.norm_c <= self.tol {
            let m = self.e_corner.min_spectrum()?;
            return Ok(if m <= self.tol { CaseTag::UnitSingular } else { CaseTag::UnitShifted });
        }
        if self.e_corner.max_spectrum()? < threshold {
            return Ok(CaseTag::DCase);
        }
        if self.e_corner.min_spectrum()? < threshold {
            return Ok(CaseTag::ZCase);
        }
        Ok(if self.norm_c >= 1.0 - self.tol {
            CaseTag::TailNormOne
        } else {
            CaseTag::TailShrunk
        })
    }

    fn co_corner(&self) -> Result<&Corner> {
        self.co_corner
            .as_ref()
            .ok_or_else(|| Error::PreconditionFailed("p is the unit".into()))
    }

    fn build(&self, tag: CaseTag) -> Result<WitnessCertificate> {
        let (s, params) = match tag {
            CaseTag::UnitSingular | CaseTag::UnitShifted => self.unit_witness()?,
            CaseTag::DCase => self.d_witness()?,
            CaseTag::ZCase => self.z_witness()?,
            CaseTag::TailNormOne => (self.b.clone(), CaseParams::default()),
            CaseTag::TailShrunk => self.tail_witness()?,
        };
        let tag = match tag {
            CaseTag::UnitSingular | CaseTag::UnitShifted => {
                if params.m.unwrap_or(1.0) <= self.tol {
                    CaseTag::UnitSingular
                } else {
                    CaseTag::UnitShifted
                }
            }
            t => t,
        };
        certify(tag, s, params, self.p, self.b)
    }

    /// `(e − m·1)/‖e − m·1‖` in the corner; equals `e` when `m = 0`.
    fn unit_witness(&self) -> Result<(Element, CaseParams)> {
        let m = self.e_corner.min_spectrum()?;
        let shifted = self.e_corner.sub(&self.corner.unit().scale(m))?;
        let norm = shifted.norm();
        if norm <= self.tol {
            return Err(Error::PreconditionFailed("corner part is scalar".into()));
        }
        let s = self.corner.embed(&shifted.scale(1.0 / norm))?;
        Ok((s.hermitian_part(), CaseParams { m: Some(m), ..Default::default() }))
    }

    /// `d = f(c)` in the complementary corner.
    fn d_witness(&self) -> Result<(Element, CaseParams)> {
        let co = self.co_corner()?;
        if self.norm_c <= self.tol {
            return Err(Error::PreconditionFailed("U_{1−p}(b) vanishes".into()));
        }
        let c_corner = co.compress(&self.c)?.hermitian_part();
        let d_corner = apply_fc(&make_f(self.norm_c)?, &c_corner)?;
        let d = co.embed(&d_corner)?.hermitian_part();
        if !are_orthogonal(&d, self.p, INTERNAL_TOL) {
            return Err(Error::PreconditionFailed("d is not orthogonal to p".into()));
        }
        if range_projection(&d)?.distance(&self.complement)? > INTERNAL_TOL {
            return Err(Error::PreconditionFailed("range of d is not 1 − p".into()));
        }
        Ok((d, CaseParams { norm_c: Some(self.norm_c), ..Default::default() }))
    }

    /// `z = ½(1 − p + c/‖c‖ + U_y(b)/‖U_y(b)‖)` with `y = p − g(e)`.
    fn z_witness(&self) -> Result<(Element, CaseParams)> {
        if self.co_corner.is_none() || self.norm_c <= self.tol {
            return Err(Error::PreconditionFailed("U_{1−p}(b) vanishes".into()));
        }
        let t0 = self.e_corner.min_spectrum()?.max(0.0);
        if t0 > 1.0 - 2.0 * self.tol {
            return Err(Error::PreconditionFailed(format!("σ(e) has no value below 1 (t0 = {t0})")));
        }
        let eps = (1.0 - t0) / 4.0;
        let x = self.corner.embed(&apply_fc(&make_g(t0, eps)?, &self.e_corner)?)?.hermitian_part();
        let y = self.p.sub(&x)?;
        let uy = self.path.quadratic(&y, self.b)?;
        let norm_uy = uy.norm();
        if norm_uy <= INTERNAL_TOL {
            return Err(Error::PreconditionFailed("U_y(b) vanishes".into()));
        }
        let norm_ux = self.path.quadratic(&x, self.b)?.norm();
        if norm_ux >= 1.0 - INTERNAL_TOL {
            return Err(Error::PreconditionFailed(format!("‖U_x(b)‖ = {norm_ux} reaches 1")));
        }
        let z = self
            .complement
            .add(&self.c.scale(1.0 / self.norm_c))?
            .add(&uy.scale(1.0 / norm_uy))?
            .scale(0.5)
            .hermitian_part();
        let (nz, nzp) = (z.norm(), z.distance(self.p)?);
        if (nz - 1.0).abs() > INTERNAL_TOL || (nzp - 1.0).abs() > INTERNAL_TOL {
            return Err(Error::PreconditionFailed(format!("‖z‖ = {nz}, ‖z − p‖ = {nzp}")));
        }
        let params = CaseParams {
            t0: Some(t0),
            eps: Some(eps),
            norm_c: Some(self.norm_c),
            ..Default::default()
        };
        Ok((z, params))
    }

    /// `p + h(z′)` with `z′ = U_{1−p}(b)` and `ε = ‖z′‖/2`.
    fn tail_witness(&self) -> Result<(Element, CaseParams)> {
        let co = self.co_corner()?;
        let norm_z = self.norm_c.min(1.0);
        if norm_z <= self.tol {
            return Err(Error::PreconditionFailed("U_{1−p}(b) vanishes".into()));
        }
        let eps = norm_z / 2.0;
        let z_corner = co.compress(&self.c)?.hermitian_part();
        let y = co.embed(&apply_fc(&make_h(norm_z, eps)?, &z_corner)?)?;
        let s = self.p.add(&y)?.hermitian_part();
        let params = CaseParams {
            eps: Some(eps),
            norm_zprime: Some(self.norm_c),
            ..Default::default()
        };
        Ok((s, params))
    }
}

fn certify(case_tag: CaseTag, s: Element, params: CaseParams, p: &Element, b: &Element) -> Result<WitnessCertificate> {
    let b_minus_s = b.distance(&s)?;
    let norms = CheckedNorms {
        s: s.norm(),
        s_minus_p: s.distance(p)?,
        min_eig_s: s.min_spectrum()?,
        b_minus_s,
    };
    Ok(WitnessCertificate {
        case_tag,
        witness: s,
        norms,
        gap: (b_minus_s - 1.0).abs(),
        params,
    })
}

fn validate(
    algebra: &AlgebraDescriptor,
    p: &Element,
    b: &Element,
    tol: f64,
    margin: f64,
) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) || !(margin > 0.0 && margin.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!("tol = {tol}, margin = {margin}")));
    }
    if **p.algebra() != *algebra || !p.same_algebra(b) {
        return Err(Error::AlgebraMismatch);
    }
    if !p.is_projection(PROJECTION_TOL) {
        return Err(Error::NotProjection(p.square().sub(p)?.norm()));
    }
    if p.norm() <= 0.5 {
        return Err(Error::ZeroProjection);
    }
    if !b.is_positive(tol) || (b.norm() - 1.0).abs() > tol {
        return Err(Error::NotPositiveNormOne);
    }
    Ok(())
}

fn run(path: ProductPath, p: &Element, b: &Element, tol: f64, margin: f64) -> Result<Verdict> {
    if b.distance(p)? <= tol {
        return Ok(Verdict::Confirmed);
    }
    let setup = Setup::new(path, p, b, tol)?;
    let primary = setup.primary()?;
    let fallbacks = [
        CaseTag::UnitShifted,
        CaseTag::DCase,
        CaseTag::ZCase,
        CaseTag::TailNormOne,
        CaseTag::TailShrunk,
    ];
    let unit_like = |t: CaseTag| matches!(t, CaseTag::UnitSingular | CaseTag::UnitShifted);
    let order = std::iter::once(primary).chain(
        fallbacks
            .into_iter()
            .filter(|&t| t != primary && !(unit_like(t) && unit_like(primary))),
    );
    let mut tried = Vec::new();
    for tag in order {
        tried.push(tag);
        if let Ok(cert) = setup.build(tag) {
            if verify_certificate(p, b, &cert, tol, margin) {
                return Ok(Verdict::Refuted(Box::new(cert)));
            }
        }
    }
    Err(Error::Inconclusive { tried })
}

/// Confirms `b = p` or returns a verified witness `s ∈ Sph(p)` with
/// `‖b − s‖ ≠ 1`. Non-associative algebras are handled with Jordan products.
pub fn refute_membership(
    algebra: &AlgebraDescriptor,
    p: &Element,
    b: &Element,
    tol: f64,
    margin: f64,
) -> Result<Verdict> {
    validate(algebra, p, b, tol, margin)?;
    run(ProductPath::for_algebra(algebra), p, b, tol, margin)
}

/// The same engine with every `U` evaluated by the Jordan formula.
pub fn jordan_refute_membership(
    backend: &JordanBackend,
    p: &Element,
    b: &Element,
    tol: f64,
    margin: f64,
) -> Result<Verdict> {
    if !backend.contains(p) || !backend.contains(b) {
        return Err(Error::BackendMismatch);
    }
    validate(backend.algebra(), p, b, tol, margin)?;
    run(ProductPath::Jordan, p, b, tol, margin)
}

/// The `p = 1` specialization.
pub fn unit_refuter(algebra: &std::sync::Arc<AlgebraDescriptor>, b: &Element, tol: f64) -> Result<Verdict> {
    let one = Element::unit(algebra);
    refute_membership(algebra, &one, b, tol, DEFAULT_MARGIN.max(tol))
}

/// Independent re-check on copies without cached spectra.
pub fn verify_certificate(p: &Element, b: &Element, cert: &WitnessCertificate, tol: f64, margin: f64) -> bool {
    let (p, b, s) = (p.fresh(), b.fresh(), cert.witness.fresh());
    if !s.same_algebra(&p) || !s.same_algebra(&b) || !s.is_self_adjoint() {
        return false;
    }
    let (Ok(s_minus_p), Ok(b_minus_s), Ok(min_eig)) = (s.distance(&p), b.distance(&s), s.min_spectrum()) else {
        return false;
    };
    let norm_s = s.norm();
    let gap = (b_minus_s - 1.0).abs();
    let close = |claimed: f64, actual: f64| (claimed - actual).abs() <= tol;
    (norm_s - 1.0).abs() <= tol
        && (s_minus_p - 1.0).abs() <= tol
        && min_eig >= -tol
        && gap >= margin
        && close(cert.norms.s, norm_s)
        && close(cert.norms.s_minus_p, s_minus_p)
        && close(cert.norms.min_eig_s, min_eig)
        && close(cert.norms.b_minus_s, b_minus_s)
        && close(cert.gap, gap)
}

/// `|φ(a∘b)|` for positive `a, b` with `φ(U_a(b)) ≤ tol`.
pub fn cs_refinement_check(phi: &PureState, a: &Element, b: &Element, tol: f64) -> Result<f64> {
    let uab = phi.eval(&u_operator(a, b)?)?.norm();
    if uab > tol {
        return Err(Error::PreconditionFailed(format!("φ(U_a(b)) = {uab:e} exceeds {tol:e}")));
    }
    Ok(phi.eval(&jordan_product(a, b)?)?.norm())
}
