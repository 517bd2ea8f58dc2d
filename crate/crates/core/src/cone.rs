//! Cone predicates on curvature operators and the pinching-family machinery
//! built on the linear map
//! `l_ab(R) = (1 + 2(n-1)a) R_I + (1 + (n-2)b) R_Ric0 + R_W`.
//!
//! Every predicate reports a signed margin: the value of its binding
//! constraint, nonnegative exactly on the cone.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::operator::{symmetric_min_eigenvalue, wedge, CurvatureOperator, IrreducibleParts};

/// Default membership tolerance on margins normalized by `1 + |R|`.
pub const DEFAULT_TOL: f64 = 1e-9;

const SINGULAR_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormConvention {
    /// Frobenius norms of coefficient matrices.
    Operator,
    /// Frobenius norms of (0,4)-tensors; squared norms are 4x the operator ones.
    Tensor,
}

impl NormConvention {
    fn square_factor(self) -> f64 {
        match self {
            Self::Operator => 1.0,
            Self::Tensor => 4.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ConeSpec {
    Psd,
    TwoNonneg,
    /// `C(b) = { R >= 0, Ric >= p(b) tr(Ric)/n }`.
    Cb(f64),
    /// `l_ab(C(b))` with `a = a(b)`.
    LabCb(f64),
    /// `R >= delta R_I`.
    Pinch(f64),
    ChenZhu { epsilon: f64, convention: NormConvention, delta3: Option<f64> },
}

impl ConeSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Psd | Self::TwoNonneg => Ok(()),
            Self::Cb(b) | Self::LabCb(b) => check_b(b),
            Self::Pinch(d) if d > 0.0 && d.is_finite() => Ok(()),
            Self::Pinch(d) => Err(Error::InvalidParameter(format!("pinching constant {d} must be positive"))),
            Self::ChenZhu { epsilon, delta3, .. } => {
                if !(epsilon > 0.0 && epsilon < 1.0) {
                    return Err(Error::InvalidParameter(format!("epsilon {epsilon} must lie in (0, 1)")));
                }
                match delta3 {
                    Some(d) if !(d > 0.0) => Err(Error::InvalidParameter(format!("delta_3 = {d} must be positive"))),
                    _ => Ok(()),
                }
            }
        }
    }

    /// Cones whose constraints are all positively homogeneous of degree one.
    pub fn is_linear(&self) -> bool {
        !matches!(self, Self::ChenZhu { .. })
    }
}

impl fmt::Display for ConeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Psd => write!(f, "psd"),
            Self::TwoNonneg => write!(f, "2nn"),
            Self::Cb(b) => write!(f, "cb:{b}"),
            Self::LabCb(b) => write!(f, "labcb:{b}"),
            Self::Pinch(d) => write!(f, "pinch:{d}"),
            Self::ChenZhu { epsilon, convention, delta3 } => {
                let conv = match convention {
                    NormConvention::Operator => "operator",
                    NormConvention::Tensor => "tensor",
                };
                write!(f, "chenzhu:{epsilon}:{conv}")?;
                if let Some(d) = delta3 {
                    write!(f, ":{d}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for ConeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |k: usize| -> Result<f64> {
            let text = parts.get(k).ok_or_else(|| Error::Parse(format!("cone '{s}' is missing a parameter")))?;
            text.parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{text}' in cone '{s}'")))
        };
        let arity = |k: usize| -> Result<()> {
            if parts.len() != k {
                return Err(Error::Parse(format!("cone '{s}' expects {} parameter(s)", k - 1)));
            }
            Ok(())
        };
        let spec = match parts[0].to_ascii_lowercase().as_str() {
            "psd" => {
                arity(1)?;
                Self::Psd
            }
            "2nn" => {
                arity(1)?;
                Self::TwoNonneg
            }
            "cb" => {
                arity(2)?;
                Self::Cb(num(1)?)
            }
            "labcb" => {
                arity(2)?;
                Self::LabCb(num(1)?)
            }
            "pinch" => {
                arity(2)?;
                Self::Pinch(num(1)?)
            }
            "chenzhu" => {
                if !(2..=4).contains(&parts.len()) {
                    return Err(Error::Parse(format!("cone '{s}' expects chenzhu:<eps>[:operator|tensor[:delta3]]")));
                }
                let convention = match parts.get(2).copied().unwrap_or("tensor") {
                    "operator" => NormConvention::Operator,
                    "tensor" => NormConvention::Tensor,
                    other => return Err(Error::Parse(format!("unknown norm convention '{other}'"))),
                };
                let delta3 = if parts.len() == 4 { Some(num(3)?) } else { None };
                Self::ChenZhu { epsilon: num(1)?, convention, delta3 }
            }
            other => return Err(Error::Parse(format!("unknown cone '{other}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn check_b(b: f64) -> Result<()> {
    if (0.0..=0.5).contains(&b) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("b = {b} must lie in [0, 1/2]")))
    }
}

/// `a(b)` and `p(b)` of the pinching family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyParams {
    pub n: usize,
    pub b: f64,
    pub a: f64,
    pub p: f64,
}

pub fn family_params(n: usize, b: f64) -> Result<FamilyParams> {
    check_b(b)?;
    let k = n as f64 - 2.0;
    let a = (k * b * b + 2.0 * b) / (2.0 + 2.0 * k * b * b);
    let p = k * b * b / (1.0 + k * b * b);
    Ok(FamilyParams { n, b, a, p })
}

/// Chen-Zhu constant `delta_n`; dimension three has no canonical value.
pub fn chen_zhu_delta(n: usize, delta3: Option<f64>) -> Result<f64> {
    match n {
        3 => delta3.ok_or_else(|| Error::InvalidParameter("Chen-Zhu pinching in dimension 3 needs an explicit delta_3".into())),
        4 => Ok(1.0 / 5.0),
        5 => Ok(1.0 / 10.0),
        n if n > 5 => {
            let nf = n as f64;
            Ok(2.0 / ((nf - 2.0) * (nf + 1.0)))
        }
        _ => Err(Error::DimensionOutOfRange { found: n, min: 3, max: usize::MAX }),
    }
}

/// Result of a membership test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeMargin {
    /// Raw value of the binding constraint.
    pub margin: f64,
    /// `margin / (1 + |R|)`, or `/ (1 + |R|)^2` for quadratic constraints.
    pub normalized: f64,
    pub inside: bool,
}

/// `min(mu_1, min eig(Ric - p tr(Ric)/n id))`.
pub fn cb_margin(r: &CurvatureOperator, p: f64) -> f64 {
    let (psd, ric) = cb_margin_parts(r, p);
    psd.min(ric)
}

/// The PSD and Ricci-pinching constraints of `C(b)` separately.
pub fn cb_margin_parts(r: &CurvatureOperator, p: f64) -> (f64, f64) {
    let n = r.dim();
    let ric = r.ricci();
    let shift = p * ric.trace() / n as f64;
    let pinched = &ric - DMatrix::<f64>::identity(n, n) * shift;
    (r.min_eigenvalue(), symmetric_min_eigenvalue(&pinched))
}

/// Raw signed margin of the binding constraint.
pub fn margin(spec: &ConeSpec, r: &CurvatureOperator) -> Result<f64> {
    spec.validate()?;
    let n = r.dim();
    Ok(match *spec {
        ConeSpec::Psd => r.min_eigenvalue(),
        ConeSpec::TwoNonneg => {
            let v = r.spectrum().values;
            v[0] + v[1]
        }
        ConeSpec::Cb(b) => cb_margin(r, family_params(n, b)?.p),
        ConeSpec::LabCb(b) => {
            let fp = family_params(n, b)?;
            cb_margin(&l_inverse(r, fp.a, fp.b)?, fp.p)
        }
        ConeSpec::Pinch(delta) => {
            let parts = r.decompose()?;
            (r - &parts.scalar_part.scale(delta)).min_eigenvalue()
        }
        ConeSpec::ChenZhu { epsilon, convention, delta3 } => {
            let dn = chen_zhu_delta(n, delta3)?;
            let parts = r.decompose()?;
            let f = convention.square_factor();
            f * (dn * (1.0 - epsilon).powi(2) * parts.norm_scalar.powi(2)
                - parts.norm_weyl.powi(2)
                - parts.norm_ricci.powi(2))
        }
    })
}

pub fn contains(spec: &ConeSpec, r: &CurvatureOperator, tol: f64) -> Result<ConeMargin> {
    let m = margin(spec, r)?;
    let scale = 1.0 + r.norm();
    let normalized = if spec.is_linear() { m / scale } else { m / (scale * scale) };
    Ok(ConeMargin { margin: m, normalized, inside: normalized >= -tol })
}

fn check_invertible(n: usize, a: f64, b: f64) -> Result<(f64, f64)> {
    let nf = n as f64;
    let scalar_factor = 1.0 + 2.0 * (nf - 1.0) * a;
    let ricci_factor = 1.0 + (nf - 2.0) * b;
    if scalar_factor.abs() < SINGULAR_EPS || ricci_factor.abs() < SINGULAR_EPS {
        return Err(Error::InvalidParameter(format!(
            "l_ab is singular for a = {a}, b = {b} (need a != -1/(2(n-1)), b != -1/(n-2))"
        )));
    }
    Ok((scalar_factor, ricci_factor))
}

fn recombine(parts: &IrreducibleParts, scalar_factor: f64, ricci_factor: f64) -> CurvatureOperator {
    &(&parts.scalar_part.scale(scalar_factor) + &parts.ricci_part.scale(ricci_factor)) + &parts.weyl_part
}

pub fn l_transform(r: &CurvatureOperator, a: f64, b: f64) -> Result<CurvatureOperator> {
    let (sf, rf) = check_invertible(r.dim(), a, b)?;
    let out = recombine(&r.decompose()?, sf, rf);
    #[cfg(debug_assertions)]
    {
        let direct = l_transform_direct(r, a, b)?;
        let gap = (&out - &direct).norm();
        debug_assert!(gap <= 1e-10 * (1.0 + r.norm()), "l_ab forms disagree by {gap:e}");
    }
    Ok(out)
}

/// `R + 2a lambda_bar I + 2b id ^ Ric0(R)`, the same map written without
/// the irreducible splitting.
pub fn l_transform_direct(r: &CurvatureOperator, a: f64, b: f64) -> Result<CurvatureOperator> {
    check_invertible(r.dim(), a, b)?;
    let n = r.dim();
    let id = DMatrix::<f64>::identity(n, n);
    let ric = r.ricci();
    let lambda_bar = ric.trace() / n as f64;
    let ric0 = &ric - &id * lambda_bar;
    let shift = CurvatureOperator::identity(n).scale(2.0 * a * lambda_bar);
    Ok(&(r + &shift) + &wedge(&id, &ric0)?.scale(2.0 * b))
}

pub fn l_inverse(r: &CurvatureOperator, a: f64, b: f64) -> Result<CurvatureOperator> {
    let (sf, rf) = check_invertible(r.dim(), a, b)?;
    Ok(recombine(&r.decompose()?, 1.0 / sf, 1.0 / rf))
}

/// `R - 2(n-1)a/(1+2(n-1)a) R_I - (n-2)b/(1+(n-2)b) R_Ric0`, with the
/// parts formed from `lambda_bar` and `id ^ Ric0` directly.
pub fn l_inverse_direct(r: &CurvatureOperator, a: f64, b: f64) -> Result<CurvatureOperator> {
    let (sf, rf) = check_invertible(r.dim(), a, b)?;
    let n = r.dim();
    let nf = n as f64;
    let id = DMatrix::<f64>::identity(n, n);
    let ric = r.ricci();
    let lambda_bar = ric.trace() / nf;
    let ric0 = &ric - &id * lambda_bar;
    let scalar = CurvatureOperator::identity(n).scale(2.0 * a * lambda_bar / sf);
    let ricci = wedge(&id, &ric0)?.scale(2.0 * b / rf);
    Ok(&(r - &scalar) - &ricci)
}

/// The `t` for which `R + t I` lies on the boundary of `spec`.
///
/// Every supported constraint is monotone in `t`, so `R + s I` is in the cone
/// exactly when `s >= t`.
pub fn minimal_identity_shift(spec: &ConeSpec, r: &CurvatureOperator) -> Result<f64> {
    spec.validate()?;
    let n = r.dim();
    let nf = n as f64;
    Ok(match *spec {
        ConeSpec::Psd => -r.min_eigenvalue(),
        ConeSpec::TwoNonneg => {
            let v = r.spectrum().values;
            -0.5 * (v[0] + v[1])
        }
        ConeSpec::Cb(b) => {
            // Ric - p lambda_bar id moves by (1 - p)(n - 1) t
            let p = family_params(n, b)?.p;
            let (psd, ric) = cb_margin_parts(r, p);
            (-psd).max(-ric / ((1.0 - p) * (nf - 1.0)))
        }
        ConeSpec::LabCb(b) => {
            // l_ab(I) = (1 + 2(n-1)a) I
            let fp = family_params(n, b)?;
            let pre = l_inverse(r, fp.a, fp.b)?;
            minimal_identity_shift(&ConeSpec::Cb(b), &pre)? * (1.0 + 2.0 * (nf - 1.0) * fp.a)
        }
        ConeSpec::Pinch(delta) => {
            if delta >= 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "pinch:{delta} cannot be reached by shifting with I"
                )));
            }
            let scal = r.scalar();
            -(r.min_eigenvalue() - delta * scal / (nf * (nf - 1.0))) / (1.0 - delta)
        }
        ConeSpec::ChenZhu { epsilon, delta3, .. } => {
            let dn = chen_zhu_delta(n, delta3)?;
            let parts = r.decompose()?;
            let rest = parts.norm_weyl.powi(2) + parts.norm_ricci.powi(2);
            // |R_I|^2 = Scal^2 / (2 n (n-1)) in coefficient norms
            let scal_needed = (2.0 * nf * (nf - 1.0) * rest / (dn * (1.0 - epsilon).powi(2))).sqrt();
            (scal_needed - parts.scal) / (nf * (nf - 1.0))
        }
    })
}

/// Largest `delta` with `R >= delta R_I`, namely `n(n-1) mu_1 / Scal`.
pub fn delta_max(r: &CurvatureOperator) -> Result<f64> {
    let n = r.dim() as f64;
    let scal = r.scalar();
    if !(scal > 0.0) {
        return Err(Error::NonPositiveScalar { scal });
    }
    Ok(n * (n - 1.0) * r.min_eigenvalue() / scal)
}

/// `b = 2^-k / 2` for `k = 0..=20`, descending.
pub fn default_grid() -> Vec<f64> {
    (0..=20).map(|k| 0.5 * 0.5f64.powi(k)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Certificate {
    pub params: FamilyParams,
    /// Normalized `C(b)` margin of `l^-1(R)`.
    pub margin: f64,
    /// Same margin recomputed through [`l_inverse_direct`] and raw eigenvalues.
    pub reverified_margin: f64,
}

impl Certificate {
    pub fn b(&self) -> f64 {
        self.params.b
    }
}

/// Finds the largest `b` on `grid` (scanned in the given, descending order)
/// with `l_ab^-1(R)` in `C(b)`.
pub fn certify_cone_entry(r: &CurvatureOperator, grid: &[f64], tol: f64) -> Result<Certificate> {
    let defect = r.bianchi_defect();
    if defect > 1e-8 {
        return Err(Error::BianchiDefect { defect, tol: 1e-8 });
    }
    let dm = delta_max(r)?;
    if !(dm > 0.0) {
        return Err(Error::NotPinched { delta_max: dm });
    }
    let n = r.dim();
    let mut finest = f64::NAN;
    for &b in grid {
        if !(b > 0.0) {
            return Err(Error::InvalidParameter(format!("grid value {b} must lie in (0, 1/2]")));
        }
        let params = family_params(n, b)?;
        finest = b;
        let pre = l_inverse(r, params.a, params.b)?;
        let m = contains(&ConeSpec::Cb(b), &pre, tol)?;
        if !m.inside {
            continue;
        }
        let reverified_margin = reverify(r, &params);
        return Ok(Certificate { params, margin: m.normalized, reverified_margin });
    }
    Err(Error::CertificationFailed { finest_b: finest })
}

fn reverify(r: &CurvatureOperator, params: &FamilyParams) -> f64 {
    let pre = match l_inverse_direct(r, params.a, params.b) {
        Ok(pre) => pre,
        Err(_) => return f64::NEG_INFINITY,
    };
    let n = pre.dim();
    let psd = crate::operator::Spectrum::of(pre.coeffs()).values[0];
    let ric = pre.ricci();
    let threshold = params.p * ric.trace() / n as f64;
    let ric_min = crate::operator::Spectrum::of(&ric).values[0] - threshold;
    psd.min(ric_min) / (1.0 + pre.norm())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PushforwardCheck {
    pub holds: bool,
    /// `min_i ((1 - p) lambda_bar* + lambda*_i)`, normalized by `1 + |R*|`.
    pub margin: f64,
}

/// Checks that `R* = l_ab(R)` for `R` in `C(b)` keeps the Ricci pinching
/// `-lambda*_i <= (1 - p) lambda_bar*`.
pub fn ricci_pinch_pushforward_check(r: &CurvatureOperator, b: f64, tol: f64) -> Result<PushforwardCheck> {
    let params = family_params(r.dim(), b)?;
    let member = contains(&ConeSpec::Cb(b), r, tol)?;
    if !member.inside {
        return Err(Error::Precondition(format!(
            "operator is not in C({b}) (margin {:.3e})",
            member.normalized
        )));
    }
    let pushed = l_transform(r, params.a, params.b)?;
    let parts = pushed.decompose()?;
    let lowest = symmetric_min_eigenvalue(&parts.ric0);
    let margin = ((1.0 - params.p) * parts.lambda_bar + lowest) / (1.0 + pushed.norm());
    Ok(PushforwardCheck { holds: margin >= -tol, margin })
}

/// Quantities from the cone-entry argument for a pinched operator `R~`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntryBounds {
    /// `min_{i<j} [ delta/2 lambda_bar/(n-1) - b/(1+(n-2)b) (l_i + l_j) ]`
    /// over eigenvalues `l_i` of `Ric0(R~)`.
    pub frame_eigenvalue_min: f64,
    /// `lambda_bar (delta/(2(n-1)) - 2(n-1)b/(1+(n-2)b))`.
    pub lower_bound: f64,
    /// `min_i (l_i + lambda_bar - delta lambda_bar)`, nonnegative under pinching.
    pub lower_ricci_margin: f64,
    /// `min_i (n lambda_bar - l_i - lambda_bar)`.
    pub upper_ricci_margin: f64,
}

pub fn entry_bounds(r: &CurvatureOperator, delta: f64, b: f64) -> Result<EntryBounds> {
    let parts = r.decompose()?;
    let n = r.dim() as f64;
    let lb = parts.lambda_bar;
    let eig = crate::operator::Spectrum::of(&parts.ric0).values;
    let w = b / (1.0 + (n - 2.0) * b);
    let mut frame_min = f64::INFINITY;
    for i in 0..eig.len() {
        for j in i + 1..eig.len() {
            frame_min = frame_min.min(0.5 * delta * lb / (n - 1.0) - w * (eig[i] + eig[j]));
        }
    }
    let lower_bound = lb * (delta / (2.0 * (n - 1.0)) - 2.0 * (n - 1.0) * w);
    let lower_ricci_margin = eig.iter().map(|l| l + lb - delta * lb).fold(f64::INFINITY, f64::min);
    let upper_ricci_margin = eig.iter().map(|l| n * lb - l - lb).fold(f64::INFINITY, f64::min);
    Ok(EntryBounds { frame_eigenvalue_min: frame_min, lower_bound, lower_ricci_margin, upper_ricci_margin })
}
