//! The curvature ODE `dR/dt = 2(R^2 + R^#)` on algebraic curvature operators,
//! integrated with classical RK4 under step-doubling error control.
//!
//! Also hosts the boundary experiments: seeded samples on cone boundaries,
//! the inward test for 2-nonnegativity and finite-difference transversality
//! for the pinching cones.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::cone::{self, ConeSpec, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::lie::LieStructure;
use crate::operator::{CurvatureOperator, Spectrum};
use crate::random::{gaussian_bianchi, stream_rng};
use crate::sharp::q_vector_field;

/// Bianchi drift that triggers re-projection of the state.
pub const BIANCHI_DRIFT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    None,
    /// Start from `R0 / |R0|` and follow the field projected onto the sphere.
    UnitNorm,
}

#[derive(Clone, Debug)]
pub struct IntegratorConfig {
    pub initial_step: f64,
    pub rtol: f64,
    pub atol: f64,
    pub horizon: f64,
    /// The run is declared a blow-up once `|R|` exceeds this.
    pub blowup_norm: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub normalization: Normalization,
    /// Record only at multiples of this interval (plus `t = 0` and the end).
    /// `None` records every accepted step.
    pub output_interval: Option<f64>,
    /// Cones whose normalized margins are recorded with every sample.
    pub cones: Vec<ConeSpec>,
    pub keep_snapshots: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            initial_step: 1e-3,
            rtol: 1e-10,
            atol: 1e-12,
            horizon: 1.0,
            blowup_norm: 1e8,
            min_step: 1e-14,
            max_step: 0.05,
            normalization: Normalization::None,
            output_interval: None,
            cones: Vec::new(),
            keep_snapshots: false,
        }
    }
}

impl IntegratorConfig {
    /// Records `steps` equally spaced samples after `t = 0` up to the horizon.
    pub fn with_output_steps(mut self, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidParameter("output steps must be at least 1".into()));
        }
        self.output_interval = Some(self.horizon / steps as f64);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("initial_step", self.initial_step),
            ("rtol", self.rtol),
            ("horizon", self.horizon),
            ("blowup_norm", self.blowup_norm),
            ("min_step", self.min_step),
            ("max_step", self.max_step),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be positive and finite")));
            }
        }
        if !(self.atol >= 0.0) {
            return Err(Error::InvalidParameter(format!("atol = {} must be nonnegative", self.atol)));
        }
        if let Some(dt) = self.output_interval {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::InvalidParameter(format!("output interval {dt} must be positive")));
            }
        }
        for c in &self.cones {
            c.validate()?;
        }
        Ok(())
    }
}

/// Scalar summary of one recorded state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub t: f64,
    pub spectrum: Vec<f64>,
    pub norm: f64,
    pub scal: f64,
    pub lambda_bar: f64,
    /// Present only when `Scal > 0`.
    pub delta_max: Option<f64>,
    pub norm_scalar: f64,
    pub norm_ricci: f64,
    pub norm_weyl: f64,
    pub anisotropy: f64,
    /// Normalized margins, one per configured cone.
    pub margins: Vec<f64>,
}

impl Summary {
    pub fn of(t: f64, r: &CurvatureOperator, cones: &[ConeSpec]) -> Result<Self> {
        let parts = r.decompose()?;
        let margins = cones
            .iter()
            .map(|c| cone::contains(c, r, DEFAULT_TOL).map(|m| m.normalized))
            .collect::<Result<Vec<_>>>()?;
        let spectrum = r.spectrum().values;
        let delta_max = (parts.scal > 0.0).then(|| {
            let n = r.dim() as f64;
            n * (n - 1.0) * spectrum[0] / parts.scal
        });
        Ok(Self {
            t,
            norm: r.norm(),
            scal: parts.scal,
            lambda_bar: parts.lambda_bar,
            delta_max,
            norm_scalar: parts.norm_scalar,
            norm_ricci: parts.norm_ricci,
            norm_weyl: parts.norm_weyl,
            anisotropy: parts.anisotropy(),
            margins,
            spectrum,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum FlowStatus {
    Horizon,
    BlowUp { t_est: f64 },
    Error { message: String },
}

#[derive(Clone, Debug)]
pub struct FlowTrajectory {
    pub n: usize,
    pub cones: Vec<ConeSpec>,
    pub samples: Vec<Summary>,
    pub snapshots: Option<Vec<CurvatureOperator>>,
    pub status: FlowStatus,
    pub final_state: CurvatureOperator,
    pub final_time: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// Number of times Bianchi drift forced a re-projection.
    pub reprojections: usize,
}

impl FlowTrajectory {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }
}

fn field(s: &LieStructure, y: &CurvatureOperator, norm: Normalization) -> Result<CurvatureOperator> {
    let v = q_vector_field(s, y)?;
    Ok(match norm {
        Normalization::None => v,
        Normalization::UnitNorm => {
            let nn = y.dot(y);
            if nn == 0.0 {
                v
            } else {
                &v - &y.scale(v.dot(y) / nn)
            }
        }
    })
}

fn rk4_step(s: &LieStructure, y: &CurvatureOperator, h: f64, norm: Normalization) -> Result<CurvatureOperator> {
    let k1 = field(s, y, norm)?;
    let k2 = field(s, &(y + &k1.scale(0.5 * h)), norm)?;
    let k3 = field(s, &(y + &k2.scale(0.5 * h)), norm)?;
    let k4 = field(s, &(y + &k3.scale(h)), norm)?;
    let incr = &(&(&k1 + &k2.scale(2.0)) + &k3.scale(2.0)) + &k4;
    Ok(y + &incr.scale(h / 6.0))
}

fn all_finite(r: &CurvatureOperator) -> bool {
    r.coeffs().iter().all(|v| v.is_finite())
}

/// Blow-up time from the last two points of `1/|R|`, which is asymptotically
/// linear in `t` for quadratic blow-up.
fn extrapolate_blowup(prev: (f64, f64), last: (f64, f64)) -> f64 {
    let (t1, u1) = prev;
    let (t2, u2) = last;
    if u1 > u2 && t2 > t1 {
        t2 + u2 * (t2 - t1) / (u1 - u2)
    } else {
        t2
    }
}

pub fn integrate(s: &LieStructure, r0: &CurvatureOperator, cfg: &IntegratorConfig) -> Result<FlowTrajectory> {
    cfg.validate()?;
    if r0.dim() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: r0.dim() });
    }
    let defect = r0.bianchi_defect();
    if defect > BIANCHI_DRIFT_TOL {
        return Err(Error::BianchiDefect { defect, tol: BIANCHI_DRIFT_TOL });
    }
    let mut y = match cfg.normalization {
        Normalization::None => r0.clone(),
        Normalization::UnitNorm => {
            let nrm = r0.norm();
            if nrm == 0.0 {
                return Err(Error::InvalidParameter("cannot normalize the zero operator".into()));
            }
            r0.scale(1.0 / nrm)
        }
    };
    let target_norm = y.norm();

    let mut samples = vec![Summary::of(0.0, &y, &cfg.cones)?];
    let mut snapshots = cfg.keep_snapshots.then(|| vec![y.clone()]);
    let mut t = 0.0;
    let mut h = cfg.initial_step.min(cfg.max_step);
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut reprojections = 0usize;
    let mut next_output_k = 1usize;
    let mut last_recorded = 0.0;
    let mut history = (0.0, 1.0 / y.norm().max(f64::MIN_POSITIVE));
    let mut last = history;

    let status = loop {
        let remaining = cfg.horizon - t;
        if remaining <= 1e-14 * cfg.horizon.max(1.0) {
            break FlowStatus::Horizon;
        }
        let mut h_try = h.min(remaining).min(cfg.max_step);
        let mut hits_output = false;
        if let Some(dt) = cfg.output_interval {
            let target = next_output_k as f64 * dt;
            if target - t <= h_try * (1.0 + 1e-12) {
                h_try = target - t;
                hits_output = true;
            }
        }

        let full = rk4_step(s, &y, h_try, cfg.normalization);
        let half = rk4_step(s, &y, 0.5 * h_try, cfg.normalization)
            .and_then(|m| rk4_step(s, &m, 0.5 * h_try, cfg.normalization));
        let (full, half) = (full?, half?);
        let diff = (&half - &full).norm() / 15.0;
        let scale = cfg.atol + cfg.rtol * half.norm().max(y.norm());
        let ok = all_finite(&half) && all_finite(&full) && diff.is_finite() && diff <= scale;
        let factor = if diff > 0.0 && diff.is_finite() { 0.9 * (scale / diff).powf(0.2) } else { 4.0 };

        if !ok {
            rejected += 1;
            h = h_try * factor.clamp(0.1, 0.5);
            if h < cfg.min_step {
                let grew = last.1 < history.1;
                break if grew {
                    FlowStatus::BlowUp { t_est: extrapolate_blowup(history, last) }
                } else {
                    FlowStatus::Error { message: format!("step size collapsed below {:e} at t = {t}", cfg.min_step) }
                };
            }
            continue;
        }

        accepted += 1;
        // local extrapolation of the step-doubling pair
        let mut next = &half + &(&half - &full).scale(1.0 / 15.0);
        if cfg.normalization == Normalization::UnitNorm {
            next = next.scale(target_norm / next.norm());
        }
        if next.bianchi_defect() > BIANCHI_DRIFT_TOL {
            next = next.project_bianchi();
            reprojections += 1;
        }
        t = if hits_output { next_output_k as f64 * cfg.output_interval.unwrap_or(0.0) } else { t + h_try };
        if cfg.horizon - t <= 1e-14 * cfg.horizon.max(1.0) {
            t = cfg.horizon;
        }
        y = next;
        history = last;
        last = (t, 1.0 / y.norm());
        h = h_try * factor.clamp(0.2, 4.0);
        if hits_output && h_try < 0.5 * h {
            // a short step forced by the output grid says nothing about the next one
            h = h.max(h_try);
        }

        let record = cfg.output_interval.is_none() || hits_output || t == cfg.horizon;
        if hits_output {
            next_output_k += 1;
        }
        if record && t > last_recorded {
            samples.push(Summary::of(t, &y, &cfg.cones)?);
            if let Some(snaps) = snapshots.as_mut() {
                snaps.push(y.clone());
            }
            last_recorded = t;
        }
        if y.norm() > cfg.blowup_norm {
            break FlowStatus::BlowUp { t_est: extrapolate_blowup(history, last) };
        }
    };

    if t > last_recorded {
        samples.push(Summary::of(t, &y, &cfg.cones)?);
        if let Some(snaps) = snapshots.as_mut() {
            snaps.push(y.clone());
        }
    }

    Ok(FlowTrajectory {
        n: s.dim(),
        cones: cfg.cones.clone(),
        samples,
        snapshots,
        status,
        final_state: y,
        final_time: t,
        accepted_steps: accepted,
        rejected_steps: rejected,
        reprojections,
    })
}

/// Seeded operators on the boundary of `spec`, scaled to unit norm.
///
/// Each sample is a Bianchi-projected symmetric Gaussian matrix shifted by a
/// multiple of `I` onto the boundary, which keeps it in the Bianchi subspace
/// and leaves its eigenvectors unchanged. `LabCb(b)` samples are `C(b)`
/// boundary points pushed through `l_ab`.
pub fn boundary_sample(spec: &ConeSpec, n: usize, count: usize, seed: u64) -> Result<Vec<CurvatureOperator>> {
    spec.validate()?;
    if count == 0 {
        return Err(Error::InvalidParameter("sample count must be at least 1".into()));
    }
    if n < 3 {
        return Err(Error::DimensionOutOfRange { found: n, min: 3, max: crate::lie::MAX_DIM });
    }
    let build = |k: usize| -> Result<CurvatureOperator> {
        let mut rng = stream_rng(seed, k as u64);
        let x = gaussian_bianchi(&mut rng, n);
        let on_boundary = match *spec {
            ConeSpec::TwoNonneg | ConeSpec::Psd => {
                let t = cone::minimal_identity_shift(spec, &x)?;
                &x + &CurvatureOperator::identity(n).scale(t)
            }
            ConeSpec::LabCb(b) => {
                let params = cone::family_params(n, b)?;
                let t = cone::minimal_identity_shift(&ConeSpec::Cb(b), &x)?;
                let member = &x + &CurvatureOperator::identity(n).scale(t);
                cone::l_transform(&member, params.a, params.b)?
            }
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "boundary sampling supports psd, 2nn and labcb, not {spec}"
                )))
            }
        };
        let nrm = on_boundary.norm();
        Ok(on_boundary.scale(1.0 / nrm))
    };
    (0..count).into_par_iter().map(build).collect()
}

/// Index ranges of eigenvalues equal to within `tol`.
fn clusters(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > tol {
            out.push(start..k);
            start = k;
        }
    }
    out
}

fn sub_block(m: &DMatrix<f64>, r: &std::ops::Range<usize>) -> DMatrix<f64> {
    m.view((r.start, r.start), (r.len(), r.len())).into_owned()
}

/// Rate of change of `mu_1 + mu_2` along `2(R^2 + R^#)` at a point with
/// `mu_1 + mu_2 = 0`, i.e. `tr(P Q)` for `P` the projector onto the bottom two
/// eigenvectors.
///
/// When the bottom eigenvalues are degenerate the value is the minimum of
/// `tr(P Q)` over all admissible bottom pairs, which is independent of the
/// eigenbasis returned by the solver.
pub fn inward_test_two_nonneg(s: &LieStructure, r: &CurvatureOperator) -> Result<f64> {
    let spec = r.spectrum();
    let mu = &spec.values;
    let scale = 1.0 + r.norm();
    if (mu[0] + mu[1]).abs() > 1e-9 * scale {
        return Err(Error::Precondition(format!(
            "mu_1 + mu_2 = {:.3e} is not zero; not a 2-nonnegative boundary point",
            mu[0] + mu[1]
        )));
    }
    let q = q_vector_field(s, r)?;
    let qe = spec.vectors.transpose() * q.coeffs() * &spec.vectors;
    let groups = clusters(mu, 1e-10 * (1.0 + mu.iter().fold(0.0f64, |m, v| m.max(v.abs()))));
    let first = &groups[0];
    if first.len() >= 2 {
        let e = Spectrum::of(&sub_block(&qe, first)).values;
        Ok(e[0] + e[1])
    } else {
        let second = &groups[1];
        let e = Spectrum::of(&sub_block(&qe, second)).values;
        Ok(qe[(0, 0)] + e[0])
    }
}

/// Rate of change of `mu_1` along `2(R^2 + R^#)` at a point with `mu_1 = 0`:
/// the lowest eigenvalue of `Q` restricted to the bottom eigenspace.
pub fn inward_test_psd(s: &LieStructure, r: &CurvatureOperator) -> Result<f64> {
    let spec = r.spectrum();
    let mu = &spec.values;
    if mu[0].abs() > 1e-9 * (1.0 + r.norm()) {
        return Err(Error::Precondition(format!("mu_1 = {:.3e} is not zero; not a psd boundary point", mu[0])));
    }
    let q = q_vector_field(s, r)?;
    let qe = spec.vectors.transpose() * q.coeffs() * &spec.vectors;
    let groups = clusters(mu, 1e-10 * (1.0 + mu.iter().fold(0.0f64, |m, v| m.max(v.abs()))));
    Ok(Spectrum::of(&sub_block(&qe, &groups[0])).values[0])
}

/// Default finite-difference base step for [`transversality_test`].
pub const TRANSVERSALITY_STEP: f64 = 1e-6;

/// One-sided finite-difference rate of the `l_ab(C(b))` margin along
/// `2(R^2 + R^#)` at a boundary point, with step `h0 / (1 + |R|)`.
pub fn transversality_test(s: &LieStructure, spec: &ConeSpec, r: &CurvatureOperator, h0: f64) -> Result<f64> {
    let ConeSpec::LabCb(_) = spec else {
        return Err(Error::InvalidParameter(format!("transversality is tested for labcb cones, not {spec}")));
    };
    spec.validate()?;
    let nrm = r.norm();
    if nrm < 1e-12 {
        return Err(Error::Precondition("the zero operator is excluded".into()));
    }
    let m0 = cone::margin(spec, r)?;
    if m0.abs() > 1e-8 * (1.0 + nrm) {
        return Err(Error::Precondition(format!("operator is not on the cone boundary (margin {m0:.3e})")));
    }
    let h = h0 / (1.0 + nrm);
    let v = q_vector_field(s, r)?;
    let m1 = cone::margin(spec, &(r + &v.scale(h)))?;
    Ok((m1 - m0) / h)
}

#[derive(Clone, Debug, Serialize)]
pub struct PinchingSample {
    pub t: f64,
    pub delta_max: Option<f64>,
    pub cone_margin: f64,
    pub anisotropy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PinchingReport {
    pub b: f64,
    pub a: f64,
    pub p: f64,
    pub initial_delta_max: f64,
    pub status: FlowStatus,
    pub samples: Vec<PinchingSample>,
    pub min_cone_margin: f64,
    pub anisotropy_start: f64,
    pub anisotropy_end: f64,
    pub anisotropy_decreased: bool,
    pub anisotropy_monotone: bool,
    pub delta_max_monotone: bool,
    pub reprojections: usize,
}

/// Certifies `R0` into some `l_ab(C(b))`, then follows the unit-norm flow and
/// tracks that cone's margin together with pinching and anisotropy.
pub fn pinching_flow_report(
    s: &LieStructure,
    r0: &CurvatureOperator,
    delta0: f64,
    cfg: &IntegratorConfig,
) -> Result<PinchingReport> {
    let initial_delta_max = cone::delta_max(r0)?;
    if !(delta0 > 0.0) || initial_delta_max < delta0 {
        return Err(Error::Precondition(format!(
            "delta_max(R0) = {initial_delta_max} is below the requested {delta0}"
        )));
    }
    let cert = cone::certify_cone_entry(r0, &cone::default_grid(), DEFAULT_TOL)?;
    let b = cert.b();
    let mut run_cfg = cfg.clone();
    run_cfg.normalization = Normalization::UnitNorm;
    run_cfg.cones = vec![ConeSpec::LabCb(b)];
    let traj = integrate(s, r0, &run_cfg)?;

    let samples: Vec<PinchingSample> = traj
        .samples
        .iter()
        .map(|x| PinchingSample { t: x.t, delta_max: x.delta_max, cone_margin: x.margins[0], anisotropy: x.anisotropy })
        .collect();
    let min_cone_margin = samples.iter().map(|x| x.cone_margin).fold(f64::INFINITY, f64::min);
    let anisotropy_start = samples[0].anisotropy;
    let anisotropy_end = samples[samples.len() - 1].anisotropy;
    let anisotropy_monotone = samples.windows(2).all(|w| w[1].anisotropy <= w[0].anisotropy + 1e-12);
    let delta_max_monotone = samples.windows(2).all(|w| match (w[0].delta_max, w[1].delta_max) {
        (Some(a), Some(b)) => b >= a - 1e-12,
        _ => false,
    });
    Ok(PinchingReport {
        b,
        a: cert.params.a,
        p: cert.params.p,
        initial_delta_max,
        status: traj.status,
        min_cone_margin,
        anisotropy_start,
        anisotropy_end,
        anisotropy_decreased: anisotropy_end < anisotropy_start,
        anisotropy_monotone,
        delta_max_monotone,
        reprojections: traj.reprojections,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(n: usize, v: &[f64]) -> CurvatureOperator {
        CurvatureOperator::from_diagonal(n, v).unwrap()
    }

    #[test]
    fn zero_is_stationary() {
        let s = LieStructure::new(4).unwrap();
        let cfg = IntegratorConfig { horizon: 0.5, ..Default::default() };
        let traj = integrate(&s, &CurvatureOperator::zero(4), &cfg).unwrap();
        assert_eq!(traj.status, FlowStatus::Horizon);
        assert_eq!(traj.final_state.norm(), 0.0);
    }

    #[test]
    fn rejects_bad_config_and_input() {
        let s = LieStructure::new(3).unwrap();
        let cfg = IntegratorConfig { horizon: -1.0, ..Default::default() };
        assert!(integrate(&s, &CurvatureOperator::identity(3), &cfg).is_err());
        let cfg = IntegratorConfig { normalization: Normalization::UnitNorm, ..Default::default() };
        assert!(integrate(&s, &CurvatureOperator::zero(3), &cfg).is_err());
        assert!(matches!(
            integrate(&s, &CurvatureOperator::identity(4), &IntegratorConfig::default()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inward_examples_in_dimension_three() {
        let s = LieStructure::new(3).unwrap();
        let v = inward_test_two_nonneg(&s, &diag(3, &[-1.0, 1.0, 1.0])).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
        let v = inward_test_two_nonneg(&s, &diag(3, &[1.0, 0.0, 0.0])).unwrap();
        assert!(v.abs() < 1e-14);
        assert!(inward_test_two_nonneg(&s, &CurvatureOperator::identity(3)).is_err());
    }

    #[test]
    fn clusters_group_close_values() {
        assert_eq!(clusters(&[0.0, 0.0, 1.0, 2.0, 2.0], 1e-10), vec![0..2, 2..3, 3..5]);
        assert_eq!(clusters(&[1.0], 1e-10), vec![0..1]);
    }

    #[test]
    fn boundary_sampling_contract() {
        for spec in [ConeSpec::TwoNonneg, ConeSpec::Psd, ConeSpec::LabCb(0.25)] {
            let a = boundary_sample(&spec, 4, 20, 11).unwrap();
            let b = boundary_sample(&spec, 4, 20, 11).unwrap();
            assert_eq!(a, b);
            for r in &a {
                assert!(cone::margin(&spec, r).unwrap().abs() <= 1e-10, "{spec}");
                assert!(r.bianchi_defect() < 1e-12);
                if spec == ConeSpec::TwoNonneg {
                    assert!(r.spectrum().values[1] >= -1e-12);
                }
            }
        }
        assert!(boundary_sample(&ConeSpec::Pinch(0.2), 4, 3, 1).is_err());
        assert!(boundary_sample(&ConeSpec::Psd, 4, 0, 1).is_err());
    }

    #[test]
    fn transversality_rejects_zero_and_interior() {
        let s = LieStructure::new(3).unwrap();
        let spec = ConeSpec::LabCb(0.25);
        assert!(transversality_test(&s, &spec, &CurvatureOperator::zero(3), TRANSVERSALITY_STEP).is_err());
        assert!(transversality_test(&s, &spec, &CurvatureOperator::identity(3), TRANSVERSALITY_STEP).is_err());
        assert!(transversality_test(&s, &ConeSpec::Psd, &CurvatureOperator::identity(3), TRANSVERSALITY_STEP).is_err());
    }

    #[test]
    fn pinching_report_on_identity() {
        let s = LieStructure::new(3).unwrap();
        let cfg = IntegratorConfig { horizon: 0.5, output_interval: Some(0.1), ..Default::default() };
        let rep = pinching_flow_report(&s, &CurvatureOperator::identity(3), 0.5, &cfg).unwrap();
        for x in &rep.samples {
            assert!(x.anisotropy.abs() < 1e-20);
            assert!((x.delta_max.unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(rep.b, 0.5);
    }
}
