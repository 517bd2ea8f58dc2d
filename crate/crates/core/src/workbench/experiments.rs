//! Seeded Monte-Carlo batches behind the `identity-check` and `invariance`
//! commands.

use rayon::prelude::*;
use serde::Serialize;

use crate::cone::ConeSpec;
use crate::error::{Error, Result};
use crate::flow::{self, TRANSVERSALITY_STEP};
use crate::lie::LieStructure;
use crate::random::{gaussian_bianchi, stream_rng};
use crate::sharp::verify_ric_wedge_identity;

#[derive(Clone, Debug, Serialize)]
pub struct RicWedgeSuite {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// Worst `residual / (1 + |R|)` over the batch.
    pub max_residual: f64,
    pub passed: bool,
}

/// Checks `R + R # I = Ric ^ id` on `samples` random Bianchi operators.
pub fn ric_wedge_suite(n: usize, samples: usize, seed: u64, tol: f64) -> Result<RicWedgeSuite> {
    if samples == 0 {
        return Err(Error::InvalidParameter("sample count must be at least 1".into()));
    }
    let s = LieStructure::new(n)?;
    let worst = (0..samples)
        .into_par_iter()
        .map(|k| {
            let r = gaussian_bianchi(&mut stream_rng(seed, k as u64), n);
            verify_ric_wedge_identity(&s, &r).map(|res| res / (1.0 + r.norm()))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0f64, f64::max);
    Ok(RicWedgeSuite { n, samples, seed, tol, max_residual: worst, passed: worst <= tol })
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceRun {
    pub seed: u64,
    pub samples: usize,
    pub min_margin: f64,
    pub median_margin: f64,
    pub positive_fraction: f64,
    pub violations: usize,
    pub passed: bool,
}

/// Inward rate of the vector field at boundary samples of `spec`.
///
/// For `psd` and `2nn` the rate is the exact derivative of the binding
/// eigenvalue expression divided by `1 + |R|^2`; for `labcb:b` it is the
/// finite-difference rate of the cone margin. A sample violates invariance
/// when its rate is below `-tol`. Samples have unit norm.
pub fn invariance_run(spec: &ConeSpec, n: usize, samples: usize, seed: u64, tol: f64) -> Result<InvarianceRun> {
    let s = LieStructure::new(n)?;
    let points = flow::boundary_sample(spec, n, samples, seed)?;
    let mut rates = points
        .par_iter()
        .map(|r| {
            let q = 1.0 + r.dot(r);
            match spec {
                ConeSpec::TwoNonneg => flow::inward_test_two_nonneg(&s, r).map(|v| v / q),
                ConeSpec::Psd => flow::inward_test_psd(&s, r).map(|v| v / q),
                _ => flow::transversality_test(&s, spec, r, TRANSVERSALITY_STEP),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    rates.sort_by(f64::total_cmp);
    let violations = rates.iter().filter(|&&v| v < -tol).count();
    Ok(InvarianceRun {
        seed,
        samples,
        min_margin: rates[0],
        median_margin: rates[rates.len() / 2],
        positive_fraction: rates.iter().filter(|&&v| v > 0.0).count() as f64 / samples as f64,
        violations,
        passed: violations == 0,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceConfig {
    pub cone: String,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub runs: usize,
    pub tol: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Aggregate {
    pub min_margin: f64,
    pub violations: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub config: InvarianceConfig,
    pub runs: Vec<InvarianceRun>,
    pub aggregate: Aggregate,
    pub seeds: Vec<u64>,
}

/// `runs` independent batches with seeds `seed, seed + 1, ...`.
pub fn invariance_experiment(spec: &ConeSpec, n: usize, samples: usize, seed: u64, runs: usize, tol: f64) -> Result<InvarianceReport> {
    if runs == 0 {
        return Err(Error::InvalidParameter("run count must be at least 1".into()));
    }
    let seeds: Vec<u64> = (0..runs as u64).map(|k| seed.wrapping_add(k)).collect();
    let runs_out = seeds
        .iter()
        .map(|&sd| invariance_run(spec, n, samples, sd, tol))
        .collect::<Result<Vec<_>>>()?;
    let aggregate = Aggregate {
        min_margin: runs_out.iter().map(|r| r.min_margin).fold(f64::INFINITY, f64::min),
        violations: runs_out.iter().map(|r| r.violations).sum(),
        passed: runs_out.iter().all(|r| r.passed),
    };
    Ok(InvarianceReport {
        config: InvarianceConfig { cone: spec.to_string(), n, samples, seed, runs, tol },
        runs: runs_out,
        aggregate,
        seeds,
    })
}
