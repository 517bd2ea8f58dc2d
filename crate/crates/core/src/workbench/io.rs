//! Operator files, trajectory tables and experiment reports.
//!
//! An operator file is JSON with the full symmetric coefficient matrix in the
//! lexicographic `(i<j)` basis:
//!
//! ```json
//! { "n": 3, "basis": "lex-upper", "coeffs": [[1, 0, 0], [0, 1, 0], [0, 0, 1]] }
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::flow::FlowTrajectory;
use crate::lie::basis_len;
use crate::operator::CurvatureOperator;

pub const BASIS_TAG: &str = "lex-upper";

#[derive(Deserialize)]
struct OperatorFile {
    n: usize,
    basis: String,
    coeffs: Vec<Vec<f64>>,
}

/// Pretty JSON with one matrix row per line.
pub fn operator_to_json(r: &CurvatureOperator) -> String {
    let rows: Vec<String> = r
        .coeffs()
        .row_iter()
        .map(|row| {
            let row: Vec<f64> = row.iter().copied().collect();
            serde_json::to_string(&row).expect("finite rows serialize")
        })
        .collect();
    format!(
        "{{\n  \"n\": {},\n  \"basis\": \"{BASIS_TAG}\",\n  \"coeffs\": [\n    {}\n  ]\n}}\n",
        r.dim(),
        rows.join(",\n    ")
    )
}

/// Parses an operator file, checking the basis tag, the matrix shape and
/// symmetry. Values are kept bit for bit.
pub fn operator_from_json(text: &str) -> Result<CurvatureOperator> {
    let file: OperatorFile = serde_json::from_str(text)?;
    if file.basis != BASIS_TAG {
        return Err(Error::Parse(format!("unsupported basis '{}', expected '{BASIS_TAG}'", file.basis)));
    }
    if !(2..=crate::lie::MAX_DIM).contains(&file.n) {
        return Err(Error::DimensionOutOfRange { found: file.n, min: 2, max: crate::lie::MAX_DIM });
    }
    let len = basis_len(file.n);
    let rows = file.coeffs.len();
    let cols = file.coeffs.first().map_or(0, Vec::len);
    if rows != len || file.coeffs.iter().any(|row| row.len() != len) {
        let cols = file.coeffs.iter().map(Vec::len).find(|&c| c != len).unwrap_or(cols);
        return Err(Error::SizeMismatch { expected: len, rows, cols });
    }
    let m = DMatrix::from_fn(len, len, |r, c| file.coeffs[r][c]);
    CurvatureOperator::new(file.n, m)
}

pub fn read_operator(path: &Path) -> Result<CurvatureOperator> {
    operator_from_json(&fs::read_to_string(path)?)
}

pub fn write_operator(path: &Path, r: &CurvatureOperator) -> Result<()> {
    fs::write(path, operator_to_json(r))?;
    Ok(())
}

fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x}")
    }
}

/// Column names of a trajectory table. `compact` keeps only
/// `mu_min, mu_2, mu_max` of the spectrum.
pub fn trajectory_header(n: usize, cones: &[crate::cone::ConeSpec], compact: bool) -> Vec<String> {
    let mut h: Vec<String> = vec!["t".into(), "scal".into(), "lambda_bar".into()];
    if compact {
        h.extend(["mu_min", "mu_2", "mu_max"].map(String::from));
    } else {
        h.extend((1..=basis_len(n)).map(|k| format!("mu_{k}")));
    }
    h.extend(["delta_max", "norm_I", "norm_ric0", "norm_W", "anisotropy"].map(String::from));
    h.extend(cones.iter().map(|c| format!("margin:{c}")));
    h
}

/// Writes one row per recorded sample. `delta_max` is empty where the
/// scalar curvature is not positive.
pub fn write_trajectory_csv<W: Write>(traj: &FlowTrajectory, out: W, compact: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(trajectory_header(traj.n, &traj.cones, compact))?;
    for s in &traj.samples {
        let mut row = vec![num(s.t), num(s.scal), num(s.lambda_bar)];
        if compact {
            let mu = &s.spectrum;
            row.extend([mu[0], mu[1], mu[mu.len() - 1]].map(num));
        } else {
            row.extend(s.spectrum.iter().map(|&v| num(v)));
        }
        row.push(s.delta_max.map(num).unwrap_or_default());
        row.extend([s.norm_scalar, s.norm_ricci, s.norm_weyl, s.anisotropy].map(num));
        row.extend(s.margins.iter().map(|&m| num(m)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
