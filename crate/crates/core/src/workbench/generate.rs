//! Named operator generators.

use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::cone::{self, ConeSpec, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::operator::{wedge, CurvatureOperator};
use crate::random::{gaussian_bianchi, stream_rng};

/// Attempts allowed per random cone member.
pub const RANDOM_BUDGET: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    Identity,
    ScaledIdentity(f64),
    /// `S^k x R^(n-k)`: curvature one on planes inside the first `k` axes.
    ProductSphere(usize),
    /// Gauss operator `h ^ h` of a hypersurface with principal curvatures `kappa`.
    Hypersurface(Vec<f64>),
    Wedge(DMatrix<f64>, DMatrix<f64>),
    Random { cone: ConeSpec, seed: u64 },
    Explicit(PathBuf),
}

fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{x}'"))))
        .collect()
}

impl GeneratorSpec {
    /// Parses the command-line form: `identity`, `scaled-identity:<c>`,
    /// `product-sphere:<k>`, `hypersurface:<k1,..,kn>`,
    /// `wedge:<a1,..,an>|<b1,..,bn>` (diagonal factors), `random:<cone>`,
    /// `explicit:<file>`. `seed` feeds `random`.
    pub fn parse(text: &str, seed: u64) -> Result<Self> {
        let (kind, arg) = match text.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (text, None),
        };
        let need = |what: &str| arg.ok_or_else(|| Error::Parse(format!("generator '{kind}' needs {what}")));
        Ok(match kind {
            "identity" => Self::Identity,
            "scaled-identity" => {
                let a = need("a scale")?;
                Self::ScaledIdentity(a.parse().map_err(|_| Error::Parse(format!("bad scale '{a}'")))?)
            }
            "product-sphere" => {
                let a = need("k")?;
                Self::ProductSphere(a.parse().map_err(|_| Error::Parse(format!("bad k '{a}'")))?)
            }
            "hypersurface" => Self::Hypersurface(parse_list(need("principal curvatures")?)?),
            "wedge" => {
                let a = need("two diagonals")?;
                let (x, y) = a
                    .split_once('|')
                    .ok_or_else(|| Error::Parse("wedge expects <a1,..>|<b1,..>".into()))?;
                let diag = |v: Vec<f64>| DMatrix::from_diagonal(&DVector::from_vec(v));
                Self::Wedge(diag(parse_list(x)?), diag(parse_list(y)?))
            }
            "random" => Self::Random { cone: need("a cone")?.parse()?, seed },
            "explicit" | "file" => Self::Explicit(PathBuf::from(need("a path")?)),
            other => return Err(Error::Parse(format!("unknown generator '{other}'"))),
        })
    }
}

pub fn generate(spec: &GeneratorSpec, n: usize) -> Result<CurvatureOperator> {
    if n < 3 {
        return Err(Error::DimensionOutOfRange { found: n, min: 3, max: crate::lie::MAX_DIM });
    }
    match spec {
        GeneratorSpec::Identity => Ok(CurvatureOperator::identity(n)),
        GeneratorSpec::ScaledIdentity(c) => Ok(CurvatureOperator::identity(n).scale(*c)),
        GeneratorSpec::ProductSphere(k) => {
            if !(2..=n).contains(k) {
                return Err(Error::InvalidParameter(format!("product sphere needs 2 <= k <= n, got k = {k}")));
            }
            let p = DMatrix::from_fn(n, n, |i, j| if i == j && i < *k { 1.0 } else { 0.0 });
            wedge(&p, &p)
        }
        GeneratorSpec::Hypersurface(kappa) => {
            if kappa.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "hypersurface needs {n} principal curvatures, got {}",
                    kappa.len()
                )));
            }
            let h = DMatrix::from_diagonal(&DVector::from_column_slice(kappa));
            wedge(&h, &h)
        }
        GeneratorSpec::Wedge(a, b) => {
            if a.nrows() != n || b.nrows() != n {
                return Err(Error::InvalidParameter(format!("wedge factors must be {n}x{n}")));
            }
            wedge(a, b)
        }
        GeneratorSpec::Random { cone, seed } => random_member(cone, n, &mut stream_rng(*seed, 0)),
        GeneratorSpec::Explicit(path) => {
            let r = super::io::read_operator(path)?;
            if r.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: r.dim() });
            }
            Ok(r)
        }
    }
}

/// A member of `cone` with strictly positive margin.
///
/// Recipe: symmetric Gaussian coefficients, Bianchi projection, a shift by
/// the minimal multiple of `I` that reaches the cone plus a random slack,
/// then rejection until the membership test passes.
pub fn random_member<R: Rng + ?Sized>(cone: &ConeSpec, n: usize, rng: &mut R) -> Result<CurvatureOperator> {
    cone.validate()?;
    let id = CurvatureOperator::identity(n);
    for _ in 0..RANDOM_BUDGET {
        let x = gaussian_bianchi(rng, n);
        let slack = (0.02 + rng.random::<f64>()) * x.norm() / (x.len() as f64).sqrt();
        let shift = match cone::minimal_identity_shift(cone, &x) {
            Ok(t) => t + slack,
            Err(_) => 0.0,
        };
        let y = &x + &id.scale(shift);
        let m = cone::contains(cone, &y, DEFAULT_TOL)?;
        if m.inside && m.margin > 0.0 {
            return Ok(y);
        }
    }
    Err(Error::SamplingBudget { budget: RANDOM_BUDGET })
}

/// Hypersurface pinching `n min(kappa) / sum(kappa)` next to the operator
/// pinching `delta_max` of the Gauss operator.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct HypersurfacePinching {
    pub hypersurface_delta: f64,
    pub operator_delta_max: f64,
}

pub fn hypersurface_pinching(kappa: &[f64]) -> Result<HypersurfacePinching> {
    let n = kappa.len();
    let r = generate(&GeneratorSpec::Hypersurface(kappa.to_vec()), n)?;
    let sum: f64 = kappa.iter().sum();
    if !(sum > 0.0) {
        return Err(Error::InvalidParameter("principal curvatures must have positive sum".into()));
    }
    let min = kappa.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(HypersurfacePinching {
        hypersurface_delta: n as f64 * min / sum,
        operator_delta_max: cone::delta_max(&r)?,
    })
}
