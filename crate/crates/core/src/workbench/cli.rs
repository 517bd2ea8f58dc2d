//! The `curvlab` command line.
//!
//! Exit status: 0 on success, 1 on usage or validation errors, 2 when a
//! tested property fails (cone membership, certification, identity or
//! invariance violations).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use super::experiments::{invariance_experiment, ric_wedge_suite};
use super::generate::{generate, hypersurface_pinching, GeneratorSpec};
use super::io::{operator_to_json, read_operator, write_trajectory_csv};
use crate::cone::{self, ConeSpec};
use crate::error::{Error, Result};
use crate::flow::{integrate, FlowStatus, IntegratorConfig, Normalization};
use crate::lie::LieStructure;
use crate::operator::CurvatureOperator;
use crate::sharp::{q_vector_field, sharp};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "curvlab", version, about = "Algebraic curvature operator workbench")]
struct Cli {
    /// Dimension of the underlying Euclidean space.
    #[arg(long, global = true, default_value_t = 3)]
    n: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = cone::DEFAULT_TOL)]
    tol: f64,
    /// Monte-Carlo sample count (default depends on the command).
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, default_value_t = 1.0)]
    horizon: f64,
    /// Number of equally spaced output rows for `flow`; every accepted step
    /// is written when omitted.
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// Follow the flow on the unit sphere.
    #[arg(long, global = true)]
    normalize: bool,
    /// Write the payload here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Source {
    /// Operator JSON file.
    #[arg(long, conflicts_with = "kind")]
    input: Option<PathBuf>,
    /// Generator, e.g. `identity`, `scaled-identity:2`, `random:pinch:0.3`.
    #[arg(long)]
    kind: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a generated operator as JSON.
    Gen {
        #[arg(long, default_value = "identity")]
        kind: String,
    },
    /// Print the irreducible splitting, Ricci data and spectrum.
    Decompose(Source),
    /// A # B of two operator files (A # A when B is omitted).
    Sharp {
        a: PathBuf,
        b: Option<PathBuf>,
        /// Emit the reaction term 2(A^2 + A^#) instead.
        #[arg(long, conflicts_with = "b")]
        field: bool,
    },
    /// Check R + R # I = Ric ^ id on random Bianchi operators.
    IdentityCheck {
        /// Also check every dimension from --n up to this one.
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Cone membership and certification.
    Cone {
        #[command(subcommand)]
        command: ConeCommand,
    },
    /// Integrate dR/dt = 2(R^2 + R^#) and write the trajectory as CSV.
    Flow {
        #[command(flatten)]
        source: Source,
        /// Comma-separated cones whose margins are recorded.
        #[arg(long, value_delimiter = ',')]
        cones: Vec<String>,
        /// Only mu_min, mu_2 and mu_max of the spectrum.
        #[arg(long)]
        compact: bool,
    },
    /// Monte-Carlo inward test at boundary samples of psd, 2nn or labcb:b.
    Invariance {
        spec: String,
        /// Independent batches with consecutive seeds.
        #[arg(long, default_value_t = 1)]
        runs: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ConeCommand {
    /// Membership test and margin.
    Check {
        spec: String,
        #[command(flatten)]
        source: Source,
    },
    /// Largest grid b with l_ab^-1(R) in C(b).
    Certify {
        #[command(flatten)]
        source: Source,
    },
}

enum Failure {
    Invalid(Error),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CertificationFailed { .. } | Error::NotPinched { .. } => Failure::Violation(e.to_string()),
            other => Failure::Invalid(other),
        }
    }
}

type Outcome = std::result::Result<Output, Failure>;

/// Payload plus an optional note for standard error.
struct Output {
    payload: String,
    note: Option<String>,
    violation: Option<String>,
}

impl Output {
    fn ok(payload: String) -> Self {
        Self { payload, note: None, violation: None }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

fn load(cli: &Cli, src: &Source) -> Result<CurvatureOperator> {
    match (&src.input, &src.kind) {
        (Some(path), _) => {
            let r = read_operator(path)?;
            if r.dim() != cli.n {
                return Err(Error::DimensionMismatch { expected: cli.n, found: r.dim() });
            }
            Ok(r)
        }
        (None, Some(kind)) => generate(&GeneratorSpec::parse(kind, cli.seed)?, cli.n),
        (None, None) => Err(Error::InvalidParameter("give an operator with --input <file> or --kind <generator>".into())),
    }
}

fn matrix_rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Gen { kind } => {
            let spec = GeneratorSpec::parse(kind, cli.seed)?;
            let r = generate(&spec, cli.n)?;
            let note = match &spec {
                GeneratorSpec::Hypersurface(kappa) => {
                    let row = hypersurface_pinching(kappa)?;
                    Some(format!(
                        "hypersurface_delta = {}\noperator_delta_max = {}",
                        row.hypersurface_delta, row.operator_delta_max
                    ))
                }
                _ => None,
            };
            Ok(Output { payload: operator_to_json(&r), note, violation: None })
        }
        Command::Decompose(src) => {
            let r = load(cli, src)?;
            let parts = r.decompose()?;
            let delta_max = cone::delta_max(&r).ok();
            Ok(Output::ok(pretty(&json!({
                "n": r.dim(),
                "scal": parts.scal,
                "lambda_bar": parts.lambda_bar,
                "ric": matrix_rows(&parts.ric),
                "ric0": matrix_rows(&parts.ric0),
                "norm_I": parts.norm_scalar,
                "norm_ric0": parts.norm_ricci,
                "norm_W": parts.norm_weyl,
                "anisotropy": parts.anisotropy(),
                "spectrum": r.spectrum().values,
                "delta_max": delta_max,
                "bianchi_defect": r.bianchi_defect(),
                "scalar_part": matrix_rows(parts.scalar_part.coeffs()),
                "ricci_part": matrix_rows(parts.ricci_part.coeffs()),
                "weyl_part": matrix_rows(parts.weyl_part.coeffs()),
            }))))
        }
        Command::Sharp { a, b, field } => {
            let ra = read_operator(a)?;
            let s = LieStructure::new(ra.dim())?;
            let out = if *field {
                q_vector_field(&s, &ra)?
            } else {
                let rb = match b {
                    Some(p) => read_operator(p)?,
                    None => ra.clone(),
                };
                sharp(&s, &ra, &rb)?
            };
            Ok(Output::ok(operator_to_json(&out)))
        }
        Command::IdentityCheck { max_n } => {
            let last = max_n.unwrap_or(cli.n);
            if last < cli.n {
                return Err(Failure::Invalid(Error::InvalidParameter(format!("--max-n {last} is below --n {}", cli.n))));
            }
            let samples = cli.samples.unwrap_or(100);
            let suites = (cli.n..=last)
                .map(|n| ric_wedge_suite(n, samples, cli.seed, cli.tol))
                .collect::<Result<Vec<_>>>()?;
            let failed: Vec<usize> = suites.iter().filter(|s| !s.passed).map(|s| s.n).collect();
            let payload = pretty(&serde_json::to_value(&suites).map_err(Error::from)?);
            let violation = (!failed.is_empty()).then(|| format!("identity residual above tolerance for n in {failed:?}"));
            Ok(Output { payload, note: None, violation })
        }
        Command::Cone { command: ConeCommand::Check { spec, source } } => {
            let spec: ConeSpec = spec.parse()?;
            let r = load(cli, source)?;
            let m = cone::contains(&spec, &r, cli.tol)?;
            let payload = pretty(&json!({
                "cone": spec.to_string(),
                "margin": m.margin,
                "normalized": m.normalized,
                "inside": m.inside,
            }));
            let violation = (!m.inside).then(|| format!("operator is outside {spec}"));
            Ok(Output { payload, note: None, violation })
        }
        Command::Cone { command: ConeCommand::Certify { source } } => {
            let r = load(cli, source)?;
            let cert = cone::certify_cone_entry(&r, &cone::default_grid(), cli.tol)?;
            Ok(Output::ok(pretty(&json!({
                "b": cert.params.b,
                "a": cert.params.a,
                "p": cert.params.p,
                "delta_max": cone::delta_max(&r)?,
                "margin": cert.margin,
                "reverified_margin": cert.reverified_margin,
            }))))
        }
        Command::Flow { source, cones, compact } => {
            let r = load(cli, source)?;
            let cones = cones.iter().map(|c| c.parse()).collect::<Result<Vec<ConeSpec>>>()?;
            let mut cfg = IntegratorConfig {
                horizon: cli.horizon,
                normalization: if cli.normalize { Normalization::UnitNorm } else { Normalization::None },
                cones,
                ..Default::default()
            };
            if let Some(steps) = cli.steps {
                cfg = cfg.with_output_steps(steps)?;
            }
            let s = LieStructure::new(cli.n)?;
            let traj = integrate(&s, &r, &cfg)?;
            let mut buf = Vec::new();
            write_trajectory_csv(&traj, &mut buf, *compact)?;
            let status = match &traj.status {
                FlowStatus::Horizon => "horizon reached".to_string(),
                FlowStatus::BlowUp { t_est } => format!("blow-up, estimated time {t_est}"),
                FlowStatus::Error { message } => return Err(Failure::Invalid(Error::Precondition(message.clone()))),
            };
            let note = format!(
                "{status}; {} accepted, {} rejected steps, {} re-projections",
                traj.accepted_steps, traj.rejected_steps, traj.reprojections
            );
            Ok(Output { payload: String::from_utf8(buf).expect("csv output is utf-8"), note: Some(note), violation: None })
        }
        Command::Invariance { spec, runs } => {
            let spec: ConeSpec = spec.parse()?;
            let samples = cli.samples.unwrap_or(1000);
            let report = invariance_experiment(&spec, cli.n, samples, cli.seed, *runs, cli.tol)?;
            let violation = (!report.aggregate.passed).then(|| {
                format!(
                    "{} samples below -tol (min margin {})",
                    report.aggregate.violations, report.aggregate.min_margin
                )
            });
            let payload = pretty(&serde_json::to_value(&report).map_err(Error::from)?);
            Ok(Output { payload, note: None, violation })
        }
    }
}

/// Runs the command line with explicit streams; returns the exit status.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_INVALID
                }
            };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &out.payload),
                None => stdout.write_all(out.payload.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_INVALID;
            }
            if let Some(note) = out.note {
                let _ = writeln!(stderr, "{note}");
            }
            match out.violation {
                Some(v) => {
                    let _ = writeln!(stderr, "violation: {v}");
                    EXIT_VIOLATION
                }
                None => EXIT_OK,
            }
        }
        Err(Failure::Invalid(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INVALID
        }
        Err(Failure::Violation(v)) => {
            let _ = writeln!(stderr, "violation: {v}");
            EXIT_VIOLATION
        }
    }
}

/// Runs the command line on the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
