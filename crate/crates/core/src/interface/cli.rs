//! Command line front end. `run` takes the argument list and two output
//! streams so it can be driven from tests without spawning a process.
//!
//! Exit codes: 0 success, 1 malformed input or usage error, 2 violated
//! precondition (non-unitary, non-Hermitian, ...), 3 tolerance or internal
//! failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use super::documents::{
    params_to_value, parse_matrix, parse_params, serialize_matrix, MatrixDocument,
    MatrixKind, ParamsDocument,
};
use super::generator::{generate_haar_unitary, SeededGenerator};
use super::selftest;
use crate::characteristic::{characteristic_decomposition_with, regularity_of_middle};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix3, Tolerances};
use crate::parametrization::{compose_core_params, compose_unitary, recover_params_with};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "polar3", version, about = "Nine-parameter chart of 3x3 unitaries and coherency matrix analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a unitary from a parameter document.
    Compose {
        /// Parameter document, or `-` for standard input.
        #[arg(long)]
        params: PathBuf,
        /// Emit only the core matrix, ignoring any rotation angles.
        #[arg(long)]
        core_only: bool,
        /// Write the matrix document here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover canonical parameters from a unitary matrix document.
    Recover {
        #[arg(long)]
        matrix: PathBuf,
        /// Largest accepted reconstruction residual (Frobenius).
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
    /// Recover, recompose and report the reconstruction residual.
    Roundtrip {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
    /// Characteristic decomposition and regularity of a coherency matrix.
    Chardecomp {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Emit Haar-random unitaries from a seeded generator.
    Gen {
        #[arg(long, value_name = "N")]
        haar: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// One file per matrix in this directory instead of standard output.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the invariant suite and report each property.
    Selftest,
}

/// Maps an error to its exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e.root() {
        Error::MalformedDocument(_) | Error::Io(_) => EXIT_MALFORMED,
        Error::NotUnitary { .. }
        | Error::NotHermitian { .. }
        | Error::NotPositiveSemidefinite { .. }
        | Error::NotOrthogonal { .. }
        | Error::NotUnit { .. }
        | Error::ZeroTrace => EXIT_PRECONDITION,
        _ => EXIT_TOLERANCE,
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_MALFORMED
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| {
            Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        })
    }
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix3> {
    Ok(parse_matrix(&read_input(path)?)?.matrix)
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn matrix_value(m: &ComplexMatrix3) -> Value {
    json!({ "re": m.re(), "im": m.im() })
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Compose {
            params,
            core_only,
            out: target,
        } => {
            let doc = parse_params(&read_input(&params)?)?;
            let m = if core_only {
                compose_core_params(&doc.core)
            } else {
                compose_unitary(&doc.to_unitary_params())
            };
            let text = serialize_matrix(&MatrixDocument::new(MatrixKind::Unitary, m));
            match target {
                Some(p) => fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Command::Recover { matrix, tolerance } => {
            let u = read_matrix(&matrix)?;
            let tol = Tolerances {
                recovery: tolerance,
                ..Tolerances::default()
            };
            let report = recover_params_with(&u, &tol)?;
            let mut v = params_to_value(&ParamsDocument::full(&report.params));
            v["residual"] = json!(report.residual);
            v["branch"] = json!(report.branch.label());
            out.write_all(pretty(&v).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Roundtrip { matrix, tolerance } => {
            let u = read_matrix(&matrix)?;
            // Recover without a residual cap so the residual is always printed.
            let tol = Tolerances {
                recovery: f64::INFINITY,
                ..Tolerances::default()
            };
            let report = recover_params_with(&u, &tol)?;
            let residual = compose_unitary(&report.params).distance(&u);
            let pass = residual <= tolerance;
            let v = json!({ "residual": residual, "tolerance": tolerance, "pass": pass });
            out.write_all(pretty(&v).as_bytes())?;
            if !pass {
                let _ = writeln!(err, "error: residual {residual:e} exceeds tolerance {tolerance:e}");
                return Ok(EXIT_TOLERANCE);
            }
            Ok(EXIT_OK)
        }
        Command::Chardecomp { matrix } => {
            let r = read_matrix(&matrix)?;
            let tol = Tolerances::default();
            let c = characteristic_decomposition_with(&r, &tol)?;
            let reg = regularity_of_middle(&c.rm_hat, &tol);
            let v = json!({
                "trace": c.trace,
                "eigenvalues": c.eigen.eigenvalues,
                "p1": c.purity.p1,
                "p2": c.purity.p2,
                "coefficients": c.coefficients,
                "components": {
                    "rp_hat": matrix_value(&c.rp_hat),
                    "rm_hat": matrix_value(&c.rm_hat),
                    "ru_hat": matrix_value(&c.ru_hat),
                },
                "regularity": {
                    "m_hat": reg.m_hat,
                    "chi_m": reg.chi_m,
                    "regular": reg.regular,
                    "im_norm": reg.im_norm,
                },
            });
            out.write_all(pretty(&v).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Gen { haar, seed, out_dir } => {
            let mut g = SeededGenerator::new(seed);
            if let Some(dir) = &out_dir {
                fs::create_dir_all(dir)?;
            }
            for i in 0..haar {
                let doc = MatrixDocument::new(MatrixKind::Unitary, generate_haar_unitary(&mut g));
                let text = serialize_matrix(&doc);
                match &out_dir {
                    Some(dir) => fs::write(dir.join(format!("haar-{seed}-{i:05}.json")), text)?,
                    None => {
                        if i > 0 {
                            out.write_all(b"\n")?;
                        }
                        out.write_all(text.as_bytes())?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Selftest => {
            let mut all = true;
            selftest::run_with(|check| {
                all &= check.passed;
                let _ = writeln!(out, "{check}");
            });
            if all {
                Ok(EXIT_OK)
            } else {
                let _ = writeln!(err, "error: selftest failed");
                Ok(EXIT_TOLERANCE)
            }
        }
    }
}
