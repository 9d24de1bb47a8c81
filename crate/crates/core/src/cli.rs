//! Command-line front end.
//!
//! Matrices are read from a JSON `MatrixFile` (`{"d": 2, "data": [[..], [..]]}`)
//! given as a path or on standard input. Reports go to standard output as
//! pretty-printed JSON with shortest round-trip numbers; CSV and SVG go to
//! `--out` or standard output.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |---|---|
//! | 0 | success: hyperbolic, no flips, all properties pass |
//! | 1 | usage, input or numerical error |
//! | 2 | input not hyperbolic (`classify`, `margin`, `perturb`) |
//! | 3 | indeterminate (`classify`), flips found (`perturb`), property failures (`verify`) |

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::densemat::MatrixR;
use crate::flow::{portrait, trajectory, PortraitOptions};
use crate::inertia::{classify, default_tau, HyperbolicityVerdict};
use crate::robustness::{margin, perturb_campaign};
use crate::spectral::eigenvalues;
use crate::verify::{run_suite, Suite};

pub const DEFAULT_MARGIN_TOL: f64 = 1e-6;
pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 1;
/// `--radius` defaults to this fraction of `margin.lower`.
pub const DEFAULT_RADIUS_FRACTION: f64 = 0.9;
pub const DEFAULT_SEEDS: &str = "circle:8";
pub const DEFAULT_T_RANGE: &str = "0,4";
pub const DEFAULT_STEPS: usize = 200;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_HYPERBOLIC: i32 = 2;
pub const EXIT_FLAGGED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "linhyp", version, about = "Hyperbolicity, inertia and robustness of real square matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues, inertia (s, u, c) and hyperbolicity verdict.
    Classify {
        #[command(flatten)]
        input: Input,
    },
    /// Distance to the nearest non-hyperbolic matrix.
    Margin {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_MARGIN_TOL)]
        margin_tol: f64,
    },
    /// Seeded random perturbation campaign.
    Perturb {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Perturbation norm bound [default: 0.9 · margin lower bound]
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MARGIN_TOL)]
        margin_tol: f64,
    },
    /// Samples x(t) = e^{tH} x0 as CSV.
    Flow {
        #[command(flatten)]
        input: Input,
        /// Initial state, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        /// Times: a comma-separated ascending list, or start:stop:intervals.
        #[arg(long, alias = "times", allow_hyphen_values = true, default_value = "0")]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG phase portrait of a 2×2 flow.
    Portrait {
        #[command(flatten)]
        input: Input,
        /// circle:N for N points on the unit circle, or x,y;x,y;...
        #[arg(long, allow_hyphen_values = true, default_value = DEFAULT_SEEDS)]
        seeds: String,
        /// start,stop
        #[arg(long, allow_hyphen_values = true, default_value = DEFAULT_T_RANGE)]
        t_range: String,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Property suite: openness, density, vieta or oracle.
    Verify {
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Number of instances [default: the suite's own]
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct Input {
    /// Matrix file; standard input when omitted or "-".
    pub file: Option<PathBuf>,
    /// Imaginary-axis band half-width [default: 1e-9 · (1 + ‖A‖₂)]
    #[arg(long)]
    pub tol: Option<f64>,
}

/// On-disk matrix format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub d: usize,
    pub data: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &MatrixR) -> Self {
        Self { d: m.dim(), data: m.rows() }
    }

    /// Parses and validates, naming the offending field on failure.
    pub fn parse(text: &str) -> Result<MatrixR, String> {
        let v: Value = serde_json::from_str(text).map_err(|e| format!("matrix file is not valid JSON: {e}"))?;
        let obj = v.as_object().ok_or("matrix file must be a JSON object with fields d and data")?;
        let d = obj.get("d").ok_or("missing field d")?;
        let d = d
            .as_u64()
            .filter(|&d| d > 0)
            .ok_or_else(|| format!("field d must be a positive integer, got {d}"))? as usize;
        let rows = obj.get("data").ok_or("missing field data")?;
        let rows = rows.as_array().ok_or("field data must be an array of rows")?;
        if rows.len() != d {
            return Err(format!("data has {} rows, expected {d}", rows.len()));
        }
        let mut flat = Vec::with_capacity(d * d);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| format!("data[{i}] must be an array"))?;
            if row.len() != d {
                return Err(format!("data[{i}] has {} entries, expected {d}", row.len()));
            }
            for (j, x) in row.iter().enumerate() {
                let x = x
                    .as_f64()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| format!("data[{i}][{j}] must be a finite number, got {x}"))?;
                flat.push(x);
            }
        }
        MatrixR::from_row_major(d, flat).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix file serializes")
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, stdin, stdout, stderr) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_ERROR
        }
    }
}

type CmdResult = Result<i32, String>;

fn dispatch(cmd: Command, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Classify { input } => cmd_classify(&input, stdin, stdout),
        Command::Margin { input, margin_tol } => cmd_margin(&input, margin_tol, stdin, stdout),
        Command::Perturb { input, samples, radius, seed, margin_tol } => {
            cmd_perturb(&input, samples, radius, seed, margin_tol, stdin, stdout)
        }
        Command::Flow { input, x0, grid, out } => cmd_flow(&input, &x0, &grid, out.as_deref(), stdin, stdout),
        Command::Portrait { input, seeds, t_range, steps, out } => {
            cmd_portrait(&input, &seeds, &t_range, steps, out.as_deref(), stdin, stdout, stderr)
        }
        Command::Verify { suite, seed, samples } => cmd_verify(&suite, seed, samples, stdout),
    }
}

fn load(input: &Input, stdin: &mut dyn Read) -> Result<(MatrixR, f64), String> {
    let text = match input.file.as_deref() {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?
        }
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| format!("cannot read standard input: {e}"))?;
            s
        }
    };
    let m = MatrixFile::parse(&text)?;
    let tau = match input.tol {
        Some(t) if t.is_finite() && t >= 0.0 => t,
        Some(t) => return Err(format!("--tol must be finite and >= 0, got {t}")),
        None => default_tau(&m),
    };
    Ok((m, tau))
}

fn emit_json(stdout: &mut dyn Write, v: &impl Serialize) -> Result<(), String> {
    let text = serde_json::to_string_pretty(v).map_err(|e| e.to_string())?;
    writeln!(stdout, "{text}").map_err(|e| e.to_string())
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, text: &str) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn cmd_classify(input: &Input, stdin: &mut dyn Read, stdout: &mut dyn Write) -> CmdResult {
    let (m, tau) = load(input, stdin)?;
    let spec = eigenvalues(&m).map_err(|e| e.to_string())?;
    let verdict = classify(&m, tau).map_err(|e| e.to_string())?;
    let i = verdict.inertia();
    let mut report = json!({
        "verdict": verdict.name(),
        "s": i.s,
        "u": i.u,
        "c": i.c,
        "tau": tau,
        "eigenvalues": spec.sorted(),
        "residual_bound": spec.residual_bound,
    });
    if let HyperbolicityVerdict::NonHyperbolic { witness, .. } = &verdict {
        report["witness"] = json!(witness);
    }
    emit_json(stdout, &report)?;
    Ok(match verdict {
        HyperbolicityVerdict::Hyperbolic { .. } => EXIT_OK,
        HyperbolicityVerdict::NonHyperbolic { .. } => EXIT_NOT_HYPERBOLIC,
        HyperbolicityVerdict::Indeterminate { .. } => EXIT_FLAGGED,
    })
}

fn cmd_margin(input: &Input, margin_tol: f64, stdin: &mut dyn Read, stdout: &mut dyn Write) -> CmdResult {
    let (m, tau) = load(input, stdin)?;
    let r = margin(&m, tau, margin_tol).map_err(|e| e.to_string())?;
    emit_json(stdout, &r)?;
    Ok(if r.hyperbolic { EXIT_OK } else { EXIT_NOT_HYPERBOLIC })
}

fn cmd_perturb(
    input: &Input,
    samples: usize,
    radius: Option<f64>,
    seed: u64,
    margin_tol: f64,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
) -> CmdResult {
    if samples == 0 {
        return Err("--samples must be >= 1".into());
    }
    let (m, tau) = load(input, stdin)?;
    if !classify(&m, tau).map_err(|e| e.to_string())?.is_hyperbolic() {
        emit_json(stdout, &json!({ "error": "base matrix is not hyperbolic", "tau": tau }))?;
        return Ok(EXIT_NOT_HYPERBOLIC);
    }
    let radius = match radius {
        Some(r) => r,
        None => {
            let mr = margin(&m, tau, margin_tol).map_err(|e| e.to_string())?;
            DEFAULT_RADIUS_FRACTION * mr.lower
        }
    };
    let report = perturb_campaign(&m, samples, radius, seed, tau).map_err(|e| e.to_string())?;
    emit_json(stdout, &report)?;
    Ok(if report.flips == 0 { EXIT_OK } else { EXIT_FLAGGED })
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("{what}: {x:?} is not a finite number"))
        })
        .collect()
}

/// `a,b,c` or `start:stop:intervals`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [_] => parse_list(s, "--grid"),
        [a, b, n] => {
            let a = parse_list(a, "--grid start")?[0];
            let b = parse_list(b, "--grid stop")?[0];
            let n: usize = n
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| format!("--grid: interval count {n:?} must be a positive integer"))?;
            Ok((0..=n).map(|k| if k == n { b } else { a + (b - a) * k as f64 / n as f64 }).collect())
        }
        _ => Err(format!("--grid: expected a list or start:stop:intervals, got {s:?}")),
    }
}

fn cmd_flow(
    input: &Input,
    x0: &str,
    grid: &str,
    out: Option<&Path>,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
) -> CmdResult {
    let (m, _) = load(input, stdin)?;
    let x0 = parse_list(x0, "--x0")?;
    let grid = parse_grid(grid)?;
    let tr = trajectory(&m, &x0, &grid).map_err(|e| e.to_string())?;
    let mut csv = String::from("t");
    for i in 1..=m.dim() {
        csv.push_str(&format!(",x{i}"));
    }
    csv.push('\n');
    for (t, x) in tr.times.iter().zip(&tr.states) {
        csv.push_str(&format!("{t:.16e}"));
        for v in x {
            csv.push_str(&format!(",{v:.16e}"));
        }
        csv.push('\n');
    }
    emit(out, stdout, &csv)?;
    Ok(EXIT_OK)
}

/// `circle:N` or `x,y;x,y;…`.
pub fn parse_seeds(s: &str) -> Result<Vec<[f64; 2]>, String> {
    if let Some(n) = s.strip_prefix("circle:") {
        let n: usize = n
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("--seeds: circle count {n:?} must be a positive integer"))?;
        return Ok((0..n)
            .map(|k| {
                let (sin, cos) = (2.0 * std::f64::consts::PI * k as f64 / n as f64).sin_cos();
                [cos, sin]
            })
            .collect());
    }
    s.split(';')
        .map(|p| match parse_list(p, "--seeds")?.as_slice() {
            [x, y] => Ok([*x, *y]),
            other => Err(format!("--seeds: point {p:?} has {} coordinates, expected 2", other.len())),
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_portrait(
    input: &Input,
    seeds: &str,
    t_range: &str,
    steps: usize,
    out: Option<&Path>,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CmdResult {
    let (m, tau) = load(input, stdin)?;
    let seeds = parse_seeds(seeds)?;
    let t_range = match parse_list(t_range, "--t-range")?.as_slice() {
        [a, b] => (*a, *b),
        _ => return Err("--t-range: expected start,stop".into()),
    };
    let svg = portrait(&m, &seeds, &PortraitOptions { t_range, steps, tau }).map_err(|e| e.to_string())?;
    let verdict = classify(&m, tau).map_err(|e| e.to_string())?;
    let i = verdict.inertia();
    let summary = format!("s={} u={} c={} verdict={}", i.s, i.u, i.c, verdict.name());
    emit(out, stdout, &svg)?;
    let target: &mut dyn Write = if out.is_some() { stdout } else { stderr };
    writeln!(target, "{summary}").map_err(|e| e.to_string())?;
    Ok(EXIT_OK)
}

fn cmd_verify(suite: &str, seed: u64, samples: Option<usize>, stdout: &mut dyn Write) -> CmdResult {
    let suite: Suite = suite.parse().map_err(|e: crate::Error| e.to_string())?;
    let report = run_suite(suite, seed, samples).map_err(|e| e.to_string())?;
    emit_json(stdout, &report)?;
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_FLAGGED })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_name_the_field() {
        let e = MatrixFile::parse(r#"{"d": 2, "data": [[1, 2], [3, 4, 5]]}"#).unwrap_err();
        assert_eq!(e, "data[1] has 3 entries, expected 2");
        let e = MatrixFile::parse(r#"{"data": [[1]]}"#).unwrap_err();
        assert_eq!(e, "missing field d");
        let e = MatrixFile::parse(r#"{"d": 2, "data": [[1, 2]]}"#).unwrap_err();
        assert_eq!(e, "data has 1 rows, expected 2");
        let e = MatrixFile::parse(r#"{"d": 1, "data": [["x"]]}"#).unwrap_err();
        assert!(e.starts_with("data[0][0]"));
        assert!(MatrixFile::parse(r#"{"d": 0, "data": []}"#).unwrap_err().starts_with("field d"));
    }

    #[test]
    fn matrix_file_round_trip() {
        let m = MatrixR::from_rows(&[[0.1, -1e-300], [std::f64::consts::PI, 7.0]]).unwrap();
        let back = MatrixFile::parse(&MatrixFile::from_matrix(&m).to_json()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn grids_and_seeds() {
        assert_eq!(parse_grid("0:1:2").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0, 0.25").unwrap(), vec![0.0, 0.25]);
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("a").is_err());
        assert_eq!(parse_seeds("1,0;0,-1").unwrap(), vec![[1.0, 0.0], [0.0, -1.0]]);
        assert_eq!(parse_seeds("circle:4").unwrap().len(), 4);
        assert!(parse_seeds("1,2,3").is_err());
    }
}
