//! Fixture-driven CLI cases shared by the CLI tests and the acceptance run.
//!
//! Each case runs the `linhyp` binary from `tests/fixtures` and compares its
//! standard output (and the `--out` file, if any) with `tests/golden`.
//! Set `UPDATE_GOLDEN=1` to rewrite the golden files.

#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    /// Extension of the file written through `--out`, if the case writes one.
    pub out_ext: Option<&'static str>,
    pub exit: i32,
}

pub const CASES: &[Case] = &[
    Case { name: "classify_saddle", args: &["classify", "saddle.json"], out_ext: None, exit: 0 },
    Case { name: "classify_rotation", args: &["classify", "rotation.json"], out_ext: None, exit: 2 },
    Case {
        name: "classify_indeterminate",
        args: &["classify", "focus.json", "--tol", "0.24999999999999997"],
        out_ext: None,
        exit: 3,
    },
    Case { name: "margin_saddle", args: &["margin", "saddle.json"], out_ext: None, exit: 0 },
    Case { name: "margin_rotation", args: &["margin", "rotation.json"], out_ext: None, exit: 2 },
    Case { name: "margin_jordan", args: &["margin", "jordan.json", "--margin-tol", "1e-8"], out_ext: None, exit: 0 },
    Case {
        name: "perturb_saddle",
        args: &["perturb", "saddle.json", "--radius", "0.5", "--samples", "200", "--seed", "42"],
        out_ext: None,
        exit: 0,
    },
    Case {
        name: "perturb_near_saddle",
        args: &["perturb", "near_saddle.json", "--radius", "0.1", "--samples", "200", "--seed", "7"],
        out_ext: None,
        exit: 3,
    },
    Case {
        name: "perturb_default_radius",
        args: &["perturb", "focus_source.json", "--samples", "100", "--seed", "3"],
        out_ext: None,
        exit: 0,
    },
    Case { name: "perturb_rotation", args: &["perturb", "rotation.json", "--radius", "0.1"], out_ext: None, exit: 2 },
    Case {
        name: "flow_saddle",
        args: &["flow", "saddle.json", "--x0", "1,1", "--grid", "0:1:2"],
        out_ext: None,
        exit: 0,
    },
    Case {
        name: "flow_focus_source",
        args: &["flow", "focus_source.json", "--x0", "1,-0.5,0.25", "--grid", "-1,0,0.3,2.5"],
        out_ext: Some("csv"),
        exit: 0,
    },
    Case {
        name: "portrait_saddle",
        args: &["portrait", "saddle.json", "--seeds", "circle:8", "--t-range", "0,3", "--steps", "60"],
        out_ext: Some("svg"),
        exit: 0,
    },
    Case {
        name: "portrait_rotation",
        args: &["portrait", "rotation.json", "--seeds", "1,0;0.5,0", "--t-range", "0,6.3", "--steps", "63"],
        out_ext: Some("svg"),
        exit: 0,
    },
    Case { name: "verify_openness", args: &["verify", "openness", "--samples", "40"], out_ext: None, exit: 0 },
    Case { name: "verify_density", args: &["verify", "density", "--samples", "30"], out_ext: None, exit: 0 },
    Case { name: "verify_vieta", args: &["verify", "vieta", "--samples", "100", "--seed", "9"], out_ext: None, exit: 0 },
    Case { name: "verify_oracle", args: &["verify", "oracle", "--samples", "50", "--seed", "2"], out_ext: None, exit: 0 },
];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixtures() -> PathBuf {
    crate_dir().join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    crate_dir().join("tests/golden")
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_linhyp")
}

pub fn run_in(dir: &Path, args: &[&str], stdin: Option<&str>) -> Output {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(bin())
        .args(args)
        .current_dir(dir)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn linhyp");
    {
        let mut pipe = child.stdin.take().expect("stdin");
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).expect("write stdin");
        }
    }
    child.wait_with_output().expect("wait for linhyp")
}

/// Output of one case: exit code, stdout, and the `--out` file contents.
pub struct Produced {
    pub exit: i32,
    pub stdout: Vec<u8>,
    pub file: Option<Vec<u8>>,
    pub stderr: String,
}

pub fn produce(case: &Case, scratch: &Path) -> Produced {
    let mut args: Vec<String> = case.args.iter().map(|s| s.to_string()).collect();
    let out_path = case.out_ext.map(|ext| scratch.join(format!("{}.{ext}", case.name)));
    if let Some(p) = &out_path {
        args.push("--out".into());
        args.push(p.to_string_lossy().into_owned());
    }
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let out = run_in(&fixtures(), &refs, None);
    Produced {
        exit: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        file: out_path.map(|p| fs::read(p).expect("--out file written")),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn golden_paths(case: &Case) -> (PathBuf, Option<PathBuf>) {
    let dir = golden_dir();
    (
        dir.join(format!("{}.stdout", case.name)),
        case.out_ext.map(|ext| dir.join(format!("{}.{ext}", case.name))),
    )
}

pub fn updating() -> bool {
    std::env::var_os("UPDATE_GOLDEN").is_some_and(|v| v == "1")
}

/// Writes the golden files for `case` from `p`.
pub fn write_golden(case: &Case, p: &Produced) {
    let (stdout_path, file_path) = golden_paths(case);
    fs::create_dir_all(golden_dir()).expect("golden dir");
    fs::write(stdout_path, &p.stdout).expect("write golden");
    if let (Some(path), Some(bytes)) = (file_path, &p.file) {
        fs::write(path, bytes).expect("write golden");
    }
}

/// Byte comparison against the golden files; returns a description of the
/// first mismatch.
pub fn compare_golden(case: &Case, p: &Produced) -> Result<(), String> {
    let (stdout_path, file_path) = golden_paths(case);
    let want = fs::read(&stdout_path).map_err(|e| format!("{}: {e}", stdout_path.display()))?;
    if want != p.stdout {
        return Err(format!("{}: stdout differs from golden", case.name));
    }
    if let (Some(path), Some(bytes)) = (file_path, &p.file) {
        let want = fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        if &want != bytes {
            return Err(format!("{}: {} differs from golden", case.name, path.display()));
        }
    }
    Ok(())
}
