//! Golden CLI cases shared by the golden and acceptance suites.

use std::path::PathBuf;

use padic_channels::cli::{run, Outcome};

pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub code: i32,
}

pub const CASES: &[GoldenCase] = &[
    GoldenCase { name: "lattice_measure", args: &["lattice", "measure", "--p", "3", "--basis", "3,0;0,1"], code: 0 },
    GoldenCase { name: "lattice_dual", args: &["lattice", "dual", "--p", "3", "--basis", "1,0;0,1"], code: 0 },
    GoldenCase { name: "lattice_selfdual", args: &["lattice", "selfdual", "--p", "7", "--basis", "7,1;2,3/7"], code: 0 },
    GoldenCase { name: "lattice_canon", args: &["lattice", "canon", "--p", "3", "--basis", "3,3;0,3"], code: 0 },
    GoldenCase { name: "lattice_intersect", args: &["lattice", "intersect", "--p", "3", "--a", "3,0;0,1", "--b", "1,0;0,3"], code: 0 },
    GoldenCase { name: "lattice_sum", args: &["lattice", "sum", "--p", "3", "--a", "3,0;0,1", "--b", "1,0;0,3"], code: 0 },
    GoldenCase { name: "channel_gain", args: &["channel", "gain", "--p", "3", "--K", "3,0;0,1"], code: 0 },
    GoldenCase { name: "channel_gain_base2", args: &["--base", "2", "channel", "gain", "--p", "3", "--K", "1/9,0;0,1"], code: 0 },
    GoldenCase { name: "channel_validate", args: &["channel", "validate", "--p", "3", "--K", "2,0;0,2", "--L", "1,0;0,1/3"], code: 0 },
    GoldenCase { name: "channel_validate_invalid", args: &["channel", "validate", "--p", "3", "--K", "2,0;0,1", "--L", "1,0;0,1/3"], code: 0 },
    GoldenCase { name: "channel_threshold", args: &["channel", "threshold", "--p", "3", "--K", "3,0;0,1", "--L", "1,0;0,1"], code: 0 },
    GoldenCase { name: "channel_apply", args: &["channel", "apply", "--p", "3", "--K", "3,0;0,1", "--L", "1,0;0,1", "--input", "3,0;0,3", "--alpha", "1/3,-2"], code: 0 },
    GoldenCase { name: "adelic", args: &["adelic", "--K", "12,0;0,1/5"], code: 0 },
    GoldenCase { name: "adelic_singular", args: &["adelic", "--K", "1,1;1,1"], code: 1 },
    GoldenCase { name: "bad_matrix", args: &["lattice", "measure", "--p", "3", "--basis", "1,0;0"], code: 1 },
    GoldenCase { name: "oracle_3_2", args: &["oracle", "--p", "3", "--N", "2"], code: 0 },
    GoldenCase { name: "check", args: &["--seed", "7", "check", "--trials", "25"], code: 0 },
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn invoke(case: &GoldenCase) -> Outcome {
    run(std::iter::once("padic-channels").chain(case.args.iter().copied()))
}

/// Golden text: stdout on success, stderr otherwise.
pub fn rendered(out: &Outcome) -> &str {
    if out.code == 0 {
        &out.stdout
    } else {
        &out.stderr
    }
}

pub fn golden_path(case: &GoldenCase) -> PathBuf {
    let ext = if case.code == 0 { "json" } else { "err" };
    golden_dir().join(format!("{}.{ext}", case.name))
}

/// Compares one case against its golden file, rewriting the file instead
/// when `UPDATE_GOLDEN` is set. Returns a description of any mismatch.
pub fn check_case(case: &GoldenCase) -> Result<(), String> {
    let first = invoke(case);
    let second = invoke(case);
    if first != second {
        return Err(format!("{}: two runs differ", case.name));
    }
    if first.code != case.code {
        return Err(format!(
            "{}: exit {} (expected {}): {}",
            case.name, first.code, case.code, first.stderr
        ));
    }
    let path = golden_path(case);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, rendered(&first)).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path)
        .map_err(|e| format!("{}: cannot read {}: {e}", case.name, path.display()))?;
    if expected != rendered(&first) {
        return Err(format!(
            "{}: output differs from {}\n  got:      {}\n  expected: {}",
            case.name,
            path.display(),
            rendered(&first).trim_end(),
            expected.trim_end()
        ));
    }
    Ok(())
}
