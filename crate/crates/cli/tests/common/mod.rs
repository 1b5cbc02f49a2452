//! Running the binary against the checked-in data directory.
#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data")
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the binary with `args`, from inside the data directory so that
/// file paths echoed in reports are stable.
pub fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_corner-index"))
        .args(args)
        .current_dir(data_dir())
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// The report with its `timing` field removed, pretty-printed.
pub fn normalized(stdout: &str) -> String {
    let mut v: Value = serde_json::from_str(stdout).expect("report is JSON");
    v.as_object_mut().expect("object").remove("timing");
    serde_json::to_string_pretty(&v).unwrap() + "\n"
}

pub const GOLDEN_CASES: &[(&str, &[&str])] = &[
    ("homology_interval", &["homology", "trivial_interval.json"]),
    (
        "homology_mobius_z2",
        &["homology", "mobius.json", "--coeff", "Z/2"],
    ),
    (
        "homology_square_relative",
        &["homology", "square.json", "--pair", "0", "2"],
    ),
    (
        "homology_square_torsion",
        &["homology", "trivial_square.json", "--coeff", "Z + Z/4"],
    ),
    (
        "homology_half_twist",
        &["homology", "half_twist_square.json"],
    ),
    (
        "family_trivial_interval",
        &["family", "trivial_interval.json", "--check-embeddable"],
    ),
    (
        "family_trivial_square",
        &["family", "trivial_square.json", "--check-embeddable"],
    ),
    (
        "family_mobius",
        &["family", "mobius.json", "--check-embeddable"],
    ),
    (
        "family_half_twist_square",
        &["family", "half_twist_square.json", "--check-embeddable"],
    ),
    (
        "family_quarter_twist_square",
        &["family", "quarter_twist_square.json", "--check-embeddable"],
    ),
    (
        "obstruction_square_point",
        &["obstruction", "square.json", "point.json"],
    ),
    (
        "obstruction_square_circle",
        &["obstruction", "square.json", "circle.json"],
    ),
    (
        "obstruction_square_torus",
        &["obstruction", "square.json", "torus.json"],
    ),
    (
        "obstruction_square_corner_boundary",
        &[
            "obstruction",
            "square.json",
            "circle.json",
            "square_corner_boundary.json",
        ],
    ),
    (
        "obstruction_square_all_ones",
        &[
            "obstruction",
            "square.json",
            "circle.json",
            "square_all_ones.json",
        ],
    ),
    (
        "obstruction_interval_fails",
        &[
            "obstruction",
            "trivial_interval.json",
            "circle.json",
            "interval_fails.json",
        ],
    ),
    (
        "obstruction_mobius_circle",
        &["obstruction", "mobius.json", "circle.json"],
    ),
    ("validate_square", &["validate", "square.json"]),
];

/// Compares one golden case; `UPDATE_GOLDENS=1` rewrites the file instead.
pub fn check_golden(name: &str, args: &[&str]) -> Result<(), String> {
    let r = run(args);
    if r.code != 0 {
        return Err(format!("{name}: exit {} ({})", r.code, r.stderr.trim()));
    }
    let actual = normalized(&r.stdout);
    let path = data_dir().join("golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDENS").is_some() {
        std::fs::write(&path, &actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{name}: {e}"))?;
    if expected != actual {
        return Err(format!("{name}: report differs from {}", path.display()));
    }
    Ok(())
}

/// Exit-code contract: `(args, expected code, text expected in stdout or stderr)`.
pub const EXIT_CASES: &[(&[&str], i32, &str)] = &[
    (&["validate", "square.json"], 0, "\"valid\": true"),
    (&["validate", "mobius.json"], 0, "\"valid\": true"),
    (&["validate", "unsorted_corner.json"], 1, "unsorted-tuple"),
    (&["validate", "truncated.json"], 2, "not a valid document"),
    (&["validate", "missing.json"], 2, "cannot read"),
    (
        &["validate", "point.json"],
        2,
        "expected a poset or family document",
    ),
    (&["homology", "square.json", "--coeff", "Z/0"], 2, "Z/0"),
    (&["homology", "unsorted_corner.json"], 1, "unsorted-tuple"),
    (
        &["homology", "quarter_twist_square.json"],
        1,
        "not globally embeddable",
    ),
    (
        &["obstruction", "cube.json", "point.json"],
        3,
        "codimension 3",
    ),
    (
        &["obstruction", "square.json", "square.json"],
        2,
        "expected a ktheory document",
    ),
    (
        &[
            "obstruction",
            "square.json",
            "circle.json",
            "interval_fails.json",
        ],
        1,
        "malformed symbol datum",
    ),
    (&["gallery", "bogus"], 1, "quarter_twist_square"),
    (&["frobnicate"], 2, ""),
];

pub fn check_exit(args: &[&str], code: i32, needle: &str) -> Result<(), String> {
    let r = run(args);
    if r.code != code {
        return Err(format!(
            "{args:?}: exit {} instead of {code}: {}",
            r.code,
            r.stderr.trim()
        ));
    }
    if !r.stdout.contains(needle) && !r.stderr.contains(needle) {
        return Err(format!("{args:?}: output lacks {needle:?}"));
    }
    Ok(())
}
