#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

/// One golden-file invocation, run from the fixture directory.
pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

const fn case(name: &'static str, exit: i32, args: &'static [&'static str]) -> Case {
    Case { name, args, exit }
}

pub const CASES: &[Case] = &[
    case("spectrum_diag41", 0, &["spectrum", "--in", "diag41.json"]),
    case(
        "spectrum_coupled",
        0,
        &["spectrum", "--in", "coupled.json", "--json-indent", "2"],
    ),
    case(
        "williamson_coupled",
        0,
        &["williamson", "--in", "coupled.json"],
    ),
    case("capacity_ball_r3", 0, &["capacity", "--in", "ball_r3.json"]),
    case(
        "capacity_support",
        0,
        &["capacity", "--in", "diag41.json", "--direction", "1,-1"],
    ),
    case("dual_ball_r2", 0, &["dual", "--in", "ball_half_r2.json"]),
    case(
        "dual_map",
        0,
        &["dual", "--in", "form_a.json", "--map", "map.json"],
    ),
    case("lagdual_coordinate", 0, &["lagdual", "--in", "form_a.json"]),
    case(
        "lagdual_diagonal",
        0,
        &[
            "lagdual",
            "--in",
            "quarter.json",
            "--plane-l",
            "diagonal_l.json",
            "--plane-lp",
            "antidiagonal_l.json",
        ],
    ),
    case(
        "project_x",
        0,
        &["project", "--in", "coupled.json", "--onto", "x"],
    ),
    case(
        "project_p",
        0,
        &["project", "--in", "coupled.json", "--onto", "p"],
    ),
    case(
        "project_first",
        0,
        &[
            "project",
            "--in",
            "coupled.json",
            "--onto",
            "first",
            "--plane-l",
            "plane_x2.json",
        ],
    ),
    case(
        "project_second",
        0,
        &[
            "project",
            "--in",
            "coupled.json",
            "--onto",
            "second",
            "--plane-l",
            "plane_x2.json",
            "--plane-lp",
            "plane_p2.json",
        ],
    ),
    case("john_identity", 0, &["john", "--in", "identity_half.json"]),
    case("john_quarter", 0, &["john", "--in", "quarter.json"]),
    case(
        "thm1_omega",
        0,
        &[
            "thm1",
            "--omega",
            "omega_inside.json",
            "--trials",
            "100",
            "--seed",
            "7",
        ],
    ),
    case("thm1_balls", 0, &["thm1", "--trials", "40", "--seed", "3"]),
    case(
        "thm1_hypothesis",
        1,
        &[
            "thm1",
            "--omega",
            "diag41.json",
            "--trials",
            "5",
            "--seed",
            "7",
        ],
    ),
    case(
        "reconstruct_quarter",
        0,
        &["reconstruct", "--in", "quarter.json"],
    ),
    case(
        "reconstruct_general",
        0,
        &[
            "reconstruct",
            "--in",
            "form_b.json",
            "--plane-l",
            "plane_x2.json",
        ],
    ),
    case(
        "pairtest_exact",
        0,
        &["pairtest", "--x", "quarter.json", "--y", "four.json"],
    ),
    case(
        "pairtest_not_dual",
        2,
        &["pairtest", "--x", "quarter.json", "--y", "five.json"],
    ),
    case(
        "pairtest_diagonal",
        0,
        &[
            "pairtest",
            "--x",
            "quarter.json",
            "--y",
            "sixteen.json",
            "--plane-l",
            "diagonal_l.json",
            "--plane-lp",
            "antidiagonal_l.json",
        ],
    ),
    case(
        "pairtest_general",
        2,
        &[
            "pairtest",
            "--x",
            "form_a.json",
            "--y",
            "identity_half.json",
            "--plane-l",
            "plane_x2.json",
        ],
    ),
    case(
        "product_capacity_dual",
        0,
        &[
            "product-capacity",
            "--a",
            "form_a.json",
            "--b",
            "form_a_inv.json",
        ],
    ),
    case("certify_low", 2, &["certify", "--in", "sigma_low.json"]),
    case("certify_half", 0, &["certify", "--in", "sigma_half.json"]),
    case(
        "hardy_identity",
        0,
        &["hardy", "--a", "identity_1.json", "--b", "identity_1.json"],
    ),
    case(
        "hardy_inadmissible",
        2,
        &["hardy", "--a", "form_a.json", "--b", "form_b.json"],
    ),
    case(
        "hardy_subgaussian",
        0,
        &["hardy", "--m", "subgaussian.json"],
    ),
    case(
        "jointdiag",
        0,
        &["jointdiag", "--a", "form_a.json", "--b", "form_b.json"],
    ),
    case(
        "wigner_psix_state",
        0,
        &["wigner", "--a", "psix_a.json", "--z", "0.3,-0.2,0.1,0.4"],
    ),
    case(
        "wigner_psix_sigma",
        0,
        &[
            "wigner",
            "--sigma",
            "psix_sigma.json",
            "--z",
            "0.3,-0.2,0.1,0.4",
        ],
    ),
    case(
        "wigner_chirped",
        0,
        &[
            "wigner",
            "--a",
            "form_a.json",
            "--b",
            "shear_b.json",
            "--z",
            "0.1,0.2,-0.3,0.4",
        ],
    ),
    case("roots_coupled", 0, &["roots", "--in", "coupled.json"]),
    case(
        "roots_indefinite",
        0,
        &["roots", "--in", "sym_indefinite.json"],
    ),
    case(
        "symcheck_shear",
        0,
        &["symcheck", "--in", "shear.json", "--z", "1,0", "--w", "0,1"],
    ),
    case(
        "symcheck_scaling",
        2,
        &["symcheck", "--in", "not_symplectic.json"],
    ),
    case(
        "plane_basis",
        0,
        &[
            "plane",
            "--basis",
            "plane_x2.json",
            "--other",
            "plane_p2.json",
        ],
    ),
    case(
        "plane_ab",
        0,
        &[
            "plane",
            "--a",
            "ab_a.json",
            "--b",
            "ab_b.json",
            "--other",
            "diagonal_l.json",
        ],
    ),
    case(
        "oracle_polar_inside",
        0,
        &[
            "oracle",
            "polar",
            "--in",
            "ellipse_x.json",
            "--candidate",
            "1.5,0.5",
            "--seed",
            "5",
        ],
    ),
    case(
        "oracle_polar_outside",
        2,
        &[
            "oracle",
            "polar",
            "--in",
            "ellipse_x.json",
            "--candidate",
            "1.9,0.5",
            "--seed",
            "5",
        ],
    ),
    case(
        "oracle_shadow",
        0,
        &[
            "oracle",
            "shadow",
            "--omega",
            "coupled.json",
            "--onto",
            "first",
            "--plane-l",
            "plane_x2.json",
            "--directions",
            "4",
            "--seed",
            "11",
        ],
    ),
    case(
        "oracle_quadrature",
        0,
        &[
            "oracle",
            "quadrature",
            "--a",
            "quarter.json",
            "--z",
            "0.5,-0.25",
        ],
    ),
    case(
        "oracle_spd",
        0,
        &["oracle", "spd", "--n", "3", "--cap", "5", "--seed", "9"],
    ),
    case(
        "oracle_symplectic",
        0,
        &["oracle", "symplectic", "--n", "2", "--seed", "9"],
    ),
    case("error_not_spd", 1, &["spectrum", "--in", "bad_spd.json"]),
    case(
        "error_aggregated",
        1,
        &["pairtest", "--x", "broken.json", "--y", "missing.json"],
    ),
    case("error_unknown_subcommand", 1, &["frobnicate"]),
    case(
        "error_fixed_tolerance",
        1,
        &["spectrum", "--in", "diag41.json", "--tol", "verdict=1e-3"],
    ),
    case(
        "tol_override",
        0,
        &["spectrum", "--in", "diag41.json", "--tol", "spd=1e-6"],
    ),
];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixtures() -> PathBuf {
    crate_dir().join("tests").join("fixtures")
}

pub fn golden(name: &str) -> PathBuf {
    crate_dir()
        .join("tests")
        .join("golden")
        .join(format!("{name}.json"))
}

/// Runs the binary from the fixture directory with a clean seed
/// environment.
pub fn sympolar(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sympolar"));
    cmd.args(args)
        .current_dir(fixtures())
        .env_remove("SYMPOLAR_SEED");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

/// Compares one case against its golden file; returns a description of the
/// mismatch, if any.
pub fn check_case(case: &Case, envs: &[(&str, &str)]) -> Result<(), String> {
    let out = sympolar(case.args, envs);
    let code = out.status.code().unwrap_or(-1);
    if code != case.exit {
        return Err(format!(
            "{}: exit {code}, expected {}",
            case.name, case.exit
        ));
    }
    let path = golden(case.name);
    if std::env::var_os("SYMPOLAR_BLESS").is_some() {
        std::fs::write(&path, &out.stdout).expect("golden file writable");
        return Ok(());
    }
    let expected =
        std::fs::read(&path).map_err(|e| format!("{}: cannot read golden file: {e}", case.name))?;
    if expected != out.stdout {
        return Err(format!(
            "{}: output differs from {}",
            case.name,
            path.display()
        ));
    }
    Ok(())
}
