//! Command-line front-end: JSON documents in, one deterministic JSON report
//! out.
//!
//! Exit codes: `0` computed (and, for verdict commands, positive), `2`
//! computed with a negative verdict, `1` bad command line or input, `3`
//! numerical failure.

pub mod args;
pub mod commands;
pub mod context;
pub mod document;
pub mod json;

use std::io::Read;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{Map, Value};

use crate::args::Cli;
use crate::context::{Context, Failure, Tolerances};

/// Library operation → the one subcommand that exposes it.
pub const OPERATIONS: &[(&str, &str)] = &[
    ("sym_eig", "roots"),
    ("spd_roots", "roots"),
    ("psd_margin", "roots"),
    ("schur_complement", "project"),
    ("standard_j", "symcheck"),
    ("symp_product", "symcheck"),
    ("is_symplectic", "symcheck"),
    ("symplectic_eigenvalues", "spectrum"),
    ("williamson", "williamson"),
    ("random_symplectic", "oracle symplectic"),
    ("plane_from_basis", "plane"),
    ("plane_from_ab", "plane"),
    ("is_transverse", "plane"),
    ("frame_symplectic", "plane"),
    ("polar_dual", "dual"),
    ("linear_image", "dual"),
    ("mahler_volume", "dual"),
    ("orthogonal_projection", "project"),
    ("lagrangian_projection", "project"),
    ("capacity", "capacity"),
    ("support_function", "capacity"),
    ("john_of_dual_product", "john"),
    ("lagrangian_polar_dual", "lagdual"),
    ("dual_pair_verdict", "pairtest"),
    ("thm1_check", "thm1"),
    ("reconstruct_ball", "reconstruct"),
    ("product_capacity", "product-capacity"),
    ("certify", "certify"),
    ("uncertainty_ellipsoid", "certify"),
    ("gaussian_wigner_eval", "wigner"),
    ("gaussian_state_wigner_form", "wigner"),
    ("hardy_verdict", "hardy"),
    ("joint_diagonalize", "jointdiag"),
    ("wigner_subgaussian_check", "hardy"),
    ("mc_polar_membership", "oracle polar"),
    ("mc_projection_support", "oracle shadow"),
    ("wigner_quadrature", "oracle quadrature"),
    ("random_spd", "oracle spd"),
];

/// Everything a process invocation produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Response {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command line (`argv[0]` is the program name).
pub fn run(argv: Vec<String>, stdin: &mut dyn Read) -> Response {
    let echo_args: Vec<Value> = argv
        .iter()
        .skip(1)
        .map(|a| Value::String(a.clone()))
        .collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Response {
                code: 0,
                stdout: e.to_string(),
                stderr: String::new(),
            };
        }
        Err(e) => {
            let text = e.to_string();
            let message = text
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ")
                .to_string();
            let report = json::obj([
                (
                    "command",
                    json::obj([("args", Value::Array(echo_args)), ("name", Value::Null)]),
                ),
                ("error", Failure::Usage(message).to_json()),
                ("exit_code", 1.into()),
            ]);
            return Response {
                code: 1,
                stdout: json::render(&report, None) + "\n",
                stderr: text,
            };
        }
    };

    let mut report = Map::new();
    report.insert(
        "command".into(),
        json::obj([
            ("args", Value::Array(echo_args)),
            ("name", cli.command.name().into()),
        ]),
    );
    let tol = Tolerances::with_overrides(&cli.tol);
    report.insert(
        "tolerances".into(),
        tol.as_ref().copied().unwrap_or_default().block(),
    );
    let mut ctx = Context::new(tol.as_ref().copied().unwrap_or_default(), stdin);
    let outcome = tol.and_then(|_| commands::execute(&cli.command, &mut ctx));
    report.insert("inputs_digest".into(), ctx.digest().into());

    let (code, stderr) = match outcome {
        Ok(outcome) => {
            report.insert("result".into(), outcome.result);
            if let Some(seed) = outcome.seed {
                report.insert("seed".into(), seed.into());
            }
            (
                if outcome.verdict == Some(false) { 2 } else { 0 },
                String::new(),
            )
        }
        Err(failure) => {
            report.insert("error".into(), failure.to_json());
            (failure.exit_code(), failure.message() + "\n")
        }
    };
    report.insert("exit_code".into(), code.into());
    Response {
        code,
        stdout: json::render(&Value::Object(report), cli.json_indent) + "\n",
        stderr,
    }
}
