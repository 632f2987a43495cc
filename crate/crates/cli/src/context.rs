//! Input loading, tolerance overrides and failure classification.

use std::io::Read;

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use sympolar::{
    duality, lagrangian, matops, oracle, quantum, symplectic, Error, LagrangianPlane, Mat,
    SpdMatrix, SymMatrix, TransversePair,
};

use crate::args::PairArgs;
use crate::document::{validate_document, Document, Kind, Payload, Thresholds};
use crate::json::{num, obj};

/// Tolerances that `--tol` may change; every other threshold is fixed by
/// the library and only echoed in the report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub thresholds: Thresholds,
}

const FIXED: [(&str, f64); 13] = [
    ("admissible", quantum::ADMISSIBLE_TOL),
    ("exact", duality::EXACT_TOL),
    ("hypothesis", duality::HYPOTHESIS_TOL),
    ("isotropy", lagrangian::ISOTROPY_TOL),
    ("plane_angle", lagrangian::PLANE_ANGLE_TOL),
    ("polar_slack", oracle::POLAR_SLACK),
    ("psd", matops::PSD_TOL),
    ("rank", lagrangian::RANK_TOL),
    ("route_band", quantum::ROUTE_BAND),
    ("symplectic", symplectic::SYMPLECTIC_TOL),
    ("transverse", lagrangian::TRANSVERSE_TOL),
    ("verdict", duality::VERDICT_TOL),
    ("williamson", symplectic::WILLIAMSON_TOL),
];

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            thresholds: Thresholds {
                symmetry: matops::SYMMETRY_TOL,
                spd: matops::SPD_TOL,
            },
        }
    }
}

impl Tolerances {
    /// Applies `key=value` overrides in order.
    pub fn with_overrides(overrides: &[String]) -> Result<Self, Failure> {
        let mut tol = Self::default();
        for item in overrides {
            let Some((key, value)) = item.split_once('=') else {
                return Err(Failure::Usage(format!(
                    "--tol expects KEY=VALUE, got '{item}'"
                )));
            };
            let value: f64 = match value.trim().parse() {
                Ok(v) if v >= 0.0 && f64::is_finite(v) => v,
                _ => {
                    return Err(Failure::Usage(format!(
                        "tolerance '{key}' needs a finite nonnegative value"
                    )))
                }
            };
            match key.trim() {
                "symmetry" => tol.thresholds.symmetry = value,
                "spd" => tol.thresholds.spd = value,
                k if FIXED.iter().any(|(f, _)| *f == k) => {
                    return Err(Failure::Usage(format!(
                        "tolerance '{k}' is fixed by the library"
                    )))
                }
                k => return Err(Failure::Usage(format!("unknown tolerance '{k}'"))),
            }
        }
        Ok(tol)
    }

    pub fn block(&self) -> Value {
        let mut map: Map<String, Value> = FIXED
            .iter()
            .map(|(k, v)| (k.to_string(), num(*v)))
            .collect();
        map.insert("symmetry".into(), num(self.thresholds.symmetry));
        map.insert("spd".into(), num(self.thresholds.spd));
        Value::Object(map)
    }
}

/// A problem with one named input.
#[derive(Clone, Debug, PartialEq)]
pub struct InputProblem {
    pub input: String,
    pub pointer: String,
    pub message: String,
}

#[derive(Debug)]
pub enum Failure {
    /// Malformed command line.
    Usage(String),
    /// Unreadable or invalid inputs, all of them.
    Input(Vec<InputProblem>),
    /// Raised by the library during the computation.
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl Failure {
    /// `3` for numerical breakdowns, `1` for everything the caller can fix.
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Library(
                Error::Singular | Error::NumericalFailure(_) | Error::InternalInconsistency(_),
            ) => 3,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Failure::Usage(message) => obj([
                ("kind", "usage".into()),
                ("message", message.as_str().into()),
            ]),
            Failure::Input(problems) => {
                let list = problems
                    .iter()
                    .map(|p| {
                        obj([
                            ("input", p.input.as_str().into()),
                            ("message", p.message.as_str().into()),
                            ("pointer", p.pointer.as_str().into()),
                        ])
                    })
                    .collect();
                obj([
                    ("kind", "input".into()),
                    (
                        "message",
                        format!("{} problem(s) in the inputs", problems.len()).into(),
                    ),
                    ("problems", Value::Array(list)),
                ])
            }
            Failure::Library(e) => obj([
                ("kind", library_kind(e).into()),
                ("message", e.to_string().into()),
            ]),
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Input(problems) => problems
                .iter()
                .map(|p| {
                    format!(
                        "{} {}: {}",
                        p.input,
                        if p.pointer.is_empty() {
                            "/"
                        } else {
                            &p.pointer
                        },
                        p.message
                    )
                })
                .collect::<Vec<_>>()
                .join("\n"),
            Failure::Library(e) => e.to_string(),
        }
    }
}

fn library_kind(e: &Error) -> &'static str {
    match e {
        Error::BadShape(_) => "bad_shape",
        Error::NonFinite => "non_finite",
        Error::NotSymmetric { .. } => "not_symmetric",
        Error::NotPositiveDefinite { .. } => "not_positive_definite",
        Error::Singular => "singular",
        Error::NotSymplectic { .. } => "not_symplectic",
        Error::NumericalFailure(_) => "numerical_failure",
        Error::NotIsotropic { .. } => "not_isotropic",
        Error::RankDeficient { .. } => "rank_deficient",
        Error::ConstraintViolated(_) => "constraint_violated",
        Error::NotTransverse { .. } => "not_transverse",
        Error::PlaneMismatch => "plane_mismatch",
        Error::HypothesisNotMet { .. } => "hypothesis_not_met",
        Error::InternalInconsistency(_) => "internal_inconsistency",
        Error::GridTooSmall { .. } => "grid_too_small",
        Error::EmptyCloud => "empty_cloud",
        Error::ZeroDirection => "zero_direction",
    }
}

/// Whether a form lives on a plane (`n×n`) or on phase space (`2n×2n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Half,
    Full,
}

/// Transverse pair together with the bases the user supplied, which fix
/// the coordinates forms are read and reported in.
pub struct PairSpec {
    pub pair: TransversePair,
    pub first_basis: Mat,
    pub second_basis: Mat,
}

type Basis = (Mat, LagrangianPlane);

/// Per-invocation state: validated inputs, their raw bytes, and the
/// problems collected so far.
pub struct Context<'a> {
    pub tol: Tolerances,
    stdin: Option<&'a mut dyn Read>,
    inputs: Vec<(String, Vec<u8>)>,
    problems: Vec<InputProblem>,
}

impl<'a> Context<'a> {
    pub fn new(tol: Tolerances, stdin: &'a mut dyn Read) -> Self {
        Self {
            tol,
            stdin: Some(stdin),
            inputs: Vec::new(),
            problems: Vec::new(),
        }
    }

    /// SHA-256 over every input read, in order, each prefixed by its flag.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for (flag, bytes) in &self.inputs {
            h.update(flag.as_bytes());
            h.update([0u8]);
            h.update((bytes.len() as u64).to_le_bytes());
            h.update(bytes);
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn problem(&mut self, input: &str, message: impl Into<String>) {
        self.problems.push(InputProblem {
            input: input.into(),
            pointer: String::new(),
            message: message.into(),
        });
    }

    /// Fails with every problem recorded so far.
    pub fn finish(&mut self) -> Result<(), Failure> {
        if self.problems.is_empty() {
            Ok(())
        } else {
            Err(Failure::Input(std::mem::take(&mut self.problems)))
        }
    }

    fn read(&mut self, flag: &str, path: &str) -> Option<Vec<u8>> {
        let bytes = if path == "-" {
            let Some(stdin) = self.stdin.take() else {
                self.problem(flag, "standard input can only be read once");
                return None;
            };
            let mut buf = Vec::new();
            stdin.read_to_end(&mut buf).map(|_| buf)
        } else {
            std::fs::read(path)
        };
        match bytes {
            Ok(b) => {
                self.inputs.push((flag.to_string(), b.clone()));
                Some(b)
            }
            Err(e) => {
                self.problem(flag, format!("cannot read '{path}': {e}"));
                None
            }
        }
    }

    /// Reads, parses and validates one document.
    pub fn document(&mut self, flag: &str, path: &str) -> Option<Document> {
        let bytes = self.read(flag, path)?;
        let value: Value = match serde_json::from_slice(&bytes) {
            Ok(v) => v,
            Err(e) => {
                self.problem(flag, format!("invalid JSON: {e}"));
                return None;
            }
        };
        match validate_document(&value, self.tol.thresholds) {
            Ok(doc) => Some(doc),
            Err(problems) => {
                self.problems
                    .extend(problems.into_iter().map(|p| InputProblem {
                        input: flag.to_string(),
                        pointer: p.pointer,
                        message: p.message,
                    }));
                None
            }
        }
    }

    fn shaped(&mut self, flag: &str, path: &str, shape: Shape) -> Option<Document> {
        let doc = self.document(flag, path)?;
        let half = doc.kind != Kind::PlaneBasis && doc.half;
        match (shape, half) {
            (Shape::Half, false) => self.problems.push(InputProblem {
                input: flag.into(),
                pointer: "/half".into(),
                message: "expected an n x n document (\"half\": true)".into(),
            }),
            (Shape::Full, true) => self.problems.push(InputProblem {
                input: flag.into(),
                pointer: "/half".into(),
                message: "expected a 2n x 2n document".into(),
            }),
            _ => return Some(doc),
        }
        None
    }

    fn wrong_kind(&mut self, flag: &str, wanted: &str, got: Kind) {
        self.problems.push(InputProblem {
            input: flag.into(),
            pointer: "/kind".into(),
            message: format!("expected {wanted}, got {got}"),
        });
    }

    pub fn spd(&mut self, flag: &str, path: &str, shape: Shape) -> Option<SpdMatrix> {
        let doc = self.shaped(flag, path, shape)?;
        match doc.payload {
            Payload::Spd(m) => Some(m),
            _ => {
                self.wrong_kind(flag, "kind spd", doc.kind);
                None
            }
        }
    }

    /// Accepts `sym` and `spd` documents.
    pub fn sym(&mut self, flag: &str, path: &str, shape: Shape) -> Option<SymMatrix> {
        let doc = self.shaped(flag, path, shape)?;
        match doc.payload {
            Payload::Sym(m) => Some(m),
            Payload::Spd(m) => Some(m.sym().clone()),
            _ => {
                self.wrong_kind(flag, "kind sym or spd", doc.kind);
                None
            }
        }
    }

    /// Any square document of the requested shape, as a plain matrix.
    pub fn linear(&mut self, flag: &str, path: &str, shape: Shape) -> Option<Mat> {
        let doc = self.shaped(flag, path, shape)?;
        match doc.payload {
            Payload::Linear(m) => Some(m),
            Payload::Sym(m) => Some(m.into_matrix()),
            Payload::Spd(m) => Some(m.matrix().clone()),
            Payload::Symplectic(s) => Some(s.matrix().clone()),
            Payload::Basis { .. } => {
                self.wrong_kind(flag, "a square matrix", doc.kind);
                None
            }
        }
    }

    pub fn basis(&mut self, flag: &str, path: &str) -> Option<Basis> {
        let doc = self.document(flag, path)?;
        match doc.payload {
            Payload::Basis { raw, plane } => Some((raw, plane)),
            _ => {
                self.wrong_kind(flag, "kind plane-basis", doc.kind);
                None
            }
        }
    }

    /// Loads the optional plane bases; call [`pair_spec`] once `n` is known.
    pub fn pair_bases(&mut self, args: &PairArgs) -> (Option<Basis>, Option<Basis>) {
        let first = args
            .plane_l
            .as_deref()
            .and_then(|p| self.basis("--plane-l", p));
        let second = args
            .plane_lp
            .as_deref()
            .and_then(|p| self.basis("--plane-lp", p));
        (first, second)
    }

    pub fn vector(&mut self, flag: &str, v: &[f64], len: usize) {
        if v.len() != len {
            self.problem(
                flag,
                format!("expected {len} comma-separated numbers, got {}", v.len()),
            );
        } else if v.iter().any(|x| !x.is_finite()) {
            self.problem(flag, "entries must be finite");
        }
    }
}

/// Completes a pair from optional bases, defaulting to `ℓ_X` and `ℓ_P`.
pub fn pair_spec(bases: (Option<Basis>, Option<Basis>), n: usize) -> Result<PairSpec, Failure> {
    let defaults = bases.0.is_none() && bases.1.is_none();
    let coordinate = |plane: LagrangianPlane| (plane.basis().clone(), plane);
    let (first_basis, first) = bases
        .0
        .unwrap_or_else(|| coordinate(LagrangianPlane::coordinate_x(n)));
    let (second_basis, second) = bases
        .1
        .unwrap_or_else(|| coordinate(LagrangianPlane::coordinate_p(n)));
    if first.dof() != n || second.dof() != n {
        return Err(Error::BadShape(format!("planes must have n = {n}")).into());
    }
    let pair = if defaults {
        TransversePair::coordinate(n)
    } else {
        TransversePair::new(first, second)?
    };
    Ok(PairSpec {
        pair,
        first_basis,
        second_basis,
    })
}
