//! Matrix documents: `{"n": 2, "kind": "spd", "matrix": [[...], ...]}`.
//!
//! `kind` is one of `sym`, `spd`, `symplectic`, `plane-basis` or `linear`.
//! Phase-space kinds are `2n×2n` (`2n×n` for `plane-basis`); `sym`, `spd`
//! and `linear` documents with `"half": true` are `n×n` instead.

use std::fmt;

use serde_json::{Map, Value};
use sympolar::{plane_from_basis, LagrangianPlane, Mat, SpdMatrix, SymMatrix, SymplecticMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Sym,
    Spd,
    Symplectic,
    PlaneBasis,
    Linear,
}

impl Kind {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "sym" => Some(Kind::Sym),
            "spd" => Some(Kind::Spd),
            "symplectic" => Some(Kind::Symplectic),
            "plane-basis" => Some(Kind::PlaneBasis),
            "linear" => Some(Kind::Linear),
            _ => None,
        }
    }

    fn allows_half(self) -> bool {
        matches!(self, Kind::Sym | Kind::Spd | Kind::Linear)
    }

    fn shape(self, n: usize, half: bool) -> (usize, usize) {
        match (self, half) {
            (Kind::PlaneBasis, _) => (2 * n, n),
            (_, true) => (n, n),
            (_, false) => (2 * n, 2 * n),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Sym => "sym",
            Kind::Spd => "spd",
            Kind::Symplectic => "symplectic",
            Kind::PlaneBasis => "plane-basis",
            Kind::Linear => "linear",
        })
    }
}

/// One validation failure, located by a JSON pointer into the document.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub pointer: String,
    pub message: String,
}

impl Problem {
    fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Payload {
    Sym(SymMatrix),
    Spd(SpdMatrix),
    Symplectic(SymplecticMatrix),
    Basis { raw: Mat, plane: LagrangianPlane },
    Linear(Mat),
}

#[derive(Clone, Debug)]
pub struct Document {
    pub n: usize,
    pub kind: Kind,
    pub half: bool,
    pub payload: Payload,
}

/// Acceptance thresholds for `sym` and `spd` documents.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    pub symmetry: f64,
    pub spd: f64,
}

const FIELDS: [&str; 4] = ["half", "kind", "matrix", "n"];

/// Checks a parsed document and normalizes its matrix. Every problem found
/// is reported; structural problems suppress the numerical checks that
/// depend on them.
pub fn validate_document(doc: &Value, thresholds: Thresholds) -> Result<Document, Vec<Problem>> {
    let Some(fields) = doc.as_object() else {
        return Err(vec![Problem::new("", "document must be a JSON object")]);
    };
    let mut problems = Vec::new();
    for key in fields.keys().filter(|k| !FIELDS.contains(&k.as_str())) {
        problems.push(Problem::new(format!("/{}", escape(key)), "unknown field"));
    }
    let n = read_n(fields, &mut problems);
    let kind = read_kind(fields, &mut problems);
    let half = read_half(fields, kind, &mut problems);
    let entries = read_matrix(fields, &mut problems);
    let (Some(n), Some(kind), Some(half), Some(entries)) = (n, kind, half, entries) else {
        return Err(problems);
    };

    let (rows, cols) = kind.shape(n, half);
    let found = (entries.len(), entries.first().map_or(0, Vec::len));
    if found != (rows, cols) {
        problems.push(Problem::new(
            "/matrix",
            format!(
                "kind {kind} with n={n} needs a {rows}x{cols} matrix, got {}x{}",
                found.0, found.1
            ),
        ));
    }
    if !problems.is_empty() {
        return Err(problems);
    }
    let m = Mat::from_rows(&entries).map_err(|e| vec![Problem::new("/matrix", e.to_string())])?;
    let payload = match kind {
        Kind::Sym => SymMatrix::with_tol(m, thresholds.symmetry).map(Payload::Sym),
        Kind::Spd => SymMatrix::with_tol(m, thresholds.symmetry)
            .and_then(|s| SpdMatrix::with_tol(s, thresholds.spd))
            .map(Payload::Spd),
        Kind::Symplectic => SymplecticMatrix::new(m).map(Payload::Symplectic),
        Kind::PlaneBasis => plane_from_basis(&m).map(|plane| Payload::Basis { raw: m, plane }),
        Kind::Linear => Ok(Payload::Linear(m)),
    }
    .map_err(|e| vec![Problem::new("/matrix", e.to_string())])?;
    Ok(Document {
        n,
        kind,
        half,
        payload,
    })
}

fn read_n(fields: &Map<String, Value>, problems: &mut Vec<Problem>) -> Option<usize> {
    match fields.get("n") {
        None => problems.push(Problem::new("/n", "missing field")),
        Some(v) => match v.as_u64() {
            Some(n) if n > 0 => return Some(n as usize),
            _ => problems.push(Problem::new("/n", "expected a positive integer")),
        },
    }
    None
}

fn read_kind(fields: &Map<String, Value>, problems: &mut Vec<Problem>) -> Option<Kind> {
    match fields.get("kind") {
        None => problems.push(Problem::new("/kind", "missing field")),
        Some(v) => match v.as_str().and_then(Kind::parse) {
            Some(kind) => return Some(kind),
            None => problems.push(Problem::new(
                "/kind",
                "expected one of sym, spd, symplectic, plane-basis, linear",
            )),
        },
    }
    None
}

fn read_half(
    fields: &Map<String, Value>,
    kind: Option<Kind>,
    problems: &mut Vec<Problem>,
) -> Option<bool> {
    let half = match fields.get("half") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => {
            problems.push(Problem::new("/half", "expected a boolean"));
            return None;
        }
    };
    match kind {
        Some(k) if half && !k.allows_half() => {
            problems.push(Problem::new(
                "/half",
                format!("kind {k} is always phase-space sized"),
            ));
            None
        }
        _ => Some(half),
    }
}

fn read_matrix(fields: &Map<String, Value>, problems: &mut Vec<Problem>) -> Option<Vec<Vec<f64>>> {
    let Some(v) = fields.get("matrix") else {
        problems.push(Problem::new("/matrix", "missing field"));
        return None;
    };
    let Some(rows) = v.as_array() else {
        problems.push(Problem::new("/matrix", "expected an array of rows"));
        return None;
    };
    if rows.is_empty() {
        problems.push(Problem::new("/matrix", "matrix has no rows"));
        return None;
    }
    let before = problems.len();
    let mut out = Vec::with_capacity(rows.len());
    let mut width = None;
    for (i, row) in rows.iter().enumerate() {
        let Some(row) = row.as_array() else {
            problems.push(Problem::new(
                format!("/matrix/{i}"),
                "expected an array of numbers",
            ));
            continue;
        };
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => problems.push(Problem::new(
                format!("/matrix/{i}"),
                format!("row has {} entries, expected {w}", row.len()),
            )),
            _ => {}
        }
        let mut values = Vec::with_capacity(row.len());
        for (j, entry) in row.iter().enumerate() {
            match entry.as_f64() {
                Some(x) => values.push(x),
                None => problems.push(Problem::new(
                    format!("/matrix/{i}/{j}"),
                    "expected a number",
                )),
            }
        }
        out.push(values);
    }
    (problems.len() == before).then_some(out)
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}
