//! Reading inputs and mapping failures to exit codes.

use std::fmt;
use std::io::Read;
use std::path::Path;

use num_bigint::BigInt;
use serde_json::Value;
use zclosure::closure::{matrix_ring, ClosureError};
use zclosure::exact::{rational_serde, QMatrix, Rational};
use zclosure::mgroup::ScalarSpec;
use zclosure::multipoly::{parse_poly, Ideal, MonomialOrder, PolyError};
use zclosure::toric::ToricError;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input.
    Input(String),
    /// Well-formed input the mathematics rejects.
    Math(String),
    /// The oracle found a point of the orbit off the reported ideal.
    Verify(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Math(_) => 2,
            CliError::Verify(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Math(m) => write!(f, "rejected: {m}"),
            CliError::Verify(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<ClosureError> for CliError {
    fn from(e: ClosureError) -> Self {
        CliError::Math(e.to_string())
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Math(e.to_string())
    }
}

impl From<ToricError> for CliError {
    fn from(e: ToricError) -> Self {
        match e {
            ToricError::Empty | ToricError::DimensionMismatch { .. } => CliError::Input(e.to_string()),
            _ => CliError::Math(e.to_string()),
        }
    }
}

fn input_err(e: impl fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// `-` reads stdin, an existing path reads the file, and text starting with
/// `{` or `[` is taken as inline JSON.
pub fn read_source(arg: &str) -> Result<String, CliError> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(input_err)?;
        return Ok(s);
    }
    if Path::new(arg).exists() {
        return std::fs::read_to_string(arg).map_err(|e| CliError::Input(format!("{arg}: {e}")));
    }
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    Err(CliError::Input(format!("{arg}: no such file")))
}

pub fn read_json(arg: &str) -> Result<Value, CliError> {
    let text = read_source(arg)?;
    if text.trim().is_empty() {
        return Err(CliError::Input("empty input".into()));
    }
    serde_json::from_str(&text).map_err(input_err)
}

/// Matrix JSON `{"n", "entries"}` with an optional affine vector `"b"`.
pub fn matrix_input(v: &Value) -> Result<(QMatrix, Option<Vec<Rational>>), CliError> {
    let m: QMatrix = serde_json::from_value(v.clone()).map_err(input_err)?;
    let b = match v.get("b") {
        None | Some(Value::Null) => None,
        Some(Value::Array(xs)) => {
            if xs.len() != m.rows() {
                return Err(CliError::Input(format!("b has {} entries, expected {}", xs.len(), m.rows())));
            }
            Some(xs.iter().map(rational_serde::from_value).collect::<Result<Vec<_>, _>>().map_err(input_err)?)
        }
        Some(_) => return Err(CliError::Input("b must be an array".into())),
    };
    Ok((m, b))
}

/// `[[M, b], [0, 1]]`.
pub fn augment(m: &QMatrix, b: &[Rational]) -> QMatrix {
    let n = m.rows();
    let mut out = QMatrix::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = m[(i, j)].clone();
        }
        out[(i, n)] = b[i].clone();
    }
    out[(n, n)] = Rational::from_integer(1.into());
    out
}

pub fn points_input(v: &Value) -> Result<Vec<Vec<BigInt>>, CliError> {
    let rows = v.as_array().ok_or_else(|| CliError::Input("points must be an array of integer arrays".into()))?;
    if rows.is_empty() {
        return Err(CliError::Input("no points given".into()));
    }
    rows.iter()
        .map(|r| {
            let r = r.as_array().ok_or_else(|| CliError::Input("each point must be an array".into()))?;
            r.iter()
                .map(|x| match x {
                    Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().unwrap())),
                    Value::String(s) => s.trim().parse::<BigInt>().map_err(input_err),
                    _ => Err(CliError::Input(format!("not an integer: {x}"))),
                })
                .collect()
        })
        .collect()
}

pub fn symbolic_input(v: &Value) -> Result<Vec<ScalarSpec>, CliError> {
    let specs: Vec<ScalarSpec> = serde_json::from_value(v.clone()).map_err(input_err)?;
    if specs.is_empty() {
        return Err(CliError::Input("no eigenvalues given".into()));
    }
    Ok(specs)
}

/// A report previously written by `closure`: its matrix, ideal, isolated
/// points and mode.
pub struct SavedReport {
    pub matrix: QMatrix,
    pub ideal: Ideal,
    pub isolated: Vec<QMatrix>,
    pub mode: String,
}

pub fn saved_report(v: &Value) -> Result<SavedReport, CliError> {
    let matrix = match v.get("matrix") {
        Some(m) if !m.is_null() => serde_json::from_value::<QMatrix>(m.clone()).map_err(input_err)?,
        _ => return Err(CliError::Input("report carries no rational matrix".into())),
    };
    let ring = matrix_ring(matrix.rows(), MonomialOrder::GrevLex);
    let gens = v
        .get("ideal")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Input("report has no ideal".into()))?
        .iter()
        .map(|g| {
            let s = g.as_str().ok_or_else(|| CliError::Input(format!("not a polynomial string: {g}")))?;
            parse_poly(s, &ring).map_err(input_err)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let isolated = match v.get("isolated_points") {
        Some(p) if !p.is_null() => serde_json::from_value(p.clone()).map_err(input_err)?,
        _ => Vec::new(),
    };
    let mode = v.get("mode").and_then(Value::as_str).unwrap_or("semigroup").to_string();
    Ok(SavedReport { matrix, ideal: Ideal::new(&ring, gens), isolated, mode })
}
