//! JSON encodings of field elements, forms, matrices, pencils, lines and
//! form vectors.
//!
//! Field elements are strings (`"-3/2"`, `"4 mod 7"`); a bare JSON integer
//! is also accepted on input. Sizes and degrees are written as JSON
//! integers and may be given either way. Forms are
//! `{"degree": d, "coeffs": [...]}` with `coeffs[i]` the coefficient of
//! `y0^(d-i) y1^i`. A pencil is `{"n", "field", "N0", "N1"}` with matrices
//! as arrays of rows. Line and form lists are either a bare array or an
//! object with a `"lines"` / `"forms"` member.

use serde_json::{json, Value};

use crate::complexes::ProjSubspace;
use crate::field::{Field, FieldSpec};
use crate::forms::{BinaryForm, FormRing, PointP1};
use crate::linalg::{Matrix, SkewMatrix};
use crate::pencils::SkewPencil;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JsonError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("at {path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: &str, message: impl Into<String>) -> JsonError {
    JsonError::Invalid {
        path: if path.is_empty() { "$".into() } else { path.into() },
        message: message.into(),
    }
}

fn child(path: &str, key: impl std::fmt::Display) -> String {
    let base = if path.is_empty() { "$" } else { path };
    format!("{base}.{key}")
}

fn index(path: &str, i: usize) -> String {
    let base = if path.is_empty() { "$" } else { path };
    format!("{base}[{i}]")
}

pub fn parse_value(text: &str) -> Result<Value, JsonError> {
    serde_json::from_str(text).map_err(|e| JsonError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// The `"field"` member of an object, if present.
pub fn declared_field(v: &Value) -> Result<Option<FieldSpec>, JsonError> {
    match v.get("field") {
        None => Ok(None),
        Some(Value::String(s)) => s
            .parse()
            .map(Some)
            .map_err(|e| invalid("$.field", format!("{e}"))),
        Some(_) => Err(invalid("$.field", "expected a string such as \"Q\" or \"Fp:7\"")),
    }
}

pub fn elem_from_json<F: Field>(k: &F, v: &Value, path: &str) -> Result<F::Elem, JsonError> {
    match v {
        Value::String(s) => k.parse(s).map_err(|e| invalid(path, e.to_string())),
        Value::Number(n) if n.is_i64() || n.is_u64() => k.parse(&n.to_string()).map_err(|e| invalid(path, e.to_string())),
        _ => Err(invalid(path, "expected a field element string")),
    }
}

pub fn elem_to_json<F: Field>(k: &F, e: &F::Elem) -> Value {
    Value::String(k.format(e))
}

pub fn usize_from_json(v: &Value, path: &str) -> Result<usize, JsonError> {
    let bad = || invalid(path, "expected a nonnegative integer");
    match v {
        Value::Number(n) => n.as_u64().and_then(|x| usize::try_from(x).ok()).ok_or_else(bad),
        Value::String(s) => s.trim().parse::<usize>().map_err(|_| bad()),
        _ => Err(bad()),
    }
}

fn member<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value, JsonError> {
    match v {
        Value::Object(m) => m.get(key).ok_or_else(|| invalid(path, format!("missing member \"{key}\""))),
        _ => Err(invalid(path, "expected an object")),
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array().ok_or_else(|| invalid(path, "expected an array"))
}

pub fn form_from_json<F: Field>(k: &F, v: &Value, path: &str) -> Result<BinaryForm<F::Elem>, JsonError> {
    let degree = usize_from_json(member(v, "degree", path)?, &child(path, "degree"))?;
    let cpath = child(path, "coeffs");
    let coeffs = array(member(v, "coeffs", path)?, &cpath)?;
    if coeffs.len() != degree + 1 {
        return Err(invalid(
            &cpath,
            format!("degree {degree} needs {} coefficients, got {}", degree + 1, coeffs.len()),
        ));
    }
    let c = coeffs
        .iter()
        .enumerate()
        .map(|(i, x)| elem_from_json(k, x, &index(&cpath, i)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BinaryForm::new(c))
}

pub fn form_to_json<F: Field>(k: &F, f: &BinaryForm<F::Elem>) -> Value {
    json!({
        "degree": f.degree(),
        "coeffs": f.coeffs().iter().map(|c| elem_to_json(k, c)).collect::<Vec<_>>(),
    })
}

pub fn point_to_json<F: Field>(k: &F, p: &PointP1<F::Elem>) -> Value {
    json!([elem_to_json(k, p.b0()), elem_to_json(k, p.b1())])
}

fn rows_from_json<T>(
    v: &Value,
    path: &str,
    mut entry: impl FnMut(&Value, &str) -> Result<T, JsonError>,
) -> Result<Vec<Vec<T>>, JsonError> {
    let rows = array(v, path)?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let rpath = index(path, i);
        let cells = array(row, &rpath)?;
        if let Some(first) = out.first().map(|r: &Vec<T>| r.len()) {
            if cells.len() != first {
                return Err(invalid(&rpath, format!("row has {} entries, expected {first}", cells.len())));
            }
        }
        out.push(
            cells
                .iter()
                .enumerate()
                .map(|(j, c)| entry(c, &index(&rpath, j)))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(out)
}

pub fn matrix_from_json<F: Field>(k: &F, v: &Value, path: &str) -> Result<Matrix<F::Elem>, JsonError> {
    let rows = rows_from_json(v, path, |c, p| elem_from_json(k, c, p))?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(k, 0, 0));
    }
    Matrix::from_rows(rows).map_err(|e| invalid(path, e.to_string()))
}

pub fn matrix_to_json<F: Field>(k: &F, m: &Matrix<F::Elem>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| elem_to_json(k, x)).collect()))
            .collect(),
    )
}

pub fn skew_from_json<F: Field>(k: &F, v: &Value, path: &str) -> Result<SkewMatrix<F::Elem>, JsonError> {
    let m = matrix_from_json(k, v, path)?;
    SkewMatrix::new(k, m).map_err(|e| invalid(path, e.to_string()))
}

/// Input accepted by the Pfaffian command.
#[derive(Debug, Clone)]
pub enum PfaffianInput<E> {
    Scalar(SkewMatrix<E>),
    Forms(SkewMatrix<BinaryForm<E>>),
    Pencil(SkewPencil<E>),
}

/// A matrix of field elements, a matrix of forms (all nonzero entries of
/// one degree), a pencil object, or `{"matrix": ...}`.
pub fn pfaffian_input_from_json<F: Field>(k: &F, v: &Value) -> Result<PfaffianInput<F::Elem>, JsonError> {
    if v.get("N0").is_some() {
        return pencil_from_json(k, v).map(PfaffianInput::Pencil);
    }
    let (m, path) = match v.get("matrix") {
        Some(m) => (m, "$.matrix"),
        None => (v, "$"),
    };
    let has_forms = array(m, path)?
        .iter()
        .any(|row| row.as_array().is_some_and(|r| r.iter().any(Value::is_object)));
    if !has_forms {
        return skew_from_json(k, m, path).map(PfaffianInput::Scalar);
    }
    let rows = rows_from_json(m, path, |c, p| match c {
        Value::Object(_) => form_from_json(k, c, p),
        _ => elem_from_json(k, c, p).map(|x| BinaryForm::constant(k, x)),
    })?;
    let mut degree = None;
    for (i, row) in rows.iter().enumerate() {
        for (j, f) in row.iter().enumerate() {
            if f.is_zero(k) {
                continue;
            }
            match degree {
                None => degree = Some(f.degree()),
                Some(d) if d != f.degree() => {
                    return Err(invalid(
                        &index(&index(path, i), j),
                        format!("entry has degree {}, other entries have degree {d}", f.degree()),
                    ))
                }
                _ => {}
            }
        }
    }
    let d = degree.unwrap_or(0);
    let rows: Vec<Vec<BinaryForm<F::Elem>>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(|f| f.with_degree(k, d)).collect())
        .collect();
    let m = Matrix::from_rows(rows).map_err(|e| invalid(path, e.to_string()))?;
    SkewMatrix::new(&FormRing::new(k.clone()), m)
        .map(PfaffianInput::Forms)
        .map_err(|e| invalid(path, e.to_string()))
}

fn check_n(v: &Value, n: usize) -> Result<(), JsonError> {
    if let Some(nv) = v.get("n") {
        let declared = usize_from_json(nv, "$.n")?;
        if declared != n {
            return Err(invalid("$.n", format!("declared n = {declared} but data has size {n}")));
        }
    }
    Ok(())
}

pub fn pencil_from_json<F: Field>(k: &F, v: &Value) -> Result<SkewPencil<F::Elem>, JsonError> {
    let n0 = skew_from_json(k, member(v, "N0", "$")?, "$.N0")?;
    let n1 = skew_from_json(k, member(v, "N1", "$")?, "$.N1")?;
    let p = SkewPencil::new(n0, n1).map_err(|e| invalid("$", e.to_string()))?;
    check_n(v, p.size())?;
    Ok(p)
}

pub fn pencil_to_json<F: Field>(k: &F, p: &SkewPencil<F::Elem>) -> Value {
    json!({
        "n": p.size(),
        "field": k.spec().to_string(),
        "N0": matrix_to_json(k, p.n0().matrix()),
        "N1": matrix_to_json(k, p.n1().matrix()),
    })
}

fn list<'a>(v: &'a Value, key: &str) -> Result<(&'a Vec<Value>, String), JsonError> {
    match v {
        Value::Array(a) => Ok((a, "$".into())),
        Value::Object(_) => {
            let path = child("", key);
            Ok((array(member(v, key, "$")?, &path)?, path))
        }
        _ => Err(invalid("$", format!("expected an array or an object with \"{key}\""))),
    }
}

/// Lines of `P^(n-1)`, each given by two spanning vectors.
pub fn lines_from_json<F: Field>(k: &F, v: &Value) -> Result<Vec<ProjSubspace<F::Elem>>, JsonError> {
    let (items, path) = list(v, "lines")?;
    let mut out = Vec::with_capacity(items.len());
    let mut n = None;
    for (i, item) in items.iter().enumerate() {
        let lpath = index(&path, i);
        let m = matrix_from_json(k, item, &lpath)?;
        if m.rows() != 2 {
            return Err(invalid(&lpath, format!("a line needs 2 spanning vectors, got {}", m.rows())));
        }
        match n {
            None => n = Some(m.cols()),
            Some(c) if c != m.cols() => {
                return Err(invalid(&lpath, format!("vectors have length {}, expected {c}", m.cols())))
            }
            _ => {}
        }
        let l = ProjSubspace::from_vectors(k, m.cols(), &m.row_vecs());
        if l.vector_dim() != 2 {
            return Err(invalid(&lpath, "spanning vectors are dependent"));
        }
        out.push(l);
    }
    if let Some(c) = n {
        check_n(v, c)?;
    }
    Ok(out)
}

pub fn line_to_json<F: Field>(k: &F, l: &ProjSubspace<F::Elem>) -> Value {
    matrix_to_json(k, l.basis())
}

pub fn lines_to_json<F: Field>(k: &F, lines: &[ProjSubspace<F::Elem>]) -> Value {
    let n = lines.first().map(|l| l.ambient()).unwrap_or(0);
    json!({
        "n": n,
        "field": k.spec().to_string(),
        "lines": lines.iter().map(|l| line_to_json(k, l)).collect::<Vec<_>>(),
    })
}

pub fn forms_from_json<F: Field>(k: &F, v: &Value) -> Result<Vec<BinaryForm<F::Elem>>, JsonError> {
    let (items, path) = list(v, "forms")?;
    let forms = items
        .iter()
        .enumerate()
        .map(|(i, f)| form_from_json(k, f, &index(&path, i)))
        .collect::<Result<Vec<_>, _>>()?;
    check_n(v, forms.len())?;
    Ok(forms)
}

pub fn forms_to_json<F: Field>(k: &F, forms: &[BinaryForm<F::Elem>]) -> Value {
    json!({
        "n": forms.len(),
        "field": k.spec().to_string(),
        "forms": forms.iter().map(|f| form_to_json(k, f)).collect::<Vec<_>>(),
    })
}
