//! JSON encodings of charts, forms, multivectors, expressions and points.

use std::sync::Arc;

use nplectic::exterior::{DiffForm, Graded, MultiVec, Variance};
use nplectic::scalar::{parse_gauss, parse_rational, GaussQ, Q};
use nplectic::{Chart, Expr};
use serde_json::{json, Map, Value};

use crate::CliError;

fn schema(path: &str, msg: impl Into<String>) -> CliError {
    CliError::Schema { path: path.to_string(), message: msg.into() }
}

pub fn field<'a>(v: &'a Value, path: &str, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| schema(&join(path, key), "missing field"))
}

pub fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

pub fn as_usize(v: &Value, path: &str) -> Result<usize, CliError> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| schema(path, "expected a non-negative integer"))
}

pub fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

pub fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, CliError> {
    v.as_str().ok_or_else(|| schema(path, "expected a string"))
}

/// An expression given as a string or an integer.
pub fn parse_expr_value(v: &Value, path: &str) -> Result<Expr, CliError> {
    let src = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() => n.to_string(),
        _ => return Err(schema(path, "expected an expression string")),
    };
    parse_rational(&src).map_err(|err| schema(path, err.to_string()))
}

pub fn parse_rational_value(v: &Value, path: &str) -> Result<Q, CliError> {
    parse_expr_value(v, path)?.as_constant().ok_or_else(|| schema(path, "expected a rational constant"))
}

pub fn parse_gauss_value(v: &Value, path: &str) -> Result<GaussQ, CliError> {
    match v {
        Value::String(s) => parse_gauss(s).map_err(|err| schema(path, err.to_string())),
        Value::Number(n) if n.is_i64() => Ok(GaussQ::from_i64(n.as_i64().unwrap_or_default())),
        _ => Err(schema(path, "expected a Gaussian rational string")),
    }
}

pub fn parse_chart(v: &Value, path: &str) -> Result<Arc<Chart>, CliError> {
    let dim = as_usize(field(v, path, "dim")?, &join(path, "dim"))?;
    let mut chart = Chart::new(dim);
    if let Some(pos) = v.get("positive") {
        let ppath = join(path, "positive");
        let mut vars = Vec::new();
        for (i, p) in as_array(pos, &ppath)?.iter().enumerate() {
            let k = as_usize(p, &format!("{ppath}[{i}]"))?;
            if k == 0 || k > dim {
                return Err(schema(&format!("{ppath}[{i}]"), format!("variable {k} outside 1..={dim}")));
            }
            vars.push(k - 1);
        }
        chart = chart.with_positive(vars).map_err(|err| schema(&ppath, err.to_string()))?;
    }
    Ok(chart.shared())
}

pub fn chart_json(c: &Chart) -> Value {
    json!({ "dim": c.dim(), "positive": c.positive().map(|i| i + 1).collect::<Vec<_>>() })
}

fn parse_graded<K: Variance>(v: &Value, path: &str, kind: &str, chart: Option<&Arc<Chart>>) -> Result<Graded<K>, CliError> {
    if !v.is_object() {
        return Err(schema(path, format!("expected a {kind} object")));
    }
    if let Some(k) = v.get("kind") {
        let k = as_str(k, &join(path, "kind"))?;
        if k != kind {
            return Err(schema(&join(path, "kind"), format!("expected \"{kind}\", got \"{k}\"")));
        }
    }
    let c = match (v.get("chart"), chart) {
        (Some(cv), _) => parse_chart(cv, &join(path, "chart"))?,
        (None, Some(c)) => c.clone(),
        (None, None) => return Err(schema(&join(path, "chart"), "missing field")),
    };
    let degree = as_usize(field(v, path, "degree")?, &join(path, "degree"))?;
    if degree > c.dim() {
        return Err(schema(&join(path, "degree"), format!("degree {degree} exceeds dimension {}", c.dim())));
    }
    let tpath = join(path, "terms");
    let mut out = Graded::<K>::zero(&c, degree);
    for (i, t) in as_array(field(v, path, "terms")?, &tpath)?.iter().enumerate() {
        let here = format!("{tpath}[{i}]");
        let ipath = join(&here, "idx");
        let idx = as_array(field(t, &here, "idx")?, &ipath)?;
        if idx.len() != degree {
            return Err(schema(&ipath, format!("{} indices for degree {degree}", idx.len())));
        }
        let mut zero_based = Vec::with_capacity(idx.len());
        for (j, x) in idx.iter().enumerate() {
            let k = as_usize(x, &format!("{ipath}[{j}]"))?;
            if k == 0 || k > c.dim() {
                return Err(schema(&format!("{ipath}[{j}]"), format!("index {k} outside 1..={}", c.dim())));
            }
            zero_based.push(k - 1);
        }
        let cpath = join(&here, "coeff");
        let coeff = parse_expr_value(field(t, &here, "coeff")?, &cpath)?;
        c.check(&coeff).map_err(|err| schema(&cpath, err.to_string()))?;
        out.add_term(zero_based, coeff).map_err(|err| schema(&ipath, err.to_string()))?;
    }
    Ok(out)
}

pub fn parse_form(v: &Value, path: &str, chart: Option<&Arc<Chart>>) -> Result<DiffForm, CliError> {
    parse_graded(v, path, "form", chart)
}

pub fn parse_multivec(v: &Value, path: &str, chart: Option<&Arc<Chart>>) -> Result<MultiVec, CliError> {
    parse_graded(v, path, "multivector", chart)
}

fn graded_json<K: Variance>(g: &Graded<K>, kind: &str) -> Value {
    let terms: Vec<Value> = g
        .terms()
        .map(|(idx, c)| json!({ "idx": idx.iter().map(|i| i + 1).collect::<Vec<_>>(), "coeff": c.to_string() }))
        .collect();
    json!({ "kind": kind, "chart": chart_json(g.chart()), "degree": g.degree(), "terms": terms })
}

pub fn form_json(f: &DiffForm) -> Value {
    graded_json(f, "form")
}

pub fn multivec_json(x: &MultiVec) -> Value {
    graded_json(x, "multivector")
}

pub fn expr_json(e: &Expr) -> Value {
    Value::String(e.to_string())
}

pub fn q_json(q: &Q) -> Value {
    Value::String(q.to_string())
}

pub fn gauss_json(g: &GaussQ) -> Value {
    Value::String(g.to_string())
}

pub fn parse_q_point(v: &Value, path: &str) -> Result<Vec<Q>, CliError> {
    as_array(v, path)?.iter().enumerate().map(|(i, x)| parse_rational_value(x, &format!("{path}[{i}]"))).collect()
}

pub fn parse_gauss_points(v: &Value, path: &str) -> Result<Vec<Vec<GaussQ>>, CliError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let here = format!("{path}[{i}]");
            as_array(p, &here)?
                .iter()
                .enumerate()
                .map(|(j, x)| parse_gauss_value(x, &format!("{here}[{j}]")))
                .collect()
        })
        .collect()
}

/// Compact text rendering of a report for `--out text`.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, "", v);
    out
}

fn render_into(out: &mut String, prefix: &str, v: &Value) {
    match v {
        Value::Object(m) if is_graded(m) => {
            let terms = m.get("terms").and_then(Value::as_array).cloned().unwrap_or_default();
            let basis = if m.get("kind").and_then(Value::as_str) == Some("multivector") { "d/dx" } else { "dx" };
            let rendered: Vec<String> = terms
                .iter()
                .map(|t| {
                    let idx: Vec<String> =
                        t["idx"].as_array().into_iter().flatten().map(|i| i.to_string()).collect();
                    format!("({}) {basis}{}", t["coeff"].as_str().unwrap_or("?"), idx.join(","))
                })
                .collect();
            let body = if rendered.is_empty() { "0".to_string() } else { rendered.join(" + ") };
            out.push_str(&format!("{prefix}: {body}\n"));
        }
        Value::Object(m) => {
            for (k, x) in m {
                render_into(out, &join(prefix, k), x);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                render_into(out, &format!("{prefix}[{i}]"), x);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

fn is_graded(m: &Map<String, Value>) -> bool {
    m.contains_key("terms") && m.contains_key("degree") && m.contains_key("chart")
}
