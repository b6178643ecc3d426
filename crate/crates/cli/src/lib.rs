//! Request parsing and dispatch behind the `nplectic` binary.
//!
//! Every command reads one JSON payload and produces one JSON report.
//! Expressions are strings in the variables `x1..xn` of the relevant chart;
//! form and multivector indices are 1-based.

pub mod io;

use std::collections::BTreeMap;

use nplectic::classify::{
    classify6, flatness_report, split_product_at, verify_product_parts, FloatForm, PointSplit, SignInfo,
    TypeReport, Witness, FLOAT_TOL,
};
use nplectic::exterior::{DiffForm, MultiVec};
use nplectic::hdw::{
    ham_curve_check, ham_vector_field, hamilton_volterra_residual, hdw_residual, multiphase_forms, SignConvention,
};
use nplectic::liesym::{
    canonical_three_form, comoment_from_potential, comoment_verify, conserved_classify, killing_form,
    obstruction_cochain, so3_gibbs_action, LieAction, LieAlgebra,
};
use nplectic::linfty::{l_k, make_observable};
use nplectic::mover::{move_points, realify_and_check, PolyAuto, Step};
use nplectic::scalar::{GaussQ, Q};
use nplectic::{Chart, Error, SmoothMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use io::*;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Math(#[from] Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ParseError",
            CliError::Schema { .. } => "SchemaError",
            CliError::Math(e) => e.kind(),
            CliError::Io(_) => "IoError",
        }
    }

    /// 1 for malformed input and internal faults, 2 for mathematical
    /// preconditions that the input violates.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Math(_) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut detail = json!({ "message": self.to_string() });
        match self {
            CliError::Parse { line, column, .. } => {
                detail["line"] = json!(line);
                detail["column"] = json!(column);
            }
            CliError::Schema { path, .. } => detail["path"] = json!(path),
            _ => {}
        }
        json!({ "error": { "kind": self.kind(), "detail": detail } })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Classify,
    Flat,
    Hamvf,
    HdwResidual,
    Multiphase,
    Volterra,
    CurveCheck,
    Bracket,
    LieValidate,
    Comoment,
    Obstruction,
    Conserved,
    Move,
    Verify,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum SignFlag {
    /// `iota_X w = -dH`.
    #[default]
    Hdw,
    /// `iota_X w = (-1)^n dH`.
    Parity,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum OutFormat {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub mode: Mode,
    pub sign: SignFlag,
    pub seed: u64,
}

impl Options {
    fn sign(&self) -> SignConvention {
        match self.sign {
            SignFlag::Hdw => SignConvention::MinusDh,
            SignFlag::Parity => SignConvention::ParityDh,
        }
    }
}

pub fn parse_request(src: &str) -> Result<Value, CliError> {
    serde_json::from_str(src).map_err(|err| CliError::Parse {
        line: err.line(),
        column: err.column(),
        message: err.to_string(),
    })
}

/// Report and exit code for one request.
pub fn run(cmd: Command, input: &str, opts: &Options) -> (Value, i32) {
    match parse_request(input).and_then(|v| dispatch(cmd, &v, opts)) {
        Ok(v) => (v, 0),
        Err(err) => (err.to_json(), err.exit_code()),
    }
}

pub fn dispatch(cmd: Command, v: &Value, opts: &Options) -> Result<Value, CliError> {
    match cmd {
        Command::Classify => classify(v, opts),
        Command::Flat => flat(v),
        Command::Hamvf => hamvf(v, opts),
        Command::HdwResidual => residual(v, opts),
        Command::Multiphase => multiphase(v),
        Command::Volterra => volterra(v),
        Command::CurveCheck => curve_check(v),
        Command::Bracket => bracket(v),
        Command::LieValidate => lie_validate(v),
        Command::Comoment => comoment(v),
        Command::Obstruction => obstruction(v),
        Command::Conserved => conserved(v),
        Command::Move => mover(v, opts),
        Command::Verify => verify(v),
    }
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Form(f) => json!({ "form": form_json(f) }),
        Witness::Vector(x) => json!({ "vector": multivec_json(x) }),
        Witness::Endomorphism(j) => json!({
            "endomorphism": j.matrix().iter().map(|r| r.iter().map(expr_json).collect::<Vec<_>>()).collect::<Vec<_>>()
        }),
        Witness::Frame(fr) => json!({ "frame": fr.iter().map(multivec_json).collect::<Vec<_>>() }),
    }
}

fn sign_json(report: &mut serde_json::Map<String, Value>, s: &SignInfo) {
    report.insert("trace_sign".into(), json!(s.symbol()));
    if let SignInfo::NonConstant(a, b) = s {
        let pt = |p: &Vec<Q>| p.iter().map(q_json).collect::<Vec<_>>();
        report.insert("sign_points".into(), json!([pt(a), pt(b)]));
    }
}

fn type_report_json(r: &TypeReport, with_flat: bool) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("type".into(), json!(r.linear_type.name()));
    sign_json(&mut m, &r.trace_sign);
    if with_flat {
        m.insert("flat".into(), json!(r.flat.name()));
    }
    if let Some(note) = &r.note {
        m.insert("note".into(), json!(note));
    }
    m
}

fn float_form_json(f: &FloatForm) -> Value {
    let terms: Vec<Value> = f
        .iter()
        .map(|(idx, c)| json!({ "idx": idx.iter().map(|i| i + 1).collect::<Vec<_>>(), "coeff": format!("{c:.16e}") }))
        .collect();
    json!(terms)
}

fn classify(v: &Value, opts: &Options) -> Result<Value, CliError> {
    let w = parse_form(field(v, "", "form")?, "form", None)?;
    match opts.mode {
        Mode::Exact => Ok(Value::Object(type_report_json(&flatness_report(&w)?, true))),
        Mode::Float => {
            let p = parse_q_point(field(v, "", "point")?, "point")?;
            let r = classify6(&w, &p)?;
            let mut m = type_report_json(&r, false);
            if r.linear_type == nplectic::classify::LinearType::ProductType {
                let split = match split_product_at(&w, &p)? {
                    PointSplit::Exact(a, b) => json!({ "exact": true, "w1": form_json(&a), "w2": form_json(&b) }),
                    PointSplit::Float { w1, w2, residual } => json!({
                        "exact": false,
                        "w1": float_form_json(&w1),
                        "w2": float_form_json(&w2),
                        "residual": format!("{residual:.16e}"),
                        "tolerance": format!("{FLOAT_TOL:.16e}"),
                    }),
                };
                m.insert("split".into(), split);
            }
            Ok(Value::Object(m))
        }
    }
}

fn flat(v: &Value) -> Result<Value, CliError> {
    let w = parse_form(field(v, "", "form")?, "form", None)?;
    let r = flatness_report(&w)?;
    let mut m = serde_json::Map::new();
    m.insert("flat".into(), json!(r.flat.name()));
    m.insert("type".into(), json!(r.linear_type.name()));
    if let Some(wit) = &r.witness {
        m.insert("witness".into(), witness_json(wit));
    }
    if let Some(note) = &r.note {
        m.insert("note".into(), json!(note));
    }
    Ok(Value::Object(m))
}

fn hamvf(v: &Value, opts: &Options) -> Result<Value, CliError> {
    let w = parse_form(field(v, "", "omega")?, "omega", None)?;
    let h = parse_form(field(v, "", "h")?, "h", Some(w.chart()))?;
    match ham_vector_field(&w, &h, opts.sign()) {
        Ok(x) => Ok(json!({ "hamiltonian": true, "field": multivec_json(&x) })),
        Err(Error::NotHamiltonian) => Ok(json!({ "hamiltonian": false })),
        Err(e) => Err(e.into()),
    }
}

fn residual(v: &Value, opts: &Options) -> Result<Value, CliError> {
    let w = parse_form(field(v, "", "omega")?, "omega", None)?;
    let x = parse_multivec(field(v, "", "field")?, "field", Some(w.chart()))?;
    let h = parse_form(field(v, "", "h")?, "h", Some(w.chart()))?;
    let r = hdw_residual(&w, &x, &h, opts.sign())?;
    Ok(json!({ "zero": r.is_zero(), "residual": form_json(&r) }))
}

fn multiphase(v: &Value) -> Result<Value, CliError> {
    let n = as_usize(field(v, "", "n")?, "n")?;
    let fiber = as_usize(field(v, "", "fiber")?, "fiber")?;
    let m = multiphase_forms(n, fiber)?;
    Ok(json!({ "names": m.chart.names(), "theta": form_json(&m.theta), "omega": form_json(&m.omega) }))
}

fn volterra(v: &Value) -> Result<Value, CliError> {
    let n = as_usize(field(v, "", "n")?, "n")?;
    let fiber = as_usize(field(v, "", "fiber")?, "fiber")?;
    let m = multiphase_forms(n, fiber)?;
    let h = parse_expr_value(field(v, "", "hamiltonian")?, "hamiltonian")?;
    m.chart.check(&h).map_err(|e| CliError::Schema { path: "hamiltonian".into(), message: e.to_string() })?;
    let comps = as_array(field(v, "", "section")?, "section")?
        .iter()
        .enumerate()
        .map(|(i, c)| parse_expr_value(c, &format!("section[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let base = Chart::new(n).shared();
    let fib = Chart::new(comps.len()).shared();
    let sec = SmoothMap::new(&base, &fib, comps)?;
    let res = hamilton_volterra_residual(&m, &h, &sec)?;
    Ok(json!({
        "solves": res.iter().all(num_traits::Zero::is_zero),
        "residuals": res.iter().map(expr_json).collect::<Vec<_>>(),
    }))
}

fn parse_map(v: &Value, path: &str) -> Result<SmoothMap, CliError> {
    let src = parse_chart(field(v, path, "source")?, &join(path, "source"))?;
    let tgt = parse_chart(field(v, path, "target")?, &join(path, "target"))?;
    let cpath = join(path, "components");
    let comps = as_array(field(v, path, "components")?, &cpath)?
        .iter()
        .enumerate()
        .map(|(i, c)| parse_expr_value(c, &format!("{cpath}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SmoothMap::new(&src, &tgt, comps)?)
}

fn curve_check(v: &Value) -> Result<Value, CliError> {
    let psi = parse_map(field(v, "", "map")?, "map")?;
    let gamma = parse_multivec(field(v, "", "gamma")?, "gamma", Some(psi.source()))?;
    let x = parse_multivec(field(v, "", "field")?, "field", Some(psi.target()))?;
    let points = as_array(field(v, "", "points")?, "points")?
        .iter()
        .enumerate()
        .map(|(i, p)| parse_q_point(p, &format!("points[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let res = ham_curve_check(&psi, &gamma, &x, &points)?;
    Ok(json!({ "all": res.iter().all(|b| *b), "results": res }))
}

fn bracket(v: &Value) -> Result<Value, CliError> {
    let w = parse_form(field(v, "", "omega")?, "omega", None)?;
    let args = as_array(field(v, "", "args")?, "args")?
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let f = parse_form(a, &format!("args[{i}]"), Some(w.chart()))?;
            Ok(make_observable(&w, &f)?)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let r = l_k(&w, &args)?;
    Ok(json!({ "k": args.len(), "zero_extended": r.zero_extended, "form": form_json(&r.form) }))
}

fn parse_algebra(v: &Value, path: &str) -> Result<LieAlgebra, CliError> {
    if let Some(name) = v.as_str() {
        return match name {
            "so3" => Ok(LieAlgebra::so3()),
            "sl2" => Ok(LieAlgebra::sl2()),
            "heisenberg" => Ok(LieAlgebra::heisenberg()),
            _ => match name.strip_prefix("abelian:").and_then(|d| d.parse::<usize>().ok()) {
                Some(d) => Ok(LieAlgebra::abelian(d)),
                None => Err(CliError::Schema { path: path.into(), message: format!("unknown algebra \"{name}\"") }),
            },
        };
    }
    let dim = as_usize(field(v, path, "dim")?, &join(path, "dim"))?;
    let bpath = join(path, "brackets");
    let mut brackets = Vec::new();
    for (n, b) in as_array(field(v, path, "brackets")?, &bpath)?.iter().enumerate() {
        let here = format!("{bpath}[{n}]");
        let idx = |key: &str| -> Result<usize, CliError> {
            let k = as_usize(field(b, &here, key)?, &join(&here, key))?;
            if k == 0 || k > dim {
                return Err(CliError::Schema { path: join(&here, key), message: format!("index {k} outside 1..={dim}") });
            }
            Ok(k - 1)
        };
        let (i, j) = (idx("i")?, idx("j")?);
        let vpath = join(&here, "value");
        let mut value = Vec::new();
        for (m, t) in as_array(field(b, &here, "value")?, &vpath)?.iter().enumerate() {
            let tp = format!("{vpath}[{m}]");
            let k = as_usize(field(t, &tp, "k")?, &join(&tp, "k"))?;
            if k == 0 || k > dim {
                return Err(CliError::Schema { path: join(&tp, "k"), message: format!("index {k} outside 1..={dim}") });
            }
            value.push((k - 1, parse_rational_value(field(t, &tp, "coeff")?, &join(&tp, "coeff"))?));
        }
        brackets.push((i, j, value));
    }
    Ok(LieAlgebra::from_brackets(dim, &brackets)?)
}

fn matrix_json(m: &[Vec<Q>]) -> Value {
    json!(m.iter().map(|r| r.iter().map(q_json).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn lie_validate(v: &Value) -> Result<Value, CliError> {
    let g = match parse_algebra(field(v, "", "algebra")?, "algebra") {
        Ok(g) => g,
        Err(CliError::Math(e @ Error::JacobiViolation(_))) => {
            return Ok(json!({ "valid": false, "reason": e.to_string() }));
        }
        Err(e) => return Err(e),
    };
    let (k, semisimple) = killing_form(&g);
    Ok(json!({
        "valid": true,
        "dim": g.dim(),
        "killing": matrix_json(&k),
        "semisimple": semisimple,
        "canonical_form": form_json(&canonical_three_form(&g)),
    }))
}

/// Either the preset `"so3-gibbs"` (which also fixes the form) or an explicit
/// algebra with one generating vector field per basis element.
fn parse_action(v: &Value) -> Result<(LieAction, DiffForm), CliError> {
    if v.get("preset").and_then(Value::as_str) == Some("so3-gibbs") {
        return Ok(so3_gibbs_action());
    }
    let w = parse_form(field(v, "", "omega")?, "omega", None)?;
    let g = parse_algebra(field(v, "", "algebra")?, "algebra")?;
    let gens = as_array(field(v, "", "generators")?, "generators")?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_multivec(x, &format!("generators[{i}]"), Some(w.chart())))
        .collect::<Result<Vec<MultiVec>, _>>()?;
    Ok((LieAction::new(g, gens)?, w))
}

fn indexed_forms(m: &BTreeMap<Vec<usize>, DiffForm>) -> Value {
    json!(m
        .iter()
        .map(|(s, f)| json!({ "args": s.iter().map(|i| i + 1).collect::<Vec<_>>(), "value": form_json(f) }))
        .collect::<Vec<_>>())
}

fn comoment(v: &Value) -> Result<Value, CliError> {
    let (act, w) = parse_action(v)?;
    let eta = parse_form(field(v, "", "potential")?, "potential", Some(w.chart()))?;
    let cm = comoment_from_potential(&act, &w, &eta)?;
    let rep = comoment_verify(&act, &w, &cm)?;
    Ok(json!({
        "maps": cm.maps.iter().map(indexed_forms).collect::<Vec<_>>(),
        "verification": {
            "all_zero": rep.all_zero,
            "lifting": rep.lifting.iter().map(form_json).collect::<Vec<_>>(),
            "relations": rep.relations.iter().map(indexed_forms).collect::<Vec<_>>(),
            "note": rep.note,
        },
    }))
}

fn obstruction(v: &Value) -> Result<Value, CliError> {
    let (act, w) = parse_action(v)?;
    let i = as_usize(field(v, "", "i")?, "i")?;
    let r = obstruction_cochain(&act, &w, i)?;
    Ok(json!({
        "i": r.i,
        "values": indexed_forms(&r.values),
        "constant_cochain": r.constant_cochain.as_ref().map(|c| c.iter().map(q_json).collect::<Vec<_>>()),
        "coboundary": r.coboundary,
        "exact": r.exact,
        "vanishes": r.vanishes,
    }))
}

fn conserved(v: &Value) -> Result<Value, CliError> {
    let w = parse_form(field(v, "", "omega")?, "omega", None)?;
    let h = parse_form(field(v, "", "h")?, "h", Some(w.chart()))?;
    let alpha = parse_form(field(v, "", "alpha")?, "alpha", Some(w.chart()))?;
    let obs = make_observable(&w, &h)?;
    Ok(json!({ "class": conserved_classify(&obs, &alpha)?.name() }))
}

fn poly_json(p: &[GaussQ]) -> Value {
    json!(p.iter().map(gauss_json).collect::<Vec<_>>())
}

fn step_json(s: &Step) -> Value {
    match s {
        Step::Linear(m) => json!({
            "kind": s.name(),
            "matrix": m.iter().map(|r| r.iter().map(gauss_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
        Step::ShearX { p, q } => json!({
            "kind": s.name(),
            "p": p.iter().map(|x| poly_json(x)).collect::<Vec<_>>(),
            "q": poly_json(q),
        }),
        Step::ShearZ { p } => json!({ "kind": s.name(), "p": poly_json(p) }),
    }
}

fn random_targets(seed: u64, n: usize, k: usize) -> Vec<Vec<GaussQ>> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Vec<GaussQ>> = Vec::new();
    while out.len() < k {
        let p: Vec<GaussQ> = (0..n)
            .map(|_| GaussQ::new(Q::from_integer(r.gen_range(-9..=9).into()), Q::from_integer(r.gen_range(-9..=9).into())))
            .collect();
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn mover(v: &Value, opts: &Options) -> Result<Value, CliError> {
    let n = as_usize(field(v, "", "n")?, "n")?;
    let src = parse_gauss_points(field(v, "", "src")?, "src")?;
    let dst = match v.get("dst") {
        Some(d) => parse_gauss_points(d, "dst")?,
        None => random_targets(opts.seed, n, src.len()),
    };
    for (name, pts) in [("src", &src), ("dst", &dst)] {
        if let Some(i) = pts.iter().position(|p| p.len() != n) {
            return Err(CliError::Schema { path: format!("{name}[{i}]"), message: format!("expected {n} coordinates") });
        }
    }
    let f: PolyAuto = move_points(&src, &dst, n)?;
    let mut table = Vec::new();
    for (s, d) in src.iter().zip(&dst) {
        let img = f.apply(s)?;
        table.push(json!({
            "src": s.iter().map(gauss_json).collect::<Vec<_>>(),
            "image": img.iter().map(gauss_json).collect::<Vec<_>>(),
            "dst": d.iter().map(gauss_json).collect::<Vec<_>>(),
            "ok": &img == d,
        }));
    }
    let det = f.jacobian_determinant()?;
    let real = realify_and_check(&f)?;
    Ok(json!({
        "n": n,
        "steps": f.steps.iter().map(step_json).collect::<Vec<_>>(),
        "evaluation": table,
        "jacobian": det.to_string(),
        "preserves_volume": real.preserves,
    }))
}

fn verify(v: &Value) -> Result<Value, CliError> {
    let w = parse_form(field(v, "", "form")?, "form", None)?;
    let parts = as_array(field(v, "", "parts")?, "parts")?
        .iter()
        .enumerate()
        .map(|(i, p)| parse_form(p, &format!("parts[{i}]"), Some(w.chart())))
        .collect::<Result<Vec<_>, _>>()?;
    let (sum, flags) = verify_product_parts(&w, &parts)?;
    Ok(json!({
        "sum_matches": sum,
        "valid": sum && flags.iter().all(|(a, b)| *a && *b),
        "parts": flags.iter().map(|(d, c)| json!({ "decomposable": d, "closed": c })).collect::<Vec<_>>(),
    }))
}

/// Canonical re-serialization of a form payload.
pub fn normalize_form(v: &Value) -> Result<Value, CliError> {
    Ok(form_json(&parse_form(v, "", None)?))
}
