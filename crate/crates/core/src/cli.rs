//! Problem files in, reports out.
//!
//! A problem file is a JSON object
//!
//! ```json
//! { "schema_version": "1", "kind": "partial_operator",
//!   "payload": { "domain": [[1], [0]], "action": [[1], [1]] },
//!   "tolerances": { "cmp_tol": 1e-8 }, "seed": 7 }
//! ```
//!
//! Scalars are either plain numbers or `[re, im]` pairs; matrices are
//! row-major nested arrays (an `n×0` matrix is `n` empty rows). Reports
//! always write complex entries as `[re, im]` and `null` for `+∞`.
//!
//! Tolerances start from the `KVN_TOL_PROFILE` preset, then take the file's
//! `tolerances`, then command-line flags.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{
    extend_functional, extend_functional_unital, f_max, fn_on_positive, gns, is_admissible,
    is_hilbert_bounded, is_representable, LeftIdeal, StarAlgebra,
};
use crate::commutation::verify_commutation;
use crate::error::{Error, Result};
use crate::interval::{a_max, halmos_complete, sample_extensions};
use crate::kernel::{extend_kernel, operator_from_kernel, KernelProblem};
use crate::krein::krein_von_neumann;
use crate::linalg::{c, CMatrix, CVector, ToleranceConfig, C64};
use crate::partial::{is_extendible, PartialOperator, Witness};
use crate::random::{random_vector, Rng};
use crate::schwarz::{minimal_constant_estimate, schwarz_gap};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    Extend,
    Complete,
    Kernel,
    Functional,
    Commutation,
    Schwarz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    PartialOperator,
    BoundedExtension,
    HalmosBlock,
    KernelProblem,
    StarAlgebraProblem,
    CommutationProblem,
    SchwarzProblem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NotExtendible,
    Infeasible,
    InvalidInput,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::InvalidInput => 1,
            Status::NotExtendible | Status::Infeasible => 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub status: Status,
    pub result: Value,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    /// Pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is plain JSON");
        s.push('\n');
        s
    }
}

/// Settings from the environment and the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    /// Value of `KVN_TOL_PROFILE`, if set.
    pub profile: Option<String>,
    pub tol_rank: Option<f64>,
    pub tol_psd: Option<f64>,
    pub tol_cmp: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    schema_version: String,
    kind: Kind,
    payload: Value,
    #[serde(default)]
    tolerances: Option<ToleranceOverrides>,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ToleranceOverrides {
    rank_rel_eps: Option<f64>,
    psd_tol: Option<f64>,
    cmp_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

impl Scalar {
    fn value(self) -> C64 {
        match self {
            Scalar::Real(x) => c(x, 0.0),
            Scalar::Complex([re, im]) => c(re, im),
        }
    }
}

type Rows = Vec<Vec<Scalar>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorPayload {
    domain: Rows,
    action: Rows,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundedPayload {
    domain: Rows,
    action: Rows,
    bound: Rows,
    #[serde(default)]
    samples: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HalmosPayload {
    a11: Rows,
    a21: Rows,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelPayload {
    m: usize,
    n: usize,
    domain: Rows,
    action: Rows,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraPayload {
    /// `table[i][j]` = coefficients of `b_i·b_j`.
    table: Vec<Vec<Vec<Scalar>>>,
    /// Row `i` = coefficients of `b_i*`.
    involution: Rows,
    #[serde(default)]
    unit: Option<Vec<Scalar>>,
    /// Columns are the ideal basis.
    ideal: Rows,
    f: Vec<Scalar>,
    #[serde(default)]
    g: Option<Vec<Scalar>>,
    /// Elements `x` at which to report `f_N(x*x)`.
    #[serde(default)]
    points: Vec<Vec<Scalar>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CommutationPayload {
    domain: Rows,
    action: Rows,
    b: Rows,
    c: Rows,
}

fn default_iterations() -> usize {
    200
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchwarzPayload {
    operators: Vec<Rows>,
    /// One vector per operator; drawn from the seed when absent.
    #[serde(default)]
    vectors: Option<Vec<Vec<Scalar>>>,
    #[serde(default = "default_iterations")]
    iterations: usize,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::ShapeMismatch(msg.into())
}

fn matrix(rows: &Rows, name: &str) -> Result<CMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(invalid(format!("{name}: rows have different lengths")));
    }
    Ok(CMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j].value()))
}

fn vector(v: &[Scalar]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(|z| z.value()))
}

fn enc_c(z: C64) -> Value {
    json!([z.re, z.im])
}

fn enc_matrix(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| enc_c(m[(i, j)])).collect()))
            .collect(),
    )
}

fn enc_vector(v: &CVector) -> Value {
    Value::Array(v.iter().map(|&z| enc_c(z)).collect())
}

fn enc_real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn enc_witness(w: &Witness) -> Value {
    json!({
        "y": enc_vector(&w.y),
        "coeffs": enc_vector(&w.coeffs),
        "pairing": enc_c(w.pairing),
        "form": w.form,
    })
}

fn operator(domain: &Rows, action: &Rows) -> Result<PartialOperator> {
    PartialOperator::new(matrix(domain, "domain")?, matrix(action, "action")?)
}

fn payload<T: serde::de::DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| invalid(format!("payload: {e}")))
}

struct Context {
    cfg: ToleranceConfig,
    seed: u64,
}

/// A successful run that still reports an obstruction.
struct Outcome {
    status: Status,
    result: Value,
}

fn ok(result: Value) -> Result<Outcome> {
    Ok(Outcome {
        status: Status::Ok,
        result,
    })
}

fn check(v: Value, ctx: &Context) -> Result<Outcome> {
    let p: OperatorPayload = payload(v)?;
    let op = operator(&p.domain, &p.action)?;
    let r = is_extendible(&op, &ctx.cfg)?;
    Ok(Outcome {
        status: if r.extendible { Status::Ok } else { Status::NotExtendible },
        result: json!({
            "extendible": r.extendible,
            "gram": enc_matrix(&r.gram),
            "hilbert_bound": enc_real(r.hilbert_bound),
            "witness": r.witness.as_ref().map_or(Value::Null, enc_witness),
        }),
    })
}

fn extend(kind: Kind, v: Value, ctx: &Context) -> Result<Outcome> {
    if kind == Kind::PartialOperator {
        let p: OperatorPayload = payload(v)?;
        let r = krein_von_neumann(&operator(&p.domain, &p.action)?, &ctx.cfg)?;
        return ok(json!({
            "a_n": enc_matrix(&r.a_n),
            "norm": r.norm,
            "rank": r.factorization.rank,
        }));
    }
    let p: BoundedPayload = payload(v)?;
    let op = operator(&p.domain, &p.action)?;
    let b = matrix(&p.bound, "bound")?;
    let r = a_max(&op, &b, &ctx.cfg)?;
    let norm = crate::linalg::hermitian_norm(&r.a_n, &ctx.cfg)?;
    let samples = sample_extensions(&op, &b, p.samples, ctx.seed, &ctx.cfg)?;
    ok(json!({
        "a_n": enc_matrix(&r.a_n),
        "norm": norm,
        "a_max": enc_matrix(&r.a_max),
        "degenerate": r.degenerate,
        "samples": samples.iter().map(enc_matrix).collect::<Vec<_>>(),
    }))
}

fn complete(v: Value, ctx: &Context) -> Result<Outcome> {
    let p: HalmosPayload = payload(v)?;
    let r = halmos_complete(&matrix(&p.a11, "a11")?, &matrix(&p.a21, "a21")?, &ctx.cfg)?;
    Ok(Outcome {
        status: if r.completable { Status::Ok } else { Status::NotExtendible },
        result: json!({
            "completable": r.completable,
            "dominated": r.dominated,
            "constant": enc_real(r.constant),
            "range_condition": r.range_condition,
            "a22_min": r.a22_min.as_ref().map_or(Value::Null, enc_matrix),
            "completion": r.completion.as_ref().map_or(Value::Null, enc_matrix),
            "witness": r.witness.as_ref().map_or(Value::Null, enc_witness),
        }),
    })
}

fn kernel(v: Value, ctx: &Context) -> Result<Outcome> {
    let p: KernelPayload = payload(v)?;
    let problem = KernelProblem::new(p.m, p.n, operator(&p.domain, &p.action)?)?;
    let k = extend_kernel(&problem, &ctx.cfg)?;
    let blocks: Vec<Vec<Value>> = (0..k.m())
        .map(|s| (0..k.m()).map(|t| enc_matrix(k.block(s, t))).collect())
        .collect();
    ok(json!({
        "m": k.m(),
        "n": k.n(),
        "blocks": blocks,
        "operator": enc_matrix(&operator_from_kernel(&k)),
    }))
}

fn functional(v: Value, ctx: &Context) -> Result<Outcome> {
    let p: AlgebraPayload = payload(v)?;
    let table = p
        .table
        .iter()
        .map(|row| row.iter().map(|e| vector(e)).collect())
        .collect();
    let unit = p.unit.as_deref().map(vector);
    let alg = StarAlgebra::new(table, matrix(&p.involution, "involution")?, unit)?;
    let ideal = LeftIdeal::new(matrix(&p.ideal, "ideal")?)?;
    let f = vector(&p.f);
    let cfg = &ctx.cfg;

    let hilbert = is_hilbert_bounded(&alg, &ideal, &f, cfg)?;
    let admissible = is_admissible(&alg, &ideal, &f, cfg)?;
    let data = gns(&alg, &ideal, &f, cfg)?;
    let f_n = extend_functional(&alg, &ideal, &f, cfg)?;
    let unital = if alg.unit().is_some() {
        enc_vector(&extend_functional_unital(&alg, &ideal, &f, cfg)?)
    } else {
        Value::Null
    };
    let mut positive = Vec::with_capacity(p.points.len());
    for x in &p.points {
        positive.push(json!(fn_on_positive(&alg, &ideal, &f, &vector(x), cfg)?));
    }
    let residuals = data.residuals(&alg);
    let mut result = json!({
        "hilbert_bound": enc_real(hilbert.bound),
        "admissible": admissible.admissible,
        "lambdas": admissible.lambdas.iter().map(|&l| enc_real(l)).collect::<Vec<_>>(),
        "rank": data.r,
        "gram": enc_matrix(&data.gram),
        "zeta": enc_vector(&data.zeta),
        "gns_residual": residuals.max(),
        "f_n": enc_vector(&f_n),
        "f_n_unital": unital,
        "f_n_on_squares": positive,
    });
    if let Some(g) = &p.g {
        let g = vector(g);
        let top = f_max(&alg, &ideal, &f, &g, cfg)?;
        result["g_representable"] = json!(is_representable(&alg, &g, cfg)?);
        result["f_max"] = enc_vector(&top);
    }
    ok(result)
}

fn commutation(v: Value, ctx: &Context) -> Result<Outcome> {
    let p: CommutationPayload = payload(v)?;
    let op = operator(&p.domain, &p.action)?;
    let r = verify_commutation(&op, &matrix(&p.b, "b")?, &matrix(&p.c, "c")?, &ctx.cfg)?;
    ok(json!({
        "hypotheses_hold": r.hypotheses_hold,
        "residual_cb": r.residual_cb,
        "residual_bc": r.residual_bc,
        "conclusion_holds": r.conclusion_holds,
    }))
}

fn schwarz(v: Value, ctx: &Context) -> Result<Outcome> {
    let p: SchwarzPayload = payload(v)?;
    let ops = p
        .operators
        .iter()
        .enumerate()
        .map(|(j, rows)| matrix(rows, &format!("operators[{j}]")))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = Rng::seeded(ctx.seed);
    let xs: Vec<CVector> = match &p.vectors {
        Some(vs) => vs.iter().map(|x| vector(x)).collect(),
        None => {
            let n = ops.first().map_or(0, CMatrix::nrows);
            (0..ops.len()).map(|_| random_vector(&mut rng, n)).collect()
        }
    };
    let gap = schwarz_gap(&ops, &xs, &ctx.cfg)?;
    let estimate = minimal_constant_estimate(&ops, p.iterations, ctx.seed, &ctx.cfg)?;
    ok(json!({
        "lhs": gap.lhs,
        "rhs": gap.rhs,
        "holds": gap.holds(&ctx.cfg),
        "constant": gap.constant,
        "estimate": estimate,
        "vectors": xs.iter().map(enc_vector).collect::<Vec<_>>(),
    }))
}

fn accepts(cmd: Command, kind: Kind) -> bool {
    matches!(
        (cmd, kind),
        (Command::Check, Kind::PartialOperator)
            | (Command::Extend, Kind::PartialOperator | Kind::BoundedExtension)
            | (Command::Complete, Kind::HalmosBlock)
            | (Command::Kernel, Kind::KernelProblem)
            | (Command::Functional, Kind::StarAlgebraProblem)
            | (Command::Commutation, Kind::CommutationProblem)
            | (Command::Schwarz, Kind::SchwarzProblem)
    )
}

fn resolve(file: &ProblemFile, overrides: &Overrides) -> Result<Context> {
    let mut cfg = match &overrides.profile {
        Some(name) => ToleranceConfig::from_profile(name)?,
        None => ToleranceConfig::default(),
    };
    if let Some(t) = &file.tolerances {
        cfg.rank_rel_eps = t.rank_rel_eps.unwrap_or(cfg.rank_rel_eps);
        cfg.psd_tol = t.psd_tol.unwrap_or(cfg.psd_tol);
        cfg.cmp_tol = t.cmp_tol.unwrap_or(cfg.cmp_tol);
    }
    cfg.rank_rel_eps = overrides.tol_rank.unwrap_or(cfg.rank_rel_eps);
    cfg.psd_tol = overrides.tol_psd.unwrap_or(cfg.psd_tol);
    cfg.cmp_tol = overrides.tol_cmp.unwrap_or(cfg.cmp_tol);
    cfg.validate()?;
    Ok(Context {
        cfg,
        seed: overrides.seed.or(file.seed).unwrap_or(0),
    })
}

fn failure(err: &Error) -> (Status, Value) {
    match err {
        Error::NotExtendible { witness } => (Status::NotExtendible, json!({ "witness": { "y": enc_vector(witness) } })),
        Error::BoundTooSmall {
            direction,
            eigenvalue,
        } => (
            Status::Infeasible,
            json!({ "certificate": { "direction": enc_vector(direction), "eigenvalue": eigenvalue } }),
        ),
        Error::BoundNotDominating { certificate, value } => (
            Status::Infeasible,
            json!({ "certificate": { "x": enc_vector(certificate), "value": value } }),
        ),
        e if e.is_infeasible() => (Status::Infeasible, Value::Null),
        _ => (Status::InvalidInput, Value::Null),
    }
}

/// Reports for input that could not be read at all.
pub fn invalid_input(message: impl Into<String>) -> Report {
    Report {
        status: Status::InvalidInput,
        result: Value::Null,
        diagnostics: vec![message.into()],
    }
}

/// Parses `input` as a problem file and runs `cmd` on it.
pub fn run(cmd: Command, input: &str, overrides: &Overrides) -> Report {
    let file: ProblemFile = match serde_json::from_str(input) {
        Ok(f) => f,
        Err(e) => return invalid_input(format!("malformed problem file: {e}")),
    };
    if file.schema_version != SCHEMA_VERSION {
        return invalid_input(format!(
            "unsupported schema_version `{}` (expected `{SCHEMA_VERSION}`)",
            file.schema_version
        ));
    }
    if !accepts(cmd, file.kind) {
        return invalid_input(format!("command {cmd:?} does not accept kind {:?}", file.kind).to_lowercase());
    }
    let ctx = match resolve(&file, overrides) {
        Ok(ctx) => ctx,
        Err(e) => return invalid_input(e.to_string()),
    };
    let mut diagnostics = vec![
        format!(
            "tolerances: rank_rel_eps={:e} psd_tol={:e} cmp_tol={:e}",
            ctx.cfg.rank_rel_eps, ctx.cfg.psd_tol, ctx.cfg.cmp_tol
        ),
        format!("seed: {}", ctx.seed),
    ];
    let kind = file.kind;
    let payload = file.payload;
    let outcome = match cmd {
        Command::Check => check(payload, &ctx),
        Command::Extend => extend(kind, payload, &ctx),
        Command::Complete => complete(payload, &ctx),
        Command::Kernel => kernel(payload, &ctx),
        Command::Functional => functional(payload, &ctx),
        Command::Commutation => commutation(payload, &ctx),
        Command::Schwarz => schwarz(payload, &ctx),
    };
    match outcome {
        Ok(o) => Report {
            status: o.status,
            result: o.result,
            diagnostics,
        },
        Err(e) => {
            let (status, result) = failure(&e);
            diagnostics.push(e.to_string());
            Report {
                status,
                result,
                diagnostics,
            }
        }
    }
}
