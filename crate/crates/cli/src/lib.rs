//! The `mukai` command line.
//!
//! [`run`] parses arguments, dispatches one subcommand and returns the exit
//! code together with everything that should go to stdout and stderr, so the
//! binary is a thin wrapper and tests can drive the whole front end in-process.
//!
//! Exit codes: `0` success, `1` an embedded verification failed, `2` bad input.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use mukai_core::cohomology::{euler_chi, mukai_pair, mukai_square};
use mukai_core::fourier_mukai::{fm_forward, fm_inverse};
use mukai_core::json::{to_canonical_string, vec_value};
use mukai_core::km::{self, PolarizedVector};
use mukai_core::kummer::{self, EllipticThetaData};
use mukai_core::lattice;
use mukai_core::matrix;
use mukai_core::oracle::{self, Pattern, DEFAULT_N_MAX};
use mukai_core::selftest::{self, SelftestConfig};
use mukai_core::{Error, EvenClass, H2Symbolic, Oracle, SurfaceModel};
use num_bigint::BigInt;
use serde_json::{json, Value};

/// Oracle bound for `selftest` when none is configured.
pub const SELFTEST_N_MAX: usize = 4;

#[derive(Debug, Parser)]
#[command(name = "mukai", version, about = "Exact Mukai-lattice computations on abelian surfaces")]
pub struct Cli {
    /// Surface model: `abelian` (default), `ns1:<n>` for (H²) = 2n, `k3:<degree>`,
    /// a JSON file, or inline JSON.
    #[arg(long, global = true)]
    pub surface: Option<String>,

    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Largest n the exterior-algebra oracle will handle.
    #[arg(long, global = true, env = "MUKAI_N_MAX")]
    pub n_max: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mukai pairing ⟨x, y⟩ and χ(x, y).
    Pair {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Orthogonal complement of v in the Mukai lattice.
    Perp {
        #[arg(long)]
        v: String,
    },
    /// Classification of v by ⟨v²⟩.
    Classify {
        #[arg(long)]
        v: String,
    },
    /// Isotropic Mukai vector on Km(X) for v = r + dN + aω with ⟨v²⟩ = 4.
    KummerVector {
        #[arg(long)]
        r: BigInt,
        #[arg(long)]
        d: BigInt,
        #[arg(long)]
        n: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        a: BigInt,
    },
    /// Elliptic-product coordinates of θ_v(x); input {"theta":{"t":{..},"x":{..}}}.
    Theta {
        #[arg(long)]
        input: String,
    },
    /// Cohomological Fourier–Mukai transform.
    Fm {
        #[arg(long, value_enum, default_value = "forward")]
        dir: Direction,
        #[arg(long)]
        x: String,
    },
    /// Oracle integral against its closed form, e.g. --pattern "l^2 x^2".
    OracleIntegrals {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        l: String,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
    },
    /// Fujiki relation for λ = θ(l) and θ(x) + k·e.
    FujikiCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        k: i64,
    },
    /// Seeded run of the invariant suite.
    Selftest {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    fn core(context: &str, e: Error) -> Self {
        let code = if matches!(e, Error::Consistency(_)) { 1 } else { 2 };
        let message = if context.is_empty() { e.to_string() } else { format!("{context}: {e}") };
        CliError { code, message }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

struct Report {
    value: Value,
    ok: bool,
    headline: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let stdout = match cli.format {
                Format::Json => match to_canonical_string(&report.value) {
                    Ok(s) => s + "\n",
                    Err(e) => return failure(CliError { code: 1, message: e.to_string() }),
                },
                Format::Text => render_text(&report),
            };
            let mut stderr = String::new();
            if !report.ok {
                stderr.push_str("verification failed\n");
            }
            Outcome { code: if report.ok { 0 } else { 1 }, stdout, stderr }
        }
        Err(e) => failure(e),
    }
}

fn failure(e: CliError) -> Outcome {
    Outcome { code: e.code, stdout: String::new(), stderr: format!("error: {}\n", e.message) }
}

fn execute(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Pair { x, y } => pair(cli, x, y),
        Command::Perp { v } => perp(cli, v),
        Command::Classify { v } => classify(cli, v),
        Command::KummerVector { r, d, n, a } => kummer_vector(r, d, n, a),
        Command::Theta { input } => theta(cli, input),
        Command::Fm { dir, x } => fm(cli, *dir, x),
        Command::OracleIntegrals { n, pattern, l, x } => oracle_integrals(cli, *n, pattern, l, x.as_deref()),
        Command::FujikiCheck { n, l, x, k } => fujiki(cli, *n, l, x, *k),
        Command::Selftest { samples } => run_selftest(cli, *samples),
    }
}

/// Inline JSON when the text starts with `{` or `[`, otherwise a file path.
fn load_json(flag: &str, text: &str) -> CliResult<Value> {
    let trimmed = text.trim_start();
    let (source, body) = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        ("inline JSON".to_string(), text.to_string())
    } else {
        let body = std::fs::read_to_string(text)
            .map_err(|e| CliError::input(format!("{flag}: cannot read {text:?}: {e}")))?;
        (format!("file {text:?}"), body)
    };
    serde_json::from_str(&body).map_err(|e| {
        CliError::input(format!(
            "{flag}: malformed JSON in {source} at line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

fn surface_from_spec(spec: &str) -> CliResult<SurfaceModel> {
    let parse_n = |rest: &str| {
        rest.parse::<u64>()
            .map_err(|_| CliError::input(format!("--surface: bad integer in {spec:?}")))
    };
    let model = if spec == "abelian" {
        SurfaceModel::abelian_full()
    } else if let Some(rest) = spec.strip_prefix("ns1:") {
        SurfaceModel::ns_rank1(parse_n(rest)?).map_err(|e| CliError::core("--surface", e))?
    } else if let Some(rest) = spec.strip_prefix("k3:") {
        SurfaceModel::k3_ns_rank1(parse_n(rest)?).map_err(|e| CliError::core("--surface", e))?
    } else {
        surface_from_value("--surface", load_json("--surface", spec)?)?
    };
    Ok(model)
}

fn surface_from_value(flag: &str, value: Value) -> CliResult<SurfaceModel> {
    let model: SurfaceModel = serde_json::from_value(value)
        .map_err(|e| CliError::input(format!("{flag}: not a surface model: {e}")))?;
    model.validate().map_err(|e| CliError::core(flag, e))?;
    Ok(model)
}

fn surface(cli: &Cli) -> CliResult<SurfaceModel> {
    match &cli.surface {
        Some(spec) => surface_from_spec(spec),
        None => Ok(SurfaceModel::abelian_full()),
    }
}

/// Reads an even class; `c1` may be an array or a label expression such as `"f1+2f2"`.
fn class_from_value(flag: &str, mut value: Value, s: &SurfaceModel) -> CliResult<EvenClass> {
    if let Some(Value::String(expr)) = value.get("c1") {
        let c1 = s.parse_h2(expr).map_err(|e| CliError::core(&format!("{flag}.c1"), e))?;
        value["c1"] = Value::Array(c1.iter().map(|c| Value::String(c.to_string())).collect());
    }
    let class: EvenClass = serde_json::from_value(value)
        .map_err(|e| CliError::input(format!("{flag}: not an even class {{r, c1, a}}: {e}")))?;
    class.check(s).map_err(|e| CliError::core(flag, e))?;
    Ok(class)
}

fn load_class(flag: &str, text: &str, s: &SurfaceModel) -> CliResult<EvenClass> {
    class_from_value(flag, load_json(flag, text)?, s)
}

fn to_value<T: serde::Serialize>(x: &T) -> CliResult<Value> {
    serde_json::to_value(x).map_err(|e| CliError { code: 1, message: e.to_string() })
}

fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

fn pair(cli: &Cli, x: &str, y: &str) -> CliResult<Report> {
    let s = surface(cli)?;
    let (x, y) = (load_class("--x", x, &s)?, load_class("--y", y, &s)?);
    let p = mukai_pair(&x, &y, &s).map_err(|e| CliError::core("", e))?;
    let chi = euler_chi(&x, &y, &s).map_err(|e| CliError::core("", e))?;
    let value = json!({
        "x": to_value(&x)?,
        "y": to_value(&y)?,
        "pairing": int(&p),
        "euler_chi": int(&chi),
        "x_square": int(&mukai_square(&x, &s).map_err(|e| CliError::core("", e))?),
        "y_square": int(&mukai_square(&y, &s).map_err(|e| CliError::core("", e))?),
    });
    Ok(Report { value, ok: true, headline: format!("⟨x, y⟩ = {p}, χ(x, y) = {chi}") })
}

fn perp(cli: &Cli, v: &str) -> CliResult<Report> {
    let s = surface(cli)?;
    let v = load_class("--v", v, &s)?;
    let l = lattice::mukai_perp(&v, &s).map_err(|e| CliError::core("--v", e))?;
    let gram = s.mukai_gram();
    let coords = v.to_coords();
    let basis = l.basis.clone().unwrap_or_default();
    let orthogonal = basis.iter().all(|b| matrix::bilinear(&gram, b, &coords) == BigInt::from(0));
    let disc = lattice::discriminant(&l);
    let value = json!({
        "v": to_value(&v)?,
        "mukai_square": int(&mukai_square(&v, &s).map_err(|e| CliError::core("", e))?),
        "v_primitive": matrix::content(&coords) == BigInt::from(1),
        "perp": to_value(&l)?,
        "discriminant": int(&disc),
        "orthogonal": orthogonal,
    });
    Ok(Report { value, ok: orthogonal, headline: format!("v^⊥ has rank {} and discriminant {disc}", l.rank()) })
}

fn classify(cli: &Cli, v: &str) -> CliResult<Report> {
    let doc = load_json("--v", v)?;
    // A document may bundle its own surface: {"surface": {..}, "v": {..}}.
    let (s, class_value) = match (doc.get("surface"), doc.get("v")) {
        (Some(sv), Some(vv)) => (surface_from_value("--v.surface", sv.clone())?, vv.clone()),
        (None, Some(vv)) => (surface(cli)?, vv.clone()),
        _ => (surface(cli)?, doc),
    };
    let v = class_from_value("--v", class_value, &s)?;
    let c = km::classify(&v, &s).map_err(|e| CliError::core("--v", e))?;
    let mut headline = format!("⟨v²⟩ = {}, regime {}: {}", c.mukai_square, c.regime, c.statement);
    if let Some(dim) = &c.dim_moduli {
        let _ = write!(headline, "; dim M = {dim}");
    }
    if let Some(ind) = c.indecomposable {
        let _ = write!(headline, "; indecomposable: {ind}");
    }
    Ok(Report { value: to_value(&c)?, ok: true, headline })
}

fn kummer_vector(r: &BigInt, d: &BigInt, n: &BigInt, a: &BigInt) -> CliResult<Report> {
    let p = PolarizedVector { r: r.clone(), d: d.clone(), n: n.clone(), a: a.clone() };
    let rep = km::kummer_vector_report(&p).map_err(|e| CliError::core("", e))?;
    let headline = format!(
        "case {}: (ξ²) = {}, w = {} + ξ + ({})ω",
        rep.w.case_tag.as_str(),
        rep.w.xi_square,
        rep.w.r,
        rep.w.b
    );
    Ok(Report { value: to_value(&rep)?, ok: rep.checks.all(), headline })
}

fn theta(cli: &Cli, input: &str) -> CliResult<Report> {
    let s = surface(cli)?;
    let doc = load_json("--input", input)?;
    let body = doc.get("theta").cloned().unwrap_or(doc);
    let mut t_value = body
        .get("t")
        .cloned()
        .ok_or_else(|| CliError::input("--input: missing \"t\""))?;
    // r₁, d₁ default to the companion solution of d·r₁ − r·d₁ = 1
    if t_value.get("r1").is_none() || t_value.get("d1").is_none() {
        let field = |k: &str| -> CliResult<BigInt> {
            let v = t_value.get(k).ok_or_else(|| CliError::input(format!("--input.t: missing {k:?}")))?;
            let text = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            text.parse().map_err(|_| CliError::input(format!("--input.t.{k}: not an integer")))
        };
        let (r1, d1) = EllipticThetaData::companion(&field("r")?, &field("d")?)
            .map_err(|e| CliError::core("--input.t", e))?;
        t_value["r1"] = int(&r1);
        t_value["d1"] = int(&d1);
    }
    let t: EllipticThetaData = serde_json::from_value(t_value)
        .map_err(|e| CliError::input(format!("--input.t: {e}")))?;
    t.validate().map_err(|e| CliError::core("--input.t", e))?;
    let x_value = body.get("x").cloned().ok_or_else(|| CliError::input("--input: missing \"x\""))?;
    let x = class_from_value("--input.x", x_value, &s)?;

    let coords = kummer::theta_elliptic(&x, &t, &s).map_err(|e| CliError::core("--input", e))?;
    let q = kummer::theta_elliptic_q(&x, &t, &s).map_err(|e| CliError::core("--input.x", e))?;
    let x2 = mukai_square(&x, &s).map_err(|e| CliError::core("", e))?;
    let image = kummer::theta_elliptic_class(&x, &t, &s).map_err(|e| CliError::core("--input.x", e))?;
    let isometry = q == x2;
    let value = json!({
        "t": to_value(&t)?,
        "x": to_value(&x)?,
        "y": vec_value(&coords.y),
        "d_block": vec_value(&coords.d_block),
        "q": int(&q),
        "x_square": int(&x2),
        "image": to_value(&image)?,
        "isometry": isometry,
    });
    Ok(Report { value, ok: isometry, headline: format!("q(θ(x)) = {q}, ⟨x²⟩ = {x2}") })
}

/// Serializes bare JSON numbers as decimal strings.
fn stringify_ints(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(items) => Value::Array(items.into_iter().map(stringify_ints).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, stringify_ints(v))).collect()),
        other => other,
    }
}

fn fm(cli: &Cli, dir: Direction, x: &str) -> CliResult<Report> {
    let s = surface(cli)?;
    let x = load_class("--x", x, &s)?;
    let (y, back) = match dir {
        Direction::Forward => {
            let y = fm_forward(&x, &s).map_err(|e| CliError::core("--x", e))?;
            let back = fm_inverse(&y, &s).map_err(|e| CliError::core("", e))?;
            (y, back)
        }
        Direction::Inverse => {
            let y = fm_inverse(&x, &s).map_err(|e| CliError::core("--x", e))?;
            let back = fm_forward(&y, &s).map_err(|e| CliError::core("", e))?;
            (y, back)
        }
    };
    let sq = |c: &EvenClass| mukai_square(c, &s).map_err(|e| CliError::core("", e));
    let isometry = sq(&x)? == sq(&y)?;
    let roundtrip = back == x;
    let value = json!({
        "direction": match dir { Direction::Forward => "forward", Direction::Inverse => "inverse" },
        "input": to_value(&x)?,
        "output": to_value(&y)?,
        "isometry": isometry,
        "roundtrip": roundtrip,
    });
    let headline = format!("{} ↦ {}", x.display(&s), y.display(&s));
    Ok(Report { value, ok: isometry && roundtrip, headline })
}

fn oracle_n_max(cli: &Cli, default: usize) -> usize {
    cli.n_max.unwrap_or(default)
}

/// Oracle classes always live on the six-label elliptic-product model.
fn symbolic(flag: &str, expr: &str) -> CliResult<H2Symbolic> {
    let s = SurfaceModel::abelian_full();
    let v = s.parse_h2(expr).map_err(|e| CliError::core(flag, e))?;
    H2Symbolic::from_bigints(&v).map_err(|e| CliError::core(flag, e))
}

fn oracle_integrals(cli: &Cli, n: usize, pattern: &str, l: &str, x: Option<&str>) -> CliResult<Report> {
    let (a, b, e) = oracle::parse_pattern(pattern).map_err(|e| CliError::core("--pattern", e))?;
    let lv = symbolic("--l", l)?;
    let xv = match x {
        Some(x) => symbolic("--x", x)?,
        None if b > 0 => return Err(CliError::input("--x is required when the pattern contains x")),
        None => H2Symbolic::from_ints([0; 6]),
    };
    let o = Oracle::new(oracle_n_max(cli, DEFAULT_N_MAX));
    let brute = o.kummer_integral(n, a, b, &lv, &xv, e).map_err(|e| CliError::core("", e))?;
    let closed = match Pattern::classify(n, a, b, e) {
        Ok(_) => Some(
            oracle::closed_form_integral(n, a, b, e, &lv.pair(&lv), &lv.pair(&xv), &xv.pair(&xv))
                .map_err(|e| CliError::core("", e))?,
        ),
        Err(Error::UnsupportedPattern(_)) => None,
        Err(e) => return Err(CliError::core("--pattern", e)),
    };
    let matched = closed.as_ref().map(|c| *c == brute);
    let value = json!({
        "n": n.to_string(),
        "pattern": pattern,
        "exponents": [a.to_string(), b.to_string(), e.to_string()],
        "l": l,
        "x": x,
        "oracle": brute.to_string(),
        "closed_form": closed.as_ref().map(|c| c.to_string()),
        "match": matched,
    });
    let headline = match &closed {
        Some(c) => format!("oracle {brute}, closed form {c}"),
        None => format!("oracle {brute} (no closed form for this pattern)"),
    };
    Ok(Report { value, ok: matched != Some(false), headline })
}

fn fujiki(cli: &Cli, n: usize, l: &str, x: &str, k: i64) -> CliResult<Report> {
    let (lv, xv) = (symbolic("--l", l)?, symbolic("--x", x)?);
    let o = Oracle::new(oracle_n_max(cli, DEFAULT_N_MAX));
    let rep = o.fujiki_check(n, &lv, &xv, k).map_err(|e| CliError::core("", e))?;
    let mut value = to_value(&rep)?;
    value["n"] = Value::String(n.to_string());
    value["k"] = Value::String(k.to_string());
    let headline = format!("Fujiki relation: {} = {} ({})", rep.lhs, rep.rhs, if rep.holds { "holds" } else { "fails" });
    Ok(Report { value, ok: rep.holds, headline })
}

fn run_selftest(cli: &Cli, samples: usize) -> CliResult<Report> {
    let cfg = SelftestConfig { seed: cli.seed, oracle_n_max: oracle_n_max(cli, SELFTEST_N_MAX), samples };
    let rep = selftest::run(&cfg).map_err(|e| CliError::core("", e))?;
    let mut value = to_value(&rep)?;
    value = stringify_ints(value);
    let failed: Vec<&str> = rep.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    let headline = if failed.is_empty() {
        format!("selftest: {} checks passed (seed {})", rep.checks.len(), cli.seed)
    } else {
        format!("selftest: failed {}", failed.join(", "))
    };
    Ok(Report { value, ok: rep.passed, headline })
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", report.headline);
    flatten(&report.value, "", &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        _ => None,
    }
}

fn flatten(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(child, &key, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| scalar(i).is_some()) => {
            let parts: Vec<String> = items.iter().filter_map(scalar).collect();
            let _ = writeln!(out, "  {prefix}: [{}]", parts.join(", "));
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(child, &format!("{prefix}[{i}]"), out);
            }
        }
        other => {
            let _ = writeln!(out, "  {prefix}: {}", scalar(other).unwrap_or_default());
        }
    }
}
