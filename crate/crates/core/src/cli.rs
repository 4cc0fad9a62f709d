//! JSON-in/JSON-out command line over the library.
//!
//! Matrix-valued inputs are read from standard input; results are written to
//! standard output as pretty-printed JSON. Exit codes: 0 success, 1 a
//! verification reported a failure, 2 malformed input or a rejected operation.

use std::io::Read;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{Field, GaloisElement, Scalar, ScalarValue};
use crate::error::{Error, Result};
use crate::matk::{inner_product, KMatrix, ToleranceConfig};
use crate::series::{rep_dims, series_compare, thom_dimension_table};
use crate::spectral::{eigh, exp_matrix, exp_selfadjoint, log_posdef, polar_factor, sqrt_posdef};
use crate::splitting::{
    collapse_cflat, collapse_t, composite_f, dimension_check, hom_assemble, hom_decompose, jacobian_origin_check,
    CollapseResult, DEFAULT_STEP,
};
use crate::stiefel::{
    cayley, cayley_inv, conjugate_embedding, filtration_profile, galois_act, stratum_decompose,
    stratum_reconstruct, zeta, CayleyCoords, StiefelPoint, StratumCoords, StratumOutcome,
};
use crate::verify::run_all;
use crate::with_field;

/// Deviation bound for `jacobian-check`.
pub const JACOBIAN_TOLERANCE: f64 = 5e-4;

#[derive(Debug, Parser)]
#[command(name = "kstiefel", version, about = "Stiefel manifolds over R, C and H")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Scalar field R, C or H; inferred from the input JSON when omitted.
    #[arg(long, global = true)]
    pub field: Option<Field>,
    #[arg(long, global = true)]
    pub k: Option<usize>,
    #[arg(long, global = true)]
    pub m: Option<usize>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Isometry and relative rank threshold.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Truncation degree for `series`.
    #[arg(long, global = true, default_value_t = 120)]
    pub degree: usize,
    #[arg(long, global = true, default_value_t = 500)]
    pub trials: usize,
    /// Central-difference step for `jacobian-check`.
    #[arg(long, global = true, default_value_t = DEFAULT_STEP)]
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// {Y, X} -> Stiefel point c(Y, X)
    Cayley,
    /// Stiefel point -> {Y, X}
    CayleyInv,
    /// matrix B -> {A, Z} with B = A exp(-Z)
    Polar,
    /// self-adjoint matrix -> {Q, lambda}
    Eigh,
    /// square matrix -> exp; self-adjoint input goes through the spectral route with --hermitian
    Exp {
        #[arg(long)]
        hermitian: bool,
    },
    /// positive-definite matrix -> log
    Log,
    /// positive-definite matrix -> square root
    Sqrt,
    /// Stiefel point -> eigenspace filtration level
    FiltrationLevel,
    /// Stiefel point, --k -> stratum coordinates {psi, Y, X} or the side it falls on
    StratumDecompose,
    /// {psi, Y, X} -> Stiefel point
    StratumReconstruct,
    /// {psi, f} -> the conjugated point
    Conjugate,
    /// {tau, f} -> the Galois-twisted point
    GaloisAct,
    /// --k -> the matrix of zeta
    Zeta,
    /// matrix -> {Y, X, Z}
    HomDecompose,
    /// matrix M -> basepoint or {A, Z}
    CollapseT,
    /// Stiefel point -> basepoint or {Y, X}
    CollapseCflat,
    /// {Y, X, Z} -> F(Y, X, Z)
    CompositeF,
    /// --k --m --step -> deviation of the Jacobian at the origin from the identity
    JacobianCheck,
    /// --degree -> comparison of the wedge and product Poincare series
    Series,
    /// --m --k -> representation dimensions and the Thom dimension table
    Dims,
    /// {op, ...} -> scalar and Galois group operations
    Scalar,
    /// {op, ...} -> dense matrix operations
    Matrix,
    /// --n --k --seed, {kind} -> random matrix
    Random,
    /// --trials --seed -> randomized verification suites
    Verify,
}

/// Library operations and the subcommand through which each is reached.
pub const OPERATION_ROUTES: &[(&str, &str)] = &[
    ("scalar_mul", "scalar"),
    ("conjugate", "scalar"),
    ("galois_apply", "scalar"),
    ("galois_compose", "scalar"),
    ("galois_inverse", "scalar"),
    ("galois_equal", "scalar"),
    ("matmul", "matrix"),
    ("add", "matrix"),
    ("real_scale", "matrix"),
    ("identity", "matrix"),
    ("adjoint", "matrix"),
    ("inner_product", "matrix"),
    ("gauss_inverse", "matrix"),
    ("rank", "matrix"),
    ("image_orthobasis", "matrix"),
    ("is_isometry", "matrix"),
    ("skew_self_split", "matrix"),
    ("random_matrix", "random"),
    ("random_isometry", "random"),
    ("random_skew", "random"),
    ("random_selfadjoint", "random"),
    ("eigh", "eigh"),
    ("exp_matrix", "exp"),
    ("exp_selfadjoint", "exp"),
    ("log_posdef", "log"),
    ("sqrt_posdef", "sqrt"),
    ("polar_factor", "polar"),
    ("filtration_level", "filtration-level"),
    ("cayley", "cayley"),
    ("cayley_inv", "cayley-inv"),
    ("conjugate_embedding", "conjugate"),
    ("galois_act", "galois-act"),
    ("zeta", "zeta"),
    ("stratum_decompose", "stratum-decompose"),
    ("stratum_reconstruct", "stratum-reconstruct"),
    ("hom_decompose", "hom-decompose"),
    ("hom_assemble", "hom-decompose"),
    ("collapse_t", "collapse-t"),
    ("collapse_cflat", "collapse-cflat"),
    ("composite_F", "composite-f"),
    ("jacobian_origin_check", "jacobian-check"),
    ("rep_dims", "dims"),
    ("wedge_poincare", "series"),
    ("product_poincare", "series"),
    ("series_compare", "series"),
    ("thom_dimension_table", "dims"),
];

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Outcome {
    Ok(Value),
    Failed(Value),
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return CliOutput { code, stdout, stderr };
        }
    };
    match execute(&cli, stdin) {
        Ok(Outcome::Ok(v)) => CliOutput { code: 0, stdout: render(&v), stderr: String::new() },
        Ok(Outcome::Failed(v)) => {
            CliOutput { code: 1, stdout: render(&v), stderr: "verification failed\n".to_string() }
        }
        Err(e) => CliOutput { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn read_input(stdin: &mut dyn Read) -> Result<Value> {
    let mut text = String::new();
    stdin.read_to_string(&mut text).map_err(|e| Error::InvalidInput(format!("cannot read standard input: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

/// First `"field"` string found in the input, searching objects depth-first.
fn find_field(v: &Value) -> Option<Field> {
    match v {
        Value::Object(map) => {
            if let Some(f) = map.get("field").and_then(Value::as_str).and_then(|s| s.parse().ok()) {
                return Some(f);
            }
            map.values().find_map(find_field)
        }
        Value::Array(items) => items.iter().find_map(find_field),
        _ => None,
    }
}

fn field_of(cli: &Cli, input: Option<&Value>) -> Result<Field> {
    cli.field
        .or_else(|| input.and_then(find_field))
        .ok_or_else(|| Error::InvalidInput("no field given: pass --field R|C|H".into()))
}

fn check_flag(name: &str, flag: Option<usize>, actual: usize) -> Result<()> {
    match flag {
        Some(f) if f != actual => Err(Error::DimensionMismatch {
            op: "command line",
            detail: format!("--{name} {f} disagrees with the input ({actual})"),
        }),
        _ => Ok(()),
    }
}

fn required(name: &str, flag: Option<usize>) -> Result<usize> {
    flag.ok_or_else(|| Error::InvalidInput(format!("--{name} is required")))
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::InvalidInput(format!("input needs a \"{key}\" entry")))
}

/// A matrix given either bare or under `key`.
fn matrix_arg<S: Scalar>(v: &Value, key: &str) -> Result<KMatrix<S>> {
    KMatrix::from_json(v.get(key).unwrap_or(v))
}

fn collapse_json<T>(r: CollapseResult<T>, f: impl FnOnce(T) -> Value) -> Value {
    match r {
        CollapseResult::Basepoint => json!({ "basepoint": true }),
        CollapseResult::Point(t) => {
            let mut v = f(t);
            v["basepoint"] = json!(false);
            v
        }
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Outcome> {
    let tol = ToleranceConfig::uniform(cli.tol)?;
    match cli.command {
        Command::JacobianCheck => {
            let field = field_of(cli, None)?;
            let (k, m) = (required("k", cli.k)?, required("m", cli.m)?);
            let deviation = with_field!(field, S => jacobian_origin_check::<S>(k, m, cli.step, &tol))?;
            let passed = deviation < JACOBIAN_TOLERANCE;
            let v = json!({
                "field": field, "k": k, "m": m, "h": cli.step,
                "deviation": deviation, "tolerance": JACOBIAN_TOLERANCE, "passed": passed,
            });
            return Ok(if passed { Outcome::Ok(v) } else { Outcome::Failed(v) });
        }
        Command::Series => {
            let field = field_of(cli, None)?;
            let c = series_compare(field, cli.degree)?;
            let v = c.to_json();
            return Ok(if c.equal { Outcome::Ok(v) } else { Outcome::Failed(v) });
        }
        Command::Dims => {
            let field = field_of(cli, None)?;
            let (k, m) = (required("k", cli.k)?, cli.m.unwrap_or(0));
            let r = rep_dims(field, k, m);
            let check = with_field!(field, S => dimension_check::<S>(k));
            let table: Vec<Value> =
                thom_dimension_table(field, m, k).into_iter().map(|(k, d)| json!({ "k": k, "dim": d })).collect();
            return Ok(Outcome::Ok(json!({
                "field": field, "k": k, "m": m,
                "dim_nu": r.dim_nu, "dim_ad": r.dim_ad, "dim_sa": r.dim_sa,
                "basis_check": check.ok(),
                "thom_dimensions": table,
            })));
        }
        Command::Zeta => {
            let field = field_of(cli, None)?;
            let k = required("k", cli.k)?;
            let v = with_field!(field, S => zeta::<S>(k).map(|z| z.matrix.to_json()))?;
            return Ok(Outcome::Ok(json!({ "field": field, "k": k, "matrix": v })));
        }
        Command::Verify => {
            let fields: Vec<Field> = cli.field.map_or_else(|| Field::ALL.to_vec(), |f| vec![f]);
            let reports = run_all(&fields, cli.seed, cli.trials)?;
            let passed = reports.iter().all(|r| r.passed());
            let v = json!({
                "seed": cli.seed,
                "trials": cli.trials,
                "passed": passed,
                "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            });
            return Ok(if passed { Outcome::Ok(v) } else { Outcome::Failed(v) });
        }
        _ => {}
    }

    let input = read_input(stdin)?;
    let field = field_of(cli, Some(&input))?;
    with_field!(field, S => execute_with_input::<S>(cli, &input, &tol)).map(Outcome::Ok)
}

fn execute_with_input<S: Scalar>(cli: &Cli, input: &Value, tol: &ToleranceConfig) -> Result<Value> {
    match cli.command {
        Command::Cayley => {
            let c = CayleyCoords::<S>::from_json(input, tol)?;
            check_flag("k", cli.k, c.k())?;
            check_flag("m", cli.m, c.m())?;
            Ok(cayley(&c, tol)?.to_json())
        }
        Command::CayleyInv => {
            let p = StiefelPoint::<S>::from_json(input, tol)?;
            check_flag("k", cli.k, p.n())?;
            Ok(cayley_inv(&p, tol)?.to_json())
        }
        Command::Polar => {
            let b = matrix_arg::<S>(input, "B")?;
            let p = polar_factor(&b, tol)?;
            Ok(json!({ "A": p.a.to_json(), "Z": p.z.to_json() }))
        }
        Command::Eigh => {
            let sd = eigh(&matrix_arg::<S>(input, "X")?, tol)?;
            Ok(json!({ "Q": sd.q.to_json(), "lambda": sd.lambda }))
        }
        Command::Exp { hermitian } => {
            let m = matrix_arg::<S>(input, "M")?;
            Ok(if hermitian { exp_selfadjoint(&m, tol)? } else { exp_matrix(&m)? }.to_json())
        }
        Command::Log => Ok(log_posdef(&matrix_arg::<S>(input, "P")?, tol)?.to_json()),
        Command::Sqrt => Ok(sqrt_posdef(&matrix_arg::<S>(input, "P")?, tol)?.to_json()),
        Command::FiltrationLevel => {
            let p = StiefelPoint::<S>::from_json(input, tol)?;
            let profile = filtration_profile(&p, tol);
            Ok(json!({ "level": profile.rank, "ambiguous": profile.is_ambiguous() }))
        }
        Command::StratumDecompose => {
            let p = StiefelPoint::<S>::from_json(input, tol)?;
            let k = required("k", cli.k)?;
            Ok(match stratum_decompose(&p, k, tol)? {
                StratumOutcome::Stratum(s) => {
                    let mut v = s.to_json();
                    v["outcome"] = json!("stratum");
                    v
                }
                StratumOutcome::InLowerStratum { level } => json!({ "outcome": "lower", "level": level }),
                StratumOutcome::AboveStratum { level } => json!({ "outcome": "above", "level": level }),
            })
        }
        Command::StratumReconstruct => {
            let s = StratumCoords::<S>::from_json(input, tol)?;
            let (n, m) = (cli.n.unwrap_or(s.psi.rows()), cli.m.unwrap_or(s.coords.m()));
            check_flag("k", cli.k, s.k())?;
            Ok(stratum_reconstruct(&s, n, m, tol)?.to_json())
        }
        Command::Conjugate => {
            let psi = KMatrix::<S>::from_json(get(input, "psi")?)?;
            let p = StiefelPoint::<S>::from_json(input, tol)?;
            Ok(conjugate_embedding(&psi, &p, tol)?.to_json())
        }
        Command::GaloisAct => {
            let tau = GaloisElement::from_json(get(input, "tau")?)?;
            let p = StiefelPoint::<S>::from_json(input, tol)?;
            Ok(galois_act(&tau, &p)?.to_json())
        }
        Command::HomDecompose => {
            let m = matrix_arg::<S>(input, "M")?;
            let d = hom_decompose(&m)?;
            let residual = hom_assemble(&d)?.max_abs_diff(&m)?;
            Ok(json!({ "Y": d.y.to_json(), "X": d.x.to_json(), "Z": d.z.to_json(), "reassembly_residual": residual }))
        }
        Command::CollapseT => {
            let d = hom_decompose(&matrix_arg::<S>(input, "M")?)?;
            Ok(collapse_json(collapse_t(&d, tol)?, |p| json!({ "A": p.a.to_json(), "Z": p.z.to_json() })))
        }
        Command::CollapseCflat => {
            let p = StiefelPoint::<S>::from_json(input, tol)?;
            Ok(collapse_json(collapse_cflat(&p, tol)?, |c| c.to_json()))
        }
        Command::CompositeF => {
            let c = CayleyCoords::<S>::from_json(input, tol)?;
            let z = KMatrix::<S>::from_json(get(input, "Z")?)?;
            Ok(composite_f(&c, &z, tol)?.to_json())
        }
        Command::Scalar => scalar_op::<S>(input),
        Command::Matrix => matrix_op::<S>(input, tol),
        Command::Random => {
            let kind = get(input, "kind")?.as_str().unwrap_or_default();
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let n = required("n", cli.n)?;
            let m = match kind {
                "matrix" => KMatrix::<S>::random(&mut rng, n, required("k", cli.k)?),
                "isometry" => KMatrix::<S>::random_isometry(&mut rng, n, required("k", cli.k)?)?,
                "skew" => KMatrix::<S>::random_skew(&mut rng, n),
                "selfadjoint" => KMatrix::<S>::random_selfadjoint(&mut rng, n),
                other => return Err(Error::InvalidInput(format!("unknown random kind {other:?}"))),
            };
            Ok(m.to_json())
        }
        Command::JacobianCheck | Command::Series | Command::Dims | Command::Zeta | Command::Verify => {
            unreachable!("handled without standard input")
        }
    }
}

fn scalar_op<S: Scalar>(input: &Value) -> Result<Value> {
    let op = get(input, "op")?.as_str().unwrap_or_default();
    let scalar = |key: &str| ScalarValue::from_json_in(get(input, key)?, S::FIELD);
    let galois = |key: &str| GaloisElement::from_json(get(input, key)?);
    Ok(match op {
        "mul" => scalar("a")?.mul(&scalar("b")?)?.to_json(),
        "conjugate" => scalar("a")?.conjugate().to_json(),
        "galois_apply" => scalar("a")?.galois_apply(&galois("tau")?)?.to_json(),
        "compose" => galois("sigma")?.compose(&galois("tau")?)?.to_json(),
        "inverse" => galois("tau")?.inverse().to_json(),
        "equal" => json!(galois("sigma")?.equals(&galois("tau")?)?),
        other => return Err(Error::InvalidInput(format!("unknown scalar op {other:?}"))),
    })
}

fn matrix_op<S: Scalar>(input: &Value, tol: &ToleranceConfig) -> Result<Value> {
    let op = get(input, "op")?.as_str().unwrap_or_default();
    let mat = |key: &str| KMatrix::<S>::from_json(get(input, key)?);
    Ok(match op {
        "matmul" => mat("A")?.matmul(&mat("B")?)?.to_json(),
        "add" => mat("A")?.add(&mat("B")?)?.to_json(),
        "real_scale" => {
            let c = get(input, "c")?.as_f64().ok_or_else(|| Error::InvalidInput("\"c\" must be a number".into()))?;
            mat("A")?.real_scale(c).to_json()
        }
        "identity" => {
            let n = get(input, "n")?.as_u64().ok_or_else(|| Error::InvalidInput("\"n\" must be an integer".into()))?;
            KMatrix::<S>::identity(n as usize).to_json()
        }
        "adjoint" => mat("A")?.adjoint().to_json(),
        "inner" => inner_product(&mat("x")?, &mat("y")?)?.to_value().to_json(),
        "inverse" => mat("A")?.gauss_inverse(tol)?.to_json(),
        "rank" => json!(mat("A")?.rank(tol)),
        "orthobasis" => mat("A")?.image_orthobasis(tol).to_json(),
        "is_isometry" => json!(mat("A")?.is_isometry(tol)),
        "split" => {
            let (x, z) = mat("A")?.skew_self_split()?;
            json!({ "X": x.to_json(), "Z": z.to_json() })
        }
        other => return Err(Error::InvalidInput(format!("unknown matrix op {other:?}"))),
    })
}

/// Subcommand names as typed on the command line.
pub fn subcommand_names() -> Vec<String> {
    use clap::CommandFactory;
    Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect()
}
