//! Command-line front end: argument parsing, configuration and reports.
//!
//! Every command produces a [`RunReport`]. The process exits with 0 when all
//! of its checks pass, 1 on a domain error or a failed check, and 2 on a
//! usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{crt, euler_phi, factorize, kronecker_symbol, multiplicative_order, sqrt_mod_p};
use crate::artin::{
    artin_map_q, decomposition_type_cyclotomic, frobenius_cyclotomic, splitting_pattern, verify_artin_kernel, IntPoly,
};
use crate::cohomology::{build_permutation_module, herbrand_components, random_finite_module, CyclicModule, GroupOrder};
use crate::density::{
    dirichlet_partial_sum, ideal_count_slope, poly_pattern_density, progression_density, quadratic_split_density,
    DensityConfig, FrequencyReport, PrimeSelector, DEFAULT_BOUND,
};
use crate::error::{Error, Result};
use crate::forms::{class_number_neg, criterion_check, known_class_polynomial, reduce_form, represent_prime, BinaryQuadraticForm};
use crate::ideals::{decompose_prime, QuadIdeal, DEFAULT_ENUMERATION_CAP};
use crate::oracle::{herbrand_by_enumeration, ray_class_count_q_brute, ray_class_count_quadratic_brute, splitting_pattern_naive};
use crate::padic::{hensel_sqrt, hilbert_product, hilbert_symbol, padic_exp, padic_log, PadicNumber, Place, DEFAULT_PRECISION};
use crate::quadfield::{fundamental_unit, QuadOrder};
use crate::rayclass::{ray_class_number, Modulus};
use crate::verify::{self, Profile, DEFAULT_SEED};

/// One named pass/fail line of a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), passed, detail: detail.into() }
    }
}

/// The machine-readable output of every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub result: Value,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Parser, Debug)]
#[command(name = "classfield", version, about = "Exact computations for class field theory over Q and quadratic fields")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Configuration file of `key = value` lines; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report elapsed_ms = 0, making output byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Worker threads for prime sieving (default: WORKER_COUNT or all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Largest accepted density bound X.
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Sieve segment size.
    #[arg(long, global = true)]
    segment: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Elementary number theory.
    #[command(subcommand)]
    Arith(ArithCmd),
    /// Ray class numbers.
    Rayclass(RayclassArgs),
    /// Frobenius elements, splitting patterns and the Artin map.
    #[command(subcommand)]
    Artin(ArtinCmd),
    /// p-adic exp/log, square roots and Hilbert symbols.
    #[command(subcommand)]
    Padic(PadicCmd),
    /// Cohomology of cyclic groups.
    #[command(subcommand)]
    Cohom(CohomCmd),
    /// Binary quadratic forms and prime representation.
    #[command(subcommand)]
    Forms(FormsCmd),
    /// Prime frequency and ideal counting experiments.
    #[command(subcommand)]
    Density(DensityCmd),
    /// Run the built-in theorem checks.
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "op")]
enum ArithCmd {
    /// Prime factorization.
    Factor {
        #[arg(allow_negative_numbers = true)]
        n: i64,
    },
    /// Kronecker symbol (a/n).
    Kronecker {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        n: i64,
    },
    /// Square root of a modulo a prime.
    Sqrt {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        p: u64,
    },
    /// Multiplicative order of a modulo n.
    Order {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        n: u64,
    },
    /// Chinese remaindering of congruences written r:m.
    Crt {
        #[arg(required = true, allow_hyphen_values = true)]
        congruences: Vec<String>,
    },
    /// Euler's totient.
    Phi { n: u64 },
    /// Fundamental unit of a real quadratic order.
    Unit { d: i64 },
}

#[derive(Args, Debug, Serialize)]
struct RayclassArgs {
    /// `q` for the rationals, or a quadratic discriminant.
    #[arg(long, default_value = "q", allow_hyphen_values = true)]
    field: String,
    /// Over Q: `5*inf`, `2^3*5`. Over a quadratic field: an integer n for
    /// the ideal (n), or `a,b,c` for the ideal c[a, b + w].
    #[arg(long)]
    modulus: String,
    /// Real places in the modulus, e.g. `0,1`.
    #[arg(long)]
    real_places: Option<String>,
    /// Class number of a real quadratic field.
    #[arg(long)]
    class_number: Option<u64>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "op")]
enum ArtinCmd {
    /// Frobenius of p in Q(zeta_m) and its decomposition type.
    Frobenius {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        m: u64,
    },
    /// Degrees of the irreducible factors of a polynomial mod p.
    Pattern {
        #[arg(long)]
        poly: String,
        #[arg(short)]
        p: u64,
    },
    /// Artin symbol of a rational number in Gal(Q(zeta_m)/Q) = (Z/m)*.
    Map {
        #[arg(short, allow_hyphen_values = true)]
        x: String,
        #[arg(short)]
        m: u64,
    },
    /// Sampled check that P_m lies in the kernel of the Artin map.
    Kernel {
        #[arg(short)]
        m: u64,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
    },
    /// Decomposition of p in the quadratic order of discriminant d.
    Decompose {
        #[arg(short)]
        p: u64,
        #[arg(short, allow_hyphen_values = true)]
        d: i64,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "op")]
enum PadicCmd {
    /// Local Hilbert symbol (a, b)_v.
    Hilbert {
        #[arg(short, allow_hyphen_values = true)]
        a: String,
        #[arg(short, allow_hyphen_values = true)]
        b: String,
        /// A prime or `inf`.
        #[arg(long)]
        place: String,
    },
    /// Product of (a, b)_v over all places.
    Product {
        #[arg(short, allow_hyphen_values = true)]
        a: String,
        #[arg(short, allow_hyphen_values = true)]
        b: String,
    },
    /// p-adic exponential of a rational number.
    Exp {
        #[arg(short)]
        p: u64,
        #[arg(short, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        prec: u32,
    },
    /// p-adic logarithm of a rational number.
    Log {
        #[arg(short)]
        p: u64,
        #[arg(short, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        prec: u32,
    },
    /// Square root by Hensel lifting.
    Sqrt {
        #[arg(short)]
        p: u64,
        #[arg(short, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        prec: u32,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "op")]
enum CohomCmd {
    /// Tate cohomology groups and the Herbrand quotient of a module.
    Herbrand(HerbrandArgs),
}

#[derive(Args, Debug, Serialize)]
struct HerbrandArgs {
    /// Order of the cyclic group (for --relations/--action or --random).
    #[arg(short)]
    n: Option<u32>,
    /// Permutation module Z[G/H] with |G| = N, |H| = N/D: `--perm N D`.
    #[arg(long, num_args = 2, value_names = ["N", "D"])]
    perm: Option<Vec<u32>>,
    /// Relation lattice rows as a JSON matrix.
    #[arg(long)]
    relations: Option<String>,
    /// Matrix of the generator as a JSON matrix acting on columns.
    #[arg(long)]
    action: Option<String>,
    /// A seeded random finite module of at most this order.
    #[arg(long)]
    random: Option<u64>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "op")]
enum FormsCmd {
    /// Write p = x^2 + xy + ... with the principal form of discriminant d.
    Represent {
        #[arg(short)]
        p: u64,
        #[arg(short, allow_hyphen_values = true)]
        d: i64,
    },
    /// Reduced forms of a negative discriminant.
    Classes {
        #[arg(short, allow_hyphen_values = true)]
        d: i64,
    },
    /// Compare representability with the class-polynomial criterion.
    Criterion {
        #[arg(short)]
        p: u64,
        #[arg(short, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        poly: Option<String>,
    },
    /// Reduce the form (a, b, c).
    Reduce {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
        #[arg(allow_negative_numbers = true)]
        c: i64,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "op")]
enum DensityCmd {
    /// Frequencies of p mod n.
    Progression {
        #[arg(short)]
        n: u64,
        #[arg(short = 'X', long = "bound", default_value_t = DEFAULT_BOUND)]
        x: u64,
    },
    /// Split/inert/ramified frequencies in a quadratic field.
    Split {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(short = 'X', long = "bound", default_value_t = DEFAULT_BOUND)]
        x: u64,
    },
    /// Splitting-pattern frequencies of a polynomial.
    Pattern {
        #[arg(long)]
        poly: String,
        #[arg(short = 'X', long = "bound", default_value_t = DEFAULT_BOUND)]
        x: u64,
    },
    /// Partial Dirichlet sum over a set of primes.
    Dirichlet {
        /// `all`, `none`, `r mod n` or `split D`.
        #[arg(long, default_value = "all", allow_hyphen_values = true)]
        select: String,
        #[arg(short, default_value_t = 1.1)]
        s: f64,
        #[arg(short = 'X', long = "bound", default_value_t = DEFAULT_BOUND)]
        x: u64,
    },
    /// Ideal counts per class divided by X.
    Slope {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(short = 'X', long = "bound", default_value_t = DEFAULT_BOUND)]
        x: u64,
    },
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    /// `all` or one of the check names.
    name: String,
    #[arg(long, value_enum, default_value_t = ProfileArg::Quick)]
    profile: ProfileArg,
    /// Main bound of a single check.
    #[arg(long)]
    limit: Option<u64>,
    /// Replacement class polynomial for the x2-14y2 check.
    #[arg(long)]
    poly: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ProfileArg {
    Quick,
    Full,
}

impl From<ProfileArg> for Profile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Quick => Profile::Quick,
            ProfileArg::Full => Profile::Full,
        }
    }
}

/// Settings after merging the config file with the flags.
#[derive(Debug, Clone)]
struct Settings {
    format: Format,
    seed: u64,
    no_timing: bool,
    density: DensityConfig,
}

fn load_settings(g: &GlobalArgs) -> Result<Settings> {
    let mut s = Settings { format: Format::Json, seed: DEFAULT_SEED, no_timing: false, density: DensityConfig::default() };
    if let Some(path) = &g.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        let table: toml::Table = text.parse().map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        for (key, value) in &table {
            let bad = || Error::Parse(format!("config key {key}: unexpected value {value}"));
            let uint = || value.as_integer().filter(|&v| v >= 0).ok_or_else(bad);
            match key.as_str() {
                "format" => {
                    s.format = Format::from_str(value.as_str().ok_or_else(bad)?, true).map_err(|_| bad())?
                }
                "seed" => s.seed = uint()? as u64,
                "no_timing" => s.no_timing = value.as_bool().ok_or_else(bad)?,
                "workers" => s.density.workers = (uint()? as usize).max(1),
                "cap" => s.density.cap = uint()? as u64,
                "segment" => s.density.segment = (uint()? as usize).max(1),
                _ => return Err(Error::Parse(format!("unknown config key {key}"))),
            }
        }
    }
    if let Some(f) = g.format {
        s.format = f;
    }
    if let Some(seed) = g.seed {
        s.seed = seed;
    }
    s.no_timing |= g.no_timing;
    if let Some(w) = g.workers {
        s.density.workers = w.max(1);
    }
    if let Some(c) = g.cap {
        s.density.cap = c;
    }
    if let Some(seg) = g.segment {
        s.density.segment = seg.max(1);
    }
    Ok(s)
}

/// Exit code and standard output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// Parses `args` (program name first) and runs the command. Usage text and
/// progress go to `stderr`.
pub fn run<I, T>(args: I, stderr: &mut dyn Write) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                Outcome { code: 2, stdout: String::new() }
            } else {
                Outcome { code: 0, stdout: text }
            };
        }
    };
    let (name, inputs) = describe(&cli.command);
    let settings = match load_settings(&cli.global) {
        Ok(s) => s,
        Err(e) => return error_outcome(&name, &inputs, &e),
    };
    let start = Instant::now();
    match execute(&cli.command, &settings, stderr) {
        Ok((result, checks)) => {
            let mut inputs = inputs;
            inputs.insert("seed".into(), json!(settings.seed));
            let elapsed_ms = if settings.no_timing { 0 } else { start.elapsed().as_millis() as u64 };
            let report = RunReport { command: name, inputs, result, checks, elapsed_ms };
            let stdout = match settings.format {
                Format::Json => to_json(&report),
                Format::Tsv => to_tsv(&report),
            };
            Outcome { code: if report.passed() { 0 } else { 1 }, stdout }
        }
        Err(e) => error_outcome(&name, &inputs, &e),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn error_outcome(command: &str, inputs: &BTreeMap<String, Value>, e: &Error) -> Outcome {
    let body = json!({
        "command": command,
        "inputs": inputs,
        "error": { "kind": e.kind(), "message": e.to_string() },
    });
    Outcome { code: 1, stdout: to_json(&body) }
}

fn describe(cmd: &Command) -> (String, BTreeMap<String, Value>) {
    fn split(top: &str, v: Value) -> (String, BTreeMap<String, Value>) {
        let mut map: BTreeMap<String, Value> = match v {
            Value::Object(m) => m.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        let name = match map.remove("op") {
            Some(Value::String(op)) => format!("{top} {op}"),
            _ => top.to_string(),
        };
        map.retain(|_, v| !v.is_null());
        (name, map)
    }
    match cmd {
        Command::Arith(c) => split("arith", value(c)),
        Command::Rayclass(c) => split("rayclass", value(c)),
        Command::Artin(c) => split("artin", value(c)),
        Command::Padic(c) => split("padic", value(c)),
        Command::Cohom(CohomCmd::Herbrand(a)) => split("cohom herbrand", value(a)),
        Command::Forms(c) => split("forms", value(c)),
        Command::Density(c) => split("density", value(c)),
        Command::Verify(a) => split("verify", value(a)),
    }
}

type Outputs = (Value, Vec<Check>);

fn value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn execute(cmd: &Command, s: &Settings, stderr: &mut dyn Write) -> Result<Outputs> {
    match cmd {
        Command::Arith(c) => arith(c),
        Command::Rayclass(a) => rayclass(a),
        Command::Artin(c) => artin(c, s),
        Command::Padic(c) => padic(c),
        Command::Cohom(CohomCmd::Herbrand(a)) => herbrand(a, s),
        Command::Forms(c) => forms(c),
        Command::Density(c) => density(c, s),
        Command::Verify(a) => run_verify(a, s, stderr),
    }
}

fn rational(s: &str) -> Result<BigRational> {
    s.trim().parse::<BigRational>().map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))
}

fn arith(c: &ArithCmd) -> Result<Outputs> {
    Ok(match c {
        ArithCmd::Factor { n } => {
            let f = factorize(*n)?;
            let ok = f.value() == *n as i128;
            (json!({ "n": n, "factorization": f.to_string(), "factors": f.factors, "sign": f.sign }), vec![Check::new("product", ok, "factors multiply back to n")])
        }
        ArithCmd::Kronecker { a, n } => (json!({ "symbol": kronecker_symbol(*a, *n)? }), vec![]),
        ArithCmd::Sqrt { a, p } => {
            let r = sqrt_mod_p(*a, *p)?;
            let checks = match r {
                Some(r) => {
                    let ok = (r as u128 * r as u128 % *p as u128) as i128 == (*a as i128).rem_euclid(*p as i128);
                    vec![Check::new("square", ok, format!("{r}^2 = {a} mod {p}"))]
                }
                None => vec![],
            };
            (json!({ "root": r }), checks)
        }
        ArithCmd::Order { a, n } => (json!({ "order": multiplicative_order(*a, *n)? }), vec![]),
        ArithCmd::Crt { congruences } => {
            let parsed = congruences
                .iter()
                .map(|c| {
                    let (r, m) = c.split_once(':').ok_or_else(|| Error::Parse(format!("expected r:m, got {c:?}")))?;
                    let r: i64 = r.trim().parse().map_err(|_| Error::Parse(format!("bad residue in {c:?}")))?;
                    let m: u64 = m.trim().parse().map_err(|_| Error::Parse(format!("bad modulus in {c:?}")))?;
                    Ok((r, m))
                })
                .collect::<Result<Vec<_>>>()?;
            let x = crt(&parsed)?;
            let ok = parsed.iter().all(|&(r, m)| (x.value as i128 - r as i128).rem_euclid(m as i128) == 0);
            (value(&x), vec![Check::new("congruences", ok, "solution satisfies every congruence")])
        }
        ArithCmd::Phi { n } => (json!({ "phi": euler_phi(*n) }), vec![]),
        ArithCmd::Unit { d } => {
            let eps = fundamental_unit(*d)?;
            let norm = eps.norm();
            let ok = norm == BigRational::one() || norm == -BigRational::one();
            (
                json!({ "unit": eps.to_string(), "x": eps.x().to_string(), "y": eps.y().to_string(), "norm": norm.to_string() }),
                vec![Check::new("unit norm", ok, format!("N(eps) = {norm}"))],
            )
        }
    })
}

/// Discriminants whose ray class numbers have an independent orbit count.
const BRUTE_FORCE_FIELDS: [i64; 7] = [-3, -4, -7, -8, 5, 8, 13];

fn rayclass(a: &RayclassArgs) -> Result<Outputs> {
    let field = a.field.trim();
    if field.eq_ignore_ascii_case("q") {
        if a.real_places.is_some() {
            return Err(Error::InvalidArgument("over Q write the real place as `inf` in the modulus".into()));
        }
        let m = Modulus::parse_rational(&a.modulus)?;
        let report = ray_class_number(&m, None)?;
        let mut checks = Vec::new();
        if m.norm() <= 2000 {
            let brute = ray_class_count_q_brute(&m)? as u64;
            checks.push(Check::new("class enumeration", brute == report.h_m, format!("enumerated {brute} classes")));
        }
        return Ok((value(&report), checks));
    }
    let d: i64 = field.parse().map_err(|_| Error::Parse(format!("field must be `q` or a discriminant, got {field:?}")))?;
    let order = QuadOrder::new(d)?;
    let parts: Vec<i64> = a
        .modulus
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("modulus {:?}", a.modulus))))
        .collect::<Result<_>>()?;
    let ideal = match parts[..] {
        [n] => QuadIdeal::rational(order, n)?,
        [x, y, z] => QuadIdeal::new(order, x, y, z)?,
        _ => return Err(Error::Parse(format!("modulus {:?}: expected n or a,b,c", a.modulus))),
    };
    let places: Vec<u8> = match &a.real_places {
        None => vec![],
        Some(s) => s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("real places {s:?}"))))
            .collect::<Result<_>>()?,
    };
    let m = Modulus::quadratic(ideal, &places)?;
    let report = ray_class_number(&m, a.class_number)?;
    let mut checks = Vec::new();
    if BRUTE_FORCE_FIELDS.contains(&order.disc()) && m.norm() <= 500 {
        let brute = ray_class_count_quadratic_brute(&m)?;
        checks.push(Check::new("orbit count", brute == report.h_m, format!("counted {brute} classes")));
    }
    Ok((value(&report), checks))
}

fn artin(c: &ArtinCmd, s: &Settings) -> Result<Outputs> {
    Ok(match c {
        ArtinCmd::Frobenius { p, m } => {
            let t = decomposition_type_cyclotomic(*p, *m)?;
            let frob = if *m % p == 0 { None } else { Some(frobenius_cyclotomic(*p, *m)?) };
            let phi = euler_phi(*m);
            (
                json!({ "frobenius": frob, "decomposition": t }),
                vec![Check::new("efr", t.degree() == phi, format!("e f r = {} = phi({m}) = {phi}", t.degree()))],
            )
        }
        ArtinCmd::Pattern { poly, p } => {
            let f: IntPoly = poly.parse()?;
            let pat = splitting_pattern(&f, *p)?;
            let mut checks = Vec::new();
            if f.degree() <= 4 {
                if let Ok(naive) = splitting_pattern_naive(&f, *p) {
                    checks.push(Check::new("root search", naive == pat, format!("root search gives {naive}")));
                }
            }
            (json!({ "pattern": pat.to_string(), "degrees": pat.degrees }), checks)
        }
        ArtinCmd::Map { x, m } => (value(&artin_map_q(&rational(x)?, *m)?), vec![]),
        ArtinCmd::Kernel { m, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            let r = verify_artin_kernel(*m, *samples, &mut rng)?;
            let detail = format!("{} counterexamples, {} of {} controls hit", r.counterexamples.len(), r.control_hits, r.controls);
            let ok = r.passed();
            (value(&r), vec![Check::new("kernel", ok, detail)])
        }
        ArtinCmd::Decompose { p, d } => {
            let dec = decompose_prime(*p, *d)?;
            let order = QuadOrder::new(*d)?;
            let sum: u64 = dec.primes.iter().map(|(q, e)| *e as u64 * q.norm().ilog(*p) as u64).sum();
            let product_ok = dec.product()? == QuadIdeal::rational(order, *p as i64)?;
            (
                value(&dec),
                vec![
                    Check::new("sum e f", sum == 2, format!("sum e_i f_i = {sum}")),
                    Check::new("product", product_ok, "prod P^e = (p)"),
                ],
            )
        }
    })
}

fn padic(c: &PadicCmd) -> Result<Outputs> {
    Ok(match c {
        PadicCmd::Hilbert { a, b, place } => {
            let place: Place = place.parse()?;
            (json!({ "symbol": hilbert_symbol(&rational(a)?, &rational(b)?, place)?, "place": place }), vec![])
        }
        PadicCmd::Product { a, b } => {
            let r = hilbert_product(&rational(a)?, &rational(b)?)?;
            let ok = r.product == 1;
            (value(&r), vec![Check::new("product formula", ok, format!("product {}", r.product))])
        }
        PadicCmd::Exp { p, x, prec } => {
            let x = PadicNumber::from_rational(&rational(x)?, *p, *prec)?;
            let e = padic_exp(&x)?;
            let back = padic_log(&e)?;
            (
                json!({ "input": x, "exp": e, "display": e.to_string() }),
                vec![Check::new("log(exp x) = x", back.agrees_with(&x), back.to_string())],
            )
        }
        PadicCmd::Log { p, x, prec } => {
            let u = PadicNumber::from_rational(&rational(x)?, *p, *prec)?;
            let l = padic_log(&u)?;
            let mut checks = Vec::new();
            // exp only converges on the image of the principal units
            if let Ok(back) = padic_exp(&l) {
                checks.push(Check::new("exp(log u) = u", back.agrees_with(&u), back.to_string()));
            }
            (json!({ "input": u, "log": l, "display": l.to_string() }), checks)
        }
        PadicCmd::Sqrt { p, x, prec } => {
            let a = PadicNumber::from_rational(&rational(x)?, *p, *prec)?;
            let r = hensel_sqrt(&a, *prec)?;
            let checks = match &r {
                Some(r) => vec![Check::new("square", r.mul(r)?.agrees_with(&a), "r^2 = x")],
                None => vec![],
            };
            (json!({ "input": a, "root": r, "display": r.as_ref().map(|r| r.to_string()) }), checks)
        }
    })
}

fn parse_matrix(s: &str, what: &str) -> Result<Vec<Vec<i64>>> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn herbrand(a: &HerbrandArgs, s: &Settings) -> Result<Outputs> {
    let mut checks = Vec::new();
    let module = if let Some(nd) = &a.perm {
        let (n, d) = (nd[0], nd[1]);
        let m = build_permutation_module(n, d)?;
        let q = herbrand_components(&m)?.q;
        let expected = BigRational::new(d.into(), n.into());
        checks.push(Check::new("q = d/n", q.as_ref() == Some(&expected), format!("expected {expected}")));
        m
    } else if let Some(max_order) = a.random {
        let n = a.n.ok_or_else(|| Error::InvalidArgument("--random needs -n".into()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        random_finite_module(n, max_order, &mut rng)?
    } else {
        let n = a.n.ok_or_else(|| Error::InvalidArgument("give --perm, --random, or -n with --action".into()))?;
        let action = parse_matrix(a.action.as_deref().ok_or_else(|| Error::InvalidArgument("--action is required".into()))?, "action")?;
        let relations = match &a.relations {
            Some(r) => parse_matrix(r, "relations")?,
            None => vec![],
        };
        CyclicModule::from_i64(n, &relations, &action)?
    };
    let r = herbrand_components(&module)?;
    if let GroupOrder::Finite(order) = module.order() {
        checks.push(Check::new("finite module", r.q == Some(BigRational::one()), format!("|A| = {order}")));
        if order <= BigInt::from(20_000) {
            let (h0, h1) = herbrand_by_enumeration(&module)?;
            let agree = r.h0 == GroupOrder::Finite(h0.into()) && r.h1 == GroupOrder::Finite(h1.into());
            checks.push(Check::new("enumeration", agree, format!("|H0| = {h0}, |H1| = {h1} by listing elements")));
        }
    }
    let result = json!({
        "rank": module.rank(),
        "relations": module.relations().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "herbrand": r,
    });
    Ok((result, checks))
}

fn forms(c: &FormsCmd) -> Result<Outputs> {
    Ok(match c {
        FormsCmd::Represent { p, d } => {
            let w = represent_prime(*p, *d)?;
            let checks = match &w {
                Some(w) => {
                    let q = crate::forms::principal_form(*d)?;
                    let ok = q.eval(w.x as i128, w.y as i128) == *p as i128;
                    vec![Check::new("witness", ok, format!("Q({}, {}) = {}", w.x, w.y, q.eval(w.x as i128, w.y as i128)))]
                }
                None => vec![],
            };
            (json!({ "represented": w.is_some(), "witness": w }), checks)
        }
        FormsCmd::Classes { d } => {
            let (h, forms) = class_number_neg(*d)?;
            let ok = forms.iter().all(|f| f.is_reduced() && f.disc() == *d as i128);
            (
                json!({ "class_number": h, "forms": forms.iter().map(|f| f.to_string()).collect::<Vec<_>>() }),
                vec![Check::new("reduced", ok, "every listed form is reduced of discriminant d")],
            )
        }
        FormsCmd::Criterion { p, d, poly } => {
            let g = match poly {
                Some(s) => Some(s.parse::<IntPoly>()?),
                None => known_class_polynomial(*d),
            };
            let r = criterion_check(*p, *d, g.as_ref())?;
            let ok = r.agree;
            (value(&r), vec![Check::new("criterion", ok, format!("represented = {}, criterion = {}", r.represented, r.criterion))])
        }
        FormsCmd::Reduce { a, b, c } => {
            let f = BinaryQuadraticForm::new(*a, *b, *c);
            let r = reduce_form(&f)?;
            (json!({ "input": f.to_string(), "reduced": r.to_string(), "disc": r.disc().to_string() }), vec![])
        }
    })
}

fn bookkeeping(r: &FrequencyReport) -> Check {
    let sum: u64 = r.classes.iter().map(|c| c.count).sum();
    Check::new("bookkeeping", sum == r.included, format!("{} included, {} excluded", r.included, r.excluded.len()))
}

fn parse_selector(s: &str) -> Result<PrimeSelector> {
    let t = s.trim();
    let bad = || Error::Parse(format!("selector {s:?}: expected all, none, `r mod n` or `split D`"));
    match t {
        "all" => return Ok(PrimeSelector::All),
        "none" | "empty" => return Ok(PrimeSelector::Empty),
        _ => {}
    }
    if let Some(d) = t.strip_prefix("split") {
        return Ok(PrimeSelector::SplitIn { disc: d.trim().parse().map_err(|_| bad())? });
    }
    let (r, n) = t.split_once("mod").ok_or_else(bad)?;
    let residue: u64 = r.trim().parse().map_err(|_| bad())?;
    let modulus: u64 = n.trim().parse().map_err(|_| bad())?;
    if modulus == 0 {
        return Err(bad());
    }
    Ok(PrimeSelector::Residue { modulus, residue })
}

fn density(c: &DensityCmd, s: &Settings) -> Result<Outputs> {
    let cfg = &s.density;
    Ok(match c {
        DensityCmd::Progression { n, x } => {
            let r = progression_density(*n, *x, cfg)?;
            let check = bookkeeping(&r);
            (value(&r), vec![check])
        }
        DensityCmd::Split { disc, x } => {
            let r = quadratic_split_density(*disc, *x, cfg)?;
            let check = bookkeeping(&r);
            (value(&r), vec![check])
        }
        DensityCmd::Pattern { poly, x } => {
            let f: IntPoly = poly.parse()?;
            let r = poly_pattern_density(&f, *x, cfg)?;
            let check = bookkeeping(&r);
            (value(&r), vec![check])
        }
        DensityCmd::Dirichlet { select, s: exponent, x } => {
            let r = dirichlet_partial_sum(&parse_selector(select)?, *exponent, *x, cfg)?;
            (value(&r), vec![])
        }
        DensityCmd::Slope { disc, x } => {
            let cap = cfg.cap.min(DEFAULT_ENUMERATION_CAP);
            (value(&ideal_count_slope(*disc, *x, cap)?), vec![])
        }
    })
}

fn run_verify(a: &VerifyArgs, s: &Settings, stderr: &mut dyn Write) -> Result<Outputs> {
    let profile: Profile = a.profile.into();
    let names: Vec<&str> = if a.name == "all" {
        if a.limit.is_some() || a.poly.is_some() {
            return Err(Error::InvalidArgument("--limit and --poly apply to a single check".into()));
        }
        verify::CHECK_NAMES.to_vec()
    } else {
        vec![a.name.as_str()]
    };
    let mut results = Vec::new();
    for name in names {
        let _ = writeln!(stderr, "running {name}");
        let mut r = match (name, &a.poly) {
            ("x2-14y2", Some(poly)) => {
                let g: IntPoly = poly.parse()?;
                let limit = a.limit.unwrap_or(match profile {
                    Profile::Quick => 10_000,
                    Profile::Full => 100_000,
                });
                verify::check_x2_14y2(limit, &g)
            }
            (_, Some(_)) => return Err(Error::InvalidArgument("--poly applies to the x2-14y2 check only".into())),
            _ => verify::run_named(name, profile, s.seed, a.limit, &s.density)?,
        };
        if s.no_timing {
            r.elapsed_ms = 0;
        }
        results.push(r);
    }
    let checks = results.iter().map(|r| Check::new(&r.name, r.passed, r.detail.clone())).collect();
    Ok((value(&results), checks))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::Array(items) => out.push((prefix.to_string(), items.iter().map(scalar).collect::<Vec<_>>().join(","))),
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn tsv_cell(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

/// TSV: `key value` lines for scalars, then one table per array of flat
/// records (the per-class rows of density reports), then the checks.
fn to_tsv(r: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("command\t{}\n", tsv_cell(&r.command)));
    for (k, v) in &r.inputs {
        out.push_str(&format!("input.{k}\t{}\n", tsv_cell(&scalar(v))));
    }
    let mut tables = Vec::new();
    let mut rest = Vec::new();
    let root = match &r.result {
        Value::Array(_) => json!({ "rows": r.result }),
        other => other.clone(),
    };
    if let Value::Object(m) = &root {
        for (k, v) in m {
            let flat_records = matches!(v, Value::Array(items) if !items.is_empty()
                && items.iter().all(|x| x.as_object().is_some_and(|o| o.values().all(|y| !y.is_object()))));
            if flat_records {
                tables.push((k.clone(), v.clone()));
            } else {
                flatten(k, v, &mut rest);
            }
        }
    } else {
        flatten("result", &root, &mut rest);
    }
    for (k, v) in rest {
        out.push_str(&format!("{}\t{}\n", tsv_cell(&k), tsv_cell(&v)));
    }
    for (name, rows) in tables {
        let rows = rows.as_array().expect("table rows");
        let cols: Vec<String> = rows[0].as_object().expect("record").keys().cloned().collect();
        out.push_str(&format!("\n# {name}\n{}\n", cols.join("\t")));
        for row in rows {
            let cells: Vec<String> = cols.iter().map(|c| tsv_cell(&row.get(c).map(scalar).unwrap_or_default())).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
    }
    if !r.checks.is_empty() {
        out.push_str("\n# checks\nname\tpassed\tdetail\n");
        for c in &r.checks {
            out.push_str(&format!("{}\t{}\t{}\n", tsv_cell(&c.name), c.passed, tsv_cell(&c.detail)));
        }
    }
    out.push_str(&format!("elapsed_ms\t{}\n", r.elapsed_ms));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (Outcome, String) {
        let mut err = Vec::new();
        let mut argv = vec!["classfield"];
        argv.extend_from_slice(args);
        let out = run(argv, &mut err);
        (out, String::from_utf8(err).unwrap())
    }

    fn report(args: &[&str]) -> RunReport {
        let (out, err) = call(args);
        assert_eq!(out.code, 0, "{args:?}: {}{err}", out.stdout);
        serde_json::from_str(&out.stdout).unwrap()
    }

    #[test]
    fn documented_examples() {
        let r = report(&["rayclass", "--field", "q", "--modulus", "5*inf"]);
        assert_eq!(r.result["h_m"], 4);
        let r = report(&["padic", "product", "-a", "2", "-b", "3"]);
        assert_eq!(r.result["product"], 1);
        let r = report(&["verify", "reciprocity", "--limit", "500"]);
        assert!(r.checks.iter().all(|c| c.passed));
    }

    #[test]
    fn negative_arguments() {
        let r = report(&["arith", "kronecker", "-56", "3"]);
        assert_eq!(r.result["symbol"], 1);
        let r = report(&["artin", "decompose", "-p", "7", "-d", "-56"]);
        assert_eq!(r.checks.len(), 2);
        let r = report(&["padic", "hilbert", "-a", "-1", "-b", "-1", "--place", "inf"]);
        assert_eq!(r.result["symbol"], -1);
        let r = report(&["rayclass", "--field", "-4", "--modulus", "5"]);
        assert_eq!(r.checks[0].name, "orbit count");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["frobnicate"]).0.code, 2);
        assert_eq!(call(&["arith", "phi", "--bogus"]).0.code, 2);
        let (out, _) = call(&["arith", "sqrt", "2", "9"]);
        assert_eq!(out.code, 1);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["error"]["kind"], "not_prime");
        assert_eq!(call(&["--help"]).0.code, 0);
    }

    #[test]
    fn tsv_tables() {
        let (out, _) = call(&["density", "progression", "-n", "4", "-X", "10000", "--format", "tsv", "--no-timing"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("# classes\nlabel\tcount\tfrequency\texpected\n1 mod 4\t609\t"));
        assert!(out.stdout.ends_with("elapsed_ms\t0\n"));
    }

    #[test]
    fn config_and_flags() {
        let dir = std::env::temp_dir().join(format!("classfield-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "seed = 7\nformat = \"tsv\"\nno_timing = true\n").unwrap();
        let p = path.to_str().unwrap();
        let (out, _) = call(&["arith", "phi", "12", "--config", p]);
        assert!(out.stdout.starts_with("command\tarith phi\n"));
        assert!(out.stdout.contains("input.seed\t7\n"));
        let (out, _) = call(&["arith", "phi", "12", "--config", p, "--format", "json", "--seed", "9"]);
        let r: RunReport = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(r.inputs["seed"], 9);
        assert_eq!(r.elapsed_ms, 0);
        std::fs::write(&path, "colour = 1\n").unwrap();
        assert_eq!(call(&["arith", "phi", "12", "--config", p]).0.code, 1);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn selectors() {
        assert_eq!(parse_selector("3 mod 4").unwrap(), PrimeSelector::Residue { modulus: 4, residue: 3 });
        assert_eq!(parse_selector("split -4").unwrap(), PrimeSelector::SplitIn { disc: -4 });
        assert!(parse_selector("3 mod 0").is_err());
        assert!(parse_selector("some").is_err());
    }
}
