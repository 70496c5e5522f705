//! Command-line interface over the `budcalc` library.
//!
//! Every subcommand maps onto one library operation and emits a
//! deterministic JSON report on standard output (keys sorted, terms in
//! graded order, seeds explicit). Exit codes: 0 for success or a verified
//! property, 1 for a mathematical falsification (with the counterexample in
//! the report), 2 for invalid input.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use budcalc::cocycle::{classify_cocycles, groupoid_invariants, universal_cocycle, SymCocycle};
use budcalc::fgl::{FormalGroupBud, HeightResult, StrictIso};
use budcalc::gamma::{
    check_fstar_homomorphism, check_gammaring_axioms, db_mul, fstar, height_factorization_check,
    homogeneous_decomposition, DBElement, HZElement, PointedSet,
};
use budcalc::homology::{
    build_ctilde, comult_binomial_check, dk_factorization_witness, smith_normal_form,
    AbelianGroupIso, IntMatrix,
};
use budcalc::ring::RingDescriptor;
use budcalc::series::TruncatedSeries;
use budcalc::Error;

/// Version of the JSON report schema emitted on standard output.
pub const SCHEMA_VERSION: &str = "1";

const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "budcalc",
    version = concat!(env!("CARGO_PKG_VERSION"), " (schema ", "1", ")"),
    about = "Exact calculus of formal group buds, symmetric 2-cocycles, Gamma-rings, and integer homology"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Coefficient ring: "z", "q", or "zmod:N"
    #[arg(long, global = true)]
    pub ring: Option<String>,

    /// Truncation precision (bud order)
    #[arg(long, global = true)]
    pub precision: Option<u32>,

    /// Seed for randomized harnesses
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,

    /// Enumeration budget (overrides the BUDCALC_BUDGET environment
    /// variable; default 10^7)
    #[arg(long, global = true)]
    pub budget: Option<u128>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Formal group law buds
    Fgl {
        #[command(subcommand)]
        command: FglCommand,
    },
    /// Symmetric 2-cocycles
    Cocycle {
        #[command(subcommand)]
        command: CocycleCommand,
    },
    /// Gamma-ring values and the F* construction
    Gamma {
        #[command(subcommand)]
        command: GammaCommand,
    },
    /// Integer chain-complex homology
    Homology {
        #[command(subcommand)]
        command: HomologyCommand,
    },
    /// Polynomial functor identities
    Functors {
        #[command(subcommand)]
        command: FunctorsCommand,
    },
}

#[derive(Args, Debug)]
pub struct BudSource {
    /// Built-in law: "additive" or "multiplicative" (needs --ring and
    /// --precision)
    #[arg(long)]
    pub fgl: Option<String>,

    /// JSON file holding a 2-variable series
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum FglCommand {
    /// Check the three formal-group-law axioms of a series
    Validate {
        #[command(flatten)]
        source: BudSource,
    },
    /// The n-series `[n](x)`
    Nseries {
        #[command(flatten)]
        source: BudSource,
        #[arg(long)]
        n: i64,
    },
    /// Height over a prime-characteristic ring
    Height {
        #[command(flatten)]
        source: BudSource,
        /// Inspect `[p]` up to this degree (also the bud order for built-ins)
        #[arg(long)]
        bound: u32,
    },
    /// The logarithm: the strict isomorphism to the additive law
    Log {
        #[command(flatten)]
        source: BudSource,
    },
    /// Conjugate by a strict isomorphism
    Conjugate {
        #[command(flatten)]
        source: BudSource,
        /// JSON file holding a univariate series with leading term x
        #[arg(long)]
        iso: PathBuf,
    },
    /// Add a degree-k symmetric 2-cocycle to an order-k bud
    AddCocycle {
        #[command(flatten)]
        source: BudSource,
        /// JSON file holding the cocycle as a homogeneous series
        #[arg(long)]
        cocycle: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum CocycleCommand {
    /// Lazard's universal cocycle c_k over a ring
    Universal {
        #[arg(long)]
        k: u32,
    },
    /// Brute-force classification over a finite ring
    Classify {
        #[arg(long)]
        k: u32,
    },
    /// Groupoid invariants (component count and stabilizer order)
    Invariants {
        #[arg(long)]
        k: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum GammaCommand {
    /// Run the seeded Gamma-ring axiom harness (and, with --fgl, the F*
    /// homomorphism harness)
    Check {
        /// Largest pointed set size to draw
        #[arg(long, default_value_t = 3)]
        max_set: usize,
        /// Number of random trials
        #[arg(long, default_value_t = 100)]
        trials: u32,
        /// Also check F* for this built-in law
        #[arg(long)]
        fgl: Option<String>,
    },
    /// Apply F* to an HZ element
    Fstar {
        #[command(flatten)]
        source: BudSource,
        /// Size of the pointed set
        #[arg(long)]
        set: usize,
        /// Comma-separated integer coefficients
        #[arg(long)]
        element: String,
    },
    /// Multiply two DB elements (series JSON files)
    Mul {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// Split a DB element into symmetric-power slots
    Decompose {
        #[arg(long)]
        input: PathBuf,
    },
    /// Check the height factorization F*(p.x) = 0 modulo degree p^h
    HeightFactor {
        #[command(flatten)]
        source: BudSource,
        #[arg(long)]
        h: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum HomologyCommand {
    /// Homology of the explicit complex computing the stable derived
    /// functors of the exterior square
    Ctilde {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        top: usize,
    },
    /// Smith normal form of an integer matrix (JSON array of rows)
    Snf {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum FunctorsCommand {
    /// Verify that multiplication . comultiplication = C(k, i) . identity
    BinomCheck {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        rank: usize,
    },
    /// Integer witness for d_k as a combination of binomial coefficients
    DkWitness {
        #[arg(long)]
        k: u32,
    },
}

/// A finished invocation: the report plus whether a mathematical check was
/// falsified (exit 1) or everything verified (exit 0).
pub struct Outcome {
    pub report: Value,
    pub falsified: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, falsified: false }
    }

    pub fn exit_code(&self) -> i32 {
        if self.falsified {
            1
        } else {
            0
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Fgl { command } => run_fgl(cli, command),
        Command::Cocycle { command } => run_cocycle(cli, command),
        Command::Gamma { command } => run_gamma(cli, command),
        Command::Homology { command } => run_homology(command),
        Command::Functors { command } => run_functors(command),
    }
}

fn ring_of(cli: &Cli) -> Result<RingDescriptor, Error> {
    let name = cli
        .ring
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("--ring is required".into()))?;
    RingDescriptor::parse(name)
}

fn precision_of(cli: &Cli) -> Result<u32, Error> {
    let p = cli
        .precision
        .ok_or_else(|| Error::InvalidArgument("--precision is required".into()))?;
    if p < 1 {
        return Err(Error::InvalidArgument("--precision must be at least 1".into()));
    }
    Ok(p)
}

fn budget_of(cli: &Cli) -> u128 {
    cli.budget
        .or_else(|| std::env::var("BUDCALC_BUDGET").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_BUDGET)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidArgument(format!("cannot parse {}: {e}", path.display())))
}

fn builtin_bud(name: &str, ring: RingDescriptor, order: u32) -> Result<FormalGroupBud, Error> {
    match name {
        "additive" => Ok(FormalGroupBud::additive(ring, order)),
        "multiplicative" => Ok(FormalGroupBud::multiplicative(ring, order)),
        other => Err(Error::InvalidArgument(format!(
            "unknown formal group law {other:?}; expected \"additive\" or \"multiplicative\""
        ))),
    }
}

fn resolve_bud(cli: &Cli, source: &BudSource, precision: Option<u32>) -> Result<FormalGroupBud, Error> {
    match (&source.fgl, &source.input) {
        (Some(_), Some(_)) => Err(Error::InvalidArgument(
            "--fgl and --input are mutually exclusive".into(),
        )),
        (Some(name), None) => {
            let order = match precision {
                Some(p) => p,
                None => precision_of(cli)?,
            };
            builtin_bud(name, ring_of(cli)?, order)
        }
        (None, Some(path)) => {
            let series: TruncatedSeries = read_json(path)?;
            FormalGroupBud::validate(series)
        }
        (None, None) => Err(Error::InvalidArgument(
            "one of --fgl or --input is required".into(),
        )),
    }
}

fn series_value(series: &TruncatedSeries) -> Value {
    serde_json::to_value(series).expect("series serialize to plain data")
}

fn group_value(group: &AbelianGroupIso) -> Value {
    json!({
        "free": group.free_rank,
        "torsion": group.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
    })
}

fn run_fgl(cli: &Cli, command: &FglCommand) -> Result<Outcome, Error> {
    match command {
        FglCommand::Validate { source } => {
            // validation failure is a mathematical finding, not bad input
            let series: TruncatedSeries = match &source.input {
                Some(path) => read_json(path)?,
                None => {
                    let bud = resolve_bud(cli, source, None)?;
                    bud.series().clone()
                }
            };
            match FormalGroupBud::validate(series) {
                Ok(bud) => Ok(Outcome::ok(json!({
                    "valid": true,
                    "ring": bud.ring().to_string(),
                    "order": bud.order(),
                }))),
                Err(Error::AxiomViolation { axiom, monomial }) => Ok(Outcome {
                    report: json!({
                        "valid": false,
                        "axiom": axiom,
                        "monomial": monomial,
                    }),
                    falsified: true,
                }),
                Err(other) => Err(other),
            }
        }
        FglCommand::Nseries { source, n } => {
            let bud = resolve_bud(cli, source, None)?;
            Ok(Outcome::ok(json!({
                "n": n,
                "series": series_value(&bud.n_series(*n)),
            })))
        }
        FglCommand::Height { source, bound } => {
            let bud = resolve_bud(cli, source, Some(*bound))?;
            let report = match bud.height(*bound)? {
                HeightResult::Finite { height, unit } => json!({
                    "height": height,
                    "unit": unit.to_string(),
                }),
                HeightResult::AtLeastBound(b) => json!({ "at_least_degree": b }),
            };
            Ok(Outcome::ok(report))
        }
        FglCommand::Log { source } => {
            let bud = resolve_bud(cli, source, None)?;
            let log = bud.logarithm()?;
            Ok(Outcome::ok(json!({ "logarithm": series_value(log.series()) })))
        }
        FglCommand::Conjugate { source, iso } => {
            let bud = resolve_bud(cli, source, None)?;
            let phi: StrictIso = read_json(iso)?;
            let conjugated = bud.conjugate(&phi)?;
            Ok(Outcome::ok(json!({ "conjugate": series_value(conjugated.series()) })))
        }
        FglCommand::AddCocycle { source, cocycle } => {
            let bud = resolve_bud(cli, source, None)?;
            let series: TruncatedSeries = read_json(cocycle)?;
            let c = SymCocycle::new(series)?;
            let sum = bud.add_cocycle(&c)?;
            Ok(Outcome::ok(json!({ "bud": series_value(sum.series()) })))
        }
    }
}

fn run_cocycle(cli: &Cli, command: &CocycleCommand) -> Result<Outcome, Error> {
    let ring = ring_of(cli)?;
    match command {
        CocycleCommand::Universal { k } => {
            let ck = universal_cocycle(ring, *k)?;
            Ok(Outcome::ok(json!({
                "k": k,
                "ring": ring.to_string(),
                "cocycle": series_value(ck.series()),
            })))
        }
        CocycleCommand::Classify { k } => {
            let cocycles = classify_cocycles(ring, *k, budget_of(cli))?;
            let invariants = groupoid_invariants(ring, *k, budget_of(cli))?;
            let vectors: Vec<Vec<String>> = cocycles
                .iter()
                .map(|c| c.coefficient_vector().iter().map(|e| e.to_string()).collect())
                .collect();
            Ok(Outcome::ok(json!({
                "k": k,
                "ring": ring.to_string(),
                "count": cocycles.len(),
                "cocycles": vectors,
                "pi0": invariants.pi0_size,
                "stabilizer": invariants.stabilizer_size,
            })))
        }
        CocycleCommand::Invariants { k } => {
            let invariants = groupoid_invariants(ring, *k, budget_of(cli))?;
            Ok(Outcome::ok(json!({
                "pi0": invariants.pi0_size,
                "stabilizer": invariants.stabilizer_size,
            })))
        }
    }
}

fn run_gamma(cli: &Cli, command: &GammaCommand) -> Result<Outcome, Error> {
    match command {
        GammaCommand::Check { max_set, trials, fgl } => {
            let ring = ring_of(cli)?;
            let precision = precision_of(cli)?;
            let gamma_report =
                check_gammaring_axioms(ring, precision, *max_set, *trials, cli.seed)?;
            let mut passed = gamma_report.passed();
            let mut report = Map::new();
            report.insert("seed".into(), json!(cli.seed));
            report.insert(
                "gamma_ring".into(),
                serde_json::to_value(&gamma_report).expect("report is plain data"),
            );
            if let Some(name) = fgl {
                let bud = builtin_bud(name, ring, precision)?;
                let fstar_report = check_fstar_homomorphism(&bud, *max_set, *trials, cli.seed)?;
                passed &= fstar_report.passed();
                report.insert(
                    "fstar".into(),
                    serde_json::to_value(&fstar_report).expect("report is plain data"),
                );
            }
            report.insert("passed".into(), json!(passed));
            Ok(Outcome { report: Value::Object(report), falsified: !passed })
        }
        GammaCommand::Fstar { source, set, element } => {
            let bud = resolve_bud(cli, source, None)?;
            let a = HZElement::parse_csv(element)?;
            if a.set() != PointedSet(*set) {
                return Err(Error::InvalidArgument(format!(
                    "--set {} disagrees with an element of {} coefficients",
                    set,
                    a.coefficients().len()
                )));
            }
            let image = fstar(&bud, &a)?;
            Ok(Outcome::ok(json!({
                "element": element,
                "image": series_value(image.series()),
            })))
        }
        GammaCommand::Mul { f, g } => {
            let f: DBElement = read_json(f)?;
            let g: DBElement = read_json(g)?;
            let product = db_mul(&f, &g)?;
            Ok(Outcome::ok(json!({
                "set": product.set().size(),
                "product": series_value(product.series()),
            })))
        }
        GammaCommand::Decompose { input } => {
            let f: DBElement = read_json(input)?;
            let slots = homogeneous_decomposition(&f)?;
            Ok(Outcome::ok(json!({
                "set": f.set().size(),
                "slots": serde_json::to_value(&slots).expect("slots are plain data"),
            })))
        }
        GammaCommand::HeightFactor { source, h } => {
            let bud = resolve_bud(cli, source, None)?;
            let vanishes = height_factorization_check(&bud, *h)?;
            Ok(Outcome::ok(json!({ "h": h, "vanishes": vanishes })))
        }
    }
}

fn run_homology(command: &HomologyCommand) -> Result<Outcome, Error> {
    match command {
        HomologyCommand::Ctilde { rank, top } => {
            let complex = build_ctilde(*rank, *top)?;
            let mut homology = Map::new();
            // degrees at the very top of a truncation are unreliable
            for i in 0..*top {
                homology.insert(i.to_string(), group_value(&complex.homology(i)?));
            }
            Ok(Outcome::ok(json!({
                "rank": rank,
                "top": top,
                "homology": Value::Object(homology),
            })))
        }
        HomologyCommand::Snf { input } => {
            let rows: Vec<Vec<i64>> = read_json(input)?;
            let matrix = IntMatrix::from_rows(rows)?;
            let snf = smith_normal_form(&matrix);
            Ok(Outcome::ok(json!({
                "d": snf.d.to_string_rows(),
                "u": snf.u.to_string_rows(),
                "v": snf.v.to_string_rows(),
            })))
        }
    }
}

fn run_functors(command: &FunctorsCommand) -> Result<Outcome, Error> {
    match command {
        FunctorsCommand::BinomCheck { k, i, rank } => {
            let check = comult_binomial_check(*k, *i, *rank)?;
            let report = json!({
                "k": k,
                "i": i,
                "rank": rank,
                "holds": check.holds,
                "factor": check.factor.to_string(),
                "counterexample": check.counterexample,
            });
            Ok(Outcome { report, falsified: !check.holds })
        }
        FunctorsCommand::DkWitness { k } => {
            let witness = dk_factorization_witness(*k)?;
            Ok(Outcome::ok(json!({
                "k": k,
                "dk": budcalc::cocycle::binomial_gcd(*k).to_string(),
                "lambda": witness.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            })))
        }
    }
}

/// A thin human-readable rendering of the JSON report.
pub fn render_text(value: &Value) -> String {
    let mut out = String::new();
    render_into(value, 0, &mut out);
    out
}

fn render_into(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (key, val) in map {
                if val.is_object() || is_nested_array(val) {
                    out.push_str(&format!("{pad}{key}:\n"));
                    render_into(val, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}{key}: {}\n", flat(val)));
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if item.is_object() || is_nested_array(item) {
                    out.push_str(&format!("{pad}-\n"));
                    render_into(item, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}- {}\n", flat(item)));
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", flat(other))),
    }
}

fn is_nested_array(value: &Value) -> bool {
    value
        .as_array()
        .is_some_and(|items| items.iter().any(|i| i.is_object() || i.is_array()))
}

fn flat(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(flat).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}
