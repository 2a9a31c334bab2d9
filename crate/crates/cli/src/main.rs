use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use mahler_core::calmness::{is_precalm, CalmnessOptions, StrategyRegistry, DEFAULT_HORIZON_CAP};
use mahler_core::field::{Field, FieldElem};
use mahler_core::operators::{
    kernel_orbit, regularity_search, MahlerEquation, RegularityOptions, RegularityVerdict, DEFAULT_DEGREE_BUDGET,
    DEFAULT_M_MAX,
};
use mahler_core::series::{
    guess_relation, kernel_rank_probe, solve_series, verify_counterexample, Truncation, DEFAULT_MARGIN,
};
use mahler_core::syntax::{equation_to_text, parse_equation, parse_scalar};
use mahler_core::{MahlerError, Result};

const SCHEMA: &str = "mahler-lab/1";

#[derive(Parser, Debug)]
#[command(name = "mahler-lab", version, about = "Exact analysis of k-Mahler equations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Work over Q(zeta_N).
    #[arg(long = "field-zeta", value_name = "N", default_value_t = 1, global = true)]
    field_zeta: u64,
    #[arg(long = "horizon-cap", value_name = "J", default_value_t = DEFAULT_HORIZON_CAP, global = true)]
    horizon_cap: usize,
    #[arg(long = "m-max", default_value_t = DEFAULT_M_MAX, global = true)]
    m_max: usize,
    #[arg(long = "degree-budget", default_value_t = DEFAULT_DEGREE_BUDGET, global = true)]
    degree_budget: usize,
    /// Truncation order of power series.
    #[arg(long, value_name = "T", global = true)]
    terms: Option<usize>,
    /// Depth of Cartier-orbit probes.
    #[arg(long, value_name = "D", global = true)]
    depth: Option<usize>,
    /// Declared radix; checked against the equation.
    #[arg(long, global = true)]
    k: Option<u64>,
    /// Include construction traces in the report.
    #[arg(long, global = true)]
    trace: bool,
    /// Human-readable rendering instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Args, Debug, Clone, Default)]
struct Input {
    /// Equation text, e.g. "f(z) = (1+z)*f(z^2)".
    #[arg(short = 'e', long = "expr")]
    expr: Option<String>,
    /// Equation JSON file, or "-" for stdin.
    #[arg(long = "json", value_name = "PATH")]
    json: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
enum Cmd {
    /// Precalmness, regularity and probes in one report.
    Analyze(Input),
    /// Decide precalmness; report a violation or a witness.
    Precalm {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "elimination")]
        strategy: String,
    },
    /// Construct a precalmness witness polynomial.
    Witness {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "elimination")]
        strategy: String,
    },
    /// Regularity criterion via special operators.
    Regularity(Input),
    /// Power-series solution.
    Series {
        #[command(flatten)]
        input: Input,
        /// Fixed coefficient, as INDEX=VALUE; repeatable.
        #[arg(long = "seed", value_name = "INDEX=VALUE")]
        seeds: Vec<String>,
    },
    /// Cartier-orbit pole growth and rank probe.
    Kernel(Input),
    /// Search for a low-order relation satisfied by a series.
    Guess {
        #[command(flatten)]
        input: Input,
        /// Comma-separated coefficients instead of solving an equation.
        #[arg(long)]
        series: Option<String>,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, default_value_t = 8)]
        degree: usize,
    },
    /// Check the order-two counterexample family at (k, alpha).
    VerifyExample {
        #[arg(long, default_value = "2")]
        alpha: String,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Analyze(_) => "analyze",
            Cmd::Precalm { .. } => "precalm",
            Cmd::Witness { .. } => "witness",
            Cmd::Regularity(_) => "regularity",
            Cmd::Series { .. } => "series",
            Cmd::Kernel(_) => "kernel",
            Cmd::Guess { .. } => "guess",
            Cmd::VerifyExample { .. } => "verify-example",
        }
    }

    fn input(&self) -> Option<&Input> {
        match self {
            Cmd::Analyze(i) | Cmd::Regularity(i) | Cmd::Kernel(i) => Some(i),
            Cmd::Precalm { input, .. } | Cmd::Witness { input, .. } | Cmd::Series { input, .. } => Some(input),
            Cmd::Guess { input, .. } => Some(input),
            Cmd::VerifyExample { .. } => None,
        }
    }
}

struct Outcome {
    report: Value,
    definite: bool,
}

impl Outcome {
    fn definite(report: Value) -> Outcome {
        Outcome { report, definite: true }
    }
}

struct Context<'a> {
    global: &'a Global,
    cmd: &'a Cmd,
}

impl Context<'_> {
    fn field(&self) -> Field {
        Field::new(self.global.field_zeta)
    }

    fn equation(&self) -> Result<MahlerEquation> {
        let input = self.cmd.input().cloned().unwrap_or_default();
        let eq = match (&input.expr, &input.json) {
            (Some(text), None) => parse_equation(text, &self.field(), self.global.k)?,
            (None, Some(path)) => {
                let mut raw = String::new();
                if path == "-" {
                    std::io::stdin().read_to_string(&mut raw).map_err(|e| MahlerError::Invalid(e.to_string()))?;
                } else {
                    raw = std::fs::read_to_string(path).map_err(|e| MahlerError::Invalid(format!("{path}: {e}")))?;
                }
                let v: Value = serde_json::from_str(&raw).map_err(|e| MahlerError::Invalid(e.to_string()))?;
                let eq = MahlerEquation::from_json(&v)?;
                if let Some(k) = self.global.k {
                    if k != eq.k {
                        return Err(MahlerError::RadixMismatch(k, eq.k));
                    }
                }
                eq
            }
            _ => return Err(MahlerError::Invalid("give exactly one of -e/--expr and --json".into())),
        };
        Ok(eq)
    }

    fn calm_options(&self, strategy: &str) -> CalmnessOptions {
        CalmnessOptions { horizon_cap: self.global.horizon_cap, strategy: strategy.to_string() }
    }

    fn regularity_options(&self) -> RegularityOptions {
        RegularityOptions {
            calm: self.calm_options("elimination"),
            m_max: self.global.m_max,
            degree_budget: self.global.degree_budget,
        }
    }
}

trait Command {
    fn name(&self) -> &'static str;
    fn run(&self, ctx: &Context) -> Result<Outcome>;
}

struct Registry {
    commands: BTreeMap<&'static str, Box<dyn Command>>,
}

impl Registry {
    fn with_defaults() -> Registry {
        let mut r = Registry { commands: BTreeMap::new() };
        r.register(Box::new(AnalyzeCmd));
        r.register(Box::new(PrecalmCmd { witness_only: false }));
        r.register(Box::new(PrecalmCmd { witness_only: true }));
        r.register(Box::new(RegularityCmd));
        r.register(Box::new(SeriesCmd));
        r.register(Box::new(KernelCmd));
        r.register(Box::new(GuessCmd));
        r.register(Box::new(VerifyCmd));
        r
    }

    fn register(&mut self, c: Box<dyn Command>) {
        self.commands.insert(c.name(), c);
    }

    fn get(&self, name: &str) -> Option<&dyn Command> {
        self.commands.get(name).map(|c| c.as_ref())
    }
}

fn equation_json(eq: &MahlerEquation) -> Value {
    json!({
        "k": eq.k,
        "order": eq.n(),
        "text": equation_to_text(eq),
        "json": eq.to_json(),
    })
}

fn precalm_report(ctx: &Context, eq: &MahlerEquation, strategy: &str) -> Result<Value> {
    if StrategyRegistry::with_defaults().get(strategy).is_none() {
        return Err(MahlerError::Invalid(format!("unknown strategy '{strategy}'")));
    }
    let v = is_precalm(&eq.coeffs, eq.k, &ctx.calm_options(strategy))?;
    let mut out = Map::new();
    out.insert("precalm".into(), json!(v.precalm));
    if let Some(viol) = &v.violation {
        out.insert("violation".into(), viol.to_json());
    }
    if let Some(h) = &v.witness {
        out.insert("witness".into(), mahler_core::syntax::wire::poly_to_json(h));
        out.insert("witness_text".into(), json!(h.to_string()));
        out.insert("witness_degree".into(), json!(h.deg()));
        out.insert("strategy".into(), json!(strategy));
    }
    if ctx.global.trace && v.precalm {
        out.insert("trace".into(), serde_json::to_value(&v.trace).unwrap_or(Value::Null));
    }
    Ok(Value::Object(out))
}

fn regularity_report(ctx: &Context, eq: &MahlerEquation) -> Result<(Value, bool)> {
    let (verdict, trace) = regularity_search(eq, &ctx.regularity_options())?;
    let mut v = verdict.to_json();
    if ctx.global.trace {
        v["trace"] = serde_json::to_value(&trace).unwrap_or(Value::Null);
    } else if !trace.notes.is_empty() {
        v["notes"] = json!(trace.notes);
    }
    Ok((v, !matches!(verdict, RegularityVerdict::Unknown { .. })))
}

fn probe_report(ctx: &Context, eq: &MahlerEquation) -> Result<Value> {
    let depth = ctx.global.depth.unwrap_or(4);
    let orbit = kernel_orbit(eq, depth)?;
    let k = eq.k as usize;
    let levels = depth + 1;
    let terms = ctx.global.terms.unwrap_or_else(|| DEFAULT_MARGIN * k.pow(levels as u32 - 1));
    let probe = match solve_series(eq, terms, &BTreeMap::new()) {
        Ok(s) => match kernel_rank_probe(&s.solution, eq.k, levels, DEFAULT_MARGIN) {
            Ok(p) => serde_json::to_value(&p).unwrap_or(Value::Null),
            Err(e) => json!({"error": e.to_string()}),
        },
        Err(e) => json!({"error": e.to_string()}),
    };
    Ok(json!({
        "kernel_orbit": serde_json::to_value(&orbit).unwrap_or(Value::Null),
        "rank_probe": probe,
    }))
}

struct AnalyzeCmd;

impl Command for AnalyzeCmd {
    fn name(&self) -> &'static str {
        "analyze"
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let eq = ctx.equation()?;
        let precalm = precalm_report(ctx, &eq, "elimination")?;
        let (regularity, definite) = regularity_report(ctx, &eq)?;
        let probes = probe_report(ctx, &eq)?;
        Ok(Outcome {
            report: json!({
                "equation": equation_json(&eq),
                "precalm": precalm,
                "regularity": regularity,
                "probes": probes,
            }),
            definite,
        })
    }
}

struct PrecalmCmd {
    witness_only: bool,
}

impl Command for PrecalmCmd {
    fn name(&self) -> &'static str {
        if self.witness_only {
            "witness"
        } else {
            "precalm"
        }
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let strategy = match ctx.cmd {
            Cmd::Precalm { strategy, .. } | Cmd::Witness { strategy, .. } => strategy.as_str(),
            _ => "elimination",
        };
        let eq = ctx.equation()?;
        let mut report = precalm_report(ctx, &eq, strategy)?;
        if self.witness_only && report["precalm"] == json!(false) {
            report["witness"] = Value::Null;
        }
        Ok(Outcome::definite(report))
    }
}

struct RegularityCmd;

impl Command for RegularityCmd {
    fn name(&self) -> &'static str {
        "regularity"
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let eq = ctx.equation()?;
        let (report, definite) = regularity_report(ctx, &eq)?;
        Ok(Outcome { report, definite })
    }
}

fn parse_seed(s: &str, field: &Field) -> Result<(usize, FieldElem)> {
    let (i, v) = s.split_once('=').ok_or_else(|| MahlerError::Invalid(format!("seed '{s}' is not INDEX=VALUE")))?;
    let i = i.trim().parse().map_err(|_| MahlerError::Invalid(format!("bad seed index '{i}'")))?;
    Ok((i, parse_scalar(v, field)?))
}

struct SeriesCmd;

impl Command for SeriesCmd {
    fn name(&self) -> &'static str {
        "series"
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let eq = ctx.equation()?;
        let mut seeds = BTreeMap::new();
        if let Cmd::Series { seeds: raw, .. } = ctx.cmd {
            for s in raw {
                let (i, v) = parse_seed(s, &eq.field)?;
                seeds.insert(i, v);
            }
        }
        let terms = ctx.global.terms.unwrap_or(32);
        let r = solve_series(&eq, terms, &seeds)?;
        Ok(Outcome::definite(json!({
            "terms": terms,
            "coefficients": r.solution.to_json(),
            "free_parameters": r.free_parameters,
            "consistency": r.consistency,
        })))
    }
}

struct KernelCmd;

impl Command for KernelCmd {
    fn name(&self) -> &'static str {
        "kernel"
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let eq = ctx.equation()?;
        Ok(Outcome::definite(probe_report(ctx, &eq)?))
    }
}

struct GuessCmd;

impl Command for GuessCmd {
    fn name(&self) -> &'static str {
        "guess"
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let Cmd::Guess { series, order, degree, .. } = ctx.cmd else { unreachable!() };
        let (t, k) = match series {
            Some(list) => {
                let field = ctx.field();
                let coeffs = list.split(',').map(|s| parse_scalar(s, &field)).collect::<Result<Vec<_>>>()?;
                let k = ctx.global.k.ok_or_else(|| MahlerError::Invalid("--series needs --k".into()))?;
                (Truncation::from_coeffs(&field, coeffs), k)
            }
            None => {
                let eq = ctx.equation()?;
                let terms = ctx.global.terms.unwrap_or(2 * (order + 1) * (degree + 1) + 2 * DEFAULT_MARGIN);
                (solve_series(&eq, terms, &BTreeMap::new())?.solution, eq.k)
            }
        };
        let found = guess_relation(&t, k, *order, *degree, DEFAULT_MARGIN)?;
        Ok(Outcome::definite(json!({
            "terms": t.order(),
            "max_order": order,
            "max_degree": degree,
            "verified_to": t.order() - DEFAULT_MARGIN,
            "relation": found.as_ref().map(equation_json),
        })))
    }
}

struct VerifyCmd;

impl Command for VerifyCmd {
    fn name(&self) -> &'static str {
        "verify-example"
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let Cmd::VerifyExample { alpha } = ctx.cmd else { unreachable!() };
        let field = ctx.field();
        let k = ctx.global.k.unwrap_or(3);
        let a = parse_scalar(alpha, &field)?;
        match verify_counterexample(k, &a) {
            Ok(r) => Ok(Outcome::definite(r.to_json())),
            Err(MahlerError::Undecided(msg)) => {
                Ok(Outcome { report: json!({"verdict": "Unknown", "diagnostics": msg}), definite: false })
            }
            Err(e) => Err(e),
        }
    }
}

fn render(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (key, val) in m {
                let p = if prefix.is_empty() { key.clone() } else { format!("{prefix}.{key}") };
                render(val, &p, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, val) in a.iter().enumerate() {
                render(val, &format!("{prefix}[{i}]"), out);
            }
        }
        Value::Array(a) => {
            let items: Vec<String> = a.iter().map(scalar_text).collect();
            out.push_str(&format!("{prefix}: [{}]\n", items.join(", ")));
        }
        other => out.push_str(&format!("{prefix}: {}\n", scalar_text(other))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let registry = Registry::with_defaults();
    let name = cli.command.name();
    let Some(command) = registry.get(name) else {
        eprintln!("error: no handler for '{name}'");
        return ExitCode::from(1);
    };
    let ctx = Context { global: &cli.global, cmd: &cli.command };
    match command.run(&ctx) {
        Ok(outcome) => {
            let mut report = Map::new();
            report.insert("schema".into(), json!(SCHEMA));
            report.insert("command".into(), json!(name));
            if let Value::Object(m) = outcome.report {
                report.extend(m);
            }
            let report = Value::Object(report);
            if cli.global.pretty {
                let mut s = String::new();
                render(&report, "", &mut s);
                print!("{s}");
            } else {
                println!("{report}");
            }
            ExitCode::from(if outcome.definite { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
