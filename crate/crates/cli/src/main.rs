use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use localsum_core::adapt::{adapt_capped, default_step_cap, is_adapted, AdaptError};
use localsum_core::corpus::{default_corpus, parse_corpus, CorpusEntry};
use localsum_core::edge::{edge_invariants, exceptional_primes, factor_all_edges, is_exceptional_class};
use localsum_core::expsum::{eval_local, eval_sum_direct_budget, verify_bound, BoundConfig, BoundReport, ExpSumError, SumKind};
use localsum_core::newton::NewtonPolygon;
use localsum_core::padic::{hensel_general, hensel_lift, parse_int, PadicError};
use localsum_core::poly::parse_univar;
use localsum_core::scalar::rat_to_string;
use localsum_core::{arith, parse_poly, QPoly};

const BUDGET_CEILING: u64 = 1_000_000_000;

#[derive(Parser)]
#[command(name = "localsum", version, about = "Newton polygons, adapted coordinates and local exponential sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Kind {
    Local,
    Complete,
}

#[derive(clap::Args)]
struct SumArgs {
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',', default_value = "5,7,11,13")]
    primes: Vec<u64>,
    /// Largest exponent s; defaults to the largest the budget allows.
    #[arg(long)]
    smax: Option<u32>,
    /// Maximum number of points per sum.
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Newton polygon, edge invariants and exceptional primes.
    Analyze {
        #[arg(short = 'f', long)]
        poly: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the shear iteration and print its trace.
    Adapt {
        #[arg(short = 'f', long)]
        poly: String,
        #[arg(long)]
        step_cap: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Evaluate S or S_0 for a range of s.
    Sum {
        #[arg(short = 'f', long)]
        poly: String,
        #[arg(long, value_enum, default_value_t = Kind::Local)]
        kind: Kind,
        #[command(flatten)]
        args: SumArgs,
    },
    /// Check the normalized local sums against their early maximum.
    Verify {
        #[arg(short = 'f', long)]
        poly: String,
        #[arg(long, default_value_t = 3)]
        s_ref: u32,
        /// Directory for report.json and rows.csv.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        args: SumArgs,
    },
    /// Lift an approximate root of a univariate polynomial.
    Hensel {
        #[arg(short = 'f', long)]
        poly: String,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        precision: u32,
        #[arg(long)]
        x0: String,
        /// `classical` or `general:L`.
        #[arg(long, default_value = "classical")]
        mode: String,
    },
    /// Run `verify` over every polynomial of a corpus file.
    Corpus {
        /// Corpus file; the shipped corpus when omitted.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        s_ref: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        args: SumArgs,
    },
}

/// Exit codes: 1 parse, 2 precondition, 3 budget, 4 bound violations.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn parse(msg: impl ToString) -> Self {
        Self { code: 1, msg: msg.to_string() }
    }
    fn precondition(msg: impl ToString) -> Self {
        Self { code: 2, msg: msg.to_string() }
    }
}

impl From<ExpSumError> for Failure {
    fn from(e: ExpSumError) -> Self {
        let code = if matches!(e, ExpSumError::Budget { .. }) { 3 } else { 2 };
        Self { code, msg: e.to_string() }
    }
}

impl From<PadicError> for Failure {
    fn from(e: PadicError) -> Self {
        let code = if matches!(e, PadicError::Budget { .. }) { 3 } else { 2 };
        Self { code, msg: e.to_string() }
    }
}

impl From<AdaptError> for Failure {
    fn from(e: AdaptError) -> Self {
        Self::precondition(e)
    }
}

/// Twelve significant digits, fixed layout.
fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn poly_arg(s: &str) -> Result<QPoly, Failure> {
    parse_poly(s).map_err(Failure::parse)
}

fn check_args(a: &SumArgs) -> Result<(), Failure> {
    if a.budget > BUDGET_CEILING {
        return Err(Failure::precondition(format!("budget {} exceeds the ceiling {BUDGET_CEILING}", a.budget)));
    }
    if let Some(p) = a.primes.iter().find(|&&p| !arith::is_prime_u64(p)) {
        return Err(Failure::precondition(format!("{p} is not prime")));
    }
    Ok(())
}

fn print_value(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn analyze(f: &QPoly) -> Result<Value, Failure> {
    let g = f.without_constant();
    let np = NewtonPolygon::new(&g).map_err(Failure::precondition)?;
    let edges = factor_all_edges(&g, &np).map_err(Failure::precondition)?;
    let edge_reports: Vec<Value> = edges
        .iter()
        .map(|(face, fac)| {
            let inv = edge_invariants(fac);
            json!({
                "face": face,
                "alpha": fac.alpha, "beta": fac.beta, "q": fac.q, "m": fac.m, "n": fac.n,
                "roots": fac.roots, "irrational": fac.irrational,
                "d_tau": rat_to_string(&inv.d_tau), "m_pr": inv.m_pr, "m_Q": inv.m_q,
            })
        })
        .collect();
    let (adapted, ex) = match is_adapted(f) {
        Ok(a) => {
            let transforms = adapt_capped(f, default_step_cap(f)).map(|r| r.transforms).unwrap_or_else(|_| vec![f.clone()]);
            (json!(a), exceptional_primes(f, &transforms))
        }
        Err(AdaptError::LinearTerm) => (json!({"adapted": null, "reason": "linear term"}), exceptional_primes(f, std::slice::from_ref(f))),
        Err(e) => return Err(e.into()),
    };
    Ok(json!({
        "polynomial": f.to_string(),
        "newton_polygon": np,
        "edges": edge_reports,
        "adaptedness": adapted,
        "exceptional_class": is_exceptional_class(&g),
        "exceptional_primes": ex,
    }))
}

fn analyze_text(v: &Value) -> String {
    let mut s = String::new();
    let np = &v["newton_polygon"];
    writeln!(s, "polynomial: {}", v["polynomial"].as_str().unwrap_or("")).ok();
    writeln!(s, "vertices: {}", np["vertices"]).ok();
    writeln!(s, "d = {}", np["d"].as_str().unwrap_or("")).ok();
    writeln!(s, "principal face: {}", np["faces"][np["principal_face"].as_u64().unwrap_or(0) as usize]).ok();
    writeln!(s, "adapted = {}", v["adaptedness"]["adapted"]).ok();
    writeln!(s, "reason: {}", v["adaptedness"]["reason"]).ok();
    writeln!(s, "exceptional_class = {}", v["exceptional_class"]).ok();
    writeln!(s, "exceptional primes: {}", v["exceptional_primes"]["primes"]).ok();
    for e in v["edges"].as_array().into_iter().flatten() {
        writeln!(s, "edge {}: d_tau = {}, m_pr = {}, m_Q = {}", e["face"], e["d_tau"].as_str().unwrap_or(""), e["m_pr"], e["m_Q"]).ok();
    }
    s
}

fn s_values(p: u64, a: &SumArgs, kind: SumKind) -> Vec<u32> {
    let per = |s: u32| -> u128 {
        let e = if kind == SumKind::Local { 2 * (s - 1) } else { 2 * s };
        (p as u128).saturating_pow(e)
    };
    (1..).take_while(|&s| per(s) <= a.budget as u128 && a.smax.map_or(s <= 64, |m| s <= m)).collect()
}

const CSV_HEADER: &str = "p,s,re,im,modulus,normalized";

fn report_csv(rep: &BoundReport) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in &rep.rows {
        writeln!(s, "{},{},{},{},{},{}", r.p, r.s, num(r.re), num(r.im), num(r.modulus), num(r.normalized)).ok();
    }
    s
}

fn report_json(rep: &BoundReport) -> Value {
    let rows: Vec<Value> = rep
        .rows
        .iter()
        .map(|r| json!({"p": r.p, "s": r.s, "re": num(r.re), "im": num(r.im), "modulus": num(r.modulus), "normalized": num(r.normalized)}))
        .collect();
    let viol: Vec<Value> = rep.violations.iter().map(|r| json!({"p": r.p, "s": r.s, "normalized": num(r.normalized)})).collect();
    let c: serde_json::Map<String, Value> = rep.observed_constant.iter().map(|(p, c)| (p.to_string(), json!(num(*c)))).collect();
    json!({
        "polynomial": rep.polynomial,
        "h": rat_to_string(&rep.h),
        "nu_eff": rep.nu_eff,
        "s_ref": rep.s_ref,
        "excluded_primes": rep.excluded_primes,
        "rows": rows,
        "observed_constant": c,
        "max_normalized": num(rep.max_normalized),
        "violations": viol,
    })
}

fn write_outputs(dir: &Option<PathBuf>, stem: &str, rep: &BoundReport) -> Result<(), Failure> {
    if let Some(d) = dir {
        std::fs::create_dir_all(d).map_err(Failure::precondition)?;
        std::fs::write(d.join(format!("{stem}.json")), serde_json::to_string_pretty(&report_json(rep)).expect("json"))
            .map_err(Failure::precondition)?;
        std::fs::write(d.join(format!("{stem}.csv")), report_csv(rep)).map_err(Failure::precondition)?;
    }
    Ok(())
}

fn run_verify(f: &QPoly, a: &SumArgs, s_ref: u32) -> Result<BoundReport, Failure> {
    verify_bound(f, &a.primes, BoundConfig { budget: a.budget, s_max: a.smax, s_ref }).map_err(Failure::from)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Analyze { poly, format } => {
            let v = analyze(&poly_arg(&poly)?)?;
            match format {
                Format::Text | Format::Csv => print!("{}", analyze_text(&v)),
                Format::Json => print_value(&v),
            }
        }
        Command::Adapt { poly, step_cap, format } => {
            let f = poly_arg(&poly)?;
            let r = adapt_capped(&f, step_cap.unwrap_or_else(|| default_step_cap(&f)))?;
            match format {
                Format::Json => print_value(&json!(r)),
                _ => {
                    for st in &r.steps {
                        println!(
                            "{:?}-shear root {} exponent {}: d {} -> {}",
                            st.direction,
                            rat_to_string(&st.root),
                            st.exponent,
                            rat_to_string(&st.d_before),
                            rat_to_string(&st.d_after)
                        );
                    }
                    println!("h = {}, nu = {}, terminated = {:?}", rat_to_string(&r.height), r.nu, r.terminated);
                    println!("final: {}", r.final_poly);
                }
            }
        }
        Command::Sum { poly, kind, args } => {
            check_args(&args)?;
            let f = poly_arg(&poly)?;
            let kind = if kind == Kind::Local { SumKind::Local } else { SumKind::Complete };
            let mut rows = Vec::new();
            for &p in &args.primes {
                // an explicit --smax is honoured even past the budget, which then fails
                let svals = match args.smax {
                    Some(m) => (1..=m).collect(),
                    None => s_values(p, &args, kind),
                };
                for s in svals {
                    let r = match kind {
                        SumKind::Local => eval_local(&f, p, s, args.budget)?,
                        SumKind::Complete => eval_sum_direct_budget(&f, p, s, kind, args.budget)?,
                    };
                    rows.push(r);
                }
            }
            match args.format {
                Format::Json => print_value(&json!(rows
                    .iter()
                    .map(|r| json!({"p": r.p, "s": r.s, "re": num(r.value.re), "im": num(r.value.im), "modulus": num(r.modulus)}))
                    .collect::<Vec<_>>())),
                _ => {
                    println!("{CSV_HEADER}");
                    for r in rows {
                        println!("{},{},{},{},{},", r.p, r.s, num(r.value.re), num(r.value.im), num(r.modulus));
                    }
                }
            }
        }
        Command::Verify { poly, s_ref, out, args } => {
            check_args(&args)?;
            let f = poly_arg(&poly)?;
            let rep = run_verify(&f, &args, s_ref)?;
            if rep.rows.is_empty() {
                eprintln!("warning: no admissible primes left after excluding {:?}", rep.excluded_primes);
            }
            write_outputs(&out, "report", &rep)?;
            match args.format {
                Format::Json => print_value(&report_json(&rep)),
                _ => print!("{}", report_csv(&rep)),
            }
            return Ok(rep.violations.is_empty());
        }
        Command::Hensel { poly, prime, precision, x0, mode } => {
            let g = parse_univar(&poly).map_err(Failure::parse)?;
            let x0 = parse_int(&x0).ok_or_else(|| Failure::parse(format!("invalid integer {x0}")))?;
            let w = match mode.as_str() {
                "classical" => hensel_lift(&g, &x0, prime, precision)?,
                m => match m.strip_prefix("general:").and_then(|l| l.parse::<u32>().ok()) {
                    Some(l) => hensel_general(&g, &x0, prime, l, precision)?,
                    None => return Err(Failure::parse(format!("unknown mode {m}"))),
                },
            };
            print_value(&json!(w));
        }
        Command::Corpus { file, s_ref, out, args } => {
            check_args(&args)?;
            let entries: Vec<CorpusEntry> = match file {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(Failure::precondition)?;
                    parse_corpus(&text).map_err(Failure::parse)?
                }
                None => default_corpus(),
            };
            let mut clean = true;
            println!("name,h,nu_eff,excluded,rows,max_normalized,violations");
            for e in &entries {
                let rep = run_verify(&e.poly, &args, s_ref)?;
                write_outputs(&out, &e.name, &rep)?;
                clean &= rep.violations.is_empty();
                let excluded: Vec<String> = rep.excluded_primes.iter().map(u64::to_string).collect();
                println!(
                    "{},{},{},{},{},{},{}",
                    e.name,
                    rat_to_string(&rep.h),
                    rep.nu_eff,
                    excluded.join(" "),
                    rep.rows.len(),
                    num(rep.max_normalized),
                    rep.violations.len()
                );
            }
            return Ok(clean);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
