// SPDX-License-Identifier: Apache-2.0

//! `sregen`: build, verify and simulate secure regenerating codes, and emit
//! tradeoff regions.
//!
//! Exit codes: 0 when every checked property holds, 1 when one fails,
//! 2 on usage or I/O errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use sregen_core::constructions::{self as cons, names, ConstructionError};
use sregen_core::descriptor::{self, DescriptorError, SCHEMA_VERSION};
use sregen_core::enumeration::DEFAULT_BUDGET;
use sregen_core::sim::SimState;
use sregen_core::tradeoff::{self, GridSpec, Rational, RegionFamily, TradeoffQuery};
use sregen_core::verifier::{leakage_rank, WiretapView};
use sregen_core::{Attack, FiniteField, LinearDssCode};

/// Overrides the exhaustive-enumeration state budget.
const BUDGET_ENV: &str = "SREGEN_ENUM_BUDGET";

#[derive(Parser)]
#[command(
    name = "sregen",
    version,
    about = "Secure exact-repair regenerating codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code, run its verification gate and write its descriptor.
    Construct(ConstructArgs),
    /// Check a descriptor for reconstruction, exact repair and secrecy.
    Verify(VerifyArgs),
    /// Run failures, repairs and eavesdroppers on a descriptor.
    Simulate(SimulateArgs),
    /// Emit the normalized tradeoff boundary as CSV.
    Region(RegionArgs),
    /// Secure capacity at one (alpha, beta) point.
    Bound(BoundArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// One of fig1-322, mbr, table1-423, table2-433, table3-433,
    /// keyless-433, n-minus-2.
    name: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// Field order q (prime or prime power).
    #[arg(long)]
    field: Option<u64>,
    /// Descriptor path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    descriptor: PathBuf,
    /// Defaults to the attack the code declares.
    #[arg(long)]
    attack: Option<Attack>,
    /// Defaults to the declared l.
    #[arg(long)]
    l: Option<usize>,
    /// Cross-check every secrecy view by enumerating all (A, K).
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args)]
struct SimulateArgs {
    descriptor: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Nodes to fail and repair in order, e.g. "1,3".
    #[arg(long)]
    failures: Option<String>,
    /// Eavesdropper as "type1:1,2" or "type2:3"; may be repeated.
    #[arg(long)]
    wiretap: Vec<String>,
    /// k nodes to reconstruct the file from, e.g. "2,3,4".
    #[arg(long)]
    reconstruct: Option<String>,
    /// Write the event log here as JSON lines.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args)]
struct RegionArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    attack: Attack,
    /// CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fall back to the cut-set bound for tuples without a known optimum.
    #[arg(long)]
    upper_bound_only: bool,
    #[arg(long, default_value_t = 512)]
    points: usize,
    /// Grid extent on both axes, e.g. "3" or "7/2".
    #[arg(long, default_value = "3")]
    max: Rational,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    alpha: Rational,
    #[arg(long)]
    beta: Rational,
    #[arg(long)]
    attack: Attack,
    #[arg(long)]
    upper_bound_only: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Simulate(a) => simulate(a),
        Command::Region(a) => region(a),
        Command::Bound(a) => bound(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", json!({ "error": format!("{e:#}") }));
            ExitCode::from(2)
        }
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<()> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    emit(&(serde_json::to_string_pretty(v)? + "\n"))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => emit(text),
    }
}

fn field_or(q: Option<u64>, default: impl FnOnce() -> FiniteField) -> Result<FiniteField> {
    match q {
        Some(q) => FiniteField::of_order(q).map_err(|e| anyhow!("field of order {q}: {e}")),
        None => Ok(default()),
    }
}

fn build(a: &ConstructArgs) -> Result<std::result::Result<LinearDssCode, ConstructionError>> {
    let prime = |p| move || FiniteField::prime(p).expect("prime");
    let code = match a.name.as_str() {
        names::FIG1_322 => cons::build_322_type1(&field_or(a.field, prime(5))?),
        names::MBR => {
            let (n, k, l) = match (a.n, a.k, a.l) {
                (Some(n), Some(k), Some(l)) => (n, k, l),
                _ => bail!("mbr needs --n, --k and --l"),
            };
            if a.d.is_some_and(|d| d + 1 != n) {
                bail!("mbr repairs from all n-1 other nodes, so --d must be n-1");
            }
            cons::build_mbr_rbt(n, k, l, &field_or(a.field, || cons::default_mbr_field(n))?)
        }
        names::TABLE1_423 => cons::build_423_l1(&field_or(a.field, prime(5))?),
        names::TABLE2_433 => match a.field {
            None | Some(2) => cons::build_433_l1_minimal(),
            Some(q) => bail!("table2-433 is defined over F_2 only, got --field {q}"),
        },
        names::TABLE3_433 => match a.field {
            None => cons::build_433_l1_interior_auto(),
            Some(_) => cons::build_433_l1_interior(&field_or(a.field, prime(11))?),
        },
        names::KEYLESS_433 => cons::build_433_keyless(&field_or(a.field, prime(2))?),
        names::N_MINUS_2 => {
            let n = a.n.ok_or_else(|| anyhow!("n-minus-2 needs --n"))?;
            if n < 3 {
                bail!("n-minus-2 needs n >= 3");
            }
            cons::build_n_minus_2(n, &field_or(a.field, || cons::default_n_minus_2_field(n))?)
        }
        other => bail!("unknown builder {other:?}"),
    };
    Ok(code)
}

fn construct(a: ConstructArgs) -> Result<bool> {
    let code = match build(&a)? {
        Ok(code) => code,
        Err(ConstructionError::Gate {
            builder,
            field,
            failures,
        }) => {
            print_json(&json!({
                "schema_version": SCHEMA_VERSION,
                "builder": builder,
                "field": field,
                "pass": false,
                "checks": failures,
            }))?;
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    let p = &code.params;
    for (flag, given, actual) in [
        ("n", a.n, p.n),
        ("k", a.k, p.k),
        ("d", a.d, p.d),
        ("l", a.l, p.l),
    ] {
        if given.is_some_and(|g| g != actual) {
            bail!(
                "{} has {flag} = {actual}, got --{flag} {}",
                a.name,
                given.unwrap()
            );
        }
    }
    write_or_print(a.out.as_deref(), &descriptor::to_json(&code))?;
    if a.out.is_some() {
        print_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "builder": code.builder,
            "field": code.field.to_string(),
            "params": code.params,
            "pass": true,
            "checks": sregen_core::verifier::gate(&code),
        }))?;
    }
    Ok(true)
}

fn budget() -> Result<u128> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{BUDGET_ENV} must be a nonnegative integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// Loads a descriptor. `Ok(Err(report))` is a gate rejection.
fn load(path: &Path) -> Result<std::result::Result<LinearDssCode, Value>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    match descriptor::parse(&text) {
        Ok(code) => Ok(Ok(code)),
        Err(DescriptorError::Gate(checks)) => Ok(Err(json!({
            "schema_version": SCHEMA_VERSION,
            "descriptor": path.display().to_string(),
            "error": "descriptor fails its declared properties",
            "pass": false,
            "checks": checks,
        }))),
        Err(e) => Err(anyhow!(e).context(format!("parsing {}", path.display()))),
    }
}

fn verify(a: VerifyArgs) -> Result<bool> {
    let code = match load(&a.descriptor)? {
        Ok(code) => code,
        Err(rejection) => {
            print_json(&rejection)?;
            return Ok(false);
        }
    };
    let attack = a.attack.unwrap_or(code.params.attack);
    let l = a.l.unwrap_or(code.params.l);
    let budget = if a.exhaustive { Some(budget()?) } else { None };
    let report = descriptor::verification_report(&code, attack, l, budget)?;
    print_json(&report)?;
    Ok(report.pass)
}

fn parse_nodes(s: &str, n: usize) -> Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let i: usize = t
                .trim()
                .parse()
                .with_context(|| format!("bad node {t:?}"))?;
            if i == 0 || i > n {
                bail!("node {i} out of range 1..={n}");
            }
            Ok(i - 1)
        })
        .collect()
}

fn simulate(a: SimulateArgs) -> Result<bool> {
    let code = match load(&a.descriptor)? {
        Ok(code) => code,
        Err(rejection) => {
            print_json(&rejection)?;
            return Ok(false);
        }
    };
    let n = code.n();
    let failures = parse_nodes(a.failures.as_deref().unwrap_or(""), n)?;
    let mut taps = Vec::new();
    for w in &a.wiretap {
        let (kind, nodes) = w.split_once(':').unwrap_or((w.as_str(), ""));
        let attack: Attack = kind.parse().map_err(|e: String| anyhow!(e))?;
        if attack == Attack::None {
            bail!("wiretap kind must be type1 or type2");
        }
        taps.push((attack, parse_nodes(nodes, n)?));
    }
    let recon = a
        .reconstruct
        .as_deref()
        .map(|s| parse_nodes(s, n))
        .transpose()?;

    let mut state = SimState::init(&code, a.seed);
    let mut repairs = Vec::new();
    for &j in &failures {
        repairs.push(state.fail_and_repair(j)?);
    }
    let mut reconstructed = None;
    if let Some(s) = &recon {
        let file = state.reconstruct(s)?;
        reconstructed = Some(json!({
            "nodes": s.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "file": file,
            "correct": file == state.file(),
        }));
    }
    let mut transcripts = Vec::new();
    let mut secure = true;
    for (attack, nodes) in &taps {
        let t = state.wiretap(*attack, nodes)?;
        let view = WiretapView::new(&code, *attack, nodes)?;
        let leak = leakage_rank(&code, &view)?;
        secure &= leak.secure;
        transcripts.push(json!({
            "attack": t.attack,
            "nodes": nodes.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "values": t.values,
            "functionals": t.functionals.row_vecs(),
            "exploratory": t.exploratory,
            "leakage": leak,
        }));
    }
    if let Some(path) = &a.log {
        fs::write(path, state.export_log())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let exact = repairs.iter().all(|r| r.exact);
    let recon_ok = reconstructed
        .as_ref()
        .is_none_or(|r| r["correct"] == json!(true));
    print_json(&json!({
        "schema_version": SCHEMA_VERSION,
        "builder": code.builder,
        "seed": a.seed,
        "repairs": repairs,
        "reconstruct": reconstructed,
        "wiretaps": transcripts,
        "disk_reads": state.disk_reads(),
        "pass": exact && recon_ok && secure,
    }))?;
    Ok(exact && recon_ok && secure)
}

fn region(a: RegionArgs) -> Result<bool> {
    let family = RegionFamily {
        n: a.n,
        k: a.k,
        d: a.d,
        l: a.l,
        attack: a.attack,
        upper_bound_only: a.upper_bound_only,
    };
    let grid = GridSpec {
        points: a.points,
        max: a.max,
    };
    let region = tradeoff::region_sweep(&family, &grid)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["alpha_bar", "beta_bar", "label"])?;
    for p in &region.boundary {
        w.write_record([
            tradeoff::to_f64(&p.alpha_bar).to_string(),
            tradeoff::to_f64(&p.beta_bar).to_string(),
            p.label.clone(),
        ])?;
    }
    let text = String::from_utf8(w.into_inner()?)?;
    write_or_print(a.out.as_deref(), &text)?;
    Ok(true)
}

fn bound(a: BoundArgs) -> Result<bool> {
    let q = TradeoffQuery {
        n: a.n,
        k: a.k,
        d: a.d,
        l: a.l,
        alpha: a.alpha,
        beta: a.beta,
        attack: a.attack,
    };
    let result = match tradeoff::theorem_bound(&q) {
        Ok(r) => r,
        Err(tradeoff::TradeoffError::NoTheorem { .. }) if a.upper_bound_only => {
            tradeoff::upper_bound(&q)?
        }
        Err(e) => return Err(e.into()),
    };
    print_json(&result)?;
    Ok(true)
}
