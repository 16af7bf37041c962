//! Command-line front end: identity sweeps, lattice reports, zeta
//! functions, and critical values.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails, 2 on
//! usage or configuration errors.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;

use coxsum::coxeter::{CoxeterDatum, CoxeterType};
use coxsum::critical::{critical_value_formula, max_delta_on_sphere, RealArrangement};
use coxsum::field::PrimeField;
use coxsum::lattice::{
    lattice_mod_p, theta_check, trace_identity_check, uniqueness_check, LatticeAction,
};
use coxsum::report::{
    default_sweep_types, parse_primes, records_to_csv, records_to_json, run_verify,
    CharSelection, FileConfig, SweepConfig,
};
use coxsum::sectors::QuotientPoints;
use coxsum::zeta::{
    ab_constants, eigenvalue_class_identity_check, mbar_of_type, product_relation_check,
    zeta_of_type,
};
use coxsum::{Error, Result};

#[derive(Parser)]
#[command(
    name = "coxsum",
    about = "Character sums of finite Coxeter arrangements over F_p",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the character-sum identity for chosen types and primes.
    Verify(VerifyArgs),
    /// Intersection-lattice invariants and the trace identity at one prime.
    Lattice(LatticeArgs),
    /// Monodromy zeta function and the eigenvalue-class identities.
    Zeta(TypeArgs),
    /// Critical value of the squared hyperplane product on {q = 1}.
    Critical(CriticalArgs),
    /// Identity checks across the default grid of types and primes.
    Sweep(VerifyArgs),
}

#[derive(Args, Clone)]
struct TypeArgs {
    /// Type label (A2, A3perm, B4, D4, G2, F4, I2(5)), or a family letter
    /// combined with --rank or --m.
    #[arg(long = "type")]
    type_label: String,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Type label; repeatable. Defaults to the full grid for `sweep`.
    #[arg(long = "type")]
    type_labels: Vec<String>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Prime range "5..13" (inclusive) or list "3,5,7".
    #[arg(long)]
    primes: Option<String>,
    /// "all" or "orders=1,2,...".
    #[arg(long)]
    chars: Option<String>,
    /// Tolerance scale τ; a check passes when |lhs − rhs| ≤ τ·(1 + |rhs|).
    #[arg(long)]
    tolerance: Option<f64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<String>,
    /// Write the CSV report here.
    #[arg(long)]
    csv: Option<String>,
    /// TOML config file; explicit flags override its fields.
    #[arg(long)]
    config: Option<String>,
}

#[derive(Args)]
struct LatticeArgs {
    #[command(flatten)]
    ty: TypeArgs,
    /// The prime to reduce at.
    #[arg(long)]
    p: u64,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct CriticalArgs {
    #[command(flatten)]
    ty: TypeArgs,
    /// Number of optimizer starts.
    #[arg(long, default_value_t = 50)]
    restarts: u32,
    /// Seed for the start points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Restores default SIGPIPE handling so that piping into `head` or a
/// closed pager terminates the process quietly instead of panicking.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(args) => cmd_verify(args, None),
        Command::Sweep(args) => cmd_verify(args, Some(default_sweep_types())),
        Command::Lattice(args) => cmd_lattice(args),
        Command::Zeta(args) => cmd_zeta(args),
        Command::Critical(args) => cmd_critical(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Combines --type with optional --rank / --m into one parsed type.
fn resolve_type(label: &str, rank: Option<usize>, m: Option<usize>) -> Result<CoxeterType> {
    match (rank, m) {
        (None, None) => CoxeterType::parse(label),
        (Some(_), Some(_)) => Err(Error::UnsupportedType(
            "--rank and --m are mutually exclusive".into(),
        )),
        (None, Some(m)) => CoxeterType::parse(&format!("{label}({m})")),
        (Some(r), None) => {
            if let Some(base) = label.strip_suffix("perm") {
                CoxeterType::parse(&format!("{base}{r}perm"))
            } else {
                CoxeterType::parse(&format!("{label}{r}"))
            }
        }
    }
}

fn write_file(path: &str, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::UnsupportedType(format!("cannot write {path}: {e}")))
}

fn cmd_verify(args: VerifyArgs, default_types: Option<Vec<CoxeterType>>) -> Result<bool> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };

    let types: Vec<CoxeterType> = if !args.type_labels.is_empty() {
        if (args.rank.is_some() || args.m.is_some()) && args.type_labels.len() != 1 {
            return Err(Error::UnsupportedType(
                "--rank/--m require exactly one --type".into(),
            ));
        }
        args.type_labels
            .iter()
            .map(|l| resolve_type(l, args.rank, args.m))
            .collect::<Result<_>>()?
    } else if let Some(labels) = &file.types {
        labels
            .iter()
            .map(|l| CoxeterType::parse(l))
            .collect::<Result<_>>()?
    } else {
        default_types.unwrap_or_default()
    };
    if types.is_empty() {
        return Err(Error::UnsupportedType("empty type list".into()));
    }

    let mut config = SweepConfig::new(types);
    config.primes = match (&args.primes, &file.primes) {
        (Some(s), _) => parse_primes(s)?,
        (None, Some(spec)) => spec.resolve()?,
        (None, None) => Vec::new(),
    };
    config.chars = match (&args.chars, &file.chars) {
        (Some(s), _) => CharSelection::parse(s)?,
        (None, Some(s)) => CharSelection::parse(s)?,
        (None, None) => CharSelection::All,
    };
    config.tolerance = args.tolerance.or(file.tolerance).unwrap_or(1e-6);
    config.jobs = args.jobs.or(file.jobs).unwrap_or(0);

    let records = run_verify(&config)?;
    for r in &records {
        match &r.skipped_reason {
            Some(reason) => println!("SKIP {} p={} ({reason})", r.type_label, r.p),
            None => println!(
                "{} {} p={} chi^{} (order {}) |lhs-rhs| = {:.3e}",
                if r.pass { "PASS" } else { "FAIL" },
                r.type_label,
                r.p,
                r.char_exponent,
                r.char_order,
                r.abs_err,
            ),
        }
    }
    let skipped = records.iter().filter(|r| r.skipped_reason.is_some()).count();
    let failed = records.iter().filter(|r| !r.pass).count();
    println!(
        "{} records: {} passed, {failed} failed, {skipped} skipped",
        records.len(),
        records.len() - failed - skipped,
    );

    if let Some(path) = args.json.as_deref().or(file.json.as_deref()) {
        write_file(path, &records_to_json(&records))?;
    }
    if let Some(path) = args.csv.as_deref().or(file.csv.as_deref()) {
        write_file(path, &records_to_csv(&records))?;
    }
    Ok(failed == 0)
}

fn cmd_lattice(args: LatticeArgs) -> Result<bool> {
    let ctype = resolve_type(&args.ty.type_label, args.ty.rank, args.ty.m)?;
    let datum = CoxeterDatum::new(ctype)?;
    let p = args.p;
    let tolerance = args.tolerance.unwrap_or(1e-6);

    let emit = |value: &serde_json::Value, path: Option<&str>| -> Result<()> {
        let text = serde_json::to_string_pretty(value).expect("report serializes");
        println!("{text}");
        if let Some(path) = path {
            write_file(path, &text)?;
        }
        Ok(())
    };

    let order = datum.group_order();
    if order % p == 0 {
        let value = serde_json::json!({
            "type": datum.label(),
            "p": p,
            "skipped_reason": format!("{p} divides the group order {order}"),
        });
        emit(&value, args.ty.json.as_deref())?;
        return Ok(true);
    }
    let fp = PrimeField::new(p)?;
    let arr = match datum.reduce_mod_p(&fp) {
        Ok(arr) => arr,
        Err(Error::NonSplitPrime(_)) => {
            let value = serde_json::json!({
                "type": datum.label(),
                "p": p,
                "skipped_reason": format!("coefficient field has no root modulo {p}"),
            });
            emit(&value, args.ty.json.as_deref())?;
            return Ok(true);
        }
        Err(e) => return Err(e),
    };

    let lat = lattice_mod_p(&arr);
    let action = LatticeAction::new(arr.field(), &lat, arr.forms(), arr.group())?;
    let d_values = action.d_by_orbit();
    let (_, unit_unique) = uniqueness_check(&action);
    let unit_count = d_values.iter().filter(|&&(_, d)| d != 0).count();
    let d_nonnegative = d_values.iter().all(|&(_, d)| d >= 0);
    let pts = QuotientPoints::enumerate(&arr)?;
    let trace = trace_identity_check(&arr, &pts, tolerance)?;
    let theta = theta_check(&datum, &fp);

    let orbits: Vec<serde_json::Value> = action
        .orbits()
        .iter()
        .zip(&d_values)
        .map(|(orbit, &(rep, d))| {
            let el = &lat.elements()[rep];
            serde_json::json!({
                "rep_hyperplanes": el.hyperplanes,
                "dim": el.dim,
                "orbit_size": orbit.len(),
                "d": d,
            })
        })
        .collect();
    let value = serde_json::json!({
        "type": datum.label(),
        "p": p,
        "lattice_size": lat.len(),
        "theta_check": theta,
        "orbits": orbits,
        "d_nonnegative": d_nonnegative,
        "unit_orbit_count": unit_count,
        "unit_orbit_unique": unit_unique,
        "trace": {
            "lhs": [trace.lhs.re, trace.lhs.im],
            "rhs": [trace.rhs.re, trace.rhs.im],
            "abs_err": trace.abs_err,
            "pass": trace.pass,
        },
    });
    emit(&value, args.ty.json.as_deref())?;
    Ok(trace.pass && unit_unique && d_nonnegative && theta)
}

fn cmd_zeta(args: TypeArgs) -> Result<bool> {
    let ctype = resolve_type(&args.type_label, args.rank, args.m)?;
    let z = zeta_of_type(ctype)?;
    let relation_ok = product_relation_check(ctype)?;
    let kclass_ok = eigenvalue_class_identity_check(ctype)?;
    let diagram = ctype.diagram();
    let n = diagram.vertices as u64;
    let reflections: u64 = match ctype {
        CoxeterType::APerm(k) => CoxeterType::A(k),
        other => other,
    }
    .degrees()
    .iter()
    .map(|d| d - 1)
    .sum();
    let (a, b) = ab_constants(n, reflections);

    println!("Z(T) = {z}");
    println!(
        "subdiagram product relation: {}",
        if relation_ok { "exact" } else { "FAILED" }
    );
    println!(
        "eigenvalue-class identity: {}",
        if kclass_ok { "holds" } else { "FAILED" }
    );
    let mbar = mbar_of_type(ctype)?;
    println!("monodromy eigenvalue classes:");
    for (&(num, den), &mult) in mbar.entries() {
        println!("  e^(2πi·{num}/{den}) with multiplicity {mult:+}");
    }
    println!("(a, b) = ({a}, {b})");
    if let Some(path) = args.json.as_deref() {
        let eigenvalues: Vec<_> = mbar
            .entries()
            .iter()
            .map(|(&(num, den), &mult)| {
                serde_json::json!({ "numerator": num, "order": den, "multiplicity": mult })
            })
            .collect();
        let value = serde_json::json!({
            "type": ctype.label(),
            "zeta": z.to_string(),
            "product_relation": relation_ok,
            "kclass_identity": kclass_ok,
            "eigenvalue_classes": eigenvalues,
            "ab": [a, b],
        });
        write_file(path, &serde_json::to_string_pretty(&value).expect("serializes"))?;
    }
    Ok(relation_ok && kclass_ok)
}

fn cmd_critical(args: CriticalArgs) -> Result<bool> {
    let ctype = resolve_type(&args.ty.type_label, args.ty.rank, args.ty.m)?;
    let datum = CoxeterDatum::new(ctype)?;
    let (max_exact, signed) = critical_value_formula(&datum)?;
    let target = max_exact
        .to_f64()
        .ok_or_else(|| Error::Internal("formula value out of f64 range".into()))?;
    let ra = RealArrangement::new(&datum);
    let found = max_delta_on_sphere(&ra, args.restarts, args.seed)?;
    let pass = found <= target + 1e-9 && found >= target * (1.0 - 1e-6);

    println!("formula max = {max_exact} = {target}");
    println!("signed value = {signed}");
    println!("optimizer max = {found} ({} restarts)", args.restarts);
    println!("agreement: {}", if pass { "within 1e-6 relative" } else { "FAILED" });
    if let Some(path) = args.ty.json.as_deref() {
        let value = serde_json::json!({
            "type": ctype.label(),
            "formula_max": max_exact.to_string(),
            "formula_max_float": target,
            "signed_value": signed.to_string(),
            "optimizer_max": found,
            "restarts": args.restarts,
            "seed": args.seed,
            "pass": pass,
        });
        write_file(path, &serde_json::to_string_pretty(&value).expect("serializes"))?;
    }
    Ok(pass)
}
