//! Sweep orchestration and machine-readable verification reports.
//!
//! A sweep expands into independent work items, one per (type, prime); each
//! item enumerates the quotient points once and checks the character-sum
//! identity for every selected character, producing one record per
//! character. Primes that are bad for a type become a single SKIPPED record
//! with the reason, never an error. Records are sorted by
//! (type label, prime, character exponent) before emission, so serial and
//! parallel runs emit identical reports apart from the measured runtimes.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::MultChar;
use crate::coxeter::{CoxeterDatum, CoxeterType};
use crate::field::PrimeField;
use crate::identity::check_identity;
use crate::sectors::QuotientPoints;
use crate::{Error, Result};

/// Hard cap on the number of points one twisted sector may enumerate.
pub const SECTOR_POINT_CAP: f64 = 1e8;

/// One verification outcome. `runtime_ms` is the wall time of the whole
/// (type, prime) work item the record belongs to; comparisons between runs
/// should zero it first (see [`strip_runtimes`]).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationRecord {
    #[serde(rename = "type")]
    pub type_label: String,
    pub rank: usize,
    pub p: u64,
    pub char_exponent: u64,
    pub char_order: u64,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub abs_err: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped_reason: Option<String>,
    pub runtime_ms: u64,
}

/// Which multiplicative characters a sweep evaluates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharSelection {
    All,
    Orders(Vec<u64>),
}

impl CharSelection {
    /// Accepts "all" or "orders=comma,separated,list".
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "all" {
            return Ok(Self::All);
        }
        if let Some(list) = s.strip_prefix("orders=") {
            let orders = list
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::UnsupportedType(format!("character order {t:?}")))
                })
                .collect::<Result<Vec<u64>>>()?;
            if orders.is_empty() || orders.contains(&0) {
                return Err(Error::UnsupportedType(format!("character selection {s:?}")));
            }
            return Ok(Self::Orders(orders));
        }
        Err(Error::UnsupportedType(format!("character selection {s:?}")))
    }

    fn keeps(&self, chi: &MultChar) -> bool {
        match self {
            Self::All => true,
            Self::Orders(orders) => orders.contains(&chi.order()),
        }
    }
}

/// Parses "5..13" (inclusive range, primes only) or "3,5,7" (every entry
/// must be prime) or a single prime.
pub fn parse_primes(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    let bad = |what: &str| Error::UnsupportedType(format!("prime list entry {what:?}"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad(s))?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad(s))?;
        return Ok((lo..=hi).filter(|&p| is_prime(p)).collect());
    }
    let mut out = Vec::new();
    for t in s.split(',') {
        let p: u64 = t.trim().parse().map_err(|_| bad(t))?;
        if !is_prime(p) {
            return Err(bad(t));
        }
        out.push(p);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Full description of one sweep. An empty prime list means the per-type
/// default grid (primes ≤ 13, capped at 7 for ambient dimension ≥ 4).
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub types: Vec<CoxeterType>,
    pub primes: Vec<u64>,
    pub chars: CharSelection,
    pub tolerance: f64,
    pub jobs: usize,
}

impl SweepConfig {
    pub fn new(types: Vec<CoxeterType>) -> Self {
        Self {
            types,
            primes: Vec::new(),
            chars: CharSelection::All,
            tolerance: 1e-6,
            jobs: 0,
        }
    }
}

/// The types the default sweep covers.
pub fn default_sweep_types() -> Vec<CoxeterType> {
    vec![
        CoxeterType::A(1),
        CoxeterType::A(2),
        CoxeterType::A(3),
        CoxeterType::A(4),
        CoxeterType::APerm(4),
        CoxeterType::B(2),
        CoxeterType::B(3),
        CoxeterType::B(4),
        CoxeterType::D4,
        CoxeterType::G2,
        CoxeterType::F4,
        CoxeterType::I2(5),
        CoxeterType::I2(6),
    ]
}

fn default_primes_for(ctype: CoxeterType) -> Vec<u64> {
    if ctype.ambient_dim() >= 4 {
        vec![3, 5, 7]
    } else {
        vec![3, 5, 7, 11, 13]
    }
}

/// Runs the sweep and returns all records sorted by task key. Internal
/// invariant violations (integrality, resource limits inside a good pair)
/// propagate as errors; bad (type, prime) pairs become SKIPPED records.
pub fn run_verify(config: &SweepConfig) -> Result<Vec<VerificationRecord>> {
    if config.types.is_empty() {
        return Err(Error::UnsupportedType("empty type list".into()));
    }
    let mut data: HashMap<String, CoxeterDatum> = HashMap::new();
    for &t in &config.types {
        if !data.contains_key(&t.label()) {
            data.insert(t.label(), CoxeterDatum::new(t)?);
        }
    }
    let mut items: Vec<(CoxeterType, u64)> = Vec::new();
    for &t in &config.types {
        let primes = if config.primes.is_empty() {
            default_primes_for(t)
        } else {
            config.primes.clone()
        };
        for p in primes {
            items.push((t, p));
        }
    }
    items.sort_by_key(|(t, p)| (t.label(), *p));
    items.dedup();

    let work = |(ctype, p): &(CoxeterType, u64)| -> Result<Vec<VerificationRecord>> {
        item_records(&data[&ctype.label()], *p, &config.chars, config.tolerance)
    };
    let nested: Result<Vec<Vec<VerificationRecord>>> = if config.jobs == 1 {
        items.iter().map(work).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?;
        pool.install(|| items.par_iter().map(work).collect())
    };
    let mut records: Vec<VerificationRecord> = nested?.into_iter().flatten().collect();
    records.sort_by(|a, b| {
        (&a.type_label, a.p, a.char_exponent).cmp(&(&b.type_label, b.p, b.char_exponent))
    });
    Ok(records)
}

fn skip_record(datum: &CoxeterDatum, p: u64, reason: String, ms: u64) -> VerificationRecord {
    VerificationRecord {
        type_label: datum.label(),
        rank: datum.rank(),
        p,
        char_exponent: 0,
        char_order: 0,
        lhs: [0.0, 0.0],
        rhs: [0.0, 0.0],
        abs_err: 0.0,
        pass: true,
        skipped_reason: Some(reason),
        runtime_ms: ms,
    }
}

fn item_records(
    datum: &CoxeterDatum,
    p: u64,
    chars: &CharSelection,
    tolerance: f64,
) -> Result<Vec<VerificationRecord>> {
    let start = Instant::now();
    let order = datum.group_order();
    if order % p == 0 {
        let reason = format!("{p} divides the group order {order}");
        return Ok(vec![skip_record(datum, p, reason, 0)]);
    }
    if (p as f64).powi(datum.rank() as i32) > SECTOR_POINT_CAP {
        let reason = format!(
            "sector point count {p}^{} exceeds the cap of {SECTOR_POINT_CAP:.0}",
            datum.rank()
        );
        return Ok(vec![skip_record(datum, p, reason, 0)]);
    }
    let fp = PrimeField::new(p)?;
    let arr = match datum.reduce_mod_p(&fp) {
        Ok(arr) => arr,
        Err(Error::NonSplitPrime(_)) => {
            let reason = format!("coefficient field has no root modulo {p}");
            return Ok(vec![skip_record(datum, p, reason, 0)]);
        }
        Err(e @ (Error::DegenerateForm(_) | Error::RootVanishes(_))) => {
            return Ok(vec![skip_record(datum, p, e.to_string(), 0)]);
        }
        Err(e) => return Err(e),
    };
    let pts = QuotientPoints::enumerate(&arr)?;
    let mut out = Vec::new();
    for chi in MultChar::all(&fp) {
        if !chars.keeps(&chi) {
            continue;
        }
        let check = check_identity(&arr, &pts, &chi, tolerance)?;
        out.push(VerificationRecord {
            type_label: datum.label(),
            rank: datum.rank(),
            p,
            char_exponent: chi.exponent(),
            char_order: chi.order(),
            lhs: [check.lhs.re, check.lhs.im],
            rhs: [check.rhs.re, check.rhs.im],
            abs_err: check.abs_err,
            pass: check.pass,
            skipped_reason: None,
            runtime_ms: 0,
        });
    }
    let ms = start.elapsed().as_millis() as u64;
    for rec in &mut out {
        rec.runtime_ms = ms;
    }
    Ok(out)
}

/// Copies of the records with `runtime_ms` zeroed, the form compared across
/// runs when checking determinism.
pub fn strip_runtimes(records: &[VerificationRecord]) -> Vec<VerificationRecord> {
    records
        .iter()
        .cloned()
        .map(|mut r| {
            r.runtime_ms = 0;
            r
        })
        .collect()
}

pub fn records_to_json(records: &[VerificationRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

/// CSV with one flat row per record, mirroring the JSON fields.
pub fn records_to_csv(records: &[VerificationRecord]) -> String {
    let mut out = String::from(
        "type,rank,p,char_exponent,char_order,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,pass,skipped_reason,runtime_ms\n",
    );
    for r in records {
        let reason = r.skipped_reason.as_deref().unwrap_or("");
        let reason = if reason.contains(',') || reason.contains('"') {
            format!("\"{}\"", reason.replace('"', "\"\""))
        } else {
            reason.to_string()
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.type_label,
            r.rank,
            r.p,
            r.char_exponent,
            r.char_order,
            r.lhs[0],
            r.lhs[1],
            r.rhs[0],
            r.rhs[1],
            r.abs_err,
            r.pass,
            reason,
            r.runtime_ms,
        ));
    }
    out
}

/// Optional config file contents; every field can be overridden by a flag.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub types: Option<Vec<String>>,
    pub primes: Option<PrimesSpec>,
    pub chars: Option<String>,
    pub tolerance: Option<f64>,
    pub jobs: Option<usize>,
    pub json: Option<String>,
    pub csv: Option<String>,
    pub seed: Option<u64>,
    pub restarts: Option<u32>,
}

/// Primes in a config file: either the range/list string or a bare array.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PrimesSpec {
    Text(String),
    List(Vec<u64>),
}

impl PrimesSpec {
    pub fn resolve(&self) -> Result<Vec<u64>> {
        match self {
            Self::Text(s) => parse_primes(s),
            Self::List(v) => {
                let joined = v
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                parse_primes(&joined)
            }
        }
    }
}

impl FileConfig {
    pub fn load(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::UnsupportedType(format!("config {path}: {e}")))?;
        toml::from_str(&text).map_err(|e| Error::UnsupportedType(format!("config {path}: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_parsing() {
        assert_eq!(parse_primes("5..13").unwrap(), vec![5, 7, 11, 13]);
        assert_eq!(parse_primes("3,7,5").unwrap(), vec![3, 5, 7]);
        assert_eq!(parse_primes("7").unwrap(), vec![7]);
        assert!(parse_primes("9").is_err());
        assert!(parse_primes("x..3").is_err());
    }

    #[test]
    fn char_selection_parsing() {
        assert_eq!(CharSelection::parse("all").unwrap(), CharSelection::All);
        assert_eq!(
            CharSelection::parse("orders=1,2").unwrap(),
            CharSelection::Orders(vec![1, 2])
        );
        assert!(CharSelection::parse("orders=").is_err());
        assert!(CharSelection::parse("some").is_err());
    }

    #[test]
    fn verify_sweep_on_a1() {
        let mut config = SweepConfig::new(vec![CoxeterType::A(1)]);
        config.primes = vec![3, 5];
        let records = run_verify(&config).unwrap();
        assert_eq!(records.len(), 2 + 4);
        assert!(records.iter().all(|r| r.pass && r.skipped_reason.is_none()));
        let keys: Vec<(u64, u64)> = records.iter().map(|r| (r.p, r.char_exponent)).collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn bad_prime_becomes_a_skip_record() {
        let mut config = SweepConfig::new(vec![CoxeterType::B(2)]);
        config.primes = vec![2];
        let records = run_verify(&config).unwrap();
        assert_eq!(records.len(), 1);
        let r = &records[0];
        assert!(r.pass);
        assert_eq!(r.skipped_reason.as_deref(), Some("2 divides the group order 8"));
    }

    #[test]
    fn non_split_prime_becomes_a_skip_record() {
        let mut config = SweepConfig::new(vec![CoxeterType::I2(5)]);
        config.primes = vec![7, 11];
        let records = run_verify(&config).unwrap();
        let skipped: Vec<&VerificationRecord> =
            records.iter().filter(|r| r.skipped_reason.is_some()).collect();
        assert_eq!(skipped.len(), 1);
        assert_eq!(skipped[0].p, 7);
        assert!(skipped[0].skipped_reason.as_deref().unwrap().contains("no root"));
        assert!(records.iter().filter(|r| r.p == 11).all(|r| r.pass));
    }

    #[test]
    fn character_order_filter() {
        let mut config = SweepConfig::new(vec![CoxeterType::A(1)]);
        config.primes = vec![7];
        config.chars = CharSelection::Orders(vec![1, 2]);
        let records = run_verify(&config).unwrap();
        assert_eq!(records.len(), 2);
        assert!(records.iter().all(|r| r.char_order <= 2));
    }

    #[test]
    fn json_shape_and_csv_mirror() {
        let mut config = SweepConfig::new(vec![CoxeterType::A(1)]);
        config.primes = vec![3];
        let records = run_verify(&config).unwrap();
        let json: serde_json::Value =
            serde_json::from_str(&records_to_json(&records)).unwrap();
        let first = &json.as_array().unwrap()[0];
        for key in [
            "type",
            "rank",
            "p",
            "char_exponent",
            "char_order",
            "lhs",
            "rhs",
            "abs_err",
            "pass",
            "runtime_ms",
        ] {
            assert!(first.get(key).is_some(), "missing {key}");
        }
        assert!(first.get("skipped_reason").is_none());

        let csv = records_to_csv(&records);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), records.len() + 1);
        assert!(lines[0].starts_with("type,rank,p,"));
        assert!(lines[1].starts_with("A1,1,3,"));
    }

    #[test]
    fn serial_and_parallel_reports_agree() {
        let mut config = SweepConfig::new(vec![CoxeterType::A(2), CoxeterType::B(2)]);
        config.primes = vec![3, 5, 7];
        config.jobs = 1;
        let serial = run_verify(&config).unwrap();
        config.jobs = 4;
        let parallel = run_verify(&config).unwrap();
        assert_eq!(strip_runtimes(&serial), strip_runtimes(&parallel));
    }

    #[test]
    fn config_file_round_trip() {
        let text = r#"
types = ["A2", "B2"]
primes = "5..13"
chars = "orders=1,2"
tolerance = 1e-6
jobs = 2
seed = 42
restarts = 50
"#;
        let file: FileConfig = toml::from_str(text).unwrap();
        assert_eq!(file.types.as_deref(), Some(&["A2".to_string(), "B2".to_string()][..]));
        assert_eq!(file.primes.unwrap().resolve().unwrap(), vec![5, 7, 11, 13]);
        assert_eq!(file.chars.as_deref(), Some("orders=1,2"));
        assert_eq!(file.seed, Some(42));
        let listy: FileConfig = toml::from_str("primes = [3, 5]").unwrap();
        assert_eq!(listy.primes.unwrap().resolve().unwrap(), vec![3, 5]);
    }

    #[test]
    fn empty_type_list_is_an_error() {
        let config = SweepConfig::new(Vec::new());
        assert!(run_verify(&config).is_err());
    }
}
