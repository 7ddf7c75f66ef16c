//! Suite configuration, the parallel runner and report emission.
//!
//! A run enumerates `(statement, p, params)` tuples in a fixed order, evaluates
//! them on a rayon pool and collects results by index, so the JSON output does
//! not depend on the worker count. Precondition failures become [`Skip`]
//! entries with a short reason code.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::is_prime;
use crate::rational::{format_rational, parse_rational, serde_rational};
use crate::special::warm_up;
use crate::verifier::{check, Params, Record, SideResidue, StatementId};

/// Default `x` sample set.
pub const X_SAMPLES: [&str; 10] = ["-1/2", "-1/3", "-1/4", "-1/6", "0", "1", "2", "1/5", "-2/7", "7/3"];
/// Default `d` sample set.
pub const D_SAMPLES: [&str; 7] = ["1", "-1", "2", "1/2", "3", "-16", "5/3"];

/// Bound on numerator and denominator of randomly drawn `(x, d)`.
pub const RANDOM_BOUND: i64 = 50;

fn parse_all(items: &[&str]) -> Vec<BigRational> {
    items.iter().map(|s| parse_rational(s).expect("sample literal")).collect()
}

pub fn default_x_set() -> Vec<BigRational> {
    parse_all(&X_SAMPLES)
}

pub fn default_d_set() -> Vec<BigRational> {
    parse_all(&D_SAMPLES)
}

/// `"all"` or an explicit list of statement ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    All,
    List(Vec<StatementId>),
}

impl Selection {
    pub fn ids(&self) -> Vec<StatementId> {
        match self {
            Selection::All => StatementId::ALL.to_vec(),
            Selection::List(ids) => ids.clone(),
        }
    }
}

impl Serialize for Selection {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Selection::All => s.serialize_str("all"),
            Selection::List(ids) => ids.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Selection {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Word(String),
            List(Vec<StatementId>),
        }
        match Raw::deserialize(d)? {
            Raw::Word(w) if w == "all" => Ok(Selection::All),
            Raw::Word(w) => Err(de::Error::custom(format!("expected \"all\" or a list, got {w:?}"))),
            Raw::List(ids) => Ok(Selection::List(ids)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomTrials {
    pub count: u64,
    pub seed: u64,
}

fn default_n_max() -> u64 {
    25
}

fn default_true() -> bool {
    true
}

fn default_parallelism() -> usize {
    1
}

/// Declarative run description, read from JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub statements: Selection,
    pub prime_min: u64,
    pub prime_max: u64,
    #[serde(with = "serde_rational::vec", default = "default_x_set")]
    pub x_set: Vec<BigRational>,
    #[serde(with = "serde_rational::vec", default = "default_d_set")]
    pub d_set: Vec<BigRational>,
    #[serde(default = "default_n_max")]
    pub identity_n_max: u64,
    #[serde(default)]
    pub random_trials: Option<RandomTrials>,
    /// Worker count; `0` lets rayon pick.
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default = "default_true")]
    pub dual_reading: bool,
    /// Per-record and total wall-clock times. Off by default since they break byte-identical output.
    #[serde(default)]
    pub record_timings: bool,
}

impl SuiteConfig {
    pub fn new(statements: Selection, prime_min: u64, prime_max: u64) -> Self {
        SuiteConfig {
            statements,
            prime_min,
            prime_max,
            x_set: default_x_set(),
            d_set: default_d_set(),
            identity_n_max: default_n_max(),
            random_trials: None,
            parallelism: default_parallelism(),
            dual_reading: true,
            record_timings: false,
        }
    }

    /// Parse and validate a JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let config: SuiteConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(vec![e.to_string()]))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Collects every violated invariant.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if let Selection::List(ids) = &self.statements {
            if ids.is_empty() {
                problems.push("statements: list is empty".to_string());
            }
        }
        if self.prime_min < 3 {
            problems.push(format!("prime_min: must be at least 3, got {}", self.prime_min));
        }
        if self.prime_min > self.prime_max {
            problems.push(format!(
                "prime_max: must be at least prime_min ({}), got {}",
                self.prime_min, self.prime_max
            ));
        }
        if self.identity_n_max < 1 {
            problems.push("identity_n_max: must be at least 1".to_string());
        }
        if self.d_set.iter().any(|d| d == &BigRational::from_integer(BigInt::from(0))) {
            problems.push("d_set: 0 is not allowed".to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(problems))
        }
    }

    fn primes(&self) -> Vec<u64> {
        (self.prime_min..=self.prime_max).filter(|&p| p > 2 && is_prime(p)).collect()
    }

    /// Grid pairs followed by seeded random pairs.
    fn identity_pairs(&self) -> Vec<(BigRational, BigRational)> {
        let mut pairs: Vec<_> = self
            .x_set
            .iter()
            .flat_map(|x| self.d_set.iter().map(move |d| (x.clone(), d.clone())))
            .collect();
        if let Some(trials) = self.random_trials {
            pairs.extend(random_pairs(trials.count, trials.seed));
        }
        pairs
    }
}

/// `count` pairs `(x, d)` with numerators and denominators bounded by [`RANDOM_BOUND`]; `d ≠ 0`.
pub fn random_pairs(count: u64, seed: u64) -> Vec<(BigRational, BigRational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |nonzero: bool| loop {
        let n: i64 = rng.gen_range(-RANDOM_BOUND..=RANDOM_BOUND);
        let d: i64 = rng.gen_range(1..=RANDOM_BOUND);
        if !(nonzero && n == 0) {
            return BigRational::new(n.into(), d.into());
        }
    };
    (0..count).map(|_| (draw(false), draw(true))).collect()
}

/// One unit of work.
#[derive(Debug, Clone)]
struct Task {
    statement: StatementId,
    p: Option<u64>,
    params: Params,
}

fn tasks_for(id: StatementId, config: &SuiteConfig, primes: &[u64], pairs: &[(BigRational, BigRational)]) -> Vec<Task> {
    let needs = id.needs();
    let mut out = Vec::new();
    let push = |out: &mut Vec<Task>, p: Option<u64>, params: Params| {
        out.push(Task {
            statement: id,
            p,
            params,
        })
    };
    if !needs.prime {
        for (x, d) in pairs {
            for n in 0..=config.identity_n_max {
                let params = Params {
                    x: Some(x.clone()),
                    d: Some(d.clone()),
                    n: Some(n),
                    ..Params::default()
                };
                push(&mut out, None, params);
            }
        }
        return out;
    }
    let xs: Vec<Option<&BigRational>> = if needs.x {
        config.x_set.iter().map(Some).collect()
    } else {
        vec![None]
    };
    let ds: Vec<Option<&BigRational>> = if needs.d {
        config.d_set.iter().map(Some).collect()
    } else {
        vec![None]
    };
    for &p in primes {
        let ks: Vec<Option<u64>> = if needs.k { (0..p).map(Some).collect() } else { vec![None] };
        for x in &xs {
            for d in &ds {
                for &k in &ks {
                    let params = Params {
                        x: x.cloned(),
                        d: d.cloned(),
                        k,
                        n: None,
                    };
                    push(&mut out, Some(p), params);
                }
            }
        }
    }
    out
}

/// A tuple that was requested but not run because a precondition failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skip {
    pub statement: StatementId,
    pub p: Option<u64>,
    #[serde(with = "serde_rational::option")]
    pub x: Option<BigRational>,
    #[serde(with = "serde_rational::option")]
    pub d: Option<BigRational>,
    pub k: Option<u64>,
    pub reason: String,
    pub detail: String,
}

/// Machine-readable code for an error that marks a tuple as outside a statement's hypotheses.
pub fn skip_reason(err: &Error) -> Option<&'static str> {
    match err {
        Error::OutOfRangePrime { .. } => Some("prime-out-of-range"),
        Error::WrongResidueClass { .. } => Some("wrong-residue-class"),
        Error::NotPAdicInteger { .. } => Some("x-not-p-integral"),
        Error::DNotUnit { .. } => Some("d-not-unit"),
        Error::ZeroD => Some("d-zero"),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementSummary {
    pub statement: StatementId,
    pub pass: u64,
    pub fail: u64,
    pub skipped: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub records: u64,
    pub pass: u64,
    pub fail: u64,
    pub skipped: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub statements: Vec<StatementSummary>,
    pub totals: Totals,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_micros: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub records: Vec<Record>,
    pub skipped: Vec<Skip>,
    pub summary: Summary,
}

fn summarize(ids: &[StatementId], records: &[Record], skipped: &[Skip]) -> Summary {
    let mut rows: Vec<StatementSummary> = Vec::new();
    let mut index = BTreeMap::new();
    for &id in ids {
        if index.contains_key(id.name()) {
            continue;
        }
        index.insert(id.name(), rows.len());
        rows.push(StatementSummary {
            statement: id,
            pass: 0,
            fail: 0,
            skipped: BTreeMap::new(),
        });
    }
    let mut row_for = |id: StatementId, rows: &mut Vec<StatementSummary>| -> usize {
        *index.entry(id.name()).or_insert_with(|| {
            rows.push(StatementSummary {
                statement: id,
                pass: 0,
                fail: 0,
                skipped: BTreeMap::new(),
            });
            rows.len() - 1
        })
    };
    let mut totals = Totals::default();
    for r in records {
        let i = row_for(r.statement(), &mut rows);
        totals.records += 1;
        if r.pass() {
            rows[i].pass += 1;
            totals.pass += 1;
        } else {
            rows[i].fail += 1;
            totals.fail += 1;
        }
    }
    for s in skipped {
        let i = row_for(s.statement, &mut rows);
        *rows[i].skipped.entry(s.reason.clone()).or_default() += 1;
        totals.skipped += 1;
    }
    Summary {
        statements: rows,
        totals,
        wall_clock_micros: None,
    }
}

enum Outcome {
    Done(Record),
    Skipped(Skip),
}

fn run_task(task: &Task, config: &SuiteConfig) -> Result<Outcome> {
    match check(task.statement, task.p, &task.params) {
        Ok(mut record) => {
            if !config.record_timings {
                record.set_elapsed(None);
            }
            if !config.dual_reading {
                match &mut record {
                    Record::Congruence(r) => r.alternate = None,
                    Record::Identity(r) => r.alternate = None,
                }
            }
            Ok(Outcome::Done(record))
        }
        Err(e) => match skip_reason(&e) {
            Some(reason) => Ok(Outcome::Skipped(Skip {
                statement: task.statement,
                p: task.p,
                x: task.params.x.clone(),
                d: task.params.d.clone(),
                k: task.params.k,
                reason: reason.to_string(),
                detail: e.to_string(),
            })),
            None => Err(e),
        },
    }
}

fn execute(config: &SuiteConfig, tasks: Vec<Task>) -> Result<Report> {
    let started = Instant::now();
    // Fill the shared tables before workers start reading them.
    warm_up(config.prime_max + 2);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| Error::InvalidConfig(vec![format!("parallelism: {e}")]))?;
    let outcomes: Vec<Result<Outcome>> = pool.install(|| tasks.par_iter().map(|t| run_task(t, config)).collect());
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        match o? {
            Outcome::Done(r) => records.push(r),
            Outcome::Skipped(s) => skipped.push(s),
        }
    }
    let mut summary = summarize(&config.statements.ids(), &records, &skipped);
    if config.record_timings {
        summary.wall_clock_micros = Some(started.elapsed().as_micros() as u64);
    }
    Ok(Report {
        config: config.clone(),
        records,
        skipped,
        summary,
    })
}

/// Run every tuple the configuration describes.
pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    config.validate()?;
    let primes = config.primes();
    let pairs = config.identity_pairs();
    let tasks: Vec<Task> = config
        .statements
        .ids()
        .into_iter()
        .flat_map(|id| tasks_for(id, config, &primes, &pairs))
        .collect();
    execute(config, tasks)
}

/// Run a single instance and wrap it in a report.
pub fn run_single(id: StatementId, p: Option<u64>, params: Params) -> Result<Report> {
    let prime = p.unwrap_or(3);
    let mut config = SuiteConfig::new(Selection::List(vec![id]), prime.max(3), prime.max(3));
    config.x_set = params.x.iter().cloned().collect();
    config.d_set = params.d.iter().cloned().collect();
    if let Some(n) = params.n {
        config.identity_n_max = n.max(1);
    }
    let task = Task {
        statement: id,
        p,
        params,
    };
    execute(&config, vec![task])
}

impl Report {
    /// `0` iff no executed record failed.
    pub fn exit_code(&self) -> i32 {
        if self.summary.totals.fail == 0 {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::InvalidConfig(vec![format!("format: unknown {other:?}")])),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        })
    }
}

const DASH: &str = "-";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| DASH.to_string(), |v| v.to_string())
}

fn opt_rat(q: &Option<BigRational>) -> String {
    q.as_ref().map_or_else(|| DASH.to_string(), format_rational)
}

fn side(s: &SideResidue) -> String {
    s.to_string()
}

/// CSV columns: statement,p,x,d,case,exponent,lhs,rhs,pass.
/// Identity rows put `n=<n>` in `case`, `exact` in `exponent`, and `;`-joined sides.
fn csv_row(r: &Record) -> [String; 9] {
    match r {
        Record::Congruence(v) => [
            v.statement.to_string(),
            v.p.to_string(),
            opt_rat(&v.x),
            opt_rat(&v.d),
            opt(v.case.as_ref()),
            v.modulus_exponent.to_string(),
            side(&v.lhs),
            side(&v.rhs),
            v.pass.to_string(),
        ],
        Record::Identity(i) => {
            let join = |f: fn(&crate::verifier::Equation) -> &BigRational| {
                i.equations.iter().map(|e| format_rational(f(e))).collect::<Vec<_>>().join(";")
            };
            [
                i.statement.to_string(),
                opt(i.p),
                format_rational(&i.x),
                format_rational(&i.d),
                format!("n={}", i.n),
                "exact".to_string(),
                join(|e| &e.lhs),
                join(|e| &e.rhs),
                i.pass.to_string(),
            ]
        }
    }
}

fn write_csv(report: &Report, out: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["statement", "p", "x", "d", "case", "exponent", "lhs", "rhs", "pass"])
        .map_err(io)?;
    for r in &report.records {
        w.write_record(csv_row(r)).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

fn write_text(report: &Report, out: &mut dyn Write) -> Result<()> {
    let width = report
        .summary
        .statements
        .iter()
        .map(|s| s.statement.name().len())
        .max()
        .unwrap_or(9)
        .max(9);
    writeln!(out, "{:<width$}  {:>7}  {:>7}  {:>7}", "statement", "pass", "fail", "skipped")?;
    for s in &report.summary.statements {
        let skipped: u64 = s.skipped.values().sum();
        let reasons = s
            .skipped
            .iter()
            .map(|(k, v)| format!("{k}:{v}"))
            .collect::<Vec<_>>()
            .join(" ");
        let line = format!(
            "{:<width$}  {:>7}  {:>7}  {:>7}  {}",
            s.statement.name(),
            s.pass,
            s.fail,
            skipped,
            reasons
        );
        writeln!(out, "{}", line.trim_end())?;
    }
    let t = &report.summary.totals;
    writeln!(
        out,
        "{:<width$}  {:>7}  {:>7}  {:>7}",
        "total", t.pass, t.fail, t.skipped
    )?;
    let failures: Vec<_> = report.records.iter().filter(|r| !r.pass()).collect();
    if !failures.is_empty() {
        writeln!(out, "\nfailures:")?;
        for r in failures {
            writeln!(out, "  {}", csv_row(r).join(","))?;
        }
    }
    if let Some(us) = report.summary.wall_clock_micros {
        writeln!(out, "\nwall clock: {:.3} s", us as f64 / 1e6)?;
    }
    Ok(())
}

/// Write `report` in `format` to `out`.
pub fn emit(report: &Report, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)?;
        }
        Format::Csv => write_csv(report, out)?,
        Format::Text => write_text(report, out)?,
    }
    out.flush()?;
    Ok(())
}

/// [`emit`] to a file, or to standard output when `path` is `None`.
pub fn emit_to(report: &Report, format: Format, path: Option<&Path>) -> Result<()> {
    match path {
        Some(path) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
            emit(report, format, &mut file)
        }
        None => emit(report, format, &mut std::io::stdout().lock()),
    }
}
