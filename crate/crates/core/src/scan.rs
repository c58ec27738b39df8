//! Deterministic, parallel scans over trinomials `x^d - h x^j + 1`.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use rug::Rational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::irreducible::{test_irreducible, IrreducibilityStatus};
use crate::moduli::{count_in_annulus, predicted_annuli};
use crate::poly::TrinomialSpec;
use crate::polytope::{parse_rational, vertices_closed_form, Subset};
use crate::verifier::{
    margin_identity, modulus_separation, sz_bound_on, unit_gap_on_profile, CheckOutcome, Conjugates, Verdict,
};
use crate::DEFAULT_START_BITS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Check {
    Annuli,
    Membership,
    SzRemark,
    UnitGap,
    Separation,
    MarginIdentity,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::Annuli,
        Check::Membership,
        Check::SzRemark,
        Check::UnitGap,
        Check::Separation,
        Check::MarginIdentity,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Check::Annuli => "ANNULI",
            Check::Membership => "MEMBERSHIP",
            Check::SzRemark => "SZ_REMARK",
            Check::UnitGap => "UNIT_GAP",
            Check::Separation => "SEPARATION",
            Check::MarginIdentity => "MARGIN_IDENTITY",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        Check::ALL
            .into_iter()
            .find(|c| c.as_str() == norm)
            .ok_or_else(|| Error::Config(format!("unknown check `{s}`")))
    }
}

/// Which `j` to scan for each `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JRule {
    /// Every `1 <= j < d`.
    All,
    /// Only `j = d - 1`.
    Last,
    /// The listed values that satisfy `1 <= j < d`.
    List(Vec<u32>),
}

impl JRule {
    pub fn values(&self, d: u32) -> Vec<u32> {
        match self {
            JRule::All => (1..d).collect(),
            JRule::Last => (d >= 2).then(|| d - 1).into_iter().collect(),
            JRule::List(js) => {
                let set: BTreeSet<u32> = js.iter().copied().filter(|&j| j >= 1 && j < d).collect();
                set.into_iter().collect()
            }
        }
    }
}

impl FromStr for JRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "all" => Ok(JRule::All),
            "last" => Ok(JRule::Last),
            list => list
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Config(format!("bad j value `{x}`")))
                })
                .collect::<Result<Vec<_>>>()
                .map(JRule::List),
        }
    }
}

/// Parse `a..b` or `a..=b` (both inclusive) or a single value.
pub fn parse_range<T: FromStr + PartialOrd + Copy>(s: &str) -> Result<(T, T)> {
    let bad = || Error::Config(format!("bad range `{s}`"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: T = a.trim().parse().map_err(|_| bad())?;
    let b: T = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Config(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanConfig {
    pub d_range: (u32, u32),
    pub j_rule: JRule,
    /// Range of `|h|`.
    pub h_range: (i64, i64),
    /// Scan `-h` as well as `h`.
    pub both_signs: bool,
    /// `k` values for membership checks; `None` means every `k < d`.
    pub k_range: Option<(usize, usize)>,
    pub precision_cap: u32,
    pub checks: BTreeSet<Check>,
    /// Extra `eps` values for the annulus check, besides `1/2`.
    pub epsilons: Vec<Rational>,
    pub timing: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            d_range: (3, 6),
            j_rule: JRule::All,
            h_range: (3, 10),
            both_signs: false,
            k_range: None,
            precision_cap: crate::DEFAULT_PRECISION_CAP,
            checks: [Check::Annuli].into_iter().collect(),
            epsilons: Vec::new(),
            timing: false,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d_range.0 < 2 || self.d_range.0 > self.d_range.1 {
            return Err(Error::Config("d range must be nonempty and start at 2 or more".into()));
        }
        if self.h_range.0 < 3 || self.h_range.0 > self.h_range.1 {
            return Err(Error::Config("h range must be nonempty with |h| >= 3".into()));
        }
        if let Some((a, b)) = self.k_range {
            if a == 0 || a > b {
                return Err(Error::Config("k range must be nonempty and start at 1".into()));
            }
        }
        if !(53..=4096).contains(&self.precision_cap) {
            return Err(Error::Config(format!(
                "precision cap {} outside 53..=4096",
                self.precision_cap
            )));
        }
        if self.checks.is_empty() {
            return Err(Error::Config("no checks selected".into()));
        }
        if self.keys().is_empty() {
            return Err(Error::Config("the configuration selects no trinomials".into()));
        }
        Ok(())
    }

    /// Every `(d, j, h)` to scan, in output order.
    pub fn keys(&self) -> Vec<(u32, u32, i64)> {
        let mut hs: Vec<i64> = (self.h_range.0..=self.h_range.1).collect();
        if self.both_signs {
            hs.extend((self.h_range.0..=self.h_range.1).map(|h| -h));
        }
        hs.sort_unstable();
        let mut keys = Vec::new();
        for d in self.d_range.0..=self.d_range.1 {
            for j in self.j_rule.values(d) {
                keys.extend(hs.iter().map(|&h| (d, j, h)));
            }
        }
        keys
    }

    fn ks(&self, d: u32) -> Vec<usize> {
        let (a, b) = self.k_range.unwrap_or((1, d as usize - 1));
        (a..=b.min(d as usize - 1)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: Check,
    pub status: CheckStatus,
    pub detail: Value,
}

impl CheckResult {
    fn skip(check: Check, reason: impl Into<String>) -> Self {
        CheckResult {
            check,
            status: CheckStatus::Skip,
            detail: json!({ "reason": reason.into() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRecord {
    pub d: u32,
    pub j: u32,
    pub h: i64,
    pub poly: String,
    pub irreducibility: IrreducibilityStatus,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(rename = "timingMs", skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl ScanRecord {
    pub fn status_of(&self, check: Check) -> Option<CheckStatus> {
        self.checks.iter().find(|c| c.check == check).map(|c| c.status)
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub records: usize,
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
    pub errors: usize,
}

impl ScanSummary {
    pub fn of(records: &[ScanRecord]) -> Self {
        let mut s = ScanSummary {
            records: records.len(),
            ..Default::default()
        };
        for r in records {
            if r.error.is_some() {
                s.errors += 1;
            }
            for c in &r.checks {
                match c.status {
                    CheckStatus::Pass => s.pass += 1,
                    CheckStatus::Fail => s.fail += 1,
                    CheckStatus::Skip => s.skip += 1,
                }
            }
        }
        s
    }
}

/// Run the scan on a pool of `jobs` threads; records come back in key order
/// whatever the pool size.
pub fn run_scan(config: &ScanConfig, jobs: usize) -> Result<Vec<ScanRecord>> {
    config.validate()?;
    let keys = config.keys();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| keys.par_iter().map(|&(d, j, h)| scan_one(config, d, j, h)).collect()))
}

/// One record; errors are captured rather than propagated.
pub fn scan_one(config: &ScanConfig, d: u32, j: u32, h: i64) -> ScanRecord {
    let start = Instant::now();
    let poly = TrinomialSpec::new(d, j, h).map(|s| s.polynomial());
    let mut record = ScanRecord {
        d,
        j,
        h,
        poly: poly.as_ref().map(|p| p.to_string()).unwrap_or_default(),
        irreducibility: IrreducibilityStatus::Unknown,
        checks: Vec::new(),
        error: None,
        timing_ms: None,
    };
    if let Err(e) = run_checks(config, d, j, h, &mut record) {
        record.error = Some(e.to_string());
        let done: BTreeSet<Check> = record.checks.iter().map(|c| c.check).collect();
        for &c in config.checks.iter().filter(|c| !done.contains(c)) {
            record.checks.push(CheckResult::skip(c, e.to_string()));
        }
    }
    if config.timing {
        record.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    record
}

fn run_checks(config: &ScanConfig, d: u32, j: u32, h: i64, record: &mut ScanRecord) -> Result<()> {
    let spec = TrinomialSpec::new(d, j, h)?;
    let p = spec.polynomial();
    let cap = config.precision_cap;
    if !p.is_squarefree() {
        record.irreducibility = test_irreducible(&p, cap)?.status;
        for &c in &config.checks {
            record.checks.push(CheckResult::skip(c, "not squarefree"));
        }
        return Ok(());
    }
    let mut conj = Conjugates::certify(&p, DEFAULT_START_BITS, cap)?;
    record.irreducibility = conj.irreducibility().status;
    let irreducible = record.irreducibility == IrreducibilityStatus::Irreducible;
    for &check in &config.checks {
        let result = if check == Check::Annuli {
            annuli(config, &spec, &conj)
        } else if !irreducible {
            Ok(CheckResult::skip(check, format!("irreducibility {}", record.irreducibility)))
        } else {
            match check {
                Check::Annuli => unreachable!(),
                Check::Membership => membership(config, d, &mut conj),
                Check::SzRemark => sz_bound(d, j, h, &mut conj),
                Check::UnitGap => unit_gap(&conj),
                Check::Separation => separation(&conj),
                Check::MarginIdentity => identity(d, &conj),
            }
        };
        let result = match result {
            Err(e) if e.is_precision_cap() => CheckResult::skip(check, e.to_string()),
            other => other?,
        };
        record.checks.push(result);
    }
    Ok(())
}

fn annuli(config: &ScanConfig, spec: &TrinomialSpec, conj: &Conjugates) -> Result<CheckResult> {
    let mut eps: Vec<Rational> = vec![Rational::from((1, 2))];
    for e in &config.epsilons {
        if !eps.contains(e) {
            eps.push(e.clone());
        }
    }
    let mut rows = Vec::new();
    let mut status = CheckStatus::Pass;
    let mut checked = 0;
    for e in &eps {
        let pred = match predicted_annuli(spec, e) {
            Ok(p) => p,
            Err(Error::EpsilonOutOfRange { .. }) => {
                rows.push(json!({"eps": e.to_string(), "status": "SKIP", "reason": "eps outside admissible range"}));
                continue;
            }
            Err(err) => return Err(err),
        };
        let counts = count_in_annulus(conj.profile(), &pred.inner_low, &pred.inner_high)
            .and_then(|i| Ok((i, count_in_annulus(conj.profile(), &pred.outer_low, &pred.outer_high)?)));
        match counts {
            Ok((inner, outer)) => {
                checked += 1;
                let ok = inner == pred.inner_count && outer == pred.outer_count;
                if !ok {
                    status = CheckStatus::Fail;
                }
                rows.push(json!({
                    "eps": e.to_string(),
                    "status": if ok { "PASS" } else { "FAIL" },
                    "inner": inner,
                    "outer": outer,
                    "expectedInner": pred.inner_count,
                    "expectedOuter": pred.outer_count,
                }));
            }
            Err(err @ Error::BoundaryOverlap { .. }) => {
                rows.push(json!({"eps": e.to_string(), "status": "SKIP", "reason": err.to_string()}));
            }
            Err(err) => return Err(err),
        }
    }
    if checked == 0 && status == CheckStatus::Pass {
        status = CheckStatus::Skip;
    }
    Ok(CheckResult {
        check: Check::Annuli,
        status,
        detail: json!({ "annuli": rows }),
    })
}

fn membership(config: &ScanConfig, d: u32, conj: &mut Conjugates) -> Result<CheckResult> {
    let root_of_unity = conj.poly().is_root_of_unity()?;
    let mut status = CheckStatus::Pass;
    let mut per_k = Vec::new();
    for k in config.ks(d) {
        let strict = d as usize > 3 * k && !root_of_unity;
        let (mut pos, mut neg, mut ind) = (0, 0, 0);
        let mut offending = Vec::new();
        for v in vertices_closed_form(k, d as usize)?.vertices() {
            let r = conj.margin(&v.point, Some(v.subset))?;
            match r.verdict {
                Verdict::Positive => pos += 1,
                Verdict::Negative => neg += 1,
                Verdict::Indeterminate => ind += 1,
            }
            if r.verdict == Verdict::Negative || (strict && r.verdict != Verdict::Positive) {
                status = CheckStatus::Fail;
                offending.push(r.to_json());
            }
        }
        per_k.push(json!({
            "k": k,
            "strict": strict,
            "positive": pos,
            "negative": neg,
            "indeterminate": ind,
            "offending": offending,
        }));
    }
    Ok(CheckResult {
        check: Check::Membership,
        status,
        detail: json!({ "byK": per_k }),
    })
}

fn sz_bound(d: u32, j: u32, h: i64, conj: &mut Conjugates) -> Result<CheckResult> {
    if j + 1 != d {
        return Ok(CheckResult::skip(Check::SzRemark, "only defined for j = d - 1"));
    }
    let r = sz_bound_on(conj, h)?;
    let status = match r.outcome {
        CheckOutcome::Holds => CheckStatus::Pass,
        CheckOutcome::Fails => CheckStatus::Fail,
        CheckOutcome::Indeterminate | CheckOutcome::Skipped => CheckStatus::Skip,
    };
    Ok(CheckResult {
        check: Check::SzRemark,
        status,
        detail: r.to_json(),
    })
}

fn unit_gap(conj: &Conjugates) -> Result<CheckResult> {
    if conj.poly().is_root_of_unity()? {
        return Ok(CheckResult::skip(Check::UnitGap, "root of unity"));
    }
    if !conj.poly().is_unit()? {
        return Ok(CheckResult::skip(Check::UnitGap, "not a unit"));
    }
    let g = unit_gap_on_profile(conj.profile())?;
    Ok(CheckResult {
        check: Check::UnitGap,
        status: if g.holds { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: serde_json::to_value(&g).expect("serializable"),
    })
}

fn separation(conj: &Conjugates) -> Result<CheckResult> {
    match modulus_separation(conj.profile()) {
        Ok(r) => Ok(CheckResult {
            check: Check::Separation,
            status: if *r.gap.lo() > 0 {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            detail: r.to_json(),
        }),
        Err(Error::NoGap) => Ok(CheckResult::skip(Check::Separation, "all moduli tied")),
        Err(e) => Err(e),
    }
}

/// The residual depends on `J` only through its largest element, so one
/// evaluation per `i_n` in `1..=d-2` covers every admissible `(k, J)`.
fn identity(d: u32, conj: &Conjugates) -> Result<CheckResult> {
    if !conj.poly().is_unit()? {
        return Ok(CheckResult::skip(Check::MarginIdentity, "not a unit"));
    }
    if d < 3 {
        return Ok(CheckResult::skip(Check::MarginIdentity, "no admissible subset"));
    }
    let mut status = CheckStatus::Pass;
    let mut max_width = rug::Float::new(64);
    for i_n in 1..=(d as usize - 2) {
        let r = margin_identity(conj.profile(), d as usize - 1, Subset::singleton(i_n))?;
        if !r.holds() {
            status = CheckStatus::Fail;
        }
        let w = r.residual.width();
        if w > max_width {
            max_width = w;
        }
    }
    Ok(CheckResult {
        check: Check::MarginIdentity,
        status,
        detail: json!({
            "largestElements": d - 2,
            "maxResidualWidth": crate::interval::decimal(&max_width, 6, rug::float::Round::Up),
            "bits": conj.profile().bits(),
        }),
    })
}

pub fn to_json(records: &[ScanRecord]) -> Value {
    json!({
        "summary": ScanSummary::of(records),
        "records": records,
    })
}

/// Flat CSV: key columns, then a status and compact detail per check.
pub fn write_csv<W: Write>(records: &[ScanRecord], checks: &BTreeSet<Check>, timing: bool, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["d".to_string(), "j".into(), "h".into(), "poly".into(), "irreducibility".into()];
    for c in checks {
        header.push(format!("{}_status", c.as_str().to_ascii_lowercase()));
        header.push(format!("{}_detail", c.as_str().to_ascii_lowercase()));
    }
    header.push("error".into());
    if timing {
        header.push("timing_ms".into());
    }
    w.write_record(&header).map_err(csv_err)?;
    for r in records {
        let mut row = vec![
            r.d.to_string(),
            r.j.to_string(),
            r.h.to_string(),
            r.poly.clone(),
            r.irreducibility.to_string(),
        ];
        for c in checks {
            match r.checks.iter().find(|x| x.check == *c) {
                Some(x) => {
                    row.push(serde_json::to_value(x.status).expect("serializable").as_str().unwrap_or("").to_string());
                    row.push(x.detail.to_string());
                }
                None => {
                    row.push(String::new());
                    row.push(String::new());
                }
            }
        }
        row.push(r.error.clone().unwrap_or_default());
        if timing {
            row.push(r.timing_ms.map(|t| format!("{t:.3}")).unwrap_or_default());
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Parse an `eps` list such as `0.2,1/2,0.8`.
pub fn parse_epsilons(s: &str) -> Result<Vec<Rational>> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(|x| parse_rational(x.trim())).collect()
}
