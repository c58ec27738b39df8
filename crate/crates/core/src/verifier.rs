//! Certified evaluation of conjugate-modulus products
//! `|a_0| |a_1|^(c_1) … |a_k|^(c_k)` and related checks on a modulus profile.

use rug::{Integer, Rational};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::irreducible::{test_irreducible_with_roots, IrreducibilityStatus, IrreducibilityVerdict};
use crate::moduli::{sorted_moduli, ModulusProfile, TieKind};
use crate::poly::{IntPolynomial, TrinomialSpec};
use crate::polytope::{RationalPoint, Subset};
use crate::roots::RootSet;
use crate::DEFAULT_START_BITS;

/// Digits shown for interval endpoints in reports.
const REPORT_DIGITS: usize = 40;

/// Position of a certified value relative to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// Certainly above 1.
    Positive,
    /// Certainly below 1.
    Negative,
    /// Contains 1 at the precision cap.
    Indeterminate,
}

impl Verdict {
    /// Compare an interval with 1; `None` while it still contains 1.
    pub fn decide(value: &Interval) -> Option<Verdict> {
        if *value.lo() > 1 {
            Some(Verdict::Positive)
        } else if *value.hi() < 1 {
            Some(Verdict::Negative)
        } else {
            None
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Positive => "POSITIVE",
            Verdict::Negative => "NEGATIVE",
            Verdict::Indeterminate => "INDETERMINATE",
        }
    }
}

fn check_exponents(profile: &ModulusProfile, c: &RationalPoint) -> Result<()> {
    let d = profile.degree();
    if c.dim() >= d {
        return Err(Error::DimensionMismatch {
            expected: d - 1,
            got: c.dim(),
        });
    }
    if let Some(i) = c.coords().iter().position(|x| *x < 0) {
        return Err(Error::NegativeExponent { index: i + 1 });
    }
    Ok(())
}

/// `|a_0| prod |a_i|^(c_i)` from the profile as it stands, in the log
/// domain. `None` when a modulus with nonzero exponent may still be 0.
pub fn product_at(profile: &ModulusProfile, c: &RationalPoint) -> Result<Option<Interval>> {
    product_at_prec(profile, c, profile.prec())
}

/// As [`product_at`], with the arithmetic carried out at `prec` bits. The
/// moduli are rounded outward, so the result stays an enclosure.
pub fn product_at_prec(profile: &ModulusProfile, c: &RationalPoint, prec: u32) -> Result<Option<Interval>> {
    check_exponents(profile, c)?;
    let Some(mut acc) = profile.modulus(0).ln(prec) else {
        return Ok(None);
    };
    for (i, ci) in c.coords().iter().enumerate() {
        if *ci == 0 {
            continue;
        }
        let Some(l) = profile.modulus(i + 1).ln(prec) else {
            return Ok(None);
        };
        acc = acc.add(&l.mul(&Interval::from_rational(ci, prec), prec), prec);
    }
    Ok(Some(acc.exp(prec)))
}

/// The same product raised to the common denominator `q` of `c`, using
/// integer powers only.
pub fn power_form_at(profile: &ModulusProfile, c: &RationalPoint, prec: u32) -> Result<Option<Interval>> {
    check_exponents(profile, c)?;
    let Some(q) = c.common_denominator().to_u32() else {
        return Ok(None);
    };
    let mut acc = profile.modulus(0).pow_u(q, prec);
    for (i, ci) in c.coords().iter().enumerate() {
        let e = ci.numer() * Integer::from(q) / ci.denom();
        let Some(e) = e.to_u32() else {
            return Ok(None);
        };
        if e > 0 {
            acc = acc.mul(&profile.modulus(i + 1).pow_u(e, prec), prec);
        }
    }
    Ok(Some(acc))
}

/// Certified `|a_0| prod |a_i|^(c_i)`, refining until the relative width is
/// at most `2^-32` or the cap is reached.
pub fn conjugate_product(profile: &ModulusProfile, c: &RationalPoint) -> Result<Interval> {
    let mut current = profile.clone();
    loop {
        let value = product_at(&current, c)?;
        if let Some(v) = &value {
            let tol = v.lo().clone() >> 32u32;
            if v.width() <= tol {
                return Ok(v.clone());
            }
        }
        match current.refined()? {
            Some(next) => current = next,
            None => return value.ok_or(Error::ModulusContainsZero),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MarginReport {
    pub poly: IntPolynomial,
    pub k: usize,
    pub subset: Option<Subset>,
    pub point: RationalPoint,
    /// Interval containing `|a_0| prod |a_i|^(c_i)`.
    pub value: Interval,
    pub verdict: Verdict,
    pub precision_bits: u32,
    /// Verdict of the integer-power form, when it was decided.
    pub power_verdict: Option<Verdict>,
}

impl MarginReport {
    /// Interval for the margin `value - 1`.
    pub fn margin(&self) -> Interval {
        let prec = self.value.lo().prec().max(self.value.hi().prec());
        self.value.sub(&Interval::from_i64(1, prec), prec)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "poly": self.poly.to_string(),
            "k": self.k,
            "subsetJ": self.subset,
            "c": self.point.to_strings(),
            "value": self.value.to_json(self.precision_bits, REPORT_DIGITS),
            "verdict": self.verdict,
        })
    }
}

/// One rung of the ladder: a profile and the logarithms of its moduli, at
/// full precision and rounded to 128 bits.
#[derive(Clone, Debug)]
struct Rung {
    profile: ModulusProfile,
    logs: Vec<Option<Interval>>,
    coarse: Vec<Option<Interval>>,
}

const COARSE_BITS: u32 = 128;

impl Rung {
    fn new(profile: ModulusProfile) -> Self {
        let prec = profile.prec();
        let logs: Vec<_> = (0..profile.degree()).map(|i| profile.modulus(i).ln(prec)).collect();
        let coarse = logs.iter().map(|l| l.as_ref().map(|l| l.round_to(COARSE_BITS))).collect();
        Rung { profile, logs, coarse }
    }

    /// `ln(|a_0| prod |a_i|^(c_i))`.
    fn log_product(&self, c: &RationalPoint, coarse: bool) -> Option<Interval> {
        let (logs, prec) = if coarse {
            (&self.coarse, COARSE_BITS)
        } else {
            (&self.logs, self.profile.prec())
        };
        let mut acc = logs[0].clone()?;
        for (i, ci) in c.coords().iter().enumerate() {
            if *ci != 0 {
                let l = logs[i + 1].as_ref()?;
                acc = acc.add(&l.mul(&Interval::from_rational(ci, prec), prec), prec);
            }
        }
        Some(acc)
    }
}

/// Sign of a log-domain value, as a verdict on the value itself.
fn decide_log(log: &Interval) -> Option<Verdict> {
    if *log.lo() > 0 {
        Some(Verdict::Positive)
    } else if *log.hi() < 0 {
        Some(Verdict::Negative)
    } else {
        None
    }
}

/// Certified conjugates of one monic polynomial, with its irreducibility
/// verdict and a lazily extended ladder of modulus profiles.
#[derive(Clone, Debug)]
pub struct Conjugates {
    irreducibility: IrreducibilityVerdict,
    rungs: Vec<Rung>,
}

impl Conjugates {
    pub fn certify(p: &IntPolynomial, start_bits: u32, cap: u32) -> Result<Self> {
        p.require_monic()?;
        let start = start_bits.min(cap);
        let roots = RootSet::solve(p, start)?;
        let irreducibility = test_irreducible_with_roots(p, &roots, cap)?;
        let profile = sorted_moduli(&roots, cap)?;
        Ok(Conjugates {
            irreducibility,
            rungs: vec![Rung::new(profile)],
        })
    }

    pub fn poly(&self) -> &IntPolynomial {
        self.rungs[0].profile.poly()
    }

    pub fn irreducibility(&self) -> &IrreducibilityVerdict {
        &self.irreducibility
    }

    pub fn require_irreducible(&self) -> Result<()> {
        match self.irreducibility.status {
            IrreducibilityStatus::Irreducible => Ok(()),
            s => Err(Error::NotIrreducible(s)),
        }
    }

    /// The least refined profile.
    pub fn profile(&self) -> &ModulusProfile {
        &self.rungs[0].profile
    }

    pub fn cap(&self) -> u32 {
        self.rungs[0].profile.cap()
    }

    fn ensure(&mut self, i: usize) -> Result<bool> {
        while self.rungs.len() <= i {
            match self.rungs.last().expect("nonempty").profile.refined()? {
                Some(next) => self.rungs.push(Rung::new(next)),
                None => return Ok(false),
            }
        }
        Ok(true)
    }

    /// Profile at rung `i` of the ladder, refining on demand; `None` past
    /// the cap.
    pub fn rung(&mut self, i: usize) -> Result<Option<&ModulusProfile>> {
        Ok(if self.ensure(i)? { Some(&self.rungs[i].profile) } else { None })
    }

    /// Lowest rung certified to at least `bits`, clipped to the cap.
    pub fn profile_with_bits(&mut self, bits: u32) -> Result<&ModulusProfile> {
        let mut i = 0;
        while self.ensure(i + 1)? && self.rungs[i].profile.bits() < bits {
            i += 1;
        }
        Ok(&self.rungs[i].profile)
    }

    /// Decide `|a_0| prod |a_i|^(c_i)` against 1, refining until decided or
    /// at the cap, and cross-check with the integer-power form. Each rung is
    /// tried at 128 bits before full precision.
    pub fn margin(&mut self, c: &RationalPoint, subset: Option<Subset>) -> Result<MarginReport> {
        check_exponents(self.profile(), c)?;
        let mut i = 0;
        loop {
            self.ensure(i)?;
            let rung = &self.rungs[i];
            let full = rung.profile.prec();
            let mut log = rung.log_product(c, true);
            let mut wp = COARSE_BITS;
            let mut decided = log.as_ref().and_then(decide_log);
            if decided.is_none() && full > COARSE_BITS {
                log = rung.log_product(c, false);
                wp = full;
                decided = log.as_ref().and_then(decide_log);
            }
            if decided.is_some() || rung.profile.at_cap() {
                let profile = &rung.profile;
                let Some(log) = log else {
                    return Err(Error::ModulusContainsZero);
                };
                let value = log.exp(wp);
                let verdict = decided.unwrap_or(Verdict::Indeterminate);
                let power_verdict = power_form_at(profile, c, wp)?.as_ref().and_then(Verdict::decide);
                if let Some(pv) = power_verdict {
                    if verdict != Verdict::Indeterminate && pv != verdict {
                        return Err(Error::Consistency(format!(
                            "log-domain and integer-power evaluations disagree for {} at {}",
                            profile.poly(),
                            c
                        )));
                    }
                }
                return Ok(MarginReport {
                    poly: profile.poly().clone(),
                    k: c.dim(),
                    subset,
                    point: c.clone(),
                    value,
                    verdict,
                    precision_bits: profile.bits(),
                    power_verdict,
                });
            }
            i += 1;
        }
    }
}

/// Margin report for `p` at `c`; `p` must be certified irreducible.
pub fn check_membership_witness(p: &IntPolynomial, c: &RationalPoint, cap: u32) -> Result<MarginReport> {
    let mut conj = Conjugates::certify(p, DEFAULT_START_BITS, cap)?;
    conj.require_irreducible()?;
    conj.margin(c, None)
}

/// Both sides of `prod_(i<=d-2) |a_i| * |a_(i_n)| - 1 = prod_(i<=d-2) |a_i| * (|a_(i_n)| - |a_(d-1)|)`
/// for a polynomial with `|a_0 … a_(d-1)| = 1`, and their difference.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub poly: IntPolynomial,
    pub k: usize,
    pub subset: Subset,
    pub lhs: Interval,
    pub rhs: Interval,
    pub residual: Interval,
    pub bits: u32,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.residual.contains_zero()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "poly": self.poly.to_string(),
            "k": self.k,
            "subsetJ": self.subset,
            "lhs": self.lhs.to_json(self.bits, REPORT_DIGITS),
            "rhs": self.rhs.to_json(self.bits, REPORT_DIGITS),
            "residual": self.residual.to_json(self.bits, REPORT_DIGITS),
            "containsZero": self.holds(),
        })
    }
}

pub fn margin_identity(profile: &ModulusProfile, k: usize, subset: Subset) -> Result<IdentityReport> {
    let p = profile.poly();
    p.require_monic()?;
    if *p.constant() != 1 && *p.constant() != -1 {
        return Err(Error::NotUnit(p.to_string()));
    }
    let d = profile.degree();
    if k == 0 || k >= d {
        return Err(Error::InvalidDimension { k, d });
    }
    let invalid = |reason: &str| Error::InvalidSubset {
        subset: subset.to_string(),
        reason: reason.to_string(),
    };
    if !subset.fits(k) {
        return Err(invalid("not a subset of 1..=k"));
    }
    let i_n = subset.largest().ok_or_else(|| invalid("empty subset"))?;
    if i_n > d - 2 {
        return Err(invalid("largest element must be at most d - 2"));
    }
    let prec = profile.prec();
    let mut head = Interval::from_i64(1, prec);
    for i in 0..=d - 2 {
        head = head.mul(profile.modulus(i), prec);
    }
    let one = Interval::from_i64(1, prec);
    let lhs = head.mul(profile.modulus(i_n), prec).sub(&one, prec);
    let rhs = head.mul(&profile.modulus(i_n).sub(profile.modulus(d - 1), prec), prec);
    let residual = lhs.sub(&rhs, prec);
    Ok(IdentityReport {
        poly: p.clone(),
        k,
        subset,
        lhs,
        rhs,
        residual,
        bits: profile.bits(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseClass {
    RealReal,
    RealComplex,
    ComplexComplex,
}

/// Smallest certified gap between consecutive modulus classes.
#[derive(Clone, Debug)]
pub struct SeparationReport {
    pub poly: IntPolynomial,
    pub height: Integer,
    pub degree: usize,
    pub gap: Interval,
    pub case_class: CaseClass,
    /// Sorted positions of the representatives of the minimizing pair.
    pub between: (usize, usize),
    pub bits: u32,
}

impl SeparationReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "poly": self.poly.to_string(),
            "H": self.height.to_string(),
            "d": self.degree,
            "gap": self.gap.to_json(self.bits, 20),
            "caseClass": self.case_class,
        })
    }
}

pub fn modulus_separation(profile: &ModulusProfile) -> Result<SeparationReport> {
    let groups = profile.groups();
    if groups.len() < 2 {
        return Err(Error::NoGap);
    }
    let prec = profile.prec();
    let mut best: Option<(usize, Interval)> = None;
    let mut min_lo: Option<rug::Float> = None;
    for g in 0..groups.len() - 1 {
        let gap = groups[g].modulus.sub(&groups[g + 1].modulus, prec);
        if min_lo.as_ref().is_none_or(|m| gap.lo() < m) {
            min_lo = Some(gap.lo().clone());
        }
        if best.as_ref().is_none_or(|(_, b)| gap.hi() < b.hi()) {
            best = Some((g, gap));
        }
    }
    let (g, best_gap) = best.expect("at least one pair");
    let gap = Interval::new(min_lo.expect("at least one pair"), best_gap.hi().clone());
    let representative = |group: usize| {
        let pos = groups[group].positions();
        pos.clone().find(|&i| profile.is_real(i)).unwrap_or(pos.start)
    };
    let (a, b) = (representative(g), representative(g + 1));
    let case_class = match (profile.is_real(a), profile.is_real(b)) {
        (true, true) => CaseClass::RealReal,
        (false, false) => CaseClass::ComplexComplex,
        _ => CaseClass::RealComplex,
    };
    Ok(SeparationReport {
        poly: profile.poly().clone(),
        height: profile.poly().height(),
        degree: profile.degree(),
        gap,
        case_class,
        between: (a, b),
        bits: profile.bits(),
    })
}

/// Whether `|a_i| > |a_(d-1)|` for every `i < d/3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitGap {
    pub holds: bool,
    /// First index `i < d/3` whose modulus equals `|a_(d-1)|`.
    pub first_violation: Option<usize>,
    pub bits: u32,
}

/// Check the gap on a profile. Groups are disjoint, so positions in
/// different groups are separated; a conjugate tie with the last position is
/// an exact equality, and an unresolved one is reported as indeterminate.
pub fn unit_gap_on_profile(profile: &ModulusProfile) -> Result<UnitGap> {
    let d = profile.degree();
    for i in (0..d).take_while(|i| 3 * i < d) {
        if i == d - 1 || profile.tied(i, d - 1) {
            match profile.group_of(i).kind {
                TieKind::Unresolved => {
                    return Err(Error::GapIndeterminate {
                        index: i,
                        bits: profile.bits(),
                    })
                }
                _ => {
                    return Ok(UnitGap {
                        holds: false,
                        first_violation: Some(i),
                        bits: profile.bits(),
                    })
                }
            }
        }
    }
    Ok(UnitGap {
        holds: true,
        first_violation: None,
        bits: profile.bits(),
    })
}

/// Gap check for a monic irreducible unit that is not a root of unity.
pub fn unit_gap_property(p: &IntPolynomial, cap: u32) -> Result<UnitGap> {
    if !p.is_unit()? {
        return Err(Error::NotUnit(p.to_string()));
    }
    if p.degree() < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: p.degree() });
    }
    if p.is_root_of_unity()? {
        return Err(Error::RootOfUnity(p.to_string()));
    }
    let conj = Conjugates::certify(p, DEFAULT_START_BITS, cap)?;
    conj.require_irreducible()?;
    unit_gap_on_profile(conj.profile())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckOutcome {
    Holds,
    Fails,
    Indeterminate,
    Skipped,
}

/// `|r_0| |r_1|^(d-1)` for the two largest root moduli of
/// `x^d - h x^(d-1) + 1`, against `1 + 2.2/(|h| - 1.1)`.
#[derive(Clone, Debug)]
pub struct SzBound {
    pub d: u32,
    pub h: i64,
    pub irreducibility: IrreducibilityStatus,
    pub lhs: Option<Interval>,
    pub rhs: Rational,
    pub outcome: CheckOutcome,
    pub bits: u32,
}

impl SzBound {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "d": self.d,
            "h": self.h,
            "irreducibility": self.irreducibility,
            "lhs": self.lhs.as_ref().map(|l| l.to_json(self.bits, 30)),
            "rhs": self.rhs.to_string(),
            "rhsApprox": self.rhs.to_f64(),
            "outcome": self.outcome,
        })
    }
}

/// `1 + 2.2/(|h| - 1.1) = 1 + 22/(10|h| - 11)`.
pub fn sz_bound_rhs(h: i64) -> Rational {
    let habs = Integer::from(h.unsigned_abs());
    Rational::from(1) + Rational::from((Integer::from(22), habs * 10u32 - 11u32))
}

pub fn sz_bound_check(d: u32, h: i64, cap: u32) -> Result<SzBound> {
    if h.unsigned_abs() < 3 {
        return Err(Error::SmallH(h));
    }
    if d < 2 {
        return Err(Error::InvalidTrinomial { d, j: d.saturating_sub(1) });
    }
    let p = TrinomialSpec::new(d, d - 1, h)?.polynomial();
    if !p.is_squarefree() {
        return Ok(SzBound {
            d,
            h,
            irreducibility: IrreducibilityStatus::Reducible,
            lhs: None,
            rhs: sz_bound_rhs(h),
            outcome: CheckOutcome::Skipped,
            bits: 0,
        });
    }
    let mut conj = Conjugates::certify(&p, DEFAULT_START_BITS, cap)?;
    sz_bound_on(&mut conj, h)
}

/// The same check on already certified conjugates of `x^d - h x^(d-1) + 1`.
pub fn sz_bound_on(conj: &mut Conjugates, h: i64) -> Result<SzBound> {
    let d = conj.poly().degree() as u32;
    let rhs = sz_bound_rhs(h);
    let mut report = SzBound {
        d,
        h,
        irreducibility: conj.irreducibility().status,
        lhs: None,
        rhs: rhs.clone(),
        outcome: CheckOutcome::Skipped,
        bits: 0,
    };
    if report.irreducibility != IrreducibilityStatus::Irreducible {
        return Ok(report);
    }
    let c = RationalPoint(vec![Rational::from(d - 1)]);
    let mut i = 0;
    loop {
        let profile = conj.rung(i)?.expect("rung exists").clone();
        let lhs = product_at(&profile, &c)?;
        report.bits = profile.bits();
        if let Some(l) = &lhs {
            if *l.hi() < rhs {
                report.outcome = CheckOutcome::Holds;
            } else if *l.lo() >= rhs {
                report.outcome = CheckOutcome::Fails;
            }
        }
        report.lhs = lhs;
        if report.outcome != CheckOutcome::Skipped {
            return Ok(report);
        }
        if profile.at_cap() {
            report.outcome = CheckOutcome::Indeterminate;
            return Ok(report);
        }
        i += 1;
    }
}

/// Evaluation of `x^(3k) - x^k - 1` at the vertex `(0, …, 0, 2)`.
#[derive(Clone, Debug)]
pub struct TightnessReport {
    pub k: u32,
    pub poly: IntPolynomial,
    pub irreducibility: IrreducibilityStatus,
    /// Value at the first rung with at least the requested bits.
    pub value: Option<Interval>,
    pub value_bits: u32,
    pub verdict: Option<Verdict>,
    pub verdict_bits: u32,
    pub unit_gap: Option<bool>,
}

impl TightnessReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "k": self.k,
            "poly": self.poly.to_string(),
            "irreducibility": self.irreducibility,
            "value": self.value.as_ref().map(|v| v.to_json(self.value_bits, 40)),
            "width": self.value.as_ref().map(|v| crate::interval::decimal(&v.width(), 6, rug::float::Round::Up)),
            "verdict": self.verdict,
            "verdictBits": self.verdict_bits,
            "unitGap": self.unit_gap,
        })
    }
}

pub fn tightness_family(k_max: u32, value_bits: u32, cap: u32) -> Result<Vec<TightnessReport>> {
    if k_max == 0 || k_max > 4 {
        return Err(Error::InvalidDimension {
            k: k_max as usize,
            d: 3 * k_max as usize,
        });
    }
    (1..=k_max).map(|k| tightness_case(k, value_bits, cap)).collect()
}

pub fn tightness_case(k: u32, value_bits: u32, cap: u32) -> Result<TightnessReport> {
    let p = IntPolynomial::tightness_family(k)?;
    let mut conj = Conjugates::certify(&p, value_bits.min(cap), cap)?;
    let status = conj.irreducibility().status;
    let mut report = TightnessReport {
        k,
        poly: p,
        irreducibility: status,
        value: None,
        value_bits: 0,
        verdict: None,
        verdict_bits: 0,
        unit_gap: None,
    };
    if status != IrreducibilityStatus::Irreducible {
        return Ok(report);
    }
    let mut coords = vec![Rational::new(); k as usize];
    coords[k as usize - 1] = Rational::from(2);
    let c = RationalPoint(coords);
    // Evaluate with the cap pinned at `value_bits`, so ties that would need
    // more precision are merged instead of refined.
    let roots = RootSet::solve(conj.poly(), value_bits)?;
    let profile = sorted_moduli(&roots, value_bits)?;
    report.value = product_at(&profile, &c)?;
    report.value_bits = profile.bits();
    let margin = conj.margin(&c, Some(Subset::singleton(k as usize)))?;
    report.verdict = Some(margin.verdict);
    report.verdict_bits = margin.precision_bits;
    report.unit_gap = match unit_gap_on_profile(conj.profile()) {
        Ok(g) => Some(g.holds),
        Err(e) if e.is_precision_cap() => None,
        Err(e) => return Err(e),
    };
    Ok(report)
}
