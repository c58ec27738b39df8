//! The descending modulus sequence of a root set, tie handling, and annulus
//! counts for trinomials.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::{Float, Integer, Rational};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::interval::{decimal, Interval};
use crate::next_precision;
use crate::poly::{IntPolynomial, TrinomialSpec};
use crate::roots::{RootEnclosure, RootSet};

/// Extra bits used for interval arithmetic on top of the root precision.
const INTERVAL_GUARD: u32 = 64;

/// Whether a root is real, decided from the pairing of its disk with the
/// conjugate disks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Realness {
    Real,
    /// Non-real; the payload is the root index of the complex conjugate.
    ConjugateOf(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TieKind {
    /// A single root.
    Single,
    /// A complex-conjugate pair, whose moduli are equal.
    Conjugate,
    /// Moduli that could not be separated at the precision cap.
    Unresolved,
}

/// Consecutive positions `start..end` of the sorted sequence sharing one
/// modulus class.
#[derive(Clone, Debug, PartialEq)]
pub struct TiedGroup {
    pub start: usize,
    pub end: usize,
    pub kind: TieKind,
    /// Interval containing the modulus of every member.
    pub modulus: Interval,
}

impl TiedGroup {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn positions(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

#[derive(Clone, Debug)]
struct Entry {
    root: usize,
    own: Interval,
    group: usize,
}

/// Certified descending moduli `|a_0| >= |a_1| >= ... >= |a_(d-1)|`.
///
/// Positions inside one tied group are interchangeable: every accessor that
/// reports a modulus returns the group interval, so results computed from a
/// profile do not depend on how ties are labelled.
#[derive(Clone, Debug)]
pub struct ModulusProfile {
    roots: RootSet,
    cap: u32,
    prec: u32,
    entries: Vec<Entry>,
    groups: Vec<TiedGroup>,
    realness: Vec<Realness>,
}

/// Sort the moduli of `roots`, refining along the precision ladder while
/// distinct modulus classes overlap. Classes still overlapping at `cap` are
/// merged into one [`TieKind::Unresolved`] group.
pub fn sorted_moduli(roots: &RootSet, cap: u32) -> Result<ModulusProfile> {
    let mut rs = roots.clone();
    loop {
        let next = next_precision(rs.bits(), cap);
        if let Some(profile) = build(&rs, cap, next.is_none())? {
            return Ok(profile);
        }
        rs = rs.refine(next.expect("non-final build always yields a profile or a rung"))?;
    }
}

fn possibly_conjugate(a: &RootEnclosure, b: &RootEnclosure, prec: u32) -> bool {
    let dre = Float::with_val_round(prec, a.center().real() - b.center().real(), Round::Down).0;
    let dre_hi = Float::with_val_round(prec, a.center().real() - b.center().real(), Round::Up).0;
    let sim = Float::with_val_round(prec, a.center().imag() + b.center().imag(), Round::Down).0;
    let sim_hi = Float::with_val_round(prec, a.center().imag() + b.center().imag(), Round::Up).0;
    let mig = |lo: Float, hi: Float| {
        if lo <= 0 && hi >= 0 {
            Float::new(prec)
        } else if lo > 0 {
            lo
        } else {
            Float::with_val(prec, -hi)
        }
    };
    let dist = Float::with_val_round(prec, mig(dre, dre_hi).hypot_ref(&mig(sim, sim_hi)), Round::Down).0;
    let reach = Float::with_val_round(prec, a.radius() + b.radius(), Round::Up).0;
    dist <= reach
}

/// Pair every root with its complex conjugate. The conjugate of root `i`
/// lies in the mirrored disk of `i`; when exactly one disk meets that mirror
/// image, it holds the conjugate. `None` means some mirror image still meets
/// several disks.
pub fn conjugate_pairing(rs: &RootSet) -> Option<Vec<Realness>> {
    let n = rs.len();
    let prec = rs.bits() + INTERVAL_GUARD;
    let roots = rs.roots();
    let mut realness = Vec::with_capacity(n);
    for i in 0..n {
        let hits: Vec<usize> = (0..n)
            .filter(|&j| possibly_conjugate(&roots[i], &roots[j], prec))
            .collect();
        match hits.as_slice() {
            [j] if *j == i => realness.push(Realness::Real),
            [j] => realness.push(Realness::ConjugateOf(*j)),
            _ => return None,
        }
    }
    for (i, r) in realness.iter().enumerate() {
        if let Realness::ConjugateOf(j) = *r {
            if realness[j] != Realness::ConjugateOf(i) {
                return None;
            }
        }
    }
    Some(realness)
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

fn build(rs: &RootSet, cap: u32, last: bool) -> Result<Option<ModulusProfile>> {
    let n = rs.len();
    let prec = rs.bits() + INTERVAL_GUARD;
    let roots = rs.roots();
    let own: Vec<Interval> = roots.iter().map(|r| r.modulus(prec)).collect();

    let realness = match conjugate_pairing(rs) {
        Some(r) => r,
        None if last => {
            return Err(Error::CertificationFailure {
                poly: rs.poly().to_string(),
                bits: rs.bits(),
            })
        }
        None => return Ok(None),
    };

    // Classes start as single roots or conjugate pairs; a pair's modulus is
    // in both member intervals, so their intersection encloses it.
    let mut parent: Vec<usize> = (0..n).collect();
    let mut kind = vec![TieKind::Single; n];
    let mut class_iv: Vec<Option<Interval>> = own.iter().cloned().map(Some).collect();
    for i in 0..n {
        if let Realness::ConjugateOf(j) = realness[i] {
            if i < j {
                parent[j] = i;
                kind[i] = TieKind::Conjugate;
                let (a, b) = (own[i].clone(), own[j].clone());
                let lo = if a.lo() >= b.lo() { a.lo() } else { b.lo() }.clone();
                let hi = if a.hi() <= b.hi() { a.hi() } else { b.hi() }.clone();
                if lo > hi {
                    return Err(Error::Consistency(format!(
                        "conjugate moduli of {} do not intersect",
                        rs.poly()
                    )));
                }
                class_iv[i] = Some(Interval::new(lo, hi));
                class_iv[j] = None;
            }
        }
    }

    loop {
        let reps: Vec<usize> = (0..n).filter(|&i| class_iv[i].is_some()).collect();
        let mut merged = false;
        'scan: for (a, &ra) in reps.iter().enumerate() {
            for &rb in &reps[a + 1..] {
                let (ia, ib) = (class_iv[ra].as_ref().unwrap(), class_iv[rb].as_ref().unwrap());
                if ia.intersects(ib) {
                    if !last {
                        return Ok(None);
                    }
                    let hull = ia.hull(ib);
                    parent[rb] = ra;
                    kind[ra] = TieKind::Unresolved;
                    class_iv[ra] = Some(hull);
                    class_iv[rb] = None;
                    merged = true;
                    break 'scan;
                }
            }
        }
        if !merged {
            break;
        }
    }

    let mut reps: Vec<usize> = (0..n).filter(|&i| class_iv[i].is_some()).collect();
    reps.sort_by(|&a, &b| {
        let (ia, ib) = (class_iv[a].as_ref().unwrap(), class_iv[b].as_ref().unwrap());
        ib.lo().partial_cmp(ia.lo()).unwrap_or(Ordering::Equal)
    });

    let mut entries = Vec::with_capacity(n);
    let mut groups = Vec::with_capacity(reps.len());
    for &rep in &reps {
        let mut members: Vec<usize> = (0..n).filter(|&i| find(&mut parent, i) == rep).collect();
        members.sort_by(|&a, &b| canonical_order(&roots[a], &roots[b]));
        let start = entries.len();
        let group = groups.len();
        for m in members {
            entries.push(Entry {
                root: m,
                own: own[m].clone(),
                group,
            });
        }
        groups.push(TiedGroup {
            start,
            end: entries.len(),
            kind: kind[rep],
            modulus: class_iv[rep].clone().unwrap(),
        });
    }

    Ok(Some(ModulusProfile {
        roots: rs.clone(),
        cap,
        prec,
        entries,
        groups,
        realness,
    }))
}

/// Order inside a tie: upper half-plane first, then by real part.
fn canonical_order(a: &RootEnclosure, b: &RootEnclosure) -> Ordering {
    b.center()
        .imag()
        .partial_cmp(a.center().imag())
        .unwrap_or(Ordering::Equal)
        .then(b.center().real().partial_cmp(a.center().real()).unwrap_or(Ordering::Equal))
}

impl ModulusProfile {
    pub fn poly(&self) -> &IntPolynomial {
        self.roots.poly()
    }

    pub fn roots(&self) -> &RootSet {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    /// Precision the roots are certified to.
    pub fn bits(&self) -> u32 {
        self.roots.bits()
    }

    /// Working precision for interval arithmetic on this profile.
    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn at_cap(&self) -> bool {
        next_precision(self.bits(), self.cap).is_none()
    }

    /// Interval for `|a_pos|`; the same for every position of a tied group.
    pub fn modulus(&self, pos: usize) -> &Interval {
        &self.groups[self.entries[pos].group].modulus
    }

    /// Interval from the enclosure at `pos` alone.
    pub fn own_modulus(&self, pos: usize) -> &Interval {
        &self.entries[pos].own
    }

    pub fn moduli(&self) -> Vec<&Interval> {
        (0..self.degree()).map(|i| self.modulus(i)).collect()
    }

    pub fn root_at(&self, pos: usize) -> &RootEnclosure {
        &self.roots.roots()[self.entries[pos].root]
    }

    pub fn is_real(&self, pos: usize) -> bool {
        self.realness[self.entries[pos].root] == Realness::Real
    }

    pub fn realness(&self, pos: usize) -> Realness {
        self.realness[self.entries[pos].root]
    }

    pub fn groups(&self) -> &[TiedGroup] {
        &self.groups
    }

    pub fn group_of(&self, pos: usize) -> &TiedGroup {
        &self.groups[self.entries[pos].group]
    }

    pub fn group_index(&self, pos: usize) -> usize {
        self.entries[pos].group
    }

    /// Same positions lie in one group.
    pub fn tied(&self, a: usize, b: usize) -> bool {
        self.entries[a].group == self.entries[b].group
    }

    /// Profile one rung further up the precision ladder, or `None` at the cap.
    pub fn refined(&self) -> Result<Option<ModulusProfile>> {
        match next_precision(self.bits(), self.cap) {
            Some(bits) => Ok(Some(sorted_moduli(&self.roots.refine(bits)?, self.cap)?)),
            None => Ok(None),
        }
    }

    /// Profile whose roots are certified to at least `bits`.
    pub fn at_least(&self, bits: u32) -> Result<ModulusProfile> {
        if self.bits() >= bits {
            return Ok(self.clone());
        }
        sorted_moduli(&self.roots.refine(bits)?, self.cap.max(bits))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let digits = (self.bits() as f64 * std::f64::consts::LOG10_2) as usize + 3;
        json!({
            "poly": self.poly().to_string(),
            "bits": self.bits(),
            "moduli": (0..self.degree())
                .map(|i| self.modulus(i).to_json(self.bits(), digits.min(40)))
                .collect::<Vec<_>>(),
            "groups": self.groups.iter().map(|g| json!({
                "positions": g.positions().collect::<Vec<_>>(),
                "kind": g.kind,
            })).collect::<Vec<_>>(),
        })
    }
}

/// A radius `base^(1/root)`; a negative `root` denotes the reciprocal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Radius {
    base: Rational,
    root: i32,
}

impl Radius {
    pub fn new(base: Rational, root: i32) -> Result<Self> {
        if base <= 0 || root == 0 {
            return Err(Error::InvalidAnnulus);
        }
        Ok(Radius { base, root })
    }

    pub fn rational(r: Rational) -> Result<Self> {
        Radius::new(r, 1)
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn root(&self) -> i32 {
        self.root
    }

    pub fn enclose(&self, prec: u32) -> Interval {
        let base = Interval::from_rational(&self.base, prec + 8);
        let r = base.root(self.root.unsigned_abs(), prec + 8);
        if self.root < 0 {
            r.recip(prec).expect("positive radius")
        } else {
            r
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.base.to_f64().powf(1.0 / self.root as f64)
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.root {
            1 => write!(f, "{}", self.base),
            -1 => write!(f, "({})^-1", self.base),
            r => write!(f, "({})^(1/{})", self.base, r),
        }
    }
}

/// Annuli expected to hold the small and large roots of a trinomial.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnulusPrediction {
    pub inner_low: Radius,
    pub inner_high: Radius,
    pub outer_low: Radius,
    pub outer_high: Radius,
    pub inner_count: usize,
    pub outer_count: usize,
}

impl AnnulusPrediction {
    pub fn to_json(&self) -> serde_json::Value {
        let show = |r: &Radius| {
            let iv = r.enclose(128);
            json!({
                "expr": r.to_string(),
                "lo": decimal(iv.lo(), 20, Round::Down),
                "hi": decimal(iv.hi(), 20, Round::Up),
            })
        };
        json!({
            "inner": {"low": show(&self.inner_low), "high": show(&self.inner_high), "count": self.inner_count},
            "outer": {"low": show(&self.outer_low), "high": show(&self.outer_high), "count": self.outer_count},
        })
    }
}

/// Annuli for `x^d - h x^j + 1` with `|h| >= 3` and `1/|h| < eps < 1 - 1/|h|`:
/// `j` roots with `((1+eps)|h|)^(-1/j) < |z| < ((1-eps)|h|)^(-1/j)` and `d-j`
/// roots with `((1-eps)|h|)^(1/(d-j)) < |z| < ((1+eps)|h|)^(1/(d-j))`.
pub fn predicted_annuli(spec: &TrinomialSpec, eps: &Rational) -> Result<AnnulusPrediction> {
    let TrinomialSpec { d, j, h } = *spec;
    if j == 0 || d <= j {
        return Err(Error::InvalidTrinomial { d, j });
    }
    let habs = h.unsigned_abs();
    if habs < 3 {
        return Err(Error::SmallH(h));
    }
    let low = Rational::from((1, habs));
    let high = Rational::from(1) - &low;
    if *eps <= low || *eps >= high {
        return Err(Error::EpsilonOutOfRange {
            epsilon: eps.to_string(),
            low: low.to_string(),
            high: high.to_string(),
        });
    }
    let hq = Rational::from(habs);
    let minus: Rational = (1 - eps.clone()) * &hq;
    let plus: Rational = (1 + eps.clone()) * &hq;
    let (j, m) = (j as i32, (d - j) as i32);
    Ok(AnnulusPrediction {
        inner_low: Radius::new(plus.clone(), -j)?,
        inner_high: Radius::new(minus.clone(), -j)?,
        outer_low: Radius::new(minus, m)?,
        outer_high: Radius::new(plus, m)?,
        inner_count: j as usize,
        outer_count: m as usize,
    })
}

/// The `eps = 1/2` case: `(2/(3|h|))^(1/j) < |z| < (2/|h|)^(1/j)` and
/// `(|h|/2)^(1/(d-j)) < |z| < (3|h|/2)^(1/(d-j))`.
pub fn half_epsilon_annuli(spec: &TrinomialSpec) -> Result<AnnulusPrediction> {
    predicted_annuli(spec, &Rational::from((1, 2)))
}

/// Number of roots with `low < |z| < high`, refining while a boundary meets
/// a modulus interval.
pub fn count_in_annulus(profile: &ModulusProfile, low: &Radius, high: &Radius) -> Result<usize> {
    let check_prec = 128;
    if !low.enclose(check_prec).certainly_below(&high.enclose(check_prec)) {
        return Err(Error::InvalidAnnulus);
    }
    let mut current = profile.clone();
    loop {
        let prec = current.prec();
        let (lo, hi) = (low.enclose(prec), high.enclose(prec));
        let mut count = 0;
        let mut blocked = None;
        for pos in 0..current.degree() {
            let m = current.modulus(pos);
            if m.certainly_below(&lo) || hi.certainly_below(m) {
                continue;
            }
            if lo.certainly_below(m) && m.certainly_below(&hi) {
                count += 1;
                continue;
            }
            let boundary = if m.intersects(&lo) { low } else { high };
            blocked = Some((pos, boundary.to_string()));
            break;
        }
        match blocked {
            None => return Ok(count),
            Some((index, boundary)) => match current.refined()? {
                Some(next) => current = next,
                None => return Err(Error::BoundaryOverlap { boundary, index }),
            },
        }
    }
}

/// `H + 1`, an upper bound for the modulus of every root of a monic polynomial.
pub fn cauchy_root_bound(p: &IntPolynomial) -> Result<Integer> {
    p.require_monic()?;
    Ok(p.height() + 1u32)
}
