//! Numerical irreducibility certificate for monic integer polynomials.
//!
//! A monic factor of `p` over the integers is the product of `x - a` over
//! some set of roots closed under complex conjugation. Every such set with at
//! most `d/2` roots (its complement covers the rest) is enumerated over the
//! conjugation orbits of the certified roots, and the coefficients of the
//! candidate factor are enclosed in real intervals. A set is ruled out when
//! some coefficient interval holds no integer, or when every interval holds
//! exactly one integer and the resulting integer polynomial fails to divide
//! `p` exactly.

use std::fmt;

use rug::Integer;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::interval::{IntegerHit, Interval};
use crate::moduli::{conjugate_pairing, Realness};
use crate::next_precision;
use crate::poly::IntPolynomial;
use crate::roots::RootSet;
use crate::DEFAULT_START_BITS;

/// Largest degree accepted by the subset test.
pub const MAX_IRREDUCIBILITY_DEGREE: usize = 24;

/// Constant terms above this size skip the rational-root prescreen; the
/// subset test still covers linear factors.
const PRESCREEN_LIMIT_BITS: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IrreducibilityStatus {
    Irreducible,
    Reducible,
    Unknown,
}

impl fmt::Display for IrreducibilityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IrreducibilityStatus::Irreducible => "IRREDUCIBLE",
            IrreducibilityStatus::Reducible => "REDUCIBLE",
            IrreducibilityStatus::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrreducibilityVerdict {
    pub status: IrreducibilityStatus,
    /// A nontrivial factor dividing the input exactly, when reducible.
    pub witness: Option<IntPolynomial>,
    pub certified_at_bits: u32,
}

impl IrreducibilityVerdict {
    fn reducible(witness: IntPolynomial, bits: u32) -> Self {
        IrreducibilityVerdict {
            status: IrreducibilityStatus::Reducible,
            witness: Some(witness),
            certified_at_bits: bits,
        }
    }

    pub fn is_irreducible(&self) -> bool {
        self.status == IrreducibilityStatus::Irreducible
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "status": self.status,
            "witness": self.witness.as_ref().map(|w| w.to_string()),
            "bits": self.certified_at_bits,
        })
    }
}

/// Solve for the roots and run the subset test, escalating up to `cap` bits.
pub fn test_irreducible(p: &IntPolynomial, cap: u32) -> Result<IrreducibilityVerdict> {
    if let Some(v) = structural_checks(p)? {
        return Ok(v);
    }
    let roots = RootSet::solve(p, DEFAULT_START_BITS.min(cap))?;
    subset_test(p, roots, cap)
}

/// Subset test starting from already certified roots of `p`.
pub fn test_irreducible_with_roots(p: &IntPolynomial, roots: &RootSet, cap: u32) -> Result<IrreducibilityVerdict> {
    if roots.poly() != p {
        return Err(Error::Consistency("root set belongs to another polynomial".into()));
    }
    if let Some(v) = structural_checks(p)? {
        return Ok(v);
    }
    subset_test(p, roots.clone(), cap)
}

fn structural_checks(p: &IntPolynomial) -> Result<Option<IrreducibilityVerdict>> {
    p.require_monic()?;
    let d = p.degree();
    if d > MAX_IRREDUCIBILITY_DEGREE {
        return Err(Error::UnsupportedDegree {
            degree: d,
            max: MAX_IRREDUCIBILITY_DEGREE,
        });
    }
    if d == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    if d == 1 {
        return Ok(Some(IrreducibilityVerdict {
            status: IrreducibilityStatus::Irreducible,
            witness: None,
            certified_at_bits: 0,
        }));
    }
    if *p.constant() == 0 {
        return Ok(Some(IrreducibilityVerdict::reducible(
            IntPolynomial::linear(&Integer::new()),
            0,
        )));
    }
    if let Some(r) = rational_root(p) {
        return Ok(Some(IrreducibilityVerdict::reducible(IntPolynomial::linear(&r), 0)));
    }
    let g = p.squarefree_gcd();
    if g.degree() > 0 {
        return Ok(Some(IrreducibilityVerdict::reducible(g, 0)));
    }
    Ok(None)
}

/// An integer root of the monic `p`, searched among the divisors of `p(0)`.
fn rational_root(p: &IntPolynomial) -> Option<Integer> {
    let a0 = p.constant().clone().abs();
    if a0.significant_bits() > PRESCREEN_LIMIT_BITS {
        return None;
    }
    let n = a0.to_u64().expect("small constant");
    let mut divisors = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            divisors.push(i);
            if i != n / i {
                divisors.push(n / i);
            }
        }
        i += 1;
    }
    divisors.sort_unstable();
    for dv in divisors {
        for cand in [Integer::from(dv), -Integer::from(dv)] {
            if p.eval(&cand) == 0 {
                return Some(cand);
            }
        }
    }
    None
}

enum Outcome {
    AllExcluded,
    Factor(IntPolynomial),
    Undecided,
}

fn subset_test(p: &IntPolynomial, mut roots: RootSet, cap: u32) -> Result<IrreducibilityVerdict> {
    loop {
        let outcome = match conjugate_pairing(&roots) {
            Some(realness) => search(p, &roots, &realness),
            None => Outcome::Undecided,
        };
        match outcome {
            Outcome::AllExcluded => {
                return Ok(IrreducibilityVerdict {
                    status: IrreducibilityStatus::Irreducible,
                    witness: None,
                    certified_at_bits: roots.bits(),
                })
            }
            Outcome::Factor(w) => return Ok(IrreducibilityVerdict::reducible(w, roots.bits())),
            Outcome::Undecided => match next_precision(roots.bits(), cap) {
                Some(b) => roots = roots.refine(b)?,
                None => {
                    return Ok(IrreducibilityVerdict {
                        status: IrreducibilityStatus::Unknown,
                        witness: None,
                        certified_at_bits: roots.bits(),
                    })
                }
            },
        }
    }
}

/// Real quadratic or linear factor contributed by one conjugation orbit,
/// constant term first.
fn orbit_factor(roots: &RootSet, realness: &[Realness], i: usize, prec: u32) -> Option<Vec<Interval>> {
    let b = roots.roots()[i].as_box(prec);
    match realness[i] {
        Realness::Real => Some(vec![b.re.neg(), Interval::from_i64(1, prec)]),
        Realness::ConjugateOf(j) if j > i => {
            let norm = b.re.square(prec).add(&b.im.square(prec), prec);
            let trace = b.re.add(&b.re, prec);
            Some(vec![norm, trace.neg(), Interval::from_i64(1, prec)])
        }
        Realness::ConjugateOf(_) => None,
    }
}

fn search(p: &IntPolynomial, roots: &RootSet, realness: &[Realness]) -> Outcome {
    let prec = roots.bits() + 64;
    let orbits: Vec<Vec<Interval>> = (0..roots.len())
        .filter_map(|i| orbit_factor(roots, realness, i, prec))
        .collect();
    let limit = p.degree() / 2;
    let mut undecided = false;
    let one = vec![Interval::from_i64(1, prec)];
    if let Some(w) = dfs(p, &orbits, 0, &one, limit, prec, &mut undecided) {
        return Outcome::Factor(w);
    }
    if undecided {
        Outcome::Undecided
    } else {
        Outcome::AllExcluded
    }
}

fn poly_mul(a: &[Interval], b: &[Interval], prec: u32) -> Vec<Interval> {
    let mut out: Vec<Option<Interval>> = vec![None; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let t = x.mul(y, prec);
            out[i + j] = Some(match out[i + j].take() {
                Some(acc) => acc.add(&t, prec),
                None => t,
            });
        }
    }
    out.into_iter().map(|c| c.expect("filled")).collect()
}

fn dfs(
    p: &IntPolynomial,
    orbits: &[Vec<Interval>],
    from: usize,
    current: &[Interval],
    limit: usize,
    prec: u32,
    undecided: &mut bool,
) -> Option<IntPolynomial> {
    for (k, orbit) in orbits.iter().enumerate().skip(from) {
        let deg = current.len() - 1 + orbit.len() - 1;
        if deg > limit {
            continue;
        }
        let next = poly_mul(current, orbit, prec);
        match classify(p, &next) {
            Candidate::Excluded => {}
            Candidate::Factor(w) => return Some(w),
            Candidate::Ambiguous => *undecided = true,
        }
        if let Some(w) = dfs(p, orbits, k + 1, &next, limit, prec, undecided) {
            return Some(w);
        }
    }
    None
}

enum Candidate {
    Excluded,
    Factor(IntPolynomial),
    Ambiguous,
}

fn classify(p: &IntPolynomial, coeffs: &[Interval]) -> Candidate {
    let mut ints = Vec::with_capacity(coeffs.len());
    let mut ambiguous = false;
    for c in coeffs {
        match c.integers() {
            IntegerHit::None => return Candidate::Excluded,
            IntegerHit::Unique(n) => ints.push(n),
            IntegerHit::Several => ambiguous = true,
        }
    }
    if ambiguous {
        return Candidate::Ambiguous;
    }
    let q = IntPolynomial::new(ints).expect("monic candidate");
    if p.div_exact(&q).is_some() {
        Candidate::Factor(q)
    } else {
        Candidate::Excluded
    }
}
