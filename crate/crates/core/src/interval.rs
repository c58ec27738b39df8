//! Outward-rounded real and complex intervals over MPFR floats.
//!
//! Every operation takes an explicit working precision; lower endpoints are
//! rounded toward `-inf` and upper endpoints toward `+inf`, so the result
//! always contains the exact value of the operation applied to any points of
//! the operands.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::{AssignRound, Pow};
use rug::{Float, Integer, Rational};
use serde_json::json;

/// Closed interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

/// Result of asking which integers lie in an interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegerHit {
    None,
    Unique(Integer),
    Several,
}

fn down<T>(prec: u32, val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, Round::Down).0
}

fn up<T>(prec: u32, val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, Round::Up).0
}

impl Interval {
    /// Interval with the given endpoints; panics if `lo > hi` or either is NaN.
    pub fn new(lo: Float, hi: Float) -> Self {
        assert!(
            lo.partial_cmp(&hi).is_some_and(|o| o != Ordering::Greater),
            "invalid interval [{lo}, {hi}]"
        );
        Interval { lo, hi }
    }

    pub fn point(x: Float) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        Interval {
            lo: down(prec, r),
            hi: up(prec, r),
        }
    }

    pub fn from_integer(n: &Integer, prec: u32) -> Self {
        Interval {
            lo: down(prec, n),
            hi: up(prec, n),
        }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_integer(&Integer::from(n), prec)
    }

    /// The same interval at `prec` bits, rounded outward.
    pub fn round_to(&self, prec: u32) -> Interval {
        Interval {
            lo: down(prec, &self.lo),
            hi: up(prec, &self.hi),
        }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn add(&self, o: &Interval, prec: u32) -> Interval {
        Interval {
            lo: down(prec, &self.lo + &o.lo),
            hi: up(prec, &self.hi + &o.hi),
        }
    }

    pub fn sub(&self, o: &Interval, prec: u32) -> Interval {
        Interval {
            lo: down(prec, &self.lo - &o.hi),
            hi: up(prec, &self.hi - &o.lo),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: Float::with_val(self.hi.prec(), -&self.hi),
            hi: Float::with_val(self.lo.prec(), -&self.lo),
        }
    }

    pub fn mul(&self, o: &Interval, prec: u32) -> Interval {
        if self.lo >= 0 && o.lo >= 0 {
            return Interval {
                lo: down(prec, &self.lo * &o.lo),
                hi: up(prec, &self.hi * &o.hi),
            };
        }
        let pairs = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| down(prec, *a * *b))
            .min_by(|a, b| a.partial_cmp(b).expect("finite"))
            .expect("four products");
        let hi = pairs
            .iter()
            .map(|(a, b)| up(prec, *a * *b))
            .max_by(|a, b| a.partial_cmp(b).expect("finite"))
            .expect("four products");
        Interval { lo, hi }
    }

    /// `self / o`, or `None` when `o` contains zero.
    pub fn div(&self, o: &Interval, prec: u32) -> Option<Interval> {
        if o.contains_zero() {
            return None;
        }
        let inv = Interval {
            lo: down(prec, o.hi.recip_ref()),
            hi: up(prec, o.lo.recip_ref()),
        };
        Some(self.mul(&inv, prec))
    }

    pub fn square(&self, prec: u32) -> Interval {
        if self.lo >= 0 {
            Interval {
                lo: down(prec, self.lo.square_ref()),
                hi: up(prec, self.hi.square_ref()),
            }
        } else if self.hi <= 0 {
            self.neg().square(prec)
        } else {
            let m = if Float::with_val(prec, -&self.lo) > self.hi {
                Float::with_val(prec, -&self.lo)
            } else {
                self.hi.clone()
            };
            Interval {
                lo: Float::new(prec),
                hi: up(prec, m.square_ref()),
            }
        }
    }

    /// Integer power of a nonnegative interval.
    pub fn pow_u(&self, n: u32, prec: u32) -> Interval {
        assert!(self.lo >= 0, "pow_u expects a nonnegative interval");
        Interval {
            lo: down(prec, (&self.lo).pow(n)),
            hi: up(prec, (&self.hi).pow(n)),
        }
    }

    /// Natural logarithm, or `None` unless the interval is strictly positive.
    pub fn ln(&self, prec: u32) -> Option<Interval> {
        if self.lo <= 0 {
            return None;
        }
        Some(Interval {
            lo: down(prec, self.lo.ln_ref()),
            hi: up(prec, self.hi.ln_ref()),
        })
    }

    pub fn exp(&self, prec: u32) -> Interval {
        Interval {
            lo: down(prec, self.lo.exp_ref()),
            hi: up(prec, self.hi.exp_ref()),
        }
    }

    /// `n`-th root of a nonnegative interval.
    pub fn root(&self, n: u32, prec: u32) -> Interval {
        assert!(self.lo >= 0, "root expects a nonnegative interval");
        Interval {
            lo: down(prec, self.lo.root_ref(n)),
            hi: up(prec, self.hi.root_ref(n)),
        }
    }

    pub fn recip(&self, prec: u32) -> Option<Interval> {
        Interval::from_i64(1, prec).div(self, prec)
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        let lo = if self.lo <= o.lo { &self.lo } else { &o.lo };
        let hi = if self.hi >= o.hi { &self.hi } else { &o.hi };
        Interval {
            lo: lo.clone(),
            hi: hi.clone(),
        }
    }

    pub fn intersects(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        self.lo <= *x && self.hi >= *x
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    /// Every point of `self` is strictly below every point of `o`.
    pub fn certainly_below(&self, o: &Interval) -> bool {
        self.hi < o.lo
    }

    pub fn width(&self) -> Float {
        let prec = self.lo.prec().max(self.hi.prec());
        up(prec, &self.hi - &self.lo)
    }

    pub fn mid(&self) -> Float {
        let prec = self.lo.prec().max(self.hi.prec()) + 1;
        let s = Float::with_val(prec, &self.lo + &self.hi);
        s / 2u32
    }

    pub fn integers(&self) -> IntegerHit {
        let first = match self.lo.to_integer_round(Round::Up) {
            Some((i, _)) => i,
            None => return IntegerHit::Several,
        };
        let last = match self.hi.to_integer_round(Round::Down) {
            Some((i, _)) => i,
            None => return IntegerHit::Several,
        };
        match first.cmp(&last) {
            Ordering::Greater => IntegerHit::None,
            Ordering::Equal => IntegerHit::Unique(first),
            Ordering::Less => IntegerHit::Several,
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (
            self.lo.to_f64_round(Round::Down),
            self.hi.to_f64_round(Round::Up),
        )
    }

    /// `{lo, hi, bits}` with outward-rounded decimal strings.
    pub fn to_json(&self, bits: u32, digits: usize) -> serde_json::Value {
        json!({
            "lo": decimal(&self.lo, digits, Round::Down),
            "hi": decimal(&self.hi, digits, Round::Up),
            "bits": bits,
        })
    }
}

/// Decimal rendering of `x` with `digits` significant digits, rounded in the
/// given direction.
pub fn decimal(x: &Float, digits: usize, round: Round) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix_round(10, Some(digits), round)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            decimal(&self.lo, 20, Round::Down),
            decimal(&self.hi, 20, Round::Up)
        )
    }
}

/// Rectangular complex interval.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn point(re: Float, im: Float) -> Self {
        ComplexInterval {
            re: Interval::point(re),
            im: Interval::point(im),
        }
    }

    pub fn from_integer(n: &Integer, prec: u32) -> Self {
        ComplexInterval {
            re: Interval::from_integer(n, prec),
            im: Interval::from_i64(0, prec),
        }
    }

    pub fn add(&self, o: &ComplexInterval, prec: u32) -> ComplexInterval {
        ComplexInterval {
            re: self.re.add(&o.re, prec),
            im: self.im.add(&o.im, prec),
        }
    }

    pub fn sub(&self, o: &ComplexInterval, prec: u32) -> ComplexInterval {
        ComplexInterval {
            re: self.re.sub(&o.re, prec),
            im: self.im.sub(&o.im, prec),
        }
    }

    pub fn neg(&self) -> ComplexInterval {
        ComplexInterval {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, o: &ComplexInterval, prec: u32) -> ComplexInterval {
        let re = self
            .re
            .mul(&o.re, prec)
            .sub(&self.im.mul(&o.im, prec), prec);
        let im = self
            .re
            .mul(&o.im, prec)
            .add(&self.im.mul(&o.re, prec), prec);
        ComplexInterval { re, im }
    }

    pub fn conj(&self) -> ComplexInterval {
        ComplexInterval {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    /// Upper bound on `|z|` over the box.
    pub fn abs_upper(&self, prec: u32) -> Float {
        let mag = |i: &Interval| {
            let a = Float::with_val(prec, i.lo.abs_ref());
            let b = Float::with_val(prec, i.hi.abs_ref());
            if a > b {
                a
            } else {
                b
            }
        };
        up(prec, mag(&self.re).hypot_ref(&mag(&self.im)))
    }

    /// Lower bound on `|z|` over the box.
    pub fn abs_lower(&self, prec: u32) -> Float {
        let mig = |i: &Interval| {
            if i.contains_zero() {
                Float::new(prec)
            } else {
                let a = Float::with_val(prec, i.lo.abs_ref());
                let b = Float::with_val(prec, i.hi.abs_ref());
                if a < b {
                    a
                } else {
                    b
                }
            }
        };
        down(prec, mig(&self.re).hypot_ref(&mig(&self.im)))
    }

    /// Some Gaussian integer with zero imaginary part may lie in the box.
    pub fn may_be_integer(&self) -> bool {
        self.im.contains_zero() && self.re.integers() != IntegerHit::None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(Float::with_val(P, lo), Float::with_val(P, hi))
    }

    #[test]
    fn rational_enclosure_is_tight() {
        let third = Interval::from_rational(&Rational::from((1, 3)), P);
        assert!(third.contains_rational(&Rational::from((1, 3))));
        assert!(third.lo() < third.hi());
        assert!(third.width() < Float::with_val(P, 1e-37));
    }

    #[test]
    fn mul_handles_signs() {
        let a = iv(-2.0, 3.0);
        let b = iv(-5.0, 1.0);
        let c = a.mul(&b, P);
        assert_eq!(c.lo().to_f64(), -15.0);
        assert_eq!(c.hi().to_f64(), 10.0);
        assert_eq!(a.square(P).lo().to_f64(), 0.0);
        assert_eq!(a.square(P).hi().to_f64(), 9.0);
    }

    #[test]
    fn division_by_interval_containing_zero() {
        assert!(iv(1.0, 2.0).div(&iv(-1.0, 1.0), P).is_none());
        let q = iv(1.0, 2.0).div(&iv(4.0, 8.0), P).unwrap();
        assert_eq!(q.to_f64_pair(), (0.125, 0.5));
    }

    #[test]
    fn ln_exp_round_trip_contains_original() {
        let x = Interval::from_rational(&Rational::from((7, 5)), P);
        let back = x.ln(P).unwrap().exp(P);
        assert!(back.contains_rational(&Rational::from((7, 5))));
        assert!(iv(0.0, 1.0).ln(P).is_none());
    }

    #[test]
    fn root_and_power() {
        let two = Interval::from_i64(2, P);
        let s = two.root(2, P);
        let sq = s.pow_u(2, P);
        assert!(sq.contains(&Float::with_val(P, 2)));
        assert!(sq.width() < Float::with_val(P, 1e-35));
    }

    #[test]
    fn integer_detection() {
        assert_eq!(iv(2.5, 2.7).integers(), IntegerHit::None);
        assert_eq!(iv(2.9, 3.1).integers(), IntegerHit::Unique(Integer::from(3)));
        assert_eq!(iv(-1.5, 0.5).integers(), IntegerHit::Several);
        assert_eq!(iv(-4.0, -4.0).integers(), IntegerHit::Unique(Integer::from(-4)));
    }

    #[test]
    fn complex_magnitude_bounds() {
        let z = ComplexInterval::new(iv(3.0, 3.0), iv(-4.0, -4.0));
        assert_eq!(z.abs_upper(P).to_f64(), 5.0);
        assert_eq!(z.abs_lower(P).to_f64(), 5.0);
        let w = ComplexInterval::new(iv(-1.0, 2.0), iv(1.0, 1.0));
        assert_eq!(w.abs_lower(P).to_f64(), 1.0);
        let prod = z.mul(&z.conj(), P);
        assert_eq!(prod.re.to_f64_pair(), (25.0, 25.0));
        assert!(prod.im.contains_zero());
    }

    #[test]
    fn json_rendering() {
        let x = Interval::from_rational(&Rational::from((1, 3)), 64);
        let v = x.to_json(64, 10);
        assert_eq!(v["bits"], 64);
        assert!(v["lo"].as_str().unwrap().starts_with("3.333333333"));
        assert!(v["hi"].as_str().unwrap().starts_with("3.333333334"));
    }
}
