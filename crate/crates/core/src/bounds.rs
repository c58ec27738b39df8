//! Exponent bookkeeping for `d > 3k`: `mu`, `E`, which expression attains
//! the maximum, and least-squares fits of observed margins against height.

use rug::{Float, Integer, Rational};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Branch {
    /// `2(d-1)(d-2)` is strictly larger.
    TwoFactor,
    /// `(d-1)(d-2)(d-3)/(2 mu)` is strictly larger.
    ThreeFactor,
    Equal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsProfile {
    pub d: u32,
    pub k: u32,
    pub mu: u32,
    pub cal_e: Rational,
    pub branch: Branch,
    /// `-E + 1/(k(d-1))`.
    pub predicted_exponent: Rational,
}

impl BoundsProfile {
    pub fn new(d: u32, k: u32) -> Result<Self> {
        if k == 0 || d <= 3 * k {
            return Err(Error::BoundsHypothesis { d, k });
        }
        let third = d.div_ceil(3);
        let mu = (third - k).div_ceil(2);
        let d = d as u64;
        let two = Rational::from(2 * (d - 1) * (d - 2));
        let three = Rational::from(((d - 1) * (d - 2) * (d - 3), 2 * mu as u64));
        let (cal_e, branch) = match two.cmp(&three) {
            std::cmp::Ordering::Greater => (two, Branch::TwoFactor),
            std::cmp::Ordering::Less => (three, Branch::ThreeFactor),
            std::cmp::Ordering::Equal => (two, Branch::Equal),
        };
        let predicted_exponent = Rational::from((1, k as u64 * (d - 1))) - &cal_e;
        Ok(BoundsProfile {
            d: d as u32,
            k,
            mu,
            cal_e,
            branch,
            predicted_exponent,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "d": self.d,
            "k": self.k,
            "mu": self.mu,
            "calE": self.cal_e.to_string(),
            "branch": self.branch,
            "predictedExponent": self.predicted_exponent.to_string(),
        })
    }
}

/// All `(d, k)` with `k = 1, d` in `k1` and `k = 2, d` in `k2` whose maximum
/// is attained only by `2(d-1)(d-2)`.
pub fn exceptional_set(
    k1: std::ops::RangeInclusive<u32>,
    k2: std::ops::RangeInclusive<u32>,
) -> Result<Vec<(u32, u32)>> {
    let mut out = Vec::new();
    for (k, range) in [(1, k1), (2, k2)] {
        for d in range {
            if BoundsProfile::new(d, k)?.branch == Branch::TwoFactor {
                out.push((d, k));
            }
        }
    }
    Ok(out)
}

/// Profiles for every `(d, k)` with `d > 3k` and `d <= d_max`, by `k` then `d`.
pub fn bounds_table(d_max: u32) -> Vec<BoundsProfile> {
    (1..)
        .take_while(|k| 3 * k < d_max)
        .flat_map(|k| (3 * k + 1..=d_max).map(move |d| BoundsProfile::new(d, k).expect("d > 3k")))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    /// `(ln H, ln margin)` pairs.
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept_ignored: bool,
}

/// Least-squares slope of `ln(margin)` against `ln(H)`. Margins are the
/// certified lower bounds and must be positive.
pub fn fit_margin_exponent(samples: &[(Integer, Float)]) -> Result<ExponentFit> {
    if samples.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 samples, got {}", samples.len())));
    }
    let mut pts = Vec::with_capacity(samples.len());
    for (h, m) in samples {
        if *m <= 0 {
            return Err(Error::Fit(format!("non-positive margin lower bound at H = {h}")));
        }
        if *h <= 0 {
            return Err(Error::Fit(format!("non-positive height {h}")));
        }
        let lh = Float::with_val(64, h).ln().to_f64();
        let lm = Float::with_val(m.prec().max(64), m).ln().to_f64();
        pts.push((lh, lm));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all samples share one height".into()));
    }
    let slope = sxy / sxx;
    if !slope.is_finite() {
        return Err(Error::Fit("slope is not finite".into()));
    }
    Ok(ExponentFit {
        samples: pts,
        slope,
        intercept_ignored: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Piecewise form: `2(d-1)(d-2)` exactly on the four listed pairs.
    fn piecewise(d: u32, k: u32) -> Rational {
        let d = d as i64;
        if k == 1 && [4, 5, 6, 10].contains(&d) {
            Rational::from(2 * (d - 1) * (d - 2))
        } else {
            let mu = ((d + 2) / 3 - k as i64 + 1) / 2;
            Rational::from(((d - 1) * (d - 2) * (d - 3), 2 * mu))
        }
    }

    #[test]
    fn examples() {
        let p = BoundsProfile::new(10, 1).unwrap();
        assert_eq!((p.mu, p.cal_e.clone(), p.branch), (2, Rational::from(144), Branch::TwoFactor));
        let p = BoundsProfile::new(13, 4).unwrap();
        assert_eq!((p.mu, p.cal_e.clone(), p.branch), (1, Rational::from(660), Branch::ThreeFactor));
        let p = BoundsProfile::new(7, 1).unwrap();
        assert_eq!((p.mu, p.cal_e.clone(), p.branch), (1, Rational::from(60), Branch::Equal));
        assert_eq!(p.predicted_exponent, Rational::from((-359, 6)));
        assert_eq!(BoundsProfile::new(11, 1).unwrap().branch, Branch::Equal);
        assert_eq!(BoundsProfile::new(9, 3), Err(Error::BoundsHypothesis { d: 9, k: 3 }));
        assert_eq!(BoundsProfile::new(6, 2), Err(Error::BoundsHypothesis { d: 6, k: 2 }));
    }

    #[test]
    fn json_shape() {
        let j = BoundsProfile::new(13, 4).unwrap().to_json();
        assert_eq!(j["calE"], "660");
        assert_eq!(j["branch"], "THREE_FACTOR");
        assert_eq!(j["predictedExponent"], "-31679/48");
    }

    #[test]
    fn exceptional_pairs() {
        assert_eq!(exceptional_set(4..=20, 7..=14).unwrap(), vec![(4, 1), (5, 1), (6, 1), (10, 1)]);
        let none = || std::ops::RangeInclusive::new(1, 0);
        assert!(exceptional_set(none(), 7..=14).unwrap().is_empty());
        assert!(exceptional_set(21..=30, none()).unwrap().is_empty());
        assert!(exceptional_set(3..=5, none()).is_err());
    }

    #[test]
    fn agrees_with_piecewise_form() {
        let table = bounds_table(40);
        assert!(table.iter().any(|p| p.k == 13 && p.d == 40));
        for p in table {
            assert_eq!(p.cal_e, piecewise(p.d, p.k), "({}, {})", p.d, p.k);
            assert!(p.mu >= 1);
            assert!(p.predicted_exponent < 0);
            assert!(p.predicted_exponent > -p.cal_e.clone());
            if p.branch == Branch::TwoFactor {
                assert!(p.k == 1 && [4, 5, 6, 10].contains(&p.d));
            }
        }
    }

    #[test]
    fn fits() {
        let s = |pairs: &[(u32, f64)]| -> Vec<(Integer, Float)> {
            pairs.iter().map(|&(h, m)| (Integer::from(h), Float::with_val(64, m))).collect()
        };
        let f = fit_margin_exponent(&s(&[(10, 1e-2), (100, 1e-4), (1000, 1e-6)])).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-12);
        let f = fit_margin_exponent(&s(&[(10, 0.5), (20, 0.5), (40, 0.5)])).unwrap();
        assert!(f.slope.abs() < 1e-12);
        assert!(fit_margin_exponent(&s(&[(10, 0.5), (20, 0.5)])).is_err());
        assert!(fit_margin_exponent(&s(&[(10, 0.5), (20, 0.0), (30, 0.1)])).is_err());
    }

    proptest! {
        #[test]
        fn fit_recovers_power_laws(e in -6i32..3, c in 1u32..50, hs in proptest::collection::btree_set(2u32..10_000, 3..8)) {
            let samples: Vec<_> = hs
                .iter()
                .map(|&h| {
                    let m = Float::with_val(200, Float::i_pow_u(h as i32, 0)) * c;
                    let m = if e >= 0 { m * Float::with_val(200, Float::u_pow_u(h, e as u32)) } else { m / Float::with_val(200, Float::u_pow_u(h, (-e) as u32)) };
                    (Integer::from(h), m)
                })
                .collect();
            let f = fit_margin_exponent(&samples).unwrap();
            prop_assert!((f.slope - e as f64).abs() < 1e-9);
        }
    }
}
