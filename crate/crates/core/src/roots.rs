//! Certified simultaneous root finding.
//!
//! Roots are approximated with the Aberth–Ehrlich iteration (first in `f64`,
//! then in MPFR at the working precision) and certified a posteriori with
//! Weierstrass corrections: for a degree-`n` polynomial and distinct
//! approximations `z_i`, every root lies in the union of the disks
//! `|z - z_i| <= n |W_i|`, where `W_i = p(z_i) / (lc * prod_{j != i}(z_i - z_j))`,
//! and a union of `m` disks disjoint from the others holds exactly `m` roots.
//! Pairwise disjoint disks therefore isolate one root each.

use num_complex::Complex64;
use rug::float::Round;
use rug::{Complex, Float};
use serde_json::json;

use crate::error::{Error, Result};
use crate::interval::{decimal, ComplexInterval, Interval};
use crate::poly::IntPolynomial;

const F64_MAX_ITER: usize = 500;
const MP_MAX_ITER: usize = 120;
const MAX_GUARD_BITS: u32 = 8192;

/// A disk certified to contain exactly one root.
#[derive(Clone, Debug, PartialEq)]
pub struct RootEnclosure {
    center: Complex,
    radius: Float,
    bits: u32,
}

impl RootEnclosure {
    pub fn center(&self) -> &Complex {
        &self.center
    }

    pub fn radius(&self) -> &Float {
        &self.radius
    }

    /// Target precision the enclosure was certified for.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// The square circumscribing the disk.
    pub fn as_box(&self, prec: u32) -> ComplexInterval {
        let side = |c: &Float| {
            Interval::new(
                Float::with_val_round(prec, c - &self.radius, Round::Down).0,
                Float::with_val_round(prec, c + &self.radius, Round::Up).0,
            )
        };
        ComplexInterval::new(side(self.center.real()), side(self.center.imag()))
    }

    /// Interval containing `|root|`.
    pub fn modulus(&self, prec: u32) -> Interval {
        let (re, im) = (self.center.real(), self.center.imag());
        let abs_lo = Float::with_val_round(prec, re.hypot_ref(im), Round::Down).0;
        let abs_hi = Float::with_val_round(prec, re.hypot_ref(im), Round::Up).0;
        let mut lo = Float::with_val_round(prec, &abs_lo - &self.radius, Round::Down).0;
        if lo < 0 {
            lo = Float::new(prec);
        }
        let hi = Float::with_val_round(prec, &abs_hi + &self.radius, Round::Up).0;
        Interval::new(lo, hi)
    }

    /// `{re, im, radius, bits}` with decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let digits = (self.bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 5;
        json!({
            "re": decimal(self.center.real(), digits, Round::Nearest),
            "im": decimal(self.center.imag(), digits, Round::Nearest),
            "radius": decimal(&self.radius, 6, Round::Up),
            "bits": self.bits,
        })
    }
}

/// Certified roots of one squarefree polynomial at a common precision.
#[derive(Clone, Debug)]
pub struct RootSet {
    poly: IntPolynomial,
    roots: Vec<RootEnclosure>,
    bits: u32,
}

/// Enclosures of all roots of `p`, each with radius at most
/// `2^-target_bits * max(1, |center|)`.
pub fn solve_roots(p: &IntPolynomial, target_bits: u32) -> Result<Vec<RootEnclosure>> {
    Ok(RootSet::solve(p, target_bits)?.roots)
}

impl RootSet {
    pub fn solve(p: &IntPolynomial, target_bits: u32) -> Result<Self> {
        if p.degree() == 0 {
            return Err(Error::DegreeTooSmall { min: 1, got: 0 });
        }
        let g = p.squarefree_gcd();
        if g.degree() > 0 {
            return Err(Error::NotSquarefree { gcd: g.to_string() });
        }
        let seeds = aberth_f64(p);
        let approx = seeds
            .iter()
            .map(|z| Complex::with_val(53, (z.re, z.im)))
            .collect();
        certify_from(p, approx, target_bits)
    }

    /// Re-certify at a higher precision, starting from the current centers.
    pub fn refine(&self, target_bits: u32) -> Result<Self> {
        if target_bits <= self.bits {
            return Ok(self.clone());
        }
        let approx = self.roots.iter().map(|r| r.center.clone()).collect();
        certify_from(&self.poly, approx, target_bits)
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn roots(&self) -> &[RootEnclosure] {
        &self.roots
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Same enclosures in a different order; used to check that downstream
    /// reports do not depend on root order.
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.roots.len());
        RootSet {
            poly: self.poly.clone(),
            roots: order.iter().map(|&i| self.roots[i].clone()).collect(),
            bits: self.bits,
        }
    }
}

fn certify_from(p: &IntPolynomial, mut approx: Vec<Complex>, target: u32) -> Result<RootSet> {
    // A canonical starting order makes the result independent of the order
    // in which the caller holds the roots.
    approx.sort_by(|a, b| {
        b.real()
            .partial_cmp(a.real())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(b.imag().partial_cmp(a.imag()).unwrap_or(std::cmp::Ordering::Equal))
    });
    let mut guard = 64;
    loop {
        let prec = target + guard;
        aberth_mp(p, &mut approx, prec, target + guard / 2);
        if let Some(roots) = certify(p, &approx, target, prec) {
            return Ok(RootSet {
                poly: p.clone(),
                roots,
                bits: target,
            });
        }
        if guard >= MAX_GUARD_BITS {
            return Err(Error::CertificationFailure {
                poly: p.to_string(),
                bits: target,
            });
        }
        guard *= 2;
    }
}

/// Starting points on circles read off the Newton polygon of `p`: each edge
/// of the upper hull of `(i, ln|a_i|)` contributes as many points as its
/// horizontal length, on a circle of the matching radius.
fn initial_seeds(p: &IntPolynomial) -> Vec<Complex64> {
    let n = p.degree();
    let pts: Vec<(usize, f64)> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(i, c)| (i, log_abs(c)))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 as f64 - x1 as f64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as f64 - x1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut seeds = Vec::with_capacity(n);
    let zero_roots = pts[0].0;
    for k in 0..zero_roots {
        let theta = std::f64::consts::TAU * k as f64 / zero_roots as f64 + 0.4;
        seeds.push(Complex64::from_polar(1e-3, theta));
    }
    for w in hull.windows(2) {
        let (i0, y0) = w[0];
        let (i1, y1) = w[1];
        let count = i1 - i0;
        let radius = ((y0 - y1) / count as f64).exp();
        for k in 0..count {
            let theta = std::f64::consts::TAU * (k as f64 / count as f64 + i0 as f64 / n as f64) + 0.4;
            seeds.push(Complex64::from_polar(radius, theta));
        }
    }
    seeds
}

fn log_abs(c: &rug::Integer) -> f64 {
    let f = c.to_f64().abs();
    if f.is_finite() {
        f.ln()
    } else {
        c.significant_bits() as f64 * std::f64::consts::LN_2
    }
}

fn aberth_f64(p: &IntPolynomial) -> Vec<Complex64> {
    let mut zs = initial_seeds(p);
    let coeffs: Vec<f64> = p.coeffs().iter().map(|c| c.to_f64()).collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return zs;
    }
    let n = zs.len();
    for _ in 0..F64_MAX_ITER {
        let mut converged = true;
        for i in 0..n {
            let z = zs[i];
            let (mut v, mut dv) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for &c in coeffs.iter().rev() {
                dv = dv * z + v;
                v = v * z + c;
            }
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z - zs[j]).inv())
                .sum();
            let corr = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !corr.re.is_finite() || !corr.im.is_finite() {
                zs[i] = z * Complex64::new(1.0 + 1e-7, 1e-7);
                converged = false;
                continue;
            }
            zs[i] = z - corr;
            if corr.norm() > 1e-14 * zs[i].norm().max(1.0) {
                converged = false;
            }
        }
        if converged {
            break;
        }
    }
    zs
}

/// Aberth–Ehrlich iteration at `prec` bits, stopped once every correction
/// falls below `2^-stop_bits * max(1, |z|)` or the iteration stagnates.
fn aberth_mp(p: &IntPolynomial, zs: &mut [Complex], prec: u32, stop_bits: u32) {
    let n = zs.len();
    for z in zs.iter_mut() {
        z.set_prec(prec);
    }
    let coeffs: Vec<Float> = p.coeffs().iter().map(|c| Float::with_val(prec, c)).collect();
    let one = Float::with_val(prec, 1);
    let mut previous_max: Option<Float> = None;
    let mut stalls = 0;
    for _ in 0..MP_MAX_ITER {
        let mut converged = true;
        let mut max_corr = Float::with_val(64, 0);
        for i in 0..n {
            let z = zs[i].clone();
            let mut v = Complex::new(prec);
            let mut dv = Complex::new(prec);
            for c in coeffs.iter().rev() {
                dv *= &z;
                dv += &v;
                v *= &z;
                v += c;
            }
            if v.is_zero() {
                continue;
            }
            if dv.is_zero() {
                zs[i] *= Complex::with_val(prec, (1, Float::with_val(prec, 1) >> (prec / 2)));
                converged = false;
                continue;
            }
            let ratio = Complex::with_val(prec, &v / &dv);
            let mut s = Complex::new(prec);
            let mut clash = false;
            for (j, zj) in zs.iter().enumerate() {
                if j == i {
                    continue;
                }
                let diff = Complex::with_val(prec, &z - zj);
                if diff.is_zero() {
                    clash = true;
                    break;
                }
                s += diff.recip();
            }
            if clash {
                zs[i] *= Complex::with_val(prec, (1, Float::with_val(prec, 1) >> (prec / 2)));
                converged = false;
                continue;
            }
            let denom = Complex::with_val(prec, 1 - Complex::with_val(prec, &ratio * &s));
            let corr = if denom.is_zero() {
                ratio
            } else {
                Complex::with_val(prec, &ratio / &denom)
            };
            zs[i] -= &corr;
            let corr_abs = Float::with_val(64, corr.abs_ref());
            let z_abs = Float::with_val(64, zs[i].abs_ref());
            let scale = if z_abs > one { z_abs } else { Float::with_val(64, 1) };
            if corr_abs > Float::with_val(64, &scale >> stop_bits) {
                converged = false;
            }
            if corr_abs > max_corr {
                max_corr = corr_abs;
            }
        }
        if converged {
            break;
        }
        // Stop once corrections are tiny but no longer shrinking: the rounding
        // floor has been reached and certification decides what happens next.
        if let Some(prev) = &previous_max {
            let tiny = Float::with_val(64, Float::with_val(64, 1) >> (prec / 2));
            if max_corr < tiny && Float::with_val(64, &max_corr * 2u32) > *prev {
                stalls += 1;
                if stalls >= 2 {
                    break;
                }
            } else {
                stalls = 0;
            }
        }
        previous_max = Some(Float::with_val(64, &max_corr));
    }
}

fn certify(p: &IntPolynomial, zs: &[Complex], target: u32, prec: u32) -> Option<Vec<RootEnclosure>> {
    let n = zs.len();
    let coeffs: Vec<ComplexInterval> = p
        .coeffs()
        .iter()
        .map(|c| ComplexInterval::from_integer(c, prec))
        .collect();
    let lead = ComplexInterval::from_integer(p.leading(), prec);
    let points: Vec<ComplexInterval> = zs
        .iter()
        .map(|z| ComplexInterval::point(z.real().clone(), z.imag().clone()))
        .collect();
    let degree = Float::with_val(prec, n as u32);
    let mut radii = Vec::with_capacity(n);
    for (i, zi) in points.iter().enumerate() {
        let mut value = coeffs[n].clone();
        for c in coeffs[..n].iter().rev() {
            value = value.mul(zi, prec).add(c, prec);
        }
        let mut prod = lead.clone();
        for (j, zj) in points.iter().enumerate() {
            if j != i {
                prod = prod.mul(&zi.sub(zj, prec), prec);
            }
        }
        let den = prod.abs_lower(prec);
        if den.is_zero() {
            return None;
        }
        let num = value.abs_upper(prec);
        let w = Float::with_val_round(prec, &num / &den, Round::Up).0;
        let r = Float::with_val_round(prec, &w * &degree, Round::Up).0;
        let z_abs = zi.abs_lower(prec);
        let scale = if z_abs > 1 { z_abs } else { Float::with_val(prec, 1) };
        if r > (scale >> target) {
            return None;
        }
        radii.push(r);
    }
    for i in 0..n {
        for j in i + 1..n {
            let dist = points[i].sub(&points[j], prec).abs_lower(prec);
            let reach = Float::with_val_round(prec, &radii[i] + &radii[j], Round::Up).0;
            if dist <= reach {
                return None;
            }
        }
    }
    Some(
        zs.iter()
            .zip(radii)
            .map(|(z, radius)| RootEnclosure {
                center: z.clone(),
                radius,
                bits: target,
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::{Integer, Rational};

    fn p(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    /// Bisection on a sign change of an integer polynomial, exact rational
    /// arithmetic throughout.
    fn bisect(f: &IntPolynomial, mut lo: Rational, mut hi: Rational, steps: usize) -> Rational {
        let eval = |x: &Rational| {
            let mut acc = Rational::new();
            for c in f.coeffs().iter().rev() {
                acc *= x;
                acc += c;
            }
            acc
        };
        let lo_sign = eval(&lo).cmp0();
        for _ in 0..steps {
            let mid = Rational::from(&lo + &hi) / 2u32;
            if eval(&mid).cmp0() == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    fn moduli_f64(f: &IntPolynomial, bits: u32) -> Vec<f64> {
        let mut m: Vec<f64> = solve_roots(f, bits)
            .unwrap()
            .iter()
            .map(|r| r.modulus(bits + 64).mid().to_f64())
            .collect();
        m.sort_by(|a, b| b.partial_cmp(a).unwrap());
        m
    }

    #[test]
    fn sqrt_two() {
        let roots = solve_roots(&p("x^2 - 2"), 64).unwrap();
        assert_eq!(roots.len(), 2);
        let sqrt2 = Float::with_val(200, 2).sqrt();
        for r in &roots {
            let d = (Float::with_val(200, r.center().real().abs_ref()) - &sqrt2).abs();
            assert!(d < Float::with_val(200, 1e-18));
            assert!(*r.radius() < Float::with_val(64, Float::with_val(64, 2) >> 64));
            assert!(r.as_box(200).re.contains(&(Float::with_val(200, r.center().real().signum_ref()) * &sqrt2)));
        }
    }

    #[test]
    fn plastic_number_against_bisection() {
        let f = p("x^3 - x - 1");
        let real = bisect(&f, Rational::from(1), Rational::from(2), 200);
        let roots = solve_roots(&f, 128).unwrap();
        let real_root = roots
            .iter()
            .find(|r| r.center().imag().clone().abs() < 1e-30)
            .unwrap();
        let m = real_root.modulus(192);
        assert!(m.contains_rational(&real) || m.width() < Float::with_val(64, 1e-36));
        let diff = Float::with_val(192, real_root.center().real() - &real).abs();
        assert!(diff < Float::with_val(64, 1e-37));
        assert!((real.to_f64() - 1.324_717_957_2).abs() < 1e-10);
        // Complex pair: modulus 1/sqrt(real root) because the roots multiply to 1.
        let expected = 1.0 / real.to_f64().sqrt();
        for r in roots.iter().filter(|r| r.center().imag().clone().abs() > 0.1) {
            assert!((r.modulus(128).mid().to_f64() - expected).abs() < 1e-14);
            assert!((expected - 0.868_836_9).abs() < 1e-6);
        }
    }

    #[test]
    fn trinomial_moduli_against_fixed_point_oracle() {
        // Large roots sit near h^(1/3) and small ones near h^(-1/2); the real
        // ones are pinned down by bisection.
        let f = p("x^5 - 10x^2 + 1");
        let m = moduli_f64(&f, 128);
        assert_eq!(m.len(), 5);
        for &v in &m[..3] {
            assert!((v - 10f64.powf(1.0 / 3.0)).abs() < 0.03, "{m:?}");
        }
        for &v in &m[3..] {
            assert!((v - 10f64.powf(-0.5)).abs() < 0.002, "{m:?}");
        }
        let big = bisect(&f, Rational::from((21, 10)), Rational::from((22, 10)), 120);
        let small_pos = bisect(&f, Rational::from((3, 10)), Rational::from((32, 100)), 120);
        let small_neg = bisect(&f, Rational::from((-33, 100)), Rational::from((-31, 100)), 120);
        assert!(m.iter().any(|v| (v - big.to_f64()).abs() < 1e-13));
        assert!(m.iter().any(|v| (v - small_pos.to_f64()).abs() < 1e-13));
        assert!(m.iter().any(|v| (v + small_neg.to_f64()).abs() < 1e-13));
    }

    #[test]
    fn vieta_checks() {
        for text in ["x^5 - 10x^2 + 1", "x^3 - x - 1", "2x^4 - 3x + 7", "x^7 - 40x^3 + 1"] {
            let f = p(text);
            let prec = 192;
            let roots = solve_roots(&f, 128).unwrap();
            assert_eq!(roots.len(), f.degree());
            let mut prod = Interval::from_i64(1, prec);
            let mut sum = ComplexInterval::from_integer(&Integer::new(), prec);
            for r in &roots {
                prod = prod.mul(&r.modulus(prec), prec);
                sum = sum.add(&r.as_box(prec), prec);
            }
            let lead = Rational::from(f.leading());
            let expected_prod = Rational::from(f.constant()) / &lead;
            assert!(prod.contains_rational(&Rational::from(expected_prod.abs_ref())), "{text}");
            let n = f.degree();
            let expected_sum = -Rational::from(&f.coeffs()[n - 1]) / lead;
            assert!(sum.re.contains_rational(&expected_sum), "{text}");
            assert!(sum.im.contains_zero(), "{text}");
        }
    }

    #[test]
    fn rejects_non_squarefree() {
        let err = RootSet::solve(&p("x^3 - x^2 - x + 1"), 64).unwrap_err();
        assert_eq!(err, Error::NotSquarefree { gcd: "x - 1".into() });
        assert!(RootSet::solve(&p("5"), 64).is_err());
    }

    #[test]
    fn refinement_shrinks_radii_and_is_deterministic() {
        let f = p("x^6 - x^2 - 1");
        let a = RootSet::solve(&f, 64).unwrap();
        let b = a.refine(512).unwrap();
        assert_eq!(b.bits(), 512);
        for r in b.roots() {
            assert!(*r.radius() < Float::with_val(64, Float::with_val(64, 2) >> 500));
        }
        let again = RootSet::solve(&f, 64).unwrap().refine(512).unwrap();
        assert_eq!(again.roots(), b.roots());
    }

    #[test]
    fn zero_root_and_linear() {
        let roots = solve_roots(&p("x^3 - 4x"), 64).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().any(|r| r.modulus(128).contains(&Float::with_val(128, 0))));
        let lin = solve_roots(&p("3x - 1"), 100).unwrap();
        assert!(lin[0].as_box(160).re.contains_rational(&Rational::from((1, 3))));
    }

    #[test]
    fn wide_spread_of_moduli() {
        let f = p("x^8 - 1000x^7 + 1");
        let m = moduli_f64(&f, 128);
        assert!((m[0] - 1000.0).abs() < 1e-3);
        for &v in &m[1..] {
            assert!((v - 1000f64.powf(-1.0 / 7.0)).abs() < 1e-3);
        }
    }

    #[test]
    fn enclosure_json_shape() {
        let r = &solve_roots(&p("x^2 + 1"), 64).unwrap()[0];
        let v = r.to_json();
        assert_eq!(v["bits"], 64);
        assert!(v["re"].is_string() && v["im"].is_string() && v["radius"].is_string());
    }
}
