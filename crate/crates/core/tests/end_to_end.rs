use ekd_core::moduli::count_in_annulus;
use ekd_core::moduli::half_epsilon_annuli;
use ekd_core::polytope::{vertices_brute_force, vertices_by_elimination, vertices_closed_form, HalfSpaceSystem};
use ekd_core::verifier::{product_at, Conjugates, Verdict};
use ekd_core::{sorted_moduli, IntPolynomial, RationalPoint, RootSet, TrinomialSpec, DEFAULT_PRECISION_CAP};
use num_complex::Complex64;
use proptest::prelude::*;
use rug::Rational;

/// Plain f64 Durand-Kerner, independent of the certified solver.
fn durand_kerner(coeffs: &[i64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c as f64);
    let seed = Complex64::new(0.4, 0.9);
    let scale = 1.0 + coeffs.iter().map(|c| c.abs()).max().unwrap() as f64;
    let mut z: Vec<Complex64> = (0..d).map(|i| seed.powu(i as u32) * scale * 0.5).collect();
    for _ in 0..2000 {
        let prev = z.clone();
        for i in 0..d {
            let denom = (0..d).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            let step = eval(z[i]) / denom;
            z[i] -= step;
        }
        if z.iter().zip(&prev).all(|(a, b)| (a - b).norm() < 1e-15 * a.norm().max(1.0)) {
            break;
        }
    }
    z
}

fn oracle_product(coeffs: &[i64], c: &RationalPoint) -> f64 {
    let mut m: Vec<f64> = durand_kerner(coeffs).iter().map(|z| z.norm()).collect();
    m.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let log = m[0].ln() + c.coords().iter().enumerate().map(|(i, ci)| ci.to_f64() * m[i + 1].ln()).sum::<f64>();
    log.exp()
}

#[test]
fn triple_agreement_small() {
    for d in 2..=12 {
        for k in 1..d.min(6) {
            let closed = vertices_closed_form(k, d).unwrap();
            let sys = HalfSpaceSystem::ekd(k, d).unwrap();
            assert_eq!(closed.first_difference(&vertices_by_elimination(&sys).unwrap()), None, "({k},{d})");
            assert_eq!(closed.first_difference(&vertices_brute_force(&sys).unwrap()), None, "({k},{d})");
            for v in closed.vertices() {
                assert!(sys.contains(&v.point).unwrap().is_member());
            }
        }
    }
}

#[test]
fn certified_products_match_float_oracle() {
    for (coeffs, label) in [
        (vec![1i64, 0, -10, 0, 0, 1], "x^5 - 10x^2 + 1"),
        (vec![-1, -1, 0, 0, 0, 0, 0, 1], "x^7 - x - 1"),
        (vec![1, 0, 0, 7, 0, 0, 0, 0, 1], "x^8 + 7x^3 + 1"),
    ] {
        let p = IntPolynomial::from_i64(&coeffs).unwrap();
        assert_eq!(p.to_string(), label);
        let profile = sorted_moduli(&RootSet::solve(&p, 128).unwrap(), DEFAULT_PRECISION_CAP).unwrap();
        let d = p.degree();
        for k in 1..d {
            for v in vertices_closed_form(k, d).unwrap().vertices() {
                let got = product_at(&profile, &v.point).unwrap().unwrap();
                let want = oracle_product(&coeffs, &v.point);
                let mid = got.mid().to_f64();
                assert!((mid - want).abs() <= 1e-9 * want.max(1.0), "{label} at {}: {mid} vs {want}", v.point);
            }
        }
    }
}

#[test]
fn annulus_counts_match_float_oracle() {
    for d in 3..=7u32 {
        for j in 1..d {
            for h in [-11i64, -4, 3, 9, 25] {
                let spec = TrinomialSpec::new(d, j, h).unwrap();
                let p = spec.polynomial();
                let pred = half_epsilon_annuli(&spec).unwrap();
                let profile = sorted_moduli(&RootSet::solve(&p, 128).unwrap(), DEFAULT_PRECISION_CAP).unwrap();
                let inner = count_in_annulus(&profile, &pred.inner_low, &pred.inner_high).unwrap();
                let coeffs: Vec<i64> = p.coeffs().iter().map(|c| c.to_i64().unwrap()).collect();
                let (lo, hi) = (pred.inner_low.to_f64(), pred.inner_high.to_f64());
                let oracle = durand_kerner(&coeffs)
                    .iter()
                    .filter(|z| z.norm() > lo && z.norm() < hi)
                    .count();
                assert_eq!(inner, oracle, "{p}");
                assert_eq!(inner, j as usize);
            }
        }
    }
}

#[test]
fn vertex_verdicts_for_a_unit_of_large_degree() {
    // x^10 - 3x^4 + 1 has d > 3k for k <= 3.
    let p: IntPolynomial = "x^10 - 3x^4 + 1".parse().unwrap();
    let mut conj = Conjugates::certify(&p, 128, DEFAULT_PRECISION_CAP).unwrap();
    assert!(conj.irreducibility().is_irreducible());
    for k in 1..=3 {
        for v in vertices_closed_form(k, 10).unwrap().vertices() {
            let r = conj.margin(&v.point, Some(v.subset)).unwrap();
            assert_eq!(r.verdict, Verdict::Positive, "k={k} at {}", v.point);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Convex combinations of vertices stay inside; stepping outward past a
    /// vertex along a tight row leaves.
    #[test]
    fn convexity_and_tight_rows(k in 1usize..5, extra in 1usize..6, w in proptest::collection::vec(0u32..5, 16)) {
        let d = k + extra;
        let sys = HalfSpaceSystem::ekd(k, d).unwrap();
        let set = vertices_closed_form(k, d).unwrap();
        let n = set.len();
        let weights: Vec<u32> = (0..n).map(|i| w[i % w.len()]).collect();
        let total: u32 = weights.iter().sum::<u32>().max(1);
        let mut coords = vec![Rational::new(); k];
        for (v, &wi) in set.vertices().iter().zip(&weights) {
            for (c, x) in coords.iter_mut().zip(v.point.coords()) {
                *c += Rational::from((wi, total)) * x;
            }
        }
        prop_assert!(sys.contains(&RationalPoint(coords)).unwrap().is_member());
        let full = set.vertices().iter().find(|v| v.subset.len() == k).unwrap();
        let mut out = full.point.coords().to_vec();
        out[0] += Rational::from((1, 1000));
        prop_assert!(!sys.contains(&RationalPoint(out)).unwrap().is_member());
    }
}
