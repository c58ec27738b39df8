use rug::Rational;

use super::{HalfSpaceSystem, RationalPoint, Subset, Vertex, VertexSet};
use crate::error::{Error, Result};

/// Eliminate `x_k` from a system of dimension `k >= 2` by substituting
/// `x_k = (a_k/b_k)(1 + x_1 + … + x_(k-1))`: rows `i < k` become
/// `a_i' = a_i - b_i a_k/b_k`, `b_i' = b_i (1 + a_k/b_k)`.
///
/// Fails with the offending pair `(i, k)` when some `a_i' <= 0`, and checks
/// that every skew product scales by exactly `1 + a_k/b_k`.
pub fn eliminate_last(sys: &HalfSpaceSystem) -> Result<HalfSpaceSystem> {
    let k = sys.k();
    assert!(k >= 2, "nothing to eliminate");
    let ratio = Rational::from(&sys.a()[k - 1] / &sys.b()[k - 1]);
    let scale = Rational::from(1 + &ratio);
    let mut a = Vec::with_capacity(k - 1);
    let mut b = Vec::with_capacity(k - 1);
    for i in 0..k - 1 {
        let ai = &sys.a()[i] - Rational::from(&sys.b()[i] * &ratio);
        if ai <= 0 {
            return Err(Error::SkewViolation { i: i + 1, j: k });
        }
        a.push(ai);
        b.push(Rational::from(&sys.b()[i] * &scale));
    }
    let reduced = HalfSpaceSystem::without_skew_check(a, b)?;
    for i in 1..k {
        for j in i + 1..k {
            let expected = sys.skew(i, j) * &scale;
            let got = reduced.skew(i, j);
            if got != expected || got <= 0 {
                return Err(Error::SkewViolation { i, j });
            }
        }
    }
    Ok(reduced)
}

/// Vertices by recursion on the last coordinate: either `x_k = 0` and the
/// last row is dropped, or row `k` is tight and `x_k` is eliminated.
pub fn vertices_by_elimination(sys: &HalfSpaceSystem) -> Result<VertexSet> {
    let vertices = recurse(sys)?
        .into_iter()
        .map(|(subset, coords)| Vertex {
            subset,
            point: RationalPoint(coords),
        })
        .collect();
    Ok(VertexSet::new(sys.k(), vertices))
}

fn recurse(sys: &HalfSpaceSystem) -> Result<Vec<(Subset, Vec<Rational>)>> {
    let k = sys.k();
    let ratio = Rational::from(&sys.a()[k - 1] / &sys.b()[k - 1]);
    if k == 1 {
        return Ok(vec![(Subset::EMPTY, vec![Rational::new()]), (Subset::singleton(1), vec![ratio])]);
    }
    let dropped = HalfSpaceSystem::without_skew_check(sys.a()[..k - 1].to_vec(), sys.b()[..k - 1].to_vec())?;
    let reduced = eliminate_last(sys)?;
    let mut out = Vec::with_capacity(1 << k);
    for (s, mut x) in recurse(&dropped)? {
        x.push(Rational::new());
        out.push((s, x));
    }
    for (s, mut x) in recurse(&reduced)? {
        let sum: Rational = x.iter().sum();
        x.push(&ratio * (1 + sum));
        out.push((s.with(k), x));
    }
    Ok(out)
}
