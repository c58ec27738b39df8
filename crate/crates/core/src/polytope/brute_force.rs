use rayon::prelude::*;
use rug::Rational;

use super::linsolve::solve_exact;
use super::{HalfSpaceSystem, RationalPoint, Subset, Vertex, VertexSet};
use crate::error::{Error, Result};

/// Solve `row_i = 0` for `i` in `rows` together with `x_j = 0` for `j` in
/// `zeros`; the two sets must have `k` elements in total. `None` when the
/// system is singular.
pub fn solve_active_set(sys: &HalfSpaceSystem, rows: Subset, zeros: Subset) -> Result<Option<RationalPoint>> {
    let k = sys.k();
    if !rows.fits(k) || !zeros.fits(k) || rows.len() + zeros.len() != k {
        return Err(Error::InvalidSubset {
            subset: format!("{rows} / {zeros}"),
            reason: format!("need {k} active constraints"),
        });
    }
    let mut m = Vec::with_capacity(k);
    let mut rhs = Vec::with_capacity(k);
    for i in rows.elements() {
        let (c, r) = sys.row_coefficients(i);
        m.push(c);
        rhs.push(r);
    }
    for j in zeros.elements() {
        let mut row = vec![Rational::new(); k];
        row[j - 1] = Rational::from(1);
        m.push(row);
        rhs.push(Rational::new());
    }
    Ok(solve_exact(&m, &rhs).map(RationalPoint))
}

/// For every `I`, solve `row_i = 0` (`i` in `I`) and `x_j = 0` (`j` not in
/// `I`) exactly and keep feasible solutions. Exactly `2^k` vertices must
/// result.
pub fn vertices_brute_force(sys: &HalfSpaceSystem) -> Result<VertexSet> {
    let k = sys.k();
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let found: Vec<Vertex> = Subset::all(k)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|s| -> Result<Option<Vertex>> {
            let zeros = Subset::from_bits(full & !s.bits());
            let Some(point) = solve_active_set(sys, s, zeros)? else {
                return Ok(None);
            };
            Ok(sys.contains(&point)?.is_member().then_some(Vertex { subset: s, point }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let set = VertexSet::new(k, found);
    let expected = 1usize << k;
    if set.len() != expected || set.distinct_points() != expected {
        return Err(Error::VertexCount {
            found: set.distinct_points(),
            expected,
        });
    }
    Ok(set)
}
