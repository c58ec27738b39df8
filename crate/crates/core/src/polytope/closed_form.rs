use rug::Rational;

use super::{HalfSpaceSystem, RationalPoint, Subset, Vertex, VertexSet};
use crate::error::{Error, Result};

/// Vertex of `E_{k,d}` labelled by `J = {j_1 < … < j_n}`: zero off `J`,
/// `v_(j_l) = (j_(l+1) - j_l)/j_1` and `v_(j_n) = (d - j_n)/j_1`.
pub fn closed_form_vertex(k: usize, d: usize, subset: Subset) -> Result<RationalPoint> {
    if k == 0 || d <= k {
        return Err(Error::InvalidDimension { k, d });
    }
    if !subset.fits(k) {
        return Err(Error::InvalidSubset {
            subset: subset.to_string(),
            reason: format!("not a subset of 1..={k}"),
        });
    }
    let mut v = vec![Rational::new(); k];
    let js = subset.elements();
    if let Some(&j1) = js.first() {
        for (l, &j) in js.iter().enumerate() {
            let next = js.get(l + 1).copied().unwrap_or(d);
            v[j - 1] = Rational::from(((next - j) as u64, j1 as u64));
        }
    }
    Ok(RationalPoint(v))
}

pub fn vertices_closed_form(k: usize, d: usize) -> Result<VertexSet> {
    if k == 0 || d <= k || k > super::MAX_DIMENSION {
        return Err(Error::InvalidDimension { k, d });
    }
    let vertices = Subset::all(k)
        .map(|s| {
            Ok(Vertex {
                subset: s,
                point: closed_form_vertex(k, d, s)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VertexSet::new(k, vertices))
}

/// The closed-form vertex for `J` satisfies row `j` with equality for every
/// `j` in `J` and vanishes off `J`.
pub fn vertex_identity_check(k: usize, d: usize, subset: Subset) -> Result<bool> {
    let sys = HalfSpaceSystem::ekd(k, d)?;
    let v = closed_form_vertex(k, d, subset)?;
    Ok((1..=k).all(|j| {
        if subset.contains(j) {
            sys.row_value(j, v.coords()) == 0
        } else {
            v.coords()[j - 1] == 0
        }
    }))
}
