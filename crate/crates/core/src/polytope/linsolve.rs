//! Exact solution of square rational linear systems by fraction-free
//! (Bareiss) elimination.

use rug::{Integer, Rational};

/// Unique solution of `m x = rhs`, or `None` when `m` is singular.
pub fn solve_exact(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    assert_eq!(rhs.len(), n);
    // Clear denominators row by row; the solution set is unchanged.
    let mut rows: Vec<Vec<Integer>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            assert_eq!(row.len(), n);
            let mut l = Integer::from(1);
            for c in row.iter().chain(std::iter::once(r)) {
                l.lcm_mut(c.denom());
            }
            row.iter()
                .chain(std::iter::once(r))
                .map(|c| c.numer() * Integer::from(&l / c.denom()))
                .collect()
        })
        .collect();

    let mut prev = Integer::from(1);
    for k in 0..n {
        let pivot = (k..n).find(|&r| rows[r][k] != 0)?;
        rows.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..=n {
                let t = Integer::from(&rows[i][j] * &rows[k][k]) - Integer::from(&rows[i][k] * &rows[k][j]);
                rows[i][j] = t.div_exact(&prev);
            }
            rows[i][k] = Integer::new();
        }
        prev = rows[k][k].clone();
    }

    let mut x = vec![Rational::new(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from(&rows[i][n]);
        for j in i + 1..n {
            acc -= Rational::from(&rows[i][j] * &x[j]);
        }
        x[i] = acc / &rows[i][i];
    }
    Some(x)
}

/// Determinant by the same elimination.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::from(1);
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| a[r][k] != 0) else {
            return Rational::new();
        };
        if p != k {
            a.swap(k, p);
            det = -det;
        }
        det *= &a[k][k];
        for i in k + 1..n {
            let f = Rational::from(&a[i][k] / &a[k][k]);
            let (top, rest) = a.split_at_mut(i);
            for (x, y) in rest[0][k..].iter_mut().zip(&top[k][k..]) {
                *x -= Rational::from(&f * y);
            }
        }
    }
    det
}
