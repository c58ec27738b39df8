//! Exact-rational half-space systems
//! `a_i + a_i (x_1 + … + x_(i-1)) - b_i (x_i + … + x_k) >= 0`, `x_j >= 0`,
//! and three independent ways of listing their `2^k` vertices.

mod brute_force;
mod closed_form;
mod elimination;
pub mod linsolve;

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use rug::Rational;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};

pub use brute_force::{solve_active_set, vertices_brute_force};
pub use closed_form::{closed_form_vertex, vertex_identity_check, vertices_closed_form};
pub use elimination::{eliminate_last, vertices_by_elimination};

/// Largest dimension whose subsets fit the bitmask.
pub const MAX_DIMENSION: usize = 63;

/// Subset of `{1, …, k}`; element `j` is bit `j - 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    /// Subset from 1-based elements; rejects 0 and anything above `k`.
    pub fn from_elements(elements: &[usize], k: usize) -> Result<Self> {
        let mut bits = 0u64;
        for &j in elements {
            if j == 0 || j > k || j > MAX_DIMENSION {
                return Err(Error::InvalidSubset {
                    subset: format!("{elements:?}"),
                    reason: format!("element {j} outside 1..={k}"),
                });
            }
            bits |= 1 << (j - 1);
        }
        Ok(Subset(bits))
    }

    pub fn singleton(j: usize) -> Self {
        Subset(1 << (j - 1))
    }

    /// All subsets of `{1, …, k}` in binary-counter order.
    pub fn all(k: usize) -> impl Iterator<Item = Subset> {
        assert!(k <= MAX_DIMENSION);
        (0..1u64 << k).map(Subset)
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn contains(&self, j: usize) -> bool {
        (1..=64).contains(&j) && self.0 >> (j - 1) & 1 == 1
    }

    pub fn elements(&self) -> Vec<usize> {
        (1..=64).filter(|&j| self.contains(j)).collect()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn largest(&self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    pub fn smallest(&self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn intersects(&self, other: &Subset) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(&self, other: &Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn with(&self, j: usize) -> Subset {
        Subset(self.0 | 1 << (j - 1))
    }

    pub fn fits(&self, k: usize) -> bool {
        k >= 64 || self.0 >> k == 0
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().iter().map(|j| j.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(s)
    }
}

/// Point with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(pub Vec<Rational>);

impl RationalPoint {
    pub fn zeros(k: usize) -> Self {
        RationalPoint(vec![Rational::new(); k])
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        RationalPoint(coords.iter().map(|&c| Rational::from(c)).collect())
    }

    /// Parse comma-separated rationals such as `0,1/2,7/2`.
    pub fn parse(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        if trimmed.trim().is_empty() {
            return Ok(RationalPoint(Vec::new()));
        }
        trimmed
            .split(',')
            .map(|t| parse_rational(t.trim()))
            .collect::<Result<Vec<_>>>()
            .map(RationalPoint)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|c| c.to_string()).collect()
    }

    /// Least common denominator of the coordinates.
    pub fn common_denominator(&self) -> rug::Integer {
        let mut l = rug::Integer::from(1);
        for c in &self.0 {
            l.lcm_mut(c.denom());
        }
        l
    }

    pub fn midpoint(&self, other: &RationalPoint) -> RationalPoint {
        RationalPoint(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| Rational::from(a + b) / 2u32)
                .collect(),
        )
    }
}

/// Parse `p`, `p/q` or a finite decimal such as `1.999` into an exact rational.
pub fn parse_rational(t: &str) -> Result<Rational> {
    let bad = |reason: &str| Error::Parse {
        input: t.to_string(),
        reason: reason.to_string(),
    };
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad("malformed decimal"));
        }
        let negative = int.trim_start().starts_with('-');
        let whole: rug::Integer = if int.is_empty() || int == "-" || int == "+" {
            rug::Integer::new()
        } else {
            int.parse().map_err(|_| bad("malformed decimal"))?
        };
        let digits: rug::Integer = frac.parse().map_err(|_| bad("malformed decimal"))?;
        let scale = rug::Integer::from(rug::Integer::u_pow_u(10, frac.len() as u32));
        let mut r = Rational::from((digits, scale));
        if negative {
            r = -r;
        }
        return Ok(r + whole);
    }
    t.parse::<Rational>().map_err(|_| bad("expected an integer, p/q or a decimal"))
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

/// A constraint of the system, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Constraint {
    Row(usize),
    NonNegative(usize),
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Row(i) => write!(f, "row {i}"),
            Constraint::NonNegative(j) => write!(f, "x_{j} >= 0"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    /// Inside; `row_slacks[i - 1]` is the value of row `i`.
    Member { row_slacks: Vec<Rational> },
    /// The first violated constraint (rows before nonnegativity) and its
    /// negative slack.
    Violates { constraint: Constraint, slack: Rational },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Membership::Member { row_slacks } => json!({
                "verdict": "MEMBER",
                "rowSlacks": row_slacks.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            }),
            Membership::Violates { constraint, slack } => json!({
                "verdict": "VIOLATES",
                "constraint": constraint.to_string(),
                "slack": slack.to_string(),
            }),
        }
    }
}

/// Half-space system with positive data `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpaceSystem {
    a: Vec<Rational>,
    b: Vec<Rational>,
}

impl HalfSpaceSystem {
    /// Requires positive entries and `a_i b_j - a_j b_i > 0` for `i < j`.
    pub fn new(a: Vec<Rational>, b: Vec<Rational>) -> Result<Self> {
        let sys = Self::without_skew_check(a, b)?;
        if let Some((i, j)) = sys.skew_violation() {
            return Err(Error::SkewViolation { i, j });
        }
        Ok(sys)
    }

    /// Requires positive entries only.
    pub fn without_skew_check(a: Vec<Rational>, b: Vec<Rational>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::MismatchedRows { a: a.len(), b: b.len() });
        }
        if a.is_empty() || a.len() > MAX_DIMENSION {
            return Err(Error::InvalidDimension { k: a.len(), d: 0 });
        }
        for (i, (x, y)) in a.iter().zip(&b).enumerate() {
            if *x <= 0 || *y <= 0 {
                return Err(Error::NonPositiveCoefficient { row: i + 1 });
            }
        }
        Ok(HalfSpaceSystem { a, b })
    }

    /// The system for `E_{k,d}`: `a_j = (d - j)/j`, `b_j = 1`.
    pub fn ekd(k: usize, d: usize) -> Result<Self> {
        if k == 0 || d <= k || k > MAX_DIMENSION {
            return Err(Error::InvalidDimension { k, d });
        }
        let a = (1..=k).map(|j| Rational::from(((d - j) as u64, j as u64))).collect();
        let b = vec![Rational::from(1); k];
        Self::new(a, b)
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    /// First pair `(i, j)`, `i < j`, 1-based, with `a_i b_j - a_j b_i <= 0`.
    pub fn skew_violation(&self) -> Option<(usize, usize)> {
        let k = self.k();
        for i in 0..k {
            for j in i + 1..k {
                if self.skew(i + 1, j + 1) <= 0 {
                    return Some((i + 1, j + 1));
                }
            }
        }
        None
    }

    /// `a_i b_j - a_j b_i`, 1-based.
    pub fn skew(&self, i: usize, j: usize) -> Rational {
        Rational::from(&self.a[i - 1] * &self.b[j - 1]) - Rational::from(&self.a[j - 1] * &self.b[i - 1])
    }

    /// Value of row `i` (1-based) at `x`.
    pub fn row_value(&self, i: usize, x: &[Rational]) -> Rational {
        let (a, b) = (&self.a[i - 1], &self.b[i - 1]);
        let before: Rational = x[..i - 1].iter().sum();
        let after: Rational = x[i - 1..].iter().sum();
        a * (1 + before) - b * after
    }

    /// Coefficients `(c, r)` with row `i` equal to `c . x - r`.
    pub fn row_coefficients(&self, i: usize) -> (Vec<Rational>, Rational) {
        let k = self.k();
        let coeffs = (1..=k)
            .map(|m| {
                if m < i {
                    self.a[i - 1].clone()
                } else {
                    -self.b[i - 1].clone()
                }
            })
            .collect();
        (coeffs, -self.a[i - 1].clone())
    }

    pub fn contains(&self, x: &RationalPoint) -> Result<Membership> {
        if x.dim() != self.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                got: x.dim(),
            });
        }
        let slacks: Vec<Rational> = (1..=self.k()).map(|i| self.row_value(i, x.coords())).collect();
        if let Some(i) = slacks.iter().position(|s| *s < 0) {
            return Ok(Membership::Violates {
                constraint: Constraint::Row(i + 1),
                slack: slacks[i].clone(),
            });
        }
        if let Some(j) = x.coords().iter().position(|c| *c < 0) {
            return Ok(Membership::Violates {
                constraint: Constraint::NonNegative(j + 1),
                slack: x.coords()[j].clone(),
            });
        }
        Ok(Membership::Member { row_slacks: slacks })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "k": self.k(),
            "a": self.a.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "b": self.b.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub subset: Subset,
    pub point: RationalPoint,
}

/// Vertices labelled by subsets, in binary-counter order of the labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    k: usize,
    vertices: Vec<Vertex>,
}

impl VertexSet {
    pub fn new(k: usize, mut vertices: Vec<Vertex>) -> Self {
        vertices.sort_by_key(|v| v.subset);
        VertexSet { k, vertices }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn get(&self, subset: Subset) -> Option<&RationalPoint> {
        self.vertices.iter().find(|v| v.subset == subset).map(|v| &v.point)
    }

    pub fn points(&self) -> Vec<&RationalPoint> {
        self.vertices.iter().map(|v| &v.point).collect()
    }

    /// Number of distinct points.
    pub fn distinct_points(&self) -> usize {
        let mut pts: Vec<&RationalPoint> = self.points();
        pts.sort();
        pts.dedup();
        pts.len()
    }

    /// First label at which two sets disagree, with both points.
    pub fn first_difference(&self, other: &VertexSet) -> Option<String> {
        let mine: BTreeMap<Subset, &RationalPoint> = self.vertices.iter().map(|v| (v.subset, &v.point)).collect();
        let theirs: BTreeMap<Subset, &RationalPoint> = other.vertices.iter().map(|v| (v.subset, &v.point)).collect();
        for s in mine.keys().chain(theirs.keys()) {
            match (mine.get(s), theirs.get(s)) {
                (Some(a), Some(b)) if a == b => {}
                (a, b) => {
                    let show = |p: Option<&&RationalPoint>| p.map_or("missing".to_string(), |p| p.to_string());
                    return Some(format!("J={s}: {} vs {}", show(a), show(b)));
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.vertices
                .iter()
                .map(|v| json!({"J": v.subset, "v": v.point.to_strings()}))
                .collect(),
        )
    }

    /// One vertex per row; header `J,v1,…,vk`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["J".to_string()];
        header.extend((1..=self.k).map(|i| format!("v{i}")));
        w.write_record(&header).map_err(csv_err)?;
        for v in &self.vertices {
            let mut row = vec![v.subset.to_string()];
            row.extend(v.point.to_strings());
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8")
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}
