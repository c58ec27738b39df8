//! Dense integer polynomials.

use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer polynomial stored constant term first; `coeffs[i]` multiplies `x^i`.
///
/// The coefficient vector never ends in a zero, and the zero polynomial is
/// not representable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<Integer>,
}

/// Parameters of the trinomial `x^d - h x^j + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TrinomialSpec {
    pub d: u32,
    pub j: u32,
    pub h: i64,
}

impl TrinomialSpec {
    pub fn new(d: u32, j: u32, h: i64) -> Result<Self> {
        if j == 0 || d <= j {
            return Err(Error::InvalidTrinomial { d, j });
        }
        Ok(TrinomialSpec { d, j, h })
    }

    pub fn polynomial(&self) -> IntPolynomial {
        IntPolynomial::trinomial(*self).expect("validated spec")
    }
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<Integer>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(IntPolynomial { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    /// `x^d - h x^j + 1`.
    pub fn trinomial(spec: TrinomialSpec) -> Result<Self> {
        let TrinomialSpec { d, j, h } = spec;
        if j == 0 || d <= j {
            return Err(Error::InvalidTrinomial { d, j });
        }
        let mut coeffs = vec![Integer::new(); d as usize + 1];
        coeffs[0] = Integer::from(1);
        coeffs[j as usize] = Integer::from(-h);
        coeffs[d as usize] = Integer::from(1);
        Self::new(coeffs)
    }

    /// `x^(3k) - x^k - 1`, the degree-`3k` family whose conjugates attain
    /// equality at the vertex `(0, …, 0, 2)`.
    pub fn tightness_family(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidTrinomial { d: 0, j: 0 });
        }
        let mut coeffs = vec![Integer::new(); 3 * k as usize + 1];
        coeffs[0] = Integer::from(-1);
        coeffs[k as usize] = Integer::from(-1);
        coeffs[3 * k as usize] = Integer::from(1);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &Integer {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn constant(&self) -> &Integer {
        &self.coeffs[0]
    }

    pub fn is_monic(&self) -> bool {
        *self.leading() == 1
    }

    /// Maximum absolute value over all coefficients.
    pub fn height(&self) -> Integer {
        self.coeffs
            .iter()
            .map(|c| Integer::from(c.abs_ref()))
            .max()
            .expect("nonzero polynomial")
    }

    pub fn require_monic(&self) -> Result<()> {
        if self.is_monic() {
            Ok(())
        } else {
            Err(Error::NotMonic(self.to_string()))
        }
    }

    /// Coefficient reversal `x^d p(1/x)`.
    pub fn reciprocal(&self) -> Result<Self> {
        if *self.constant() == 0 {
            return Err(Error::ZeroConstantTerm);
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::new(coeffs)
    }

    pub fn derivative(&self) -> Option<Self> {
        let coeffs: Vec<Integer> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| Integer::from(c * i as u32))
            .collect();
        Self::new(coeffs).ok()
    }

    pub fn eval(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Exact quotient `self / divisor` over the integers, or `None` when the
    /// division leaves a remainder or needs non-integer coefficients.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Option<IntPolynomial> {
        let n = self.degree();
        let m = divisor.degree();
        if m > n {
            return None;
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Integer::new(); n - m + 1];
        for shift in (0..=n - m).rev() {
            let top = &rem[shift + m];
            if *top == 0 {
                continue;
            }
            if !top.is_divisible(lead) {
                return None;
            }
            let q = Integer::from(top / lead);
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= Integer::from(&q * c);
            }
            quot[shift] = q;
        }
        if rem.iter().any(|c| *c != 0) {
            return None;
        }
        IntPolynomial::new(quot).ok()
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut out = vec![Integer::new(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Integer::from(a * b);
            }
        }
        IntPolynomial::new(out).expect("product of nonzero polynomials")
    }

    /// Primitive integer multiple of `gcd(self, other)` over the rationals,
    /// normalised to a positive leading coefficient.
    pub fn gcd(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut a: Vec<Rational> = self.coeffs.iter().map(Rational::from).collect();
        let mut b: Vec<Rational> = other.coeffs.iter().map(Rational::from).collect();
        while !b.is_empty() {
            let r = rational_rem(&a, &b);
            a = b;
            b = r;
        }
        primitive_part(&a)
    }

    /// `gcd(p, p')`; a constant result means `p` is squarefree.
    pub fn squarefree_gcd(&self) -> IntPolynomial {
        match self.derivative() {
            Some(dp) => self.gcd(&dp),
            None => self.clone(),
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.squarefree_gcd().degree() == 0
    }

    /// Monic with constant term `±1`.
    pub fn is_unit(&self) -> Result<bool> {
        self.require_monic()?;
        Ok(*self.constant() == 1 || *self.constant() == -1)
    }

    /// Whether `p` divides `x^N - 1` for some `N <= 2 d^2`.
    ///
    /// Any `N` with `phi(N) = d` satisfies `N <= 2 d^2`, so this bound covers
    /// every cyclotomic factor of degree `d`.
    pub fn is_root_of_unity(&self) -> Result<bool> {
        self.require_monic()?;
        let d = self.degree();
        if d == 0 {
            return Ok(false);
        }
        if !self.is_unit()? {
            return Ok(false);
        }
        let bound = 2 * d * d;
        // r = x^N mod p, kept with exactly d coefficients.
        let mut r = vec![Integer::new(); d];
        r[0] = Integer::from(1);
        for _ in 1..=bound {
            let top = r[d - 1].clone();
            for i in (1..d).rev() {
                r[i] = r[i - 1].clone();
            }
            r[0] = Integer::new();
            if top != 0 {
                for (i, c) in self.coeffs[..d].iter().enumerate() {
                    r[i] -= Integer::from(&top * c);
                }
            }
            if r[0] == 1 && r[1..].iter().all(|c| *c == 0) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Linear factor `x - root`.
    pub fn linear(root: &Integer) -> IntPolynomial {
        IntPolynomial::new(vec![Integer::from(-root), Integer::from(1)]).expect("nonzero")
    }

    /// Comma-separated coefficient list, constant term first.
    pub fn to_coefficient_list(&self) -> String {
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn rational_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut rem = a.to_vec();
    let m = b.len() - 1;
    let lead = &b[m];
    while rem.len() > m {
        let top = rem.last().expect("nonempty");
        if *top != 0 {
            let q = Rational::from(top / lead);
            let shift = rem.len() - 1 - m;
            for (i, c) in b.iter().enumerate() {
                rem[shift + i] -= Rational::from(&q * c);
            }
        }
        rem.pop();
        while rem.last().is_some_and(|c| *c == 0) {
            rem.pop();
        }
    }
    rem
}

fn primitive_part(coeffs: &[Rational]) -> IntPolynomial {
    let mut denom_lcm = Integer::from(1);
    for c in coeffs {
        denom_lcm.lcm_mut(c.denom());
    }
    let mut ints: Vec<Integer> = coeffs
        .iter()
        .map(|c| c.numer() * Integer::from(&denom_lcm / c.denom()))
        .collect();
    let mut g = Integer::new();
    for c in &ints {
        g.gcd_mut(c);
    }
    if ints.last().is_some_and(|c| *c < 0) {
        g = -g;
    }
    for c in &mut ints {
        *c /= &g;
    }
    IntPolynomial::new(ints).expect("gcd of nonzero polynomials is nonzero")
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let negative = *c < 0;
            let abs = Integer::from(c.abs_ref());
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            if i == 0 || abs != 1 {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    /// Accepts `"1,0,-10,0,0,1"` (constant term first) or `"x^5 - 10x^2 + 1"`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        if !compact.contains(['x', 'X']) {
            let coeffs = compact
                .split(',')
                .map(|t| t.parse::<Integer>().map_err(|_| err("bad coefficient")))
                .collect::<Result<Vec<_>>>()?;
            return IntPolynomial::new(coeffs);
        }
        let compact = compact.replace('X', "x").replace("**", "^");
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('^') {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut coeffs: Vec<Integer> = Vec::new();
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, term.strip_prefix('+').unwrap_or(term)),
            };
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coef, exp) = match body.find('x') {
                None => (
                    body.parse::<Integer>().map_err(|_| err("bad constant term"))?,
                    0usize,
                ),
                Some(pos) => {
                    let head = body[..pos].trim_end_matches('*');
                    let coef = if head.is_empty() {
                        Integer::from(1)
                    } else {
                        head.parse::<Integer>().map_err(|_| err("bad coefficient"))?
                    };
                    let tail = &body[pos + 1..];
                    let exp = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .ok_or_else(|| err("expected '^' after x"))?
                            .parse::<usize>()
                            .map_err(|_| err("bad exponent"))?
                    };
                    (coef, exp)
                }
            };
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, Integer::new());
            }
            coeffs[exp] += coef * sign;
        }
        IntPolynomial::new(coeffs)
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn trinomial_construction() {
        let f = IntPolynomial::trinomial(TrinomialSpec::new(5, 2, 10).unwrap()).unwrap();
        assert_eq!(f, p("x^5 - 10x^2 + 1"));
        assert_eq!(f.height(), 10);
        assert_eq!(f.degree(), 5);

        let g = IntPolynomial::trinomial(TrinomialSpec { d: 2, j: 1, h: 0 }).unwrap();
        assert_eq!(g, p("x^2 + 1"));
        assert_eq!(g.height(), 1);

        let r = IntPolynomial::trinomial(TrinomialSpec { d: 4, j: 3, h: 100 }).unwrap();
        assert_eq!(r.to_coefficient_list(), "1,0,0,-100,1");
        assert_eq!(r.height(), 100);
    }

    #[test]
    fn trinomial_rejects_bad_indices() {
        assert!(TrinomialSpec::new(3, 3, 5).is_err());
        assert!(TrinomialSpec::new(3, 0, 5).is_err());
        assert!(IntPolynomial::trinomial(TrinomialSpec { d: 2, j: 4, h: 1 }).is_err());
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(p("x^5 - 10x^2 + 1").reciprocal().unwrap(), p("x^5 - 10x^3 + 1"));
        assert_eq!(p("x^2 + 1").reciprocal().unwrap(), p("x^2 + 1"));
        assert_eq!(p("2x^3 + 3x + 5").reciprocal().unwrap(), p("5x^3 + 3x^2 + 2"));
        assert_eq!(p("x^3 + x").reciprocal(), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn unit_predicate() {
        assert!(p("x^3 - x - 1").is_unit().unwrap());
        assert!(p("x^5 - 10x^2 + 1").is_unit().unwrap());
        assert!(!p("x^2 - 2").is_unit().unwrap());
        assert!(matches!(p("2x^2 - 1").is_unit(), Err(Error::NotMonic(_))));
    }

    #[test]
    fn root_of_unity_predicate() {
        assert!(p("x^2 + x + 1").is_root_of_unity().unwrap());
        assert!(p("x - 1").is_root_of_unity().unwrap());
        assert!(p("x + 1").is_root_of_unity().unwrap());
        // Phi_15, degree 8.
        assert!(p("x^8 - x^7 + x^5 - x^4 + x^3 - x + 1").is_root_of_unity().unwrap());
        assert!(!p("x^3 - x - 1").is_root_of_unity().unwrap());
        assert!(!p("x^5 - 10x^2 + 1").is_root_of_unity().unwrap());
        assert!(!p("x^2 - 2").is_root_of_unity().unwrap());
    }

    #[test]
    fn root_of_unity_matches_brute_force_division() {
        // Independent route: try dividing x^N - 1 for every N <= 2d^2.
        for text in ["x^3 - x - 1", "x^2 - x + 1", "x^4 + 1", "x^4 - x^2 + 1", "x^2 + 3x + 1"] {
            let f = p(text);
            let d = f.degree();
            let brute = (1..=2 * d * d).any(|n| {
                let mut c = vec![Integer::new(); n + 1];
                c[0] = Integer::from(-1);
                c[n] = Integer::from(1);
                IntPolynomial::new(c).unwrap().div_exact(&f).is_some()
            });
            assert_eq!(f.is_root_of_unity().unwrap(), brute, "{text}");
        }
    }

    #[test]
    fn parse_both_formats() {
        let a: IntPolynomial = "1,0,-10,0,0,1".parse().unwrap();
        let b: IntPolynomial = "x^5 - 10x^2 + 1".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(b.to_string(), "x^5 - 10x^2 + 1");
        assert_eq!(p("-x^3+2*x-7").to_coefficient_list(), "-7,2,0,-1");
        assert_eq!(p("x").to_coefficient_list(), "0,1");
        assert!("x^".parse::<IntPolynomial>().is_err());
        assert!("0,0".parse::<IntPolynomial>().is_err());
        assert!("1,a".parse::<IntPolynomial>().is_err());
    }

    #[test]
    fn exact_division_and_gcd() {
        let f = p("x^2 - 1");
        assert_eq!(f.div_exact(&p("x - 1")).unwrap(), p("x + 1"));
        assert!(f.div_exact(&p("x - 2")).is_none());
        assert!(p("x^2 + 1").div_exact(&p("2x + 1")).is_none());
        let sq = p("x^3 - x^2 - x + 1"); // (x-1)^2 (x+1)
        assert_eq!(sq.squarefree_gcd(), p("x - 1"));
        assert!(!sq.is_squarefree());
        assert!(p("x^5 - 10x^2 + 1").is_squarefree());
        assert_eq!(p("2x^2 - 2").gcd(&p("4x - 4")), p("x - 1"));
    }

    #[test]
    fn derivative_and_eval() {
        let f = p("x^3 - x - 1");
        assert_eq!(f.derivative().unwrap(), p("3x^2 - 1"));
        assert_eq!(f.eval(&Integer::from(2)), 5);
        assert!(p("7").derivative().is_none());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly_strategy() -> impl Strategy<Value = IntPolynomial> {
            (prop::collection::vec(-50i64..50, 1..8), 1i64..20, 1i64..20).prop_map(
                |(mut c, lead, constant)| {
                    c.insert(0, constant);
                    c.push(lead);
                    IntPolynomial::from_i64(&c).unwrap()
                },
            )
        }

        proptest! {
            #[test]
            fn reciprocal_is_involution(f in poly_strategy()) {
                let r = f.reciprocal().unwrap();
                prop_assert_eq!(r.reciprocal().unwrap(), f.clone());
                prop_assert_eq!(r.height(), f.height());
            }

            #[test]
            fn trinomial_reciprocal_swaps_j(d in 2u32..14, j_frac in 0.0f64..1.0, h in -60i64..60) {
                let j = 1 + ((d - 1) as f64 * j_frac) as u32;
                let j = j.min(d - 1);
                let f = TrinomialSpec::new(d, j, h).unwrap().polynomial();
                let g = TrinomialSpec::new(d, d - j, h).unwrap().polynomial();
                prop_assert_eq!(f.reciprocal().unwrap(), g);
                prop_assert_eq!(f.height(), Integer::from(h.abs().max(1)));
            }

            #[test]
            fn display_parse_round_trip(f in poly_strategy()) {
                let back: IntPolynomial = f.to_string().parse().unwrap();
                prop_assert_eq!(back, f.clone());
                let back: IntPolynomial = f.to_coefficient_list().parse().unwrap();
                prop_assert_eq!(back, f);
            }
        }
    }
}
