//! Polytopes `E_{k,d}` of conjugate-modulus products of algebraic integers.
//!
//! The crate has three layers:
//!
//! * exact integer polynomials and trinomials ([`poly`], [`irreducible`]);
//! * certified complex roots and the descending modulus profile
//!   ([`roots`], [`moduli`]), built on MPFR interval arithmetic ([`interval`]);
//! * exact-rational polytope enumeration ([`polytope`]), certified evaluation
//!   of the conjugate-product inequality ([`verifier`]), exponent bookkeeping
//!   ([`bounds`]) and corpus scans ([`scan`]).

pub mod bounds;
pub mod error;
pub mod interval;
pub mod irreducible;
pub mod moduli;
pub mod poly;
pub mod polytope;
pub mod roots;
pub mod scan;
pub mod verifier;

pub use error::{Error, Result};
pub use interval::{ComplexInterval, Interval};
pub use irreducible::{test_irreducible, IrreducibilityStatus, IrreducibilityVerdict};
pub use moduli::{sorted_moduli, AnnulusPrediction, ModulusProfile};
pub use poly::{IntPolynomial, TrinomialSpec};
pub use polytope::{HalfSpaceSystem, RationalPoint, Subset, VertexSet};
pub use roots::{solve_roots, RootEnclosure, RootSet};
pub use verifier::{Conjugates, MarginReport, Verdict};

/// Default ceiling for automatic precision escalation, in bits.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

/// Precision at which corpus analyses start before escalating.
pub const DEFAULT_START_BITS: u32 = 128;

/// Next rung of the precision ladder `53 → 128 → 256 → … → cap`, or `None`
/// once `bits` has reached `cap`.
pub fn next_precision(bits: u32, cap: u32) -> Option<u32> {
    if bits >= cap {
        return None;
    }
    let next = match bits {
        0..=52 => 53,
        53..=127 => 128,
        b if b.is_power_of_two() => b * 2,
        b => b.next_power_of_two(),
    };
    Some(next.min(cap))
}

#[cfg(test)]
mod tests {
    use super::next_precision;

    #[test]
    fn ladder_doubles_up_to_cap() {
        let mut bits = 53;
        let mut seen = vec![bits];
        while let Some(b) = next_precision(bits, 4096) {
            bits = b;
            seen.push(b);
        }
        assert_eq!(seen, vec![53, 128, 256, 512, 1024, 2048, 4096]);
        assert_eq!(next_precision(200, 300), Some(256));
        assert_eq!(next_precision(256, 300), Some(300));
        assert_eq!(next_precision(300, 300), None);
        assert_eq!(next_precision(10, 4096), Some(53));
    }
}
