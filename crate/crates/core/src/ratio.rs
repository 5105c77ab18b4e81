//! Exact nonnegative rationals for cut ratios.
//!
//! Numerators and denominators stay below 2^63, so a cross product always
//! fits in a `u128` and comparisons never round.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

/// Largest admissible numerator or denominator.
pub const RATIO_LIMIT: u64 = 1 << 63;

/// A nonnegative rational `num / den` with `den > 0`.
///
/// Equality and ordering compare values, so `1/2 == 2/4`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    /// Panics if `den == 0` or either part reaches 2^63.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "ratio denominator must be positive");
        assert!(
            num < RATIO_LIMIT && den < RATIO_LIMIT,
            "ratio parts must stay below 2^63"
        );
        Ratio { num, den }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Lowest-terms representative.
    pub fn reduced(&self) -> Ratio {
        if self.num == 0 {
            return Ratio::ZERO;
        }
        let g = self.num.gcd(&self.den);
        Ratio {
            num: self.num / g,
            den: self.den / g,
        }
    }

    /// `self < 1/k`, decided as `num * k < den`.
    pub fn below_reciprocal(&self, k: u64) -> bool {
        (self.num as u128) * (k as u128) < self.den as u128
    }

    /// `self >= 1/k`.
    pub fn at_least_reciprocal(&self, k: u64) -> bool {
        !self.below_reciprocal(k)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Decimal rendering with 9 significant digits.
    pub fn decimal(&self) -> String {
        format_significant(self.to_f64(), 9)
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        write!(f, "{}/{}", r.num, r.den)
    }
}

/// Formats `value` with `digits` significant digits in positional notation.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return if value == 0.0 {
            "0".to_string()
        } else {
            value.to_string()
        };
    }
    let magnitude = value.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let text = format!("{value:.decimals$}");
    // rounding may carry into a new leading digit (0.9999999999 -> 1.000000000)
    let rounded: f64 = text.parse().unwrap_or(value);
    let new_magnitude = rounded.abs().log10().floor() as i64;
    if new_magnitude != magnitude {
        let decimals = (digits as i64 - 1 - new_magnitude).max(0) as usize;
        format!("{rounded:.decimals$}")
    } else {
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn equality_is_by_value() {
        assert_eq!(Ratio::new(1, 2), Ratio::new(2, 4));
        assert!(Ratio::new(1, 3) < Ratio::new(1, 2));
        assert_eq!(Ratio::new(0, 5), Ratio::ZERO);
    }

    #[test]
    fn reciprocal_comparison() {
        let third = Ratio::new(1, 3);
        assert!(third.below_reciprocal(2));
        assert!(!third.below_reciprocal(3));
        assert!(third.at_least_reciprocal(3));
        assert!(Ratio::ZERO.below_reciprocal(u32::MAX as u64));
    }

    #[test]
    fn display_reduces() {
        assert_eq!(Ratio::new(2, 6).to_string(), "1/3");
        assert_eq!(Ratio::new(0, 8).to_string(), "0/1");
        assert_eq!(Ratio::new(5, 1).decimal(), "5.00000000");
        assert_eq!(Ratio::new(1, 3).decimal(), "0.333333333");
        assert_eq!(Ratio::new(2, 3).decimal(), "0.666666667");
        assert_eq!(Ratio::ZERO.decimal(), "0");
    }

    #[test]
    fn wide_cross_products_do_not_overflow() {
        let big = Ratio::new(RATIO_LIMIT - 1, RATIO_LIMIT - 2);
        let other = Ratio::new(RATIO_LIMIT - 2, RATIO_LIMIT - 3);
        assert!(big < other);
    }

    proptest! {
        #[test]
        fn ordering_matches_rational_value(a in 0u64..1000, b in 1u64..1000, c in 0u64..1000, d in 1u64..1000) {
            let lhs = Ratio::new(a, b);
            let rhs = Ratio::new(c, d);
            prop_assert_eq!(lhs.cmp(&rhs), (a * d).cmp(&(c * b)));
            prop_assert_eq!(lhs.reduced(), lhs);
        }
    }
}
