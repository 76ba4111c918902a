//! Sign conventions for semi-entropies.
//!
//! `sgn⁺(s) = 1` for `s > 0` and `0` otherwise; `sgn⁻(s) = −1` for `s < 0`
//! and `0` otherwise, so that `sgn = sgn⁺ + sgn⁻` vanishes at the origin.
//! The positive/negative parts satisfy `s⁺ = max(s, 0)`, `s⁻ = max(−s, 0)`,
//! and the exact identities `(−s)⁻ = s⁺`, `(−s)⁺ = s⁻`.

/// `sgn⁺`: 1 on positives, 0 elsewhere.
#[inline]
pub fn sgn_plus(s: f64) -> f64 {
    if s > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// `sgn⁻`: −1 on negatives, 0 elsewhere.
#[inline]
pub fn sgn_minus(s: f64) -> f64 {
    if s < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Two-sided sign with `sgn(0) = 0`.
#[inline]
pub fn sgn(s: f64) -> f64 {
    sgn_plus(s) + sgn_minus(s)
}

/// Positive part `s⁺ = max(s, 0)`.
#[inline]
pub fn pos_part(s: f64) -> f64 {
    if s > 0.0 {
        s
    } else {
        0.0
    }
}

/// Negative part `s⁻ = max(−s, 0)` (nonnegative by convention).
#[inline]
pub fn neg_part(s: f64) -> f64 {
    if s < 0.0 {
        -s
    } else {
        0.0
    }
}

/// Selector for the two semi-entropy branches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Branch sign function `sgn^±`.
    #[inline]
    pub fn sgn(self, s: f64) -> f64 {
        match self {
            Sign::Plus => sgn_plus(s),
            Sign::Minus => sgn_minus(s),
        }
    }

    /// Branch part function `s ↦ s^±`.
    #[inline]
    pub fn part(self, s: f64) -> f64 {
        match self {
            Sign::Plus => pos_part(s),
            Sign::Minus => neg_part(s),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sign_values_at_zero() {
        assert_eq!(sgn_plus(0.0), 0.0);
        assert_eq!(sgn_minus(0.0), 0.0);
        assert_eq!(sgn(0.0), 0.0);
        assert_eq!(sgn_plus(2.0), 1.0);
        assert_eq!(sgn_minus(-2.0), -1.0);
    }

    proptest! {
        #[test]
        fn reflection_identities_exact(s in -1e6f64..1e6) {
            // (−s)⁻ = s⁺ and (−s)⁺ = s⁻, bitwise.
            prop_assert_eq!(neg_part(-s), pos_part(s));
            prop_assert_eq!(pos_part(-s), neg_part(s));
        }

        #[test]
        fn parts_decompose_abs_and_sign(s in -1e6f64..1e6) {
            prop_assert_eq!(pos_part(s) + neg_part(s), s.abs());
            prop_assert_eq!(sgn_plus(s) + sgn_minus(s), sgn(s));
            prop_assert_eq!(Sign::Plus.part(s), pos_part(s));
            prop_assert_eq!(Sign::Minus.sgn(s), sgn_minus(s));
        }
    }
}
