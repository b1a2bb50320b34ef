//! Extended nonnegative reals in log representation with a witnessed infinity.
//!
//! Divergence is never "detected" by overflow; a value becomes
//! [`ExtReal::PosInfinity`] only when an explicit exponent comparison proved
//! it, and the witness records which comparison did.

use crate::logspace::log_add_exp;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ExtReal {
    /// A finite nonnegative value `exp(log_value)`; `NEG_INFINITY` is exact zero.
    Finite { log_value: f64 },
    /// Positive infinity together with the exponent comparison that proved it.
    PosInfinity { witness: String },
}

impl ExtReal {
    pub fn zero() -> Self {
        ExtReal::Finite {
            log_value: f64::NEG_INFINITY,
        }
    }

    pub fn from_log(log_value: f64) -> Self {
        ExtReal::Finite { log_value }
    }

    pub fn from_value(v: f64) -> Self {
        assert!(v >= 0.0, "ExtReal holds nonnegative values, got {v}");
        ExtReal::Finite { log_value: v.ln() }
    }

    pub fn infinite(witness: impl Into<String>) -> Self {
        ExtReal::PosInfinity {
            witness: witness.into(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtReal::PosInfinity { .. })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtReal::Finite { log_value } if *log_value == f64::NEG_INFINITY)
    }

    pub fn log_value(&self) -> Option<f64> {
        match self {
            ExtReal::Finite { log_value } => Some(*log_value),
            ExtReal::PosInfinity { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&str> {
        match self {
            ExtReal::Finite { .. } => None,
            ExtReal::PosInfinity { witness } => Some(witness),
        }
    }

    /// Linear value; may overflow to `f64::INFINITY` or underflow to 0.
    pub fn value(&self) -> f64 {
        match self {
            ExtReal::Finite { log_value } => log_value.exp(),
            ExtReal::PosInfinity { .. } => f64::INFINITY,
        }
    }

    /// Sum; absorbing on infinity.
    pub fn add(&self, other: &ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::PosInfinity { witness }, _) | (_, ExtReal::PosInfinity { witness }) => {
                ExtReal::infinite(witness.clone())
            }
            (ExtReal::Finite { log_value: a }, ExtReal::Finite { log_value: b }) => {
                ExtReal::from_log(log_add_exp(*a, *b))
            }
        }
    }

    /// Product; absorbing on infinity (zero times infinity is rejected).
    pub fn mul(&self, other: &ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::PosInfinity { witness }, o) | (o, ExtReal::PosInfinity { witness }) => {
                assert!(!o.is_zero(), "0 * infinity is undefined");
                ExtReal::infinite(witness.clone())
            }
            (ExtReal::Finite { log_value: a }, ExtReal::Finite { log_value: b }) => {
                ExtReal::from_log(a + b)
            }
        }
    }

    /// Multiply by `exp(l)`.
    pub fn scale_log(&self, l: f64) -> ExtReal {
        match self {
            ExtReal::Finite { log_value } => ExtReal::from_log(log_value + l),
            ExtReal::PosInfinity { witness } => ExtReal::infinite(witness.clone()),
        }
    }

    /// Raise to a positive power (used for the 1/p root of norms).
    pub fn powf(&self, q: f64) -> ExtReal {
        assert!(q > 0.0);
        match self {
            ExtReal::Finite { log_value } => ExtReal::from_log(log_value * q),
            ExtReal::PosInfinity { witness } => ExtReal::infinite(witness.clone()),
        }
    }

    pub fn max(&self, other: &ExtReal) -> ExtReal {
        if self.ge(other) {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// `self >= other` in the extended order (infinity dominates everything,
    /// including another infinity).
    pub fn ge(&self, other: &ExtReal) -> bool {
        match (self, other) {
            (ExtReal::PosInfinity { .. }, _) => true,
            (ExtReal::Finite { .. }, ExtReal::PosInfinity { .. }) => false,
            (ExtReal::Finite { log_value: a }, ExtReal::Finite { log_value: b }) => a >= b,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite { log_value } => write!(f, "exp({log_value})"),
            ExtReal::PosInfinity { witness } => write!(f, "inf[{witness}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_absorbs_infinity() {
        let inf = ExtReal::infinite("test");
        let x = ExtReal::from_value(2.0);
        assert!(inf.add(&x).is_infinite());
        assert!(x.mul(&inf).is_infinite());
        assert!(inf.max(&x).is_infinite());
        assert!(inf.ge(&inf));
        assert!(!x.ge(&inf));
    }

    #[test]
    fn finite_ordering_and_values() {
        let a = ExtReal::from_value(3.0);
        let b = ExtReal::from_value(4.0);
        assert!(b.ge(&a));
        assert!((a.add(&b).value() - 7.0).abs() < 1e-12);
        assert!((a.mul(&b).value() - 12.0).abs() < 1e-12);
        assert!(ExtReal::zero().add(&a).ge(&a));
    }
}
