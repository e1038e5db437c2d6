use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

/// A real number or `+∞` (and `−∞` for degenerate verdicts).
///
/// Addition follows the inf-addition convention of convex analysis: `a + ∞ = ∞`
/// for every `a`, including `a = −∞`. NaN is never stored; constructors map it
/// to `+∞`.
#[derive(Clone, Copy, PartialEq, Default)]
#[repr(transparent)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const INFINITY: ExtReal = ExtReal(f64::INFINITY);
    pub const NEG_INFINITY: ExtReal = ExtReal(f64::NEG_INFINITY);
    pub const ZERO: ExtReal = ExtReal(0.0);

    pub fn new(v: f64) -> Self {
        if v.is_nan() {
            ExtReal::INFINITY
        } else {
            ExtReal(v)
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_pos_infinite(self) -> bool {
        self.0 == f64::INFINITY
    }

    pub fn is_neg_infinite(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Multiplication by a nonnegative scalar with `0 · ∞ = 0`.
    pub fn scale(self, lambda: f64) -> Self {
        debug_assert!(lambda >= 0.0);
        if lambda == 0.0 {
            ExtReal::ZERO
        } else {
            ExtReal(self.0 * lambda)
        }
    }

    /// `exp(−self)` with `exp(−∞) = 0`.
    pub fn exp_neg(self) -> f64 {
        (-self.0).exp()
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        ExtReal::new(v)
    }
}

impl Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        if self.is_pos_infinite() || rhs.is_pos_infinite() {
            ExtReal::INFINITY
        } else {
            ExtReal(self.0 + rhs.0)
        }
    }
}

impl Add<f64> for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: f64) -> ExtReal {
        self + ExtReal::new(rhs)
    }
}

impl Sub<f64> for ExtReal {
    type Output = ExtReal;
    fn sub(self, rhs: f64) -> ExtReal {
        self + ExtReal::new(-rhs)
    }
}

impl Mul<f64> for ExtReal {
    type Output = ExtReal;
    fn mul(self, rhs: f64) -> ExtReal {
        self.scale(rhs)
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        ExtReal(-self.0)
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pos_infinite() {
            write!(f, "inf")
        } else if self.is_neg_infinite() {
            write!(f, "-inf")
        } else {
            fmt::Display::fmt(&self.0, f)
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str(&self.to_string())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inf_addition() {
        let a = ExtReal::new(3.0);
        assert_eq!(a + ExtReal::INFINITY, ExtReal::INFINITY);
        assert_eq!(ExtReal::NEG_INFINITY + ExtReal::INFINITY, ExtReal::INFINITY);
        assert_eq!((a + 2.0).value(), 5.0);
        assert_eq!(ExtReal::new(f64::NAN), ExtReal::INFINITY);
    }

    #[test]
    fn ordering_is_total() {
        let mut v = vec![ExtReal::INFINITY, ExtReal::new(-1.0), ExtReal::NEG_INFINITY, ExtReal::ZERO];
        v.sort();
        assert_eq!(v, vec![ExtReal::NEG_INFINITY, ExtReal::new(-1.0), ExtReal::ZERO, ExtReal::INFINITY]);
        assert_eq!(ExtReal::INFINITY.scale(0.0), ExtReal::ZERO);
        assert_eq!(ExtReal::INFINITY.exp_neg(), 0.0);
    }
}
