//! Exact phases: unit complex numbers `exp(2 pi i t)` with rational `t`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::group::gcd;

/// A rational number of turns reduced to `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Turn {
    num: i64,
    den: i64,
}

impl Turn {
    pub const ZERO: Turn = Turn { num: 0, den: 1 };

    /// `num / den` turns, reduced modulo 1. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "turn denominator must be nonzero");
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        num = num.rem_euclid(den);
        let g = gcd(num, den).max(1);
        num /= g;
        den /= g;
        Turn { num, den }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// The turn as a fraction in `(-1/2, 1/2]`.
    pub fn principal(&self) -> (i64, i64) {
        if 2 * self.num > self.den {
            (self.num - self.den, self.den)
        } else {
            (self.num, self.den)
        }
    }

    /// Principal `n`-th root of `exp(-2 pi i t)`.
    pub fn principal_inverse_root(&self, n: u64) -> Turn {
        let (num, den) = (-*self).principal();
        Turn::new(num, den * n as i64)
    }

    pub fn scaled(&self, k: i64) -> Turn {
        Turn::new(self.num * k, self.den)
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// The unit complex number. Quarter turns are produced exactly.
    pub fn to_complex(&self) -> Complex64 {
        match (self.num * 4 % self.den == 0).then(|| self.num * 4 / self.den) {
            Some(0) => Complex64::new(1.0, 0.0),
            Some(1) => Complex64::new(0.0, 1.0),
            Some(2) => Complex64::new(-1.0, 0.0),
            Some(3) => Complex64::new(0.0, -1.0),
            _ => Complex64::from_polar(1.0, std::f64::consts::TAU * self.as_f64()),
        }
    }
}

impl Add for Turn {
    type Output = Turn;
    fn add(self, rhs: Turn) -> Turn {
        let g = gcd(self.den, rhs.den);
        let den = self.den / g * rhs.den;
        Turn::new(self.num * (den / self.den) + rhs.num * (den / rhs.den), den)
    }
}

impl Neg for Turn {
    type Output = Turn;
    fn neg(self) -> Turn {
        Turn::new(-self.num, self.den)
    }
}

impl Sub for Turn {
    type Output = Turn;
    fn sub(self, rhs: Turn) -> Turn {
        self + (-rhs)
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Unit complex number from a real number of turns, reduced modulo 1 first
/// so that large phases keep full precision.
pub(crate) fn turns_to_unit(t: f64) -> Complex64 {
    let r = t - t.floor();
    Complex64::from_polar(1.0, std::f64::consts::TAU * r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_arithmetic() {
        assert_eq!(Turn::new(5, 4), Turn::new(1, 4));
        assert_eq!(Turn::new(-1, 3), Turn::new(2, 3));
        assert_eq!(Turn::new(2, -6), Turn::new(2, 3));
        assert_eq!(Turn::new(1, 3) + Turn::new(2, 3), Turn::ZERO);
        assert_eq!(Turn::new(1, 4) - Turn::new(1, 2), Turn::new(3, 4));
        assert_eq!(Turn::new(1, 6).scaled(9), Turn::new(1, 2));
    }

    #[test]
    fn principal_roots() {
        // alpha = -1: alpha^{-1} = -1 has principal argument +pi, so the root is i.
        assert_eq!(Turn::new(1, 2).principal_inverse_root(2), Turn::new(1, 4));
        assert_eq!(Turn::new(1, 3).principal_inverse_root(2), Turn::new(-1, 6));
        assert_eq!(Turn::ZERO.principal_inverse_root(5), Turn::ZERO);
        let root = Turn::new(2, 5).principal_inverse_root(3);
        assert_eq!(root.scaled(3) + Turn::new(2, 5), Turn::ZERO);
    }

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(Turn::new(1, 4).to_complex(), Complex64::new(0.0, 1.0));
        assert_eq!(Turn::new(1, 2).to_complex(), Complex64::new(-1.0, 0.0));
        let w = Turn::new(1, 3).to_complex();
        assert!((w - Complex64::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    }
}
