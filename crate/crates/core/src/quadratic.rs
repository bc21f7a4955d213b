//! Scalars used for exact evaluation: the rationals and real or imaginary
//! quadratic extensions `ℚ(√d)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::projective::Rational;

/// The field operations needed to evaluate a factored map.
pub trait Scalar: Clone + PartialEq {
    fn from_rational(value: &Rational) -> Self;
    fn is_nil(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn is_unit(&self) -> bool {
        *self == Self::from_rational(&Rational::one())
    }
}

impl Scalar for Rational {
    fn from_rational(value: &Rational) -> Self {
        value.clone()
    }

    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// `a + b·√d` with `d` a non-square integer. Rational values carry `b = 0`
/// and adopt the radicand of whatever they are combined with.
#[derive(Debug, Clone)]
pub struct QuadraticNumber {
    a: Rational,
    b: Rational,
    d: BigInt,
}

impl QuadraticNumber {
    pub fn new(a: Rational, b: Rational, d: BigInt) -> Self {
        QuadraticNumber { a, b, d }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn radicand_with(&self, other: &Self) -> BigInt {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, _) => other.d.clone(),
            (false, true) => self.d.clone(),
            (false, false) => {
                assert_eq!(self.d, other.d, "mixing different quadratic fields");
                self.d.clone()
            }
        }
    }
}

impl PartialEq for QuadraticNumber {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadraticNumber {}

impl Scalar for QuadraticNumber {
    fn from_rational(value: &Rational) -> Self {
        QuadraticNumber {
            a: value.clone(),
            b: Rational::zero(),
            d: BigInt::zero(),
        }
    }

    fn is_nil(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        let d = self.radicand_with(other);
        QuadraticNumber {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            d,
        }
    }

    fn sub(&self, other: &Self) -> Self {
        let d = self.radicand_with(other);
        QuadraticNumber {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            d,
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let d = self.radicand_with(other);
        let dq = Rational::from_integer(d.clone());
        let a = &self.a * &other.a + &self.b * &other.b * dq;
        let b = &self.a * &other.b + &self.b * &other.a;
        QuadraticNumber { a, b, d }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_nil() {
            return None;
        }
        // (a + b√d)^{-1} = (a − b√d) / (a² − d b²); the norm is nonzero since d is not a square
        let dq = Rational::from_integer(self.d.clone());
        let norm = &self.a * &self.a - &self.b * &self.b * dq;
        Some(QuadraticNumber {
            a: &self.a / &norm,
            b: -&self.b / &norm,
            d: self.d.clone(),
        })
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sixth_root_of_unity_arithmetic() {
        // ω = 1/2 + (1/2)√−3 satisfies ω² − ω + 1 = 0
        let w = QuadraticNumber::new(q(1, 2), q(1, 2), BigInt::from(-3));
        let one = QuadraticNumber::from_rational(&q(1, 1));
        let lhs = w.mul(&w).sub(&w).add(&one);
        assert!(lhs.is_nil());
        // so 1/(1 − ω) = ω
        assert_eq!(one.sub(&w).inv().unwrap(), w);
    }

    #[test]
    fn inverse_round_trip() {
        let x = QuadraticNumber::new(q(3, 5), q(-2, 7), BigInt::from(2));
        let one = QuadraticNumber::from_rational(&q(1, 1));
        assert_eq!(x.mul(&x.inv().unwrap()), one);
        assert!(QuadraticNumber::from_rational(&q(0, 1)).inv().is_none());
    }
}
