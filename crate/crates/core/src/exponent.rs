//! Exact rational exponents of the formal variable T.
//!
//! Exponents are elements of an additive subgroup of the reals; restricting
//! to rationals keeps every comparison exact. No floating point anywhere.


use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact rational exponent, totally ordered as a real number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(BigRational);

impl Exponent {
    pub fn zero() -> Self {
        Exponent(BigRational::zero())
    }

    pub fn one() -> Self {
        Exponent(BigRational::one())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "exponent denominator must be nonzero");
        Exponent(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Exponent(r)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Whether `self` is an integer multiple of `step` (with `step > 0`).
    pub fn is_multiple_of(&self, step: &Exponent) -> bool {
        assert!(step.0.is_positive(), "step must be positive");
        (&self.0 / &step.0).is_integer()
    }

    /// Largest multiple of `step` that is `<= self`.
    pub fn floor_to_multiple(&self, step: &Exponent) -> Exponent {
        assert!(step.0.is_positive(), "step must be positive");
        let q = (&self.0 / &step.0).floor();
        Exponent(q * &step.0)
    }

    pub fn min(self, other: Exponent) -> Exponent {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Exponent) -> Exponent {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// gcd of two rationals: the generator of the group they generate.
    /// gcd(a/b, c/d) = gcd(ad, cb) / bd, zero arguments are absorbed.
    pub fn rational_gcd(&self, other: &Exponent) -> Exponent {
        if self.is_zero() {
            return Exponent(other.0.abs());
        }
        if other.is_zero() {
            return Exponent(self.0.abs());
        }
        let ad = self.0.numer() * other.0.denom();
        let cb = other.0.numer() * self.0.denom();
        let num = ad.gcd(&cb);
        let den = self.0.denom() * other.0.denom();
        Exponent(BigRational::new(num, den))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Exponent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num_str).map_err(|e| format!("bad numerator {num_str:?}: {e}"))?;
        let den = BigInt::from_str(den_str).map_err(|e| format!("bad denominator {den_str:?}: {e}"))?;
        if den.is_zero() {
            return Err("zero denominator".to_owned());
        }
        Ok(Exponent(BigRational::new(num, den)))
    }
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent(BigRational::from_integer(BigInt::from(n)))
    }
}

macro_rules! exponent_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Exponent {
            type Output = Exponent;
            fn $method(self, rhs: Exponent) -> Exponent {
                Exponent(self.0 $op rhs.0)
            }
        }
        impl $trait<&Exponent> for &Exponent {
            type Output = Exponent;
            fn $method(self, rhs: &Exponent) -> Exponent {
                Exponent(&self.0 $op &rhs.0)
            }
        }
        impl $trait<&Exponent> for Exponent {
            type Output = Exponent;
            fn $method(self, rhs: &Exponent) -> Exponent {
                Exponent(self.0 $op &rhs.0)
            }
        }
        impl $trait<Exponent> for &Exponent {
            type Output = Exponent;
            fn $method(self, rhs: Exponent) -> Exponent {
                Exponent(&self.0 $op rhs.0)
            }
        }
    };
}

exponent_binop!(Add, add, +);
exponent_binop!(Sub, sub, -);

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-self.0)
    }
}

impl Neg for &Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let e: Exponent = "5/2".parse().unwrap();
        assert_eq!(e, Exponent::from_ratio(5, 2));
        assert_eq!(e.to_string(), "5/2");
        let z: Exponent = "-3".parse().unwrap();
        assert_eq!(z.to_string(), "-3");
        let n: Exponent = "4/2".parse().unwrap();
        assert_eq!(n.to_string(), "2");
        assert!("1/0".parse::<Exponent>().is_err());
        assert!("x".parse::<Exponent>().is_err());
    }

    #[test]
    fn ordering_is_exact() {
        // 1/3 < 34/100 even though both round to 0.33
        let a = Exponent::from_ratio(1, 3);
        let b = Exponent::from_ratio(34, 100);
        assert!(a < b);
    }

    #[test]
    fn gcd_of_rationals() {
        let third = Exponent::from_ratio(1, 3);
        let half = Exponent::from_ratio(1, 2);
        assert_eq!(third.rational_gcd(&half), Exponent::from_ratio(1, 6));
        assert_eq!(Exponent::zero().rational_gcd(&half), half);
        let neg = Exponent::from_ratio(-2, 3);
        assert_eq!(neg.rational_gcd(&Exponent::zero()), Exponent::from_ratio(2, 3));
    }

    #[test]
    fn multiples() {
        let half = Exponent::from_ratio(1, 2);
        assert!(Exponent::from_ratio(3, 2).is_multiple_of(&half));
        assert!(!Exponent::from_ratio(1, 3).is_multiple_of(&half));
        assert_eq!(
            Exponent::from_ratio(5, 4).floor_to_multiple(&half),
            Exponent::from_ratio(1, 1)
        );
        assert_eq!(
            Exponent::from_ratio(-5, 4).floor_to_multiple(&half),
            Exponent::from_ratio(-3, 2)
        );
    }
}
