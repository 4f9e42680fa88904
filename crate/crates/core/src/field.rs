//! Coefficient fields for Novikov series: the rationals and prime fields.
//!
//! The field is passed around as a value (a "field object") so that prime
//! fields with a runtime modulus and the rationals can share one interface.
//! Elements do not know which field they belong to; mixing fields is a
//! caller bug and is checked where cheap.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A field of coefficients. All operations are exact.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` exactly at zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// The element `num/den`. `None` when `den` maps to zero (e.g. 1/2 in F_2).
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Self::Elem>;

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_ratio(&BigInt::from(n), &BigInt::one())
            .expect("integer embeds into any field")
    }

    /// All elements, when the field is finite. `None` for infinite fields.
    fn elements(&self) -> Option<Vec<Self::Elem>>;

    /// Canonical text form of an element, used by series literals.
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Short tag used in file headers: `Q`, `F2`, `F3`, ...
    fn name(&self) -> String;
}

/// The field of rational numbers with arbitrary-precision arithmetic.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<BigRational> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num.clone(), den.clone()))
        }
    }

    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }

    fn format_elem(&self, a: &BigRational) -> String {
        // Coefficients always carry an explicit denominator: "3/1", "-1/2".
        format!("{}/{}", a.numer(), a.denom())
    }

    fn name(&self) -> String {
        "Q".to_owned()
    }
}

/// The prime field F_p for a small prime `p`, elements as canonical residues.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Panics if `p` is not prime. Intended for small moduli.
    pub fn new(p: u64) -> Self {
        assert!(is_prime(p), "PrimeField modulus must be prime, got {p}");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let mut r = n % &p;
        if r.is_negative() {
            r += &p;
        }
        // r in [0, p), fits in u64
        let (_, digits) = r.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2) mod p
        let mut result: u64 = 1;
        let mut base = *a;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Some(result)
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<u64> {
        let n = self.reduce_bigint(num);
        let d = self.reduce_bigint(den);
        let d_inv = self.inv(&d)?;
        Some(self.mul(&n, &d_inv))
    }

    fn elements(&self) -> Option<Vec<u64>> {
        Some((0..self.p).collect())
    }

    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }

    fn name(&self) -> String {
        format!("F{}", self.p)
    }
}
