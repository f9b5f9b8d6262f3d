//! Exact coefficient arithmetic: arbitrary-precision rationals and prime fields.
//!
//! Every computation in this crate runs over a [`Field`] implementation.
//! There is no floating point anywhere; equality of scalars is decidable
//! and exact, and `a + (-a) == 0` holds bit-exactly.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Runtime description of a coefficient field, as it appears in input files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldSpec {
    /// The rational numbers, characteristic 0.
    Rationals,
    /// The prime field with the given characteristic.
    Prime(u64),
}

impl FieldSpec {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    /// Rejects composite or trivial characteristics.
    pub fn validate(&self) -> Result<(), FieldError> {
        match self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::Prime(p) if is_prime(*p) => Ok(()),
            FieldSpec::Prime(p) => Err(FieldError::NonPrimeCharacteristic(*p)),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("cannot parse {text:?} as an element of {field}")]
    UnparsableScalar { text: String, field: FieldSpec },
    #[error("division by zero")]
    DivisionByZero,
}

/// An exact coefficient field.
///
/// The field is a value (not just a type) so that a prime modulus chosen at
/// runtime can travel with the data that uses it. Elements are plain data;
/// all arithmetic goes through the field object.
pub trait Field: Clone + Eq + fmt::Debug {
    type Elem: Clone + Eq + fmt::Debug;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// The image of an integer in this field (the name reads from the
    /// field object's side, so `self` is the field, not the scalar).
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Parse the serialized form: `"n"`, `"n/d"`, or a bare integer mod p.
    fn parse(&self, text: &str) -> Result<Self::Elem, FieldError>;
    /// Canonical serialized form; must round-trip through [`Field::parse`].
    fn format(&self, a: &Self::Elem) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        self.inv(b)
            .map(|bi| self.mul(a, &bi))
            .ok_or(FieldError::DivisionByZero)
    }

    /// Hook used by the fraction-free eliminator: rescale a row so the
    /// pivoting arithmetic stays denominator-free. No-op over prime fields.
    fn clear_denominators(&self, _row: &mut [Self::Elem]) {}
}

/// The rational numbers with arbitrary-precision arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
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

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn parse(&self, text: &str) -> Result<BigRational, FieldError> {
        text.parse::<BigRational>()
            .map_err(|_| FieldError::UnparsableScalar {
                text: text.to_owned(),
                field: self.spec(),
            })
    }

    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }

    fn clear_denominators(&self, row: &mut [BigRational]) {
        let mut lcm = BigInt::one();
        for entry in row.iter() {
            if !entry.is_zero() {
                lcm = lcm.lcm(entry.denom());
            }
        }
        if !lcm.is_one() {
            let factor = BigRational::from_integer(lcm);
            for entry in row.iter_mut() {
                *entry = &*entry * &factor;
            }
        }
        // Normalizing the content keeps the integer entries small across
        // repeated elimination passes.
        let mut gcd = BigInt::zero();
        for entry in row.iter() {
            gcd = gcd.gcd(entry.numer());
        }
        if !gcd.is_zero() && !gcd.is_one() {
            let factor = BigRational::from_integer(gcd);
            for entry in row.iter_mut() {
                *entry = &*entry / &factor;
            }
        }
    }
}

/// The field with a prime number of elements; the modulus is a runtime value.
///
/// Elements are canonical representatives in `0..p` stored as `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(FieldError::NonPrimeCharacteristic(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_i128(&self, n: i128) -> u64 {
        let p = self.p as i128;
        (n.rem_euclid(p)) as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Extended Euclid on (a, p).
        let (mut r0, mut r1) = (*a as i128, self.p as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.reduce_i128(s0))
    }

    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i128(n as i128)
    }

    fn parse(&self, text: &str) -> Result<u64, FieldError> {
        text.trim()
            .parse::<i128>()
            .map(|n| self.reduce_i128(n))
            .map_err(|_| FieldError::UnparsableScalar {
                text: text.to_owned(),
                field: self.spec(),
            })
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
