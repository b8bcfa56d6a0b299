//! Exact arithmetic over the prime field `Z_d` and over phase exponents.
//!
//! Phases are integer powers of `τ = exp(iπ/d)`, stored modulo `2d`. Powers of
//! `ω = exp(2πi/d)` are the even exponents; the odd ones only show up for
//! `d = 2`, where Weyl eigenvalues carry half-integer powers of `ω`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime local dimension `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    /// Checks primality by trial division.
    pub fn new(d: u32) -> Result<Self> {
        if is_prime(d) {
            Ok(Prime(d))
        } else {
            Err(Error::NotPrime(d))
        }
    }

    #[inline]
    pub const fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    /// Reduces an arbitrary integer into `[0, d)`.
    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn scalar(self, v: i64) -> FieldScalar {
        FieldScalar::new(v, self)
    }

    pub fn elements(self) -> impl Iterator<Item = FieldScalar> {
        (0..self.0).map(move |v| FieldScalar { value: v, modulus: self })
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        Prime::new(d)
    }
}

impl From<Prime> for u32 {
    fn from(d: Prime) -> u32 {
        d.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn is_prime(d: u32) -> bool {
    if d < 2 {
        return false;
    }
    let mut i = 2u32;
    while (i as u64) * (i as u64) <= d as u64 {
        if d % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// An element of `Z_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldScalar {
    value: u32,
    modulus: Prime,
}

impl FieldScalar {
    pub fn new(value: i64, modulus: Prime) -> Self {
        FieldScalar { value: modulus.reduce(value), modulus }
    }

    pub fn zero(modulus: Prime) -> Self {
        FieldScalar { value: 0, modulus }
    }

    pub fn one(modulus: Prime) -> Self {
        FieldScalar { value: 1, modulus }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u32) -> Self {
        let d = self.modulus.get() as u64;
        let mut base = self.value as u64;
        let mut acc = 1u64 % d;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % d;
            }
            base = base * base % d;
            exp >>= 1;
        }
        FieldScalar { value: acc as u32, modulus: self.modulus }
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inverse(self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NoInverse(self.value, self.modulus.get()));
        }
        Ok(self.pow(self.modulus.get() - 2))
    }
}

/// Free-function form of [`FieldScalar::inverse`].
pub fn field_inverse(a: FieldScalar) -> Result<FieldScalar> {
    a.inverse()
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

impl Add for FieldScalar {
    type Output = FieldScalar;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        FieldScalar::new(self.value as i64 + rhs.value as i64, self.modulus)
    }
}

impl Sub for FieldScalar {
    type Output = FieldScalar;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        FieldScalar::new(self.value as i64 - rhs.value as i64, self.modulus)
    }
}

impl Mul for FieldScalar {
    type Output = FieldScalar;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        FieldScalar::new(self.value as i64 * rhs.value as i64, self.modulus)
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> Self {
        FieldScalar::new(-(self.value as i64), self.modulus)
    }
}

/// A power of `τ = exp(iπ/d)`, exponent stored modulo `2d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhaseExponent {
    exponent: u32,
    modulus: Prime,
}

impl PhaseExponent {
    /// `τ^exponent`.
    pub fn new(exponent: i64, modulus: Prime) -> Self {
        let period = 2 * modulus.get() as i64;
        PhaseExponent { exponent: exponent.rem_euclid(period) as u32, modulus }
    }

    /// `ω^power = τ^(2·power)`.
    pub fn omega_power(power: i64, modulus: Prime) -> Self {
        Self::new(2 * power, modulus)
    }

    pub fn zero(modulus: Prime) -> Self {
        PhaseExponent { exponent: 0, modulus }
    }

    #[inline]
    pub fn exponent(self) -> u32 {
        self.exponent
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.modulus
    }

    pub fn is_omega_power(self) -> bool {
        self.exponent % 2 == 0
    }

    pub fn value(self) -> Complex64 {
        phase_value(self)
    }
}

/// `exp(iπ·exponent/d)`.
pub fn phase_value(p: PhaseExponent) -> Complex64 {
    if p.exponent == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if p.exponent == p.modulus.get() {
        return Complex64::new(-1.0, 0.0);
    }
    Complex64::from_polar(1.0, PI * p.exponent as f64 / p.modulus.get() as f64)
}

impl Add for PhaseExponent {
    type Output = PhaseExponent;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        PhaseExponent::new(self.exponent as i64 + rhs.exponent as i64, self.modulus)
    }
}

impl Sub for PhaseExponent {
    type Output = PhaseExponent;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        PhaseExponent::new(self.exponent as i64 - rhs.exponent as i64, self.modulus)
    }
}

impl Neg for PhaseExponent {
    type Output = PhaseExponent;
    fn neg(self) -> Self {
        PhaseExponent::new(-(self.exponent as i64), self.modulus)
    }
}

impl fmt::Display for PhaseExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "τ^{}", self.exponent)
    }
}
