//! Exact coefficient fields.
//!
//! Two concrete fields are supported: arbitrary-precision rationals
//! ([`BigRational`], always normalized by `num-rational`) and prime fields
//! [`Fp`] with a modulus below 2^63. Prime-field elements carry their modulus,
//! so the zero and one of the field can be produced from any element.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::Error;

/// Arithmetic required from a polynomial coefficient.
pub trait Coeff: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, v: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// `true` when the printed form needs a leading minus sign.
    fn is_negative_repr(&self) -> bool {
        false
    }
}

impl Coeff for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn int_like(&self, v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
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
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn is_negative_repr(&self) -> bool {
        self.is_negative()
    }
}

/// Element of the prime field `Z/pZ`, `p < 2^63`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: i64, modulus: u64) -> Self {
        let m = modulus as i128;
        let v = (value as i128).rem_euclid(m) as u64;
        Fp { value: v, modulus }
    }

    pub fn from_u64(value: u64, modulus: u64) -> Self {
        Fp { value: value % modulus, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, modulus: u64) -> Self {
        Fp { value: rng.gen_range(0..modulus), modulus }
    }

    /// Uniform nonzero element.
    pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R, modulus: u64) -> Self {
        Fp { value: rng.gen_range(1..modulus), modulus }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = Coeff::mul(&acc, &base);
            }
            base = Coeff::mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    fn check(&self, other: &Self) {
        assert_eq!(self.modulus, other.modulus, "mixed-field arithmetic: F_{} vs F_{}", self.modulus, other.modulus);
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Coeff for Fp {
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn is_one(&self) -> bool {
        self.value == 1
    }
    fn zero_like(&self) -> Self {
        Fp { value: 0, modulus: self.modulus }
    }
    fn one_like(&self) -> Self {
        Fp { value: 1, modulus: self.modulus }
    }
    fn int_like(&self, v: i64) -> Self {
        Fp::new(v, self.modulus)
    }
    #[inline]
    fn add(&self, other: &Self) -> Self {
        self.check(other);
        let s = self.value as u128 + other.value as u128;
        Fp { value: (s % self.modulus as u128) as u64, modulus: self.modulus }
    }
    #[inline]
    fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let v = if self.value >= other.value {
            self.value - other.value
        } else {
            self.modulus - (other.value - self.value)
        };
        Fp { value: v, modulus: self.modulus }
    }
    #[inline]
    fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let p = (self.value as u128 * other.value as u128) % self.modulus as u128;
        Fp { value: p as u64, modulus: self.modulus }
    }
    fn neg(&self) -> Self {
        if self.value == 0 {
            *self
        } else {
            Fp { value: self.modulus - self.value, modulus: self.modulus }
        }
    }
    fn inv(&self) -> Self {
        assert!(self.value != 0, "inverse of zero in F_{}", self.modulus);
        let (mut old_r, mut r) = (self.value as i128, self.modulus as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1, "modulus is not prime");
        Fp { value: old_s.rem_euclid(self.modulus as i128) as u64, modulus: self.modulus }
    }
}

/// Image of a rational number in `F_p`.
pub fn rational_to_fp(q: &BigRational, p: u64) -> Result<Fp, Error> {
    let pb = BigInt::from(p);
    let den = q.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(Error::NonInvertibleDenominator { prime: p });
    }
    let num = q.numer().mod_floor(&pb);
    let n = Fp::from_u64(num.to_u64().unwrap(), p);
    let d = Fp::from_u64(den.to_u64().unwrap(), p);
    Ok(Coeff::div(&n, &d))
}

/// A dynamically typed scalar: rational or prime-field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime(Fp),
}

impl Scalar {
    pub fn rational(n: i64, d: i64) -> Self {
        Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => Zero::is_zero(q),
            Scalar::Prime(a) => Coeff::is_zero(a),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, Error> {
        self.zip(other, Coeff::add, Coeff::add)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, Error> {
        self.zip(other, Coeff::sub, Coeff::sub)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, Error> {
        self.zip(other, Coeff::mul, Coeff::mul)
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, Error> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.zip(other, Coeff::div, Coeff::div)
    }

    fn zip(
        &self,
        other: &Scalar,
        fq: impl Fn(&BigRational, &BigRational) -> BigRational,
        fp: impl Fn(&Fp, &Fp) -> Fp,
    ) -> Result<Scalar, Error> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(fq(a, b))),
            (Scalar::Prime(a), Scalar::Prime(b)) if a.modulus == b.modulus => Ok(Scalar::Prime(fp(a, b))),
            _ => Err(Error::MixedFields),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Prime(a) => write!(f, "{} mod {}", a.value, a.modulus),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn half_mod_seven_is_four() {
        assert_eq!(rational_to_fp(&q(1, 2), 7).unwrap(), Fp::new(4, 7));
    }

    #[test]
    fn fifth_mod_five_fails() {
        assert!(matches!(rational_to_fp(&q(1, 5), 5), Err(Error::NonInvertibleDenominator { prime: 5 })));
    }

    #[test]
    fn fp_inverse_and_negation() {
        let p = 2_147_483_647;
        for v in [1i64, 2, 12345, -7, p as i64 - 1] {
            let a = Fp::new(v, p);
            assert!(Coeff::mul(&a, &a.inv()).is_one());
            assert!(Coeff::add(&a, &Coeff::neg(&a)).is_zero());
        }
        let big = (1u64 << 62) - 57;
        let a = Fp::from_u64(big - 3, big);
        assert!(Coeff::mul(&a, &a.inv()).is_one());
    }

    #[test]
    fn scalar_rejects_mixed_fields() {
        let a = Scalar::rational(1, 2);
        let b = Scalar::Prime(Fp::new(3, 7));
        assert!(matches!(a.try_add(&b), Err(Error::MixedFields)));
        let c = Scalar::Prime(Fp::new(3, 11));
        assert!(matches!(b.try_mul(&c), Err(Error::MixedFields)));
        assert_eq!(a.try_add(&Scalar::rational(1, 3)).unwrap(), Scalar::rational(5, 6));
    }

    #[test]
    #[should_panic(expected = "mixed-field")]
    fn fp_mixed_moduli_panic() {
        let _ = Coeff::add(&Fp::new(1, 7), &Fp::new(1, 11));
    }
}
