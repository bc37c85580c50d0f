use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `Σ c_i H^i ∩ [P^n]`, graded by codimension.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChowClass {
    n: usize,
    coeffs: Vec<BigRational>,
}

fn qi(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl ChowClass {
    /// Coefficients beyond `H^n` are dropped, missing ones are zero.
    pub fn new(n: usize, coeffs: impl IntoIterator<Item = BigRational>) -> Self {
        let mut c: Vec<BigRational> = coeffs.into_iter().take(n + 1).collect();
        c.resize(n + 1, BigRational::zero());
        ChowClass { n, coeffs: c }
    }

    pub fn from_ints(n: usize, coeffs: &[i64]) -> Self {
        ChowClass::new(n, coeffs.iter().map(|&v| qi(v)))
    }

    pub fn zero(n: usize) -> Self {
        ChowClass::new(n, [])
    }

    /// The fundamental class `[P^n]`.
    pub fn one(n: usize) -> Self {
        ChowClass::new(n, [BigRational::one()])
    }

    /// `H^i ∩ [P^n] = [P^{n-i}]`.
    pub fn h_pow(n: usize, i: usize) -> Self {
        let mut c = vec![BigRational::zero(); n + 1];
        if i <= n {
            c[i] = BigRational::one();
        }
        ChowClass { n, coeffs: c }
    }

    /// `[P^k]`.
    pub fn linear(n: usize, k: usize) -> Self {
        assert!(k <= n);
        ChowClass::h_pow(n, n - k)
    }

    /// `1 + aH`.
    pub fn one_plus(n: usize, a: i64) -> Self {
        ChowClass::new(n, [BigRational::one(), qi(a)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `H^i`, i.e. of `[P^{n-i}]`.
    pub fn codim(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    /// Coefficient of `[P^k]`.
    pub fn dim(&self, k: usize) -> &BigRational {
        &self.coeffs[self.n - k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        ChowClass { n: self.n, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(ChowClass::one(self.n), |acc, _| &acc * self)
    }

    /// Multiplicative inverse as a truncated power series; needs `c_0 ≠ 0`.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv0 = self.coeffs[0].recip();
        let mut out = vec![BigRational::zero(); self.n + 1];
        out[0] = inv0.clone();
        for i in 1..=self.n {
            let mut acc = BigRational::zero();
            for j in 1..=i {
                acc += &self.coeffs[j] * &out[i - j];
            }
            out[i] = -acc * &inv0;
        }
        Ok(ChowClass { n: self.n, coeffs: out })
    }

    /// Flips the sign of odd-codimension pieces.
    pub fn dual(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect();
        ChowClass { n: self.n, coeffs }
    }

    /// `⊗ O(d)`: divides the codimension-`i` piece by `(1 + dH)^i`.
    pub fn tensor(&self, d: i64) -> Self {
        let n = self.n;
        let inv = ChowClass::one_plus(n, d).inverse().expect("1 + dH is a unit");
        let mut acc = ChowClass::zero(n);
        let mut power = ChowClass::one(n);
        for i in 0..=n {
            if !self.coeffs[i].is_zero() {
                acc = &acc + &(&ChowClass::h_pow(n, i) * &power).scale(&self.coeffs[i]);
            }
            power = &power * &inv;
        }
        acc
    }

    /// Degree of the zero-dimensional piece.
    pub fn degree_zero(&self) -> &BigRational {
        &self.coeffs[self.n]
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer coefficients, or an error naming the first fractional one.
    pub fn to_integers(&self) -> Result<Vec<BigInt>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::NonIntegral(format!("coefficient of H^{i} is {c}")))
                }
            })
            .collect()
    }

    pub fn to_i64s(&self) -> Result<Vec<i64>> {
        self.to_integers()?
            .into_iter()
            .map(|b| b.to_i64().ok_or_else(|| Error::NonIntegral("coefficient exceeds 64 bits".into())))
            .collect()
    }

    /// Coefficients indexed by dimension: entry `k` multiplies `[P^k]`.
    pub fn by_dimension(&self) -> Vec<BigRational> {
        self.coeffs.iter().rev().cloned().collect()
    }
}

impl Add for &ChowClass {
    type Output = ChowClass;
    fn add(self, o: &ChowClass) -> ChowClass {
        assert_eq!(self.n, o.n, "classes on different projective spaces");
        ChowClass { n: self.n, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ChowClass {
    type Output = ChowClass;
    fn sub(self, o: &ChowClass) -> ChowClass {
        assert_eq!(self.n, o.n, "classes on different projective spaces");
        ChowClass { n: self.n, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &ChowClass {
    type Output = ChowClass;
    fn neg(self) -> ChowClass {
        ChowClass { n: self.n, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Mul for &ChowClass {
    type Output = ChowClass;
    fn mul(self, o: &ChowClass) -> ChowClass {
        assert_eq!(self.n, o.n, "classes on different projective spaces");
        let n = self.n;
        let mut c = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                c[i + j] += a * b;
            }
        }
        ChowClass { n, coeffs: c }
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for ChowClass {
    /// Written in the basis `[P^k]`, top dimension first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 0..=self.n {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let k = self.n - i;
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if !mag.is_one() {
                write!(f, "{}*", fmt_rational(&mag))?;
            }
            write!(f, "[P^{k}]")?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChowClass({self})")
    }
}
