//! Arbitrary-precision integer combinatorics and dense integer polynomials.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// `n choose k`, zero outside `0 <= k <= n`. Negative `n` is rejected.
pub fn binomial(n: i64, k: i64) -> Result<BigInt> {
    if n < 0 {
        return Err(Error::Domain(format!("binomial({n}, {k}): n must be non-negative")));
    }
    if k < 0 || k > n {
        return Ok(BigInt::zero());
    }
    Ok(choose(n as u64, k as u64))
}

/// `n choose k` for unsigned arguments, zero when `k > n`.
pub fn choose(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    // acc = C(n-k+j, j) after step j, always an integer
    for j in 1..=k {
        acc *= n - k + j;
        acc /= j;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, j| acc * j)
}

/// `x (x-1) ... (x-n+1)`; the empty product is 1.
pub fn falling_factorial(x: i64, n: u64) -> BigInt {
    (0..n).fold(BigInt::one(), |acc, j| acc * (BigInt::from(x) - j))
}

/// `x (x+1) ... (x+n-1)`; the empty product is 1.
pub fn rising_factorial(x: i64, n: u64) -> BigInt {
    (0..n).fold(BigInt::one(), |acc, j| acc * (BigInt::from(x) + j))
}

/// `numerator / denominator`, failing loudly if the remainder is nonzero.
pub fn exact_div(numerator: &BigInt, denominator: &BigInt, context: &str) -> Result<BigInt> {
    if denominator.is_zero() {
        return Err(Error::Invariant(format!("{context}: division by zero")));
    }
    let (q, r) = numerator.div_rem(denominator);
    if !r.is_zero() {
        return Err(Error::Invariant(format!(
            "{context}: {numerator} is not divisible by {denominator}"
        )));
    }
    Ok(q)
}

/// Dense polynomial in `t` with big-integer coefficients, lowest degree
/// first. Trailing zeros are always trimmed, so the zero polynomial has no
/// coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c t^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `t^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    /// `t^d p(1/t)`: the coefficient of `t^k` moves to `t^(d-k)`.
    pub fn reciprocal_shift(&self, d: usize) -> Result<Self> {
        match self.degree() {
            Some(deg) if deg > d => Err(Error::Domain(format!(
                "reciprocal shift by {d} of a polynomial of degree {deg}"
            ))),
            None => Ok(Self::zero()),
            Some(_) => {
                let mut coeffs = vec![BigInt::zero(); d + 1];
                for (k, c) in self.coeffs.iter().enumerate() {
                    coeffs[d - k] = c.clone();
                }
                Ok(Self::from_coeffs(coeffs))
            }
        }
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (j, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in rhs.coeffs.iter().enumerate() {
                coeffs[j + k] += a * b;
            }
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $method:ident),*) => {$(
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $method(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

/// Highest degree first, e.g. `t^3 - 6t^2 + 11t - 6`.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let unit = abs.is_one();
            match k {
                0 => write!(f, "{abs}")?,
                1 if unit => f.write_str("t")?,
                1 => write!(f, "{abs}t")?,
                _ if unit => write!(f, "t^{k}")?,
                _ => write!(f, "{abs}t^{k}")?,
            }
        }
        Ok(())
    }
}
