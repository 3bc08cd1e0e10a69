//! Exact integer and rational arithmetic: binomial coefficients, polynomials
//! in one variable with rational coefficients, and certificates that a
//! polynomial keeps one sign past a threshold.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact, non-negative hand count.
pub type Count = BigUint;

/// `C(n, k)`, zero when `n < k` or `n < 0`.
pub fn binom(n: i64, k: i64) -> Result<Count> {
    if k < 0 {
        return Err(Error::NegativeBinomial { n, k });
    }
    if n < k {
        return Ok(Count::zero());
    }
    let k = k.min(n - k);
    let mut acc = Count::one();
    for i in 0..k {
        // acc * (n - i) is divisible by i + 1 at every step
        acc = acc * Count::from((n - i) as u64) / Count::from((i + 1) as u64);
    }
    Ok(acc)
}

/// A polynomial with exact rational coefficients, lowest degree first.
///
/// The coefficient vector never has a trailing zero, so the zero polynomial
/// is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut p = RationalPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_integers(&[0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> BigRational {
        self.coeffs
            .get(degree)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// `(coefficient, degree)` of the leading term.
    pub fn leading(&self) -> Option<(BigRational, usize)> {
        let d = self.degree()?;
        Some((self.coeffs[d].clone(), d))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: &BigInt) -> BigRational {
        self.eval(&BigRational::from_integer(x.clone()))
    }

    /// `p(x + shift)`, by repeated synthetic division (Taylor shift).
    pub fn shift(&self, shift: &BigRational) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * shift;
                c[j] += t;
            }
        }
        Self::new(c)
    }

    /// Clears denominators: returns `(m, q)` with `m > 0` and integer
    /// polynomial `q = m * self`.
    pub fn to_integer_multiple(&self) -> (BigInt, Vec<BigInt>) {
        let m = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(m.clone())).to_integer())
            .collect();
        (m, ints)
    }
}

/// The degree-`k` polynomial `p` with `p(x) = C(a*x + b, k)` whenever
/// `a*x + b >= 0`.
pub fn binom_poly(a: i64, b: i64, k: u32) -> RationalPolynomial {
    let mut p = RationalPolynomial::from_integers(&[1]);
    for i in 0..i64::from(k) {
        p = p * RationalPolynomial::from_integers(&[b - i, a]);
    }
    let fact: BigInt = (1..=i64::from(k)).map(BigInt::from).product();
    p.scale(&BigRational::new(BigInt::one(), fact))
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolynomial::new(out)
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn neg(self) -> RationalPolynomial {
        RationalPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalPolynomial {
            type Output = RationalPolynomial;
            fn $m(self, rhs: RationalPolynomial) -> RationalPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        -&self
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match d {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => {}
                _ => write!(f, "{mag}*")?,
            }
            match d {
                0 => {}
                1 => f.write_str("r")?,
                _ => write!(f, "r^{d}")?,
            }
        }
        Ok(())
    }
}

/// How a sign-permanence certificate was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Criterion {
    /// Every nonzero coefficient of `p(x0 + y)` has the same sign and the
    /// constant term is nonzero, so `p` keeps that sign for all real `x >= x0`.
    ShiftedCoefficients,
    /// Every integer in `[x0, bound]` was evaluated, where `bound` is at or
    /// past the Cauchy root bound. Holds for integers only.
    IntegerSweep { bound: BigInt },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignCertificate {
    pub x0: BigInt,
    /// `Sign::Plus` or `Sign::Minus`, never `NoSign`.
    pub sign: Sign,
    pub criterion: Criterion,
}

/// Why a polynomial could not be certified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignFailure {
    ZeroPolynomial,
    /// `p(witness)` is zero or has the opposite sign of `p(x0)`.
    SignChange {
        witness: BigInt,
        value: BigRational,
    },
}

impl fmt::Display for SignFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignFailure::ZeroPolynomial => f.write_str("polynomial is identically zero"),
            SignFailure::SignChange { witness, value } => {
                write!(f, "sign change at r = {witness} (value {value})")
            }
        }
    }
}

/// Certifies that `p` has one strict sign for every `x >= x0`.
///
/// The shifted-coefficient test is tried first. When `p(x0 + y)` has mixed
/// coefficient signs, every integer from `x0` up to the Cauchy bound
/// `1 + max |a_i / a_d|` is evaluated instead; past that bound the sign is
/// that of the leading coefficient.
pub fn certify_sign_permanence(
    p: &RationalPolynomial,
    x0: &BigInt,
) -> std::result::Result<SignCertificate, SignFailure> {
    let Some((lead, degree)) = p.leading() else {
        return Err(SignFailure::ZeroPolynomial);
    };
    let shifted = p.shift(&BigRational::from_integer(x0.clone()));
    let at_x0 = shifted.coeff(0);
    if at_x0.is_zero() {
        return Err(SignFailure::SignChange {
            witness: x0.clone(),
            value: at_x0,
        });
    }
    let sign = sign_of(&at_x0);
    if shifted
        .coeffs()
        .iter()
        .all(|c| c.is_zero() || sign_of(c) == sign)
    {
        return Ok(SignCertificate {
            x0: x0.clone(),
            sign,
            criterion: Criterion::ShiftedCoefficients,
        });
    }

    let max_ratio = p.coeffs()[..degree]
        .iter()
        .map(|a| (a / &lead).abs())
        .max()
        .unwrap_or_else(BigRational::zero);
    let bound = (max_ratio + BigRational::one()).ceil().to_integer();

    // integer Horner on the cleared polynomial
    let (_, ints) = p.to_integer_multiple();
    let eval = |x: &BigInt| ints.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
    let mut x = x0.clone();
    while x <= bound {
        let v = eval(&x);
        if v.sign() != sign {
            return Err(SignFailure::SignChange {
                value: p.eval_int(&x),
                witness: x,
            });
        }
        x += 1;
    }
    if sign_of(&lead) != sign {
        // unreachable for a correct bound, kept as a hard check
        return Err(SignFailure::SignChange {
            value: p.eval_int(&x),
            witness: x,
        });
    }
    Ok(SignCertificate {
        x0: x0.clone(),
        sign,
        criterion: Criterion::IntegerSweep { bound },
    })
}

fn sign_of(c: &BigRational) -> Sign {
    if c.is_positive() {
        Sign::Plus
    } else if c.is_negative() {
        Sign::Minus
    } else {
        Sign::NoSign
    }
}

/// Converts an exact rational known to be a non-negative integer.
pub fn rational_to_count(q: &BigRational) -> Option<Count> {
    if !q.is_integer() || q.is_negative() {
        return None;
    }
    q.to_integer().to_biguint()
}

/// Formats a count with thousands separators, e.g. `133,784,560`.
pub fn group_digits(n: &Count) -> String {
    let s = n.to_string();
    let mut out = String::with_capacity(s.len() + s.len() / 3);
    for (i, ch) in s.chars().enumerate() {
        if i > 0 && (s.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}
