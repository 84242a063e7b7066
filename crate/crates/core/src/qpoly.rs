//! Exact polynomials in the deformation parameter `q`.
//!
//! Every amplitude produced by the Wick engine is an integer combination of
//! powers of `q`, and every representation coefficient is rational, so the
//! universal value type is a dense polynomial with [`BigRational`]
//! coefficients. Values are kept in canonical form (no trailing zero
//! coefficients) so that `==` is polynomial identity.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{QuonError, Result};

/// Polynomial in `q` with arbitrary-precision rational coefficients,
/// stored in ascending powers (index 0 is the constant term).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPolynomial {
    coeffs: Vec<BigRational>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The indeterminate `q` itself.
    pub fn q() -> Self {
        Self::monomial(1)
    }

    /// `q^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::one();
        Self { coeffs }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// Builds a polynomial from matching counts indexed by inversion number.
    pub fn from_counts(counts: &[u64]) -> Self {
        Self::from_coeffs(
            counts
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// The q-integer `[m]_q = 1 + q + ... + q^(m-1)`; zero for `m = 0`.
    pub fn q_integer(m: usize) -> Self {
        Self::from_coeffs(vec![BigRational::one(); m])
    }

    /// The q-factorial `[n]_q! = prod_{m=1..n} [m]_q`, the inversion-number
    /// generating function of the symmetric group.
    pub fn q_factorial(n: usize) -> Self {
        (1..=n).fold(Self::one(), |acc, m| &acc * &Self::q_integer(m))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `q^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Smallest power with a nonzero coefficient, or `None` for zero.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Exact Horner evaluation at a rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Floating-point Horner evaluation.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Substitutes `q -> q^m`, moving the coefficient of `q^k` to `q^(mk)`.
    pub fn pow_substitute(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(QuonError::contract("pow_substitute requires m >= 1"));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let mut coeffs = vec![BigRational::zero(); (self.coeffs.len() - 1) * m + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * m] = c.clone();
        }
        Ok(Self::from_coeffs(coeffs))
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Twists `q -> -q`.
    pub fn negate_variable(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// If `self = q^k * base` for some `k`, returns `k`.
    pub fn monomial_ratio(&self, base: &QPolynomial) -> Option<usize> {
        let (lo_self, lo_base) = (self.lowest_degree()?, base.lowest_degree()?);
        let k = lo_self.checked_sub(lo_base)?;
        (base.shift(k) == *self).then_some(k)
    }
}

impl Add<&QPolynomial> for &QPolynomial {
    type Output = QPolynomial;

    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        QPolynomial::from_coeffs(coeffs)
    }
}

impl Add for QPolynomial {
    type Output = QPolynomial;

    fn add(self, rhs: QPolynomial) -> QPolynomial {
        &self + &rhs
    }
}

impl AddAssign<&QPolynomial> for QPolynomial {
    fn add_assign(&mut self, rhs: &QPolynomial) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigRational::zero());
        }
        for (c, r) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *c += r;
        }
        self.trim();
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;

    fn neg(self) -> QPolynomial {
        QPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub<&QPolynomial> for &QPolynomial {
    type Output = QPolynomial;

    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        self + &(-rhs)
    }
}

impl Mul<&QPolynomial> for &QPolynomial {
    type Output = QPolynomial;

    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPolynomial::from_coeffs(coeffs)
    }
}

impl Mul for QPolynomial {
    type Output = QPolynomial;

    fn mul(self, rhs: QPolynomial) -> QPolynomial {
        &self * &rhs
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            let unit = magnitude.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{magnitude}")?,
                (_, true) => f.write_str("q")?,
                (_, false) => write!(f, "{magnitude}*q")?,
            }
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for QPolynomial {
    type Err = QuonError;

    /// Parses the rendering produced by `Display`; whitespace is ignored and
    /// repeated powers are summed.
    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(QuonError::parse(None, "empty polynomial"));
        }
        let bad = |msg: &str| QuonError::parse(None, format!("{msg} in polynomial {s:?}"));

        let mut terms: Vec<(bool, &str)> = Vec::new();
        let mut start = 0;
        let mut negative = false;
        let bytes = text.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            if b == b'+' || b == b'-' {
                if i > start {
                    terms.push((negative, &text[start..i]));
                } else if i > 0 {
                    return Err(bad("dangling sign"));
                }
                negative = b == b'-';
                start = i + 1;
            }
        }
        if start >= text.len() {
            return Err(bad("trailing sign"));
        }
        terms.push((negative, &text[start..]));

        let mut out = QPolynomial::zero();
        for (negative, term) in terms {
            let (coef_text, power) = match term.find('q') {
                None => (term, 0usize),
                Some(pos) => {
                    let coef = term[..pos].strip_suffix('*').unwrap_or(&term[..pos]);
                    if pos > 0 && coef.len() == pos {
                        return Err(bad("missing '*' before q"));
                    }
                    let rest = &term[pos + 1..];
                    let power = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .ok_or_else(|| bad("expected '^' after q"))?
                            .parse::<usize>()
                            .map_err(|_| bad("bad exponent"))?
                    };
                    (coef, power)
                }
            };
            let mut coef = if coef_text.is_empty() {
                if power == 0 {
                    return Err(bad("empty term"));
                }
                BigRational::one()
            } else {
                parse_rational(coef_text).ok_or_else(|| bad("bad coefficient"))?
            };
            if negative {
                coef = -coef;
            }
            out += &QPolynomial::monomial(power).scale(&coef);
        }
        Ok(out)
    }
}

/// Parses `"p"` or `"p/q"` (optionally signed) into a rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((n, d)) => {
            let n = n.parse::<BigInt>().ok()?;
            let d = d.parse::<BigInt>().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
    }
}
