//! Integer polynomials in one variable: evaluation, resultants via
//! fraction-free elimination, and exact root extraction.
//!
//! Coefficients are stored in ascending degree order with trailing
//! zeros trimmed, so equal polynomials compare equal structurally.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{arith, Error, Result};

/// A polynomial with integer coefficients, ascending by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntegerPolynomial {
    /// Builds a polynomial from ascending coefficients, trimming
    /// trailing zeros.  An all-zero list gives the zero polynomial.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntegerPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntegerPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// Ascending coefficients without trailing zeros.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient().map_or(false, |c| c.is_one())
    }

    /// Horner evaluation at an integer.
    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> IntegerPolynomial {
        if self.coeffs.len() <= 1 {
            return IntegerPolynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect();
        IntegerPolynomial::new(coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> IntegerPolynomial {
        IntegerPolynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Writes the polynomial as `A x^n + B` if it has exactly that
    /// shape with `A`, `B` nonzero and `n >= 1`.
    pub fn as_binomial(&self) -> Option<(BigInt, BigInt)> {
        let deg = self.degree()?;
        if deg == 0 {
            return None;
        }
        let b = self.coeff(0);
        if b.is_zero() {
            return None;
        }
        for k in 1..deg {
            if !self.coeff(k).is_zero() {
                return None;
            }
        }
        Some((self.coeff(deg), b))
    }

    /// True when the polynomial has no repeated root over the
    /// algebraic closure.
    pub fn is_separable(&self) -> Result<bool> {
        match self.degree() {
            None => Err(Error::ZeroArgument),
            Some(0) => Ok(true),
            Some(_) => Ok(!resultant(self, &self.derivative())?.is_zero()),
        }
    }

    /// All integer roots, ascending.  Uses the rational root theorem:
    /// after stripping powers of `x`, an integer root divides the
    /// constant term.
    pub fn integer_roots(&self) -> Result<Vec<BigInt>> {
        if self.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let mut roots = Vec::new();
        let shift = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if shift > 0 {
            roots.push(BigInt::zero());
        }
        let reduced = IntegerPolynomial::new(self.coeffs[shift..].to_vec());
        if reduced.degree().unwrap_or(0) >= 1 {
            let c0 = reduced.constant_term();
            for d in arith::factor(&c0)?.divisors() {
                let d = BigInt::from(d);
                if reduced.evaluate(&d).is_zero() {
                    roots.push(d.clone());
                }
                let neg = -d;
                if reduced.evaluate(&neg).is_zero() {
                    roots.push(neg);
                }
            }
        }
        roots.sort();
        roots.dedup();
        Ok(roots)
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(out, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(out, " - ")?;
            } else {
                write!(out, " + ")?;
            }
            match k {
                0 => write!(out, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(out, "{mag}")?;
                    }
                    if k == 1 {
                        write!(out, "x")?;
                    } else {
                        write!(out, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &IntegerPolynomial {
    type Output = IntegerPolynomial;
    fn add(self, rhs: &IntegerPolynomial) -> IntegerPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        IntegerPolynomial::new(coeffs)
    }
}

impl Sub for &IntegerPolynomial {
    type Output = IntegerPolynomial;
    fn sub(self, rhs: &IntegerPolynomial) -> IntegerPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        IntegerPolynomial::new(coeffs)
    }
}

impl Mul for &IntegerPolynomial {
    type Output = IntegerPolynomial;
    fn mul(self, rhs: &IntegerPolynomial) -> IntegerPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntegerPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntegerPolynomial::new(coeffs)
    }
}

impl Neg for &IntegerPolynomial {
    type Output = IntegerPolynomial;
    fn neg(self) -> IntegerPolynomial {
        IntegerPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Resultant of `f` and `g` as the determinant of their Sylvester
/// matrix, computed by fraction-free Bareiss elimination.
///
/// Sign convention: `res(x, x - 5) = -5`, and swapping the arguments
/// multiplies by `(-1)^(deg f * deg g)`.
pub fn resultant(f: &IntegerPolynomial, g: &IntegerPolynomial) -> Result<BigInt> {
    let m = f.degree().ok_or(Error::ZeroArgument)?;
    let n = g.degree().ok_or(Error::ZeroArgument)?;
    if m == 0 {
        return Ok(f.constant_term().pow(n as u32));
    }
    if n == 0 {
        return Ok(g.constant_term().pow(m as u32));
    }

    let size = m + n;
    let mut matrix = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (k, c) in f.coeffs.iter().rev().enumerate() {
            matrix[row][row + k] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in g.coeffs.iter().rev().enumerate() {
            matrix[n + row][row + k] = c.clone();
        }
    }
    Ok(bareiss_determinant(matrix))
}

/// True when `f` and `g` have no common root over the algebraic
/// closure, i.e. their resultant is nonzero.
pub fn coprime_over_closure(f: &IntegerPolynomial, g: &IntegerPolynomial) -> Result<bool> {
    Ok(!resultant(f, g)?.is_zero())
}

fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Truncated integer `k`-th root (toward zero).  Errors for `k = 0`
/// and for even roots of negative numbers.
pub fn integer_nth_root(n: &BigInt, k: u32) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::ZeroArgument);
    }
    if n.is_negative() && k % 2 == 0 {
        return Err(Error::UnsupportedShape(format!(
            "even root of negative number {n}"
        )));
    }
    Ok(n.nth_root(k))
}

/// Exact `k`-th root: `Some(r)` with `r^k = n`, else `None`.  Even
/// `k` returns the nonnegative root.
pub fn perfect_power_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if k == 0 {
        return None;
    }
    if n.is_negative() && k % 2 == 0 {
        return None;
    }
    let r = n.nth_root(k);
    if r.pow(k) == *n {
        Some(r)
    } else {
        None
    }
}

/// Squares end in restricted residues mod 64; the table filters out
/// most non-squares before paying for a big-integer square root.
const SQUARE_MOD_64: [bool; 64] = {
    let mut t = [false; 64];
    let mut i = 0;
    while i < 64 {
        t[(i * i) % 64] = true;
        i += 1;
    }
    t
};

/// `Some(sqrt(n))` when `n` is a perfect square.
pub fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    if n.is_zero() {
        return Some(BigInt::zero());
    }
    let low = n.magnitude().iter_u64_digits().next().unwrap_or(0);
    if !SQUARE_MOD_64[(low & 63) as usize] {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Parses either a bracketed ascending coefficient list `[1,0,2]` or
/// a human form like `x^3 + x + 1` / `2x^2-3`.
pub fn parse_polynomial(text: &str) -> Result<IntegerPolynomial> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::PolynomialParse("empty input".into()));
    }
    if trimmed.starts_with('[') {
        parse_bracket_form(trimmed)
    } else {
        parse_human_form(trimmed)
    }
}

fn parse_bracket_form(text: &str) -> Result<IntegerPolynomial> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::PolynomialParse(format!("unbalanced brackets in {text:?}")))?;
    if inner.trim().is_empty() {
        return Err(Error::PolynomialParse("empty coefficient list".into()));
    }
    let mut coeffs = Vec::new();
    for piece in inner.split(',') {
        let piece = piece.trim();
        let c: BigInt = piece
            .parse()
            .map_err(|_| Error::PolynomialParse(format!("bad coefficient {piece:?}")))?;
        coeffs.push(c);
    }
    Ok(IntegerPolynomial::new(coeffs))
}

fn parse_human_form(text: &str) -> Result<IntegerPolynomial> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    if compact.is_empty() {
        return Err(Error::PolynomialParse("empty input".into()));
    }
    let mut terms: Vec<(BigInt, usize)> = Vec::new();
    let bytes = compact.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = BigInt::one();
        while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        }
        let digit_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let coeff_digits = &compact[digit_start..i];
        let has_var = i < bytes.len() && (bytes[i] == b'x' || bytes[i] == b'X');
        if !has_var && coeff_digits.is_empty() {
            return Err(Error::PolynomialParse(format!("bad term in {text:?}")));
        }
        let coeff: BigInt = if coeff_digits.is_empty() {
            BigInt::one()
        } else {
            coeff_digits
                .parse()
                .map_err(|_| Error::PolynomialParse(format!("bad coefficient in {text:?}")))?
        };
        let mut exp = 0usize;
        if has_var {
            i += 1;
            exp = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let e_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                exp = compact[e_start..i]
                    .parse()
                    .map_err(|_| Error::PolynomialParse(format!("bad exponent in {text:?}")))?;
                if exp > 1_000_000 {
                    return Err(Error::PolynomialParse("exponent too large".into()));
                }
            }
        }
        terms.push((sign * coeff, exp));
    }
    let top = terms.iter().map(|(_, e)| *e).max().unwrap_or(0);
    let mut coeffs = vec![BigInt::zero(); top + 1];
    for (c, e) in terms {
        coeffs[e] += c;
    }
    Ok(IntegerPolynomial::new(coeffs))
}
