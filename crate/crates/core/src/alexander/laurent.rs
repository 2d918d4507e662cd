//! Laurent polynomials in `t` with integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// `Σ coeffs[i] t^(low + i)`, with no zero coefficient at either end.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPolynomial {
    low: i64,
    coeffs: Vec<BigInt>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolynomialError {
    #[error("cannot parse polynomial term {term:?}")]
    Parse { term: String },
    #[error("division is not exact")]
    Inexact,
    #[error("division by zero polynomial")]
    DivisionByZero,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        LaurentPolynomial::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn monomial(c: BigInt, exponent: i64) -> Self {
        Self::from_coeffs(exponent, vec![c])
    }

    /// `t^exponent`.
    pub fn t_pow(exponent: i64) -> Self {
        Self::monomial(BigInt::one(), exponent)
    }

    pub fn from_coeffs(low: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = LaurentPolynomial { low, coeffs };
        p.trim();
        p
    }

    /// Coefficients of `c0 + c1 t + c2 t^2 + ...`.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(0, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low_degree(&self) -> i64 {
        self.low
    }

    pub fn high_degree(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    /// Span `high - low`; the degree after normalization.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, exponent: i64) -> BigInt {
        let i = exponent - self.low;
        if i < 0 || i as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Coefficients from the lowest exponent up.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Multiplies by `±t^k` so the lowest exponent is 0 and the leading
    /// coefficient is positive.
    pub fn normalized(&self) -> Self {
        let mut p = self.clone();
        p.low = 0;
        if p.leading().is_some_and(|c| c.is_negative()) {
            p = -p;
        }
        p
    }

    /// Value at `t = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Coefficient sequence reads the same reversed, up to an overall sign.
    pub fn is_symmetric(&self) -> bool {
        let rev: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        let neg: Vec<BigInt> = rev.iter().map(|c| -c).collect();
        rev == self.coeffs || neg == self.coeffs
    }

    /// Exact quotient `self / d`.
    pub fn div_exact(&self, d: &Self) -> Result<Self, PolynomialError> {
        if d.is_zero() {
            return Err(PolynomialError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let lead = d.leading().expect("nonzero");
        let mut rem = self.coeffs.clone();
        let dl = d.coeffs.len();
        if rem.len() < dl {
            return Err(PolynomialError::Inexact);
        }
        let mut q = vec![BigInt::zero(); rem.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let top = &rem[i + dl - 1];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(PolynomialError::Inexact);
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(PolynomialError::Inexact);
        }
        Ok(Self::from_coeffs(self.low - d.low, q))
    }

    /// Coefficients as JSON numbers (strings when they overflow `i64`).
    pub fn coefficients_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|c| match c.to_i64() {
                    Some(v) => serde_json::Value::from(v),
                    None => serde_json::Value::from(c.to_string()),
                })
                .collect(),
        )
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, o: &LaurentPolynomial) -> LaurentPolynomial {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let high = self.high_degree().max(o.high_degree());
        let coeffs = (low..=high).map(|e| self.coeff(e) + o.coeff(e)).collect();
        LaurentPolynomial::from_coeffs(low, coeffs)
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(mut self) -> LaurentPolynomial {
        for c in &mut self.coeffs {
            *c = -&*c;
        }
        self
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, o: &LaurentPolynomial) -> LaurentPolynomial {
        self + &(-o.clone())
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, o: &LaurentPolynomial) -> LaurentPolynomial {
        if self.is_zero() || o.is_zero() {
            return LaurentPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPolynomial::from_coeffs(self.low + o.low, coeffs)
    }
}

/// Ascending form: `2 - 3*t + 2*t^2`, with `t^-1` for negative powers.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.low + i as i64;
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let var = match e {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{e}"),
            };
            match (mag.is_one(), var.is_empty()) {
                (_, true) => write!(f, "{mag}")?,
                (true, false) => f.write_str(&var)?,
                (false, false) => write!(f, "{mag}*{var}")?,
            }
        }
        Ok(())
    }
}

/// Accepts `2 - 3*t + 2*t^2`, `2t^2 - 3t + 2`, `t^-1 + 1` and similar, in any
/// term order.
impl FromStr for LaurentPolynomial {
    type Err = PolynomialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(PolynomialError::Parse { term: s.into() });
        }
        // Split into signed terms, keeping a '-' that follows '^'.
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut prev = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && prev != Some('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
            prev = Some(ch);
        }
        terms.push(cur);
        let mut total = LaurentPolynomial::zero();
        for term in terms {
            total = &total + &parse_term(&term)?;
        }
        Ok(total)
    }
}

fn parse_term(term: &str) -> Result<LaurentPolynomial, PolynomialError> {
    let bad = || PolynomialError::Parse { term: term.into() };
    let (sign, body) = match term.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, term.strip_prefix('+').unwrap_or(term)),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let (coef_txt, var_txt) = match body.find('t') {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let coef_txt = coef_txt.strip_suffix('*').unwrap_or(coef_txt);
    let coef: BigInt = if coef_txt.is_empty() {
        if var_txt.is_none() {
            return Err(bad());
        }
        BigInt::one()
    } else {
        coef_txt.parse().map_err(|_| bad())?
    };
    let exponent = match var_txt {
        None => 0,
        Some("") => 1,
        Some(rest) => rest
            .strip_prefix('^')
            .unwrap_or(rest)
            .parse::<i64>()
            .map_err(|_| bad())?,
    };
    Ok(LaurentPolynomial::monomial(coef * sign, exponent))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("2t^2 - 3t + 2"), LaurentPolynomial::from_i64(&[2, -3, 2]));
        assert_eq!(p("2 - 3*t + 2*t^2").to_string(), "2 - 3*t + 2*t^2");
        assert_eq!(
            p("1 - 3t + 3t^2 - 3t^3 + t^4").to_string(),
            "1 - 3*t + 3*t^2 - 3*t^3 + t^4"
        );
        assert_eq!(p("t^-1 - 1 + t").low_degree(), -1);
        assert_eq!(p("-t").to_string(), "-t");
        assert_eq!(p("0"), LaurentPolynomial::zero());
        assert!("2x".parse::<LaurentPolynomial>().is_err());
        assert!("".parse::<LaurentPolynomial>().is_err());
    }

    #[test]
    fn normalization() {
        let q = p("-t^-2 + 3t^-1 - 1");
        assert_eq!(q.normalized(), p("1 - 3t + t^2"));
        assert_eq!(q.normalized().normalized(), q.normalized());
    }

    #[test]
    fn arithmetic() {
        let a = p("1 + t");
        let b = p("1 - t");
        assert_eq!(&a * &b, p("1 - t^2"));
        assert_eq!(&a - &a, LaurentPolynomial::zero());
        let num = p("t^6 - 1");
        assert_eq!(num.div_exact(&p("t^2 - 1")).unwrap(), p("1 + t^2 + t^4"));
        assert_eq!(num.div_exact(&p("t^4 - 1")), Err(PolynomialError::Inexact));
    }

    #[test]
    fn symmetry_and_value() {
        assert!(p("2 - 3t + 2t^2").is_symmetric());
        assert!(!p("2 - 5t + t^2").is_symmetric());
        assert_eq!(p("1 - 3t + t^2").eval_one(), BigInt::from(-1));
    }
}
