use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::scalar::{Rational, Scalar};
use crate::error::{ConvError, Result};

/// Polynomial with coefficients in ascending degree.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has no
/// coefficients and `degree()` returns `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c·x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// Coefficients zero-padded (or truncated) to exactly `len` entries.
    pub fn padded(&self, len: usize) -> Vec<T> {
        (0..len).map(|i| self.coeff(i)).collect()
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }
}

impl Polynomial<Rational> {
    /// Euclidean division `p = q·m + ρ` with `deg ρ < deg m`.
    pub fn divmod(&self, m: &Self) -> Result<(Self, Self)> {
        let dm = m.degree().ok_or(ConvError::DivisionByZero)?;
        let lead = m.coeffs[dm].clone();
        let mut rem = self.coeffs.clone();
        let Some(dp) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if dp < dm {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); dp - dm + 1];
        for k in (0..=dp - dm).rev() {
            let c = rem[k + dm].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (i, mc) in m.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - c.clone() * mc.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dm);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, m: &Self) -> Result<Self> {
        Ok(self.divmod(m)?.1)
    }

    /// Monic normalization; returns the monic polynomial and the factor it
    /// was divided by.
    pub fn monic(&self) -> Result<(Self, Rational)> {
        let lead = self.leading().cloned().ok_or(ConvError::DivisionByZero)?;
        let inv = Rational::one() / lead.clone();
        Ok((self.scale(&inv), lead))
    }

    pub fn product<'a>(polys: impl IntoIterator<Item = &'a Self>) -> Self {
        polys.into_iter().fold(Self::one(), |acc, p| acc.mul(p))
    }

    /// Parses a `;`-separated list of polynomials, e.g. `"x^2+1; x; x-1/2"`.
    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        s.split(';')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl FromStr for Polynomial<Rational> {
    type Err = ConvError;

    /// Sum of terms `c*x^k`; `c` is an integer or `num/den`, the `*` and the
    /// coefficient are optional, `x` alone means `x^1`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ConvError::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);

        let mut coeffs: Vec<Rational> = Vec::new();
        for term in terms {
            let (c, k) = parse_term(term)?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] = coeffs[k].clone() + c;
        }
        Ok(Self::new(coeffs))
    }
}

fn parse_term(term: &str) -> Result<(Rational, usize)> {
    let bad = || ConvError::Parse(format!("malformed polynomial term '{term}'"));
    let (sign, body) = match term.as_bytes().first() {
        Some(b'+') => (1, &term[1..]),
        Some(b'-') => (-1, &term[1..]),
        _ => (1, term),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let (coef_str, power) = match body.find('x') {
        None => (body, 0),
        Some(pos) => {
            let rest = &body[pos + 1..];
            let power = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .and_then(|p| p.parse::<usize>().ok())
                    .ok_or_else(bad)?
            };
            let coef = body[..pos].strip_suffix('*').unwrap_or(&body[..pos]);
            (coef, power)
        }
    };
    let coef = if coef_str.is_empty() {
        Rational::one()
    } else {
        parse_rational(coef_str)?
    };
    Ok((coef * Rational::from_integer(BigInt::from(sign)), power))
}

/// Parses `"3"`, `"-1/2"`, or `"7/4"`.
pub(crate) fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || ConvError::Parse(format!("malformed rational '{s}'"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl fmt::Display for Polynomial<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = mag.is_one();
            match k {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "x")?,
                1 => write!(f, "{mag}*x")?,
                _ if unit => write!(f, "x^{k}")?,
                _ => write!(f, "{mag}*x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;

    fn p(s: &str) -> Polynomial<Rational> {
        s.parse().unwrap()
    }

    #[test]
    fn multiply_linear_factors() {
        assert_eq!(p("1+2x").mul(&p("3+4x")), p("3+10x+8x^2"));
        assert_eq!(p("x^2+1").mul(&Polynomial::one()), p("x^2+1"));
        assert!(p("x^2+1").mul(&Polynomial::zero()).is_zero());
    }

    #[test]
    fn divmod_examples() {
        let (q, r) = p("x^3").divmod(&p("x^2+1")).unwrap();
        assert_eq!((q, r), (p("x"), p("-x")));
        let (q, r) = p("x^2-1").divmod(&p("x-1")).unwrap();
        assert_eq!(q, p("x+1"));
        assert!(r.is_zero());
        let (q, r) = p("x+3").divmod(&p("x^2")).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, p("x+3"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            p("x").divmod(&Polynomial::zero()),
            Err(ConvError::DivisionByZero)
        ));
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(Polynomial::<Rational>::zero().degree(), None);
        assert_eq!(p("0").degree(), None);
        assert_eq!(p("7").degree(), Some(0));
    }

    #[test]
    fn parses_divisor_grammar() {
        assert_eq!(p("x+1/2").coeffs(), &[rational(1, 2), rational(1, 1)]);
        assert_eq!(p("2*x^3 - x").coeffs().len(), 4);
        assert_eq!(p("-x^2+1/4").coeff(0), rational(1, 4));
        let list = Polynomial::parse_list("x^2+1; x; x+1; x-1").unwrap();
        assert_eq!(list.len(), 4);
        assert!("x^".parse::<Polynomial<Rational>>().is_err());
        assert!("1/0".parse::<Polynomial<Rational>>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["x^2+1", "x-1/2", "-x", "2*x^3-x+5", "0"] {
            assert_eq!(p(s).to_string(), s);
            assert_eq!(p(&p(s).to_string()), p(s));
        }
    }
}
