use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{Num, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

pub use num_complex::Complex64;

/// Exact rational with arbitrary-precision numerator and denominator.
///
/// `num_rational` keeps every value reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `num/den`.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Rational,
    Real,
    Complex,
}

impl Domain {
    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Rational => "rational",
            Domain::Real => "real",
            Domain::Complex => "complex",
        }
    }
}

/// Field element usable as a matrix or polynomial entry.
pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug + Send + Sync + 'static {
    const DOMAIN: Domain;

    /// Absolute value, as a double.
    fn magnitude(&self) -> f64;

    fn to_complex(&self) -> Complex64;

    fn from_i64(v: i64) -> Self;
}

/// Scalars that embed into the reals.
pub trait RealScalar: Scalar {
    fn to_f64(&self) -> f64;
}

impl Scalar for Rational {
    const DOMAIN: Domain = Domain::Rational;

    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(RealScalar::to_f64(self), 0.0)
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
}

impl RealScalar for Rational {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const DOMAIN: Domain = Domain::Real;

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl RealScalar for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Complex64 {
    const DOMAIN: Domain = Domain::Complex;

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
}
