use std::fmt;
use std::str::FromStr;

use crate::algebra::{Matrix, Rational, Scalar};
use crate::bilinear::{BilinearAlgorithm, ConvVariant};
use crate::error::{ConvError, Result};

/// Literal algorithms selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedAlg {
    Karatsuba,
    Sparse3,
    Direct { r: usize, n: usize },
}

impl FromStr for FixedAlg {
    type Err = ConvError;

    /// `karatsuba`, `sparse3`, or `direct(r,n)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "karatsuba" => return Ok(FixedAlg::Karatsuba),
            "sparse3" => return Ok(FixedAlg::Sparse3),
            _ => {}
        }
        let inner = s
            .strip_prefix("direct(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| ConvError::InvalidArgument(format!("unknown fixed algorithm '{s}'")))?;
        let (r, n) = inner
            .split_once(',')
            .ok_or_else(|| ConvError::Parse(format!("expected direct(r,n), got '{s}'")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| ConvError::Parse(format!("bad size '{v}' in '{s}'")))
        };
        Ok(FixedAlg::Direct {
            r: parse(r)?,
            n: parse(n)?,
        })
    }
}

impl fmt::Display for FixedAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedAlg::Karatsuba => write!(f, "karatsuba"),
            FixedAlg::Sparse3 => write!(f, "sparse3"),
            FixedAlg::Direct { r, n } => write!(f, "direct({r},{n})"),
        }
    }
}

pub fn fixed_alg(which: FixedAlg) -> Result<BilinearAlgorithm<Rational>> {
    match which {
        FixedAlg::Karatsuba => Ok(karatsuba()),
        FixedAlg::Sparse3 => Ok(sparse3()),
        FixedAlg::Direct { r, n } => direct(r, n),
    }
}

/// Karatsuba's rank-3 algorithm in its subtraction form.
pub fn karatsuba() -> BilinearAlgorithm<Rational> {
    let enc: Matrix<Rational> = Matrix::from_i64_rows(&[&[1, 0], &[1, -1], &[0, 1]]).transpose();
    let dec = Matrix::from_i64_rows(&[&[1, 0, 0], &[1, -1, 1], &[0, 0, 1]]);
    BilinearAlgorithm::new(
        enc.clone(),
        enc,
        dec,
        ConvVariant::Linear { r: 2, n: 2 },
        "karatsuba",
    )
    .expect("literal karatsuba is well formed")
}

/// Sparse rank-6 algorithm for `r = n = 3`, built from pairwise sums.
pub fn sparse3() -> BilinearAlgorithm<Rational> {
    let enc: Matrix<Rational> = Matrix::from_i64_rows(&[
        &[1, 0, 0],
        &[0, 1, 0],
        &[0, 0, 1],
        &[1, 1, 0],
        &[1, 0, 1],
        &[0, 1, 1],
    ])
    .transpose();
    let dec = Matrix::from_i64_rows(&[
        &[1, 0, 0, 0, 0, 0],
        &[-1, -1, 0, 1, 0, 0],
        &[-1, 1, -1, 0, 1, 0],
        &[0, -1, -1, 0, 0, 1],
        &[0, 0, 1, 0, 0, 0],
    ]);
    BilinearAlgorithm::new(
        enc.clone(),
        enc,
        dec,
        ConvVariant::Linear { r: 3, n: 3 },
        "sparse3",
    )
    .expect("literal sparse3 is well formed")
}

/// The schoolbook algorithm: one product per pair `(i, j)`, column `i·n + j`.
pub fn direct<T: Scalar>(r: usize, n: usize) -> Result<BilinearAlgorithm<T>> {
    if r == 0 || n == 0 {
        return Err(ConvError::InvalidArgument(
            "filter and input lengths must be >= 1".into(),
        ));
    }
    let indicator = |b: bool| if b { T::one() } else { T::zero() };
    let rank = r * n;
    BilinearAlgorithm::new(
        Matrix::from_fn(r, rank, |i, l| indicator(l / n == i)),
        Matrix::from_fn(n, rank, |j, l| indicator(l % n == j)),
        Matrix::from_fn(n + r - 1, rank, |k, l| indicator(l / n + l % n == k)),
        ConvVariant::Linear { r, n },
        format!("direct(r={r}, n={n})"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;

    #[test]
    fn sparse3_matches_product() {
        let alg = sparse3();
        assert_eq!(alg.rank(), 6);
        assert_eq!(alg.residual(), 0.0);
        let q = |v: &[i64]| v.iter().map(|&x| rational(x, 1)).collect::<Vec<_>>();
        let y = alg.apply(&q(&[1, 2, 3]), &q(&[4, 5, 6])).unwrap();
        assert_eq!(y, q(&[4, 13, 28, 27, 18]));
    }

    #[test]
    fn direct_rank() {
        let alg = direct::<Rational>(2, 2).unwrap();
        assert_eq!(alg.rank(), 4);
        assert_eq!(alg.residual(), 0.0);
    }

    #[test]
    fn names_parse() {
        assert_eq!(
            "karatsuba".parse::<FixedAlg>().unwrap(),
            FixedAlg::Karatsuba
        );
        assert_eq!(
            "direct(3, 4)".parse::<FixedAlg>().unwrap(),
            FixedAlg::Direct { r: 3, n: 4 }
        );
        assert!("strassen".parse::<FixedAlg>().is_err());
    }
}
