use std::f64::consts::PI;
use std::fmt;

use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::poly::Polynomial;
use super::scalar::{Complex64, Rational, Scalar};
use crate::error::{ConvError, Result};

/// Interpolation node: a finite point or the point at infinity.
#[derive(Clone, Debug, PartialEq)]
pub enum Node<T> {
    Finite(T),
    Infinity,
}

impl<T: fmt::Display> fmt::Display for Node<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Finite(v) => write!(f, "{v}"),
            Node::Infinity => write!(f, "inf"),
        }
    }
}

/// Checks pairwise distinctness and that infinity, if present, is last.
pub(crate) fn check_nodes<T: Scalar>(nodes: &[Node<T>]) -> Result<()> {
    if let Some(pos) = nodes.iter().position(|n| *n == Node::Infinity) {
        if pos + 1 != nodes.len() {
            return Err(ConvError::InfinityNotLast);
        }
    }
    for (i, a) in nodes.iter().enumerate() {
        if nodes[i + 1..].contains(a) {
            return Err(ConvError::DuplicateNode(format!("{a:?}")));
        }
    }
    Ok(())
}

/// Lower-trapezoidal Toeplitz matrix `(len f + n - 1) × n` whose column `j`
/// is `f` shifted down by `j`, so that `toeplitz_of(f, n)·g = f ∗ g`.
pub fn toeplitz_of<T: Scalar>(f: &[T], n: usize) -> Result<Matrix<T>> {
    if f.is_empty() {
        return Err(ConvError::InvalidArgument("empty filter".into()));
    }
    if n == 0 {
        return Err(ConvError::InvalidArgument(
            "toeplitz width must be >= 1".into(),
        ));
    }
    Ok(toeplitz_unchecked(f, n))
}

pub(crate) fn toeplitz_unchecked<T: Scalar>(f: &[T], n: usize) -> Matrix<T> {
    let rows = (f.len() + n).saturating_sub(1);
    Matrix::from_fn(rows, n, |i, j| {
        if i >= j && i - j < f.len() {
            f[i - j].clone()
        } else {
            T::zero()
        }
    })
}

/// Circulant matrix with entry `(i, j) = f[(i - j) mod n]`.
pub fn circulant_of<T: Scalar>(f: &[T]) -> Result<Matrix<T>> {
    if f.is_empty() {
        return Err(ConvError::InvalidArgument("empty filter".into()));
    }
    let n = f.len();
    Ok(Matrix::from_fn(n, n, |i, j| f[(i + n - j) % n].clone()))
}

/// Truncated Vandermonde matrix, `num_rows × nodes.len()`, power-major:
/// entry `(i, l) = x_l^i`. The infinity column is zero except for a one in
/// the last row.
pub fn vandermonde<T: Scalar>(nodes: &[Node<T>], num_rows: usize) -> Result<Matrix<T>> {
    check_nodes(nodes)?;
    let mut m = Matrix::zeros(num_rows, nodes.len());
    for (l, node) in nodes.iter().enumerate() {
        match node {
            Node::Finite(x) => {
                let mut pow = T::one();
                for i in 0..num_rows {
                    m.set(i, l, pow.clone());
                    pow = pow * x.clone();
                }
            }
            Node::Infinity => {
                if num_rows > 0 {
                    m.set(num_rows - 1, l, T::one());
                }
            }
        }
    }
    Ok(m)
}

/// Square node-major Vandermonde matrix `Ṽ`: row `l` holds the powers of
/// node `l`; an infinity node contributes the row `e_{R-1}`.
pub fn square_vandermonde<T: Scalar>(nodes: &[Node<T>]) -> Result<Matrix<T>> {
    Ok(vandermonde(nodes, nodes.len())?.transpose())
}

/// Remainder operator `X_m^d`: a `deg m × (d+1)` matrix mapping the
/// coefficients of any degree-`d` polynomial to those of its residue mod `m`.
///
/// `m` is normalized to monic first; the residue does not depend on the
/// scaling of `m`. For `d < deg m` no reduction happens and the result is the
/// identity padded with zero rows.
pub fn mod_operator(m: &Polynomial<Rational>, d: usize) -> Result<Matrix<Rational>> {
    let (monic, _scale) = m.monic()?;
    let dm = monic.degree().expect("monic polynomial is nonzero");
    if d < dm {
        return Ok(Matrix::from_fn(dm, d + 1, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
    }
    let k = d - dm + 1;
    let t = toeplitz_unchecked(monic.coeffs(), k);
    let lower = t.row_range(0, dm);
    let upper = t.row_range(dm, d + 1);
    let reduction = lower.matmul(&upper.inverse()?)?;
    let mut x = Matrix::zeros(dm, d + 1);
    for i in 0..dm {
        x.set(i, i, Rational::one());
        for j in 0..k {
            x.set(i, dm + j, -reduction.get(i, j).clone());
        }
    }
    Ok(x)
}

/// Bézout cofactors: returns `(N̂, n̂)` with `M̂·N̂ + m̂·n̂ = 1`,
/// `deg N̂ < deg m̂`, `deg n̂ < deg M̂`, from the stacked-Toeplitz system
/// `[T_M̂ T_m̂]·[N̂; n̂] = e₀` solved exactly.
pub fn bezout_solve(
    big: &Polynomial<Rational>,
    small: &Polynomial<Rational>,
) -> Result<(Polynomial<Rational>, Polynomial<Rational>)> {
    let (Some(db), Some(ds)) = (big.degree(), small.degree()) else {
        return Err(ConvError::NotCoprime("zero polynomial".into()));
    };
    let size = db + ds;
    if size == 0 {
        // Both are nonzero constants.
        let inv = Rational::one() / big.coeff(0);
        return Ok((Polynomial::constant(inv), Polynomial::zero()));
    }
    let left = toeplitz_unchecked(big.coeffs(), ds);
    let right = toeplitz_unchecked(small.coeffs(), db);
    let system = match (ds, db) {
        (0, _) => right,
        (_, 0) => left,
        _ => Matrix::hstack(&[left, right])?,
    };
    debug_assert_eq!((system.rows(), system.cols()), (size, size));
    let mut rhs = vec![Rational::zero(); size];
    rhs[0] = Rational::one();
    let sol = system.solve(&rhs).map_err(|e| match e {
        ConvError::Singular => {
            ConvError::NotCoprime(format!("{big} and {small} share a common factor"))
        }
        other => other,
    })?;
    Ok((
        Polynomial::new(sol[..ds].to_vec()),
        Polynomial::new(sol[ds..].to_vec()),
    ))
}

/// DFT matrix with entry `(m, k) = ω^{mk}`, `ω = exp(-2πi/n)`.
pub fn dft_matrix(n: usize) -> Result<Matrix<Complex64>> {
    if n == 0 {
        return Err(ConvError::InvalidArgument("DFT size must be >= 1".into()));
    }
    Ok(Matrix::from_fn(n, n, |m, k| root_of_unity(n, (m * k) % n)))
}

/// `exp(-2πi·e/n)`, exact at the quarter turns.
pub(crate) fn root_of_unity(n: usize, e: usize) -> Complex64 {
    let e = e % n;
    if (4 * e).is_multiple_of(n) {
        return match 4 * e / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
    }
    let theta = -2.0 * PI * e as f64 / n as f64;
    Complex64::new(theta.cos(), theta.sin())
}

/// DCT-I matrix of size `(N+1) × (N+1)`: entry `(i, j) = ε_j cos(ijπ/N)`
/// with `ε_j = 1/2` at `j ∈ {0, N}` and `1` otherwise.
pub fn dct1_matrix(big_n: usize) -> Result<Matrix<f64>> {
    if big_n == 0 {
        return Err(ConvError::InvalidArgument("DCT size must be >= 1".into()));
    }
    Ok(Matrix::from_fn(big_n + 1, big_n + 1, |i, j| {
        let eps = if j == 0 || j == big_n { 0.5 } else { 1.0 };
        eps * cos_pi_frac((i * j) % (2 * big_n), big_n)
    }))
}

/// `cos(aπ/b)` with exact values at multiples of `π/2`.
fn cos_pi_frac(a: usize, b: usize) -> f64 {
    if (2 * a).is_multiple_of(b) {
        return match (2 * a / b) % 4 {
            0 => 1.0,
            1 | 3 => 0.0,
            _ => -1.0,
        };
    }
    (a as f64 * PI / b as f64).cos()
}
