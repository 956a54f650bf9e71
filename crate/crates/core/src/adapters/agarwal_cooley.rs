use crate::algebra::{Matrix, Scalar};
use crate::bilinear::{BilinearAlgorithm, ConvVariant};
use crate::error::{ConvError, Result};

/// CRT index split of `n = n₁n₂` with `e₁ ≡ (1, 0)` and `e₂ ≡ (0, 1)` modulo
/// `(n₁, n₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrtSplit {
    pub n1: usize,
    pub n2: usize,
    pub m1: usize,
    pub m2: usize,
    pub e1: usize,
    pub e2: usize,
}

impl CrtSplit {
    pub fn new(n1: usize, n2: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(ConvError::InvalidArgument(
                "CRT factors must be >= 1".into(),
            ));
        }
        let (g, x, y) = ext_gcd(n1 as i64, n2 as i64);
        if g != 1 {
            return Err(ConvError::NotCoprime(format!("gcd({n1}, {n2}) = {g}")));
        }
        let m1 = x.rem_euclid(n2 as i64) as usize;
        let m2 = y.rem_euclid(n1 as i64) as usize;
        let n = n1 * n2;
        Ok(Self {
            n1,
            n2,
            m1,
            m2,
            e1: (n2 * m2) % n.max(1),
            e2: (n1 * m1) % n.max(1),
        })
    }

    pub fn n(&self) -> usize {
        self.n1 * self.n2
    }

    /// Natural index for 2D position `(a, b)`.
    pub fn index(&self, a: usize, b: usize) -> usize {
        (a * self.e1 + b * self.e2) % self.n()
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Permutation `P` with `P_ij = 1` iff `j = (⌊i/n₂⌋e₁ + (i mod n₂)e₂) mod n`,
/// so `P·x` is the row-major 2D view of `x`.
pub fn crt_permutation<T: Scalar>(n1: usize, n2: usize) -> Result<(Matrix<T>, CrtSplit)> {
    let split = CrtSplit::new(n1, n2)?;
    let n = split.n();
    let p = Matrix::from_fn(n, n, |i, j| {
        if j == split.index(i / n2, i % n2) {
            T::one()
        } else {
            T::zero()
        }
    });
    Ok((p, split))
}

/// Cyclic convolution of length `n₁n₂` from cyclic algorithms of coprime
/// lengths: `(Pᵀ(A₁⊗A₂), Pᵀ(B₁⊗B₂), Pᵀ(C₁⊗C₂))`.
pub fn agarwal_cooley_nest<T: Scalar>(
    alg_n1: &BilinearAlgorithm<T>,
    alg_n2: &BilinearAlgorithm<T>,
) -> Result<BilinearAlgorithm<T>> {
    let (ConvVariant::Cyclic { n: n1 }, ConvVariant::Cyclic { n: n2 }) =
        (alg_n1.variant(), alg_n2.variant())
    else {
        return Err(ConvError::InvalidArgument(format!(
            "agarwal-cooley needs cyclic algorithms, got {} and {}",
            alg_n1.variant(),
            alg_n2.variant()
        )));
    };
    let (p, _) = crt_permutation::<T>(*n1, *n2)?;
    let pt = p.transpose();
    BilinearAlgorithm::new(
        pt.matmul(&alg_n1.a().kron(alg_n2.a()))?,
        pt.matmul(&alg_n1.b().kron(alg_n2.b()))?,
        pt.matmul(&alg_n1.c().kron(alg_n2.c()))?,
        ConvVariant::Cyclic { n: n1 * n2 },
        format!(
            "agarwal-cooley({}, {})",
            alg_n1.provenance(),
            alg_n2.provenance()
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_two_three() {
        let (p, s) = crt_permutation::<f64>(2, 3).unwrap();
        assert_eq!((s.e1, s.e2, s.m1, s.m2), (3, 4, 2, 1));
        let map: Vec<usize> = (0..6)
            .map(|i| (0..6).find(|&j| *p.get(i, j) == 1.0).unwrap())
            .collect();
        assert_eq!(map, vec![0, 4, 2, 3, 1, 5]);
        assert!(crt_permutation::<f64>(2, 4).is_err());
        let (id, _) = crt_permutation::<f64>(1, 5).unwrap();
        assert_eq!(id, Matrix::identity(5));
    }
}
