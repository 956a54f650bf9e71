use crate::error::{ConvError, Result};

use super::counter::{NoCount, OpCount, OpCounter};

/// Hankel blocks at or below this size are multiplied directly.
pub const HANKEL_THRESHOLD: usize = 4;

/// Linear convolution of equal-length vectors as a symmetric Hankel
/// matrix-vector product `y = H(x)z`, with `x = [0ⁿ⁻¹, f, 0…]` and
/// `z = reverse(g)` zero-padded, evaluated by the three-product split
/// `y₁ = H(x₁−x₂)z₁ + H(x₂)(z₁+z₂)`, `y₂ = H(x₂)(z₁+z₂) + H(x₃−x₂)z₂`.
pub fn hankel_sym_conv(f: &[f64], g: &[f64]) -> Result<Vec<f64>> {
    hankel_impl(f, g, HANKEL_THRESHOLD, &mut NoCount)
}

/// As [`hankel_sym_conv`] with a configurable base-case size, also returning
/// the operation counts.
pub fn hankel_sym_conv_counted(
    f: &[f64],
    g: &[f64],
    threshold: usize,
) -> Result<(Vec<f64>, OpCount)> {
    let mut count = OpCount::default();
    let y = hankel_impl(f, g, threshold, &mut count)?;
    Ok((y, count))
}

fn hankel_impl<C: OpCounter>(
    f: &[f64],
    g: &[f64],
    threshold: usize,
    counter: &mut C,
) -> Result<Vec<f64>> {
    if f.is_empty() || g.is_empty() {
        return Err(ConvError::InvalidArgument(
            "empty convolution operand".into(),
        ));
    }
    if threshold == 0 {
        return Err(ConvError::InvalidArgument(
            "hankel threshold must be >= 1".into(),
        ));
    }
    let n = f.len().max(g.len());
    let out = f.len() + g.len() - 1;
    let m = (2 * n - 1).next_power_of_two();
    let mut x = vec![0.0; 2 * m - 1];
    x[n - 1..n - 1 + f.len()].copy_from_slice(f);
    let mut z = vec![0.0; m];
    for (j, &v) in g.iter().enumerate() {
        z[n - 1 - j] = v;
    }
    let y = hankel_mv(&x, &z, threshold, counter);
    Ok(y[..out].to_vec())
}

/// `H(x)·z` for the `m × m` Hankel matrix with `H_ij = x_{i+j}`.
fn hankel_mv<C: OpCounter>(x: &[f64], z: &[f64], threshold: usize, counter: &mut C) -> Vec<f64> {
    let m = z.len();
    if m <= threshold || m % 2 == 1 {
        counter.mults((m * m) as u64);
        counter.adds((m * (m - 1)) as u64);
        return (0..m)
            .map(|i| (0..m).map(|j| x[i + j] * z[j]).sum())
            .collect();
    }
    let k = m / 2;
    let block = |s: usize| &x[s * k..s * k + 2 * k - 1];
    let (x1, x2, x3) = (block(0), block(1), block(2));
    let (z1, z2) = z.split_at(k);
    let d1: Vec<f64> = x1.iter().zip(x2).map(|(a, b)| a - b).collect();
    let d3: Vec<f64> = x3.iter().zip(x2).map(|(a, b)| a - b).collect();
    let zs: Vec<f64> = z1.iter().zip(z2).map(|(a, b)| a + b).collect();
    counter.adds((2 * (2 * k - 1) + k) as u64);
    let p1 = hankel_mv(&d1, z1, threshold, counter);
    let p2 = hankel_mv(x2, &zs, threshold, counter);
    let p3 = hankel_mv(&d3, z2, threshold, counter);
    counter.adds((2 * k) as u64);
    p1.iter()
        .zip(&p2)
        .map(|(a, b)| a + b)
        .chain(p2.iter().zip(&p3).map(|(a, b)| a + b))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_product() {
        let y = hankel_sym_conv(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!(y, vec![3.0, 10.0, 8.0]);
        let y = hankel_sym_conv(&[1.0, 0.0, 0.0], &[5.0, 6.0, 7.0]).unwrap();
        assert_eq!(y, vec![5.0, 6.0, 7.0, 0.0, 0.0]);
    }

    #[test]
    fn multiplications_triple_per_doubling() {
        let count = |n: usize| {
            let v: Vec<f64> = (0..n).map(|i| i as f64 + 1.0).collect();
            hankel_sym_conv_counted(&v, &v, 4).unwrap().1.mults
        };
        assert_eq!(count(16), 9 * count(4));
        assert_eq!(count(8), 3 * count(4));
    }
}
