//! Brute-force oracles and fast executors that never materialize dense
//! encoding or decoding matrices.

mod counter;
mod fft;
mod hankel;

pub use counter::{NoCount, OpCount, OpCounter};
pub use fft::{fft, fft_conv, fft_counted, ifft, FFT_BASE_COST};
pub use hankel::{hankel_sym_conv, hankel_sym_conv_counted, HANKEL_THRESHOLD};

use crate::algebra::Scalar;
use crate::bilinear::{conv_tensor, unravel, ConvVariant, Tensor, DEFAULT_MAX_ORDER};
use crate::error::{ConvError, Result};

/// Linear convolution by direct summation.
pub fn linear_conv<T: Scalar>(f: &[T], g: &[T]) -> Result<Vec<T>> {
    if f.is_empty() || g.is_empty() {
        return Err(ConvError::InvalidArgument(
            "empty convolution operand".into(),
        ));
    }
    let mut y = vec![T::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            y[i + j] = y[i + j].clone() + a.clone() * b.clone();
        }
    }
    Ok(y)
}

/// The summation formula of `variant`, term by term; the reference oracle.
pub fn direct_conv<T: Scalar>(f: &[T], g: &[T], variant: &ConvVariant) -> Result<Vec<T>> {
    if f.len() != variant.filter_len() || g.len() != variant.input_len() {
        return Err(ConvError::DimensionMismatch(format!(
            "{variant} takes lengths {} and {}, got {} and {}",
            variant.filter_len(),
            variant.input_len(),
            f.len(),
            g.len()
        )));
    }
    let out = variant.output_len();
    let mut y = vec![T::zero(); out];
    match variant {
        ConvVariant::Linear { .. } => return linear_conv(f, g),
        ConvVariant::Cyclic { n } => {
            for (k, yk) in y.iter_mut().enumerate() {
                for (i, a) in f.iter().enumerate() {
                    *yk = yk.clone() + a.clone() * g[(k + n - i) % n].clone();
                }
            }
        }
        ConvVariant::Correlation { .. } => {
            for (k, yk) in y.iter_mut().enumerate() {
                for (i, a) in f.iter().enumerate() {
                    *yk = yk.clone() + a.clone() * g[k + i].clone();
                }
            }
        }
        ConvVariant::Product(_) => {
            let t = conv_tensor(variant);
            for (i, a) in f.iter().enumerate() {
                for (j, b) in g.iter().enumerate() {
                    for (k, yk) in y.iter_mut().enumerate() {
                        if t.get(i, j, k) {
                            *yk = yk.clone() + a.clone() * b.clone();
                        }
                    }
                }
            }
        }
    }
    Ok(y)
}

/// `d`-dimensional linear convolution of cubical tensors by direct summation.
pub fn direct_conv_nd<T: Scalar>(f: &Tensor<T>, g: &Tensor<T>) -> Result<Tensor<T>> {
    let d = f.order();
    if d == 0 || d != g.order() {
        return Err(ConvError::DimensionMismatch(format!(
            "inputs have orders {} and {}",
            f.order(),
            g.order()
        )));
    }
    if d > DEFAULT_MAX_ORDER {
        return Err(ConvError::Unsupported(format!(
            "order {d} exceeds the limit of {DEFAULT_MAX_ORDER}"
        )));
    }
    let (Some(r), Some(n)) = (f.cubical_len(), g.cubical_len()) else {
        return Err(ConvError::DimensionMismatch(
            "inputs must be cubical".into(),
        ));
    };
    if r == 0 || n == 0 {
        return Err(ConvError::InvalidArgument(
            "empty convolution operand".into(),
        ));
    }
    let out_len = r + n - 1;
    let mut out = vec![T::zero(); out_len.pow(d as u32)];
    let (mut fi, mut gi) = (vec![0; d], vec![0; d]);
    for (a_idx, a) in f.data().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        unravel(a_idx, f.shape(), &mut fi);
        for (b_idx, b) in g.data().iter().enumerate() {
            unravel(b_idx, g.shape(), &mut gi);
            let k = fi
                .iter()
                .zip(&gi)
                .fold(0, |acc, (x, z)| acc * out_len + x + z);
            out[k] = out[k].clone() + a.clone() * b.clone();
        }
    }
    Tensor::new(vec![out_len; d], out)
}

/// `‖a − b‖₂ / ‖b‖₂`, or the absolute error when `b` is zero.
pub fn relative_error<T: Scalar>(a: &[T], b: &[T]) -> f64 {
    let num: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x.clone() - y.clone()).magnitude().powi(2))
        .sum::<f64>()
        .sqrt();
    let den: f64 = b.iter().map(|y| y.magnitude().powi(2)).sum::<f64>().sqrt();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_examples() {
        let lin = direct_conv(
            &[1.0, 2.0],
            &[3.0, 4.0, 5.0],
            &ConvVariant::Linear { r: 2, n: 3 },
        );
        assert_eq!(lin.unwrap(), vec![3.0, 10.0, 13.0, 10.0]);
        let cyc = direct_conv(&[1.0, 2.0], &[3.0, 4.0], &ConvVariant::Cyclic { n: 2 });
        assert_eq!(cyc.unwrap(), vec![11.0, 10.0]);
        let cor = direct_conv(
            &[1.0, 2.0],
            &[3.0, 4.0, 5.0],
            &ConvVariant::Correlation { r: 2, n_out: 2 },
        );
        assert_eq!(cor.unwrap(), vec![11.0, 14.0]);
        assert!(direct_conv(&[1.0], &[1.0, 2.0], &ConvVariant::Cyclic { n: 2 }).is_err());
    }

    #[test]
    fn nd_examples() {
        let ones = Tensor::new(vec![2, 2], vec![1.0; 4]).unwrap();
        let y = direct_conv_nd(&ones, &ones).unwrap();
        assert_eq!(y.data(), &[1.0, 2.0, 1.0, 2.0, 4.0, 2.0, 1.0, 2.0, 1.0]);
        let unit = Tensor::new(vec![1, 1], vec![1.0]).unwrap();
        assert_eq!(direct_conv_nd(&unit, &ones).unwrap(), ones);
        let big = Tensor::new(vec![1; 5], vec![1.0]).unwrap();
        assert!(direct_conv_nd(&big, &big).is_err());
    }
}
