use crate::algebra::{dct1_matrix, dft_matrix, Complex64, Matrix};
use crate::bilinear::{BilinearAlgorithm, ConvVariant};
use crate::error::{ConvError, Result};
use crate::fastexec::linear_conv;

/// Cyclic convolution by the DFT: `(Dᵀ, Dᵀ, D⁻¹)`.
pub fn dft_cyclic_alg(n: usize) -> Result<BilinearAlgorithm<Complex64>> {
    let d = dft_matrix(n)?;
    let inv = d.map(|z| z.conj() / n as f64);
    BilinearAlgorithm::new(
        d.transpose(),
        d.transpose(),
        inv,
        ConvVariant::Cyclic { n },
        format!("dft-cyclic(n={n})"),
    )
}

/// Linear convolution by a size `n + r − 1` DFT; the zero padding of the
/// inputs is absorbed by keeping only the first `r` and `n` encoder rows.
pub fn dft_linear_alg(r: usize, n: usize) -> Result<BilinearAlgorithm<Complex64>> {
    if r == 0 || n == 0 {
        return Err(ConvError::InvalidArgument(
            "filter and input lengths must be >= 1".into(),
        ));
    }
    let size = n + r - 1;
    let cyc = dft_cyclic_alg(size)?;
    BilinearAlgorithm::new(
        cyc.a().row_range(0, r),
        cyc.b().row_range(0, n),
        cyc.c().clone(),
        ConvVariant::Linear { r, n },
        format!("dft-linear(r={r}, n={n})"),
    )
}

/// Linear convolution of two length-`n` vectors through a DCT-I embedding.
///
/// Both inputs are padded with `⌊n/2⌋+1` leading and `⌊3n/2⌋+2` trailing
/// zeros, transformed with `C_N`, multiplied, transformed back with
/// `(2/N)C_N`, and doubled; the convolution then sits in a window of length
/// `2n − 1`. The padding places the product's difference terms
/// `T_{|i−j|}` strictly below the window and keeps the sum terms clear of
/// the reflection at index `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct DctAlgorithm {
    n: usize,
    pre: usize,
    post: usize,
    window_start: usize,
    transform: Matrix<f64>,
    alg: BilinearAlgorithm<f64>,
}

impl DctAlgorithm {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn padding(&self) -> (usize, usize) {
        (self.pre, self.post)
    }

    /// Transform size `N`; padded vectors have `N + 1` entries.
    pub fn transform_size(&self) -> usize {
        self.n + self.pre + self.post - 1
    }

    /// First output index of the extracted window (0-based).
    pub fn window_start(&self) -> usize {
        self.window_start
    }

    /// The embedding collapsed into an ordinary linear-convolution triple of
    /// rank `N + 1`.
    pub fn algorithm(&self) -> &BilinearAlgorithm<f64> {
        &self.alg
    }

    /// Runs the embedding literally: pad, transform, multiply, invert, scale,
    /// and extract.
    pub fn apply_embedded(&self, f: &[f64], g: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.n || g.len() != self.n {
            return Err(ConvError::DimensionMismatch(format!(
                "dct embedding expects two vectors of length {}, got {} and {}",
                self.n,
                f.len(),
                g.len()
            )));
        }
        let big_n = self.transform_size();
        let pad = |v: &[f64]| {
            let mut out = vec![0.0; big_n + 1];
            out[self.pre..self.pre + self.n].copy_from_slice(v);
            out
        };
        let tf = self.transform.matvec(&pad(f))?;
        let tg = self.transform.matvec(&pad(g))?;
        let prod: Vec<f64> = tf.iter().zip(&tg).map(|(a, b)| a * b).collect();
        let back = self.transform.matvec(&prod)?;
        let scale = 2.0 * 2.0 / big_n as f64;
        Ok(back[self.window_start..self.window_start + 2 * self.n - 1]
            .iter()
            .map(|v| scale * v)
            .collect())
    }
}

fn dct_padding(n: usize) -> (usize, usize) {
    (n / 2 + 1, 3 * n / 2 + 2)
}

fn frozen_window_start(n: usize) -> usize {
    2 * (n / 2 + 1)
}

/// Searches every window offset of the embedded product against the direct
/// convolution of fixed probe inputs; returns all offsets that agree within
/// `1e-8` (relative).
pub fn calibrate_dct_window(n: usize) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(ConvError::InvalidArgument("dct size must be >= 1".into()));
    }
    let (pre, post) = dct_padding(n);
    let big_n = n + pre + post - 1;
    let c = dct1_matrix(big_n)?;
    let f: Vec<f64> = (0..n).map(|i| 1.0 + 0.37 * i as f64).collect();
    let g: Vec<f64> = (0..n).map(|i| 0.5 - 0.29 * (i * i) as f64).collect();
    let want = linear_conv(&f, &g)?;
    let norm = want.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
    let pad = |v: &[f64]| {
        let mut out = vec![0.0; big_n + 1];
        out[pre..pre + n].copy_from_slice(v);
        out
    };
    let tf = c.matvec(&pad(&f))?;
    let tg = c.matvec(&pad(&g))?;
    let prod: Vec<f64> = tf.iter().zip(&tg).map(|(a, b)| a * b).collect();
    let back: Vec<f64> = c
        .matvec(&prod)?
        .iter()
        .map(|v| 4.0 * v / big_n as f64)
        .collect();
    let len = 2 * n - 1;
    Ok((0..=back.len() - len)
        .filter(|&o| {
            let err: f64 = back[o..o + len]
                .iter()
                .zip(&want)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            err <= 1e-8 * norm
        })
        .collect())
}

/// Builds the DCT-I embedding for length-`n` inputs. The window offset is
/// the closed form `2⌊n/2⌋ + 2`, cross-checked against calibration.
pub fn dct_linear_alg(n: usize) -> Result<DctAlgorithm> {
    let found = calibrate_dct_window(n)?;
    let start = frozen_window_start(n);
    if found != [start] {
        return Err(ConvError::CalibrationFailed(format!(
            "dct window for n={n}: expected offset {start}, calibration found {found:?}"
        )));
    }
    let (pre, post) = dct_padding(n);
    let big_n = n + pre + post - 1;
    let c = dct1_matrix(big_n)?;
    let enc = c.col_range(pre, pre + n).transpose();
    let dec = c
        .row_range(start, start + 2 * n - 1)
        .scale(&(4.0 / big_n as f64));
    let alg = BilinearAlgorithm::new(
        enc.clone(),
        enc,
        dec,
        ConvVariant::Linear { r: n, n },
        format!("dct-linear(n={n})"),
    )?;
    Ok(DctAlgorithm {
        n,
        pre,
        post,
        window_start: start,
        transform: c,
        alg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinear::RealApply;

    #[test]
    fn dft_cyclic_small() {
        let alg = dft_cyclic_alg(2).unwrap();
        let y = alg.apply_real(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert!((y.values[0] - 11.0).abs() < 1e-12 && (y.values[1] - 10.0).abs() < 1e-12);
        assert!(y.max_imag < 1e-12);
    }

    #[test]
    fn dft_linear_small() {
        let alg = dft_linear_alg(2, 2).unwrap();
        let y = alg.apply_real(&[1.0, 2.0], &[3.0, 4.0]).unwrap().values;
        for (a, b) in y.iter().zip([3.0, 10.0, 8.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn dct_embedding_small() {
        let dct = dct_linear_alg(2).unwrap();
        assert_eq!(dct.padding(), (2, 5));
        let y = dct.apply_embedded(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        let z = dct.algorithm().apply(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        for ((a, b), w) in y.iter().zip(&z).zip([3.0, 10.0, 8.0]) {
            assert!((a - w).abs() < 1e-8 && (b - w).abs() < 1e-8);
        }
    }

    #[test]
    fn calibration_is_unique() {
        for n in 1..8 {
            assert_eq!(
                calibrate_dct_window(n).unwrap(),
                vec![frozen_window_start(n)]
            );
        }
    }
}
