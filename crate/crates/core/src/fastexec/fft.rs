use crate::algebra::root_of_unity;
use crate::algebra::Complex64;
use crate::error::{ConvError, Result};

use super::counter::{NoCount, OpCount, OpCounter};

/// Charge for a size-2 transform as `(add-pairs, mults)`. With this base the
/// counts satisfy `T(n) = 2T(n/2) + (n/2, n/2)` and the closed form
/// `(n(log n − 1)/2, n log n / 2)`.
pub const FFT_BASE_COST: (u64, u64) = (0, 1);

/// Radix-2 decimation-in-time FFT, `X_k = Σ x_j ω^{jk}`, `ω = exp(−2πi/n)`.
pub fn fft(x: &[Complex64]) -> Result<Vec<Complex64>> {
    check_pow2(x.len())?;
    Ok(fft_rec(x, &mut NoCount))
}

/// FFT plus its butterfly-level operation counts: each butterfly is one
/// complex multiplication by a twiddle and one add/subtract pair.
pub fn fft_counted(x: &[Complex64]) -> Result<(Vec<Complex64>, OpCount)> {
    check_pow2(x.len())?;
    let mut count = OpCount::default();
    let y = fft_rec(x, &mut count);
    Ok((y, count))
}

/// Inverse FFT as `conj(fft(conj(x))) / n`.
pub fn ifft(x: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = x.len() as f64;
    let conj: Vec<Complex64> = x.iter().map(|z| z.conj()).collect();
    Ok(fft(&conj)?.into_iter().map(|z| z.conj() / n).collect())
}

fn check_pow2(n: usize) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(ConvError::InvalidArgument(format!(
            "fft length {n} is not a power of two"
        )));
    }
    Ok(())
}

fn fft_rec<C: OpCounter>(x: &[Complex64], counter: &mut C) -> Vec<Complex64> {
    let n = x.len();
    match n {
        1 => return vec![x[0]],
        2 => {
            counter.adds(FFT_BASE_COST.0);
            counter.mults(FFT_BASE_COST.1);
            return vec![x[0] + x[1], x[0] - x[1]];
        }
        _ => {}
    }
    let even: Vec<Complex64> = x.iter().step_by(2).copied().collect();
    let odd: Vec<Complex64> = x.iter().skip(1).step_by(2).copied().collect();
    let e = fft_rec(&even, counter);
    let o = fft_rec(&odd, counter);
    let half = n / 2;
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..half {
        let t = root_of_unity(n, k) * o[k];
        y[k] = e[k] + t;
        y[k + half] = e[k] - t;
    }
    counter.adds(half as u64);
    counter.mults(half as u64);
    y
}

/// Linear convolution through power-of-two FFTs.
pub fn fft_conv(f: &[f64], g: &[f64]) -> Result<Vec<f64>> {
    if f.is_empty() || g.is_empty() {
        return Err(ConvError::InvalidArgument(
            "empty convolution operand".into(),
        ));
    }
    let out = f.len() + g.len() - 1;
    let size = out.next_power_of_two();
    let pad = |v: &[f64]| {
        let mut p = vec![Complex64::new(0.0, 0.0); size];
        for (slot, &x) in p.iter_mut().zip(v) {
            *slot = Complex64::new(x, 0.0);
        }
        p
    };
    let ff = fft(&pad(f))?;
    let gg = fft(&pad(g))?;
    let prod: Vec<Complex64> = ff.iter().zip(&gg).map(|(a, b)| a * b).collect();
    Ok(ifft(&prod)?.into_iter().take(out).map(|z| z.re).collect())
}
