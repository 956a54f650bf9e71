//! Error bounds for bilinear algorithms and the randomized accuracy
//! experiment comparing generators against direct summation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adapters::nested_toom;
use crate::algebra::{Complex64, Matrix, Scalar};
use crate::bilinear::{BilinearAlgorithm, Tensor};
use crate::error::{ConvError, Result};
use crate::fastexec::direct_conv_nd;
use crate::generators::{
    chebyshev_nodes, reference_divisors, small_integer_nodes, toom_cook, winograd,
};
use crate::par::{self, Execution};

const NORM_TOL: f64 = 1e-10;
const NORM_MAX_ITER: usize = 1000;

/// Result of a 2-norm estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    /// False when power iteration hit its cap; `value` is then the Frobenius
    /// norm, which still bounds the 2-norm from above.
    pub converged: bool,
}

/// Largest singular value by power iteration on `MᴴM`.
pub fn spectral_norm<T: Scalar>(m: &Matrix<T>) -> NormEstimate {
    let mc = m.to_complex();
    let frob = mc.frobenius_norm();
    if frob == 0.0 {
        return NormEstimate {
            value: 0.0,
            converged: true,
        };
    }
    let mh = mc.map(|z| z.conj()).transpose();
    let cols = mc.cols();
    // Deterministic start with no special alignment to any basis vector.
    let mut v: Vec<Complex64> = (0..cols)
        .map(|i| Complex64::new(1.0 + 0.1 * i as f64, 0.05 * ((i * 7) % 11) as f64))
        .collect();
    normalize(&mut v);
    let mut lambda = 0.0f64;
    for _ in 0..NORM_MAX_ITER {
        let mv = mc.matvec(&v).expect("shape checked");
        let mut w = mh.matvec(&mv).expect("shape checked");
        let next = norm2(&w);
        if next == 0.0 {
            return NormEstimate {
                value: 0.0,
                converged: true,
            };
        }
        for x in w.iter_mut() {
            *x /= next;
        }
        v = w;
        if (next - lambda).abs() <= NORM_TOL * next {
            return NormEstimate {
                value: next.sqrt(),
                converged: true,
            };
        }
        lambda = next;
    }
    NormEstimate {
        value: frob,
        converged: false,
    }
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let n = norm2(v);
    for x in v.iter_mut() {
        *x /= n;
    }
}

/// First-order perturbation bound and the quantities it is built from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorBound {
    pub value: f64,
    pub norm_a: f64,
    pub norm_b: f64,
    pub norm_c: f64,
    pub f_norm: f64,
    pub g_norm: f64,
    pub eps: f64,
    pub d: u32,
    pub overlap: bool,
    /// All three matrix norms came from converged power iterations.
    pub norms_converged: bool,
}

/// Unit roundoff of `f64`, for using the bound as a heuristic roundoff model.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// `2‖C‖ᵈ‖A‖ᵈ‖B‖ᵈ‖f‖‖g‖ε` for the `d`-fold nest of `alg`, times `2^{d/2}`
/// when the nest is composed by overlap-add.
pub fn error_bound<T: Scalar>(
    alg: &BilinearAlgorithm<T>,
    f_norm: f64,
    g_norm: f64,
    eps: f64,
    d: u32,
    overlap: bool,
) -> Result<ErrorBound> {
    if eps <= 0.0 || d == 0 {
        return Err(ConvError::InvalidArgument(
            "error bound needs eps > 0 and d >= 1".into(),
        ));
    }
    let (a, b, c) = (
        spectral_norm(alg.a()),
        spectral_norm(alg.b()),
        spectral_norm(alg.c()),
    );
    let di = d as i32;
    let mut value =
        2.0 * c.value.powi(di) * a.value.powi(di) * b.value.powi(di) * f_norm * g_norm * eps;
    if overlap {
        value *= 2f64.powf(d as f64 / 2.0);
    }
    Ok(ErrorBound {
        value,
        norm_a: a.value,
        norm_b: b.value,
        norm_c: c.value,
        f_norm,
        g_norm,
        eps,
        d,
        overlap,
        norms_converged: a.converged && b.converged && c.converged,
    })
}

/// Perturbs both inputs in random directions with `‖δf‖ = ε‖f‖`,
/// `‖δg‖ = ε‖g‖` and returns `‖alg(f+δf, g+δg) − alg(f, g)‖`.
pub fn perturbation_error(
    alg: &BilinearAlgorithm<f64>,
    f: &Tensor<f64>,
    g: &Tensor<f64>,
    eps: f64,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perturb = |t: &Tensor<f64>| -> Result<Tensor<f64>> {
        let dir: Vec<f64> = (0..t.data().len())
            .map(|_| rng.random::<f64>() * 2.0 - 1.0)
            .collect();
        let dn = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        let scale = if dn == 0.0 { 0.0 } else { eps * t.norm() / dn };
        Tensor::new(
            t.shape().to_vec(),
            t.data()
                .iter()
                .zip(&dir)
                .map(|(x, u)| x + scale * u)
                .collect(),
        )
    };
    let (pf, pg) = (perturb(f)?, perturb(g)?);
    let y = alg.apply_nd(f, g)?;
    let py = alg.apply_nd(&pf, &pg)?;
    Ok(py
        .data()
        .iter()
        .zip(y.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

/// Generators compared by the accuracy experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    ToomInteger,
    ToomChebyshev,
    Winograd,
    NestedToom,
}

impl Generator {
    pub const ALL: [Generator; 4] = [
        Generator::ToomInteger,
        Generator::ToomChebyshev,
        Generator::Winograd,
        Generator::NestedToom,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Generator::ToomInteger => "toom-integer",
            Generator::ToomChebyshev => "toom-chebyshev",
            Generator::Winograd => "winograd",
            Generator::NestedToom => "nested-toom",
        }
    }

    /// Overlap-add factors used for the nested generator.
    pub fn nesting(n: usize) -> Option<&'static [usize]> {
        match n {
            4 => Some(&[2, 2]),
            6 => Some(&[2, 3]),
            8 => Some(&[2, 2, 2]),
            9 => Some(&[3, 3]),
            _ => None,
        }
    }

    /// The `r = n` linear-convolution algorithm, converted to `f64`.
    pub fn build(self, n: usize) -> Result<BilinearAlgorithm<f64>> {
        if n == 0 {
            return Err(ConvError::InvalidArgument("size must be >= 1".into()));
        }
        match self {
            Generator::ToomInteger => {
                Ok(toom_cook(n, n, &small_integer_nodes(2 * n - 1))?.to_f64())
            }
            Generator::ToomChebyshev => toom_cook(n, n, &chebyshev_nodes(2 * n - 1)),
            Generator::Winograd => Ok(winograd(n, n, &reference_divisors(n)?, None)?.to_f64()),
            Generator::NestedToom => {
                let factors = Self::nesting(n).ok_or_else(|| {
                    ConvError::Unsupported(format!("no nested toom-cook split for n={n}"))
                })?;
                Ok(nested_toom(factors)?.to_f64())
            }
        }
    }
}

impl std::str::FromStr for Generator {
    type Err = ConvError;

    fn from_str(s: &str) -> Result<Self> {
        Generator::ALL
            .into_iter()
            .find(|g| g.id() == s)
            .ok_or_else(|| ConvError::InvalidArgument(format!("unknown generator '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub generators: Vec<Generator>,
    pub dims: Vec<usize>,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    /// Drop (generator, n) pairs the generator cannot build instead of failing.
    pub skip_inapplicable: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            generators: Generator::ALL.to_vec(),
            dims: vec![1, 2, 3],
            sizes: (2..=9).collect(),
            trials: 10,
            base_seed: 1,
            skip_inapplicable: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccuracyRecord {
    pub generator: String,
    pub d: usize,
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub rel_err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateRecord {
    pub generator: String,
    pub d: usize,
    pub n: usize,
    pub mean_rel_err: f64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the input pair at `(d, n, trial)`. The generator is deliberately
/// not mixed in, so every generator sees the same inputs.
pub fn trial_seed(base_seed: u64, d: usize, n: usize, trial: usize) -> u64 {
    let h = splitmix64(splitmix64(splitmix64(d as u64) ^ n as u64) ^ trial as u64);
    base_seed ^ h
}

/// Two cubical order-`d` tensors with entries uniform in `[0, 1)`, drawn
/// from ChaCha8 seeded with `seed` (filter first, then input).
pub fn random_inputs(d: usize, n: usize, seed: u64) -> Result<(Tensor<f64>, Tensor<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = n.pow(d as u32);
    let f: Vec<f64> = (0..len).map(|_| rng.random::<f64>()).collect();
    let g: Vec<f64> = (0..len).map(|_| rng.random::<f64>()).collect();
    Ok((Tensor::cubical(d, n, f)?, Tensor::cubical(d, n, g)?))
}

fn frob_rel_err(y: &Tensor<f64>, exact: &Tensor<f64>) -> f64 {
    let num: f64 = y
        .data()
        .iter()
        .zip(exact.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    num / exact.norm()
}

/// Runs every `(generator, d, n, trial)` cell. Records come back ordered by
/// generator (config order), then `d`, `n`, `trial`, independent of `exec`.
pub fn run_experiment(config: &ExperimentConfig, exec: Execution) -> Result<Vec<AccuracyRecord>> {
    if config
        .dims
        .iter()
        .any(|&d| d == 0 || d > crate::bilinear::DEFAULT_MAX_ORDER)
    {
        return Err(ConvError::InvalidArgument("dims must lie in 1..=4".into()));
    }
    let mut algs = Vec::new();
    for &gen in &config.generators {
        for &n in &config.sizes {
            match gen.build(n) {
                Ok(alg) => algs.push((gen, n, alg)),
                Err(ConvError::Unsupported(_)) if config.skip_inapplicable => {}
                Err(e) => return Err(e),
            }
        }
    }
    let cells: Vec<(usize, usize, usize)> = config
        .dims
        .iter()
        .flat_map(|&d| {
            config
                .sizes
                .iter()
                .flat_map(move |&n| (0..config.trials).map(move |t| (d, n, t)))
        })
        .collect();
    let per_cell = par::try_map(
        exec,
        cells,
        |(d, n, trial)| -> Result<Vec<AccuracyRecord>> {
            let seed = trial_seed(config.base_seed, d, n, trial);
            let (f, g) = random_inputs(d, n, seed)?;
            let exact = direct_conv_nd(&f, &g)?;
            algs.iter()
                .filter(|(_, an, _)| *an == n)
                .map(|(gen, _, alg)| {
                    let y = alg.apply_nd(&f, &g)?;
                    Ok(AccuracyRecord {
                        generator: gen.id().to_string(),
                        d,
                        n,
                        trial,
                        seed,
                        rel_err: frob_rel_err(&y, &exact),
                    })
                })
                .collect()
        },
    )?;
    let mut records: Vec<AccuracyRecord> = per_cell.into_iter().flatten().collect();
    let rank = |id: &str| config.generators.iter().position(|g| g.id() == id);
    records.sort_by_key(|r| (rank(&r.generator), r.d, r.n, r.trial));
    Ok(records)
}

/// Mean relative error per `(generator, d, n)`, in first-appearance order.
pub fn aggregate(records: &[AccuracyRecord]) -> Vec<AggregateRecord> {
    let mut out: Vec<(AggregateRecord, usize)> = Vec::new();
    for r in records {
        match out
            .iter_mut()
            .find(|(a, _)| a.generator == r.generator && a.d == r.d && a.n == r.n)
        {
            Some((a, count)) => {
                a.mean_rel_err += r.rel_err;
                *count += 1;
            }
            None => out.push((
                AggregateRecord {
                    generator: r.generator.clone(),
                    d: r.d,
                    n: r.n,
                    mean_rel_err: r.rel_err,
                },
                1,
            )),
        }
    }
    out.into_iter()
        .map(|(mut a, count)| {
            a.mean_rel_err /= count as f64;
            a
        })
        .collect()
}

/// Mean error for one cell of an aggregate table.
pub fn mean_error(agg: &[AggregateRecord], gen: Generator, d: usize, n: usize) -> Option<f64> {
    agg.iter()
        .find(|a| a.generator == gen.id() && a.d == d && a.n == n)
        .map(|a| a.mean_rel_err)
}

pub fn to_csv<S: Serialize>(rows: &[S]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| ConvError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapters::{overlap_add_matrix, OverlapShape};

    #[test]
    fn norms_of_simple_matrices() {
        let id: Matrix<f64> = Matrix::identity(4);
        assert!((spectral_norm(&id).value - 1.0).abs() < 1e-12);
        let diag: Matrix<f64> = Matrix::from_i64_rows(&[&[3, 0], &[0, 1]]);
        assert!((spectral_norm(&diag).value - 3.0).abs() < 1e-9);
        let q: Matrix<f64> = overlap_add_matrix(OverlapShape::new(2, 2).unwrap());
        assert!(spectral_norm(&q).value <= 2f64.sqrt() + 1e-9);
        assert_eq!(spectral_norm(&Matrix::<f64>::zeros(2, 2)).value, 0.0);
    }

    #[test]
    fn overlap_bound_coefficient() {
        let alg: BilinearAlgorithm<f64> = crate::generators::karatsuba().to_f64();
        let plain = error_bound(&alg, 1.0, 1.0, 1e-8, 2, false).unwrap();
        let ov = error_bound(&alg, 1.0, 1.0, 1e-8, 2, true).unwrap();
        assert!((ov.value / plain.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn experiment_is_deterministic() {
        let cfg = ExperimentConfig {
            dims: vec![1, 2],
            sizes: vec![2, 4],
            trials: 3,
            ..Default::default()
        };
        let a = run_experiment(&cfg, Execution::Sequential).unwrap();
        let b = run_experiment(&cfg, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        let small = aggregate(&a);
        assert!(mean_error(&small, Generator::ToomInteger, 1, 2).unwrap() < 1e-12);
    }
}
