use std::collections::BTreeMap;

use crate::algebra::{bezout_solve, mod_operator, toeplitz_of, Matrix, Polynomial, Rational};
use crate::bilinear::{BilinearAlgorithm, ConvVariant};
use crate::error::{ConvError, Result};

use super::toom::{small_integer_nodes, toom_cook};

/// Linear-convolution algorithms keyed by divisor degree, overriding the
/// defaults used inside [`winograd`].
pub type SubAlgorithms = BTreeMap<usize, BilinearAlgorithm<Rational>>;

/// Pairwise coprime divisor polynomials whose product `M` is the CRT modulus.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorSet {
    divisors: Vec<Polynomial<Rational>>,
}

impl DivisorSet {
    /// Checks that every divisor is nonconstant and every pair is coprime.
    pub fn new(divisors: Vec<Polynomial<Rational>>) -> Result<Self> {
        if divisors.is_empty() {
            return Err(ConvError::InvalidArgument("empty divisor set".into()));
        }
        for m in &divisors {
            if m.degree().unwrap_or(0) == 0 {
                return Err(ConvError::InvalidArgument(format!(
                    "divisor {m} must have degree >= 1"
                )));
            }
        }
        for (i, a) in divisors.iter().enumerate() {
            for b in &divisors[i + 1..] {
                bezout_solve(a, b)?;
            }
        }
        Ok(Self { divisors })
    }

    /// Parses `"x^2+1; x; x+1/2"`.
    pub fn parse(s: &str) -> Result<Self> {
        Self::new(Polynomial::parse_list(s)?)
    }

    pub fn divisors(&self) -> &[Polynomial<Rational>] {
        &self.divisors
    }

    pub fn total_degree(&self) -> usize {
        self.divisors.iter().filter_map(Polynomial::degree).sum()
    }

    pub fn modulus(&self) -> Polynomial<Rational> {
        Polynomial::product(&self.divisors)
    }
}

/// Divisor lists used for the Winograd rows of the cost tables and the
/// accuracy experiment, for `r = n` between 1 and 9. Each size extends the
/// previous list.
pub fn reference_divisors(n: usize) -> Result<DivisorSet> {
    const STEPS: [&str; 9] = [
        "x",
        "x^2+1; x",
        "x+1; x-1",
        "x+2; x-2",
        "x+1/2; x-1/2",
        "x+4; x-4",
        "x+1/4; x-1/4",
        "x^2+2",
        "x^2+1/2",
    ];
    if !(1..=9).contains(&n) {
        return Err(ConvError::Unsupported(format!(
            "no tabulated divisor list for n={n}"
        )));
    }
    let list = if n == 1 {
        STEPS[0].to_string()
    } else {
        STEPS[1..n].join("; ")
    };
    DivisorSet::parse(&list)
}

/// A divisor list of the given total degree: the tabulated list when the
/// degree is `2n − 1` for a tabulated `n`, otherwise `x² + 1` followed by
/// linear factors `x, x − 1, x + 1, x − 2, …`.
pub fn default_divisors(total_degree: usize) -> Result<DivisorSet> {
    const LINEAR: [&str; 15] = [
        "x", "x-1", "x+1", "x-2", "x+2", "x-1/2", "x+1/2", "x-4", "x+4", "x-3", "x+3", "x-1/4",
        "x+1/4", "x-3/2", "x+3/2",
    ];
    if total_degree % 2 == 1 && total_degree <= 17 {
        return reference_divisors(total_degree.div_ceil(2));
    }
    if total_degree < 2 || total_degree - 2 > LINEAR.len() {
        return Err(ConvError::Unsupported(format!(
            "no default divisor list of degree {total_degree}"
        )));
    }
    let mut list = vec!["x^2+1"];
    list.extend(&LINEAR[..total_degree - 2]);
    DivisorSet::parse(&list.join("; "))
}

fn default_sub_algorithm(degree: usize) -> Result<BilinearAlgorithm<Rational>> {
    if degree == 1 {
        let one = Matrix::identity(1);
        return BilinearAlgorithm::new(
            one.clone(),
            one.clone(),
            one,
            ConvVariant::Linear { r: 1, n: 1 },
            "scalar",
        );
    }
    toom_cook(degree, degree, &small_integer_nodes(2 * degree - 1))
}

/// Winograd's CRT algorithm for linear convolution: each divisor `m` gets a
/// linear-convolution sub-algorithm of size `deg m`, whose product is reduced
/// mod `m` and lifted back through the CRT idempotent `e = M/m · N mod M`.
pub fn winograd(
    r: usize,
    n: usize,
    divisors: &DivisorSet,
    sub_algs: Option<&SubAlgorithms>,
) -> Result<BilinearAlgorithm<Rational>> {
    if r == 0 || n == 0 {
        return Err(ConvError::InvalidArgument(
            "filter and input lengths must be >= 1".into(),
        ));
    }
    let deg_m = divisors.total_degree();
    if deg_m != n + r - 1 {
        return Err(ConvError::InvalidArgument(format!(
            "divisor degrees sum to {deg_m}, need n+r-1 = {}",
            n + r - 1
        )));
    }
    let big_m = divisors.modulus();
    let (mut a_blocks, mut b_blocks, mut c_blocks) = (Vec::new(), Vec::new(), Vec::new());
    for m in divisors.divisors() {
        let d = m.degree().expect("divisors are nonconstant");
        let sub = match sub_algs.and_then(|s| s.get(&d)) {
            Some(alg) => {
                if alg.variant() != &(ConvVariant::Linear { r: d, n: d }) {
                    return Err(ConvError::InvalidArgument(format!(
                        "sub-algorithm for degree {d} computes {}",
                        alg.variant()
                    )));
                }
                alg.clone()
            }
            None => default_sub_algorithm(d)?,
        };
        let cofactor = big_m.divmod(m)?.0;
        let (big_n, _) = bezout_solve(&cofactor, m)?;
        let e = cofactor.mul(&big_n).rem(&big_m)?;

        a_blocks.push(mod_operator(m, r - 1)?.transpose().matmul(sub.a())?);
        b_blocks.push(mod_operator(m, n - 1)?.transpose().matmul(sub.b())?);
        let residue = mod_operator(m, 2 * d - 2)?.matmul(sub.c())?;
        let lifted = toeplitz_of(&e.padded(deg_m), d)?.matmul(&residue)?;
        c_blocks.push(mod_operator(&big_m, deg_m + d - 2)?.matmul(&lifted)?);
    }
    let names: Vec<String> = divisors.divisors().iter().map(|m| m.to_string()).collect();
    BilinearAlgorithm::new(
        Matrix::hstack(&a_blocks)?,
        Matrix::hstack(&b_blocks)?,
        Matrix::hstack(&c_blocks)?,
        ConvVariant::Linear { r, n },
        format!("winograd(r={r}, n={n}, divisors=[{}])", names.join("; ")),
    )
}
