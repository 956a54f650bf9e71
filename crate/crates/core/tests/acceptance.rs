//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N: PASS|FAIL` line (run with `--nocapture` to see them).

use convalg::accuracy::{
    aggregate, error_bound, mean_error, perturbation_error, run_experiment, ExperimentConfig,
    Generator,
};
use convalg::adapters::{
    agarwal_cooley_nest, low_rank_conv2d, nested_toom, overlap_add_nest, small_filter_conv,
    RankFactors2D,
};
use convalg::algebra::dft_matrix;
use convalg::cost::{cnn_layer_cost, fft_cost, table_report, CnnLayerDims, Table, TableReport};
use convalg::fastexec::{
    direct_conv, direct_conv_nd, fft, fft_counted, hankel_sym_conv_counted, linear_conv,
    relative_error,
};
use convalg::generators::{
    chebyshev_nodes, dct_linear_alg, default_divisors, dft_cyclic_alg, dft_linear_alg, direct,
    karatsuba, reference_divisors, small_integer_nodes, sparse3, toom_cook, winograd,
};
use convalg::par::Execution;
use convalg::{AnyAlgorithm, BilinearAlgorithm, Complex64, ConvVariant, RealApply, Tensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: u32, title: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("\ncriterion {id}: PASS ({title})");
    } else {
        println!("\ncriterion {id}: FAIL ({title}): {}", failures.join("; "));
    }
    assert!(failures.is_empty(), "criterion {id} failed: {failures:#?}");
}

fn uniform(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect()
}

fn table_failures(report: &TableReport, ranks: &[usize]) -> Vec<String> {
    let mut out = Vec::new();
    let got: Vec<usize> = report.rows.iter().map(|r| r.cost.rank).collect();
    if got != ranks {
        out.push(format!("ranks {got:?}, expected {ranks:?}"));
    }
    for row in report.rows.iter().filter(|r| !r.matches()) {
        let e = row
            .expected
            .expect("every tabulated row has reference values");
        let (a, c) = (row.cost.a, row.cost.c);
        out.push(format!(
            "{}: A=({},{},{}) C=({},{},{}), reference A=({},{},{}) C=({},{},{})",
            row.label,
            a.nnz,
            a.adds,
            a.mults,
            c.nnz,
            c.adds,
            c.mults,
            e.a.nnz,
            e.a.adds,
            e.a.mults,
            e.c.nnz,
            e.c.adds,
            e.c.mults
        ));
    }
    out
}

#[test]
fn criterion_01_toom_cook_table() {
    let report = table_report(Table::Toom).unwrap();
    verdict(
        1,
        "toom-cook cost table, n = 2..9",
        &table_failures(&report, &[3, 5, 7, 9, 11, 13, 15, 17]),
    );
}

#[test]
fn criterion_02_winograd_table() {
    let report = table_report(Table::Winograd).unwrap();
    verdict(
        2,
        "winograd cost table, n = 2..9",
        &table_failures(&report, &[4, 6, 8, 10, 12, 14, 17, 20]),
    );
}

#[test]
fn criterion_03_nested_table() {
    let report = table_report(Table::Nested).unwrap();
    verdict(
        3,
        "nested toom-cook cost table",
        &table_failures(&report, &[9, 15, 21, 27, 25]),
    );
}

#[test]
fn criterion_04_tensor_validation() {
    let mut failures = Vec::new();
    let mut rational: Vec<BilinearAlgorithm<convalg::Rational>> = vec![karatsuba(), sparse3()];
    for r in 1..=9 {
        for n in 1..=9 {
            rational.push(toom_cook(r, n, &small_integer_nodes(n + r - 1)).unwrap());
        }
    }
    for n in 1..=9 {
        rational.push(winograd(n, n, &reference_divisors(n).unwrap(), None).unwrap());
    }
    for (r, n) in [(2, 3), (3, 5), (4, 2), (6, 6)] {
        rational.push(winograd(r, n, &default_divisors(n + r - 1).unwrap(), None).unwrap());
        rational.push(direct(r, n).unwrap());
    }
    for nest in [&[2, 2][..], &[2, 3], &[2, 4], &[2, 2, 2], &[3, 3]] {
        rational.push(nested_toom(nest).unwrap());
    }
    rational.push(
        toom_cook(3, 4, &small_integer_nodes(6))
            .unwrap()
            .interchange()
            .unwrap(),
    );
    for alg in &rational {
        let res = alg.residual();
        if res != 0.0 {
            failures.push(format!("{}: residual {res:e}", alg.provenance()));
        }
    }
    let mut spectral: Vec<AnyAlgorithm> = Vec::new();
    for n in 1..=16 {
        spectral.push(dft_cyclic_alg(n).unwrap().into());
        spectral.push(dct_linear_alg(n).unwrap().algorithm().clone().into());
    }
    for r in 1..=8 {
        for n in 1..=17 - r {
            spectral.push(dft_linear_alg(r, n).unwrap().into());
        }
    }
    let mut worst = 0.0f64;
    for alg in &spectral {
        let res = alg.residual();
        worst = worst.max(res);
        if res >= 1e-12 {
            failures.push(format!(
                "{} {}: residual {res:e}",
                alg.provenance(),
                alg.variant()
            ));
        }
    }
    println!(
        "  {} rational algorithms exact, {} spectral algorithms, worst residual {worst:e}",
        rational.len(),
        spectral.len()
    );
    verdict(4, "tensor validation", &failures);
}

#[test]
fn criterion_05_oracle_equivalence() {
    let mut algs: Vec<(String, AnyAlgorithm)> = Vec::new();
    for r in 1..=6 {
        for n in 1..=6 {
            algs.push((
                "toom-integer".into(),
                toom_cook(r, n, &small_integer_nodes(n + r - 1))
                    .unwrap()
                    .into(),
            ));
            algs.push((
                "toom-chebyshev".into(),
                toom_cook(r, n, &chebyshev_nodes(n + r - 1)).unwrap().into(),
            ));
            algs.push((
                "winograd".into(),
                winograd(r, n, &default_divisors(n + r - 1).unwrap(), None)
                    .unwrap()
                    .into(),
            ));
            algs.push(("dft-linear".into(), dft_linear_alg(r, n).unwrap().into()));
            algs.push(("direct".into(), direct::<f64>(r, n).unwrap().into()));
        }
        algs.push(("dft-cyclic".into(), dft_cyclic_alg(r).unwrap().into()));
        algs.push((
            "dct".into(),
            dct_linear_alg(r).unwrap().algorithm().clone().into(),
        ));
    }
    algs.push(("karatsuba".into(), karatsuba().into()));
    algs.push(("sparse3".into(), sparse3().into()));
    for nest in [&[2, 2][..], &[2, 3]] {
        algs.push(("nested-toom".into(), nested_toom(nest).unwrap().into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    let mut worst = (0.0f64, 0.0f64);
    for (name, alg) in &algs {
        let v = alg.variant().clone();
        let complex = alg.domain() == convalg::Domain::Complex;
        let tol = if complex { 1e-9 } else { 1e-10 };
        for _ in 0..100 {
            let f = uniform(&mut rng, v.filter_len());
            let g = uniform(&mut rng, v.input_len());
            let y = alg.apply_real(&f, &g).unwrap().values;
            let exact = direct_conv(&f, &g, &v).unwrap();
            let err = relative_error(&y, &exact);
            let slot = if complex { &mut worst.1 } else { &mut worst.0 };
            *slot = slot.max(err);
            if err >= tol {
                failures.push(format!("{name} {v}: rel err {err:e}"));
                break;
            }
        }
    }
    println!(
        "  {} algorithms x 100 trials, worst rel err real {:e}, complex {:e}",
        algs.len(),
        worst.0,
        worst.1
    );
    verdict(5, "oracle equivalence, r, n <= 6", &failures);
}

#[test]
fn criterion_06_accuracy_orderings() {
    let config = ExperimentConfig {
        dims: vec![2, 3],
        sizes: (4..=9).collect(),
        ..ExperimentConfig::default()
    };
    assert_eq!(config.trials, 10);
    let agg = aggregate(&run_experiment(&config, Execution::default()).unwrap());
    let mean = |g, d, n| mean_error(&agg, g, d, n).unwrap();
    let mut failures = Vec::new();
    let series: Vec<f64> = (4..=9)
        .map(|n| mean(Generator::ToomInteger, 3, n))
        .collect();
    if series.windows(2).any(|w| w[1] < w[0]) {
        failures.push(format!("toom-integer d=3 not non-decreasing: {series:?}"));
    }
    for (d, n) in [(2, 7), (2, 8), (2, 9), (3, 7), (3, 8)] {
        let (w, c, i) = (
            mean(Generator::Winograd, d, n),
            mean(Generator::ToomChebyshev, d, n),
            mean(Generator::ToomInteger, d, n),
        );
        if !(w < c && c < i) {
            failures.push(format!(
                "d={d} n={n}: winograd {w:.2e}, chebyshev {c:.2e}, integer {i:.2e}"
            ));
        }
    }
    for (d, n) in [(2, 8), (2, 9), (3, 8), (3, 9)] {
        let (nested, i) = (
            mean(Generator::NestedToom, d, n),
            mean(Generator::ToomInteger, d, n),
        );
        if nested >= i {
            failures.push(format!(
                "d={d} n={n}: nested {nested:.2e} >= integer {i:.2e}"
            ));
        }
    }
    verdict(6, "accuracy orderings, 10 trials, base seed 1", &failures);
}

#[test]
fn criterion_07_error_bounds() {
    let pool: Vec<BilinearAlgorithm<f64>> = vec![
        karatsuba().to_f64(),
        sparse3().to_f64(),
        toom_cook(2, 2, &small_integer_nodes(3)).unwrap().to_f64(),
        toom_cook(3, 3, &small_integer_nodes(5)).unwrap().to_f64(),
        toom_cook(4, 4, &chebyshev_nodes(7)).unwrap(),
        toom_cook(3, 4, &small_integer_nodes(6)).unwrap().to_f64(),
        winograd(3, 3, &reference_divisors(3).unwrap(), None)
            .unwrap()
            .to_f64(),
        winograd(4, 4, &reference_divisors(4).unwrap(), None)
            .unwrap()
            .to_f64(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = Vec::new();
    let mut worst_ratio = 0.0f64;
    // (label, d of the bound, overlap-add nest)
    for (label, d, overlap) in [
        ("1d", 1u32, false),
        ("nd d=2", 2, false),
        ("nd d=3", 3, false),
        ("overlap d=2", 2, true),
    ] {
        for case in 0..20 {
            let eps = if case % 2 == 0 { 1e-8 } else { 1e-6 };
            let candidates: Vec<&BilinearAlgorithm<f64>> = pool
                .iter()
                .filter(|a| {
                    !overlap || matches!(a.variant(), ConvVariant::Linear { r, n } if r == n)
                })
                .collect();
            let base = candidates[rng.random_range(0..candidates.len())];
            let (alg, order) = if overlap {
                (overlap_add_nest(base, base).unwrap(), 1)
            } else {
                (base.clone(), d as usize)
            };
            let v = alg.variant().clone();
            let f = Tensor::new(
                vec![v.filter_len(); order],
                uniform(&mut rng, v.filter_len().pow(order as u32)),
            )
            .unwrap();
            let g = Tensor::new(
                vec![v.input_len(); order],
                uniform(&mut rng, v.input_len().pow(order as u32)),
            )
            .unwrap();
            let measured = perturbation_error(&alg, &f, &g, eps, rng.random()).unwrap();
            let bound = error_bound(base, f.norm(), g.norm(), eps, d, overlap).unwrap();
            let ratio = measured / bound.value;
            worst_ratio = worst_ratio.max(ratio);
            if measured > 1.1 * bound.value {
                failures.push(format!(
                    "{label} {} eps={eps:e}: measured {measured:e} > 1.1 x bound {:e}",
                    base.provenance(),
                    bound.value
                ));
            }
        }
    }
    println!("  80 cases, worst measured/bound ratio {worst_ratio:.3}");
    verdict(7, "first-order error bounds", &failures);
}

#[test]
fn criterion_08_fft_counters() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in [2usize, 4, 8, 16] {
        let x: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random(), rng.random()))
            .collect();
        let (y, count) = fft_counted(&x).unwrap();
        let lg = n.trailing_zeros() as u64;
        let closed = (n as u64 * (lg - 1) / 2, n as u64 * lg / 2);
        if (count.adds, count.mults) != closed || fft_cost(n).unwrap() != closed {
            failures.push(format!(
                "n={n}: counted ({}, {}), closed form {closed:?}",
                count.adds, count.mults
            ));
        }
        let dense = dft_matrix(n).unwrap().matvec(&x).unwrap();
        let err = y
            .iter()
            .zip(&dense)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if err > 1e-12 || (fft(&x).unwrap() != y) {
            failures.push(format!("n={n}: fft differs from dense DFT by {err:e}"));
        }
    }
    verdict(8, "fft operation counts", &failures);
}

#[test]
fn criterion_09_hankel_recursion() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut counts = Vec::new();
    let mut failures = Vec::new();
    for k in 3..=6 {
        let n = 1usize << k;
        let (f, g) = (uniform(&mut rng, n), uniform(&mut rng, n));
        let (y, count) = hankel_sym_conv_counted(&f, &g, 4).unwrap();
        let err = relative_error(&y, &linear_conv(&f, &g).unwrap());
        if err > 1e-12 {
            failures.push(format!("n={n}: rel err {err:e}"));
        }
        counts.push((n, count.mults));
    }
    for w in counts.windows(2) {
        if w[1].1 != 3 * w[0].1 {
            failures.push(format!(
                "count({}) = {} but count({}) = {}",
                w[1].0, w[1].1, w[0].0, w[0].1
            ));
        }
    }
    println!("  multiplication counts {counts:?}");
    verdict(9, "hankel recursion cost", &failures);
}

#[test]
fn criterion_10_cnn_cost_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut failures = Vec::new();
    for case in 0..50 {
        let m = rng.random_range(1..=4u64);
        let r = rng.random_range(1..=4u64);
        let dims = CnnLayerDims {
            n: rng.random_range(1..=8),
            k: rng.random_range(1..=16),
            h: rng.random_range(1..=16),
            m,
            r,
            d_h: m * rng.random_range(1..=6),
            d_w: m * rng.random_range(1..=6),
        };
        let (ru, mu) = (r as usize, m as usize);
        let alg: AnyAlgorithm = match case % 3 {
            0 => toom_cook(ru, mu, &small_integer_nodes(ru + mu - 1))
                .unwrap()
                .into(),
            1 => winograd(ru, mu, &default_divisors(ru + mu - 1).unwrap(), None)
                .unwrap()
                .into(),
            _ => direct::<convalg::Rational>(ru, mu).unwrap().into(),
        };
        let AnyAlgorithm::Rational(alg) = alg else {
            unreachable!()
        };
        let cost = cnn_layer_cost(&dims, &alg).unwrap();
        if cost.total != cost.lavin_total {
            failures.push(format!(
                "{dims:?}: breakdown {} vs closed form {}",
                cost.total, cost.lavin_total
            ));
        }
    }
    verdict(10, "cnn layer cost identity, 50 random layers", &failures);
}

#[test]
fn criterion_11_compositions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut failures = Vec::new();
    let mut check = |label: String, y: &[f64], exact: &[f64]| {
        let err = relative_error(y, exact);
        if err.is_nan() || err >= 1e-10 {
            failures.push(format!("{label}: rel err {err:e}"));
        }
    };

    for nest in [&[2, 2][..], &[2, 4], &[2, 2, 2]] {
        let alg = nested_toom(nest).unwrap().to_f64();
        let n: usize = nest.iter().product();
        for _ in 0..20 {
            let (f, g) = (uniform(&mut rng, n), uniform(&mut rng, n));
            check(
                format!("overlap-add {nest:?}"),
                &alg.apply(&f, &g).unwrap(),
                &linear_conv(&f, &g).unwrap(),
            );
        }
    }

    for (n1, n2) in [(2, 3), (3, 4), (3, 5)] {
        let alg = agarwal_cooley_nest(&dft_cyclic_alg(n1).unwrap(), &dft_cyclic_alg(n2).unwrap())
            .unwrap();
        let n = n1 * n2;
        let mut impulse = vec![0.0; n];
        impulse[0] = 1.0;
        let g = uniform(&mut rng, n);
        check(
            format!("agarwal-cooley {n1}x{n2} impulse"),
            &alg.apply_real(&impulse, &g).unwrap().values,
            &g,
        );
        for _ in 0..20 {
            let (f, g) = (uniform(&mut rng, n), uniform(&mut rng, n));
            let exact = direct_conv(&f, &g, &ConvVariant::Cyclic { n }).unwrap();
            check(
                format!("agarwal-cooley {n1}x{n2}"),
                &alg.apply_real(&f, &g).unwrap().values,
                &exact,
            );
        }
    }

    for r in 1..=4 {
        let alg = toom_cook(r, r, &small_integer_nodes(2 * r - 1))
            .unwrap()
            .to_f64();
        for n in 1..=20 {
            let (f, g) = (uniform(&mut rng, r), uniform(&mut rng, n));
            check(
                format!("small-filter r={r} n={n}"),
                &small_filter_conv(&f, &g, &alg).unwrap(),
                &linear_conv(&f, &g).unwrap(),
            );
        }
    }

    for n in 1..=6 {
        let alg = toom_cook(n, n, &small_integer_nodes(2 * n - 1))
            .unwrap()
            .to_f64();
        for rank in 1..=3 {
            let factors = |rng: &mut ChaCha8Rng| {
                RankFactors2D::new(
                    uniform(rng, rank),
                    (0..rank).map(|_| uniform(rng, n)).collect(),
                    (0..rank).map(|_| uniform(rng, n)).collect(),
                )
                .unwrap()
            };
            let (ff, fg) = (factors(&mut rng), factors(&mut rng));
            let y = low_rank_conv2d(&ff, &fg, &alg, Execution::default()).unwrap();
            let exact = direct_conv_nd(
                &Tensor::from_matrix(&ff.reconstruct()),
                &Tensor::from_matrix(&fg.reconstruct()),
            )
            .unwrap();
            check(
                format!("low-rank 2d n={n} rank={rank}"),
                y.data(),
                exact.data(),
            );
        }
    }
    verdict(11, "composition correctness", &failures);
}
