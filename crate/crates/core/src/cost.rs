//! Static operation counts: nonzero-based add/mult bounds for encoding and
//! decoding matrices, Kronecker-structured application, FFT closed forms,
//! the CNN layer model, and regeneration of the cost tables.

use num_bigint::BigInt;
use serde::Serialize;

use crate::adapters::nested_toom;
use crate::algebra::{Matrix, Node, Rational, RealScalar, Scalar};
use crate::bilinear::{BilinearAlgorithm, ConvVariant};
use crate::error::{ConvError, Result};
use crate::generators::{reference_divisors, small_integer_nodes, toom_cook, winograd};

/// How a matrix is applied to a vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Applied {
    /// `M·x`; the operator's rows are the matrix rows.
    Direct,
    /// `Mᵀ·x`; the operator's rows are the matrix columns.
    Transposed,
}

/// Nonzeros and the add/mult upper bounds they imply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MatrixCost {
    pub nnz: u64,
    pub adds: u64,
    pub mults: u64,
}

impl MatrixCost {
    pub const fn new(nnz: u64, adds: u64, mults: u64) -> Self {
        Self { nnz, adds, mults }
    }
}

/// `mults = nnz`; `adds = nnz − #rows` of the operator as applied (rows with
/// no nonzeros contribute nothing rather than a negative count).
pub fn matrix_cost<T: Scalar>(m: &Matrix<T>, applied: Applied) -> MatrixCost {
    let mut per_row = match applied {
        Applied::Direct => vec![0u64; m.rows()],
        Applied::Transposed => vec![0u64; m.cols()],
    };
    for i in 0..m.rows() {
        for (j, v) in m.row(i).iter().enumerate() {
            if !v.is_zero() {
                per_row[if applied == Applied::Direct { i } else { j }] += 1;
            }
        }
    }
    let nnz: u64 = per_row.iter().sum();
    MatrixCost {
        nnz,
        adds: per_row.iter().map(|&c| c.saturating_sub(1)).sum(),
        mults: nnz,
    }
}

/// Per-matrix costs of an algorithm and the totals
/// `a(F) ≤ a(A)+a(B)+a(C)`, `m(F) ≤ m(A)+m(B)+m(C)+R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub rank: usize,
    pub a: MatrixCost,
    pub b: MatrixCost,
    pub c: MatrixCost,
    pub total_adds: u64,
    pub total_mults: u64,
}

pub fn alg_cost<T: Scalar>(alg: &BilinearAlgorithm<T>) -> CostReport {
    let a = matrix_cost(alg.a(), Applied::Transposed);
    let b = matrix_cost(alg.b(), Applied::Transposed);
    let c = matrix_cost(alg.c(), Applied::Direct);
    let rank = alg.rank();
    CostReport {
        rank,
        a,
        b,
        c,
        total_adds: a.adds + b.adds + c.adds,
        total_mults: a.mults + b.mults + c.mults + rank as u64,
    }
}

/// One factor of a Kronecker product, described by its shape as an operator
/// and its own application cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KronPart {
    pub rows: u64,
    pub cols: u64,
    pub adds: u64,
    pub mults: u64,
}

impl KronPart {
    pub fn of<T: Scalar>(m: &Matrix<T>, applied: Applied) -> Self {
        let cost = matrix_cost(m, applied);
        let (rows, cols) = match applied {
            Applied::Direct => (m.rows(), m.cols()),
            Applied::Transposed => (m.cols(), m.rows()),
        };
        Self {
            rows: rows as u64,
            cols: cols as u64,
            adds: cost.adds,
            mults: cost.mults,
        }
    }
}

/// Cost of applying `A₁⊗…⊗A_k` one mode at a time:
/// `Σᵢ T(Aᵢ)·Π_{j<i} rows(Aⱼ)·Π_{j>i} cols(Aⱼ)`. Returns `(adds, mults)`.
pub fn kron_cost(parts: &[KronPart]) -> Result<(u64, u64)> {
    if parts.len() < 2 {
        return Err(ConvError::InvalidArgument(
            "kronecker cost needs at least two parts".into(),
        ));
    }
    let (mut adds, mut mults) = (0, 0);
    for (i, p) in parts.iter().enumerate() {
        let before: u64 = parts[..i].iter().map(|q| q.rows).product();
        let after: u64 = parts[i + 1..].iter().map(|q| q.cols).product();
        adds += p.adds * before * after;
        mults += p.mults * before * after;
    }
    Ok((adds, mults))
}

/// Complex `(additions, multiplications)` of a radix-2 FFT of size `n`:
/// `(n(log₂n − 1)/2, n·log₂n/2)`.
pub fn fft_cost(n: usize) -> Result<(u64, u64)> {
    if n < 2 || !n.is_power_of_two() {
        return Err(ConvError::InvalidArgument(format!(
            "fft size {n} is not a power of two >= 2"
        )));
    }
    let n = n as u64;
    let lg = n.trailing_zeros() as u64;
    Ok((n * (lg - 1) / 2, n * lg / 2))
}

/// Shape of a convolutional layer evaluated with `m × m` output tiles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CnnLayerDims {
    /// Images.
    pub n: u64,
    /// Filters.
    pub k: u64,
    /// Channels.
    pub h: u64,
    /// Output tile edge.
    pub m: u64,
    /// Filter edge.
    pub r: u64,
    pub d_h: u64,
    pub d_w: u64,
}

impl CnnLayerDims {
    pub fn check(&self) -> Result<()> {
        let all = [self.n, self.k, self.h, self.m, self.r, self.d_h, self.d_w];
        if all.contains(&0) {
            return Err(ConvError::InvalidArgument(
                "layer dimensions must be positive".into(),
            ));
        }
        if !self.d_h.is_multiple_of(self.m) || !self.d_w.is_multiple_of(self.m) {
            return Err(ConvError::InvalidArgument(format!(
                "image {}x{} is not tiled by {}x{} blocks",
                self.d_h, self.d_w, self.m, self.m
            )));
        }
        Ok(())
    }

    /// Tiles per image, `D_H·D_W/m²`.
    pub fn partitions(&self) -> u64 {
        self.d_h * self.d_w / (self.m * self.m)
    }
}

/// Layer cost split by stage, in exact rationals. Transform costs count
/// additions plus multiplications of the 2D (two-fold Kronecker) transform.
#[derive(Clone, Debug, PartialEq)]
pub struct CnnCost {
    pub filter_transform: Rational,
    pub data_transform: Rational,
    pub multiply: Rational,
    pub inverse_transform: Rational,
    pub total: Rational,
    /// `α′(1 + β′/K + γ′/P′ + δ′/H)·N·D_H·D_W·H·K` with `P′ = N·P`, the
    /// number of tiles over the whole batch.
    pub lavin_total: Rational,
}

/// Per-stage cost of a layer computed with a 2D nest of a 1D correlation
/// algorithm `(r, m)`. A linear `(r, m)` algorithm is interchanged first.
pub fn cnn_layer_cost<T: Scalar>(
    dims: &CnnLayerDims,
    alg: &BilinearAlgorithm<T>,
) -> Result<CnnCost> {
    dims.check()?;
    let alg = match alg.variant() {
        ConvVariant::Linear { .. } => alg.interchange()?,
        _ => alg.clone(),
    };
    let want = ConvVariant::Correlation {
        r: dims.r as usize,
        n_out: dims.m as usize,
    };
    if alg.variant() != &want {
        return Err(ConvError::DimensionMismatch(format!(
            "layer needs {want}, algorithm computes {}",
            alg.variant()
        )));
    }
    let two_d = |m: &Matrix<T>, applied| -> Result<Rational> {
        let p = KronPart::of(m, applied);
        let (a, mu) = kron_cost(&[p, p])?;
        Ok(q(a + mu))
    };
    let t_a = two_d(alg.a(), Applied::Transposed)?;
    let t_b = two_d(alg.b(), Applied::Transposed)?;
    let t_c = two_d(alg.c(), Applied::Direct)?;
    let rank2 = q((alg.rank() * alg.rank()) as u64);
    let (n, k, h, p) = (q(dims.n), q(dims.k), q(dims.h), q(dims.partitions()));

    let filter_transform = &k * &h * &t_a;
    let data_transform = &p * &n * &h * &t_b;
    let multiply = &p * &k * &h * &n * &rank2;
    let inverse_transform = &p * &k * &n * &t_c;
    let total = &filter_transform + &data_transform + &multiply + &inverse_transform;

    let alpha = &rank2 / q(dims.m * dims.m);
    let beta = &t_b / &rank2;
    let gamma = &t_a / &rank2;
    let delta = &t_c / &rank2;
    let tiles = &n * &p;
    let bracket = Rational::from_integer(1.into()) + beta / &k + gamma / tiles + delta / &h;
    let lavin_total = alpha * bracket * &n * q(dims.d_h * dims.d_w) * &h * &k;
    Ok(CnnCost {
        filter_transform,
        data_transform,
        multiply,
        inverse_transform,
        total,
        lavin_total,
    })
}

fn q(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Which cost table to regenerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    /// Toom-Cook with integer nodes and `∞`, `n = 2…9`.
    Toom,
    /// Winograd with the tabulated divisor lists, `n = 2…9`.
    Winograd,
    /// Overlap-add nests of Toom-Cook blocks.
    Nested,
}

impl std::str::FromStr for Table {
    type Err = ConvError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" | "table2" | "toom" => Ok(Table::Toom),
            "3" | "table3" | "winograd" => Ok(Table::Winograd),
            "4" | "table4" | "nested" => Ok(Table::Nested),
            _ => Err(ConvError::InvalidArgument(format!("unknown table '{s}'"))),
        }
    }
}

/// Reference `(rank, A, C)` values for a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expected {
    pub rank: usize,
    pub a: MatrixCost,
    pub c: MatrixCost,
}

const fn row(rank: usize, a: (u64, u64, u64), c: (u64, u64, u64)) -> Expected {
    Expected {
        rank,
        a: MatrixCost::new(a.0, a.1, a.2),
        c: MatrixCost::new(c.0, c.1, c.2),
    }
}

const TOOM_EXPECTED: [Expected; 8] = [
    row(3, (4, 1, 4), (5, 2, 5)),
    row(5, (11, 6, 11), (16, 11, 16)),
    row(7, (22, 15, 22), (36, 29, 36)),
    row(9, (37, 28, 37), (65, 56, 65)),
    row(11, (56, 45, 56), (101, 90, 101)),
    row(13, (79, 66, 79), (145, 132, 145)),
    row(15, (106, 91, 106), (197, 182, 197)),
    row(17, (137, 120, 137), (257, 240, 257)),
];

const WINOGRAD_EXPECTED: [Expected; 8] = [
    row(4, (5, 1, 5), (7, 4, 7)),
    row(6, (13, 7, 13), (20, 15, 20)),
    row(8, (25, 17, 25), (39, 32, 39)),
    row(10, (41, 31, 41), (72, 63, 72)),
    row(12, (61, 49, 61), (107, 96, 107)),
    row(14, (85, 71, 85), (156, 143, 156)),
    row(17, (113, 96, 113), (216, 201, 216)),
    row(20, (145, 125, 145), (288, 271, 288)),
];

/// Nesting factors and reference values for the nested table.
pub const NESTED_ROWS: [(&[usize], Expected); 5] = [
    (&[2, 2], row(9, (16, 7, 16), (25, 18, 25))),
    (&[2, 3], row(15, (44, 29, 44), (76, 65, 76))),
    (&[2, 4], row(21, (88, 67, 88), (162, 147, 162))),
    (&[2, 2, 2], row(27, (64, 37, 64), (125, 110, 125))),
    (&[3, 3], row(25, (121, 96, 121), (228, 211, 228))),
];

/// One regenerated table row.
#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub label: String,
    pub n: usize,
    pub generator: String,
    pub cost: CostReport,
    pub expected: Option<Expected>,
    /// Nonzeros of the decoder when it is built by inverting the Vandermonde
    /// matrix in `f64` instead of exactly; round-off leaves tiny residues
    /// where the exact inverse has zeros. Only filled for the Toom table.
    pub float_nnz_c: Option<u64>,
}

impl TableRow {
    pub fn matches(&self) -> bool {
        self.expected
            .is_some_and(|e| e.rank == self.cost.rank && e.a == self.cost.a && e.c == self.cost.c)
    }
}

#[derive(Serialize)]
struct CsvRecord<'a> {
    n: &'a str,
    variant: &'static str,
    generator: &'a str,
    rank: usize,
    #[serde(rename = "nnzA")]
    nnz_a: u64,
    #[serde(rename = "addsA")]
    adds_a: u64,
    #[serde(rename = "multsA")]
    mults_a: u64,
    #[serde(rename = "nnzC")]
    nnz_c: u64,
    #[serde(rename = "addsC")]
    adds_c: u64,
    #[serde(rename = "multsC")]
    mults_c: u64,
    expected_rank: Option<usize>,
    #[serde(rename = "expected_nnzA")]
    expected_nnz_a: Option<u64>,
    #[serde(rename = "expected_addsA")]
    expected_adds_a: Option<u64>,
    #[serde(rename = "expected_multsA")]
    expected_mults_a: Option<u64>,
    #[serde(rename = "expected_nnzC")]
    expected_nnz_c: Option<u64>,
    #[serde(rename = "expected_addsC")]
    expected_adds_c: Option<u64>,
    #[serde(rename = "expected_multsC")]
    expected_mults_c: Option<u64>,
    #[serde(rename = "match")]
    matches: bool,
    #[serde(rename = "float_nnzC")]
    float_nnz_c: Option<u64>,
}

/// Regenerated rows of a cost table.
#[derive(Clone, Debug, PartialEq)]
pub struct TableReport {
    pub table: Table,
    pub rows: Vec<TableRow>,
}

impl TableReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(TableRow::matches)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            let e = r.expected;
            w.serialize(CsvRecord {
                n: &r.label,
                variant: "linear",
                generator: &r.generator,
                rank: r.cost.rank,
                nnz_a: r.cost.a.nnz,
                adds_a: r.cost.a.adds,
                mults_a: r.cost.a.mults,
                nnz_c: r.cost.c.nnz,
                adds_c: r.cost.c.adds,
                mults_c: r.cost.c.mults,
                expected_rank: e.map(|e| e.rank),
                expected_nnz_a: e.map(|e| e.a.nnz),
                expected_adds_a: e.map(|e| e.a.adds),
                expected_mults_a: e.map(|e| e.a.mults),
                expected_nnz_c: e.map(|e| e.c.nnz),
                expected_adds_c: e.map(|e| e.c.adds),
                expected_mults_c: e.map(|e| e.c.mults),
                matches: r.matches(),
                float_nnz_c: r.float_nnz_c,
            })?;
        }
        let bytes = w.into_inner().map_err(|e| ConvError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Rebuilds every row of `table` from the default constructions and pairs it
/// with the reference values.
pub fn table_report(table: Table) -> Result<TableReport> {
    let mut rows = Vec::new();
    match table {
        Table::Toom => {
            for (i, exp) in TOOM_EXPECTED.iter().enumerate() {
                let n = i + 2;
                let nodes = small_integer_nodes(2 * n - 1);
                let alg = toom_cook(n, n, &nodes)?;
                let float_nodes: Vec<Node<f64>> = nodes
                    .iter()
                    .map(|x| match x {
                        Node::Finite(v) => Node::Finite(v.to_f64()),
                        Node::Infinity => Node::Infinity,
                    })
                    .collect();
                let float_alg = toom_cook(n, n, &float_nodes)?;
                let mut row = table_row(n.to_string(), n, &alg, Some(*exp));
                row.float_nnz_c = Some(matrix_cost(float_alg.c(), Applied::Direct).nnz);
                rows.push(row);
            }
        }
        Table::Winograd => {
            for (i, exp) in WINOGRAD_EXPECTED.iter().enumerate() {
                let n = i + 2;
                let alg = winograd(n, n, &reference_divisors(n)?, None)?;
                rows.push(table_row(n.to_string(), n, &alg, Some(*exp)));
            }
        }
        Table::Nested => {
            for (factors, exp) in NESTED_ROWS {
                let alg = nested_toom(factors)?;
                let label: Vec<String> = factors.iter().map(usize::to_string).collect();
                let n = factors.iter().product();
                rows.push(table_row(label.join("x"), n, &alg, Some(exp)));
            }
        }
    }
    Ok(TableReport { table, rows })
}

fn table_row(
    label: String,
    n: usize,
    alg: &BilinearAlgorithm<Rational>,
    expected: Option<Expected>,
) -> TableRow {
    TableRow {
        label,
        n,
        generator: alg.provenance().to_string(),
        cost: alg_cost(alg),
        expected,
        float_nnz_c: None,
    }
}
