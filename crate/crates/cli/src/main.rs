//! `convalg` command-line front end.
//!
//! Exit status: 0 on success, 1 for usage or input errors, 2 when an
//! algorithm fails validation, 3 when an algorithm cannot be generated.
//! Every failure prints a single `error[kind]: message` line on stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use convalg::accuracy::{aggregate, run_experiment, to_csv, ExperimentConfig};
use convalg::adapters::{nested_toom, overlap_add_nest};
use convalg::cost::{table_report, Table};
use convalg::fastexec::direct_conv;
use convalg::generators::{
    dct_linear_alg, default_divisors, dft_cyclic_alg, dft_linear_alg, direct, karatsuba, sparse3,
    toom_cook, toom_cook_scheme, winograd, DivisorSet, NodeScheme,
};
use convalg::io::{parse_node_list, read_algorithm, read_tensor, write_algorithm, write_tensor};
use convalg::par::Execution;
use convalg::{AnyAlgorithm, ConvError, ConvVariant, RealApply, Tensor};

#[derive(Parser)]
#[command(
    name = "convalg",
    version,
    about = "Bilinear algorithms for discrete convolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an algorithm and write it as JSON.
    Gen(GenArgs),
    /// Apply an algorithm to two vector or tensor files.
    Conv {
        #[arg(long)]
        alg: PathBuf,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        /// Number of modes; the algorithm is applied along each one.
        #[arg(long)]
        dims: Option<usize>,
        /// Also write the result as a vector/tensor file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the residual against the convolution tensor; exit 2 if it
    /// exceeds the tolerance.
    Validate {
        #[arg(long)]
        alg: PathBuf,
        /// Defaults to 0 for rational algorithms and a size-scaled multiple
        /// of machine epsilon otherwise.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Regenerate cost tables as CSV with per-row match flags.
    Cost {
        /// Any of 2 (Toom-Cook), 3 (Winograd), 4 (nested Toom-Cook).
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        tables: Vec<String>,
        /// Directory for `table<N>.csv`; CSV goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the accuracy experiment and write per-trial and aggregated CSV.
    BenchAccuracy {
        /// JSON config; missing fields take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Aggregated CSV path; defaults to `<out stem>_aggregate.csv`.
        #[arg(long)]
        aggregate: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Direct summation of a convolution variant.
    Oracle {
        #[arg(long, value_enum)]
        variant: OracleVariant,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Toom,
    Winograd,
    Dft,
    Dct,
    Karatsuba,
    Sparse3,
    Direct,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleVariant {
    Linear,
    Cyclic,
    Correlation,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Integer,
    Chebyshev,
}

#[derive(clap::Args)]
#[command(after_help = "\
Nesting: --nest 2x3 builds an overlap-add nest of square blocks of the chosen \
method, nested from the right (2x2x2 is 2x(2x2)); the result has r = n = product.

Small-filter blocking (library only) zero-pads the input when r does not divide n \
and truncates the output to n + r - 1.")]
struct GenArgs {
    #[arg(long, value_enum)]
    method: Method,
    /// Filter length (optional for karatsuba and sparse3).
    #[arg(long)]
    r: Option<usize>,
    /// Input length.
    #[arg(long)]
    n: Option<usize>,
    /// Toom-Cook nodes, e.g. "0,1,-1,1/2,inf".
    #[arg(long, conflicts_with = "divisors")]
    nodes: Option<String>,
    /// Default Toom-Cook node family when --nodes is absent.
    #[arg(long, value_enum, default_value = "integer")]
    scheme: Scheme,
    /// Winograd divisors, semicolon-separated, e.g. "x; x-1; x+1; x^2+1".
    /// Defaults to a built-in list of degree n + r - 1.
    #[arg(long)]
    divisors: Option<String>,
    /// Overlap-add nesting of square blocks, e.g. "2x2x2".
    #[arg(long)]
    nest: Option<String>,
    /// DFT only: emit the cyclic algorithm (requires r = n).
    #[arg(long)]
    cyclic: bool,
    /// Swap the roles of B and C, turning a linear algorithm into a
    /// correlation one.
    #[arg(long)]
    interchange: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy)]
enum Kind {
    Usage,
    Input,
    Validation,
    Generation,
}

impl Kind {
    fn label(self) -> &'static str {
        match self {
            Kind::Usage => "usage",
            Kind::Input => "input",
            Kind::Validation => "validation",
            Kind::Generation => "generation",
        }
    }

    fn code(self) -> u8 {
        match self {
            Kind::Usage | Kind::Input => 1,
            Kind::Validation => 2,
            Kind::Generation => 3,
        }
    }
}

struct Failure {
    kind: Kind,
    msg: String,
}

impl Failure {
    fn new(kind: Kind, msg: impl Into<String>) -> Self {
        Self {
            kind,
            msg: msg.into(),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

trait Tag<T> {
    fn tag(self, kind: Kind) -> CliResult<T>;
}

impl<T> Tag<T> for convalg::Result<T> {
    fn tag(self, kind: Kind) -> CliResult<T> {
        self.map_err(|e| Failure::new(kind, e.to_string()))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                eprint!("{e}");
                return ExitCode::from(Kind::Usage.code());
            }
            let text = e.to_string();
            let first = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            return report(Failure::new(
                Kind::Usage,
                first.trim_start_matches("error: "),
            ));
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report(f),
    }
}

fn report(f: Failure) -> ExitCode {
    let msg = f.msg.replace('\n', " ");
    eprintln!("error[{}]: {}", f.kind.label(), msg);
    ExitCode::from(f.kind.code())
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Gen(args) => gen(&args),
        Command::Conv {
            alg,
            f,
            g,
            dims,
            out,
        } => conv(&alg, &f, &g, dims, out.as_deref()),
        Command::Validate { alg, tol } => validate(&alg, tol),
        Command::Cost { tables, out } => cost(&tables, out.as_deref()),
        Command::BenchAccuracy {
            config,
            out,
            aggregate,
            workers,
        } => bench_accuracy(config.as_deref(), &out, aggregate.as_deref(), workers),
        Command::Oracle { variant, f, g } => oracle(variant, &f, &g),
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(Kind::Input, format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text)
        .map_err(|e| Failure::new(Kind::Input, format!("cannot write {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_tensor(path: &Path) -> CliResult<Tensor<f64>> {
    read_tensor(&read_text(path)?)
        .map_err(|e| Failure::new(Kind::Input, format!("{}: {e}", path.display())))
}

fn load_algorithm(path: &Path) -> CliResult<AnyAlgorithm> {
    read_algorithm(&read_text(path)?)
        .map_err(|e| Failure::new(Kind::Input, format!("{}: {e}", path.display())))
}

/// Values without the dims header, one last-mode row per line.
fn format_values(t: &Tensor<f64>) -> String {
    write_tensor(t)
        .split_once('\n')
        .map(|(_, rest)| rest.to_string())
        .unwrap_or_default()
}

fn parse_nest(s: &str) -> CliResult<Vec<usize>> {
    s.split(['x', 'X', '×'])
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| Failure::new(Kind::Usage, format!("bad nesting '{s}'")))
        })
        .collect()
}

fn sizes(args: &GenArgs) -> CliResult<(usize, usize)> {
    match (args.r, args.n, args.method) {
        (Some(r), Some(n), _) => Ok((r, n)),
        (None, None, Method::Karatsuba) => Ok((2, 2)),
        (None, None, Method::Sparse3) => Ok((3, 3)),
        _ => Err(Failure::new(Kind::Usage, "--r and --n are required")),
    }
}

fn gen(args: &GenArgs) -> CliResult<()> {
    let mut alg = match &args.nest {
        Some(spec) => {
            let factors = parse_nest(spec)?;
            let size: usize = factors.iter().product();
            if args.r.is_some_and(|r| r != size) || args.n.is_some_and(|n| n != size) {
                return Err(Failure::new(
                    Kind::Usage,
                    format!("--nest {spec} builds r = n = {size}, which conflicts with --r/--n"),
                ));
            }
            nest(args, &factors)?
        }
        None => {
            let (r, n) = sizes(args)?;
            block(args, r, n)?
        }
    };
    if args.interchange {
        alg = alg.interchange().tag(Kind::Generation)?;
    }
    let mut text = write_algorithm(&alg).tag(Kind::Generation)?;
    text.push('\n');
    emit(args.out.as_deref(), &text)
}

fn nest(args: &GenArgs, factors: &[usize]) -> CliResult<AnyAlgorithm> {
    if matches!(args.method, Method::Toom)
        && args.nodes.is_none()
        && matches!(args.scheme, Scheme::Integer)
    {
        return nested_toom(factors).map(Into::into).tag(Kind::Generation);
    }
    let (&last, rest) = factors
        .split_last()
        .expect("parse_nest yields at least one factor");
    let mut acc = block(args, last, last)?;
    for &s in rest.iter().rev() {
        let outer = block(args, s, s)?;
        acc = overlap_any(&outer, &acc).tag(Kind::Generation)?;
    }
    Ok(acc)
}

fn overlap_any(outer: &AnyAlgorithm, inner: &AnyAlgorithm) -> convalg::Result<AnyAlgorithm> {
    let target = outer.domain().max(inner.domain());
    Ok(match (outer.promote(target)?, inner.promote(target)?) {
        (AnyAlgorithm::Rational(a), AnyAlgorithm::Rational(b)) => overlap_add_nest(&a, &b)?.into(),
        (AnyAlgorithm::Real(a), AnyAlgorithm::Real(b)) => overlap_add_nest(&a, &b)?.into(),
        (AnyAlgorithm::Complex(a), AnyAlgorithm::Complex(b)) => overlap_add_nest(&a, &b)?.into(),
        _ => unreachable!("promotion yields equal domains"),
    })
}

fn block(args: &GenArgs, r: usize, n: usize) -> CliResult<AnyAlgorithm> {
    let gen_err = Kind::Generation;
    let alg: AnyAlgorithm = match args.method {
        Method::Toom => match &args.nodes {
            Some(list) => {
                let nodes = parse_node_list(list).tag(Kind::Usage)?;
                toom_cook(r, n, &nodes).tag(gen_err)?.into()
            }
            None => {
                let scheme = match args.scheme {
                    Scheme::Integer => NodeScheme::SmallIntegers,
                    Scheme::Chebyshev => NodeScheme::Chebyshev,
                };
                toom_cook_scheme(r, n, scheme).tag(gen_err)?
            }
        },
        Method::Winograd => {
            let divisors = match &args.divisors {
                Some(list) => DivisorSet::parse(list).tag(gen_err)?,
                None => default_divisors(n + r - 1).tag(gen_err)?,
            };
            winograd(r, n, &divisors, None).tag(gen_err)?.into()
        }
        Method::Dft if args.cyclic => {
            if r != n {
                return Err(Failure::new(Kind::Usage, "cyclic dft needs r = n"));
            }
            dft_cyclic_alg(n).tag(gen_err)?.into()
        }
        Method::Dft => dft_linear_alg(r, n).tag(gen_err)?.into(),
        Method::Dct => {
            if r != n {
                return Err(Failure::new(Kind::Usage, "dct needs r = n"));
            }
            dct_linear_alg(n).tag(gen_err)?.algorithm().clone().into()
        }
        Method::Karatsuba => fixed_size(karatsuba().into(), r, n)?,
        Method::Sparse3 => fixed_size(sparse3().into(), r, n)?,
        Method::Direct => direct::<convalg::Rational>(r, n).tag(gen_err)?.into(),
    };
    Ok(alg)
}

fn fixed_size(alg: AnyAlgorithm, r: usize, n: usize) -> CliResult<AnyAlgorithm> {
    let v = alg.variant();
    if (v.filter_len(), v.input_len()) != (r, n) {
        return Err(Failure::new(
            Kind::Usage,
            format!("{} is {v}, not linear({r}, {n})", alg.provenance()),
        ));
    }
    Ok(alg)
}

fn conv(alg: &Path, f: &Path, g: &Path, dims: Option<usize>, out: Option<&Path>) -> CliResult<()> {
    let alg = load_algorithm(alg)?;
    let (tf, tg) = (load_tensor(f)?, load_tensor(g)?);
    let d = dims.unwrap_or(tf.order());
    if tf.order() != d || tg.order() != d {
        return Err(Failure::new(
            Kind::Input,
            format!(
                "--dims {d} but inputs have {} and {} modes",
                tf.order(),
                tg.order()
            ),
        ));
    }
    let result = if d == 1 {
        let y = alg.apply_real(tf.data(), tg.data()).tag(Kind::Input)?;
        (y.imag_warning(), y.max_imag, Tensor::from_vec(y.values))
    } else {
        let y = alg.apply_nd_real(&tf, &tg).tag(Kind::Input)?;
        (y.imag_warning(), y.max_imag, y.values)
    };
    let (warn, max_imag, y) = result;
    if warn {
        eprintln!("warning: discarded imaginary parts up to {max_imag:e}");
    }
    print!("{}", format_values(&y));
    match out {
        Some(path) => write_text(path, &write_tensor(&y)),
        None => Ok(()),
    }
}

fn validate(alg: &Path, tol: Option<f64>) -> CliResult<()> {
    let alg = load_algorithm(alg)?;
    let tol = tol.unwrap_or_else(|| alg.default_tol());
    let residual = alg.residual();
    println!("{residual:e}");
    if residual > tol {
        return Err(Failure::new(
            Kind::Validation,
            ConvError::ValidationFailed { residual, tol }.to_string(),
        ));
    }
    Ok(())
}

fn cost(tables: &[String], out: Option<&Path>) -> CliResult<()> {
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| {
            Failure::new(Kind::Input, format!("cannot create {}: {e}", dir.display()))
        })?;
    }
    for name in tables {
        let table: Table = name.parse().tag(Kind::Usage)?;
        let report = table_report(table).tag(Kind::Generation)?;
        let csv = report.to_csv().tag(Kind::Generation)?;
        let number = match table {
            Table::Toom => 2,
            Table::Winograd => 3,
            Table::Nested => 4,
        };
        match out {
            Some(dir) => {
                let path = dir.join(format!("table{number}.csv"));
                write_text(&path, &csv)?;
                let mismatched = report.rows.iter().filter(|r| !r.matches()).count();
                println!(
                    "{}: {} rows, {mismatched} mismatched",
                    path.display(),
                    report.rows.len()
                );
            }
            None => print!("{csv}"),
        }
    }
    Ok(())
}

fn bench_accuracy(
    config: Option<&Path>,
    out: &Path,
    aggregate_out: Option<&Path>,
    workers: usize,
) -> CliResult<()> {
    let config: ExperimentConfig = match config {
        Some(path) => serde_json::from_str(&read_text(path)?)
            .map_err(|e| Failure::new(Kind::Input, format!("{}: {e}", path.display())))?,
        None => ExperimentConfig::default(),
    };
    if workers == 0 {
        return Err(Failure::new(Kind::Usage, "--workers must be at least 1"));
    }
    let records = run_with_workers(&config, workers).tag(Kind::Generation)?;
    write_text(out, &to_csv(&records).tag(Kind::Input)?)?;
    let agg_path = match aggregate_out {
        Some(p) => p.to_path_buf(),
        None => {
            let stem = out
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("accuracy");
            out.with_file_name(format!("{stem}_aggregate.csv"))
        }
    };
    write_text(&agg_path, &to_csv(&aggregate(&records)).tag(Kind::Input)?)?;
    println!(
        "{} records -> {}, aggregate -> {}",
        records.len(),
        out.display(),
        agg_path.display()
    );
    Ok(())
}

#[cfg(feature = "parallel")]
fn run_with_workers(
    config: &ExperimentConfig,
    workers: usize,
) -> convalg::Result<Vec<convalg::accuracy::AccuracyRecord>> {
    if workers == 1 {
        return run_experiment(config, Execution::Sequential);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| ConvError::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_experiment(config, Execution::Parallel))
}

#[cfg(not(feature = "parallel"))]
fn run_with_workers(
    config: &ExperimentConfig,
    workers: usize,
) -> convalg::Result<Vec<convalg::accuracy::AccuracyRecord>> {
    if workers > 1 {
        eprintln!("warning: built without the parallel feature; running on one worker");
    }
    run_experiment(config, Execution::Sequential)
}

fn oracle(variant: OracleVariant, f: &Path, g: &Path) -> CliResult<()> {
    let (tf, tg) = (load_tensor(f)?, load_tensor(g)?);
    let (f, g) = (tf.data(), tg.data());
    let v = match variant {
        OracleVariant::Linear => ConvVariant::Linear {
            r: f.len(),
            n: g.len(),
        },
        OracleVariant::Cyclic => ConvVariant::Cyclic { n: g.len() },
        OracleVariant::Correlation => {
            if g.len() < f.len() {
                return Err(Failure::new(
                    Kind::Input,
                    "correlation input is shorter than the filter",
                ));
            }
            ConvVariant::Correlation {
                r: f.len(),
                n_out: g.len() - f.len() + 1,
            }
        }
    };
    let y = direct_conv(f, g, &v).tag(Kind::Input)?;
    print!("{}", format_values(&Tensor::from_vec(y)));
    Ok(())
}
