//! `specsel`: cluster-count selection and spectral clustering for affinity
//! matrices stored in the MAT-1 format.
//!
//! Exit codes: 0 on success, 1 for invalid input (flags, malformed files,
//! dimension mismatches), 2 for numerical failures.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use specsel::{
    confidence_table, evaluate_manifest, fuse, generate_block_affinity, labels_to_string, random_k,
    read_manifest, select_k, spectral_cluster, AffinityMatrix64, ConfidenceTable64, Criterion,
    KRange, Normalization, SelectionStrategy, SynthSpec,
};

#[derive(Parser)]
#[command(name = "specsel", version, about = "Spectral clustering with automatic cluster-count selection")]
struct Cli {
    /// Print progress details to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select the cluster count for one or more affinity matrices.
    Select(SelectArgs),
    /// Cluster an affinity matrix and write the labels.
    Cluster(ClusterArgs),
    /// Fuse several affinity matrices into one.
    Fuse(FuseArgs),
    /// Print the per-candidate criterion table.
    Indices(IndicesArgs),
    /// Generate a planted-block affinity matrix.
    Synth(SynthArgs),
    /// Evaluate selection over a benchmark manifest.
    Evaluate(EvaluateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum FusionMode {
    Mean,
    MeanDegree,
}

impl FromStr for FusionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mean" => Ok(FusionMode::Mean),
            "mean+degree" => Ok(FusionMode::MeanDegree),
            other => Err(format!("unknown fusion mode {other:?}; expected mean or mean+degree")),
        }
    }
}

#[derive(Args)]
struct MatrixInputs {
    /// Affinity matrix in MAT-1 format; repeat for multiple views.
    #[arg(long = "matrix", value_name = "PATH", required = true)]
    matrices: Vec<PathBuf>,
    /// Fusion of multiple views; defaults to mean+degree for several
    /// matrices and to a no-op for a single one.
    #[arg(long, value_name = "MODE")]
    fusion: Option<FusionMode>,
}

#[derive(Args)]
struct RangeArgs {
    /// Smallest candidate cluster count.
    #[arg(long, default_value_t = 2)]
    kmin: usize,
    /// Largest candidate cluster count.
    #[arg(long, default_value_t = 5)]
    kmax: usize,
}

#[derive(Args)]
struct SelectArgs {
    #[command(flatten)]
    input: MatrixInputs,
    #[command(flatten)]
    range: RangeArgs,
    /// average, voting, random, silhouette, eigengap, db or ch.
    #[arg(long, default_value = "average")]
    strategy: SelectionStrategy,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the full confidence table to this path.
    #[arg(long, value_name = "PATH")]
    dump_confidences: Option<PathBuf>,
}

#[derive(Args)]
struct ClusterArgs {
    #[command(flatten)]
    input: MatrixInputs,
    /// Cluster count; selected over the range when omitted.
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    range: RangeArgs,
    #[arg(long, default_value = "average")]
    strategy: SelectionStrategy,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output labels path (LBL-1).
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Args)]
struct FuseArgs {
    #[command(flatten)]
    input: MatrixInputs,
    /// Output matrix path (MAT-1).
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Args)]
struct IndicesArgs {
    #[command(flatten)]
    input: MatrixInputs,
    #[command(flatten)]
    range: RangeArgs,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the table here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Planted cluster count.
    #[arg(long)]
    k: usize,
    /// Samples per cluster.
    #[arg(long = "per-cluster")]
    per_cluster: usize,
    /// Within-block affinity bounds, e.g. 0.8,1.0.
    #[arg(long, value_name = "LO,HI", default_value = "0.8,1.0")]
    within: Bounds,
    /// Cross-block affinity bounds, e.g. 0.0,0.2.
    #[arg(long, value_name = "LO,HI", default_value = "0.0,0.2")]
    cross: Bounds,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output matrix path (MAT-1).
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Optionally write the planted labels here (LBL-1).
    #[arg(long, value_name = "PATH")]
    labels_out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Benchmark manifest (MAN-1).
    #[arg(long, value_name = "PATH")]
    manifest: PathBuf,
    #[command(flatten)]
    range: RangeArgs,
    #[arg(long, default_value = "average")]
    strategy: SelectionStrategy,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output report path.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Clone, Copy)]
struct Bounds {
    low: f64,
    high: f64,
}

impl FromStr for Bounds {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (low, high) = s
            .split_once(',')
            .ok_or_else(|| format!("expected LO,HI, got {s:?}"))?;
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("invalid float {t:?}"));
        Ok(Bounds { low: parse(low)?, high: parse(high)? })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };

    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}

fn run(cli: &Cli) -> specsel::Result<()> {
    match &cli.command {
        Command::Select(args) => select(cli.verbose, args),
        Command::Cluster(args) => cluster(cli.verbose, args),
        Command::Fuse(args) => fuse_cmd(cli.verbose, args),
        Command::Indices(args) => indices(cli.verbose, args),
        Command::Synth(args) => synth(cli.verbose, args),
        Command::Evaluate(args) => evaluate(cli.verbose, args),
    }
}

fn load_fused(verbose: bool, input: &MatrixInputs) -> specsel::Result<AffinityMatrix64> {
    let views: Vec<AffinityMatrix64> = input
        .matrices
        .iter()
        .map(AffinityMatrix64::read_mat)
        .collect::<specsel::Result<_>>()?;
    let mode = input.fusion.unwrap_or(FusionMode::MeanDegree);
    let fused = if views.len() == 1 {
        views.into_iter().next().expect("one view")
    } else {
        let normalization = match mode {
            FusionMode::Mean => Normalization::None,
            FusionMode::MeanDegree => Normalization::Degree,
        };
        fuse(&views, normalization)?
    };
    if verbose {
        eprintln!("loaded {} view(s), n = {}", input.matrices.len(), fused.n());
    }
    Ok(fused)
}

fn parse_range(args: &RangeArgs) -> specsel::Result<KRange> {
    KRange::new(args.kmin, args.kmax)
}

/// Confidence table as CSV with full float precision.
fn confidence_csv(table: &ConfidenceTable64) -> String {
    let mut out = String::from(
        "k,silhouette_raw,silhouette_conf,eigengap_raw,eigengap_conf,db_raw,db_conf,ch_raw,ch_conf,average_conf\n",
    );
    for (i, k) in table.range().iter().enumerate() {
        let _ = write!(out, "{k}");
        for criterion in Criterion::ALL {
            let _ = write!(
                out,
                ",{:.16e},{:.16e}",
                table.raw(criterion)[i],
                table.normalized(criterion)[i]
            );
        }
        let _ = writeln!(out, ",{:.16e}", table.average()[i]);
    }
    out
}

/// Writes through a temp file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> specsel::Result<()> {
    let io_err = |source| specsel::Error::Io { path: path.into(), source };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)?;
    Ok(())
}

fn select(verbose: bool, args: &SelectArgs) -> specsel::Result<()> {
    let fused = load_fused(verbose, &args.input)?;
    let range = parse_range(&args.range)?;
    range.validate_for(fused.n())?;

    let k = if args.strategy == SelectionStrategy::Random && args.dump_confidences.is_none() {
        random_k(range, args.seed)
    } else {
        let table = confidence_table(&fused, range, args.seed)?;
        if let Some(path) = &args.dump_confidences {
            write_atomic(path, &confidence_csv(&table))?;
            if verbose {
                eprintln!("confidence table written to {}", path.display());
            }
        }
        select_k(&table, args.strategy, args.seed)
    };
    println!("{k}");
    Ok(())
}

fn cluster(verbose: bool, args: &ClusterArgs) -> specsel::Result<()> {
    let fused = load_fused(verbose, &args.input)?;
    let k = match args.k {
        Some(k) => k,
        None => {
            let range = parse_range(&args.range)?;
            range.validate_for(fused.n())?;
            let table = confidence_table(&fused, range, args.seed)?;
            let k = select_k(&table, args.strategy, args.seed);
            if verbose {
                eprintln!("selected k = {k}");
            }
            k
        }
    };
    let assignment = spectral_cluster(&fused, k, args.seed)?;
    write_atomic(&args.out, &labels_to_string(&assignment))?;
    println!("{}", args.out.display());
    Ok(())
}

fn fuse_cmd(verbose: bool, args: &FuseArgs) -> specsel::Result<()> {
    let fused = load_fused(verbose, &args.input)?;
    write_atomic(&args.out, &fused.to_mat_string())?;
    println!("{}", args.out.display());
    Ok(())
}

fn indices(verbose: bool, args: &IndicesArgs) -> specsel::Result<()> {
    let fused = load_fused(verbose, &args.input)?;
    let range = parse_range(&args.range)?;
    range.validate_for(fused.n())?;
    let table = confidence_table(&fused, range, args.seed)?;
    let csv = confidence_csv(&table);
    match &args.out {
        Some(path) => {
            write_atomic(path, &csv)?;
            println!("{}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn synth(verbose: bool, args: &SynthArgs) -> specsel::Result<()> {
    let spec = SynthSpec::new(
        args.k,
        args.per_cluster,
        args.within.low,
        args.within.high,
        args.cross.low,
        args.cross.high,
        args.seed,
    )?;
    let (matrix, labels) = generate_block_affinity::<f64>(&spec);
    if verbose {
        eprintln!("generated n = {} with planted k = {}", matrix.n(), args.k);
    }
    write_atomic(&args.out, &matrix.to_mat_string())?;
    if let Some(path) = &args.labels_out {
        write_atomic(path, &labels_to_string(&labels))?;
    }
    println!("{}", args.out.display());
    Ok(())
}

fn evaluate(verbose: bool, args: &EvaluateArgs) -> specsel::Result<()> {
    let records = read_manifest(&args.manifest)?;
    let range = parse_range(&args.range)?;
    let report = evaluate_manifest::<f64>(&records, range, args.strategy, args.seed)?;
    if verbose {
        eprintln!(
            "evaluated {} sequence(s), {} failed; mse = {:.6}, accuracy = {:.2}%",
            report.rows.len(),
            report.failures.len(),
            report.mse,
            report.accuracy_percent
        );
    }
    write_atomic(&args.out, &report.to_csv_string())?;
    println!("{}", args.out.display());
    Ok(())
}
