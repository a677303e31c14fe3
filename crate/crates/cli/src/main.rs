use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bargmann::experiments::{
    format_sig12, member, run_boundary, run_fraction, run_scatter, write_boundary_csv,
    write_fraction, write_scatter, ExperimentConfig, OutputFormat, DEFAULT_SAMPLES,
};
use bargmann::gram::{is_realizable, CandidateSpec};
use bargmann::linalg::{factor_states, hermitian_eigenvalues};
use bargmann::states::{format_state_file, parse_state_file};
use bargmann::witness::{witness_overlaps4, witness_states4, DEFAULT_WITNESS_TOL};
use bargmann::{Error, OverlapTuple6, Region, WitnessMode};

const EXIT_WITNESSED: u8 = 10;
const EXIT_INVALID: u8 = 2;

const CANDIDATE_HELP: &str = "\
Candidate JSON: {\"overlaps\": [...], \"phases\": [...]}
  3 states: overlaps (d12, d13, d23), phases (phi)
  4 states: overlaps (d12, d13, d14, d23, d24, d34), phases (phi123, phi124, phi134)
Overlaps are squared moduli |<psi_i|psi_j>|^2 in [0, 1]; missing phases are 0.

State file JSON: {\"dim\": d, \"states\": [[[re, im], ...], ...]}";

#[derive(Parser)]
#[command(
    name = "bargmann",
    version,
    about = "Bargmann invariants, realizability and overlap imaginarity witnesses"
)]
#[command(after_help = CANDIDATE_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bargmann invariants of Haar-random tuples.
    Scatter(ScatterArgs),
    /// Fraction of Haar-random four-tuples witnessed by overlaps alone.
    Fraction(FractionArgs),
    /// Boundary curve of B3 or B4|circ as CSV (phi, re, im).
    Boundary(BoundaryArgs),
    /// Overlap witness of imaginarity for four states. Exit 10 if witnessed, 0 if not, 2 on invalid input.
    Witness(WitnessArgs),
    /// Classify a complex value against B3 or B4|circ.
    Member(MemberArgs),
    /// Decide realizability of a candidate Gram matrix and print a realization.
    Realize(RealizeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RegionArg {
    B3,
    B4circ,
}

impl From<RegionArg> for Region {
    fn from(r: RegionArg) -> Self {
        match r {
            RegionArg::B3 => Region::B3,
            RegionArg::B4circ => Region::B4Circ,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Gauge3,
    Full6,
}

impl From<ModeArg> for WitnessMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Gauge3 => WitnessMode::GaugeFixed3,
            ModeArg::Full6 => WitnessMode::Full6,
        }
    }
}

#[derive(Args)]
struct EnsembleArgs {
    /// Hilbert-space dimension.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; does not affect results.
    #[arg(long, env = "BARGMANN_WORKERS")]
    workers: Option<usize>,
}

impl EnsembleArgs {
    fn config(&self) -> Result<ExperimentConfig, Error> {
        let workers = self
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        ExperimentConfig::new(self.dim, self.samples, self.seed, workers)
    }
}

#[derive(Args)]
struct ScatterArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(3..=4))]
    order: u8,
    #[command(flatten)]
    ensemble: EnsembleArgs,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct FractionArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct BoundaryArgs {
    #[arg(long, value_enum)]
    region: RegionArg,
    /// Points at phi = 2 pi k / N, k = 0..N-1.
    #[arg(long, default_value_t = 1024)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WitnessArgs {
    /// State file with four states.
    #[arg(
        long,
        conflicts_with = "overlaps",
        required_unless_present = "overlaps"
    )]
    states: Option<PathBuf>,
    /// Six overlaps d12 d13 d14 d23 d24 d34, space or comma separated.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    overlaps: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "gauge3")]
    mode: ModeArg,
    /// A variant counts as non-PSD when its minimum eigenvalue is below -tol.
    #[arg(long, default_value_t = DEFAULT_WITNESS_TOL)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MemberArgs {
    #[arg(long, value_enum)]
    region: RegionArg,
    #[arg(long, allow_negative_numbers = true)]
    re: f64,
    #[arg(long, allow_negative_numbers = true)]
    im: f64,
}

#[derive(Args)]
struct RealizeArgs {
    /// Candidate JSON file (see below).
    #[arg(long)]
    candidate: PathBuf,
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Scatter(a) => {
            let config = a.ensemble.config()?;
            let order = usize::from(a.order);
            let points = run_scatter(&config, order)?;
            let mut w = open_output(a.out.as_deref())?;
            write_scatter(&mut w, &config, order, &points, a.format.into())?;
            w.flush()?;
        }
        Command::Fraction(a) => {
            let result = run_fraction(&a.ensemble.config()?)?;
            let mut w = open_output(a.out.as_deref())?;
            write_fraction(&mut w, &result, a.format.into())?;
            w.flush()?;
        }
        Command::Boundary(a) => {
            let curve = run_boundary(a.region.into(), a.samples)?;
            let mut w = open_output(a.out.as_deref())?;
            write_boundary_csv(&mut w, &curve)?;
            w.flush()?;
        }
        Command::Witness(a) => {
            let report = match (&a.states, &a.overlaps) {
                (Some(path), _) => {
                    let t = parse_state_file(&std::fs::read_to_string(path)?)?;
                    witness_states4(&t, a.mode.into(), a.tol)?
                }
                (None, Some(values)) => {
                    witness_overlaps4(&OverlapTuple6::from_slice(values)?, a.mode.into(), a.tol)?
                }
                (None, None) => {
                    return Err(Error::Parse(
                        "one of --states or --overlaps is required".into(),
                    ))
                }
            };
            let mut w = open_output(a.out.as_deref())?;
            writeln!(w, "{}", report.to_json())?;
            w.flush()?;
            if report.witnessed {
                return Ok(ExitCode::from(EXIT_WITNESSED));
            }
        }
        Command::Member(a) => {
            let v = member(a.region.into(), a.re, a.im)?;
            println!(
                "{} {}",
                v.membership.as_str(),
                format_sig12(v.point.boundary_distance)
            );
        }
        Command::Realize(a) => {
            let spec: CandidateSpec =
                serde_json::from_str(&std::fs::read_to_string(&a.candidate)?)?;
            let m = spec.parse()?.matrix()?;
            let min_eigenvalue = hermitian_eigenvalues(&m).min_eigenvalue;
            let mut report = serde_json::json!({
                "realizable": is_realizable(&m),
                "min_eigenvalue": min_eigenvalue,
            });
            if is_realizable(&m) {
                let states: serde_json::Value =
                    serde_json::from_str(&format_state_file(&factor_states(&m)?))?;
                report["states"] = states;
            }
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
