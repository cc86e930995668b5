//! The `tvamp` command line: file ingestion, invariant computation and
//! identity checks, reported as one `kind key=value ...` record per line.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on
//! input errors. Global flags can be set through `TVAMP_R`,
//! `TVAMP_PRECISION`, `TVAMP_THREADS` and `TVAMP_SEED`.

mod amp;
mod input;
mod quantum;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use tvamp_core::{DoubleDouble, FramedSurgery};

pub use input::CliError;
pub use report::{Record, Report};

#[derive(Debug, Parser)]
#[command(name = "tvamp", version, about = "Quantum invariants and exact positive geometry")]
pub struct Cli {
    /// Level: colors run over 0..=r-2.
    #[arg(long, global = true, env = "TVAMP_R")]
    pub r: Option<u32>,
    /// Mantissa bits: <=24 single, <=64 double, larger double-double.
    #[arg(long, global = true, env = "TVAMP_PRECISION", default_value_t = 64)]
    pub precision: u32,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "TVAMP_THREADS")]
    pub threads: Option<usize>,
    /// Seed for randomized commands.
    #[arg(long, global = true, env = "TVAMP_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Append wall-clock timings (makes output run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recoupling symbols.
    #[command(subcommand)]
    Recoupling(RecouplingCommand),
    /// Planar spin networks.
    #[command(subcommand)]
    Spinnet(SpinnetCommand),
    /// Turaev–Viro invariant of a closed triangulation.
    Tv {
        file: PathBuf,
        /// Also report enumeration statistics.
        #[arg(long)]
        report_colorings: bool,
    },
    /// Pachner moves on a triangulation.
    Pachner {
        file: PathBuf,
        #[arg(long = "move", requires = "at")]
        kind: Option<MoveKind>,
        /// Triangle (2-3) or tetrahedron (1-4) index.
        #[arg(long)]
        at: Option<usize>,
        /// Apply this many random moves instead (uses --seed).
        #[arg(long, conflicts_with = "kind")]
        random: Option<usize>,
        /// Compare TV before and after (needs --r).
        #[arg(long)]
        check_tv: bool,
        /// Write the resulting triangulation here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Turaev–Viro operator of a thickened surface.
    Tvcode {
        #[arg(long)]
        surface: PathBuf,
        /// Check idempotence and symmetry.
        #[arg(long)]
        check_projector: bool,
        /// Check the rank against this value.
        #[arg(long)]
        expect_rank: Option<usize>,
    },
    /// Reshetikhin–Turaev invariant of a surgery presentation.
    Rt {
        #[arg(long)]
        surgery: FramedSurgery,
    },
    /// Cross-checks between modules.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Exact positive geometry.
    #[command(subcommand)]
    Amp(AmpCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MoveKind {
    #[value(name = "2-3")]
    TwoThree,
    #[value(name = "1-4")]
    OneFour,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Records,
    Tsv,
}

#[derive(Debug, Subcommand)]
pub enum RecouplingCommand {
    /// Delta, theta, Tet and F-move entries for every admissible tuple.
    Table {
        #[arg(long, value_enum, default_value_t = TableFormat::Records)]
        format: TableFormat,
        /// Also sweep orthogonality and pentagon identities.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum SpinnetCommand {
    /// Evaluate a closed planar spin network.
    Eval {
        file: PathBuf,
        #[arg(long, default_value_t = tvamp_core::spinnet::DEFAULT_MAX_DEPTH)]
        max_depth: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    /// TV of a triangulation against |RT|^2 of a surgery presentation.
    TvRt {
        #[arg(long)]
        triangulation: PathBuf,
        #[arg(long)]
        surgery: FramedSurgery,
    },
    /// A TV amplitude and a polygon canonical form side by side.
    Thm2 {
        #[arg(long)]
        triangulation: PathBuf,
        #[arg(long)]
        z: PathBuf,
        #[arg(long)]
        y: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum AmpCommand {
    /// Plücker coordinates and three-term relations.
    Pluecker { file: PathBuf },
    /// Total positivity of maximal minors.
    Positive { file: PathBuf },
    /// `Y = C Z`, bracket signs and the Jacobian rank.
    Map {
        #[arg(long)]
        c: PathBuf,
        #[arg(long)]
        z: PathBuf,
    },
    /// Moment map image and hypersimplex membership.
    MomentMap {
        #[arg(long)]
        c: PathBuf,
    },
    /// Canonical form of the polygon spanned by the rows of Z at Y.
    PolygonForm {
        #[arg(long)]
        z: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// 1-based triangles such as "1,2,3;1,3,4" (default: fan from 1).
        #[arg(long)]
        triangulation: Option<String>,
        /// Evaluate over every triangulation and check they agree.
        #[arg(long)]
        all: bool,
    },
}

/// Command-line arguments echoed in the report: everything but the flags
/// that may not change results.
fn echo(args: &[OsString]) -> String {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        let a = a.to_string_lossy();
        if skip {
            skip = false;
            continue;
        }
        if a == "--threads" {
            skip = true;
            continue;
        }
        if a.starts_with("--threads=") || a == "--timings" {
            continue;
        }
        out.push(a.into_owned());
    }
    out.join(" ")
}

enum Precision {
    Single,
    Double,
    Extended,
}

impl Precision {
    fn from_bits(bits: u32) -> Self {
        match bits {
            0..=24 => Self::Single,
            25..=64 => Self::Double,
            _ => Self::Extended,
        }
    }
}

fn execute(cli: &Cli, report: &mut Report) -> Result<(), CliError> {
    if let Command::Amp(cmd) = &cli.command {
        return amp::run(cmd, report);
    }
    match Precision::from_bits(cli.precision) {
        Precision::Single => quantum::run::<f32>(cli, report),
        Precision::Double => quantum::run::<f64>(cli, report),
        Precision::Extended => quantum::run::<DoubleDouble>(cli, report),
    }
}

/// Parses `args`, runs the command and writes the report; returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if code == 0 { 0 } else { 2 };
        }
    };
    let mut report = Report::default();
    report.push(
        Record::new("command")
            .field("args", echo(&args))
            .field("precision", cli.precision)
            .field("seed", cli.seed),
    );
    let start = Instant::now();
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| execute(&cli, &mut report)),
            Err(e) => Err(CliError::Invalid(format!("thread pool: {e}"))),
        },
        None => execute(&cli, &mut report),
    };
    if cli.timings {
        report.push(Record::new("timing").field("elapsed_ms", start.elapsed().as_millis()));
    }
    let _ = out.write_all(report.to_string().as_bytes());
    match result {
        Err(e) => {
            let _ = writeln!(err, "{}", e.record());
            2
        }
        Ok(()) if report.failures() > 0 => 1,
        Ok(()) => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_drops_thread_flags() {
        let args: Vec<OsString> = ["tvamp", "tv", "x.tri", "--threads", "8", "--r", "3", "--threads=2", "--timings"]
            .iter()
            .map(Into::into)
            .collect();
        assert_eq!(echo(&args), "tv x.tri --r 3");
    }

    #[test]
    fn precision_mapping() {
        assert!(matches!(Precision::from_bits(24), Precision::Single));
        assert!(matches!(Precision::from_bits(64), Precision::Double));
        assert!(matches!(Precision::from_bits(128), Precision::Extended));
    }
}
