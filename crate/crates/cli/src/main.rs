//! `spectra`: cospectrality checks, certificates and searches from the shell.

mod commands;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spectra_core::{PitMode, SpectrumKind};

use input::PartitionArg;

#[derive(Debug, Parser)]
#[command(name = "spectra", version, about = "Multivariate graph spectra and similarity certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Exit with status 1 on a negative verdict.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare the pencils of two graphs (graph6) or digraphs (digraph6).
    Check(CheckArgs),
    /// Reconstruct Q with QᵀAQ = B fixing every class indicator.
    ReconstructQ(ReconstructArgs),
    /// Smith normal form of an integer matrix.
    Snf(SnfArgs),
    /// Walk matrix, extended walk matrix, their ranks and d_n.
    Walk(WalkArgs),
    /// Search all graphs of one order (or a corpus) for cospectral mates.
    Search(SearchArgs),
    /// Look for digraphs separated only by the off-diagonal blocks.
    Probe(ProbeArgs),
    /// Check pencil equality against certificate existence on every pair.
    VerifyTheorem(TheoremArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PitArgs {
    /// Identity-testing mode.
    #[arg(long, value_enum, default_value_t = ModeArg::Prob)]
    pub mode: ModeArg,
    /// Evaluation points in probabilistic mode.
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    /// Random seed.
    #[arg(long, env = "SPECTRA_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Largest deterministic evaluation grid.
    #[arg(long, default_value_t = 2_000_000)]
    pub node_budget: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Prob,
    Det,
}

impl From<ModeArg> for PitMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Prob => PitMode::Probabilistic,
            ModeArg::Det => PitMode::Deterministic,
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// First input file; `-` reads stdin.
    pub a: PathBuf,
    /// Second input file.
    pub b: PathBuf,
    /// Relation: s, gs, gdls, gbdls, gbls or hgbls.
    #[arg(long, default_value = "gbdls", value_parser = parse_relation)]
    pub relation: SpectrumKind,
    /// `degree` or `explicit:0,1;2,3`.
    #[arg(long, default_value = "degree", value_parser = input::parse_partition_arg)]
    pub partition: PartitionArg,
    #[command(flatten)]
    pub pit: PitArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathArg {
    Exact,
    Constructive,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FallbackArg {
    None,
    Constructive,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Source graph A; `-` reads stdin.
    pub a: PathBuf,
    /// Target graph B.
    pub b: PathBuf,
    /// Which reconstruction to run.
    #[arg(long, value_enum, default_value_t = PathArg::Both)]
    pub path: PathArg,
    /// Eigenvalue clustering tolerance.
    #[arg(long, default_value_t = spectra_core::similarity::DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// `degree` or `explicit:0,1;2,3`.
    #[arg(long, default_value = "degree", value_parser = input::parse_partition_arg)]
    pub partition: PartitionArg,
    /// Run the constructive path when the exact one is rank deficient.
    #[arg(long, value_enum, default_value_t = FallbackArg::None)]
    pub fallback: FallbackArg,
}

#[derive(Debug, Args)]
pub struct SnfArgs {
    /// Matrix file: `rows cols` then the entries.
    #[arg(long, value_name = "PATH")]
    pub load: PathBuf,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    /// Graph or digraph file; `-` reads stdin.
    pub a: PathBuf,
    /// `degree` or `explicit:0,1;2,3`.
    #[arg(long, default_value = "degree", value_parser = input::parse_partition_arg)]
    pub partition: PartitionArg,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Order of the builtin enumeration.
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    /// Graph6 corpus instead of the builtin enumeration.
    #[arg(long, value_name = "PATH")]
    pub corpus: Option<PathBuf>,
    /// Relation: s, gs, gdls, gbdls, gbls or hgbls.
    #[arg(long, default_value = "s", value_parser = parse_relation)]
    pub relation: SpectrumKind,
    #[command(flatten)]
    pub pit: PitArgs,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Largest number of pairs compared.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    /// Report only pairs that are not isomorphic.
    #[arg(long)]
    pub non_isomorphic: bool,
    /// Skip the certificate attached to each mate.
    #[arg(long)]
    pub no_certify: bool,
    /// Run the constructive path when the exact one is rank deficient.
    #[arg(long, value_enum, default_value_t = FallbackArg::None)]
    pub fallback: FallbackArg,
    /// Eigenvalue clustering tolerance.
    #[arg(long, default_value_t = spectra_core::similarity::DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// Also write the mate list as CSV.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    /// Order, at most 5.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Random seed.
    #[arg(long, env = "SPECTRA_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Digraphs examined.
    #[arg(long, default_value_t = 4096)]
    pub budget: u64,
    /// Largest number of pairs compared.
    #[arg(long, default_value_t = 1_000_000)]
    pub pair_budget: u64,
    /// Identity-testing mode.
    #[arg(long, value_enum, default_value_t = ModeArg::Prob)]
    pub mode: ModeArg,
    /// Evaluation points in probabilistic mode.
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Eigenvalue clustering tolerance.
    #[arg(long, default_value_t = spectra_core::similarity::DEFAULT_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct TheoremArgs {
    /// Order of the labeled graphs.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Identity-testing mode.
    #[arg(long, value_enum, default_value_t = ModeArg::Det)]
    pub mode: ModeArg,
    /// Evaluation points in probabilistic mode.
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    /// Random seed.
    #[arg(long, env = "SPECTRA_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Largest number of same-partition pairs examined.
    #[arg(long, default_value_t = 4_000_000)]
    pub budget: u64,
    /// Skip pairs whose degree partitions differ.
    #[arg(long)]
    pub no_cross: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Eigenvalue clustering tolerance.
    #[arg(long, default_value_t = spectra_core::similarity::DEFAULT_TOLERANCE)]
    pub tol: f64,
}

fn parse_relation(s: &str) -> Result<SpectrumKind, String> {
    s.parse()
}

/// How a command finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    Negative,
    Contradiction,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok((value, verdict)) => {
            if let Err(e) = output::emit(&value, &cli.global) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            match verdict {
                Verdict::Contradiction => ExitCode::from(3),
                Verdict::Negative if cli.global.strict => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
