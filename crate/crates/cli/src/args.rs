use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ctpower", version, about = "Control power of controlled-teleportation schemes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze one scheme and report per-controller control power.
    Analyze(AnalyzeArgs),
    /// Sweep the PE4 amplitudes over a simplex grid (CSV or JSON).
    Sweep(SweepArgs),
    /// Recompute the reference values and print one line per check.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeName {
    Ghz,
    #[value(name = "2ghz")]
    TwoGhz,
    Nghz,
    Yang,
    Man,
    Pe4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Mc,
    Analytic,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Arbitrary,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct SchemeArgs {
    #[arg(long, value_enum)]
    pub scheme: SchemeName,
    /// Teleported qubits (nghz, yang, man).
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of controllers (nghz, yang, man).
    #[arg(long)]
    pub m: Option<usize>,
    /// Yang channel variant.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub variant: Option<u8>,
    /// PE4 squared amplitudes; all four or none (uniform).
    #[arg(long)]
    pub a2: Option<f64>,
    #[arg(long)]
    pub b2: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long)]
    pub d2: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Arbitrary)]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit with status 2 when a verdict fails.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    pub format: FormatArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Grid points per axis; the step is 1/(resolution − 1).
    #[arg(long, default_value_t = 5)]
    pub resolution: usize,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Swap one 2-GHZ correction for a wrong one; the affected checks must fail.
    #[arg(long)]
    pub corrupt_table: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    pub format: FormatArg,
    #[command(flatten)]
    pub output: OutputArgs,
}
