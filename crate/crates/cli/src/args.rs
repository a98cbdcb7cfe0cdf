//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "depgraph",
    version,
    about = "Rebuilds a versioned dependency graph from metadata records and \
             reports usage, popularity and timeliness metrics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub opts: CommonOpts,
}

#[derive(Args, Debug)]
pub struct CommonOpts {
    /// Input file; repeat for several. `.csv` is read as CSV, anything
    /// else as NDJSON.
    #[arg(long, global = true)]
    pub input: Vec<PathBuf>,

    /// Directory report files are written into.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Report file format.
    #[arg(long, global = true, value_enum, default_value_t)]
    pub format: FormatArg,

    /// Snapshot date (YYYY-MM-DD); defaults to the latest release seen.
    #[arg(long, global = true)]
    pub snapshot: Option<String>,

    /// Handling of dependencies whose endpoint has no artifact record.
    #[arg(long = "on-missing", global = true, value_enum, default_value_t)]
    pub on_missing: MissingArg,

    /// Dependency scopes to drop at ingest (comma-separated, repeatable).
    #[arg(long = "exclude-scopes", global = true, value_delimiter = ',')]
    pub exclude_scopes: Vec<String>,

    /// Damping factor of the popularity recurrences.
    #[arg(long, global = true, default_value_t = 0.85)]
    pub damping: f64,

    /// Version-popularity mode.
    #[arg(long, global = true, value_enum, default_value_t)]
    pub mode: ModeArg,

    /// Convergence tolerance of the popularity iterations.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Iteration cap of the popularity fixed points.
    #[arg(long = "max-iter", global = true, default_value_t = 200)]
    pub max_iter: usize,

    /// Histogram bin count.
    #[arg(long, global = true, default_value_t = 30)]
    pub bins: usize,

    /// Restrict reports to multi-version libraries within the
    /// --min-versions/--max-versions range.
    #[arg(long = "study-subjects", global = true)]
    pub study_subjects: bool,

    #[arg(long = "min-versions", global = true, default_value_t = 5)]
    pub min_versions: usize,

    #[arg(long = "max-versions", global = true, default_value_t = 200)]
    pub max_versions: usize,

    /// Worker threads for metric evaluation: 0 picks the default pool,
    /// 1 forces sequential execution.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Count only users released within a version's lifespan in the
    /// timeliness numerator instead of all direct users.
    #[arg(long = "strict-timeliness", global = true)]
    pub strict_timeliness: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print graph counts.
    Stats,
    /// Write the per-version report.
    Versions,
    /// Write the per-library report.
    Libraries,
    /// Write transitional-pattern frequencies.
    Patterns,
    /// Write a positional histogram.
    Hist {
        /// Which positional distribution to bin.
        #[arg(long, value_enum, default_value_t)]
        metric: HistMetric,
    },
    /// Write (percent-active, library-popularity) pairs and their rank
    /// correlation.
    Correlate,
    /// Print and write the activity-status aggregate.
    Summary,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FormatArg {
    #[default]
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MissingArg {
    #[default]
    Stub,
    Skip,
    Strict,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ModeArg {
    #[default]
    Literal,
    Normalized,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HistMetric {
    #[default]
    PositionalActive,
    PositionalPopular,
}
