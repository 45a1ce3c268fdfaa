//! Command-line grammar.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

/// Classifier that labels a query by how little it disturbs the entropy of
/// its class's density matrix.
#[derive(Debug, Parser)]
#[command(name = "qlear", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the decision surface of a built-in problem as CSV.
    Demo {
        /// Problem to solve.
        #[arg(value_enum)]
        problem: Problem,
        /// Entropy order used by the subclass decision rule.
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        /// Grid cells per axis (at least 2).
        #[arg(long, default_value_t = 201)]
        resolution: usize,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Select parameters by two-fold cross-validation and save a model.
    Fit {
        /// Training CSV: no header, comma-separated, label in the last column.
        #[arg(long)]
        data: PathBuf,
        /// Fraction of each class kept as stored representatives.
        #[arg(long, default_value_t = 0.5)]
        pool_fraction: f64,
        /// Seed for representative sampling and fold assignment.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON file overriding the stock parameter search grid.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Shift features to zero mean and unit spread before training.
        #[arg(long)]
        standardize: bool,
        /// Where to write the model JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Label a CSV of samples with a saved model.
    Predict {
        /// Model JSON produced by `fit`.
        #[arg(long)]
        model: PathBuf,
        /// Input CSV; a trailing label column is detected from the width.
        #[arg(long)]
        data: PathBuf,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-validated holdout error of each dataset over several seeds.
    Benchmark {
        /// Dataset CSVs: no header, comma-separated, label in the last column.
        #[arg(long = "data", num_args = 1.., value_name = "PATH")]
        data: Vec<PathBuf>,
        /// Number of seeds (0 through n-1) per dataset.
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        /// JSON file overriding the stock parameter search grid.
        #[arg(long)]
        grid: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    /// Two diagonal classes of sign-opposite corners; one pool per class.
    Xor,
    /// Conjunction corners; needs one singleton subclass per training point.
    And,
    /// Bundled 150-flower dataset restricted to the two petal attributes,
    /// with 45 singleton-subclass representatives and 105 held-out samples.
    Iris34,
}
