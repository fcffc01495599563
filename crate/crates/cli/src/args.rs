use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "hpm",
    version,
    about = "Partitioning of high-order homogeneous polynomial models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a model instance: write the affinity tensor and the planted
    /// labeling.
    Generate {
        /// Model parameter file (a `[model]` section plus one of
        /// `[counts]`, `[bisection]`, `[cuts]`, `[motif]`).
        config: PathBuf,
        #[arg(long, default_value = "tensor.txt")]
        out_tensor: PathBuf,
        #[arg(long, default_value = "truth.txt")]
        out_truth: PathBuf,
    },
    /// Run the projected-gradient solver on a tensor file.
    Solve {
        #[arg(long)]
        tensor: PathBuf,
        /// Ground-truth labeling; enables the agreement score.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, default_value_t = 0.05)]
        zeta: f64,
        #[arg(long, default_value_t = 100)]
        outer: usize,
        #[arg(long, default_value_t = 40)]
        inner: usize,
        #[arg(long, default_value_t = 20)]
        descent: usize,
        #[arg(long, default_value_t = 0.05)]
        gamma: f64,
        /// Random restarts of the inner negative-direction search.
        #[arg(long, default_value_t = 1)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Result file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append one record to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exhaustive maximization over balanced labelings (n ≤ 16).
    Oracle {
        #[arg(long)]
        tensor: PathBuf,
    },
    /// Build the dual diagonal for a labeling and estimate the certificate
    /// condition.
    Certify {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        gamma: f64,
        #[arg(long, default_value_t = 8)]
        starts: usize,
        #[arg(long, default_value_t = 500)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The two-setting reference experiment (n=20, m=4, strong and weak
    /// counting weights) with per-trial CSV output.
    #[command(name = "experiment-appendix-d")]
    ExperimentAppendixD {
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "appendix_d.csv")]
        out_csv: PathBuf,
    },
    /// Grid sweep over model parameters with recovery statistics and the
    /// statistical-condition report per grid point.
    Sweep {
        config: PathBuf,
        #[arg(long, default_value = "sweep.csv")]
        out_csv: PathBuf,
        #[arg(long, default_value = "sweep_aggregate.csv")]
        out_aggregate: PathBuf,
    },
    /// Convert between the canonical and dense text formats (n ≤ 5).
    TensorConvert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        to: ConvertTarget,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ConvertTarget {
    Dense,
    Canonical,
}
