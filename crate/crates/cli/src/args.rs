use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Modular data of the rank-one parafermion algebra K(sl_2, k).
#[derive(Debug, Parser)]
#[command(name = "parafuse", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Level k >= 2
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub k: Option<i64>,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Unitarity and normalization tolerance for the S-matrix
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Character depth in integer L(0) levels
    #[arg(long, global = true)]
    pub trunc: Option<u32>,

    /// Write the document here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, env = "PARAFUSE_CACHE")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical labels in enumeration order
    Labels,
    /// Exact conformal weights
    Weights,
    /// Quantum dimensions
    Qdim,
    /// Normalized S-matrix
    Smatrix,
    /// Fusion product of two labels
    Fuse {
        /// First label as m,n
        #[arg(long)]
        a: String,
        /// Second label as m,n
        #[arg(long)]
        b: String,
    },
    /// Full fusion table
    Table,
    /// Parafermion characters
    Char {
        /// Restrict to one label m,n
        #[arg(long)]
        label: Option<String>,
    },
    /// Run every property check at this level
    Verify,
}
