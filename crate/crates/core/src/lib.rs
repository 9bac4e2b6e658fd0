//! Modular data of the rank-one parafermion vertex operator algebra
//! `K(sl_2, k)`.
//!
//! * [`labels`]: canonical module labels and exact conformal weights.
//! * [`modular`]: the normalized S-matrix and quantum dimensions.
//! * [`fusion`]: closed-form fusion rules and fusion-ring checks.
//! * [`verlinde`]: the Verlinde-formula oracle for the fusion rules.
//! * [`qseries`]: truncated q-series, string functions and module characters.
//! * [`verify`]: the aggregated property suite.

pub mod error;
pub mod fusion;
pub mod labels;
pub mod modular;
pub mod qseries;
pub mod tolerance;
pub mod verify;
pub mod verlinde;

pub use error::{Error, Result};
pub use fusion::{contragredient, fusion_table, pf_fuse, FusionTable};
pub use labels::{AffineLabel, CanonicalLabel, LatticeLabel, Level, PfLabel};
pub use modular::{global_dimension, qdim, qdims, s_matrix, s_matrix_with, QDim, SMatrix};
pub use tolerance::Tolerances;
pub use verlinde::{verlinde_table, VerlindeResult};
