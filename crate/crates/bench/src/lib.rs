//! Benchmark support for `quist-core`: seeded synthetic data, a quadratic
//! single-linkage baseline, and a scaling harness that times the sort and
//! splitting phases separately.

pub mod baseline;
pub mod scaling;
pub mod synthetic;

use thiserror::Error;

pub use crate::baseline::{baseline_agglomerative, largest_gap_partition, Partition};
pub use crate::scaling::{run_scaling, write_csv, RatioRow, ScalingReport, ScalingRow};
pub use crate::synthetic::{gen_synthetic, MixtureComponent, SyntheticKind, SyntheticSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("cluster count {k} must be between 1 and {n}")]
    InvalidK { k: usize, n: usize },
    #[error("invalid scaling run: {0}")]
    InvalidScaling(String),
}
