//! Divisive clustering of univariate data.
//!
//! The input is sorted once. The cluster with the largest spreadness
//! (population standard deviation divided by the interquartile range) is then
//! split at its median, over and over, until every cluster is either tight
//! enough, too small, impossible to split, or the cluster budget is spent.
//! Every cluster is a contiguous range of the sorted values, so per-cluster
//! statistics come out of prefix arrays in constant time.
//!
//! ```
//! use quist_core::{build_dataset, run_quist, Instance, RawConfig};
//!
//! let instances: Vec<Instance> = [100.0, 0.0, 0.0, 0.0]
//!     .iter()
//!     .enumerate()
//!     .map(|(id, &value)| Instance::new(id, value))
//!     .collect();
//! let dataset = build_dataset(&instances).unwrap();
//! let config = RawConfig::default().validate(dataset.len()).unwrap();
//! let result = run_quist(&dataset, &config);
//!
//! assert_eq!(result.leaves().len(), 2);
//! assert_eq!(result.assignment()[0], result.assignment()[3] + 1);
//! ```

pub mod engine;
mod error;
pub mod model;
pub mod stats;

pub use crate::engine::{
    canonical_form, run_quist, select_next, split_cluster, Cluster, ClusterStatus,
    ClusteringResult, DoneReason, Event, EventAction, Frontier, Node, RunCounters, SplitOutcome,
};
pub use crate::error::QuistError;
pub use crate::model::{
    build_dataset, validate_config, Config, Instance, RawConfig, SortedDataset,
};
pub use crate::stats::{
    cluster_stats, naive_cluster_stats, quartile, range_sigma, spreadness, ClusterStats,
    PrefixStats,
};
