//! Input types, validation, and the initial sort.

use crate::error::QuistError;

/// One univariate observation. `id` is the position in the original input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Instance {
    pub id: usize,
    pub value: f64,
}

impl Instance {
    pub fn new(id: usize, value: f64) -> Self {
        Self { id, value }
    }
}

/// Values sorted non-decreasing, with the original id of every sorted slot.
///
/// Equal values are ordered by ascending original id, so the layout is fully
/// determined by the input multiset of `(id, value)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedDataset {
    values: Vec<f64>,
    orig_ids: Vec<usize>,
}

impl SortedDataset {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `orig_ids()[j]` is the original id of the instance at sorted position `j`.
    pub fn orig_ids(&self) -> &[usize] {
        &self.orig_ids
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Inverse of `orig_ids`: sorted position of every original id.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.len()];
        for (j, &id) in self.orig_ids.iter().enumerate() {
            pos[id] = j;
        }
        pos
    }
}

/// Sorts the instances by value (ties by id). The input slice is left untouched.
pub fn build_dataset(instances: &[Instance]) -> Result<SortedDataset, QuistError> {
    let n = instances.len();
    if n == 0 {
        return Err(QuistError::EmptyInput);
    }
    let mut seen = vec![false; n];
    for inst in instances {
        if !inst.value.is_finite() {
            return Err(QuistError::NonFiniteValue {
                id: inst.id,
                value: inst.value,
            });
        }
        if inst.id >= n || seen[inst.id] {
            return Err(QuistError::InvalidIds { id: inst.id, n });
        }
        seen[inst.id] = true;
    }

    // total_cmp keeps -0.0 ahead of 0.0, so the sorted bit patterns do not
    // depend on input order either.
    let mut order: Vec<(f64, usize)> = instances.iter().map(|i| (i.value, i.id)).collect();
    order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let (values, orig_ids) = order.into_iter().unzip();
    Ok(SortedDataset { values, orig_ids })
}

/// User-supplied options before defaults are applied.
///
/// Signed integers so that negative values coming from a command line can be
/// rejected with a proper diagnostic.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RawConfig {
    pub max_clusters: Option<i64>,
    pub min_cluster_size: Option<i64>,
    pub spreadness_threshold: Option<f64>,
}

impl RawConfig {
    pub fn validate(&self, n: usize) -> Result<Config, QuistError> {
        validate_config(self, n)
    }
}

/// Resolved run parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    /// Upper bound on the number of clusters in the final partition.
    pub max_clusters: usize,
    /// Clusters of this size or smaller are never split.
    pub min_cluster_size: usize,
    /// Clusters are split only while their spreadness is strictly above this.
    pub spreadness_threshold: f64,
}

pub const DEFAULT_MIN_CLUSTER_SIZE: usize = 1;
pub const DEFAULT_SPREADNESS_THRESHOLD: f64 = 1.0;

/// Applies defaults; an absent cluster bound becomes `n`.
pub fn validate_config(raw: &RawConfig, n: usize) -> Result<Config, QuistError> {
    if n == 0 {
        return Err(QuistError::EmptyInput);
    }
    let max_clusters = match raw.max_clusters {
        None => n,
        Some(k) if k >= 1 => usize::try_from(k)
            .map_err(|_| QuistError::InvalidConfig(format!("max_clusters {k} is too large")))?,
        Some(k) => {
            return Err(QuistError::InvalidConfig(format!(
                "max_clusters must be at least 1, got {k}"
            )))
        }
    };
    let min_cluster_size = match raw.min_cluster_size {
        None => DEFAULT_MIN_CLUSTER_SIZE,
        Some(m) if m >= 1 => usize::try_from(m)
            .map_err(|_| QuistError::InvalidConfig(format!("min_cluster_size {m} is too large")))?,
        Some(m) => {
            return Err(QuistError::InvalidConfig(format!(
                "min_cluster_size must be at least 1, got {m}"
            )))
        }
    };
    let spreadness_threshold = match raw.spreadness_threshold {
        None => DEFAULT_SPREADNESS_THRESHOLD,
        Some(t) if t.is_finite() && t > 0.0 => t,
        Some(t) => {
            return Err(QuistError::InvalidConfig(format!(
                "spreadness_threshold must be a positive number, got {t}"
            )))
        }
    };
    Ok(Config {
        max_clusters,
        min_cluster_size,
        spreadness_threshold,
    })
}
