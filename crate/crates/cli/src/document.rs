//! The `quist/1` JSON output document.
//!
//! Field order is fixed by the struct declarations and floats are written in
//! shortest round-trip form, so the same run always produces the same bytes.

use quist_core::{ClusteringResult, DoneReason, EventAction};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "quist/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub schema_version: String,
    pub n: usize,
    pub params: Params,
    pub tree: TreeNode,
    pub leaves: Vec<Leaf>,
    pub assignment: Vec<usize>,
    pub events: Vec<EventRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub max_clusters: usize,
    pub min_cluster_size: usize,
    pub spreadness_threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub sigma: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub psi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    pub id: usize,
    pub range: [usize; 2],
    pub stats: Stats,
    pub status: String,
    pub done_reason: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_value: Option<f64>,
    pub children: Vec<TreeNode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leaf {
    pub id: usize,
    pub size: usize,
    pub member_ids: Vec<usize>,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub iteration: usize,
    pub cluster: usize,
    pub action: String,
}

fn tree_node(result: &ClusteringResult, id: usize) -> TreeNode {
    let node = result.node(id);
    let c = &node.cluster;
    let s = c.stats;
    TreeNode {
        id,
        range: [c.lo, c.hi],
        stats: Stats {
            sigma: s.sigma,
            q1: s.q1,
            q2: s.q2,
            q3: s.q3,
            psi: s.psi,
        },
        status: c.status.as_str().to_string(),
        done_reason: c.done_reason.map_or("none", DoneReason::as_str).to_string(),
        split_value: node.split_value,
        children: node
            .children
            .map(|kids| kids.iter().map(|&k| tree_node(result, k)).collect())
            .unwrap_or_default(),
    }
}

impl OutputDocument {
    pub fn from_result(result: &ClusteringResult) -> Self {
        let cfg = result.config();
        let leaves = result
            .leaves()
            .into_iter()
            .map(|c| {
                let members = result.members(c);
                Leaf {
                    id: c.id,
                    size: c.size(),
                    member_ids: result.member_ids(c),
                    min: members[0],
                    max: members[members.len() - 1],
                }
            })
            .collect();
        let events = result
            .events()
            .iter()
            .map(|e| EventRecord {
                iteration: e.iteration,
                cluster: e.cluster,
                action: match e.action {
                    EventAction::Split { .. } => "split".to_string(),
                    EventAction::Done(reason) => reason.as_str().to_string(),
                },
            })
            .collect();
        OutputDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            n: result.n(),
            params: Params {
                max_clusters: cfg.max_clusters,
                min_cluster_size: cfg.min_cluster_size,
                spreadness_threshold: cfg.spreadness_threshold,
            },
            tree: tree_node(result, 0),
            leaves,
            assignment: result.assignment().to_vec(),
            events,
        }
    }

    /// Compact JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

pub fn emit_json(result: &ClusteringResult) -> String {
    OutputDocument::from_result(result).to_json()
}
