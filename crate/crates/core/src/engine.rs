//! The splitting loop.
//!
//! Clusters live in an arena indexed by creation order (the root is 0). Only
//! clusters that are still eligible to split sit in the [`Frontier`]; a
//! cluster leaves it exactly once, either by being split or by being marked
//! done, which bounds the number of loop iterations by the number of clusters
//! ever created.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::{self, Write as _};

use crate::model::{Config, SortedDataset};
use crate::stats::{cluster_stats_counted, ClusterStats, PrefixStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClusterStatus {
    /// Still eligible for splitting.
    Active,
    /// A leaf of the final partition.
    Done,
    /// An internal node of the tree.
    Split,
}

impl ClusterStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ClusterStatus::Active => "active",
            ClusterStatus::Done => "done",
            ClusterStatus::Split => "split",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DoneReason {
    /// Spreadness at or below the threshold.
    LowSpreadness,
    /// Size at or below the minimum cluster size.
    MinSize,
    /// Splitting at the median would leave one side empty.
    Indivisible,
    /// The cluster budget was exhausted while the cluster was still active.
    ClusterBudget,
}

impl DoneReason {
    pub fn as_str(self) -> &'static str {
        match self {
            DoneReason::LowSpreadness => "low_spreadness",
            DoneReason::MinSize => "min_size",
            DoneReason::Indivisible => "indivisible",
            DoneReason::ClusterBudget => "cluster_budget",
        }
    }
}

impl fmt::Display for DoneReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A contiguous range `[lo, hi)` of the sorted values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    pub id: usize,
    pub lo: usize,
    pub hi: usize,
    pub stats: ClusterStats,
    pub status: ClusterStatus,
    /// `Some` exactly when `status` is `Done`.
    pub done_reason: Option<DoneReason>,
}

impl Cluster {
    pub fn size(&self) -> usize {
        self.hi - self.lo
    }

    fn new(id: usize, lo: usize, hi: usize, stats: ClusterStats) -> Self {
        Self {
            id,
            lo,
            hi,
            stats,
            status: ClusterStatus::Active,
            done_reason: None,
        }
    }

    fn finish(&mut self, reason: DoneReason) {
        self.status = ClusterStatus::Done;
        self.done_reason = Some(reason);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SplitOutcome {
    Children { left: Cluster, right: Cluster },
    Indivisible,
}

/// Splits `parent` at its median: values `<= q2` go left, the rest go right.
///
/// Children get ids `next_id` and `next_id + 1`. Only the right side can
/// actually come out empty (the median is never below the range minimum), but
/// both sides are checked.
///
/// # Panics
///
/// If `parent` holds fewer than two values.
pub fn split_cluster(
    dataset: &SortedDataset,
    prefix: &PrefixStats,
    parent: &Cluster,
    next_id: usize,
) -> SplitOutcome {
    split_counted(
        dataset,
        prefix,
        parent,
        next_id,
        &mut RunCounters::default(),
    )
}

fn split_counted(
    dataset: &SortedDataset,
    prefix: &PrefixStats,
    parent: &Cluster,
    next_id: usize,
    counters: &mut RunCounters,
) -> SplitOutcome {
    assert!(
        parent.size() >= 2,
        "split_cluster needs at least two values, cluster {} has {}",
        parent.id,
        parent.size()
    );
    let values = dataset.values();
    let q2 = parent.stats.q2;
    let mut probes = 0;
    let left_len = values[parent.lo..parent.hi].partition_point(|&v| {
        probes += 1;
        v <= q2
    });
    counters.search_probes += probes;
    let mid = parent.lo + left_len;
    if mid == parent.lo || mid == parent.hi {
        return SplitOutcome::Indivisible;
    }
    let left = Cluster::new(
        next_id,
        parent.lo,
        mid,
        cluster_stats_counted(values, prefix, parent.lo, mid, &mut counters.fallback_scans),
    );
    let right = Cluster::new(
        next_id + 1,
        mid,
        parent.hi,
        cluster_stats_counted(values, prefix, mid, parent.hi, &mut counters.fallback_scans),
    );
    SplitOutcome::Children { left, right }
}

/// The active cluster with the largest spreadness strictly above `threshold`.
///
/// Ties go to the smaller `lo`, then the smaller id. Linear scan; the engine
/// itself uses [`Frontier`], which orders clusters the same way.
pub fn select_next(frontier: &[Cluster], threshold: f64) -> Option<usize> {
    frontier
        .iter()
        .filter(|c| c.status == ClusterStatus::Active && c.stats.psi > threshold)
        .max_by(|a, b| priority_cmp(a.stats.psi, a.lo, a.id, b.stats.psi, b.lo, b.id))
        .map(|c| c.id)
}

fn priority_cmp(
    psi_a: f64,
    lo_a: usize,
    id_a: usize,
    psi_b: f64,
    lo_b: usize,
    id_b: usize,
) -> Ordering {
    psi_a
        .total_cmp(&psi_b)
        .then_with(|| lo_b.cmp(&lo_a))
        .then_with(|| id_b.cmp(&id_a))
}

#[derive(Debug, Clone, Copy)]
struct FrontierEntry {
    psi: f64,
    lo: usize,
    id: usize,
}

impl PartialEq for FrontierEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for FrontierEntry {}

impl PartialOrd for FrontierEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FrontierEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        priority_cmp(self.psi, self.lo, self.id, other.psi, other.lo, other.id)
    }
}

/// Max-heap of splittable clusters keyed by `(psi, -lo, -id)`.
#[derive(Debug, Clone, Default)]
pub struct Frontier {
    heap: BinaryHeap<FrontierEntry>,
}

impl Frontier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, cluster: &Cluster) {
        self.heap.push(FrontierEntry {
            psi: cluster.stats.psi,
            lo: cluster.lo,
            id: cluster.id,
        });
    }

    /// Removes and returns the id of the highest-priority cluster.
    pub fn pop(&mut self) -> Option<usize> {
        self.heap.pop().map(|e| e.id)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}

/// A tree node: a cluster plus its links.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub cluster: Cluster,
    pub parent: Option<usize>,
    /// Left and right child ids, for split nodes.
    pub children: Option<[usize; 2]>,
    /// The median the node was split at, for split nodes.
    pub split_value: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventAction {
    Split { left: usize, right: usize },
    Done(DoneReason),
}

impl fmt::Display for EventAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventAction::Split { .. } => f.write_str("split"),
            EventAction::Done(reason) => write!(f, "done:{reason}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Event {
    /// 0 while settling the root, then the 1-based loop iteration.
    pub iteration: usize,
    pub cluster: usize,
    pub action: EventAction,
}

/// Work counters for one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunCounters {
    /// Clusters taken off the frontier (splits plus indivisible outcomes).
    pub iterations: usize,
    pub splits: usize,
    pub indivisible: usize,
    /// Constant-time range statistics evaluations.
    pub stats_evaluations: u64,
    /// Comparisons made while locating split points.
    pub search_probes: u64,
    /// Values rescanned because a prefix-sum variance was not accurate enough.
    pub fallback_scans: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    dataset: SortedDataset,
    config: Config,
    nodes: Vec<Node>,
    leaf_ids: Vec<usize>,
    assignment: Vec<usize>,
    events: Vec<Event>,
    counters: RunCounters,
}

impl ClusteringResult {
    pub fn dataset(&self) -> &SortedDataset {
        &self.dataset
    }

    pub fn n(&self) -> usize {
        self.dataset.len()
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    /// All clusters ever created, indexed by id.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn root(&self) -> &Node {
        &self.nodes[0]
    }

    /// Ids of the final clusters ordered by their position in the sorted data.
    pub fn leaf_ids(&self) -> &[usize] {
        &self.leaf_ids
    }

    pub fn leaves(&self) -> Vec<&Cluster> {
        self.leaf_ids
            .iter()
            .map(|&id| &self.nodes[id].cluster)
            .collect()
    }

    /// Leaf id of every instance, indexed by original id.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn counters(&self) -> &RunCounters {
        &self.counters
    }

    /// Values covered by a cluster, in sorted order.
    pub fn members(&self, cluster: &Cluster) -> &[f64] {
        &self.dataset.values()[cluster.lo..cluster.hi]
    }

    /// Original ids covered by a cluster, ascending.
    pub fn member_ids(&self, cluster: &Cluster) -> Vec<usize> {
        let mut ids = self.dataset.orig_ids()[cluster.lo..cluster.hi].to_vec();
        ids.sort_unstable();
        ids
    }
}

struct Run<'a> {
    dataset: &'a SortedDataset,
    config: &'a Config,
    prefix: PrefixStats,
    nodes: Vec<Node>,
    frontier: Frontier,
    events: Vec<Event>,
    counters: RunCounters,
}

impl Run<'_> {
    fn add(&mut self, cluster: Cluster, parent: Option<usize>) {
        debug_assert_eq!(cluster.id, self.nodes.len());
        self.nodes.push(Node {
            cluster,
            parent,
            children: None,
            split_value: None,
        });
    }

    fn mark_done(&mut self, id: usize, reason: DoneReason, iteration: usize) {
        self.nodes[id].cluster.finish(reason);
        self.events.push(Event {
            iteration,
            cluster: id,
            action: EventAction::Done(reason),
        });
    }

    /// Marks a fresh cluster done when it cannot be split, else queues it.
    fn settle(&mut self, id: usize, iteration: usize) {
        let c = self.nodes[id].cluster;
        if c.stats.psi <= self.config.spreadness_threshold {
            self.mark_done(id, DoneReason::LowSpreadness, iteration);
        } else if c.size() <= self.config.min_cluster_size {
            self.mark_done(id, DoneReason::MinSize, iteration);
        } else {
            self.frontier.push(&c);
        }
    }
}

/// Clusters `dataset` under `config`.
pub fn run_quist(dataset: &SortedDataset, config: &Config) -> ClusteringResult {
    let n = dataset.len();
    assert!(n > 0, "run_quist needs a non-empty dataset");
    let prefix = PrefixStats::from_dataset(dataset);
    let mut run = Run {
        dataset,
        config,
        prefix,
        nodes: Vec::new(),
        frontier: Frontier::new(),
        events: Vec::new(),
        counters: RunCounters::default(),
    };

    let root_stats = cluster_stats_counted(
        dataset.values(),
        &run.prefix,
        0,
        n,
        &mut run.counters.fallback_scans,
    );
    run.counters.stats_evaluations += 1;
    run.add(Cluster::new(0, 0, n, root_stats), None);
    run.settle(0, 0);

    let mut partition_size = 1;
    let mut iteration = 0;
    while partition_size < config.max_clusters {
        let Some(id) = run.frontier.pop() else {
            break;
        };
        iteration += 1;
        let parent = run.nodes[id].cluster;
        let next_id = run.nodes.len();
        let outcome = split_counted(
            run.dataset,
            &run.prefix,
            &parent,
            next_id,
            &mut run.counters,
        );
        match outcome {
            SplitOutcome::Children { left, right } => {
                run.counters.stats_evaluations += 2;
                run.counters.splits += 1;
                let node = &mut run.nodes[id];
                node.cluster.status = ClusterStatus::Split;
                node.children = Some([left.id, right.id]);
                node.split_value = Some(parent.stats.q2);
                run.events.push(Event {
                    iteration,
                    cluster: id,
                    action: EventAction::Split {
                        left: left.id,
                        right: right.id,
                    },
                });
                run.add(left, Some(id));
                run.add(right, Some(id));
                partition_size += 1;
                run.settle(left.id, iteration);
                run.settle(right.id, iteration);
            }
            SplitOutcome::Indivisible => {
                run.counters.indivisible += 1;
                run.mark_done(id, DoneReason::Indivisible, iteration);
            }
        }
    }
    run.counters.iterations = iteration;

    // Anything still queued here was stopped by the budget.
    let mut leftover = Vec::with_capacity(run.frontier.len());
    while let Some(id) = run.frontier.pop() {
        leftover.push(id);
    }
    for id in leftover {
        run.mark_done(id, DoneReason::ClusterBudget, iteration);
    }

    let mut leaf_ids: Vec<usize> = run
        .nodes
        .iter()
        .filter(|node| node.cluster.status == ClusterStatus::Done)
        .map(|node| node.cluster.id)
        .collect();
    leaf_ids.sort_unstable_by_key(|&id| run.nodes[id].cluster.lo);

    let mut assignment = vec![0; n];
    for &id in &leaf_ids {
        let c = &run.nodes[id].cluster;
        for &orig in &dataset.orig_ids()[c.lo..c.hi] {
            assignment[orig] = id;
        }
    }

    ClusteringResult {
        dataset: dataset.clone(),
        config: *config,
        nodes: run.nodes,
        leaf_ids,
        assignment,
        events: run.events,
        counters: run.counters,
    }
}

/// Order-independent text encoding of the tree.
///
/// One line per node in pre-order (left child first), holding the depth,
/// status, done reason, split value and the node's member values in sorted
/// order. Ids are deliberately absent, so two runs over the same multiset of
/// values encode identically however the input was ordered.
pub fn canonical_form(result: &ClusteringResult) -> String {
    let mut out = String::new();
    let mut stack = vec![(0usize, 0usize)];
    while let Some((id, depth)) = stack.pop() {
        let node = &result.nodes[id];
        let c = &node.cluster;
        let reason = c.done_reason.map_or("none", DoneReason::as_str);
        let _ = write!(out, "{depth} {} {reason}", c.status.as_str());
        if let Some(split) = node.split_value {
            let _ = write!(out, " split={split:?}");
        }
        out.push_str(" [");
        for (i, v) in result.members(c).iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v:?}");
        }
        out.push_str("]\n");
        if let Some([left, right]) = node.children {
            stack.push((right, depth + 1));
            stack.push((left, depth + 1));
        }
    }
    out
}
