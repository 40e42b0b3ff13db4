//! Single-linkage agglomerative clustering, done the slow way.
//!
//! [`baseline_agglomerative`] never looks at the sort order of its input: it
//! builds a minimum spanning tree over the complete distance graph with
//! Prim's algorithm (O(n^2) time, O(n) memory) and then removes the `k - 1`
//! heaviest tree edges, which is the standard equivalence between
//! single-linkage merge sequences and spanning trees. On a line the result
//! must equal cutting the `k - 1` widest gaps between neighbouring sorted
//! values, which [`largest_gap_partition`] computes directly.

use std::cmp::Ordering;

use crate::BenchError;

/// Clusters as sorted value lists, ordered by their smallest value.
pub type Partition = Vec<Vec<f64>>;

/// Equal-weight edges are cut lowest first, matching the gap oracle.
fn cut_order(a: (f64, f64), b: (f64, f64)) -> Ordering {
    b.0.total_cmp(&a.0).then(a.1.total_cmp(&b.1))
}

fn check_k(k: usize, n: usize) -> Result<(), BenchError> {
    if k == 0 || k > n {
        Err(BenchError::InvalidK { k, n })
    } else {
        Ok(())
    }
}

fn normalize(mut clusters: Partition) -> Partition {
    for c in &mut clusters {
        c.sort_by(f64::total_cmp);
    }
    clusters.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a.len().cmp(&b.len())));
    clusters
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Single-linkage clustering of `values` into `k` clusters in O(n^2).
///
/// When `k` exceeds the number of distinct values, which copies of a repeated
/// value end up together is unspecified.
pub fn baseline_agglomerative(values: &[f64], k: usize) -> Result<Partition, BenchError> {
    let n = values.len();
    check_k(k, n)?;

    // Prim over the implicit complete graph.
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut link = vec![0usize; n];
    // (weight, lower endpoint value, u, v)
    let mut edges: Vec<(f64, f64, usize, usize)> = Vec::with_capacity(n.saturating_sub(1));
    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..n {
        let mut next = usize::MAX;
        let mut next_w = f64::INFINITY;
        for j in 0..n {
            if in_tree[j] {
                continue;
            }
            let d = (values[j] - values[current]).abs();
            if d < best[j] {
                best[j] = d;
                link[j] = current;
            }
            if next == usize::MAX || best[j] < next_w {
                next = j;
                next_w = best[j];
            }
        }
        in_tree[next] = true;
        let u = link[next];
        edges.push((next_w, values[u].min(values[next]), u, next));
        current = next;
    }

    edges.sort_by(|a, b| cut_order((a.0, a.1), (b.0, b.1)));
    let mut parent: Vec<usize> = (0..n).collect();
    for &(_, _, u, v) in &edges[k - 1..] {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
        }
    }

    let mut slot = vec![usize::MAX; n];
    let mut clusters: Partition = Vec::with_capacity(k);
    for (i, &v) in values.iter().enumerate() {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = clusters.len();
            clusters.push(Vec::new());
        }
        clusters[slot[root]].push(v);
    }
    Ok(normalize(clusters))
}

/// Sorts the values and cuts the `k - 1` widest neighbour gaps.
pub fn largest_gap_partition(values: &[f64], k: usize) -> Result<Partition, BenchError> {
    let n = values.len();
    check_k(k, n)?;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut gaps: Vec<(f64, f64, usize)> = sorted
        .windows(2)
        .enumerate()
        .map(|(j, w)| (w[1] - w[0], w[0], j))
        .collect();
    gaps.sort_by(|a, b| cut_order((a.0, a.1), (b.0, b.1)).then(a.2.cmp(&b.2)));
    let mut cuts: Vec<usize> = gaps[..k - 1].iter().map(|g| g.2 + 1).collect();
    cuts.sort_unstable();

    let mut clusters = Vec::with_capacity(k);
    let mut start = 0;
    for cut in cuts.into_iter().chain(std::iter::once(n)) {
        clusters.push(sorted[start..cut].to_vec());
        start = cut;
    }
    Ok(normalize(clusters))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_groups() {
        let expected = vec![vec![1.0, 2.0], vec![10.0, 11.0]];
        assert_eq!(
            baseline_agglomerative(&[10.0, 1.0, 11.0, 2.0], 2).unwrap(),
            expected
        );
        assert_eq!(
            largest_gap_partition(&[10.0, 1.0, 11.0, 2.0], 2).unwrap(),
            expected
        );
    }

    #[test]
    fn extreme_k() {
        let values = [3.0, -1.0, 8.0, 2.5, 2.5];
        let singletons = baseline_agglomerative(&values, 5).unwrap();
        assert_eq!(
            singletons,
            vec![vec![-1.0], vec![2.5], vec![2.5], vec![3.0], vec![8.0]]
        );
        let one = baseline_agglomerative(&values, 1).unwrap();
        assert_eq!(one, vec![vec![-1.0, 2.5, 2.5, 3.0, 8.0]]);
    }

    #[test]
    fn equal_gaps_cut_lowest_first() {
        let values = [0.0, 1.0, 2.0, 3.0];
        let expected = vec![vec![0.0], vec![1.0, 2.0, 3.0]];
        assert_eq!(baseline_agglomerative(&values, 2).unwrap(), expected);
        assert_eq!(largest_gap_partition(&values, 2).unwrap(), expected);
    }

    #[test]
    fn rejects_bad_k() {
        assert_eq!(
            baseline_agglomerative(&[1.0], 0),
            Err(BenchError::InvalidK { k: 0, n: 1 })
        );
        assert_eq!(
            largest_gap_partition(&[1.0, 2.0], 3),
            Err(BenchError::InvalidK { k: 3, n: 2 })
        );
        assert!(baseline_agglomerative(&[], 1).is_err());
    }
}
