use proptest::prelude::*;
use quist_core::{
    build_dataset, canonical_form, cluster_stats, naive_cluster_stats, quartile, range_sigma,
    run_quist, ClusterStatus, ClusteringResult, Config, DoneReason, Instance, PrefixStats,
    RawConfig, SortedDataset,
};

fn instances(values: &[f64]) -> Vec<Instance> {
    values
        .iter()
        .enumerate()
        .map(|(id, &v)| Instance::new(id, v))
        .collect()
}

fn dataset(values: &[f64]) -> SortedDataset {
    build_dataset(&instances(values)).unwrap()
}

/// Values drawn from a small pool mixed with continuous ones, so duplicates
/// and constant runs show up often.
fn mixed_values(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    let pooled = prop_oneof![Just(0.0), Just(1.0), Just(10.0), Just(-3.5), Just(1000.0),];
    let value = prop_oneof![pooled, -1e6..1e6f64, (-50i32..50).prop_map(f64::from)];
    prop::collection::vec(value, 1..max_len)
}

fn raw_config() -> impl Strategy<Value = RawConfig> {
    (
        prop::option::of(1i64..40),
        prop::option::of(1i64..6),
        prop::option::of(prop_oneof![Just(1.0), 0.3..3.0f64]),
    )
        .prop_map(|(k, m, t)| RawConfig {
            max_clusters: k,
            min_cluster_size: m,
            spreadness_threshold: t,
        })
}

fn check_invariants(result: &ClusteringResult, cfg: &Config) {
    let n = result.n();
    let values = result.dataset().values();
    let leaves = result.leaves();

    let mut next = 0;
    for leaf in &leaves {
        assert_eq!(leaf.lo, next, "leaves must tile [0, n)");
        assert!(leaf.lo < leaf.hi);
        next = leaf.hi;
    }
    assert_eq!(next, n);

    let positions = result.dataset().positions();
    let mut seen = vec![0usize; n];
    for (orig, &leaf) in result.assignment().iter().enumerate() {
        let c = &result.node(leaf).cluster;
        assert_eq!(c.status, ClusterStatus::Done);
        let pos = positions[orig];
        assert!(c.lo <= pos && pos < c.hi);
        seen[orig] += 1;
    }
    assert!(seen.iter().all(|&s| s == 1));

    assert!(leaves.len() <= cfg.max_clusters.min(n));
    let counters = result.counters();
    assert!(counters.iterations <= 2 * n);
    assert!(counters.splits < cfg.max_clusters.min(n));
    assert_eq!(counters.splits + 1, leaves.len());
    assert_eq!(counters.stats_evaluations, 1 + 2 * counters.splits as u64);

    for node in result.nodes() {
        let c = &node.cluster;
        assert_eq!(c.status == ClusterStatus::Done, c.done_reason.is_some());
        assert_ne!(
            c.status,
            ClusterStatus::Active,
            "no cluster may stay active"
        );
        if let Some([l, r]) = node.children {
            let (left, right) = (&result.node(l).cluster, &result.node(r).cluster);
            assert_eq!(
                (left.lo, left.hi, right.lo, right.hi),
                (c.lo, right.lo, left.hi, c.hi)
            );
            assert!(values[left.hi - 1] < values[right.lo]);
            assert!(values[left.hi - 1] <= node.split_value.unwrap());
        }
        match c.done_reason {
            Some(DoneReason::LowSpreadness) => assert!(c.stats.psi <= cfg.spreadness_threshold),
            Some(DoneReason::MinSize) => assert!(c.size() <= cfg.min_cluster_size),
            Some(DoneReason::Indivisible) => assert_eq!(values[c.hi - 1], c.stats.q2),
            Some(DoneReason::ClusterBudget) => assert_eq!(leaves.len(), cfg.max_clusters),
            None => {}
        }
    }

    // Equal values never end up in different leaves.
    let ids = result.dataset().orig_ids();
    for (j, pair) in values.windows(2).enumerate() {
        if pair[0] == pair[1] {
            assert_eq!(result.assignment()[ids[j]], result.assignment()[ids[j + 1]]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn prefix_sigma_matches_two_pass(values in prop::collection::vec(-1e6..1e6f64, 1..300), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let ds = dataset(&values);
        let prefix = PrefixStats::from_dataset(&ds);
        let (mut lo, mut hi) = (a.index(ds.len()), b.index(ds.len()));
        if lo > hi { std::mem::swap(&mut lo, &mut hi); }
        let hi = hi + 1;
        let fast = cluster_stats(&ds, &prefix, lo, hi).unwrap();
        let slow = naive_cluster_stats(ds.values(), lo, hi).unwrap();
        prop_assert!((fast.sigma - slow.sigma).abs() <= 1e-9 * slow.sigma.max(1.0));
        prop_assert!((fast.psi - slow.psi).abs() <= 1e-9 * slow.psi.max(1.0));
        prop_assert_eq!((fast.q1, fast.q2, fast.q3), (slow.q1, slow.q2, slow.q3));
    }

    #[test]
    fn tight_clusters_far_from_zero(
        centers in prop::collection::vec(prop_oneof![Just(0.0), Just(1e6), Just(-1e6), -1e6..1e6f64], 1..4),
        offsets in prop::collection::vec((0usize..4, 0.0..1e-3f64), 1..200),
        a in any::<prop::sample::Index>(),
        b in any::<prop::sample::Index>(),
    ) {
        let values: Vec<f64> = offsets.iter().map(|&(c, off)| centers[c % centers.len()] + off).collect();
        let ds = dataset(&values);
        let prefix = PrefixStats::from_dataset(&ds);
        let (mut lo, mut hi) = (a.index(ds.len()), b.index(ds.len()));
        if lo > hi { std::mem::swap(&mut lo, &mut hi); }
        let hi = hi + 1;
        let fast = range_sigma(&prefix, lo, hi).unwrap();
        let slow = naive_cluster_stats(ds.values(), lo, hi).unwrap().sigma;
        prop_assert!((fast - slow).abs() <= 1e-9 * slow.max(1.0), "{} vs {}", fast, slow);
    }

    #[test]
    fn sigma_is_translation_covariant(values in prop::collection::vec(-1e3..1e3f64, 1..200), shift in -1e6..1e6f64) {
        let shifted: Vec<f64> = values.iter().map(|v| v + shift).collect();
        let base = range_sigma(&PrefixStats::from_dataset(&dataset(&values)), 0, values.len()).unwrap();
        let moved = range_sigma(&PrefixStats::from_dataset(&dataset(&shifted)), 0, values.len()).unwrap();
        prop_assert!((moved - base).abs() <= 1e-9, "{} vs {}", moved, base);
    }

    #[test]
    fn quartile_monotone_in_p(values in mixed_values(100), p1 in 0.0..=1.0f64, p2 in 0.0..=1.0f64) {
        let ds = dataset(&values);
        let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        let a = quartile(&ds, 0, ds.len(), lo).unwrap();
        let b = quartile(&ds, 0, ds.len(), hi).unwrap();
        prop_assert!(a <= b);
        prop_assert!(ds.values()[0] <= a && b <= ds.values()[ds.len() - 1]);
    }

    #[test]
    fn psi_zero_iff_quartiles_meet(values in mixed_values(60)) {
        let ds = dataset(&values);
        let s = cluster_stats(&ds, &PrefixStats::from_dataset(&ds), 0, ds.len()).unwrap();
        prop_assert!(s.psi >= 0.0 && s.psi.is_finite());
        prop_assert!(s.q1 <= s.q2 && s.q2 <= s.q3);
        prop_assert_eq!(s.psi == 0.0, s.q1 == s.q3);
    }

    #[test]
    fn sorted_values_ignore_input_order(values in mixed_values(80), seed in any::<u64>()) {
        let inst = instances(&values);
        let mut shuffled = inst.clone();
        shuffle(&mut shuffled, seed);
        let a = build_dataset(&inst).unwrap();
        let b = build_dataset(&shuffled).unwrap();
        prop_assert_eq!(a.values(), b.values());
        for w in a.values().windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn engine_invariants(values in mixed_values(300), raw in raw_config()) {
        let ds = dataset(&values);
        let cfg = raw.validate(ds.len()).unwrap();
        let result = run_quist(&ds, &cfg);
        check_invariants(&result, &cfg);
        prop_assert_eq!(&result, &run_quist(&ds, &cfg));
    }

    #[test]
    fn permutation_invariance(values in mixed_values(200), raw in raw_config(), seed in any::<u64>()) {
        let n = values.len();
        let mut perm: Vec<usize> = (0..n).collect();
        shuffle(&mut perm, seed);
        // Instance at new position i is the original instance perm[i].
        let permuted: Vec<f64> = perm.iter().map(|&p| values[p]).collect();

        let ds_a = dataset(&values);
        let ds_b = dataset(&permuted);
        let cfg = raw.validate(n).unwrap();
        let a = run_quist(&ds_a, &cfg);
        let b = run_quist(&ds_b, &cfg);
        prop_assert_eq!(canonical_form(&a), canonical_form(&b));
        for (i, &p) in perm.iter().enumerate() {
            prop_assert_eq!(b.assignment()[i], a.assignment()[p]);
        }
    }

    #[test]
    fn budget_is_monotone(values in mixed_values(200), k in 1usize..30) {
        let ds = dataset(&values);
        let leaves = |k: usize| {
            let cfg = RawConfig { max_clusters: Some(k as i64), ..Default::default() }.validate(ds.len()).unwrap();
            run_quist(&ds, &cfg).leaves().len()
        };
        prop_assert!(leaves(k) <= leaves(k + 1));
    }
}

fn shuffle<T>(items: &mut [T], seed: u64) {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    items.shuffle(&mut rng);
}

#[test]
fn identical_values_have_zero_psi() {
    for n in 1..=200 {
        let ds = dataset(&vec![-7.25; n]);
        let s = cluster_stats(&ds, &PrefixStats::from_dataset(&ds), 0, n).unwrap();
        assert_eq!(s.psi, 0.0);
        assert_eq!(s.sigma, 0.0);
    }
}
