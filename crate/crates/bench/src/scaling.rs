//! Timing harness comparing measured growth against `n log n`.

use std::io::{self, Write};
use std::time::{Duration, Instant};

use quist_core::{build_dataset, run_quist, RawConfig};

use crate::synthetic::{gen_synthetic, SyntheticSpec};
use crate::BenchError;

/// Median timings for one input size.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    /// Sorting the input into a dataset.
    pub sort_time: Duration,
    /// Prefix arrays plus the splitting loop.
    pub loop_time: Duration,
    /// Median over repetitions of `sort + loop`.
    pub total_time: Duration,
    pub iterations: usize,
    pub leaf_count: usize,
    pub stats_evaluations: u64,
    /// Values rescanned by the exact variance fallback.
    pub fallback_scans: u64,
    /// Every repetition's total time, in run order.
    pub samples: Vec<Duration>,
}

impl ScalingRow {
    /// Range-statistics evaluations per loop iteration (0 when nothing was split).
    pub fn stats_per_iteration(&self) -> f64 {
        if self.iterations == 0 {
            0.0
        } else {
            (self.stats_evaluations - 1) as f64 / self.iterations as f64
        }
    }
}

/// Growth between consecutive sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub from_n: usize,
    pub to_n: usize,
    /// `total_time(to_n) / total_time(from_n)`.
    pub measured: f64,
    /// `(to_n ln to_n) / (from_n ln from_n)`.
    pub predicted: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    pub ratios: Vec<RatioRow>,
}

fn median(samples: &[Duration]) -> Duration {
    let mut sorted = samples.to_vec();
    sorted.sort_unstable();
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2
    }
}

fn n_log_n(n: usize) -> f64 {
    let n = n as f64;
    n * n.ln().max(1.0)
}

/// Times the sort and splitting phases with default clustering options.
///
/// `template.n` is ignored; each size gets its own data from the template's
/// kind and seed. Runs are sequential so timings stay comparable.
pub fn run_scaling(
    sizes: &[usize],
    template: &SyntheticSpec,
    repetitions: usize,
) -> Result<ScalingReport, BenchError> {
    if repetitions < 3 {
        return Err(BenchError::InvalidScaling(format!(
            "need at least 3 repetitions, got {repetitions}"
        )));
    }
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BenchError::InvalidScaling(
            "sizes must be non-empty and strictly ascending".into(),
        ));
    }

    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let instances = gen_synthetic(&template.with_n(n))?;
        let config = RawConfig::default()
            .validate(n)
            .map_err(|e| BenchError::InvalidScaling(e.to_string()))?;
        let mut sort_times = Vec::with_capacity(repetitions);
        let mut loop_times = Vec::with_capacity(repetitions);
        let mut totals = Vec::with_capacity(repetitions);
        let mut last = None;
        for _ in 0..repetitions {
            let start = Instant::now();
            let dataset = build_dataset(&instances).expect("generated data is valid");
            let sorted = Instant::now();
            let result = run_quist(&dataset, &config);
            let done = Instant::now();
            sort_times.push(sorted - start);
            loop_times.push(done - sorted);
            totals.push(done - start);
            last = Some(result);
        }
        let result = last.expect("at least one repetition");
        rows.push(ScalingRow {
            n,
            sort_time: median(&sort_times),
            loop_time: median(&loop_times),
            total_time: median(&totals),
            iterations: result.counters().iterations,
            leaf_count: result.leaf_ids().len(),
            stats_evaluations: result.counters().stats_evaluations,
            fallback_scans: result.counters().fallback_scans,
            samples: totals,
        });
    }

    let ratios = rows
        .windows(2)
        .map(|w| RatioRow {
            from_n: w[0].n,
            to_n: w[1].n,
            measured: w[1].total_time.as_secs_f64() / w[0].total_time.as_secs_f64().max(1e-12),
            predicted: n_log_n(w[1].n) / n_log_n(w[0].n),
        })
        .collect();
    Ok(ScalingReport { rows, ratios })
}

/// Writes one CSV line per row, times in seconds.
pub fn write_csv<W: Write>(mut out: W, rows: &[ScalingRow]) -> io::Result<()> {
    writeln!(
        out,
        "n,sort_time,loop_time,total_time,iterations,leaf_count,stats_evaluations,fallback_scans"
    )?;
    for r in rows {
        writeln!(
            out,
            "{},{:.9},{:.9},{:.9},{},{},{},{}",
            r.n,
            r.sort_time.as_secs_f64(),
            r.loop_time.as_secs_f64(),
            r.total_time.as_secs_f64(),
            r.iterations,
            r.leaf_count,
            r.stats_evaluations,
            r.fallback_scans
        )?;
    }
    Ok(())
}

impl ScalingReport {
    /// Human-readable table of rows and growth ratios.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{:>10} {:>12} {:>12} {:>12} {:>10} {:>8}\n",
            "n", "sort_s", "loop_s", "total_s", "iters", "leaves"
        );
        for r in &self.rows {
            s.push_str(&format!(
                "{:>10} {:>12.6} {:>12.6} {:>12.6} {:>10} {:>8}\n",
                r.n,
                r.sort_time.as_secs_f64(),
                r.loop_time.as_secs_f64(),
                r.total_time.as_secs_f64(),
                r.iterations,
                r.leaf_count
            ));
        }
        for ratio in &self.ratios {
            s.push_str(&format!(
                "growth {} -> {}: measured {:.2}x, n log n predicts {:.2}x\n",
                ratio.from_n, ratio.to_n, ratio.measured, ratio.predicted
            ));
        }
        s
    }
}
