//! Range statistics over the sorted value array.
//!
//! Quantiles use linear interpolation at position `p * (m - 1)` within a
//! range of `m` values, so the second quartile is the ordinary median.
//! Standard deviations are population deviations (divide by `m`).
//!
//! The fast path answers any `[lo, hi)` query in constant time from
//! [`PrefixStats`]. [`naive_cluster_stats`] recomputes everything from the
//! raw values and exists to check the fast path.

use crate::error::QuistError;
use crate::model::SortedDataset;

/// Boxplot-style summary of one contiguous range plus its spreadness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterStats {
    pub sigma: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub psi: f64,
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl DoubleDouble {
    #[inline]
    fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// `a - b`, exactly.
    #[inline]
    fn difference(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, -b);
        Self { hi, lo }
    }

    /// `a * b`, exactly.
    #[inline]
    fn product(a: f64, b: f64) -> Self {
        let p = a * b;
        Self {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }

    #[inline]
    fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }

    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    #[inline]
    fn mul(self, other: Self) -> Self {
        let p = self.hi * other.hi;
        let e = self.hi.mul_add(other.hi, -p);
        let e = e + (self.hi * other.lo + self.lo * other.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    #[inline]
    fn div_f64(self, d: f64) -> Self {
        let q1 = self.hi / d;
        let r = self.sub(Self::from_f64(q1 * d).add(Self::from_f64(q1.mul_add(d, -(q1 * d)))));
        let q2 = r.hi / d;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Prefix sums over the values, answering range variance queries.
///
/// Values are centered on the middle element, and the centered sums and
/// squared sums are carried in double-double precision. Each query also
/// bounds the rounding error of the prefix result; when the bound is not at
/// least twelve orders of magnitude below the smallest variance the range can
/// have (`(max - min)^2 / 2m`), the range is rescanned with a compensated
/// two-pass sum instead. Ranges holding a single distinct value have variance
/// exactly zero.
#[derive(Debug, Clone)]
pub struct PrefixStats {
    values: Vec<f64>,
    center: f64,
    sum: Vec<DoubleDouble>,
    sumsq: Vec<DoubleDouble>,
    sumabs: Vec<f64>,
}

/// Per-operation rounding unit with headroom over the 2^-104 of the
/// double-double primitives.
const ERROR_UNIT: f64 = 1.0 / (1u128 << 100) as f64;
const FAST_PATH_MARGIN: f64 = 1e-12;

impl PrefixStats {
    /// Builds prefix arrays over `values`, which must be sorted non-decreasing.
    pub fn new(values: &[f64]) -> Self {
        debug_assert!(
            values.windows(2).all(|w| w[0] <= w[1]),
            "values must be sorted"
        );
        let center = values.get(values.len() / 2).copied().unwrap_or(0.0);
        let n = values.len();
        let mut sum = Vec::with_capacity(n + 1);
        let mut sumsq = Vec::with_capacity(n + 1);
        let mut sumabs = Vec::with_capacity(n + 1);
        let (mut s, mut sq, mut abs) = (DoubleDouble::default(), DoubleDouble::default(), 0.0);
        sum.push(s);
        sumsq.push(sq);
        sumabs.push(abs);
        for &v in values {
            let d = DoubleDouble::difference(v, center);
            s = s.add(d);
            sq = sq.add(d.mul(d));
            abs += d.hi.abs();
            sum.push(s);
            sumsq.push(sq);
            sumabs.push(abs);
        }
        Self {
            values: values.to_vec(),
            center,
            sum,
            sumsq,
            sumabs,
        }
    }

    pub fn from_dataset(dataset: &SortedDataset) -> Self {
        Self::new(dataset.values())
    }

    /// Number of values covered (one less than the prefix array length).
    pub fn len(&self) -> usize {
        self.sum.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sum of `values[0..j)`.
    pub fn prefix_sum(&self, j: usize) -> f64 {
        self.sum[j]
            .add(DoubleDouble::product(j as f64, self.center))
            .to_f64()
    }

    /// Sum of squares of `values[0..j)`.
    pub fn prefix_sumsq(&self, j: usize) -> f64 {
        // sum x^2 = sum d^2 + 2c sum d + j c^2 with d = x - c
        let c = DoubleDouble::from_f64(self.center);
        let cross = self.sum[j].mul(c).mul(DoubleDouble::from_f64(2.0));
        let shift = DoubleDouble::product(j as f64, self.center).mul(c);
        self.sumsq[j].add(cross).add(shift).to_f64()
    }

    /// Sum of `values[lo..hi)`.
    pub fn range_sum(&self, lo: usize, hi: usize) -> f64 {
        self.sum[hi]
            .sub(self.sum[lo])
            .add(DoubleDouble::product((hi - lo) as f64, self.center))
            .to_f64()
    }

    /// Population variance of `values[lo..hi)` and the number of values the
    /// exact fallback had to rescan (zero on the constant-time path).
    pub(crate) fn range_variance(&self, lo: usize, hi: usize) -> (f64, usize) {
        let (first, last) = (self.values[lo], self.values[hi - 1]);
        if first == last {
            return (0.0, 0);
        }
        let m = (hi - lo) as f64;
        let s = self.sum[hi].sub(self.sum[lo]);
        let sq = self.sumsq[hi].sub(self.sumsq[lo]);
        // m * var = sum(d^2) - sum(d)^2 / m
        let scaled = sq.sub(s.mul(s).div_f64(m)).to_f64();

        let reach = (first - self.center).abs().max((last - self.center).abs());
        let bound = ERROR_UNIT * hi as f64 * (self.sumsq[hi].hi + 2.0 * reach * self.sumabs[hi]);
        let spread = last - first;
        if bound <= FAST_PATH_MARGIN * 0.5 * spread * spread {
            ((scaled / m).max(0.0), 0)
        } else {
            (exact_variance(&self.values[lo..hi]), hi - lo)
        }
    }
}

/// Compensated two-pass variance, used when the prefix result is too
/// uncertain.
fn exact_variance(xs: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let total = xs.iter().fold(DoubleDouble::default(), |acc, &x| {
        acc.add(DoubleDouble::from_f64(x))
    });
    let mean = total.div_f64(m);
    let ss = xs.iter().fold(DoubleDouble::default(), |acc, &x| {
        let d = DoubleDouble::from_f64(x).sub(mean);
        acc.add(d.mul(d))
    });
    (ss.to_f64() / m).max(0.0)
}

fn check_range(lo: usize, hi: usize, n: usize) -> Result<(), QuistError> {
    if lo >= hi || hi > n {
        Err(QuistError::EmptyRange { lo, hi })
    } else {
        Ok(())
    }
}

#[inline]
fn interpolate(values: &[f64], lo: usize, hi: usize, p: f64) -> f64 {
    let m = hi - lo;
    let pos = p * (m - 1) as f64;
    let f = pos.floor();
    let r = pos - f;
    let base = lo + f as usize;
    let a = values[base];
    if r == 0.0 || base + 1 >= hi {
        return a;
    }
    let b = values[base + 1];
    (a + r * (b - a)).clamp(a, b)
}

/// The `p`-quantile of `values[lo..hi)`.
pub fn quartile(dataset: &SortedDataset, lo: usize, hi: usize, p: f64) -> Result<f64, QuistError> {
    check_range(lo, hi, dataset.len())?;
    Ok(interpolate(dataset.values(), lo, hi, p.clamp(0.0, 1.0)))
}

/// Population standard deviation of `values[lo..hi)` in constant time.
pub fn range_sigma(prefix: &PrefixStats, lo: usize, hi: usize) -> Result<f64, QuistError> {
    check_range(lo, hi, prefix.len())?;
    Ok(prefix.range_variance(lo, hi).0.sqrt())
}

/// `sigma / (q3 - q1)`, or exactly zero when the quartiles coincide.
pub fn spreadness(sigma: f64, q1: f64, q3: f64) -> f64 {
    if q3 == q1 {
        0.0
    } else {
        (sigma / (q3 - q1)).min(f64::MAX)
    }
}

/// Sigma, quartiles and spreadness of `values[lo..hi)` via the prefix arrays.
pub fn cluster_stats(
    dataset: &SortedDataset,
    prefix: &PrefixStats,
    lo: usize,
    hi: usize,
) -> Result<ClusterStats, QuistError> {
    check_range(lo, hi, dataset.len())?;
    Ok(cluster_stats_counted(
        dataset.values(),
        prefix,
        lo,
        hi,
        &mut 0,
    ))
}

/// [`cluster_stats`] without range checks; adds the number of values the
/// variance fallback rescanned to `rescanned`.
#[inline]
pub(crate) fn cluster_stats_counted(
    values: &[f64],
    prefix: &PrefixStats,
    lo: usize,
    hi: usize,
    rescanned: &mut u64,
) -> ClusterStats {
    let (var, scanned) = prefix.range_variance(lo, hi);
    *rescanned += scanned as u64;
    let sigma = var.sqrt();
    let q1 = interpolate(values, lo, hi, 0.25);
    let q2 = interpolate(values, lo, hi, 0.5);
    let q3 = interpolate(values, lo, hi, 0.75);
    ClusterStats {
        sigma,
        q1,
        q2,
        q3,
        psi: spreadness(sigma, q1, q3),
    }
}

/// Reference implementation of [`cluster_stats`] working on the raw slice:
/// two-pass variance and quantiles read straight off a sorted copy.
pub fn naive_cluster_stats(
    values: &[f64],
    lo: usize,
    hi: usize,
) -> Result<ClusterStats, QuistError> {
    check_range(lo, hi, values.len())?;
    let mut xs = values[lo..hi].to_vec();
    xs.sort_by(f64::total_cmp);
    let m = xs.len() as f64;

    let mean = xs.iter().sum::<f64>() / m;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / m;
    let sigma = var.sqrt();

    let q = |p: f64| -> f64 {
        let pos = p * (xs.len() - 1) as f64;
        let below = pos.floor() as usize;
        let frac = pos - below as f64;
        if frac == 0.0 {
            xs[below]
        } else {
            let (a, b) = (xs[below], xs[below + 1]);
            (a + frac * (b - a)).clamp(a, b)
        }
    };
    let (q1, q2, q3) = (q(0.25), q(0.5), q(0.75));
    let psi = if q1 == q3 {
        0.0
    } else {
        (sigma / (q3 - q1)).min(f64::MAX)
    };
    Ok(ClusterStats {
        sigma,
        q1,
        q2,
        q3,
        psi,
    })
}
