//! Seeded synthetic datasets.

use quist_core::Instance;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureComponent {
    pub mean: f64,
    pub sd: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SyntheticKind {
    /// Uniform on `[low, high)`.
    Uniform { low: f64, high: f64 },
    /// Gaussian mixture; weights must sum to one.
    GaussianMixture { components: Vec<MixtureComponent> },
    /// A normal bulk plus `floor(fraction * n)` outliers placed at
    /// `bulk_mean + magnitude * scale`, where `scale` is `bulk_sd`, or 1 for
    /// a constant bulk.
    OutlierHeavy {
        bulk_mean: f64,
        bulk_sd: f64,
        fraction: f64,
        magnitude: f64,
    },
}

impl SyntheticKind {
    pub fn name(&self) -> &'static str {
        match self {
            SyntheticKind::Uniform { .. } => "uniform",
            SyntheticKind::GaussianMixture { .. } => "gaussian_mixture",
            SyntheticKind::OutlierHeavy { .. } => "outlier_heavy",
        }
    }

    /// Default parameters for a kind name as used on the command line.
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "uniform" => Some(SyntheticKind::Uniform {
                low: 0.0,
                high: 1.0,
            }),
            "gaussian_mixture" => Some(SyntheticKind::GaussianMixture {
                components: vec![
                    MixtureComponent {
                        mean: 0.0,
                        sd: 1.0,
                        weight: 0.5,
                    },
                    MixtureComponent {
                        mean: 10.0,
                        sd: 1.0,
                        weight: 0.3,
                    },
                    MixtureComponent {
                        mean: 50.0,
                        sd: 2.0,
                        weight: 0.2,
                    },
                ],
            }),
            "outlier_heavy" => Some(SyntheticKind::OutlierHeavy {
                bulk_mean: 0.0,
                bulk_sd: 1.0,
                fraction: 0.05,
                magnitude: 1000.0,
            }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub kind: SyntheticKind,
    pub n: usize,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(kind: SyntheticKind, n: usize, seed: u64) -> Self {
        Self { kind, n, seed }
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |msg: String| Err(BenchError::InvalidSpec(msg));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        match &self.kind {
            SyntheticKind::Uniform { low, high } => {
                if !(low.is_finite() && high.is_finite() && low < high) {
                    return bad(format!(
                        "uniform bounds [{low}, {high}) are not a valid interval"
                    ));
                }
            }
            SyntheticKind::GaussianMixture { components } => {
                if components.is_empty() {
                    return bad("mixture needs at least one component".into());
                }
                for c in components {
                    if !(c.mean.is_finite() && c.sd.is_finite() && c.sd >= 0.0) {
                        return bad(format!("bad mixture component {c:?}"));
                    }
                    if !(c.weight.is_finite() && c.weight >= 0.0) {
                        return bad(format!("bad mixture weight {}", c.weight));
                    }
                }
                let total: f64 = components.iter().map(|c| c.weight).sum();
                if (total - 1.0).abs() > 1e-9 {
                    return bad(format!("mixture weights sum to {total}, not 1"));
                }
            }
            SyntheticKind::OutlierHeavy {
                bulk_mean,
                bulk_sd,
                fraction,
                magnitude,
            } => {
                if !(bulk_mean.is_finite() && bulk_sd.is_finite() && *bulk_sd >= 0.0) {
                    return bad(format!("bad bulk parameters mean={bulk_mean} sd={bulk_sd}"));
                }
                if !(0.0..1.0).contains(fraction) {
                    return bad(format!("outlier fraction {fraction} is outside [0, 1)"));
                }
                if !magnitude.is_finite() {
                    return bad(format!("outlier magnitude {magnitude} is not finite"));
                }
            }
        }
        Ok(())
    }
}

fn normal(mean: f64, sd: f64) -> Normal<f64> {
    // Parameters are validated before this is reached.
    Normal::new(mean, sd).expect("validated normal parameters")
}

/// Generates `spec.n` instances with ids `0..n`. Pure in `spec`.
pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<Vec<Instance>, BenchError> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let values: Vec<f64> = match &spec.kind {
        SyntheticKind::Uniform { low, high } => {
            (0..n).map(|_| rng.random_range(*low..*high)).collect()
        }
        SyntheticKind::GaussianMixture { components } => {
            let dists: Vec<_> = components.iter().map(|c| normal(c.mean, c.sd)).collect();
            (0..n)
                .map(|_| {
                    let mut u: f64 = rng.random();
                    let mut pick = components.len() - 1;
                    for (i, c) in components.iter().enumerate() {
                        if u < c.weight {
                            pick = i;
                            break;
                        }
                        u -= c.weight;
                    }
                    dists[pick].sample(&mut rng)
                })
                .collect()
        }
        SyntheticKind::OutlierHeavy {
            bulk_mean,
            bulk_sd,
            fraction,
            magnitude,
        } => {
            let bulk = normal(*bulk_mean, *bulk_sd);
            let mut values: Vec<f64> = (0..n).map(|_| bulk.sample(&mut rng)).collect();
            let count = (fraction * n as f64).floor() as usize;
            let scale = if *bulk_sd > 0.0 { *bulk_sd } else { 1.0 };
            let outlier = bulk_mean + magnitude * scale;
            for i in index::sample(&mut rng, n, count) {
                values[i] = outlier;
            }
            values
        }
    };
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(id, v)| Instance::new(id, v))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use quist_core::naive_cluster_stats;

    fn outliers(bulk_sd: f64) -> SyntheticKind {
        SyntheticKind::OutlierHeavy {
            bulk_mean: 0.0,
            bulk_sd,
            fraction: 0.05,
            magnitude: 1000.0,
        }
    }

    #[test]
    fn deterministic_per_seed() {
        for name in ["uniform", "gaussian_mixture", "outlier_heavy"] {
            let spec = SyntheticSpec::new(SyntheticKind::from_name(name).unwrap(), 500, 42);
            assert_eq!(gen_synthetic(&spec).unwrap(), gen_synthetic(&spec).unwrap());
            let other = SyntheticSpec {
                seed: 43,
                ..spec.clone()
            };
            assert_ne!(
                gen_synthetic(&spec).unwrap(),
                gen_synthetic(&other).unwrap()
            );
        }
    }

    #[test]
    fn outlier_count_is_exact() {
        let spec = SyntheticSpec::new(outliers(1.0), 100, 7);
        let data = gen_synthetic(&spec).unwrap();
        assert_eq!(data.len(), 100);
        assert_eq!(data.iter().filter(|i| i.value == 1000.0).count(), 5);
        assert!(data.iter().enumerate().all(|(j, i)| i.id == j));
    }

    #[test]
    fn constant_bulk_has_zero_iqr() {
        let spec = SyntheticSpec::new(outliers(0.0), 100, 1);
        let mut values: Vec<f64> = gen_synthetic(&spec)
            .unwrap()
            .iter()
            .map(|i| i.value)
            .collect();
        assert_eq!(values.iter().filter(|&&v| v == 0.0).count(), 95);
        assert_eq!(values.iter().filter(|&&v| v == 1000.0).count(), 5);
        values.sort_by(f64::total_cmp);
        let stats = naive_cluster_stats(&values, 0, values.len()).unwrap();
        // Both quartiles sit in the constant bulk, so the zero branch applies.
        assert_eq!((stats.q1, stats.q3), (0.0, 0.0));
        assert_eq!(stats.psi, 0.0);
        assert!(stats.sigma > 200.0);
    }

    #[test]
    fn invalid_specs() {
        let cases = [
            SyntheticSpec::new(
                SyntheticKind::Uniform {
                    low: 0.0,
                    high: 1.0,
                },
                0,
                0,
            ),
            SyntheticSpec::new(
                SyntheticKind::Uniform {
                    low: 1.0,
                    high: 1.0,
                },
                5,
                0,
            ),
            SyntheticSpec::new(SyntheticKind::GaussianMixture { components: vec![] }, 5, 0),
            SyntheticSpec::new(
                SyntheticKind::GaussianMixture {
                    components: vec![MixtureComponent {
                        mean: 0.0,
                        sd: 1.0,
                        weight: 0.7,
                    }],
                },
                5,
                0,
            ),
            SyntheticSpec::new(
                SyntheticKind::OutlierHeavy {
                    bulk_mean: 0.0,
                    bulk_sd: 1.0,
                    fraction: 1.0,
                    magnitude: 9.0,
                },
                5,
                0,
            ),
        ];
        for spec in cases {
            assert!(
                matches!(gen_synthetic(&spec), Err(BenchError::InvalidSpec(_))),
                "{spec:?}"
            );
        }
    }
}
