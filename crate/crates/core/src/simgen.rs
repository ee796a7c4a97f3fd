//! Seeded generators for synthetic clustering benchmarks: spherical (or
//! equicorrelated) Gaussian clusters with centers drawn on `[-5, 5]^p`,
//! optional overlapping pairs and uniform background noise kept outside
//! every cluster.
//!
//! The random source is ChaCha8 seeded from a `u64`, so the same spec always
//! produces the same bits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::{squared_distance, DataMatrix};
use crate::error::{Result, SpcError};
use crate::evaluation::LabeledPartition;

/// Half-width of the sampling box.
pub const BOX_HALF_WIDTH: f64 = 5.0;
/// Default within-cluster standard deviation.
pub const DEFAULT_CLUSTER_SD: f64 = 0.5;
/// Accepted share of an overlapping pair's points lying in both balls.
pub const OVERLAP_RANGE: (f64, f64) = (0.15, 0.20);
/// Feature correlation inside correlated clusters; the last one uses
/// [`WEAK_CORRELATION`].
pub const STRONG_CORRELATION: f64 = 0.9;
pub const WEAK_CORRELATION: f64 = 0.5;

const NOISE_ATTEMPTS_PER_POINT: usize = 10_000;
const OVERLAP_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub n_clustered: usize,
    pub p: usize,
    pub k: usize,
    pub noise_count: usize,
    /// Pull the clusters of each pair (0,1), (2,3), … into partial overlap.
    pub overlap: bool,
    pub correlated: bool,
    pub cluster_sd: f64,
    pub seed: u64,
}

impl ScenarioSpec {
    /// Benchmark presets. Scenarios: 1 separated, 2 overlapping,
    /// 3 separated with noise, 4 overlapping with noise. The low-dimensional
    /// setting has 400 clustered points in 20 dimensions with 200 noise
    /// points; the high-dimensional one 100 points in 200 dimensions with 50
    /// noise points. Both use 10 clusters.
    pub fn preset(scenario: u8, high_dim: bool, seed: u64) -> Result<Self> {
        let (overlap, noisy) = match scenario {
            1 => (false, false),
            2 => (true, false),
            3 => (false, true),
            4 => (true, true),
            other => {
                return Err(SpcError::InvalidParameter(format!(
                    "scenario must be 1-4, got {other}"
                )))
            }
        };
        let (n_clustered, p, noise) = if high_dim { (100, 200, 50) } else { (400, 20, 200) };
        Ok(Self {
            n_clustered,
            p,
            k: 10,
            noise_count: if noisy { noise } else { 0 },
            overlap,
            correlated: false,
            cluster_sd: DEFAULT_CLUSTER_SD,
            seed,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(SpcError::InvalidParameter(msg));
        if self.k == 0 || self.p == 0 {
            return fail("k and p must be positive".into());
        }
        if self.n_clustered < self.k {
            return fail(format!(
                "need at least one point per cluster ({} < {})",
                self.n_clustered, self.k
            ));
        }
        if self.overlap && self.k < 2 {
            return fail("overlap needs at least two clusters".into());
        }
        if !(self.cluster_sd > 0.0 && self.cluster_sd.is_finite()) {
            return fail(format!("cluster sd must be positive, got {}", self.cluster_sd));
        }
        if self.n_clustered + self.noise_count < 2 {
            return fail("need at least two points in total".into());
        }
        Ok(())
    }

    pub fn n_total(&self) -> usize {
        self.n_clustered + self.noise_count
    }
}

/// Generated data with its ground truth. Clustered points come first,
/// grouped by cluster, followed by the noise points.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedData {
    pub data: DataMatrix,
    pub truth: LabeledPartition,
    pub centers: Vec<Vec<f64>>,
    /// Largest member-to-center distance per cluster.
    pub radii: Vec<f64>,
    /// Overlap share achieved for each pair (0,1), (2,3), …; empty without
    /// overlap.
    pub overlap_fractions: Vec<f64>,
}

/// Cluster sizes as equal as possible; the first `n mod k` clusters get one
/// extra point.
pub fn cluster_sizes(n: usize, k: usize) -> Vec<usize> {
    (0..k).map(|j| n / k + usize::from(j < n % k)).collect()
}

fn offsets(rng: &mut ChaCha8Rng, count: usize, p: usize, sd: f64, correlation: Option<(f64, bool)>) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| match correlation {
            None => (0..p).map(|_| sd * rng.sample::<f64, _>(StandardNormal)).collect(),
            Some((rho, alternate)) => {
                // Shared factor gives corr(x_a, x_b) = ±rho for every pair.
                let shared: f64 = rng.sample(StandardNormal);
                (0..p)
                    .map(|m| {
                        let own: f64 = rng.sample(StandardNormal);
                        let sign = if alternate && m % 2 == 1 { -1.0 } else { 1.0 };
                        sd * ((1.0 - rho).sqrt() * own + sign * rho.sqrt() * shared)
                    })
                    .collect()
            }
        })
        .collect()
}

fn radius(offsets: &[Vec<f64>]) -> f64 {
    offsets
        .iter()
        .map(|o| o.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

/// Share of the two clusters' points lying within both radii when the
/// second center sits at `shift` relative to the first.
fn overlap_fraction(a: &[Vec<f64>], ra: f64, b: &[Vec<f64>], rb: f64, shift: &[f64]) -> f64 {
    let (ra2, rb2) = (ra * ra, rb * rb);
    let zero = vec![0.0; shift.len()];
    let from_a = a
        .iter()
        .filter(|o| squared_distance(o, shift) <= rb2)
        .count();
    let from_b = b
        .iter()
        .filter(|o| {
            let x: Vec<f64> = o.iter().zip(shift).map(|(v, s)| v + s).collect();
            squared_distance(&x, &zero) <= ra2
        })
        .count();
    (from_a + from_b) as f64 / (a.len() + b.len()) as f64
}

/// Places the second center on the line through both centers so that the
/// pair's overlap share falls inside [`OVERLAP_RANGE`].
fn place_overlapping(
    center_a: &[f64],
    center_b: &[f64],
    a: &[Vec<f64>],
    b: &[Vec<f64>],
) -> Result<(Vec<f64>, f64)> {
    let (ra, rb) = (radius(a), radius(b));
    let mut direction: Vec<f64> = center_b.iter().zip(center_a).map(|(x, y)| x - y).collect();
    let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        direction[0] = 1.0;
    } else {
        direction.iter_mut().for_each(|v| *v /= norm);
    }
    let at = |d: f64| -> Vec<f64> { direction.iter().map(|v| v * d).collect() };
    let (low, high) = OVERLAP_RANGE;
    // Far enough apart that the balls are disjoint.
    let (mut near, mut far) = (0.0, ra + rb + 1.0);
    for _ in 0..OVERLAP_BISECTIONS {
        let mid = 0.5 * (near + far);
        let share = overlap_fraction(a, ra, b, rb, &at(mid));
        if share > high {
            near = mid;
        } else if share < low {
            far = mid;
        } else {
            let center = center_a.iter().zip(at(mid)).map(|(c, s)| c + s).collect();
            return Ok((center, share));
        }
    }
    Err(SpcError::GenerationBudget(
        "could not reach the requested overlap; try more points per cluster".into(),
    ))
}

/// Draws a data set for `spec`.
pub fn generate(spec: &ScenarioSpec) -> Result<GeneratedData> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let p = spec.p;
    let mut centers: Vec<Vec<f64>> = (0..spec.k)
        .map(|_| (0..p).map(|_| rng.random_range(-BOX_HALF_WIDTH..BOX_HALF_WIDTH)).collect())
        .collect();
    let sizes = cluster_sizes(spec.n_clustered, spec.k);
    let members: Vec<Vec<Vec<f64>>> = sizes
        .iter()
        .enumerate()
        .map(|(j, &size)| {
            let correlation = spec.correlated.then(|| {
                let rho = if j + 1 == spec.k && spec.k > 1 {
                    WEAK_CORRELATION
                } else {
                    STRONG_CORRELATION
                };
                (rho, j % 2 == 1)
            });
            offsets(&mut rng, size, p, spec.cluster_sd, correlation)
        })
        .collect();
    let radii: Vec<f64> = members.iter().map(|m| radius(m)).collect();

    let mut overlap_fractions = Vec::new();
    if spec.overlap {
        for pair in 0..spec.k / 2 {
            let (a, b) = (2 * pair, 2 * pair + 1);
            let (moved, share) = place_overlapping(&centers[a], &centers[b], &members[a], &members[b])?;
            centers[b] = moved;
            overlap_fractions.push(share);
        }
    }

    let mut values = Vec::with_capacity(spec.n_total() * p);
    let mut labels = Vec::with_capacity(spec.n_total());
    for (j, cluster) in members.iter().enumerate() {
        for offset in cluster {
            values.extend(offset.iter().zip(&centers[j]).map(|(o, c)| o + c));
            labels.push(Some(j));
        }
    }

    let budget = NOISE_ATTEMPTS_PER_POINT * spec.noise_count.max(1);
    let mut attempts = 0;
    let mut accepted = 0;
    while accepted < spec.noise_count {
        if attempts == budget {
            return Err(SpcError::GenerationBudget(format!(
                "placed {accepted} of {} noise points outside the clusters; \
                 lower the noise count or the cluster sd",
                spec.noise_count
            )));
        }
        attempts += 1;
        let x: Vec<f64> = (0..p).map(|_| rng.random_range(-BOX_HALF_WIDTH..BOX_HALF_WIDTH)).collect();
        let outside = centers
            .iter()
            .zip(&radii)
            .all(|(c, r)| squared_distance(&x, c) > r * r);
        if outside {
            values.extend(x);
            labels.push(None);
            accepted += 1;
        }
    }

    Ok(GeneratedData {
        data: DataMatrix::new(values, spec.n_total(), p)?,
        truth: LabeledPartition::new(labels),
        centers,
        radii,
        overlap_fractions,
    })
}
