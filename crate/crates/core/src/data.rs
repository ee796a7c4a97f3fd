//! Data container and the distance/scale utilities shared by every stage of
//! the path: nearest-neighbour quantiles, the maximum pairwise distance and
//! the data-scale merge threshold.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpcError};

/// Relative tolerance of the merge threshold (ε).
pub const MERGE_EPSILON: f64 = 1e-4;

/// Dense `n × p` matrix of finite observations, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Vec<f64>,
    n: usize,
    p: usize,
}

impl DataMatrix {
    /// Builds a matrix from a row-major buffer.
    pub fn new(values: Vec<f64>, n: usize, p: usize) -> Result<Self> {
        if n < 2 {
            return Err(SpcError::InvalidData(format!(
                "need at least 2 objects, got {n}"
            )));
        }
        if p == 0 {
            return Err(SpcError::InvalidData("need at least 1 feature".into()));
        }
        if values.len() != n * p {
            return Err(SpcError::DimensionMismatch {
                expected: n * p,
                got: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(SpcError::InvalidData(format!(
                "non-finite value at row {}, column {}",
                pos / p,
                pos % p
            )));
        }
        Ok(Self { values, n, p })
    }

    /// Builds a matrix from a list of equally long rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let p = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(rows.len() * p);
        for row in rows {
            if row.len() != p {
                return Err(SpcError::DimensionMismatch {
                    expected: p,
                    got: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::new(values, rows.len(), p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.p..(i + 1) * self.p]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.p)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// Per-column sample standard deviations (n − 1 denominator).
    pub fn column_sds(&self) -> Vec<f64> {
        let means = self.column_means();
        let mut ss = vec![0.0; self.p];
        for row in self.rows() {
            for ((acc, &v), &m) in ss.iter_mut().zip(row).zip(&means) {
                *acc += (v - m) * (v - m);
            }
        }
        let denom = (self.n - 1) as f64;
        ss.into_iter().map(|s| (s / denom).sqrt()).collect()
    }

    pub fn column_means(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.p];
        for row in self.rows() {
            for (acc, &v) in sums.iter_mut().zip(row) {
                *acc += v;
            }
        }
        sums.into_iter().map(|s| s / self.n as f64).collect()
    }

    /// Centres every column and scales it to unit sample standard deviation.
    /// Constant columns are centred only.
    pub fn standardized(&self) -> Self {
        let means = self.column_means();
        let sds = self.column_sds();
        let values = self
            .rows()
            .flat_map(|row| {
                row.iter()
                    .zip(&means)
                    .zip(&sds)
                    .map(|((&v, &m), &s)| if s > 0.0 { (v - m) / s } else { v - m })
                    .collect::<Vec<_>>()
            })
            .collect();
        Self {
            values,
            n: self.n,
            p: self.p,
        }
    }
}

/// Merge and convergence tolerance ξ, in data units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleThreshold {
    pub xi: f64,
}

impl ScaleThreshold {
    pub fn new(xi: f64) -> Result<Self> {
        if !(xi >= 0.0 && xi.is_finite()) {
            return Err(SpcError::InvalidParameter(format!(
                "merge threshold must be finite and nonnegative, got {xi}"
            )));
        }
        Ok(Self { xi })
    }
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Euclidean distance between two equally long vectors.
pub fn pairwise_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(SpcError::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(squared_distance(a, b).sqrt())
}

/// Distance from every object to its nearest other object.
pub fn nearest_neighbor_distances(data: &DataMatrix) -> Vec<f64> {
    let n = data.n();
    let mut nearest = vec![f64::INFINITY; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = squared_distance(data.row(i), data.row(j));
            if d < nearest[i] {
                nearest[i] = d;
            }
            if d < nearest[j] {
                nearest[j] = d;
            }
        }
    }
    nearest.into_iter().map(f64::sqrt).collect()
}

/// Order statistic of `values` at 1-based rank ⌈β·len⌉, without interpolation.
pub(crate) fn order_statistic(values: &[f64], beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(SpcError::InvalidParameter(format!(
            "quantile level must lie in (0, 1), got {beta}"
        )));
    }
    if values.is_empty() {
        return Err(SpcError::InvalidData("quantile of an empty set".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    // Absorb representation error in products such as 0.45 * 400.
    let rank = (beta * sorted.len() as f64 - 1e-9).ceil() as usize;
    let rank = rank.clamp(1, sorted.len());
    Ok(sorted[rank - 1])
}

/// β-quantile Q_β of the nearest-neighbour distances.
pub fn nn_quantile(data: &DataMatrix, beta: f64) -> Result<f64> {
    order_statistic(&nearest_neighbor_distances(data), beta)
}

/// Largest distance over all unordered pairs of objects.
pub fn max_pairwise_distance(data: &DataMatrix) -> f64 {
    let n = data.n();
    let mut best = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            best = best.max(squared_distance(data.row(i), data.row(j)));
        }
    }
    best.sqrt()
}

/// ξ = (ε/√p)·Σ_m σ_m with ε = 1e-4 and unbiased column standard deviations.
pub fn merge_threshold(data: &DataMatrix) -> ScaleThreshold {
    let total: f64 = data.column_sds().iter().sum();
    ScaleThreshold {
        xi: MERGE_EPSILON / (data.p() as f64).sqrt() * total,
    }
}
