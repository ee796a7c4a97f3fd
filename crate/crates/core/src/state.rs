//! Cluster bookkeeping: centers, object-to-cluster assignment and sizes, plus
//! the penalized objective evaluated on a state.

use crate::data::{squared_distance, DataMatrix};
use crate::error::{Result, SpcError};
use crate::penalty::{rho, PenaltyParams};

/// Current centers, assignment and cluster sizes.
///
/// Clusters are indexed `0..k()`. Member sums are cached so cluster means are
/// O(p) to read; a state is therefore tied to the data it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterState {
    centers: Vec<Vec<f64>>,
    assignment: Vec<usize>,
    sizes: Vec<usize>,
    sums: Vec<Vec<f64>>,
}

impl ClusterState {
    /// Every object in its own cluster, centered on itself.
    pub fn singletons(data: &DataMatrix) -> Self {
        let centers: Vec<Vec<f64>> = data.rows().map(<[f64]>::to_vec).collect();
        Self {
            sums: centers.clone(),
            centers,
            assignment: (0..data.n()).collect(),
            sizes: vec![1; data.n()],
        }
    }

    /// Builds a state from an assignment with labels `0..K`. When `centers`
    /// is `None` every center is placed on its cluster mean.
    pub fn from_assignment(
        data: &DataMatrix,
        assignment: Vec<usize>,
        centers: Option<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        if assignment.len() != data.n() {
            return Err(SpcError::DimensionMismatch {
                expected: data.n(),
                got: assignment.len(),
            });
        }
        let k = assignment.iter().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0usize; k];
        let mut sums = vec![vec![0.0; data.p()]; k];
        for (i, &c) in assignment.iter().enumerate() {
            sizes[c] += 1;
            for (s, v) in sums[c].iter_mut().zip(data.row(i)) {
                *s += v;
            }
        }
        if let Some(empty) = sizes.iter().position(|&s| s == 0) {
            return Err(SpcError::EmptyCluster(empty));
        }
        let centers = match centers {
            Some(c) => {
                if c.len() != k {
                    return Err(SpcError::DimensionMismatch {
                        expected: k,
                        got: c.len(),
                    });
                }
                if let Some(bad) = c.iter().find(|m| m.len() != data.p()) {
                    return Err(SpcError::DimensionMismatch {
                        expected: data.p(),
                        got: bad.len(),
                    });
                }
                if c.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(SpcError::InvalidData("non-finite center".into()));
                }
                c
            }
            None => sums
                .iter()
                .zip(&sizes)
                .map(|(s, &n)| s.iter().map(|v| v / n as f64).collect())
                .collect(),
        };
        Ok(Self {
            centers,
            assignment,
            sizes,
            sums,
        })
    }

    /// Number of clusters K.
    pub fn k(&self) -> usize {
        self.centers.len()
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn center(&self, k: usize) -> &[f64] {
        &self.centers[k]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Sample mean ȳ_k of the members of cluster k.
    pub fn cluster_mean(&self, k: usize) -> Vec<f64> {
        let n = self.sizes[k] as f64;
        self.sums[k].iter().map(|s| s / n).collect()
    }

    /// Object indices belonging to cluster k, ascending.
    pub fn members(&self, k: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(i, &c)| (c == k).then_some(i))
            .collect()
    }

    pub(crate) fn set_center(&mut self, k: usize, center: Vec<f64>) {
        self.centers[k] = center;
    }

    /// Merges cluster `b` into cluster `a`. The survivor sits at the
    /// size-weighted mean of both centers and takes the lower index; the
    /// returned value is that index.
    pub(crate) fn merge(&mut self, a: usize, b: usize) -> usize {
        let (keep, drop) = if a < b { (a, b) } else { (b, a) };
        let (nk, nd) = (self.sizes[keep] as f64, self.sizes[drop] as f64);
        let merged: Vec<f64> = self.centers[keep]
            .iter()
            .zip(&self.centers[drop])
            .map(|(x, y)| (nk * x + nd * y) / (nk + nd))
            .collect();
        let dropped_sum = self.sums.remove(drop);
        for (s, v) in self.sums[keep].iter_mut().zip(dropped_sum) {
            *s += v;
        }
        self.sizes[keep] += self.sizes.remove(drop);
        self.centers.remove(drop);
        self.centers[keep] = merged;
        for c in &mut self.assignment {
            if *c == drop {
                *c = keep;
            } else if *c > drop {
                *c -= 1;
            }
        }
        keep
    }

    /// Moves object `i` out of its cluster into a new singleton centered at
    /// `center`. The new cluster is appended; call [`Self::canonicalize`]
    /// afterwards to restore first-occurrence ordering.
    pub(crate) fn split_off(&mut self, data: &DataMatrix, i: usize, center: Vec<f64>) {
        let old = self.assignment[i];
        self.sizes[old] -= 1;
        for (s, v) in self.sums[old].iter_mut().zip(data.row(i)) {
            *s -= v;
        }
        self.centers.push(center);
        self.sums.push(data.row(i).to_vec());
        self.sizes.push(1);
        self.assignment[i] = self.centers.len() - 1;
    }

    /// Relabels clusters in order of their first member, so that equal
    /// partitions always produce equal assignment vectors.
    pub fn canonicalize(&mut self) {
        let k = self.k();
        let mut order = Vec::with_capacity(k);
        let mut seen = vec![false; k];
        for &c in &self.assignment {
            if !seen[c] {
                seen[c] = true;
                order.push(c);
            }
        }
        if order.iter().enumerate().all(|(new, &old)| new == old) {
            return;
        }
        let mut relabel = vec![0; k];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new;
        }
        self.centers = order.iter().map(|&c| self.centers[c].clone()).collect();
        self.sums = order.iter().map(|&c| self.sums[c].clone()).collect();
        self.sizes = order.iter().map(|&c| self.sizes[c]).collect();
        for c in &mut self.assignment {
            *c = relabel[*c];
        }
    }

    /// Total within-cluster sum of squares around the current centers.
    pub fn within_ss(&self, data: &DataMatrix) -> f64 {
        self.assignment
            .iter()
            .enumerate()
            .map(|(i, &c)| squared_distance(data.row(i), &self.centers[c]))
            .sum()
    }
}

/// Penalized objective
/// `Σ_k Σ_{i∈C_k} ‖y_i − μ_k‖² + λ Σ_{k<ℓ} N_k N_ℓ ρ(‖μ_k − μ_ℓ‖)`.
pub fn objective(data: &DataMatrix, state: &ClusterState, params: &PenaltyParams) -> Result<f64> {
    if state.assignment().len() != data.n() {
        return Err(SpcError::DimensionMismatch {
            expected: data.n(),
            got: state.assignment().len(),
        });
    }
    if let Some(bad) = state.centers().iter().find(|c| c.len() != data.p()) {
        return Err(SpcError::DimensionMismatch {
            expected: data.p(),
            got: bad.len(),
        });
    }
    let mut penalty = 0.0;
    let k = state.k();
    for a in 0..k {
        for b in (a + 1)..k {
            let d = squared_distance(state.center(a), state.center(b)).sqrt();
            penalty += (state.sizes()[a] * state.sizes()[b]) as f64 * rho(d, params)?;
        }
    }
    Ok(state.within_ss(data) + params.lambda * penalty)
}
