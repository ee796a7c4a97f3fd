//! Partition scores: the adjusted Rand index and its split into a
//! cluster-assignment part (ARI_c), a noise-identification part (ARI_n) and
//! the false-noise score S_n.

use std::collections::BTreeMap;

use crate::error::{Result, SpcError};
use crate::state::ClusterState;

/// Cluster labels for n objects; `None` marks noise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPartition {
    labels: Vec<Option<usize>>,
}

impl LabeledPartition {
    pub fn new(labels: Vec<Option<usize>>) -> Self {
        Self { labels }
    }

    /// Plain labels with one value reserved for noise.
    pub fn with_noise_label(labels: &[usize], noise_label: usize) -> Self {
        Self::new(labels.iter().map(|&l| (l != noise_label).then_some(l)).collect())
    }

    /// Every object clustered.
    pub fn without_noise(labels: &[usize]) -> Self {
        Self::new(labels.iter().copied().map(Some).collect())
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_none()).count()
    }

    /// Number of distinct non-noise labels.
    pub fn cluster_count(&self) -> usize {
        dense_ids(&self.labels).len()
    }
}

fn dense_ids(labels: &[Option<usize>]) -> BTreeMap<usize, usize> {
    let mut ids = BTreeMap::new();
    for l in labels.iter().flatten() {
        ids.entry(*l).or_insert(0);
    }
    for (i, v) in ids.values_mut().enumerate() {
        *v = i;
    }
    ids
}

/// Cross-tabulation of estimated (rows) against true (columns) labels.
/// The last row and the last column hold noise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    /// Builds a table from raw counts; rows must have equal length.
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self> {
        let width = counts.first().map_or(0, Vec::len);
        if let Some(bad) = counts.iter().find(|r| r.len() != width) {
            return Err(SpcError::DimensionMismatch {
                expected: width,
                got: bad.len(),
            });
        }
        Ok(Self { counts })
    }

    /// `(K+1) × (R+1)` table for `K` estimated and `R` true clusters.
    pub fn new(estimated: &LabeledPartition, truth: &LabeledPartition) -> Result<Self> {
        if estimated.len() != truth.len() {
            return Err(SpcError::DimensionMismatch {
                expected: truth.len(),
                got: estimated.len(),
            });
        }
        let rows = dense_ids(estimated.labels());
        let cols = dense_ids(truth.labels());
        let (k, r) = (rows.len(), cols.len());
        let mut counts = vec![vec![0u64; r + 1]; k + 1];
        for (e, t) in estimated.labels().iter().zip(truth.labels()) {
            let i = e.map_or(k, |l| rows[&l]);
            let j = t.map_or(r, |l| cols[&l]);
            counts[i][j] += 1;
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        let width = self.counts.first().map_or(0, Vec::len);
        (0..width).map(|j| self.counts.iter().map(|r| r[j]).sum()).collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

fn pairs(k: u64) -> u128 {
    let k = k as u128;
    k * k.saturating_sub(1) / 2
}

/// Adjusted Rand index of a contingency table.
///
/// When the expected and maximal index coincide (both partitions are all
/// singletons, or both a single block) the partitions agree on every pair
/// and 1 is returned.
pub fn ari(table: &ContingencyTable) -> f64 {
    let index: u128 = table.counts().iter().flatten().map(|&c| pairs(c)).sum();
    let a: u128 = table.row_sums().into_iter().map(pairs).sum();
    let b: u128 = table.col_sums().into_iter().map(pairs).sum();
    let total = pairs(table.total());
    // (index − ab/N) / ((a+b)/2 − ab/N), scaled by 2N to stay in integers.
    let numerator = 2 * total as i128 * index as i128 - 2 * (a * b) as i128;
    let denominator = (total * (a + b)) as i128 - 2 * (a * b) as i128;
    if denominator == 0 {
        return 1.0;
    }
    numerator as f64 / denominator as f64
}

/// Classic ARI between two partitions, treating noise as one more block.
pub fn adjusted_rand_index(a: &LabeledPartition, b: &LabeledPartition) -> Result<f64> {
    Ok(ari(&ContingencyTable::new(a, b)?))
}

/// ARI over the estimated clusters only: the noise row is dropped and the
/// margins are recomputed on what remains. `None` when every object was
/// labeled noise.
pub fn ari_c(estimated: &LabeledPartition, truth: &LabeledPartition) -> Result<Option<f64>> {
    let table = ContingencyTable::new(estimated, truth)?;
    let k = table.counts().len() - 1;
    if k == 0 {
        return Ok(None);
    }
    let sub = ContingencyTable::from_counts(table.counts()[..k].to_vec())?;
    Ok(Some(ari(&sub)))
}

/// ARI of the collapsed clustered/noise table, with true noise that was
/// clustered left out. 0 when no noise was detected.
pub fn ari_n(estimated: &LabeledPartition, truth: &LabeledPartition) -> Result<f64> {
    let table = ContingencyTable::new(estimated, truth)?;
    let counts = table.counts();
    let (k, r) = (counts.len() - 1, counts[0].len() - 1);
    let cc: u64 = counts[..k].iter().map(|row| row[..r].iter().sum::<u64>()).sum();
    let nn = counts[k][r];
    let nc: u64 = counts[k][..r].iter().sum();
    if nn + nc == 0 {
        return Ok(0.0);
    }
    let collapsed = ContingencyTable::from_counts(vec![vec![cc, 0], vec![nc, nn]])?;
    Ok(ari(&collapsed))
}

/// `1 − n_nc/n`: the share of objects not wrongly labeled noise.
pub fn s_n(estimated: &LabeledPartition, truth: &LabeledPartition) -> Result<f64> {
    if estimated.len() != truth.len() {
        return Err(SpcError::DimensionMismatch {
            expected: truth.len(),
            got: estimated.len(),
        });
    }
    if truth.is_empty() {
        return Ok(1.0);
    }
    let false_noise = estimated
        .labels()
        .iter()
        .zip(truth.labels())
        .filter(|(e, t)| e.is_none() && t.is_some())
        .count();
    Ok(1.0 - false_noise as f64 / truth.len() as f64)
}

/// Labels clusters with at most `cutoff` members as noise. The remaining
/// clusters are numbered from 0 in state order; their count is returned
/// alongside.
pub fn label_noise(state: &ClusterState, cutoff: usize) -> (LabeledPartition, usize) {
    label_noise_assignment(state.assignment(), cutoff)
}

/// [`label_noise`] for a bare assignment with labels `0..K`.
pub fn label_noise_assignment(assignment: &[usize], cutoff: usize) -> (LabeledPartition, usize) {
    let k = assignment.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; k];
    for &c in assignment {
        sizes[c] += 1;
    }
    let mut ids = vec![None; k];
    let mut next = 0;
    for (c, &size) in sizes.iter().enumerate() {
        if size > cutoff {
            ids[c] = Some(next);
            next += 1;
        }
    }
    let labels = assignment.iter().map(|&c| ids[c]).collect();
    (LabeledPartition::new(labels), next)
}
