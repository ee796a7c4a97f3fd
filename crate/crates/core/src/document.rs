//! JSON record of a solution path, self-describing and versioned.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::data::DataMatrix;
use crate::error::{Result, SpcError};
use crate::scheduler::{PathConfig, SolutionPath};
use crate::selection::{
    log_likelihood, select_from_scores, Candidate, DifferenceRatio, SelectionResult, SelectionRule,
};

/// Version written by this crate. Readers accept any minor version of the
/// same major version.
pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathDocument {
    pub schema_version: String,
    pub metadata: Metadata,
    pub solutions: Vec<SolutionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selection: Option<SelectionBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub config: PathConfig,
    pub n: usize,
    pub p: usize,
    /// SHA-256 of the input values as little-endian f64 bytes, row-major,
    /// before any standardization.
    pub data_sha256: String,
    pub standardized: bool,
    pub xi: f64,
    pub grid_size: usize,
    /// Wall-clock seconds for the path; only recorded on request so that
    /// documents stay reproducible byte for byte.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub delta: f64,
    pub lambda: f64,
    pub k_total: usize,
    pub k_clust: usize,
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
    pub log_likelihood: f64,
    pub bvr_triggered: bool,
    pub splits: usize,
    pub sizes: Vec<usize>,
    pub centers: Vec<Vec<f64>>,
    pub assignment: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionBlock {
    pub a: f64,
    pub rule: SelectionRule,
    /// Index into `solutions`.
    pub chosen_index: usize,
    pub k_star: usize,
    pub ratios: Vec<DifferenceRatio>,
    pub candidates: Vec<Candidate>,
}

impl SelectionBlock {
    pub fn new(a: f64, rule: SelectionRule, result: SelectionResult) -> Self {
        Self {
            a,
            rule,
            chosen_index: result.solution_index,
            k_star: result.k_star,
            ratios: result.ratios,
            candidates: result.candidates,
        }
    }
}

/// Checksum of a data matrix as stored in [`Metadata::data_sha256`].
pub fn data_checksum(data: &DataMatrix) -> String {
    let mut hasher = Sha256::new();
    hasher.update((data.n() as u64).to_le_bytes());
    hasher.update((data.p() as u64).to_le_bytes());
    for v in data.as_slice() {
        hasher.update(v.to_le_bytes());
    }
    hex::encode(hasher.finalize())
}

impl PathDocument {
    /// Builds a document from a path computed on `fitted` (the possibly
    /// standardized copy of `original`).
    pub fn from_path(path: &SolutionPath, original: &DataMatrix, fitted: &DataMatrix, standardized: bool) -> Self {
        let solutions = path
            .solutions
            .iter()
            .map(|s| SolutionRecord {
                delta: s.params.delta,
                lambda: s.params.lambda,
                k_total: s.k_total,
                k_clust: s.k_clust,
                iterations: s.report.iterations,
                converged: s.report.converged,
                objective: s.objective,
                log_likelihood: log_likelihood(fitted, &s.state),
                bvr_triggered: s.bvr_triggered,
                splits: s.splits,
                sizes: s.state.sizes().to_vec(),
                centers: s.state.centers().to_vec(),
                assignment: s.state.assignment().to_vec(),
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            metadata: Metadata {
                config: path.config,
                n: original.n(),
                p: original.p(),
                data_sha256: data_checksum(original),
                standardized,
                xi: path.xi.xi,
                grid_size: path.grid_size,
                elapsed_seconds: None,
            },
            solutions,
            selection: None,
        }
    }

    /// Runs selection on the stored likelihoods.
    pub fn select(&self, a: f64, rule: SelectionRule) -> Result<SelectionResult> {
        let scores: Vec<Candidate> = self
            .solutions
            .iter()
            .enumerate()
            .map(|(i, s)| Candidate {
                solution_index: i,
                k_total: s.k_total,
                log_likelihood: s.log_likelihood,
            })
            .collect();
        select_from_scores(&scores, a, rule)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn write<W: Write>(&self, mut output: W) -> Result<()> {
        output.write_all(self.to_json()?.as_bytes())?;
        Ok(())
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    /// Parses a document, rejecting unknown major versions and records whose
    /// assignment length disagrees with `n`.
    pub fn read<R: Read>(input: R) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_reader(input)?;
        let version = value
            .get("schema_version")
            .and_then(|v| v.as_str())
            .ok_or_else(|| SpcError::SchemaVersion("missing".into()))?;
        let major = |v: &str| v.split('.').next().map(str::to_owned);
        if major(version) != major(SCHEMA_VERSION) {
            return Err(SpcError::SchemaVersion(version.to_string()));
        }
        let doc: PathDocument = serde_json::from_value(value)?;
        if let Some(bad) = doc.solutions.iter().find(|s| s.assignment.len() != doc.metadata.n) {
            return Err(SpcError::DimensionMismatch {
                expected: doc.metadata.n,
                got: bad.assignment.len(),
            });
        }
        Ok(doc)
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        Self::read(std::fs::File::open(path)?)
    }
}
