//! Solution path clustering.
//!
//! Clusters are found by shrinking per-object centers toward each other under
//! a minimax concave penalty. An adaptive schedule over the penalty's
//! strength `λ` and concavity `δ` walks from n singletons down to a single
//! cluster and records every distinct solution along the way. Small
//! clusters left over at any point are treated as noise.
//!
//! ```no_run
//! use spc::{run_path, select, DataMatrix, PathConfig};
//!
//! let data = DataMatrix::from_rows(&[
//!     vec![0.0, 0.1], vec![0.2, 0.0], vec![0.1, 0.2],
//!     vec![5.0, 5.1], vec![5.2, 4.9], vec![4.9, 5.0],
//! ])?;
//! let path = run_path(&data, &PathConfig::new(0.5))?;
//! let choice = select(&path, &data, 0.05)?;
//! println!("picked {} clusters", choice.k_star);
//! # Ok::<(), spc::SpcError>(())
//! ```

pub mod commands;
pub mod csvio;
pub mod data;
pub mod document;
pub mod error;
pub mod evaluation;
pub mod optimizer;
pub mod penalty;
pub mod scheduler;
pub mod selection;
pub mod simgen;
pub mod splitting;
pub mod state;

pub use data::{DataMatrix, ScaleThreshold};
pub use document::PathDocument;
pub use error::{Result, SpcError};
pub use evaluation::{ari, ari_c, ari_n, label_noise, s_n, ContingencyTable, LabeledPartition};
pub use optimizer::{run_mm, MMReport};
pub use penalty::PenaltyParams;
pub use scheduler::{run_path, PathConfig, Solution, SolutionPath};
pub use selection::{log_likelihood, select, select_with_rule, SelectionResult, SelectionRule};
pub use simgen::{generate, GeneratedData, ScenarioSpec};
pub use splitting::{split_step, SplitOutcome};
pub use state::{objective, ClusterState};
