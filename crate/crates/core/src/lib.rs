//! Uncorrelated linear discriminant analysis and forward variable selection
//! driven by Pillai's trace, with the Wilks' lambda criteria for comparison.

pub mod crossval;
pub mod dataset;
pub mod error;
pub mod linalg;
pub mod preprocess;
pub mod scatter;
pub mod selection;
pub mod stats;
pub mod ulda;

pub use dataset::Dataset;
pub use error::{Error, Result};
pub use selection::{forward_select, rank_variables, Criterion, SelectionConfig, SelectionResult, StopReason};
pub use ulda::{fit_ulda, CostMatrix, FitPath, UldaModel};
