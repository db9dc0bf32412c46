//! Counterfactual learning-to-rank workbench.
//!
//! Simulates clicks under position-based and cascade click models,
//! computes closed-form session-conditional examination propensities,
//! trains IPS-weighted listwise rankers, and evaluates whether matching
//! the debiasing model to the click-generating model recovers
//! near-full-information ranking quality.
//!
//! Modules:
//! - [`types`]: shared domain types (feature vectors, sessions, click
//!   model parameters).
//! - [`dataset`]: LETOR ingestion, synthetic generation, initial ranking,
//!   top-k preparation.
//! - [`clicksim`]: PBM/DCM/DBN/CCM click simulators with click noise.
//! - [`propensity`]: closed-form propensities, IPS weights with clipping,
//!   and parameter estimators.
//! - [`ltr`]: listwise losses and the SGD trainer (IPS / no-IPS /
//!   full-information modes).
//! - [`eval`]: nDCG@10, paired t-tests, score normalizers, click
//!   log-likelihood and model selection.
//! - [`experiment`]: the seeded simulation-grid harness.

pub mod clicksim;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod exec;
pub mod experiment;
pub mod ltr;
mod numeric;
pub mod propensity;
pub mod types;

pub use error::{Error, Result};
