//! Counterfactual recourse plans for generalized additive models.
//!
//! The crate loads additive models, prices feature changes, and searches for
//! minimum-cost plans that flip a prediction by solving a 0-1 integer program
//! with an in-crate branch-and-bound solver. Plans can be bound to a model
//! version in a signed receipt.

pub mod distance;
pub mod error;
pub mod format;
pub mod ilp;
pub mod model;
pub mod receipt;
pub mod recourse;
pub mod wire;

pub use error::{ModelError, ReceiptError, RecourseError, SolverError};
pub use model::{EbmModel, FeatureValue, Instance, Link, Prediction};
