//! Random generators and exhaustive oracles shared by the workspace tests.
//!
//! Everything here is deliberately naive: oracles enumerate every assignment or
//! every bin combination, and recompute costs from the model's raw tables
//! without going through the library's distance or program-building code.

pub mod fixtures;
pub mod ilp;
pub mod models;
pub mod recourse;
