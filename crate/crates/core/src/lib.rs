//! Exact distance distributions, moments and network metrics for `N` nodes
//! placed uniformly at random in a `d`-dimensional ball, plus a seeded Monte
//! Carlo engine that checks every closed form.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod conditional;
pub mod distance;
pub mod error;
pub mod geometry;
pub mod law;
pub mod metrics;
pub mod montecarlo;
pub mod specfun;
pub mod table;
pub mod validate;

pub use error::{Error, Result};
pub use geometry::NetworkSpec;
pub use law::DistanceLaw;
pub use specfun::MomentValue;
