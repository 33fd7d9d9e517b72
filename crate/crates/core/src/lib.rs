//! Limit linear series on nodal curves whose components are rational.
//!
//! The crate covers the twist calculus of admissible multidegrees on a dual graph with a
//! chain structure, section spaces of the twisted line bundles on an explicit curve model,
//! two independent membership tests for limit linear series (kernel dimensions over a
//! window of multidegrees, and Eisenbud–Harris style vanishing conditions on
//! multitrees), and linked determinantal loci of s-linked chains of vector spaces.

pub mod cli;
pub mod corpus;
pub mod curves;
pub mod exactalg;
pub mod graphs;
pub mod linkedet;
pub mod llseries;
pub mod multidegrees;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("the dual graph is not a multitree")]
    NotMultitree,
    #[error("unreachable multidegree: {0}")]
    Unreachable(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),
    #[error("resample budget exhausted: {0}")]
    Budget(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
