//! Error type shared by every module of the crate.

use crate::lattice::{Edge, Vertex};
use thiserror::Error;

/// Failures reported by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("condition S fails between layers {layer} and {next}: z = {z}, w = {w}")]
    ConditionS { layer: usize, next: usize, z: i32, w: i32 },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("path composition mismatch: {left} != {right}")]
    Composition { left: Vertex, right: Vertex },

    #[error("path steps are not connected at step {0}")]
    Disconnected(usize),

    #[error("edge {0} has no label")]
    IncompleteConfiguration(Edge),

    #[error("configuration is not admissible: {0}")]
    NotAdmissible(String),

    #[error("no completion exists: {0}")]
    NoCompletion(String),

    #[error("state count {needed} exceeds budget {budget}")]
    Budget { needed: u128, budget: u64 },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
