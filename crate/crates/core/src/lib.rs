//! Admissible configurations of finite-group lattice gauge fields on Z²,
//! their boundary potentials, and the frustration-free states of the
//! quantum double model on rectangles and truncated cones.
//!
//! Everything is exact: group elements are table indices and state values
//! are rationals.

pub mod configs;
pub mod error;
pub mod group;
pub mod lattice;
pub mod paths;
pub mod state;

pub use error::{Error, Result};
pub use group::{Elem, Group, IDENTITY};
