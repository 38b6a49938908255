//! Lattice geometry: edges, regions, layered regions, staircases and cones.

mod angles;
mod cone;
mod desk;
mod frame;
mod geometry;
mod layers;
mod region;
mod staircase;

pub use angles::{cone_from_angles, ConeGeometry};
pub use cone::{cone_truncation, truncate, truncated_loop, well_separated, ConeTruncation};
pub use desk::DeskCone;
pub use frame::BoundaryLoop;
pub use geometry::{Edge, EdgeKind, Plaquette, Vertex};
pub use layers::{Layer, LayerRegion, Overlap};
pub use region::{rectangle_region, Rect, Region};
pub use staircase::{Axis, Direction, StaircasePath, Tail};
