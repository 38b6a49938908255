//! Two small cones with apex at the origin, sized for exhaustive checks.

use super::cone::{cone_truncation, ConeTruncation};
use super::geometry::Vertex;
use super::region::Rect;
use super::staircase::{Axis, Direction, StaircasePath, Tail};
use crate::error::Result;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeskCone {
    /// Right ray and up ray.
    Quarter,
    /// Right ray, and a path stepping one left before going up.
    LShape,
}

impl DeskCone {
    pub const ALL: [DeskCone; 2] = [DeskCone::Quarter, DeskCone::LShape];

    pub fn name(self) -> &'static str {
        match self {
            DeskCone::Quarter => "quarter",
            DeskCone::LShape => "l-shape",
        }
    }

    pub fn paths(self) -> (StaircasePath, StaircasePath) {
        let o = Vertex::new(0, 0);
        let p1 = StaircasePath::ray(o, Direction::UpRight, Axis::Horizontal);
        let p2 = match self {
            DeskCone::Quarter => StaircasePath::ray(o, Direction::UpRight, Axis::Vertical),
            DeskCone::LShape => StaircasePath::new(o, Direction::DownLeft, &[(0, 1)], Tail::Ray(Axis::Vertical))
                .expect("fixed staircase"),
        };
        (p1, p2)
    }

    /// The truncation by `rect`, without requiring the apex to sit deep inside it.
    pub fn truncation(self, rect: Rect) -> Result<ConeTruncation> {
        let (p1, p2) = self.paths();
        cone_truncation(Vertex::new(0, 0), &p1, &p2, rect, 1)
    }

    /// The 22-edge rectangle with half-width 2 and half-height 1.
    pub fn small(self) -> ConeTruncation {
        self.truncation(Rect::new(1, 2, 1).expect("fixed rectangle")).expect("fixed cone")
    }
}
