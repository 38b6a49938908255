//! Vertices, oriented edges and unit squares of Z².

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// A lattice point. Ordered lexicographically by (x, y).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub x: i32,
    pub y: i32,
}

impl Vertex {
    pub const fn new(x: i32, y: i32) -> Self {
        Vertex { x, y }
    }

    pub const fn offset(self, dx: i32, dy: i32) -> Self {
        Vertex { x: self.x + dx, y: self.y + dy }
    }

    /// The four nearest neighbours, in the order right, up, left, down.
    pub fn neighbours(self) -> [Vertex; 4] {
        [self.offset(1, 0), self.offset(0, 1), self.offset(-1, 0), self.offset(0, -1)]
    }

    /// Quarter turn counter-clockwise about the origin.
    pub const fn rotate(self) -> Self {
        Vertex { x: -self.y, y: self.x }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    /// From (a, b) to (a+1, b).
    H,
    /// From (a, b) to (a, b+1).
    V,
}

/// An oriented lattice edge identified by its kind and its base point.
///
/// The canonical order compares (kind, b, a), so all horizontal edges come
/// first, row by row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub kind: EdgeKind,
    pub base: Vertex,
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.kind, self.base.y, self.base.x).cmp(&(other.kind, other.base.y, other.base.x))
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Edge {
    pub const fn h(x: i32, y: i32) -> Self {
        Edge { kind: EdgeKind::H, base: Vertex::new(x, y) }
    }

    pub const fn v(x: i32, y: i32) -> Self {
        Edge { kind: EdgeKind::V, base: Vertex::new(x, y) }
    }

    /// v_{e,-1} for `sign < 0`, v_{e,+1} otherwise.
    pub fn endpoint(self, sign: i8) -> Vertex {
        if sign < 0 {
            self.base
        } else {
            self.head()
        }
    }

    pub fn tail(self) -> Vertex {
        self.base
    }

    pub fn head(self) -> Vertex {
        match self.kind {
            EdgeKind::H => self.base.offset(1, 0),
            EdgeKind::V => self.base.offset(0, 1),
        }
    }

    pub fn endpoints(self) -> [Vertex; 2] {
        [self.tail(), self.head()]
    }

    /// The edge joining two adjacent vertices and the sign of walking `from -> to`.
    pub fn between(from: Vertex, to: Vertex) -> Option<(Edge, i8)> {
        match (to.x - from.x, to.y - from.y) {
            (1, 0) => Some((Edge::h(from.x, from.y), 1)),
            (-1, 0) => Some((Edge::h(to.x, to.y), -1)),
            (0, 1) => Some((Edge::v(from.x, from.y), 1)),
            (0, -1) => Some((Edge::v(to.x, to.y), -1)),
            _ => None,
        }
    }

    /// The two squares containing this edge.
    pub fn squares(self) -> [Plaquette; 2] {
        let Vertex { x, y } = self.base;
        match self.kind {
            EdgeKind::H => [Plaquette::new(x, y - 1), Plaquette::new(x, y)],
            EdgeKind::V => [Plaquette::new(x - 1, y), Plaquette::new(x, y)],
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.tail(), self.head())
    }
}

/// The unit square S_(x,y) with lower-left corner (x, y). Ordered by (y, x).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Plaquette {
    pub x: i32,
    pub y: i32,
}

impl Ord for Plaquette {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Plaquette {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Plaquette {
    pub const fn new(x: i32, y: i32) -> Self {
        Plaquette { x, y }
    }

    pub const fn bottom(self) -> Edge {
        Edge::h(self.x, self.y)
    }

    pub const fn right(self) -> Edge {
        Edge::v(self.x + 1, self.y)
    }

    pub const fn left(self) -> Edge {
        Edge::v(self.x, self.y)
    }

    pub const fn top(self) -> Edge {
        Edge::h(self.x, self.y + 1)
    }

    /// Edges in the order bottom, right, left, top.
    pub const fn edges(self) -> [Edge; 4] {
        [self.bottom(), self.right(), self.left(), self.top()]
    }

    /// Corners in the order (x,y), (x+1,y), (x,y+1), (x+1,y+1).
    pub const fn corners(self) -> [Vertex; 4] {
        [
            Vertex::new(self.x, self.y),
            Vertex::new(self.x + 1, self.y),
            Vertex::new(self.x, self.y + 1),
            Vertex::new(self.x + 1, self.y + 1),
        ]
    }

    pub fn shares_edge(self, other: Plaquette) -> bool {
        (self.x - other.x).abs() + (self.y - other.y).abs() == 1
    }
}

impl fmt::Display for Plaquette {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({},{})", self.x, self.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_follow_orientation() {
        let e = Edge::h(2, -1);
        assert_eq!(e.endpoint(-1), Vertex::new(2, -1));
        assert_eq!(e.endpoint(1), Vertex::new(3, -1));
        assert_eq!(Edge::v(0, 0).head(), Vertex::new(0, 1));
    }

    #[test]
    fn canonical_order_is_kind_row_column() {
        let mut es = vec![Edge::v(0, 0), Edge::h(5, 1), Edge::h(7, 0), Edge::h(-3, 1)];
        es.sort();
        assert_eq!(es, vec![Edge::h(7, 0), Edge::h(-3, 1), Edge::h(5, 1), Edge::v(0, 0)]);
    }

    #[test]
    fn between_recovers_edges() {
        let v = Vertex::new(1, 1);
        for w in v.neighbours() {
            let (e, s) = Edge::between(v, w).unwrap();
            assert_eq!(e.endpoint(-s), v);
            assert_eq!(e.endpoint(s), w);
        }
        assert!(Edge::between(v, v.offset(1, 1)).is_none());
    }

    #[test]
    fn plaquette_edges_touch_corners() {
        let p = Plaquette::new(-1, 2);
        for e in p.edges() {
            for v in e.endpoints() {
                assert!(p.corners().contains(&v));
            }
            assert!(e.squares().contains(&p));
        }
    }
}
