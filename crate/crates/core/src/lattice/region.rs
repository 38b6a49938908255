//! Finite edge sets with their plaquettes, vertices and boundary.

use super::geometry::{Edge, Plaquette, Vertex};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

/// A finite set of lattice edges in canonical order.
///
/// Plaquettes are the unit squares all of whose edges belong to the set.
/// Boundary vertices have a nearest neighbour outside the vertex set;
/// boundary edges lie on fewer than two plaquettes.
#[derive(Clone, Debug)]
pub struct Region {
    edges: Vec<Edge>,
    index: HashMap<Edge, usize>,
    plaquettes: Vec<Plaquette>,
    plaquette_edges: Vec<[usize; 4]>,
    vertices: Vec<Vertex>,
    vertex_index: HashMap<Vertex, usize>,
    adjacency: Vec<Vec<(usize, usize, i8)>>,
    boundary_vertices: Vec<Vertex>,
    boundary_edges: Vec<usize>,
}

impl Region {
    pub fn from_edges(edges: impl IntoIterator<Item = Edge>) -> Self {
        let edges: Vec<Edge> = edges.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let index: HashMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();

        let candidates: BTreeSet<Plaquette> = edges.iter().flat_map(|e| e.squares()).collect();
        let mut plaquettes = Vec::new();
        let mut plaquette_edges = Vec::new();
        for p in candidates {
            let ids = p.edges().map(|e| index.get(&e).copied());
            if let [Some(b), Some(r), Some(l), Some(t)] = ids {
                plaquettes.push(p);
                plaquette_edges.push([b, r, l, t]);
            }
        }

        let vertices: Vec<Vertex> = edges
            .iter()
            .flat_map(|e| e.endpoints())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let vertex_index: HashMap<Vertex, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            let (t, h) = (vertex_index[&e.tail()], vertex_index[&e.head()]);
            adjacency[t].push((i, h, 1));
            adjacency[h].push((i, t, -1));
        }
        let boundary_vertices = vertices
            .iter()
            .copied()
            .filter(|v| v.neighbours().iter().any(|w| !vertex_index.contains_key(w)))
            .collect();

        let mut on_plaquettes = vec![0u8; edges.len()];
        for ids in &plaquette_edges {
            for &i in ids {
                on_plaquettes[i] += 1;
            }
        }
        let boundary_edges = (0..edges.len()).filter(|&i| on_plaquettes[i] < 2).collect();

        Region {
            edges,
            index,
            plaquettes,
            plaquette_edges,
            vertices,
            vertex_index,
            adjacency,
            boundary_vertices,
            boundary_edges,
        }
    }

    /// The union of the edges of the given squares.
    pub fn from_squares(squares: impl IntoIterator<Item = Plaquette>) -> Self {
        Region::from_edges(squares.into_iter().flat_map(|p| p.edges()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn index_of(&self, e: &Edge) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.index.contains_key(e)
    }

    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    /// Edge indices of each plaquette as (bottom, right, left, top).
    pub fn plaquette_edges(&self) -> &[[usize; 4]] {
        &self.plaquette_edges
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_index(&self, v: &Vertex) -> Option<usize> {
        self.vertex_index.get(v).copied()
    }

    pub fn contains_vertex(&self, v: &Vertex) -> bool {
        self.vertex_index.contains_key(v)
    }

    /// For each vertex: (edge index, neighbour index, sign of walking towards the neighbour).
    pub fn adjacency(&self) -> &[Vec<(usize, usize, i8)>] {
        &self.adjacency
    }

    pub fn boundary_vertices(&self) -> &[Vertex] {
        &self.boundary_vertices
    }

    pub fn boundary_edges(&self) -> &[usize] {
        &self.boundary_edges
    }

    pub fn is_boundary_edge(&self, i: usize) -> bool {
        self.boundary_edges.binary_search(&i).is_ok()
    }

    /// Indices of the plaquettes containing edge `i`.
    pub fn plaquettes_on_edge(&self, i: usize) -> Vec<usize> {
        (0..self.plaquettes.len())
            .filter(|&p| self.plaquette_edges[p].contains(&i))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(_, w, _) in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertices.len()
    }
}

/// The rectangle [-N n0, N n0] x [-N m0, N m0].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    #[serde(rename = "N")]
    pub n: u32,
    pub n0: u32,
    pub m0: u32,
}

impl Rect {
    pub fn new(n: u32, n0: u32, m0: u32) -> Result<Self> {
        if n == 0 || n0 == 0 || m0 == 0 {
            return Err(Error::InvalidArgument(format!(
                "rectangle needs positive N, n0, m0 (got {n}, {n0}, {m0})"
            )));
        }
        Ok(Rect { n, n0, m0 })
    }

    pub fn square(n: u32) -> Result<Self> {
        Rect::new(n, 1, 1)
    }

    pub fn half_width(&self) -> i32 {
        (self.n * self.n0) as i32
    }

    pub fn half_height(&self) -> i32 {
        (self.n * self.m0) as i32
    }

    /// The same aspect at size `N + 1`.
    pub fn grown(&self) -> Rect {
        Rect { n: self.n + 1, ..*self }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.x.abs() <= self.half_width() && v.y.abs() <= self.half_height()
    }

    pub fn on_boundary(&self, v: Vertex) -> bool {
        self.contains(v) && (v.x.abs() == self.half_width() || v.y.abs() == self.half_height())
    }

    pub fn contains_square(&self, p: Plaquette) -> bool {
        p.corners().iter().all(|&v| self.contains(v))
    }

    pub fn squares(&self) -> Vec<Plaquette> {
        let (a, b) = (self.half_width(), self.half_height());
        (-b..b).flat_map(|y| (-a..a).map(move |x| Plaquette::new(x, y))).collect()
    }

    /// The edge set of the rectangle.
    pub fn region(&self) -> Region {
        Region::from_squares(self.squares())
    }

    /// Rows as `(x_start, count)` pairs starting at row `-N m0`.
    pub fn rows(&self) -> (i32, Vec<(i32, u32)>) {
        let rows = vec![(-self.half_width(), 2 * self.n * self.n0); 2 * (self.n * self.m0) as usize];
        (-self.half_height(), rows)
    }

    /// Next boundary vertex counter-clockwise.
    pub fn next_ccw(&self, v: Vertex) -> Vertex {
        let (a, b) = (self.half_width(), self.half_height());
        if v.y == -b && v.x < a {
            v.offset(1, 0)
        } else if v.x == a && v.y < b {
            v.offset(0, 1)
        } else if v.y == b && v.x > -a {
            v.offset(-1, 0)
        } else {
            v.offset(0, -1)
        }
    }

    /// Next boundary vertex clockwise.
    pub fn next_cw(&self, v: Vertex) -> Vertex {
        let (a, b) = (self.half_width(), self.half_height());
        if v.x == -a && v.y < b {
            v.offset(0, 1)
        } else if v.y == b && v.x < a {
            v.offset(1, 0)
        } else if v.x == a && v.y > -b {
            v.offset(0, -1)
        } else {
            v.offset(-1, 0)
        }
    }
}

/// Edge set of the rectangle [-N n0, N n0] x [-N m0, N m0].
pub fn rectangle_region(n: u32, n0: u32, m0: u32) -> Result<Region> {
    Ok(Rect::new(n, n0, m0)?.region())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_rectangle_counts() {
        let r = rectangle_region(1, 1, 1).unwrap();
        assert_eq!(r.len(), 12);
        assert_eq!(r.plaquettes().len(), 4);
        assert_eq!(r.vertices().len(), 9);
        assert_eq!(r.boundary_vertices().len(), 8);
        assert_eq!(r.boundary_edges().len(), 8);
    }

    #[test]
    fn larger_rectangles() {
        let r = rectangle_region(2, 1, 1).unwrap();
        assert_eq!((r.len(), r.plaquettes().len()), (40, 16));
        let r = rectangle_region(1, 2, 1).unwrap();
        assert_eq!((r.len(), r.plaquettes().len()), (22, 8));
    }

    #[test]
    fn rejects_zero_sizes() {
        assert!(rectangle_region(0, 1, 1).is_err());
        assert!(rectangle_region(1, 0, 1).is_err());
    }

    #[test]
    fn boundary_walks_are_inverse() {
        let r = Rect::new(2, 2, 1).unwrap();
        let start = Vertex::new(-4, -2);
        let mut v = start;
        let mut n = 0;
        loop {
            let w = r.next_ccw(v);
            assert!(r.on_boundary(w));
            assert_eq!(r.next_cw(w), v);
            v = w;
            n += 1;
            if v == start {
                break;
            }
        }
        assert_eq!(n, 2 * (8 + 4));
    }
}
