//! The boundary loop of a layer region seen from a base vertex.

use super::geometry::Vertex;
use super::layers::LayerRegion;
use crate::error::{Error, Result};
use crate::paths::PathOfEdges;
use std::collections::HashSet;

/// Boundary loop of a [`LayerRegion`] read counter-clockwise from a base
/// vertex, together with the split of its vertices into boundary vertices
/// and the set J of loop vertices all of whose neighbours are in the region.
#[derive(Clone, Debug)]
pub struct BoundaryLoop {
    vertices: Vec<Vertex>,
    steps: Vec<(usize, i8)>,
    boundary: Vec<Vertex>,
    j: Vec<Vertex>,
    check: Option<usize>,
}

impl BoundaryLoop {
    /// `base` must be a boundary vertex of the region.
    pub fn new(layers: &LayerRegion, base: Vertex) -> Result<Self> {
        let region = layers.region();
        let full = layers.boundary_loop();
        let start = full
            .iter()
            .position(|&v| v == base)
            .ok_or_else(|| Error::InvalidArgument(format!("base {base} is not on the boundary loop")))?;
        let vertices: Vec<Vertex> = full[start..].iter().chain(&full[..start]).copied().collect();
        let n = vertices.len();
        let steps = (0..n)
            .map(|i| {
                let (e, s) = super::Edge::between(vertices[i], vertices[(i + 1) % n]).unwrap();
                (region.index_of(&e).unwrap(), s)
            })
            .collect();

        let boundary: Vec<Vertex> = region.boundary_vertices().to_vec();
        let on_loop: HashSet<Vertex> = vertices.iter().copied().collect();
        if boundary.iter().any(|v| !on_loop.contains(v)) {
            return Err(Error::Geometry("a boundary vertex lies off the loop".into()));
        }
        let bset: HashSet<Vertex> = boundary.iter().copied().collect();
        if !bset.contains(&base) {
            return Err(Error::InvalidArgument(format!(
                "base {base} has all neighbours inside the region"
            )));
        }
        let mut j: Vec<Vertex> = vertices.iter().copied().filter(|v| !bset.contains(v)).collect();
        j.sort();
        let check = j.first().map(|v| vertices.iter().position(|w| w == v).unwrap());
        Ok(BoundaryLoop { vertices, steps, boundary, j, check })
    }

    /// Uses `v` instead of the least element of J as the check vertex.
    pub fn with_check_vertex(mut self, v: Vertex) -> Result<Self> {
        if !self.j.contains(&v) {
            return Err(Error::InvalidArgument(format!("{v} is not in J")));
        }
        self.check = self.vertices.iter().position(|&w| w == v);
        Ok(self)
    }

    pub fn base(&self) -> Vertex {
        self.vertices[0]
    }

    /// Loop vertices starting at the base.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Step i goes from vertex i to vertex i+1 (cyclically): (region edge index, sign).
    pub fn steps(&self) -> &[(usize, i8)] {
        &self.steps
    }

    /// Boundary vertices of the region, sorted.
    pub fn boundary_vertices(&self) -> &[Vertex] {
        &self.boundary
    }

    /// Loop vertices that are not boundary vertices, sorted.
    pub fn j(&self) -> &[Vertex] {
        &self.j
    }

    /// Position of the check vertex on the loop, if J is not empty.
    pub fn check_position(&self) -> Option<usize> {
        self.check
    }

    pub fn check_vertex(&self) -> Option<Vertex> {
        self.check.map(|i| self.vertices[i])
    }

    pub fn path(&self) -> PathOfEdges {
        let mut vs = self.vertices.clone();
        vs.push(self.vertices[0]);
        PathOfEdges::from_vertices(&vs).expect("loop vertices are adjacent")
    }
}
