//! Stacks of horizontal layers of unit squares and their edge classes.

use super::geometry::{Edge, Plaquette, Vertex};
use super::region::Region;
use crate::error::{Error, Result};
use crate::paths::PathOfEdges;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// One row of consecutive squares S_(x_start, y), ..., S_(x_start+count-1, y).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Layer {
    pub y: i32,
    pub x_start: i32,
    pub count: u32,
}

impl Layer {
    /// x-coordinate of the last square of the row.
    pub fn x_end(&self) -> i32 {
        self.x_start + self.count as i32 - 1
    }

    pub fn squares(&self) -> impl Iterator<Item = Plaquette> + '_ {
        (self.x_start..=self.x_end()).map(move |x| Plaquette::new(x, self.y))
    }
}

/// Overlap data between layer m and layer m+1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overlap {
    /// max of the two starts
    pub z: i32,
    /// min of the two ends, plus one
    pub w: i32,
    /// min of the two starts
    pub z_tilde: i32,
    /// max of the two ends, plus one
    pub w_tilde: i32,
}

impl Overlap {
    pub fn width(&self) -> i32 {
        self.w - self.z
    }
}

/// A region made of consecutive layers in which each pair of neighbouring
/// layers shares at least one horizontal edge (condition S).
///
/// Edges are split into four classes:
/// * `e1`: shared horizontal edges between layers, all but the rightmost of each overlap;
/// * `e2`: the rightmost shared edge of each overlap;
/// * `e3`: vertical edges inside a layer;
/// * `e4`: edges on a single square, i.e. the boundary of the region.
#[derive(Clone, Debug)]
pub struct LayerRegion {
    layers: Vec<Layer>,
    overlaps: Vec<Overlap>,
    region: Region,
    e1: Vec<usize>,
    e2: Vec<usize>,
    e3: Vec<usize>,
    e4: Vec<usize>,
    boundary_loop: Vec<Vertex>,
    p_right: PathOfEdges,
    p_left: PathOfEdges,
}

impl LayerRegion {
    /// Layer m (counted from 0) is row `y + m`, given as `(x_start, count)`.
    pub fn new(y: i32, rows: &[(i32, u32)]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidArgument("a layer region needs at least one row".into()));
        }
        if rows.iter().any(|&(_, c)| c == 0) {
            return Err(Error::InvalidArgument("empty layer".into()));
        }
        let layers: Vec<Layer> = rows
            .iter()
            .enumerate()
            .map(|(m, &(x_start, count))| Layer { y: y + m as i32, x_start, count })
            .collect();

        let mut overlaps = Vec::with_capacity(layers.len().saturating_sub(1));
        for (m, pair) in layers.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            let ov = Overlap {
                z: a.x_start.max(b.x_start),
                w: a.x_end().min(b.x_end()) + 1,
                z_tilde: a.x_start.min(b.x_start),
                w_tilde: a.x_end().max(b.x_end()) + 1,
            };
            if ov.z >= ov.w {
                return Err(Error::ConditionS { layer: m + 1, next: m + 2, z: ov.z, w: ov.w });
            }
            overlaps.push(ov);
        }

        let region = Region::from_squares(layers.iter().flat_map(|l| l.squares()));
        let idx = |e: Edge| region.index_of(&e).expect("class edge lies in the region");

        let mut e1 = Vec::new();
        let mut e2 = Vec::new();
        for (m, ov) in overlaps.iter().enumerate() {
            let line = y + m as i32 + 1;
            e1.extend((ov.z..ov.w - 1).map(|x| idx(Edge::h(x, line))));
            e2.push(idx(Edge::h(ov.w - 1, line)));
        }
        let e3: Vec<usize> = layers
            .iter()
            .flat_map(|l| (l.x_start + 1..=l.x_end()).map(move |x| Edge::v(x, l.y)))
            .map(idx)
            .collect();
        let e4 = region.boundary_edges().to_vec();

        let mut seen = vec![0u8; region.len()];
        for &i in e1.iter().chain(&e2).chain(&e3).chain(&e4) {
            seen[i] += 1;
        }
        if seen.iter().any(|&c| c != 1) {
            return Err(Error::Geometry("edge classes do not partition the region".into()));
        }

        let origin = Vertex::new(layers[0].x_start, y);
        let last = layers.last().unwrap();
        let target = Vertex::new(last.x_end() + 1, last.y + 1);
        let boundary_loop = trace_boundary(&region, &e4, origin)?;
        let cut = boundary_loop
            .iter()
            .position(|&v| v == target)
            .ok_or_else(|| Error::Geometry("top corner not on the boundary loop".into()))?;
        let p_right = PathOfEdges::from_vertices(&boundary_loop[..=cut])?;
        let mut left: Vec<Vertex> = vec![origin];
        left.extend(boundary_loop[cut..].iter().rev());
        let p_left = PathOfEdges::from_vertices(&left)?;

        Ok(LayerRegion { layers, overlaps, region, e1, e2, e3, e4, boundary_loop, p_right, p_left })
    }

    /// Builds the layer structure of an arbitrary finite set of squares.
    pub fn from_squares(squares: &BTreeSet<Plaquette>) -> Result<Self> {
        let mut rows: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
        for p in squares {
            rows.entry(p.y).or_default().push(p.x);
        }
        let y0 = *rows
            .keys()
            .next()
            .ok_or_else(|| Error::Geometry("no squares".into()))?;
        let mut out = Vec::new();
        for (i, (&y, xs)) in rows.iter().enumerate() {
            if y != y0 + i as i32 {
                return Err(Error::Geometry(format!("row {y} does not follow the previous one")));
            }
            let (lo, hi) = (xs[0], *xs.last().unwrap());
            if (hi - lo + 1) as usize != xs.len() {
                return Err(Error::Geometry(format!("row {y} is not contiguous")));
            }
            out.push((lo, xs.len() as u32));
        }
        LayerRegion::new(y0, &out)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn overlaps(&self) -> &[Overlap] {
        &self.overlaps
    }

    /// The edge set of the region.
    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn squares(&self) -> BTreeSet<Plaquette> {
        self.layers.iter().flat_map(|l| l.squares()).collect()
    }

    pub fn e1(&self) -> &[usize] {
        &self.e1
    }

    pub fn e2(&self) -> &[usize] {
        &self.e2
    }

    pub fn e3(&self) -> &[usize] {
        &self.e3
    }

    pub fn e4(&self) -> &[usize] {
        &self.e4
    }

    /// Bottom-left corner (x_1^{(1)}, y).
    pub fn origin(&self) -> Vertex {
        self.p_right.origin()
    }

    /// Top-right corner of the last layer.
    pub fn target(&self) -> Vertex {
        self.p_right.target()
    }

    /// Boundary vertices in counter-clockwise order starting at the origin.
    pub fn boundary_loop(&self) -> &[Vertex] {
        &self.boundary_loop
    }

    /// Boundary path from the origin that starts along the bottom row.
    pub fn p_right(&self) -> &PathOfEdges {
        &self.p_right
    }

    /// Boundary path from the origin that starts up the left side.
    pub fn p_left(&self) -> &PathOfEdges {
        &self.p_left
    }
}

/// Walks the boundary edges counter-clockwise, starting rightwards from `origin`.
fn trace_boundary(region: &Region, boundary: &[usize], origin: Vertex) -> Result<Vec<Vertex>> {
    let mut at: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for &i in boundary {
        let e = region.edges()[i];
        at.entry(e.tail()).or_default().push(e.head());
        at.entry(e.head()).or_default().push(e.tail());
    }
    if at.values().any(|n| n.len() != 2) {
        return Err(Error::Geometry("boundary is not a simple loop".into()));
    }
    let mut out = vec![origin];
    let (mut prev, mut cur) = (origin, origin.offset(1, 0));
    while cur != origin {
        out.push(cur);
        let n = &at[&cur];
        let next = if n[0] == prev { n[1] } else { n[0] };
        prev = cur;
        cur = next;
        if out.len() > boundary.len() {
            return Err(Error::Geometry("boundary walk did not close".into()));
        }
    }
    if out.len() != boundary.len() {
        return Err(Error::Geometry("boundary has more than one component".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(lr: &LayerRegion, ids: &[usize]) -> Vec<Edge> {
        ids.iter().map(|&i| lr.region().edges()[i]).collect()
    }

    #[test]
    fn single_row_classes() {
        let lr = LayerRegion::new(0, &[(0, 3)]).unwrap();
        assert_eq!(lr.e1().len(), 0);
        assert_eq!(lr.e2().len(), 0);
        assert_eq!(lr.e3().len(), 2);
        assert_eq!(lr.e4().len(), 8);
        assert_eq!(lr.region().len(), 10);
    }

    #[test]
    fn l_shape_classes() {
        let lr = LayerRegion::new(0, &[(0, 3), (0, 2)]).unwrap();
        assert_eq!(lr.region().len(), 15);
        assert_eq!(lr.region().plaquettes().len(), 5);
        assert_eq!(edges(&lr, lr.e1()), vec![Edge::h(0, 1)]);
        assert_eq!(edges(&lr, lr.e2()), vec![Edge::h(1, 1)]);
        assert_eq!(lr.e3().len(), 3);
        assert_eq!(lr.e4().len(), 10);
    }

    #[test]
    fn condition_s_violation() {
        let err = LayerRegion::new(0, &[(0, 1), (2, 1)]).unwrap_err();
        assert_eq!(err, Error::ConditionS { layer: 1, next: 2, z: 2, w: 1 });
        // touching only at a corner is not enough either
        assert!(LayerRegion::new(0, &[(0, 1), (1, 1)]).is_err());
    }

    #[test]
    fn boundary_paths_meet_at_the_top() {
        let lr = LayerRegion::new(0, &[(0, 3), (0, 2)]).unwrap();
        let pr = lr.p_right();
        let pl = lr.p_left();
        assert_eq!(pr.origin(), Vertex::new(0, 0));
        assert_eq!(pr.target(), Vertex::new(2, 2));
        assert_eq!(pl.target(), Vertex::new(2, 2));
        assert_eq!(pr.steps()[0], (Edge::h(0, 0), 1));
        assert_eq!(pl.steps()[0], (Edge::v(0, 0), 1));
        assert_eq!(pr.len() + pl.len(), lr.e4().len());
    }

    #[test]
    fn from_squares_round_trip() {
        let lr = LayerRegion::new(-1, &[(2, 1), (0, 4), (1, 2)]).unwrap();
        let again = LayerRegion::from_squares(&lr.squares()).unwrap();
        assert_eq!(again.layers(), lr.layers());
        let mut gap = lr.squares();
        gap.remove(&Plaquette::new(1, 0));
        assert!(LayerRegion::from_squares(&gap).is_err());
    }
}
