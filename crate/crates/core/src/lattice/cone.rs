//! Truncation of the region between two staircases by a rectangle.

use super::frame::BoundaryLoop;
use super::geometry::{Edge, Plaquette, Vertex};
use super::layers::LayerRegion;
use super::region::{Rect, Region};
use super::staircase::StaircasePath;
use crate::error::{Error, Result};
use crate::paths::PathOfEdges;
use std::collections::{BTreeSet, HashMap, HashSet};

/// The region cut out of Λ_N by the loop p1 · (rectangle boundary) · p2⁻¹,
/// with its transversal chain of squares and the edge split of Λ̂_N.
#[derive(Clone, Debug)]
pub struct ConeTruncation {
    pub v0: Vertex,
    pub p1: StaircasePath,
    pub p2: StaircasePath,
    pub rect: Rect,
    pub sigma: i8,
    /// Where p1 and p2 first reach the rectangle boundary.
    pub w1: Vertex,
    pub w2: Vertex,
    pub loop_path: PathOfEdges,
    pub layers: LayerRegion,
    pub frame: BoundaryLoop,
    pub rect_region: Region,
    /// S_1, ..., S_M ordered from the p1 end to the p2 end.
    pub transversal: Vec<Plaquette>,
    /// e_0, ..., e_M; e_{i-1} and e_i lie on S_i.
    pub shared: Vec<Edge>,
    pub be: Vec<Edge>,
    pub oe: Vec<Edge>,
}

impl ConeTruncation {
    /// The edge set 𝔼(𝔖).
    pub fn region(&self) -> &Region {
        self.layers.region()
    }

    pub fn j(&self) -> &[Vertex] {
        self.frame.j()
    }

    pub fn boundary_vertices(&self) -> &[Vertex] {
        self.frame.boundary_vertices()
    }

    /// M, the number of transversal squares.
    pub fn m(&self) -> usize {
        self.transversal.len()
    }

    /// Region on the OE edges.
    pub fn oe_region(&self) -> Region {
        Region::from_edges(self.oe.iter().copied())
    }
}

/// Vertices of p from its origin up to the first vertex on the rectangle boundary.
pub fn truncate(p: &StaircasePath, rect: &Rect) -> Result<Vec<Vertex>> {
    let start = p.origin();
    if !rect.contains(start) || rect.on_boundary(start) {
        return Err(Error::Geometry(format!("origin {start} is not inside the rectangle")));
    }
    let cap = 4 * (rect.half_width() + rect.half_height()) as usize + 4;
    let mut out = Vec::new();
    for v in p.vertices().take(cap) {
        out.push(v);
        if rect.on_boundary(v) {
            return Ok(out);
        }
    }
    Err(Error::Geometry("staircase does not reach the rectangle boundary".into()))
}

/// The loop 𝔠 and the squares it encloses.
pub fn truncated_loop(
    p1: &StaircasePath,
    p2: &StaircasePath,
    rect: &Rect,
    sigma: i8,
) -> Result<(Vec<Vertex>, LayerRegion)> {
    if p1.origin() != p2.origin() {
        return Err(Error::InvalidArgument("staircases start at different vertices".into()));
    }
    let a = truncate(p1, rect)?;
    let b = truncate(p2, rect)?;
    let (w1, w2) = (*a.last().unwrap(), *b.last().unwrap());
    let mut cycle = a.clone();
    let mut v = w1;
    while v != w2 {
        v = if sigma > 0 { rect.next_ccw(v) } else { rect.next_cw(v) };
        cycle.push(v);
    }
    cycle.extend(b.iter().rev().skip(1));
    // cycle now ends at v0 again
    let body = &cycle[..cycle.len() - 1];
    let distinct: HashSet<Vertex> = body.iter().copied().collect();
    if distinct.len() != body.len() || body.len() < 4 {
        return Err(Error::Geometry("truncated loop is not simple".into()));
    }

    let mut crossings: HashMap<i32, Vec<i32>> = HashMap::new();
    for w in cycle.windows(2) {
        let (e, _) = Edge::between(w[0], w[1]).unwrap();
        if e.kind == super::EdgeKind::V {
            crossings.entry(e.base.y).or_default().push(e.base.x);
        }
    }
    let inside: BTreeSet<Plaquette> = rect
        .squares()
        .into_iter()
        .filter(|p| {
            crossings
                .get(&p.y)
                .map_or(false, |xs| xs.iter().filter(|&&x| x > p.x).count() % 2 == 1)
        })
        .collect();
    if inside.is_empty() {
        return Err(Error::Geometry("truncated loop encloses no squares".into()));
    }
    let layers = LayerRegion::from_squares(&inside)?;
    Ok((cycle, layers))
}

/// Builds the truncation and checks the transversal chain structure.
pub fn cone_truncation(
    v0: Vertex,
    p1: &StaircasePath,
    p2: &StaircasePath,
    rect: Rect,
    sigma: i8,
) -> Result<ConeTruncation> {
    if sigma != 1 && sigma != -1 {
        return Err(Error::InvalidArgument("sigma must be +1 or -1".into()));
    }
    if p1.origin() != v0 || p2.origin() != v0 {
        return Err(Error::InvalidArgument(format!("staircases must start at {v0}")));
    }
    let (cycle, layers) = truncated_loop(p1, p2, &rect, sigma)?;
    let w1 = truncate(p1, &rect)?.pop().unwrap();
    let w2 = truncate(p2, &rect)?.pop().unwrap();
    let loop_path = PathOfEdges::from_vertices(&cycle)?;
    let frame = BoundaryLoop::new(&layers, v0)?;

    let rect_region = rect.region();
    let inner = layers.region();
    let vset: HashSet<Vertex> = inner.vertices().iter().copied().collect();
    let (mut be, mut oe) = (Vec::new(), Vec::new());
    for &e in rect_region.edges() {
        if inner.contains(&e) {
            continue;
        }
        match e.endpoints().iter().filter(|v| vset.contains(v)).count() {
            1 => be.push(e),
            _ => oe.push(e),
        }
    }
    let be_set: HashSet<Edge> = be.iter().copied().collect();
    let squares = layers.squares();

    let mut transversal_set = BTreeSet::new();
    let mut on_edge: HashMap<Edge, Vec<Plaquette>> = HashMap::new();
    for p in rect.squares() {
        if squares.contains(&p) {
            continue;
        }
        let hits: Vec<Edge> = p.edges().into_iter().filter(|e| be_set.contains(e)).collect();
        if hits.is_empty() {
            if p.corners().iter().any(|v| vset.contains(v)) {
                return Err(Error::Geometry(format!("{p} touches the region without a BE edge")));
            }
            continue;
        }
        if hits.len() != 2 {
            return Err(Error::Geometry(format!("{p} has {} BE edges", hits.len())));
        }
        transversal_set.insert(p);
        for e in hits {
            on_edge.entry(e).or_default().push(p);
        }
    }

    let is_outer = |e: &Edge| rect_region.is_boundary_edge(rect_region.index_of(e).unwrap());
    let ends: Vec<Edge> = be.iter().copied().filter(is_outer).collect();
    if ends.len() != 2 {
        return Err(Error::Geometry(format!("{} BE edges on the rectangle boundary", ends.len())));
    }
    let e0 = *ends
        .iter()
        .find(|e| e.endpoints().contains(&w1))
        .ok_or_else(|| Error::Geometry("no BE edge at the end of p1".into()))?;

    let mut shared = vec![e0];
    let mut transversal = Vec::new();
    let mut edge = e0;
    let mut prev: Option<Plaquette> = None;
    loop {
        let sq = *on_edge[&edge]
            .iter()
            .find(|&&p| Some(p) != prev)
            .ok_or_else(|| Error::Geometry("transversal chain breaks".into()))?;
        let next = sq
            .edges()
            .into_iter()
            .find(|e| *e != edge && be_set.contains(e))
            .unwrap();
        transversal.push(sq);
        shared.push(next);
        if transversal.len() > transversal_set.len() {
            return Err(Error::Geometry("transversal chain revisits a square".into()));
        }
        if is_outer(&next) {
            break;
        }
        prev = Some(sq);
        edge = next;
    }
    if transversal.len() != transversal_set.len() || shared.len() != be.len() {
        return Err(Error::Geometry("transversal chain does not cover BE".into()));
    }
    for (i, a) in transversal.iter().enumerate() {
        for b in transversal.iter().skip(i + 2) {
            if a.edges().iter().any(|e| b.edges().contains(e)) {
                return Err(Error::Geometry(format!("non-adjacent {a} and {b} share an edge")));
            }
        }
    }

    Ok(ConeTruncation {
        v0,
        p1: p1.clone(),
        p2: p2.clone(),
        rect,
        sigma,
        w1,
        w2,
        loop_path,
        layers,
        frame,
        rect_region,
        transversal,
        shared,
        be,
        oe,
    })
}

/// Whether the truncated loop is simple and bounds a condition-S region for
/// every N in `n_min..=n_min + horizon`.
pub fn well_separated(
    p1: &StaircasePath,
    p2: &StaircasePath,
    n_min: u32,
    n0: u32,
    m0: u32,
    horizon: u32,
) -> bool {
    (n_min..=n_min + horizon).all(|n| {
        Rect::new(n, n0, m0)
            .and_then(|r| truncated_loop(p1, p2, &r, 1))
            .is_ok()
    })
}
