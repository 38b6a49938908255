//! Lattice paths, holonomies and vertex potentials.

use crate::error::{Error, Result};
use crate::group::{Elem, Group, IDENTITY};
use crate::lattice::{Edge, Region, Vertex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashMap, VecDeque};

/// Anything that can label lattice edges by group elements.
pub trait EdgeLabels {
    fn label(&self, e: &Edge) -> Option<Elem>;
}

impl EdgeLabels for HashMap<Edge, Elem> {
    fn label(&self, e: &Edge) -> Option<Elem> {
        self.get(e).copied()
    }
}

impl EdgeLabels for BTreeMap<Edge, Elem> {
    fn label(&self, e: &Edge) -> Option<Elem> {
        self.get(e).copied()
    }
}

/// Labels of a region given as a slice aligned with its canonical edge order.
pub struct RegionLabels<'a> {
    pub region: &'a Region,
    pub labels: &'a [Elem],
}

impl EdgeLabels for RegionLabels<'_> {
    fn label(&self, e: &Edge) -> Option<Elem> {
        self.region.index_of(e).map(|i| self.labels[i])
    }
}

/// A sequence of edges with traversal signs, consecutive steps sharing a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathOfEdges {
    start: Vertex,
    steps: Vec<(Edge, i8)>,
}

impl PathOfEdges {
    /// The path with no steps sitting at `at`.
    pub fn empty(at: Vertex) -> Self {
        PathOfEdges { start: at, steps: Vec::new() }
    }

    /// Checks v_{e_i, σ_i} = v_{e_{i+1}, -σ_{i+1}} for every pair of steps.
    pub fn from_steps(steps: Vec<(Edge, i8)>) -> Result<Self> {
        let first = steps
            .first()
            .ok_or_else(|| Error::InvalidArgument("a path needs at least one step".into()))?;
        let start = first.0.endpoint(-first.1);
        for (i, w) in steps.windows(2).enumerate() {
            if w[0].0.endpoint(w[0].1) != w[1].0.endpoint(-w[1].1) {
                return Err(Error::Disconnected(i + 1));
            }
        }
        Ok(PathOfEdges { start, steps })
    }

    /// The path visiting the given vertices in order.
    pub fn from_vertices(vs: &[Vertex]) -> Result<Self> {
        let start = *vs
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty vertex list".into()))?;
        let mut steps = Vec::with_capacity(vs.len().saturating_sub(1));
        for (i, w) in vs.windows(2).enumerate() {
            steps.push(Edge::between(w[0], w[1]).ok_or(Error::Disconnected(i + 1))?);
        }
        Ok(PathOfEdges { start, steps })
    }

    pub fn origin(&self) -> Vertex {
        self.start
    }

    pub fn target(&self) -> Vertex {
        self.steps.last().map_or(self.start, |&(e, s)| e.endpoint(s))
    }

    pub fn steps(&self) -> &[(Edge, i8)] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.origin() == self.target()
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        std::iter::once(self.start)
            .chain(self.steps.iter().map(|&(e, s)| e.endpoint(s)))
            .collect()
    }

    /// Concatenation; requires `self.target() == other.origin()`.
    pub fn compose(&self, other: &PathOfEdges) -> Result<PathOfEdges> {
        if self.target() != other.origin() {
            return Err(Error::Composition { left: self.target(), right: other.origin() });
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Ok(PathOfEdges { start: self.start, steps })
    }

    /// The reversed path.
    pub fn inverse(&self) -> PathOfEdges {
        PathOfEdges {
            start: self.target(),
            steps: self.steps.iter().rev().map(|&(e, s)| (e, -s)).collect(),
        }
    }

    /// Ψ_p(c) = c_{e_1}^{σ_1} c_{e_2}^{σ_2} ..., multiplied left to right.
    pub fn holonomy<L: EdgeLabels + ?Sized>(&self, group: &Group, labels: &L) -> Result<Elem> {
        let mut acc = IDENTITY;
        for &(e, s) in &self.steps {
            let h = labels.label(&e).ok_or(Error::IncompleteConfiguration(e))?;
            acc = group.mul(acc, group.pow_sign(h, s));
        }
        Ok(acc)
    }
}

/// Whether every plaquette of the region satisfies bottom·right = left·top.
pub fn plaquettes_flat(region: &Region, group: &Group, labels: &[Elem]) -> bool {
    region.plaquette_edges().iter().all(|&[b, r, l, t]| {
        group.mul(labels[b], labels[r]) == group.mul(labels[l], labels[t])
    })
}

/// Ψ^{v0}(c)(v): the holonomy of any path in the region from `v0` to `v`.
///
/// Computed along a breadth-first spanning tree; every non-tree edge is then
/// checked, so a label set that is not flat along some cycle is rejected
/// even if all plaquettes are admissible.
pub fn vertex_potential(
    region: &Region,
    group: &Group,
    labels: &[Elem],
    v0: Vertex,
) -> Result<BTreeMap<Vertex, Elem>> {
    if labels.len() != region.len() {
        return Err(Error::InvalidArgument(format!(
            "{} labels for {} edges",
            labels.len(),
            region.len()
        )));
    }
    if !plaquettes_flat(region, group, labels) {
        return Err(Error::NotAdmissible("some plaquette has nontrivial holonomy".into()));
    }
    let root = region
        .vertex_index(&v0)
        .ok_or_else(|| Error::InvalidArgument(format!("base vertex {v0} not in region")))?;
    let pot = potential_slice(region, group, labels, root)?;
    if pot.iter().any(Option::is_none) {
        return Err(Error::Geometry("region is not connected".into()));
    }
    Ok(region
        .vertices()
        .iter()
        .zip(pot)
        .map(|(&v, p)| (v, p.unwrap()))
        .collect())
}

fn potential_slice(
    region: &Region,
    group: &Group,
    labels: &[Elem],
    root: usize,
) -> Result<Vec<Option<Elem>>> {
    let adj = region.adjacency();
    let mut pot = vec![None; region.vertices().len()];
    let mut tree = vec![false; region.len()];
    pot[root] = Some(IDENTITY);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let pv = pot[v].unwrap();
        for &(e, w, s) in &adj[v] {
            if pot[w].is_none() {
                pot[w] = Some(group.mul(pv, group.pow_sign(labels[e], s)));
                tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    for (v, nbrs) in adj.iter().enumerate() {
        for &(e, w, s) in nbrs {
            if tree[e] || s < 0 {
                continue;
            }
            if let (Some(pv), Some(pw)) = (pot[v], pot[w]) {
                if group.mul(pv, labels[e]) != pw {
                    return Err(Error::NotAdmissible(format!(
                        "holonomy around a cycle through {} is not trivial",
                        region.edges()[e]
                    )));
                }
            }
        }
    }
    Ok(pot)
}

/// Compares holonomies of two random lattice paths between random vertex pairs.
///
/// Returns `Ok(None)` when all samples agree, or the first disagreeing pair of paths.
pub fn path_independence_check(
    region: &Region,
    group: &Group,
    labels: &[Elem],
    samples: usize,
    seed: u64,
) -> Result<Option<(PathOfEdges, PathOfEdges)>> {
    let view = RegionLabels { region, labels };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = region.vertices().len();
    if nv == 0 {
        return Ok(None);
    }
    for _ in 0..samples {
        let a = rng.gen_range(0..nv);
        let b = rng.gen_range(0..nv);
        let p = random_path(region, a, b, &mut rng);
        let q = random_path(region, a, b, &mut rng);
        if p.holonomy(group, &view)? != q.holonomy(group, &view)? {
            return Ok(Some((p, q)));
        }
    }
    Ok(None)
}

/// A random walk from `a` followed by a randomised shortest route to `b`.
pub fn random_path<R: Rng>(region: &Region, a: usize, b: usize, rng: &mut R) -> PathOfEdges {
    let adj = region.adjacency();
    let vs = region.vertices();
    let mut walk = vec![a];
    let len = rng.gen_range(0..=2 * vs.len());
    let mut cur = a;
    for _ in 0..len {
        if let Some(&(_, w, _)) = adj[cur].choose(rng) {
            cur = w;
            walk.push(w);
        }
    }
    // randomised breadth-first search from the end of the walk
    let mut prev = vec![usize::MAX; vs.len()];
    prev[cur] = cur;
    let mut queue = VecDeque::from([cur]);
    while let Some(v) = queue.pop_front() {
        if v == b {
            break;
        }
        let mut nbrs: Vec<_> = adj[v].iter().map(|&(_, w, _)| w).collect();
        nbrs.shuffle(rng);
        for w in nbrs {
            if prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    let mut tail = vec![];
    let mut v = b;
    while v != cur {
        tail.push(v);
        v = prev[v];
    }
    walk.extend(tail.into_iter().rev());
    let verts: Vec<Vertex> = walk.iter().map(|&i| vs[i]).collect();
    PathOfEdges::from_vertices(&verts).expect("walk uses region edges")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{rectangle_region, Plaquette};

    fn z3() -> Group {
        Group::cyclic(3).unwrap()
    }

    #[test]
    fn compose_and_inverse() {
        let p = PathOfEdges::from_vertices(&[Vertex::new(0, 0), Vertex::new(1, 0)]).unwrap();
        let q = PathOfEdges::from_vertices(&[Vertex::new(1, 0), Vertex::new(1, 1)]).unwrap();
        let pq = p.compose(&q).unwrap();
        assert_eq!(pq.target(), Vertex::new(1, 1));
        assert!(q.compose(&p).is_err());
        assert_eq!(pq.inverse().inverse(), pq);
        assert_eq!(pq.inverse().steps()[0], (Edge::v(1, 0), -1));
    }

    #[test]
    fn from_steps_rejects_gaps() {
        let bad = vec![(Edge::h(0, 0), 1), (Edge::h(3, 0), 1)];
        assert_eq!(PathOfEdges::from_steps(bad), Err(Error::Disconnected(1)));
    }

    #[test]
    fn holonomy_of_inverse_is_inverse() {
        let g = Group::dihedral(3).unwrap();
        let mut labels = HashMap::new();
        labels.insert(Edge::h(0, 0), 1);
        labels.insert(Edge::v(1, 0), 3);
        let p = PathOfEdges::from_vertices(&[
            Vertex::new(0, 0),
            Vertex::new(1, 0),
            Vertex::new(1, 1),
        ])
        .unwrap();
        let h = p.holonomy(&g, &labels).unwrap();
        assert_eq!(h, g.mul(1, 3));
        assert_eq!(p.inverse().holonomy(&g, &labels).unwrap(), g.inv(h));
        let missing = PathOfEdges::from_vertices(&[Vertex::new(0, 0), Vertex::new(0, 1)]).unwrap();
        assert!(missing.holonomy(&g, &labels).is_err());
    }

    #[test]
    fn potential_on_flat_configuration() {
        let region = Region::from_squares([Plaquette::new(0, 0)]);
        // bottom = 1, right = 2 forces left * top = 0; pick left = 1, top = 2
        let mut labels = vec![0; 4];
        for (e, val) in [(Edge::h(0, 0), 1), (Edge::v(1, 0), 2), (Edge::v(0, 0), 1), (Edge::h(0, 1), 2)] {
            labels[region.index_of(&e).unwrap()] = val;
        }
        let pot = vertex_potential(&region, &z3(), &labels, Vertex::new(0, 0)).unwrap();
        assert_eq!(pot[&Vertex::new(1, 1)], 0);
        assert_eq!(pot[&Vertex::new(1, 0)], 1);
        labels[0] = 0;
        assert!(vertex_potential(&region, &z3(), &labels, Vertex::new(0, 0)).is_err());
    }

    #[test]
    fn independence_detects_flux() {
        let region = rectangle_region(1, 1, 1).unwrap();
        let g = z3();
        let mut labels = vec![0; region.len()];
        assert!(path_independence_check(&region, &g, &labels, 200, 7).unwrap().is_none());
        labels[region.index_of(&Edge::h(0, 0)).unwrap()] = 1;
        assert!(path_independence_check(&region, &g, &labels, 200, 7).unwrap().is_some());
    }

    mod props {
        use super::*;
        use crate::configs::{rectangle_layers, FastEnumerator};
        use crate::lattice::Rect;
        use rand::Rng;
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn flat_labels_have_path_independent_holonomy(seed in any::<u64>(), order in 1usize..=4, n in 1u32..=2) {
                let g = Group::cyclic(order).unwrap();
                let layers = rectangle_layers(&Rect::square(n).unwrap()).unwrap();
                let fe = FastEnumerator::new(&layers, &g).unwrap();
                let labels = fe.sample(&mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
                let region = layers.region();
                prop_assert!(plaquettes_flat(region, &g, &labels));
                prop_assert!(path_independence_check(region, &g, &labels, 20, seed).unwrap().is_none());
            }

            #[test]
            fn holonomy_is_multiplicative(seed in any::<u64>()) {
                let g = Group::dihedral(3).unwrap();
                let region = rectangle_region(2, 1, 1).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let labels: HashMap<Edge, Elem> =
                    region.edges().iter().map(|&e| (e, rng.gen_range(0..6) as Elem)).collect();
                let nv = region.vertices().len();
                let (a, b, c) = (rng.gen_range(0..nv), rng.gen_range(0..nv), rng.gen_range(0..nv));
                let p = random_path(&region, a, b, &mut rng);
                let q = random_path(&region, b, c, &mut rng);
                let pq = p.compose(&q).unwrap();
                let hp = p.holonomy(&g, &labels).unwrap();
                let hq = q.holonomy(&g, &labels).unwrap();
                prop_assert_eq!(pq.holonomy(&g, &labels).unwrap(), g.mul(hp, hq));
                prop_assert_eq!(p.inverse().holonomy(&g, &labels).unwrap(), g.inv(hp));
            }
        }
    }
}
