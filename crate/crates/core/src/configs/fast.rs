//! Constructive enumeration: boundary potential × free labels × E1 labels,
//! pushed through Ξ and the completion plan.

use super::brute::par_scan;
use super::complete::CompletionPlan;
use super::packed::Configuration;
use super::xi::{BoundaryPotential, XiMap};
use crate::error::{Error, Result};
use crate::group::{Elem, Group, IDENTITY};
use crate::lattice::{BoundaryLoop, ConeTruncation, LayerRegion, Rect, Region};
use crate::paths::vertex_potential;
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};

/// The free data behind one admissible configuration.
#[derive(Clone, Copy, Debug)]
pub struct Free<'x> {
    /// Potential on the boundary vertices, e at the base.
    pub t: &'x [Elem],
    pub u: &'x [Elem],
    /// Labels on E1.
    pub g: &'x [Elem],
}

struct Scratch {
    t: Vec<Elem>,
    a: Vec<Elem>,
    labels: Vec<Elem>,
}

/// Streams the admissible configurations of a layered region without rejection.
#[derive(Clone, Debug)]
pub struct FastEnumerator<'a> {
    lr: &'a LayerRegion,
    group: &'a Group,
    xi: XiMap,
    plan: CompletionPlan,
}

impl<'a> FastEnumerator<'a> {
    /// Uses the bottom-left corner of the first layer as the base vertex.
    pub fn new(lr: &'a LayerRegion, group: &'a Group) -> Result<Self> {
        let frame = BoundaryLoop::new(lr, lr.origin())?;
        Self::with_frame(lr, &frame, group)
    }

    pub fn with_frame(lr: &'a LayerRegion, frame: &BoundaryLoop, group: &'a Group) -> Result<Self> {
        Ok(FastEnumerator { lr, group, xi: XiMap::new(lr, frame)?, plan: CompletionPlan::new(lr)? })
    }

    pub fn for_cone(ct: &'a ConeTruncation, group: &'a Group) -> Result<Self> {
        Self::with_frame(&ct.layers, &ct.frame, group)
    }

    pub fn xi(&self) -> &XiMap {
        &self.xi
    }

    pub fn plan(&self) -> &CompletionPlan {
        &self.plan
    }

    pub fn layers(&self) -> &LayerRegion {
        self.lr
    }

    /// Number of free labels: |∂V| − 1 + |J| + |E1|.
    pub fn free_len(&self) -> usize {
        self.xi.boundary_vertices().len() - 1 + self.xi.u_len() + self.lr.e1().len()
    }

    /// |C|, the number of admissible configurations.
    pub fn size(&self) -> u128 {
        self.group.power(self.free_len())
    }

    /// |G|^{|J|+|E1|}: configurations sharing one boundary potential.
    pub fn fiber_size(&self) -> u128 {
        self.group.power(self.xi.u_len() + self.lr.e1().len())
    }

    /// Fills `labels` (region order) from Ξ(t, u) and `g`. Returns false if the last square fails to close.
    pub fn build(&self, t: &[Elem], u: &[Elem], g: &[Elem], a: &mut [Elem], labels: &mut [Elem]) -> bool {
        self.xi.apply(self.group, t, u, a);
        for (&i, &x) in self.lr.e4().iter().zip(a.iter()) {
            labels[i] = x;
        }
        for (&i, &x) in self.lr.e1().iter().zip(g) {
            labels[i] = x;
        }
        self.plan.run(self.group, labels)
    }

    fn scan_with<T, F>(&self, fixed_t: Option<&[Elem]>, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(Free<'_>, &[Elem]) -> Option<T> + Sync,
    {
        let nb = self.xi.boundary_vertices().len();
        let base = self.xi.base_slot();
        let nu = self.xi.u_len();
        let nt = if fixed_t.is_some() { 0 } else { nb - 1 };
        let n = nt + nu + self.lr.e1().len();
        if self.group.power(n) > u64::MAX as u128 {
            return Err(Error::Overflow("enumeration size"));
        }
        let broken = AtomicBool::new(false);
        let init = || Scratch {
            t: fixed_t.map_or_else(|| vec![IDENTITY; nb], <[Elem]>::to_vec),
            a: vec![IDENTITY; self.xi.e4_len()],
            labels: vec![IDENTITY; self.lr.region().len()],
        };
        let out = par_scan(self.group.order(), n, init, |digits, s| {
            if fixed_t.is_none() {
                let (lo, hi) = s.t.split_at_mut(base);
                lo.copy_from_slice(&digits[..base]);
                hi[1..].copy_from_slice(&digits[base..nt]);
            }
            let (u, g) = digits[nt..].split_at(nu);
            if !self.build(&s.t, u, g, &mut s.a, &mut s.labels) {
                broken.store(true, Ordering::Relaxed);
                return None;
            }
            f(Free { t: &s.t, u, g }, &s.labels)
        });
        if broken.load(Ordering::Relaxed) {
            return Err(Error::Geometry("constructed boundary data failed to close".into()));
        }
        Ok(out)
    }

    /// Runs `f` on every admissible labelling together with its free data.
    pub fn scan<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(Free<'_>, &[Elem]) -> Option<T> + Sync,
    {
        self.scan_with(None, f)
    }

    pub fn enumerate(&self) -> Result<Vec<Configuration>> {
        self.scan(|_, labels| Some(Configuration::from_labels(labels, self.group)))
    }

    /// Counts by streaming every configuration.
    pub fn count(&self) -> Result<u64> {
        Ok(self.scan(|_, _| Some(())).map(|v| v.len() as u64)?)
    }

    /// One admissible labelling, uniform over C since the free data are.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<Elem>> {
        let order = self.group.order();
        let mut draw = |n: usize| -> Vec<Elem> { (0..n).map(|_| rng.gen_range(0..order) as Elem).collect() };
        let mut t = draw(self.xi.boundary_vertices().len());
        t[self.xi.base_slot()] = IDENTITY;
        let u = draw(self.xi.u_len());
        let g = draw(self.lr.e1().len());
        let mut a = vec![IDENTITY; self.xi.e4_len()];
        let mut labels = vec![IDENTITY; self.lr.region().len()];
        if !self.build(&t, &u, &g, &mut a, &mut labels) {
            return Err(Error::Geometry("constructed boundary data failed to close".into()));
        }
        Ok(labels)
    }

    /// All admissible labellings whose boundary potential is `t` (aligned
    /// with the boundary vertices).
    pub fn fiber(&self, t: &[Elem]) -> Result<Vec<Configuration>> {
        if t.len() != self.xi.boundary_vertices().len() || t[self.xi.base_slot()] != IDENTITY {
            return Err(Error::InvalidArgument("potential must be e at the base vertex".into()));
        }
        self.scan_with(Some(t), |_, labels| Some(Configuration::from_labels(labels, self.group)))
    }
}

/// Every admissible configuration of `lr`, built constructively.
pub fn enumerate_admissible_fast(lr: &LayerRegion, group: &Group) -> Result<Vec<Configuration>> {
    FastEnumerator::new(lr, group)?.enumerate()
}

/// The rectangle as a stack of equal layers.
pub fn rectangle_layers(rect: &Rect) -> Result<LayerRegion> {
    let (y0, rows) = rect.rows();
    LayerRegion::new(y0, &rows)
}

/// |{k ∈ C : potential of k on the boundary vertices = t}|, from the
/// construction: |G|^{|J|+|E1|} when t is e at the base, 0 otherwise.
pub fn count_by_boundary_potential(ct: &ConeTruncation, group: &Group, t: &BoundaryPotential) -> Result<u128> {
    let xi = XiMap::new(&ct.layers, &ct.frame)?;
    let ts = xi.potential_slice(t)?;
    if ts[xi.base_slot()] != IDENTITY {
        return Ok(0);
    }
    Ok(group.power(ct.j().len() + ct.layers.e1().len()))
}

/// Potential of an admissible labelling on `vertices`, relative to `base`,
/// computed from scratch by a spanning tree of the region.
pub fn boundary_potential_of(
    region: &Region,
    group: &Group,
    labels: &[Elem],
    base: crate::lattice::Vertex,
    vertices: &[crate::lattice::Vertex],
) -> Result<Vec<Elem>> {
    let pot = vertex_potential(region, group, labels, base)?;
    Ok(vertices.iter().map(|v| pot[v]).collect())
}

/// Histogram of boundary potentials over a list of configurations.
pub fn potential_histogram(
    region: &Region,
    group: &Group,
    frame: &BoundaryLoop,
    configs: &[Configuration],
) -> Result<BTreeMap<Vec<Elem>, u64>> {
    let mut hist = BTreeMap::new();
    for c in configs {
        let t = boundary_potential_of(region, group, &c.labels(), frame.base(), frame.boundary_vertices())?;
        *hist.entry(t).or_insert(0) += 1;
    }
    Ok(hist)
}

/// Fiber sizes of the map from admissible configurations to boundary potentials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountingReport {
    pub total: u128,
    /// Number of distinct potentials met.
    pub potentials: u64,
    /// |G|^{|∂V|-1}.
    pub expected_potentials: u128,
    /// Fiber size -> number of potentials with that fiber size.
    pub fiber_histogram: BTreeMap<u64, u64>,
    /// |G|^{|J|+|E1|}.
    pub expected_fiber: u128,
}

impl CountingReport {
    pub fn holds(&self) -> bool {
        self.fiber_histogram.len() == 1
            && self.fiber_histogram.keys().all(|&f| f as u128 == self.expected_fiber)
            && self.potentials as u128 == self.expected_potentials
            && self.total == self.expected_fiber * self.expected_potentials
    }
}

/// Enumerates the region, recomputes each potential from scratch and tallies the fibers.
pub fn verify_counting(lr: &LayerRegion, frame: &BoundaryLoop, group: &Group, budget: u64) -> Result<CountingReport> {
    let fe = FastEnumerator::with_frame(lr, frame, group)?;
    if fe.size() > budget as u128 {
        return Err(Error::Budget { needed: fe.size(), budget });
    }
    let region = lr.region();
    let mut pots = fe.scan(|_, lab| boundary_potential_of(region, group, lab, frame.base(), frame.boundary_vertices()).ok())?;
    let total = pots.len() as u128;
    pots.sort_unstable();
    let mut fiber_histogram = BTreeMap::new();
    let mut potentials = 0;
    for fiber in pots.chunk_by(|a, b| a == b) {
        *fiber_histogram.entry(fiber.len() as u64).or_insert(0) += 1;
        potentials += 1;
    }
    Ok(CountingReport {
        total,
        potentials,
        expected_potentials: group.power(frame.boundary_vertices().len() - 1),
        fiber_histogram,
        expected_fiber: group.power(frame.j().len() + lr.e1().len()),
    })
}
