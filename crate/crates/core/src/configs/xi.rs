//! Boundary potentials and the bijection Ξ between (potential, free labels)
//! and boundary labels with trivial loop holonomy.

use crate::error::{Error, Result};
use crate::group::{Elem, Group, IDENTITY};
use crate::lattice::{BoundaryLoop, Edge, LayerRegion, Vertex};
use super::brute::{check_budget, par_scan};
use super::complete::is_flat_boundary;
use super::packed::Configuration;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Values of a vertex potential on the boundary vertices, with the base at e.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BoundaryPotential {
    pub values: BTreeMap<Vertex, Elem>,
}

/// Labels on the boundary edges E4.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BoundaryConfiguration {
    pub values: BTreeMap<Edge, Elem>,
}

#[derive(Clone, Copy, Debug)]
enum Source {
    Boundary(usize),
    Rest(usize),
    Check,
}

/// Precomputed Ξ and its inverse for one region and boundary loop.
///
/// Slices are aligned as follows: potentials with
/// [`BoundaryLoop::boundary_vertices`], boundary labels with
/// [`LayerRegion::e4`], and the free tuple `u` holds the potential on
/// J minus the check vertex (sorted) followed by the label of the loop edge
/// entering the check vertex. When J is empty `u` is empty.
#[derive(Clone, Debug)]
pub struct XiMap {
    steps: Vec<(usize, i8)>,
    sources: Vec<Source>,
    check: Option<usize>,
    base_slot: usize,
    boundary: Vec<Vertex>,
    e4: Vec<Edge>,
    n_u: usize,
}

impl XiMap {
    pub fn new(lr: &LayerRegion, frame: &BoundaryLoop) -> Result<Self> {
        let region = lr.region();
        let slot: HashMap<usize, usize> = lr.e4().iter().enumerate().map(|(k, &i)| (i, k)).collect();
        if frame.steps().len() != lr.e4().len() {
            return Err(Error::Geometry("boundary loop does not run once over every boundary edge".into()));
        }
        let steps = frame
            .steps()
            .iter()
            .map(|&(e, s)| {
                slot.get(&e)
                    .map(|&k| (k, s))
                    .ok_or_else(|| Error::Geometry("loop edge is not a boundary edge".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let boundary = frame.boundary_vertices().to_vec();
        let check_v = frame.check_vertex();
        let rest: Vec<Vertex> = frame.j().iter().copied().filter(|&v| Some(v) != check_v).collect();
        let mut seen = vec![false; boundary.len()];
        let sources = frame
            .vertices()
            .iter()
            .map(|v| {
                if let Ok(k) = boundary.binary_search(v) {
                    if std::mem::replace(&mut seen[k], true) {
                        return Err(Error::Geometry(format!("loop visits {v} twice")));
                    }
                    Ok(Source::Boundary(k))
                } else if Some(*v) == check_v {
                    Ok(Source::Check)
                } else {
                    Ok(Source::Rest(rest.binary_search(v).unwrap()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let base_slot = boundary.binary_search(&frame.base()).unwrap();
        let e4 = lr.e4().iter().map(|&i| region.edges()[i]).collect();
        Ok(XiMap {
            steps,
            sources,
            check: frame.check_position(),
            base_slot,
            boundary,
            e4,
            n_u: frame.j().len(),
        })
    }

    pub fn boundary_vertices(&self) -> &[Vertex] {
        &self.boundary
    }

    pub fn base_slot(&self) -> usize {
        self.base_slot
    }

    /// Length of the free tuple u, equal to |J|.
    pub fn u_len(&self) -> usize {
        self.n_u
    }

    pub fn e4_len(&self) -> usize {
        self.e4.len()
    }

    /// Ξ(t, u) written into `out`. `t[base_slot]` must be e; not checked here.
    pub fn apply(&self, group: &Group, t: &[Elem], u: &[Elem], out: &mut [Elem]) {
        let n = self.steps.len();
        let z = |i: usize| match self.sources[i % n] {
            Source::Boundary(k) => t[k],
            Source::Rest(k) => u[k],
            Source::Check => IDENTITY,
        };
        let skip = |i: usize| self.check.is_some_and(|c| i == c || (i + 1) % n == c);
        for (i, &(slot, s)) in self.steps.iter().enumerate() {
            if !skip(i) {
                out[slot] = group.pow_sign(group.mul(group.inv(z(i)), z(i + 1)), s);
            }
        }
        if let Some(c) = self.check {
            let i1 = (c + n - 1) % n;
            let (slot1, s1) = self.steps[i1];
            let (slot2, s2) = self.steps[c];
            let a1 = u[self.n_u - 1];
            out[slot1] = a1;
            // holonomy of the loop from the vertex after the check vertex round to the one before
            let psi = (1..n - 1)
                .map(|k| self.steps[(c + k) % n])
                .fold(IDENTITY, |acc, (slot, s)| group.mul(acc, group.pow_sign(out[slot], s)));
            out[slot2] = group.pow_sign(group.mul(psi, group.pow_sign(a1, s1)), -s2);
        }
    }

    /// Inverse of [`XiMap::apply`] on labels with trivial loop holonomy.
    ///
    /// Each potential value is the holonomy from the base along the loop,
    /// going the way that avoids the check vertex.
    pub fn invert(&self, group: &Group, a: &[Elem], t: &mut [Elem], u: &mut [Elem]) {
        let n = self.steps.len();
        let mut z = vec![IDENTITY; n + 1];
        // the check vertex never sits at the base, so c >= 1
        let forward = self.check.map_or(n, |c| c - 1);
        for i in 0..forward {
            let (slot, s) = self.steps[i];
            z[i + 1] = group.mul(z[i], group.pow_sign(a[slot], s));
        }
        if let Some(c) = self.check {
            z[n] = IDENTITY;
            for i in (c + 1..n).rev() {
                let (slot, s) = self.steps[i];
                z[i] = group.mul(z[i + 1], group.pow_sign(a[slot], -s));
            }
            u[self.n_u - 1] = a[self.steps[(c + n - 1) % n].0];
        }
        for (i, src) in self.sources.iter().enumerate() {
            match *src {
                Source::Boundary(k) => t[k] = z[i],
                Source::Rest(k) => u[k] = z[i],
                Source::Check => {}
            }
        }
    }

    /// Holonomy of `a` once around the loop, starting at the base.
    pub fn loop_holonomy(&self, group: &Group, a: &[Elem]) -> Elem {
        self.steps
            .iter()
            .fold(IDENTITY, |acc, &(slot, s)| group.mul(acc, group.pow_sign(a[slot], s)))
    }

    /// Potential of `a` on the boundary vertices, following the loop forward from the base.
    pub fn potential(&self, group: &Group, a: &[Elem]) -> Vec<Elem> {
        let mut t = vec![IDENTITY; self.boundary.len()];
        let mut acc = IDENTITY;
        for (i, &(slot, s)) in self.steps.iter().enumerate() {
            if let Source::Boundary(k) = self.sources[i] {
                t[k] = acc;
            }
            acc = group.mul(acc, group.pow_sign(a[slot], s));
        }
        t
    }

    /// Ξ on map-valued inputs, validating keys and the base value.
    pub fn xi(&self, group: &Group, t: &BoundaryPotential, u: &[Elem]) -> Result<BoundaryConfiguration> {
        let ts = self.potential_slice(t)?;
        if ts[self.base_slot] != IDENTITY {
            return Err(Error::InvalidArgument("potential is not e at the base vertex".into()));
        }
        if u.len() != self.n_u {
            return Err(Error::InvalidArgument(format!("expected {} free labels, got {}", self.n_u, u.len())));
        }
        let mut out = vec![IDENTITY; self.e4.len()];
        self.apply(group, &ts, u, &mut out);
        Ok(BoundaryConfiguration { values: self.e4.iter().copied().zip(out).collect() })
    }

    /// Ξ⁻¹ on map-valued input; fails unless the loop holonomy is trivial.
    pub fn xi_inverse(
        &self,
        group: &Group,
        a: &BoundaryConfiguration,
    ) -> Result<(BoundaryPotential, Vec<Elem>)> {
        if a.values.len() != self.e4.len() || !self.e4.iter().all(|e| a.values.contains_key(e)) {
            return Err(Error::InvalidArgument("labels do not cover the boundary edges".into()));
        }
        let av: Vec<Elem> = self.e4.iter().map(|e| a.values[e]).collect();
        if self.loop_holonomy(group, &av) != IDENTITY {
            return Err(Error::NotAdmissible("boundary loop holonomy is not trivial".into()));
        }
        let mut t = vec![IDENTITY; self.boundary.len()];
        let mut u = vec![IDENTITY; self.n_u];
        self.invert(group, &av, &mut t, &mut u);
        Ok((self.potential_map(&t), u))
    }

    pub fn potential_map(&self, t: &[Elem]) -> BoundaryPotential {
        BoundaryPotential { values: self.boundary.iter().copied().zip(t.iter().copied()).collect() }
    }

    pub fn potential_slice(&self, t: &BoundaryPotential) -> Result<Vec<Elem>> {
        if t.values.len() != self.boundary.len() {
            return Err(Error::InvalidArgument("potential does not cover the boundary vertices".into()));
        }
        self.boundary
            .iter()
            .map(|v| {
                t.values
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::InvalidArgument(format!("no potential value at {v}")))
            })
            .collect()
    }
}

/// Exhaustive check of Ξ over all inputs (t, u).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct XiReport {
    pub inputs: u64,
    /// Distinct boundary labellings produced.
    pub image: u64,
    /// Boundary labellings with equal right and left holonomy.
    pub flat_boundary: u64,
    pub round_trip_failures: u64,
    pub potential_failures: u64,
    pub image_equals_flat: bool,
}

impl XiReport {
    pub fn holds(&self) -> bool {
        self.image == self.inputs
            && self.image_equals_flat
            && self.round_trip_failures == 0
            && self.potential_failures == 0
    }
}

pub fn verify_xi_bijection(lr: &LayerRegion, frame: &BoundaryLoop, group: &Group, budget: u64) -> Result<XiReport> {
    let xi = XiMap::new(lr, frame)?;
    let nb = xi.boundary_vertices().len();
    let base = xi.base_slot();
    let inputs = check_budget(group.order(), nb - 1 + xi.n_u, budget)?;
    check_budget(group.order(), xi.e4_len(), budget)?;
    let results = par_scan(group.order(), nb - 1 + xi.n_u, || (), |free, _| {
        let mut t = free[..nb - 1].to_vec();
        t.insert(base, IDENTITY);
        let u = &free[nb - 1..];
        let mut a = vec![IDENTITY; xi.e4_len()];
        xi.apply(group, &t, u, &mut a);
        let pot_ok = xi.potential(group, &a) == t;
        let (mut t2, mut u2) = (vec![IDENTITY; nb], vec![IDENTITY; u.len()]);
        xi.invert(group, &a, &mut t2, &mut u2);
        let trip_ok = t2 == t && u2 == u;
        Some((Configuration::from_labels(&a, group), trip_ok, pot_ok))
    });
    let round_trip_failures = results.iter().filter(|r| !r.1).count() as u64;
    let potential_failures = results.iter().filter(|r| !r.2).count() as u64;
    let mut image: Vec<Configuration> = results.into_iter().map(|r| r.0).collect();
    image.sort_unstable();
    image.dedup();
    let mut flat = par_scan(group.order(), xi.e4_len(), || (), |a, _| {
        matches!(is_flat_boundary(lr, group, a), Ok(true)).then(|| Configuration::from_labels(a, group))
    });
    flat.sort_unstable();
    Ok(XiReport {
        inputs,
        image: image.len() as u64,
        flat_boundary: flat.len() as u64,
        round_trip_failures,
        potential_failures,
        image_equals_flat: image == flat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::brute::par_scan;
    use crate::configs::complete::complete_from_boundary;
    use crate::configs::fast::boundary_potential_of;
    use crate::lattice::DeskCone;

    fn all_tuples(order: usize, n: usize) -> Vec<Vec<Elem>> {
        par_scan(order, n, || (), |x, _| Some(x.to_vec()))
    }

    fn check_bijection(lr: &LayerRegion, frame: &BoundaryLoop, group: &Group) {
        let r = verify_xi_bijection(lr, frame, group, crate::configs::DEFAULT_BUDGET).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.image, r.flat_boundary);
    }

    #[test]
    fn identity_maps_to_identity() {
        let ct = DeskCone::LShape.small();
        let z3 = Group::cyclic(3).unwrap();
        let xi = XiMap::new(&ct.layers, &ct.frame).unwrap();
        let t = xi.potential_map(&vec![0; xi.boundary_vertices().len()]);
        let a = xi.xi(&z3, &t, &[0]).unwrap();
        assert!(a.values.values().all(|&x| x == 0));
        assert_eq!(xi.xi_inverse(&z3, &a).unwrap(), (t, vec![0]));
    }

    #[test]
    fn base_must_be_identity() {
        let ct = DeskCone::LShape.small();
        let z2 = Group::cyclic(2).unwrap();
        let xi = XiMap::new(&ct.layers, &ct.frame).unwrap();
        let mut t = xi.potential_map(&vec![0; xi.boundary_vertices().len()]);
        t.values.insert(ct.v0, 1);
        assert!(matches!(xi.xi(&z2, &t, &[0]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn bijection_on_desk_cones() {
        for g in [Group::cyclic(2).unwrap(), Group::cyclic(3).unwrap()] {
            for cone in DeskCone::ALL {
                let ct = cone.small();
                check_bijection(&ct.layers, &ct.frame, &g);
            }
        }
        let d3 = Group::dihedral(3).unwrap();
        let lr = LayerRegion::new(0, &[(0, 2), (0, 1)]).unwrap();
        check_bijection(&lr, &BoundaryLoop::new(&lr, lr.origin()).unwrap(), &d3);
    }

    #[test]
    fn bijection_for_every_check_vertex() {
        let z2 = Group::cyclic(2).unwrap();
        let lr = LayerRegion::new(0, &[(0, 3), (0, 2), (0, 1)]).unwrap();
        let frame = BoundaryLoop::new(&lr, lr.origin()).unwrap();
        assert_eq!(frame.j(), &[Vertex::new(1, 2), Vertex::new(2, 1)]);
        for &v in frame.j() {
            check_bijection(&lr, &frame.clone().with_check_vertex(v).unwrap(), &z2);
        }
    }

    #[test]
    fn completed_potential_matches_t() {
        let z3 = Group::cyclic(3).unwrap();
        let ct = DeskCone::LShape.small();
        let xi = XiMap::new(&ct.layers, &ct.frame).unwrap();
        let nb = xi.boundary_vertices().len();
        for (n, free) in all_tuples(3, nb).into_iter().enumerate().step_by(97) {
            let mut t = free[..nb - 1].to_vec();
            t.insert(xi.base_slot(), IDENTITY);
            let mut a = vec![0; xi.e4_len()];
            xi.apply(&z3, &t, &free[nb - 1..], &mut a);
            let g = vec![(n % 3) as Elem; ct.layers.e1().len()];
            let c = complete_from_boundary(&ct.layers, &z3, &a, &g).unwrap();
            let pot = boundary_potential_of(ct.region(), &z3, &c.labels(), ct.v0, xi.boundary_vertices()).unwrap();
            assert_eq!(pot, t);
        }
    }
}
