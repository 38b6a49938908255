//! Unique completion of a layered region from its boundary labels and the
//! free interior edges.

use super::packed::Configuration;
use crate::error::{Error, Result};
use crate::group::{Elem, Group, IDENTITY};
use crate::lattice::{LayerRegion, Plaquette, Region};
use crate::paths::{plaquettes_flat, RegionLabels};
use super::brute::{check_budget, enumerate_admissible_bruteforce, par_fold};
use serde::Serialize;
use std::collections::HashMap;

/// Position of an edge inside a plaquette's `[bottom, right, left, top]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Bottom = 0,
    Right = 1,
    Left = 2,
    Top = 3,
}

/// One plaquette solved for a single unknown edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Solve {
    pub plaquette: Plaquette,
    /// Region edge indices as `[bottom, right, left, top]`.
    pub edges: [usize; 4],
    pub unknown: Side,
}

impl Solve {
    /// Fills the unknown edge of `labels` so that bottom·right = left·top.
    #[inline]
    pub fn apply(&self, group: &Group, labels: &mut [Elem]) {
        let [b, r, l, t] = self.edges.map(|i| labels[i]);
        let (m, i) = (|x, y| group.mul(x, y), |x| group.inv(x));
        let (slot, val) = match self.unknown {
            Side::Right => (self.edges[1], m(m(i(b), l), t)),
            Side::Left => (self.edges[2], m(m(b, r), i(t))),
            Side::Top => (self.edges[3], m(m(i(l), b), r)),
            Side::Bottom => (self.edges[0], m(m(l, t), i(r))),
        };
        labels[slot] = val;
    }
}

/// Builds a solve on plaquette `p` whose only unlabelled edge is `unknown`,
/// marking it known. Errors if the other three edges are not all known.
pub(crate) fn solve_step(
    region: &Region,
    p: Plaquette,
    unknown: Side,
    known: &mut [bool],
) -> Result<Solve> {
    let mut edges = [0; 4];
    for (slot, e) in edges.iter_mut().zip(p.edges()) {
        *slot = region
            .index_of(&e)
            .ok_or_else(|| Error::Geometry(format!("{e} of {p} not in region")))?;
    }
    for (k, &e) in edges.iter().enumerate() {
        if (k == unknown as usize) == known[e] {
            return Err(Error::Geometry(format!("{p} is not a single-unknown square")));
        }
    }
    known[edges[unknown as usize]] = true;
    Ok(Solve { plaquette: p, edges, unknown })
}

/// The fill order on a layered region: known edges are E1 and E4, the
/// solves determine E3 and E2, and the final square is only checked.
#[derive(Clone, Debug)]
pub struct CompletionPlan {
    steps: Vec<Solve>,
    check: [usize; 4],
}

impl CompletionPlan {
    pub fn new(lr: &LayerRegion) -> Result<Self> {
        let region = lr.region();
        let mut known = vec![false; region.len()];
        for &i in lr.e1().iter().chain(lr.e4()) {
            known[i] = true;
        }
        let mut steps = Vec::new();
        let layers = lr.layers();
        for (m, layer) in layers.iter().enumerate() {
            let y = layer.y;
            if let Some(ov) = lr.overlaps().get(m) {
                for x in layer.x_start..=ov.w - 2 {
                    steps.push(solve_step(region, Plaquette::new(x, y), Side::Right, &mut known)?);
                }
                for x in (ov.w..=layer.x_end()).rev() {
                    steps.push(solve_step(region, Plaquette::new(x, y), Side::Left, &mut known)?);
                }
                steps.push(solve_step(region, Plaquette::new(ov.w - 1, y), Side::Top, &mut known)?);
            } else {
                for x in layer.x_start..layer.x_end() {
                    steps.push(solve_step(region, Plaquette::new(x, y), Side::Right, &mut known)?);
                }
            }
        }
        if known.iter().any(|k| !k) {
            return Err(Error::Geometry("fill order leaves an edge undetermined".into()));
        }
        let last = layers.last().unwrap();
        let p = Plaquette::new(last.x_end(), last.y);
        let check = p.edges().map(|e| region.index_of(&e).unwrap());
        Ok(CompletionPlan { steps, check })
    }

    pub fn steps(&self) -> &[Solve] {
        &self.steps
    }

    /// Runs every solve on `labels` (E1 and E4 already set) and reports
    /// whether the final square closes.
    #[inline]
    pub fn run(&self, group: &Group, labels: &mut [Elem]) -> bool {
        for s in &self.steps {
            s.apply(group, labels);
        }
        let [b, r, l, t] = self.check.map(|i| labels[i]);
        group.mul(b, r) == group.mul(l, t)
    }
}

/// Holonomies of `a` (labels on E4, in `lr.e4()` order) along the right and
/// left boundary paths from the bottom-left to the top-right corner.
pub fn boundary_holonomies(lr: &LayerRegion, group: &Group, a: &[Elem]) -> Result<(Elem, Elem)> {
    let labels = scatter(lr.region().len(), lr.e4(), a)?;
    let view = RegionLabels { region: lr.region(), labels: &labels };
    Ok((lr.p_right().holonomy(group, &view)?, lr.p_left().holonomy(group, &view)?))
}

/// Whether `a` lies in the set of boundary labels with equal right and left holonomy.
pub fn is_flat_boundary(lr: &LayerRegion, group: &Group, a: &[Elem]) -> Result<bool> {
    let (r, l) = boundary_holonomies(lr, group, a)?;
    Ok(r == l)
}

pub(crate) fn scatter(len: usize, idx: &[usize], vals: &[Elem]) -> Result<Vec<Elem>> {
    if idx.len() != vals.len() {
        return Err(Error::InvalidArgument(format!(
            "{} values for {} edges",
            vals.len(),
            idx.len()
        )));
    }
    let mut labels = vec![IDENTITY; len];
    for (&i, &v) in idx.iter().zip(vals) {
        labels[i] = v;
    }
    Ok(labels)
}

/// The unique admissible configuration with labels `a` on E4 and `g` on E1.
///
/// Fails with [`Error::NoCompletion`] when the right and left boundary
/// holonomies of `a` differ, in which case no admissible extension exists.
pub fn complete_from_boundary(
    lr: &LayerRegion,
    group: &Group,
    a: &[Elem],
    g: &[Elem],
) -> Result<Configuration> {
    complete_with_plan(lr, &CompletionPlan::new(lr)?, group, a, g)
}

pub fn complete_with_plan(
    lr: &LayerRegion,
    plan: &CompletionPlan,
    group: &Group,
    a: &[Elem],
    g: &[Elem],
) -> Result<Configuration> {
    let (hr, hl) = boundary_holonomies(lr, group, a)?;
    if hr != hl {
        return Err(Error::NoCompletion(format!(
            "right boundary holonomy {hr} differs from left boundary holonomy {hl}"
        )));
    }
    let mut labels = scatter(lr.region().len(), lr.e4(), a)?;
    if g.len() != lr.e1().len() {
        return Err(Error::InvalidArgument(format!(
            "{} interior values for {} edges",
            g.len(),
            lr.e1().len()
        )));
    }
    for (&i, &v) in lr.e1().iter().zip(g) {
        labels[i] = v;
    }
    if !plan.run(group, &mut labels) {
        return Err(Error::Geometry("boundary holonomies agree but the last square does not close".into()));
    }
    Ok(Configuration::from_labels(&labels, group))
}

/// Outcome of checking every (E4, E1) datum against the exhaustive list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TrichotomyReport {
    pub boundary_data: u64,
    /// Boundary data with equal right and left holonomy.
    pub flat: u64,
    pub admissible: u64,
    /// Data where the completion routine and the exhaustive list disagree.
    pub violations: u64,
}

impl TrichotomyReport {
    pub fn holds(&self, order: usize, e1: usize) -> bool {
        let per = (order as u64).pow(e1 as u32);
        self.violations == 0 && self.admissible == self.flat * per
    }
}

/// Every boundary datum has no admissible extension at all, or exactly one
/// for each choice of E1 labels, and [`complete_with_plan`] finds it.
pub fn verify_trichotomy(lr: &LayerRegion, group: &Group, budget: u64) -> Result<TrichotomyReport> {
    let region = lr.region();
    let all = enumerate_admissible_bruteforce(region, group, budget)?;
    let boundary_data = check_budget(group.order(), lr.e4().len(), budget)?;
    let n1 = lr.e1().len();
    check_budget(group.order(), lr.e4().len() + n1, budget)?;
    let mut oracle: HashMap<(Vec<Elem>, Vec<Elem>), u64> = HashMap::new();
    for c in &all {
        *oracle.entry((c.restrict(lr.e4()), c.restrict(lr.e1()))).or_default() += 1;
    }
    let plan = CompletionPlan::new(lr)?;
    let (flat, violations) = par_fold(
        group.order(),
        lr.e4().len(),
        || (),
        || (0u64, 0u64),
        |acc, a, _| {
            let Ok(flat) = is_flat_boundary(lr, group, a) else {
                acc.1 += 1;
                return;
            };
            acc.0 += flat as u64;
            let mut g = vec![IDENTITY; n1];
            loop {
                let seen = oracle.get(&(a.to_vec(), g.clone())).copied().unwrap_or(0);
                let ok = match complete_with_plan(lr, &plan, group, a, &g) {
                    Ok(c) => {
                        flat && seen == 1
                            && plaquettes_flat(region, group, &c.labels())
                            && c.restrict(lr.e4()) == a
                            && c.restrict(lr.e1()) == g
                    }
                    Err(Error::NoCompletion(_)) => !flat && seen == 0,
                    Err(_) => false,
                };
                acc.1 += !ok as u64;
                if !next_tuple(&mut g, group.order()) {
                    break;
                }
            }
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    );
    Ok(TrichotomyReport { boundary_data, flat, admissible: all.len() as u64, violations })
}

/// Odometer step; false once every tuple has been visited.
fn next_tuple(x: &mut [Elem], order: usize) -> bool {
    for d in x.iter_mut().rev() {
        if (*d as usize) + 1 < order {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::brute::DEFAULT_BUDGET;
    use crate::lattice::DeskCone;

    fn l_shape() -> LayerRegion {
        LayerRegion::new(0, &[(0, 3), (0, 2)]).unwrap()
    }

    #[test]
    fn identity_completes_to_identity() {
        let lr = l_shape();
        let z3 = Group::cyclic(3).unwrap();
        let c = complete_from_boundary(&lr, &z3, &vec![0; lr.e4().len()], &vec![0; lr.e1().len()]).unwrap();
        assert!(c.labels().iter().all(|&x| x == 0));
    }

    #[test]
    fn plans_cover_staggered_regions() {
        for rows in [
            vec![(0, 1)],
            vec![(0, 4), (2, 3), (-1, 4)],
            vec![(0, 2), (1, 1), (1, 3), (3, 1)],
        ] {
            let lr = LayerRegion::new(0, &rows).unwrap();
            let plan = CompletionPlan::new(&lr).unwrap();
            assert_eq!(plan.steps().len(), lr.e2().len() + lr.e3().len());
        }
    }

    fn trichotomy(lr: &LayerRegion, group: &Group) {
        let r = verify_trichotomy(lr, group, DEFAULT_BUDGET).unwrap();
        assert!(r.holds(group.order(), lr.e1().len()), "{r:?}");
        assert!(r.flat > 0 && r.flat < r.boundary_data || group.order() == 1);
    }

    #[test]
    fn trichotomy_l_shape_z2_z3() {
        trichotomy(&l_shape(), &Group::cyclic(2).unwrap());
        trichotomy(&l_shape(), &Group::cyclic(3).unwrap());
    }

    #[test]
    fn trichotomy_desk_cones() {
        for cone in DeskCone::ALL {
            let ct = cone.small();
            trichotomy(&ct.layers, &Group::cyclic(2).unwrap());
        }
        trichotomy(&DeskCone::Quarter.small().layers, &Group::cyclic(3).unwrap());
    }

    #[test]
    fn trichotomy_staggered_d3() {
        trichotomy(&LayerRegion::new(0, &[(0, 1), (0, 1)]).unwrap(), &Group::dihedral(3).unwrap());
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        let lr = l_shape();
        let z2 = Group::cyclic(2).unwrap();
        assert!(matches!(
            complete_from_boundary(&lr, &z2, &[0], &[0]),
            Err(Error::InvalidArgument(_))
        ));
    }
}
