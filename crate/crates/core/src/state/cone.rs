//! The ground state restricted to the edges of a cone truncation.

use super::{ratio_of, Ratio};
use crate::configs::{
    boundary_potential_of, count_admissible_bruteforce, rectangle_layers,
    Configuration, FastEnumerator,
};
use crate::error::{Error, Result};
use crate::group::{Elem, Group};
use crate::lattice::ConeTruncation;
use crate::paths::plaquettes_flat;
use num_traits::Zero;
use rayon::prelude::*;
use std::collections::HashMap;

/// φ(|h⟩⟨k|) = c · χ(h, k admissible) · χ(equal boundary potentials) on 𝔼.
#[derive(Clone, Debug)]
pub struct ConeState<'a> {
    ct: &'a ConeTruncation,
    group: &'a Group,
    fe: FastEnumerator<'a>,
}

impl<'a> ConeState<'a> {
    pub fn new(ct: &'a ConeTruncation, group: &'a Group) -> Result<Self> {
        Ok(ConeState { ct, group, fe: FastEnumerator::for_cone(ct, group)? })
    }

    pub fn truncation(&self) -> &ConeTruncation {
        self.ct
    }

    pub fn enumerator(&self) -> &FastEnumerator<'a> {
        &self.fe
    }

    /// Number of boundary potentials, |G|^{|∂V|-1}.
    pub fn rank(&self) -> u128 {
        self.group.power(self.ct.boundary_vertices().len() - 1)
    }

    /// Configurations per potential, |G|^{|J|+|E1|}.
    pub fn fiber(&self) -> u128 {
        self.fe.fiber_size()
    }

    /// The constant fixed by Σ_h φ(|h⟩⟨h|) = 1.
    pub fn constant(&self) -> Ratio {
        ratio_of(1, self.rank() * self.fiber())
    }

    /// |C_OE| · |G| / |C| on the rectangle.
    pub fn constant_from_rectangle(&self, budget: u64) -> Result<Ratio> {
        let outer = count_admissible_bruteforce(&self.ct.oe_region(), self.group, budget)?;
        let layers = rectangle_layers(&self.ct.rect)?;
        let rect = FastEnumerator::new(&layers, self.group)?.size();
        Ok(ratio_of(outer as u128 * self.group.order() as u128, rect))
    }

    /// Boundary potential of an admissible labelling of 𝔼, `None` otherwise.
    pub fn potential(&self, labels: &[Elem]) -> Option<Vec<Elem>> {
        let region = self.ct.region();
        if labels.len() != region.len() || !plaquettes_flat(region, self.group, labels) {
            return None;
        }
        boundary_potential_of(region, self.group, labels, self.ct.v0, self.ct.boundary_vertices()).ok()
    }

    pub fn element(&self, h: &[Elem], k: &[Elem]) -> Result<Ratio> {
        let n = self.ct.region().len();
        if h.len() != n || k.len() != n {
            return Err(Error::InvalidArgument("labellings must cover the cone region".into()));
        }
        Ok(match (self.potential(h), self.potential(k)) {
            (Some(a), Some(b)) if a == b => self.constant(),
            _ => Ratio::zero(),
        })
    }
}

/// Comparison of the cone formula with the partial trace of the rectangle state.
#[derive(Clone, Debug)]
pub struct MarginalReport {
    pub rectangle_configurations: u64,
    /// Pairs (h, k) with a nonzero partial trace.
    pub pairs_seen: u64,
    /// Pairs where the cone formula is nonzero.
    pub formula_nonzero: u64,
    /// Seen pairs whose value differs from the formula.
    pub mismatches: u64,
    /// Formula-nonzero pairs never seen.
    pub missing: u64,
    /// Partial trace at h = k = e.
    pub diagonal: Ratio,
    pub constant: Ratio,
}

impl MarginalReport {
    pub fn holds(&self) -> bool {
        self.mismatches == 0 && self.missing == 0 && self.diagonal == self.constant
    }
}

/// Sums φ_rect(|h,x⟩⟨k,x|) over all labellings x of the rectangle edges
/// outside 𝔼, by enumerating every admissible rectangle configuration, and compares with
/// the cone formula for every pair.
pub fn marginalization_check(ct: &ConeTruncation, group: &Group, budget: u64) -> Result<MarginalReport> {
    let state = ConeState::new(ct, group)?;
    let rect = &ct.rect_region;
    let rect_layers = rectangle_layers(&ct.rect)?;
    let rect_fe = FastEnumerator::new(&rect_layers, group)?;
    if rect_fe.size() > budget as u128 {
        return Err(Error::Budget { needed: rect_fe.size(), budget });
    }
    let all = rect_fe.enumerate()?;
    let inner: Vec<usize> = ct.region().edges().iter().map(|e| rect.index_of(e).unwrap()).collect();
    let rest: Vec<usize> = (0..rect.len()).filter(|i| !inner.contains(i)).collect();
    let on_boundary: Vec<usize> = (0..inner.len()).filter(|&j| rect.is_boundary_edge(inner[j])).collect();

    let ks = state.enumerator().enumerate()?;
    let nk = ks.len();
    if nk > 1 << 13 {
        return Err(Error::Budget { needed: (nk * nk) as u128, budget: 1 << 26 });
    }
    let index: HashMap<Configuration, u32> = ks.iter().cloned().zip(0..).collect();
    let pots: Vec<Vec<Elem>> = ks.par_iter().map(|k| state.potential(&k.labels()).unwrap()).collect();
    let labels: Vec<Vec<Elem>> = ks.iter().map(Configuration::labels).collect();

    let mut rows: Vec<(Configuration, u32)> = all
        .par_iter()
        .map(|c| {
            let h = Configuration::from_labels(&c.restrict(&inner), group);
            (Configuration::from_labels(&c.restrict(&rest), group), index[&h])
        })
        .collect();
    rows.par_sort_unstable();
    let mut counts = vec![0u32; nk * nk];
    for class in rows.chunk_by(|a, b| a.0 == b.0) {
        for (_, a) in class {
            for (_, b) in class {
                let (a, b) = (*a as usize, *b as usize);
                if on_boundary.iter().all(|&j| labels[a][j] == labels[b][j]) {
                    counts[a * nk + b] += 1;
                }
            }
        }
    }
    let total = all.len() as u128;
    let constant = state.constant();
    let (mut seen, mut nonzero, mut mismatches, mut missing) = (0, 0, 0, 0);
    for a in 0..nk {
        for b in 0..nk {
            let c = counts[a * nk + b];
            let same = pots[a] == pots[b];
            nonzero += same as u64;
            if c > 0 {
                seen += 1;
                let formula = if same { constant.clone() } else { Ratio::zero() };
                mismatches += (ratio_of(c as u128, total) != formula) as u64;
            } else if same {
                missing += 1;
            }
        }
    }
    let id = index[&Configuration::identity(inner.len(), group.bits())] as usize;
    Ok(MarginalReport {
        rectangle_configurations: all.len() as u64,
        pairs_seen: seen,
        formula_nonzero: nonzero,
        mismatches,
        missing,
        diagonal: ratio_of(counts[id * nk + id] as u128, total),
        constant,
    })
}
