//! Completion of a cone truncation to the whole rectangle across the
//! transversal chain, and the gluing criterion built on it.

use super::brute::{check_budget, enumerate_admissible_bruteforce, par_scan};
use super::complete::{solve_step, Side, Solve};
use super::fast::boundary_potential_of;
use super::packed::Configuration;
use crate::error::{Error, Result};
use crate::group::{Elem, Group, IDENTITY};
use crate::lattice::{ConeTruncation, Region};
use crate::paths::plaquettes_flat;
use rayon::prelude::*;
use serde::Serialize;

/// Index maps from the pieces 𝔼, OE, BE into the rectangle, plus the
/// solves along the transversal chain.
#[derive(Clone, Debug)]
pub struct InteriorPlan {
    len: usize,
    inner: Vec<usize>,
    outer: Vec<usize>,
    chain: Vec<usize>,
    steps: Vec<Solve>,
    outer_region: Region,
}

impl InteriorPlan {
    pub fn new(ct: &ConeTruncation) -> Result<Self> {
        let rect = &ct.rect_region;
        let idx = |e| rect.index_of(e).ok_or_else(|| Error::Geometry(format!("{e} not in rectangle")));
        let inner = ct.region().edges().iter().map(idx).collect::<Result<Vec<_>>>()?;
        let outer = ct.oe.iter().map(idx).collect::<Result<Vec<_>>>()?;
        let chain = ct.shared.iter().map(idx).collect::<Result<Vec<_>>>()?;
        let mut known = vec![false; rect.len()];
        for &i in inner.iter().chain(&outer).chain(&chain[..1]) {
            known[i] = true;
        }
        let sides = [Side::Bottom, Side::Right, Side::Left, Side::Top];
        let mut steps = Vec::with_capacity(ct.m());
        for (i, &sq) in ct.transversal.iter().enumerate() {
            let k = sq.edges().iter().position(|e| *e == ct.shared[i + 1]).unwrap();
            steps.push(solve_step(rect, sq, sides[k], &mut known)?);
        }
        if known.iter().any(|k| !k) {
            return Err(Error::Geometry("rectangle edge outside 𝔼, OE and BE".into()));
        }
        Ok(InteriorPlan { len: rect.len(), inner, outer, chain, steps, outer_region: ct.oe_region() })
    }

    pub fn rect_len(&self) -> usize {
        self.len
    }

    /// Rectangle indices of e_0, ..., e_M.
    pub fn chain(&self) -> &[usize] {
        &self.chain
    }

    pub fn outer_region(&self) -> &Region {
        &self.outer_region
    }

    /// Writes k on 𝔼 and m on OE into `labels`.
    pub fn place(&self, k: &[Elem], m: &[Elem], labels: &mut [Elem]) {
        for (&i, &x) in self.inner.iter().zip(k) {
            labels[i] = x;
        }
        for (&i, &x) in self.outer.iter().zip(m) {
            labels[i] = x;
        }
    }

    /// Sets e_0 = g and solves e_1, ..., e_M in chain order.
    pub fn fill_chain(&self, group: &Group, g: Elem, labels: &mut [Elem]) {
        labels[self.chain[0]] = g;
        for s in &self.steps {
            s.apply(group, labels);
        }
    }
}

/// The unique admissible labelling of the rectangle equal to `k` on 𝔼,
/// `m` on OE and `g` on e_0.
pub fn complete_interior(
    ct: &ConeTruncation,
    group: &Group,
    m: &[Elem],
    k: &[Elem],
    g: Elem,
) -> Result<Configuration> {
    let plan = InteriorPlan::new(ct)?;
    if k.len() != ct.region().len() || m.len() != ct.oe.len() {
        return Err(Error::InvalidArgument("label counts do not match 𝔼 and OE".into()));
    }
    if !plaquettes_flat(ct.region(), group, k) {
        return Err(Error::NotAdmissible("k fails on a square of the cone region".into()));
    }
    if !plaquettes_flat(plan.outer_region(), group, m) {
        return Err(Error::NotAdmissible("m fails on a square inside OE".into()));
    }
    let mut labels = vec![IDENTITY; plan.rect_len()];
    plan.place(k, m, &mut labels);
    plan.fill_chain(group, g, &mut labels);
    if !plaquettes_flat(&ct.rect_region, group, &labels) {
        return Err(Error::Geometry("filled rectangle is not admissible".into()));
    }
    Ok(Configuration::from_labels(&labels, group))
}

/// Counts behind the interior-completion check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InteriorReport {
    /// |C| on the rectangle, by streaming.
    pub rectangle: u64,
    /// |C| on 𝔼.
    pub inner: u64,
    /// |C| on OE.
    pub outer: u64,
    /// Rectangle configurations not reproduced by completing their own (k, m, e_0) data.
    pub mismatches: u64,
}

impl InteriorReport {
    /// Completion reproduces every admissible rectangle configuration and the
    /// counts match |C_𝔼|·|C_OE|·|G|, so (k, m, g) ↦ o is a bijection.
    pub fn holds(&self, order: usize) -> bool {
        self.mismatches == 0 && self.rectangle as u128 == self.inner as u128 * self.outer as u128 * order as u128
    }
}

/// Streams every admissible rectangle configuration o, recompletes it from
/// (o|𝔼, o|OE, o|e_0) and compares.
pub fn verify_interior_uniqueness(ct: &ConeTruncation, group: &Group, budget: u64) -> Result<InteriorReport> {
    let plan = InteriorPlan::new(ct)?;
    let rect_layers = super::fast::rectangle_layers(&ct.rect)?;
    let fe = super::fast::FastEnumerator::new(&rect_layers, group)?;
    if rect_layers.region().edges() != ct.rect_region.edges() {
        return Err(Error::Geometry("rectangle edge orders differ".into()));
    }
    let k_idx = plan.inner.clone();
    let m_idx = plan.outer.clone();
    let bad = fe.scan(|_, o| {
        let mut labels = vec![IDENTITY; o.len()];
        let k: Vec<Elem> = k_idx.iter().map(|&i| o[i]).collect();
        let m: Vec<Elem> = m_idx.iter().map(|&i| o[i]).collect();
        plan.place(&k, &m, &mut labels);
        plan.fill_chain(group, o[plan.chain[0]], &mut labels);
        (labels != o).then_some(())
    })?;
    let rectangle = fe.count()?;
    let inner = super::fast::FastEnumerator::for_cone(ct, group)?.count()?;
    let outer = super::brute::count_admissible_bruteforce(plan.outer_region(), group, budget)?;
    Ok(InteriorReport { rectangle, inner, outer, mismatches: bad.len() as u64 })
}

/// The three conditions of the gluing criterion for one pair (k, h).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GluingReport {
    /// Every (m, g_0) admits exactly one shared chain labelling.
    pub every: bool,
    /// Some (m, g_0) admits exactly one shared chain labelling.
    pub some: bool,
    /// Both admissible with equal boundary potentials.
    pub potentials: bool,
}

impl GluingReport {
    pub fn consistent(&self) -> bool {
        self.every == self.some && self.some == self.potentials
    }
}

/// Evaluates the three conditions by exhaustive search over C_OE × G × G^M.
pub fn gluing_equivalence(
    ct: &ConeTruncation,
    group: &Group,
    k: &[Elem],
    h: &[Elem],
    budget: u64,
) -> Result<GluingReport> {
    let plan = InteriorPlan::new(ct)?;
    let cm = enumerate_admissible_bruteforce(plan.outer_region(), group, budget)?;
    let mlen = ct.m();
    let per = check_budget(group.order(), mlen + 1, budget)?;
    if (cm.len() as u128) * (per as u128) > budget as u128 {
        return Err(Error::Budget { needed: cm.len() as u128 * per as u128, budget });
    }
    let rect = &ct.rect_region;
    let outer_edges = rect.boundary_edges();
    let counts: Vec<u64> = cm
        .par_iter()
        .flat_map_iter(|m| {
            let m = m.labels();
            group.elements().map(move |g0| (m.clone(), g0))
        })
        .map(|(m, g0)| {
            let mut lk = vec![IDENTITY; plan.rect_len()];
            let mut lh = vec![IDENTITY; plan.rect_len()];
            plan.place(k, &m, &mut lk);
            plan.place(h, &m, &mut lh);
            par_scan(group.order(), mlen, || (lk.clone(), lh.clone()), |gs, (lk, lh)| {
                for (j, &i) in plan.chain().iter().enumerate() {
                    let x = if j == 0 { g0 } else { gs[j - 1] };
                    lk[i] = x;
                    lh[i] = x;
                }
                let ok = plaquettes_flat(rect, group, lk)
                    && plaquettes_flat(rect, group, lh)
                    && outer_edges.iter().all(|&i| lk[i] == lh[i]);
                ok.then_some(())
            })
            .len() as u64
        })
        .collect();
    let potentials = plaquettes_flat(ct.region(), group, k)
        && plaquettes_flat(ct.region(), group, h)
        && {
            let bv = ct.boundary_vertices();
            boundary_potential_of(ct.region(), group, k, ct.v0, bv)?
                == boundary_potential_of(ct.region(), group, h, ct.v0, bv)?
        };
    Ok(GluingReport {
        every: counts.iter().all(|&c| c == 1),
        some: counts.iter().any(|&c| c == 1),
        potentials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::brute::DEFAULT_BUDGET;
    use crate::configs::fast::FastEnumerator;
    use crate::lattice::{DeskCone, Rect};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_completes_to_identity() {
        let ct = DeskCone::Quarter.small();
        let z3 = Group::cyclic(3).unwrap();
        let o = complete_interior(&ct, &z3, &vec![0; ct.oe.len()], &vec![0; ct.region().len()], 0).unwrap();
        assert_eq!(o.len(), 22);
        assert!(o.labels().iter().all(|&x| x == 0));
    }

    #[test]
    fn inadmissible_inputs_are_rejected() {
        let ct = DeskCone::Quarter.small();
        let z2 = Group::cyclic(2).unwrap();
        let mut k = vec![0; ct.region().len()];
        k[0] = 1;
        let m = vec![0; ct.oe.len()];
        assert!(matches!(complete_interior(&ct, &z2, &m, &k, 0), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn completion_is_unique() {
        for g in [Group::cyclic(2).unwrap(), Group::cyclic(3).unwrap()] {
            for cone in DeskCone::ALL {
                let r = verify_interior_uniqueness(&cone.small(), &g, DEFAULT_BUDGET).unwrap();
                assert!(r.holds(g.order()), "{cone:?} over {g}: {r:?}");
            }
        }
        let z2 = Group::cyclic(2).unwrap();
        let ct = DeskCone::LShape.truncation(Rect::square(2).unwrap()).unwrap();
        assert!(verify_interior_uniqueness(&ct, &z2, DEFAULT_BUDGET).unwrap().holds(2));
    }

    #[test]
    fn equal_potentials_give_equal_chain_labels() {
        let z3 = Group::cyclic(3).unwrap();
        let ct = DeskCone::LShape.small();
        let fe = FastEnumerator::for_cone(&ct, &z3).unwrap();
        let plan = InteriorPlan::new(&ct).unwrap();
        let ms = enumerate_admissible_bruteforce(plan.outer_region(), &z3, DEFAULT_BUDGET).unwrap();
        let nb = ct.boundary_vertices().len();
        for (n, free) in par_scan(3, nb - 1, || (), |x, _| Some(x.to_vec())).into_iter().enumerate().step_by(41) {
            let mut t = free;
            t.insert(fe.xi().base_slot(), IDENTITY);
            let fiber = fe.fiber(&t).unwrap();
            assert_eq!(fiber.len(), 3);
            let m = ms[n % ms.len()].labels();
            let g = (n % 3) as Elem;
            let chains: Vec<Vec<Elem>> = fiber
                .iter()
                .map(|k| complete_interior(&ct, &z3, &m, &k.labels(), g).unwrap().restrict(plan.chain()))
                .collect();
            assert!(chains.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn gluing_conditions_agree_on_quarter_cone() {
        let z2 = Group::cyclic(2).unwrap();
        let ct = DeskCone::Quarter.small();
        let ks = FastEnumerator::for_cone(&ct, &z2).unwrap().enumerate().unwrap();
        let (mut yes, mut no) = (0, 0);
        for k in &ks {
            for h in &ks {
                let r = gluing_equivalence(&ct, &z2, &k.labels(), &h.labels(), DEFAULT_BUDGET).unwrap();
                assert!(r.consistent(), "{k:?} {h:?}: {r:?}");
                if r.potentials { yes += 1 } else { no += 1 }
            }
        }
        assert!(yes > 0 && no > 0);
        // a non-admissible k fails all three
        let mut bad = ks[0].labels();
        bad[0] ^= 1;
        let r = gluing_equivalence(&ct, &z2, &bad, &ks[0].labels(), DEFAULT_BUDGET).unwrap();
        assert_eq!(r, GluingReport { every: false, some: false, potentials: false });
    }

    #[test]
    fn gluing_conditions_agree_on_l_cone_samples() {
        let z2 = Group::cyclic(2).unwrap();
        let ct = DeskCone::LShape.small();
        let fe = FastEnumerator::for_cone(&ct, &z2).unwrap();
        let ks = fe.enumerate().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut same = 0;
        for i in 0..300 {
            let k = ks.choose(&mut rng).unwrap();
            let h = if i % 2 == 0 {
                let t = boundary_potential_of(ct.region(), &z2, &k.labels(), ct.v0, ct.boundary_vertices()).unwrap();
                fe.fiber(&t).unwrap().choose(&mut rng).unwrap().clone()
            } else {
                ks.choose(&mut rng).unwrap().clone()
            };
            let r = gluing_equivalence(&ct, &z2, &k.labels(), &h.labels(), DEFAULT_BUDGET).unwrap();
            assert!(r.consistent());
            same += r.potentials as usize;
        }
        assert!(same >= 150);
    }
}
