//! The vectors ψ_t, the projection Q onto their span, and the checks built on it.

use super::operator::LocalOperator;
use super::{ratio_of, Ratio};
use crate::configs::{Configuration, FastEnumerator};
use crate::error::{Error, Result};
use crate::group::{Elem, Group};
use crate::lattice::ConeTruncation;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

/// Finite linear combination of basis labellings.
pub type SparseVector = BTreeMap<Configuration, Ratio>;

/// (1/√weight) · Σ_{k ∈ terms} |k⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVector {
    pub terms: Vec<Configuration>,
    pub weight: u128,
}

impl StateVector {
    pub fn norm_squared(&self) -> Ratio {
        ratio_of(self.terms.len() as u128, self.weight)
    }
}

/// Q = Σ_t |ψ̂_t⟩⟨ψ̂_t| over boundary potentials t on one cone truncation.
#[derive(Clone, Debug)]
pub struct SupportProjection<'a> {
    ct: &'a ConeTruncation,
    group: &'a Group,
    potentials: Vec<Vec<Elem>>,
    vectors: Vec<StateVector>,
    fiber_of: HashMap<Configuration, u32>,
}

pub fn build_support_projection<'a>(ct: &'a ConeTruncation, group: &'a Group) -> Result<SupportProjection<'a>> {
    let fe = FastEnumerator::for_cone(ct, group)?;
    let weight = fe.fiber_size();
    let mut all = fe.scan(|free, lab| Some((free.t.to_vec(), Configuration::from_labels(lab, group))))?;
    all.par_sort_unstable();
    let mut potentials = Vec::new();
    let mut vectors = Vec::new();
    let mut fiber_of = HashMap::with_capacity(all.len());
    for class in all.chunk_by(|a, b| a.0 == b.0) {
        let t = potentials.len() as u32;
        potentials.push(class[0].0.clone());
        let terms: Vec<Configuration> = class.iter().map(|x| x.1.clone()).collect();
        for k in &terms {
            fiber_of.insert(k.clone(), t);
        }
        vectors.push(StateVector { terms, weight });
    }
    Ok(SupportProjection { ct, group, potentials, vectors, fiber_of })
}

impl SupportProjection<'_> {
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn potentials(&self) -> &[Vec<Elem>] {
        &self.potentials
    }

    /// Term sets pairwise disjoint and each vector of norm 1.
    pub fn is_orthonormal(&self) -> bool {
        let total: usize = self.vectors.iter().map(|v| v.terms.len()).sum();
        total == self.fiber_of.len() && self.vectors.iter().all(|v| v.norm_squared().is_one())
    }

    /// Q v.
    pub fn project(&self, v: &SparseVector) -> SparseVector {
        let mut sums: BTreeMap<u32, Ratio> = BTreeMap::new();
        for (k, x) in v {
            if let Some(&t) = self.fiber_of.get(k) {
                *sums.entry(t).or_insert_with(Ratio::zero) += x;
            }
        }
        let mut out = SparseVector::new();
        for (t, s) in sums {
            if s.is_zero() {
                continue;
            }
            let vec = &self.vectors[t as usize];
            let coef = s / ratio_of(vec.weight, 1);
            for k in &vec.terms {
                out.insert(k.clone(), coef.clone());
            }
        }
        out
    }

    /// (op ⊗ 1) v, with op supported on edges of the cone region.
    pub fn apply(&self, op: &LocalOperator, v: &SparseVector) -> Result<SparseVector> {
        let region = self.ct.region();
        let pos: Vec<usize> = op
            .support()
            .iter()
            .map(|e| {
                region
                    .index_of(e)
                    .ok_or_else(|| Error::InvalidArgument(format!("{e} is outside the cone region")))
            })
            .collect::<Result<_>>()?;
        let mut out = SparseVector::new();
        for (k, x) in v {
            let col = op.encode(&k.restrict(&pos));
            for (r, y) in op.column(col) {
                let mut img = k.clone();
                for (&i, z) in pos.iter().zip(op.decode(*r as usize)) {
                    img.set(i, z);
                }
                *out.entry(img).or_insert_with(Ratio::zero) += x * y;
            }
        }
        out.retain(|_, x| !x.is_zero());
        Ok(out)
    }

    /// The unnormalized ψ_t.
    pub fn psi(&self, t: usize) -> SparseVector {
        self.vectors[t].terms.iter().map(|k| (k.clone(), Ratio::one())).collect()
    }

    /// φ(Y) = c Σ_t Σ_{h ∈ J_t} (Y ψ_t)_h with c = 1/(rank · weight), where
    /// `y` applies Y to a vector.
    pub fn expect<F>(&self, y: F) -> Result<Ratio>
    where
        F: Fn(&SparseVector) -> Result<SparseVector> + Sync,
    {
        let parts = (0..self.rank())
            .into_par_iter()
            .map(|t| {
                let out = y(&self.psi(t))?;
                Ok(self.vectors[t]
                    .terms
                    .iter()
                    .filter_map(|h| out.get(h))
                    .fold(Ratio::zero(), |a, b| a + b))
            })
            .collect::<Result<Vec<Ratio>>>()?;
        let weight = self.vectors.first().map_or(1, |v| v.weight);
        Ok(parts.into_iter().fold(Ratio::zero(), |a, b| a + b) / ratio_of(self.rank() as u128 * weight, 1))
    }

    /// Tr(Q X) / rank.
    pub fn normalized_trace(&self, x: &LocalOperator) -> Result<Ratio> {
        let mut acc = Ratio::zero();
        for t in 0..self.rank() {
            let v = &self.vectors[t];
            let out = self.apply(x, &self.psi(t))?;
            let diag: Ratio = v.terms.iter().filter_map(|h| out.get(h)).fold(Ratio::zero(), |a, b| a + b);
            acc += diag / ratio_of(v.weight, 1);
        }
        Ok(acc / ratio_of(self.rank() as u128, 1))
    }

    /// Σ_{h,k} X_{hk} φ(|h⟩⟨k|), with φ(|h⟩⟨k|) from the closed formula.
    pub fn formula_expect(&self, x: &LocalOperator, state: &super::ConeState<'_>) -> Result<Ratio> {
        let mut acc = Ratio::zero();
        for k in self.fiber_of.keys() {
            let single: SparseVector = [(k.clone(), Ratio::one())].into();
            for (h, xhk) in self.apply(x, &single)? {
                acc += xhk * state.element(&h.labels(), &k.labels())?;
            }
        }
        Ok(acc)
    }
}

/// Both orders of φ(Q A Q B Q), with the formula cross-checks.
#[derive(Clone, Debug)]
pub struct TraceReport {
    pub lhs: Ratio,
    pub rhs: Ratio,
    /// φ(Q).
    pub phi_q: Ratio,
    /// φ(A) and φ(B) from the closed formula agree with Tr(Q ·)/rank.
    pub formula_agrees: bool,
    pub rank: usize,
}

impl TraceReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs && self.formula_agrees && self.phi_q.is_one()
    }
}

pub fn trace_property_check(
    ct: &ConeTruncation,
    group: &Group,
    a: &LocalOperator,
    b: &LocalOperator,
) -> Result<TraceReport> {
    let q = build_support_projection(ct, group)?;
    trace_property_with(&q, a, b)
}

/// [`trace_property_check`] on a projection built once.
pub fn trace_property_with(q: &SupportProjection<'_>, a: &LocalOperator, b: &LocalOperator) -> Result<TraceReport> {
    let chain = |x: &LocalOperator, y: &LocalOperator| {
        q.expect(|v| {
            let v = q.project(v);
            let v = q.project(&q.apply(y, &v)?);
            Ok(q.project(&q.apply(x, &v)?))
        })
    };
    let lhs = chain(a, b)?;
    let rhs = chain(b, a)?;
    let phi_q = q.expect(|v| Ok(q.project(v)))?;
    let state = super::ConeState::new(q.ct, q.group)?;
    let mut formula_agrees = true;
    for x in [a, b] {
        formula_agrees &= q.formula_expect(x, &state)? == q.normalized_trace(x)?;
    }
    Ok(TraceReport { lhs, rhs, phi_q, formula_agrees, rank: q.rank() })
}

/// Support and monotonicity of Q between two consecutive truncations.
#[derive(Clone, Debug)]
pub struct SupportReport {
    pub rank_small: usize,
    pub rank_large: usize,
    /// |G|^{|∂V|-1} for the smaller truncation.
    pub rank_formula: u128,
    pub orthonormal: bool,
    pub phi_q: Ratio,
    /// Groups of ψ_t terms of the larger truncation checked against Q of the smaller one.
    pub groups: u64,
    pub violations: u64,
}

impl SupportReport {
    pub fn holds(&self) -> bool {
        self.orthonormal && self.phi_q.is_one() && self.violations == 0 && self.rank_small as u128 == self.rank_formula
    }
}

/// φ(Q_N) = 1, and (Q_N ⊗ 1) ψ_t^{N+1} = ψ_t^{N+1} for every t.
pub fn support_and_monotonicity_check(
    small: &ConeTruncation,
    large: &ConeTruncation,
    group: &Group,
) -> Result<SupportReport> {
    if small.v0 != large.v0 || small.p1 != large.p1 || small.p2 != large.p2 || small.sigma != large.sigma {
        return Err(Error::InvalidArgument("truncations come from different cones".into()));
    }
    let inner: Vec<usize> = small
        .region()
        .edges()
        .iter()
        .map(|e| {
            large
                .region()
                .index_of(e)
                .ok_or_else(|| Error::InvalidArgument(format!("{e} is not in the larger truncation")))
        })
        .collect::<Result<_>>()?;
    let rest: Vec<usize> = (0..large.region().len()).filter(|i| !inner.contains(i)).collect();
    let qs = build_support_projection(small, group)?;
    let ql = build_support_projection(large, group)?;
    let phi_q = qs.expect(|v| Ok(qs.project(v)))?;
    let (groups, violations) = ql
        .vectors()
        .par_iter()
        .map(|v| {
            let mut by_rest: BTreeMap<Vec<Elem>, SparseVector> = BTreeMap::new();
            for k in &v.terms {
                let h = Configuration::from_labels(&k.restrict(&inner), group);
                by_rest.entry(k.restrict(&rest)).or_default().insert(h, Ratio::one());
            }
            let bad = by_rest.values().filter(|w| qs.project(w) != **w).count() as u64;
            (by_rest.len() as u64, bad)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(SupportReport {
        rank_small: qs.rank(),
        rank_large: ql.rank(),
        rank_formula: group.power(small.boundary_vertices().len() - 1),
        orthonormal: qs.is_orthonormal() && ql.is_orthonormal(),
        phi_q,
        groups,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{DeskCone, Edge, Rect};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_support(ct: &ConeTruncation, rng: &mut ChaCha8Rng, k: usize) -> Vec<Edge> {
        let edges = ct.region().edges();
        let mut s: Vec<Edge> = (0..k).map(|_| edges[rng.gen_range(0..edges.len())]).collect();
        s.sort();
        s.dedup();
        s
    }

    #[test]
    fn projection_is_orthonormal() {
        let g = Group::cyclic(2).unwrap();
        let ct = DeskCone::LShape.small();
        let q = build_support_projection(&ct, &g).unwrap();
        assert_eq!(q.rank(), 1024);
        assert!(q.is_orthonormal());
        let v = q.psi(5);
        assert_eq!(q.project(&v), v);
        assert_eq!(q.project(&q.project(&v)), q.project(&v));
    }

    #[test]
    fn trace_property_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (cone, g) in [(DeskCone::Quarter, Group::cyclic(3).unwrap()), (DeskCone::LShape, Group::cyclic(2).unwrap())] {
            let ct = cone.small();
            let q = build_support_projection(&ct, &g).unwrap();
            for _ in 0..8 {
                let a = LocalOperator::random(&random_support(&ct, &mut rng, 3), &g, &mut rng, -3, 3).unwrap();
                let b = LocalOperator::random(&random_support(&ct, &mut rng, 3), &g, &mut rng, -3, 3).unwrap();
                let r = trace_property_with(&q, &a, &b).unwrap();
                assert!(r.holds(), "{} {g}: {r:?}", cone.name());
            }
        }
    }

    #[test]
    fn projection_is_idempotent_and_symmetric() {
        let g = Group::cyclic(3).unwrap();
        let ct = DeskCone::Quarter.small();
        let q = build_support_projection(&ct, &g).unwrap();
        let keys: Vec<Configuration> = q.fiber_of.keys().cloned().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let random_vector = |rng: &mut ChaCha8Rng| -> SparseVector {
            (0..40)
                .map(|_| (keys[rng.gen_range(0..keys.len())].clone(), crate::state::ratio_int(rng.gen_range(-3..=3))))
                .filter(|(_, x)| !x.is_zero())
                .collect()
        };
        let dot = |u: &SparseVector, v: &SparseVector| -> Ratio {
            u.iter().filter_map(|(k, x)| v.get(k).map(|y| x * y)).fold(Ratio::zero(), |a, b| a + b)
        };
        for _ in 0..20 {
            let u = random_vector(&mut rng);
            let v = random_vector(&mut rng);
            let qv = q.project(&v);
            assert_eq!(q.project(&qv), qv);
            assert_eq!(dot(&u, &qv), dot(&q.project(&u), &v));
        }
    }

    #[test]
    fn trivial_group_has_rank_one() {
        let g = Group::cyclic(1).unwrap();
        for cone in DeskCone::ALL {
            let ct = cone.small();
            let q = build_support_projection(&ct, &g).unwrap();
            assert_eq!(q.rank(), 1);
            assert!(q.is_orthonormal());
        }
    }

    #[test]
    fn identity_operand_reduces_to_single_expectation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = Group::cyclic(2).unwrap();
        let ct = DeskCone::Quarter.small();
        let q = build_support_projection(&ct, &g).unwrap();
        for _ in 0..5 {
            let b = LocalOperator::random(&random_support(&ct, &mut rng, 2), &g, &mut rng, -3, 3).unwrap();
            let id = LocalOperator::identity(&random_support(&ct, &mut rng, 1), &g).unwrap();
            let r = trace_property_with(&q, &id, &b).unwrap();
            assert!(r.holds());
            assert_eq!(r.lhs, q.normalized_trace(&b).unwrap());
        }
    }

    #[test]
    fn operator_outside_region_is_rejected() {
        let g = Group::cyclic(2).unwrap();
        let ct = DeskCone::Quarter.small();
        let outside = *ct.rect_region.edges().iter().find(|e| ct.region().index_of(e).is_none()).unwrap();
        let a = LocalOperator::identity(&[outside], &g).unwrap();
        assert!(matches!(trace_property_check(&ct, &g, &a, &a), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn support_is_monotone() {
        let g = Group::cyclic(2).unwrap();
        for cone in DeskCone::ALL {
            let small = cone.small();
            let large = cone.truncation(Rect::square(2).unwrap()).unwrap();
            let r = support_and_monotonicity_check(&small, &large, &g).unwrap();
            assert!(r.holds(), "{}: {r:?}", cone.name());
            assert!(r.groups > 0);
        }
    }
}
