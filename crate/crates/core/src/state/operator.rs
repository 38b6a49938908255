//! Operators on a finite set of edges, in the product basis |k⟩.

use super::{ratio_int, Ratio};
use crate::error::{Error, Result};
use crate::group::{Elem, Group};
use crate::lattice::{Edge, Plaquette, Vertex};
use num_traits::{One, Zero};
use rand::Rng;

/// An operator on ⊗_{e ∈ support} l²(G).
///
/// Basis vectors are labellings of the support in canonical edge order; the
/// first edge is the most significant digit of the basis index. Entries are
/// kept column by column with zeros dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator {
    support: Vec<Edge>,
    order: usize,
    cols: Vec<Vec<(u32, Ratio)>>,
}

impl LocalOperator {
    /// `entry(row_labels, col_labels)` for every pair of basis vectors.
    pub fn from_fn(
        support: &[Edge],
        group: &Group,
        entry: impl Fn(&[Elem], &[Elem]) -> Ratio,
    ) -> Result<Self> {
        let mut op = LocalOperator::zero(support, group)?;
        let dim = op.dim();
        for c in 0..dim {
            let cl = op.decode(c);
            for r in 0..dim {
                let x = entry(&op.decode(r), &cl);
                if !x.is_zero() {
                    op.cols[c].push((r as u32, x));
                }
            }
        }
        Ok(op)
    }

    /// Builds from (row labels, column labels, value) triples; repeated positions add up.
    pub fn from_entries(
        support: &[Edge],
        group: &Group,
        entries: impl IntoIterator<Item = (Vec<Elem>, Vec<Elem>, Ratio)>,
    ) -> Result<Self> {
        let mut op = LocalOperator::zero(support, group)?;
        for (r, c, x) in entries {
            if r.len() != op.support.len() || c.len() != op.support.len() {
                return Err(Error::InvalidArgument("basis labels do not match the support".into()));
            }
            let (r, c) = (op.encode(&r), op.encode(&c));
            let col = &mut op.cols[c];
            match col.binary_search_by_key(&(r as u32), |e| e.0) {
                Ok(i) => col[i].1 += x,
                Err(i) => col.insert(i, (r as u32, x)),
            }
        }
        for col in &mut op.cols {
            col.retain(|(_, x)| !x.is_zero());
        }
        Ok(op)
    }

    pub fn zero(support: &[Edge], group: &Group) -> Result<Self> {
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("support must be sorted without repeats".into()));
        }
        let dim = (group.order() as u128).checked_pow(support.len() as u32);
        let dim = match dim {
            Some(d) if d <= 1 << 24 => d as usize,
            _ => return Err(Error::Overflow("operator dimension")),
        };
        Ok(LocalOperator { support: support.to_vec(), order: group.order(), cols: vec![Vec::new(); dim] })
    }

    pub fn identity(support: &[Edge], group: &Group) -> Result<Self> {
        let mut op = LocalOperator::zero(support, group)?;
        for (c, col) in op.cols.iter_mut().enumerate() {
            col.push((c as u32, Ratio::one()));
        }
        Ok(op)
    }

    /// |h⟩⟨k|.
    pub fn matrix_unit(support: &[Edge], group: &Group, h: &[Elem], k: &[Elem]) -> Result<Self> {
        LocalOperator::from_entries(support, group, [(h.to_vec(), k.to_vec(), Ratio::one())])
    }

    /// B_p: the projection onto labellings of p with bottom·right = left·top.
    pub fn plaquette(p: Plaquette, group: &Group) -> Result<Self> {
        let mut support = p.edges().to_vec();
        support.sort();
        let pos = p.edges().map(|e| support.iter().position(|&f| f == e).unwrap());
        let mut op = LocalOperator::zero(&support, group)?;
        for c in 0..op.dim() {
            let l = op.decode(c);
            let [b, r, le, t] = pos.map(|i| l[i]);
            if group.mul(b, r) == group.mul(le, t) {
                op.cols[c].push((c as u32, Ratio::one()));
            }
        }
        Ok(op)
    }

    /// The four edges meeting at `v`, sorted, with +1 for those leaving `v`.
    pub fn star(v: Vertex) -> [(Edge, i8); 4] {
        let mut star = [
            (Edge::h(v.x - 1, v.y), -1),
            (Edge::v(v.x, v.y - 1), -1),
            (Edge::h(v.x, v.y), 1),
            (Edge::v(v.x, v.y), 1),
        ];
        star.sort();
        star
    }

    /// A_v^{(g)}: left multiplication by g on edges leaving v, right
    /// multiplication by g⁻¹ on edges entering v.
    pub fn gauge(v: Vertex, g: Elem, group: &Group) -> Result<Self> {
        let star = LocalOperator::star(v);
        let support: Vec<Edge> = star.iter().map(|s| s.0).collect();
        let mut op = LocalOperator::zero(&support, group)?;
        for c in 0..op.dim() {
            let l = op.decode(c);
            let moved: Vec<Elem> = l
                .iter()
                .zip(&star)
                .map(|(&x, &(_, s))| if s > 0 { group.mul(g, x) } else { group.mul(x, group.inv(g)) })
                .collect();
            let r = op.encode(&moved);
            op.cols[c].push((r as u32, Ratio::one()));
        }
        Ok(op)
    }

    /// A_v = (1/|G|) Σ_g A_v^{(g)}.
    pub fn vertex(v: Vertex, group: &Group) -> Result<Self> {
        let weight = Ratio::new(1.into(), (group.order() as i64).into());
        let mut entries = Vec::new();
        for g in group.elements() {
            let a = LocalOperator::gauge(v, g, group)?;
            for c in 0..a.dim() {
                for (r, x) in &a.cols[c] {
                    entries.push((a.decode(*r as usize), a.decode(c), x * &weight));
                }
            }
        }
        let support: Vec<Edge> = LocalOperator::star(v).iter().map(|s| s.0).collect();
        LocalOperator::from_entries(&support, group, entries)
    }

    /// Integer entries drawn uniformly from `lo..=hi`.
    pub fn random<R: Rng>(support: &[Edge], group: &Group, rng: &mut R, lo: i64, hi: i64) -> Result<Self> {
        let mut op = LocalOperator::zero(support, group)?;
        let dim = op.dim();
        let draws: Vec<i64> = (0..dim * dim).map(|_| rng.gen_range(lo..=hi)).collect();
        for (c, col) in op.cols.iter_mut().enumerate() {
            for r in 0..dim {
                let x = draws[r * dim + c];
                if x != 0 {
                    col.push((r as u32, ratio_int(x)));
                }
            }
        }
        Ok(op)
    }

    pub fn support(&self) -> &[Edge] {
        &self.support
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    /// Nonzero entries of column `c` as (row, value), rows ascending.
    pub fn column(&self, c: usize) -> &[(u32, Ratio)] {
        &self.cols[c]
    }

    pub fn entry(&self, r: usize, c: usize) -> Ratio {
        match self.cols[c].binary_search_by_key(&(r as u32), |e| e.0) {
            Ok(i) => self.cols[c][i].1.clone(),
            Err(_) => Ratio::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn encode(&self, labels: &[Elem]) -> usize {
        labels.iter().fold(0, |acc, &x| acc * self.order + x as usize)
    }

    pub fn decode(&self, mut idx: usize) -> Vec<Elem> {
        let mut out = vec![0; self.support.len()];
        for x in out.iter_mut().rev() {
            *x = (idx % self.order) as Elem;
            idx /= self.order;
        }
        out
    }

    /// The same operator tensored with the identity on the extra edges of `support`.
    pub fn extend(&self, support: &[Edge], group: &Group) -> Result<Self> {
        let pos: Vec<usize> = self
            .support
            .iter()
            .map(|e| {
                support
                    .iter()
                    .position(|f| f == e)
                    .ok_or_else(|| Error::InvalidArgument(format!("{e} missing from extended support")))
            })
            .collect::<Result<_>>()?;
        let mut out = LocalOperator::zero(support, group)?;
        for c in 0..out.dim() {
            let cl = out.decode(c);
            let inner: Vec<Elem> = pos.iter().map(|&i| cl[i]).collect();
            let mut col: Vec<(u32, Ratio)> = self.cols[self.encode(&inner)]
                .iter()
                .map(|(r, x)| {
                    let mut rl = cl.clone();
                    for (k, &i) in pos.iter().enumerate() {
                        rl[i] = self.decode(*r as usize)[k];
                    }
                    (out.encode(&rl) as u32, x.clone())
                })
                .collect();
            col.sort_by_key(|e| e.0);
            out.cols[c] = col;
        }
        Ok(out)
    }

    /// Product `self · other` on the union of the supports.
    pub fn mul(&self, other: &LocalOperator, group: &Group) -> Result<Self> {
        let mut support: Vec<Edge> = self.support.iter().chain(&other.support).copied().collect();
        support.sort();
        support.dedup();
        let a = self.extend(&support, group)?;
        let b = other.extend(&support, group)?;
        let mut out = LocalOperator::zero(&support, group)?;
        for c in 0..out.dim() {
            let mut acc: std::collections::BTreeMap<u32, Ratio> = Default::default();
            for (k, y) in &b.cols[c] {
                for (r, x) in &a.cols[*k as usize] {
                    *acc.entry(*r).or_insert_with(Ratio::zero) += x * y;
                }
            }
            out.cols[c] = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        }
        Ok(out)
    }

    /// Conjugate transpose; entries are real, so this is the transpose.
    pub fn adjoint(&self) -> Self {
        let mut cols = vec![Vec::new(); self.cols.len()];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, x) in col {
                cols[*r as usize].push((c as u32, x.clone()));
            }
        }
        LocalOperator { cols, ..self.clone() }
    }

    pub fn to_dense(&self) -> Vec<Vec<Ratio>> {
        let dim = self.dim();
        let mut m = vec![vec![Ratio::zero(); dim]; dim];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, x) in col {
                m[*r as usize][c] = x.clone();
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn gauge_is_a_representation() {
        let d3 = Group::dihedral(3).unwrap();
        let v = Vertex::new(0, 0);
        for g in d3.elements() {
            for h in d3.elements() {
                let gh = LocalOperator::gauge(v, g, &d3).unwrap().mul(&LocalOperator::gauge(v, h, &d3).unwrap(), &d3);
                assert_eq!(gh.unwrap(), LocalOperator::gauge(v, d3.mul(g, h), &d3).unwrap());
            }
        }
    }

    #[test]
    fn vertex_and_plaquette_are_projections() {
        let z3 = Group::cyclic(3).unwrap();
        let a = LocalOperator::vertex(Vertex::new(1, 1), &z3).unwrap();
        assert_eq!(a.mul(&a, &z3).unwrap(), a);
        let b = LocalOperator::plaquette(Plaquette::new(0, 0), &z3).unwrap();
        assert_eq!(b.mul(&b, &z3).unwrap(), b);
        assert_eq!(b.nnz(), 27);
    }

    #[test]
    fn gauge_commutes_with_plaquettes() {
        let d3 = Group::dihedral(3).unwrap();
        let v = Vertex::new(1, 1);
        let b = LocalOperator::plaquette(Plaquette::new(0, 0), &d3).unwrap();
        for g in d3.elements() {
            let a = LocalOperator::gauge(v, g, &d3).unwrap();
            assert_eq!(a.mul(&b, &d3).unwrap(), b.mul(&a, &d3).unwrap());
        }
    }

    #[test]
    fn extend_then_multiply_by_identity() {
        let z2 = Group::cyclic(2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let s = [Edge::h(0, 0), Edge::v(1, 0)];
        let x = LocalOperator::random(&s, &z2, &mut rng, -3, 3).unwrap();
        let id = LocalOperator::identity(&[Edge::h(0, 1)], &z2).unwrap();
        let big = x.mul(&id, &z2).unwrap();
        assert_eq!(big.dim(), 8);
        assert_eq!(big.support(), &[Edge::h(0, 0), Edge::h(0, 1), Edge::v(1, 0)]);
        assert_eq!(big.entry(0, 0), x.entry(0, 0));
    }
}
