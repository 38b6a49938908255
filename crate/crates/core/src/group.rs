//! Finite groups stored as dense multiplication tables.
//!
//! Elements are indices `0..order` with the identity at index 0. Every
//! group used by the rest of the crate goes through [`Group`], so adding a
//! new family only means producing its table.

use crate::error::{Error, Result};
use std::fmt;

/// A group element, as an index into the tables of its [`Group`].
pub type Elem = u8;

/// The identity element of every [`Group`].
pub const IDENTITY: Elem = 0;

/// Largest supported group order.
pub const MAX_ORDER: usize = 256;

/// A finite group given by its multiplication and inverse tables.
#[derive(Clone, PartialEq, Eq)]
pub struct Group {
    name: String,
    order: usize,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({}, order {})", self.name, self.order)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl Group {
    /// Builds a group from a product table; the inverse table is derived.
    ///
    /// Fails if index 0 is not a two-sided identity or some element has no
    /// inverse. Associativity is not checked here, see [`Group::is_associative`].
    pub fn from_table(name: impl Into<String>, order: usize, mul: Vec<Elem>) -> Result<Self> {
        if order == 0 || order > MAX_ORDER || mul.len() != order * order {
            return Err(Error::InvalidArgument(format!(
                "table of length {} does not describe a group of order {order}",
                mul.len()
            )));
        }
        if mul.iter().any(|&x| x as usize >= order) {
            return Err(Error::InvalidArgument("table entry out of range".into()));
        }
        for a in 0..order {
            if mul[a] as usize != a || mul[a * order] as usize != a {
                return Err(Error::InvalidArgument("index 0 is not the identity".into()));
            }
        }
        let mut inv = vec![0; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| mul[a * order + b] == IDENTITY && mul[b * order + a] == IDENTITY)
                .ok_or_else(|| Error::InvalidArgument(format!("element {a} has no inverse")))?;
            inv[a] = b as Elem;
        }
        Ok(Group { name: name.into(), order, mul, inv })
    }

    /// The cyclic group Z_n.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidArgument(format!("cyclic order {n} out of range")));
        }
        let mul = (0..n * n).map(|i| ((i / n + i % n) % n) as Elem).collect();
        Group::from_table(format!("Z{n}"), n, mul)
    }

    /// The dihedral group D_n of order 2n.
    ///
    /// Index `i + n*j` stands for r^i s^j, so r = 1 and s = n.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 || 2 * n > MAX_ORDER {
            return Err(Error::InvalidArgument(format!("dihedral index {n} out of range")));
        }
        let order = 2 * n;
        let mut mul = vec![0; order * order];
        for x in 0..order {
            let (a, b) = (x % n, x / n);
            for y in 0..order {
                let (c, d) = (y % n, y / n);
                // r^a s^b r^c s^d = r^(a ± c) s^(b+d)
                let i = if b == 0 { (a + c) % n } else { (a + n - c) % n };
                mul[x * order + y] = (i + n * ((b + d) % 2)) as Elem;
            }
        }
        Group::from_table(format!("D{n}"), order, mul)
    }

    /// Direct product; the pair (a, b) is stored at `a + |self| * b`.
    pub fn product(&self, other: &Group) -> Result<Self> {
        let order = self.order * other.order;
        if order > MAX_ORDER {
            return Err(Error::InvalidArgument(format!("product order {order} too large")));
        }
        let split = |x: usize| (x % self.order, x / self.order);
        let mut mul = vec![0; order * order];
        for x in 0..order {
            let (a, b) = split(x);
            for y in 0..order {
                let (c, d) = split(y);
                let p = self.mul(a as Elem, c as Elem) as usize
                    + self.order * other.mul(b as Elem, d as Elem) as usize;
                mul[x * order + y] = p as Elem;
            }
        }
        Group::from_table(format!("{}x{}", self.name, other.name), order, mul)
    }

    /// Parses `Z<n>`, `D<n>` and `x`-separated products such as `Z2xZ3`.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || Error::UnknownGroup(spec.to_string());
        let mut acc: Option<Group> = None;
        for part in spec.trim().split(['x', 'X']) {
            let part = part.trim();
            if part.len() < 2 || !part.is_char_boundary(1) {
                return Err(bad());
            }
            let n: usize = part[1..].parse().map_err(|_| bad())?;
            let g = match &part[..1] {
                "Z" | "z" => Group::cyclic(n),
                "D" | "d" => Group::dihedral(n),
                _ => return Err(bad()),
            }
            .map_err(|_| bad())?;
            acc = Some(match acc {
                None => g,
                Some(a) => a.product(&g).map_err(|_| bad())?,
            });
        }
        acc.ok_or_else(bad)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Bits needed to store one element: ceil(log2 |G|).
    pub fn bits(&self) -> u32 {
        usize::BITS - (self.order - 1).leading_zeros()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order).map(|x| x as Elem)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    /// `a` for `sign > 0`, its inverse otherwise.
    #[inline]
    pub fn pow_sign(&self, a: Elem, sign: i8) -> Elem {
        if sign > 0 {
            a
        } else {
            self.inv(a)
        }
    }

    /// Product of a sequence, left to right.
    pub fn product_of(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items.into_iter().fold(IDENTITY, |acc, x| self.mul(acc, x))
    }

    pub fn is_associative(&self) -> bool {
        let els: Vec<_> = self.elements().collect();
        els.iter().all(|&a| {
            els.iter().all(|&b| {
                els.iter()
                    .all(|&c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))
            })
        })
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// |G|^n, saturating at `u128::MAX`.
    pub fn power(&self, n: usize) -> u128 {
        (0..n).try_fold(1u128, |acc, _| acc.checked_mul(self.order as u128))
            .unwrap_or(u128::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_table() {
        let z3 = Group::cyclic(3).unwrap();
        assert_eq!(z3.mul(2, 2), 1);
        assert_eq!(z3.inv(1), 2);
        assert!(z3.is_associative() && z3.is_abelian());
    }

    #[test]
    fn dihedral_relations() {
        for n in 1..=6 {
            let d = Group::dihedral(n).unwrap();
            let (r, s) = ((1 % n) as Elem, n as Elem);
            let rn = (0..n).fold(IDENTITY, |acc, _| d.mul(acc, r));
            assert_eq!(rn, IDENTITY);
            assert_eq!(d.mul(s, s), IDENTITY);
            assert_eq!(d.product_of([s, r, s]), d.inv(r));
            assert!(d.is_associative());
            assert_eq!(d.is_abelian(), n <= 2);
        }
    }

    #[test]
    fn parse_specs() {
        assert_eq!(Group::parse("Z2").unwrap().order(), 2);
        assert_eq!(Group::parse("D3").unwrap().order(), 6);
        let g = Group::parse("Z2xZ3").unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.is_abelian() && g.is_associative());
        assert!(Group::parse("Q8").is_err());
        assert!(Group::parse("Z").is_err());
        assert!(Group::parse("Z0").is_err());
    }

    #[test]
    fn bits_per_element() {
        let bits: Vec<_> = [1, 2, 3, 4, 5, 6, 8, 9]
            .iter()
            .map(|&n| Group::cyclic(n).unwrap().bits())
            .collect();
        assert_eq!(bits, vec![0, 1, 2, 2, 3, 3, 3, 4]);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(Group::from_table("bad", 2, vec![0, 1, 1, 1]).is_err());
        assert!(Group::from_table("bad", 2, vec![1, 0, 0, 1]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn family() -> impl Strategy<Value = Group> {
            prop_oneof![
                (1usize..=12).prop_map(|n| Group::cyclic(n).unwrap()),
                (1usize..=6).prop_map(|n| Group::dihedral(n).unwrap()),
                (1usize..=4, 1usize..=3).prop_map(|(a, b)| {
                    Group::cyclic(a).unwrap().product(&Group::dihedral(b).unwrap()).unwrap()
                }),
            ]
        }

        proptest! {
            #[test]
            fn group_axioms(g in family(), a in any::<u8>(), b in any::<u8>(), c in any::<u8>()) {
                let n = g.order() as u8;
                let (a, b, c) = ((a as usize % n as usize) as Elem, (b as usize % n as usize) as Elem, (c as usize % n as usize) as Elem);
                prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                prop_assert_eq!(g.mul(a, g.inv(a)), IDENTITY);
                prop_assert_eq!(g.mul(IDENTITY, a), a);
                prop_assert_eq!(g.inv(g.mul(a, b)), g.mul(g.inv(b), g.inv(a)));
            }

            #[test]
            fn parse_round_trips_name(g in family()) {
                let again = Group::parse(g.name()).unwrap();
                prop_assert_eq!(again, g);
            }
        }
    }
}
