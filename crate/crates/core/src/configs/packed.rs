//! Bit-packed edge labellings.

use crate::group::{Elem, Group};
use serde::{Serialize, Serializer};
use std::fmt;

/// Labels of the edges of a region, in the region's canonical edge order.
///
/// Each label takes `bits` bits; labels are packed little-endian into 64-bit
/// words and never straddle a word boundary.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    len: u32,
    bits: u8,
    words: Vec<u64>,
}

impl Configuration {
    /// All-identity labelling of `len` edges for a group needing `bits` bits.
    pub fn identity(len: usize, bits: u32) -> Self {
        let bits = bits.max(1) as u8;
        let per = 64 / bits as usize;
        Configuration { len: len as u32, bits, words: vec![0; len.div_ceil(per)] }
    }

    pub fn from_labels(labels: &[Elem], group: &Group) -> Self {
        let mut c = Configuration::identity(labels.len(), group.bits());
        for (i, &x) in labels.iter().enumerate() {
            c.set(i, x);
        }
        c
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    fn slot(&self, i: usize) -> (usize, u32) {
        let per = 64 / self.bits as usize;
        (i / per, (i % per) as u32 * self.bits as u32)
    }

    #[inline]
    pub fn get(&self, i: usize) -> Elem {
        assert!(i < self.len(), "edge index {i} out of range");
        let (w, s) = self.slot(i);
        ((self.words[w] >> s) & ((1u64 << self.bits) - 1)) as Elem
    }

    #[inline]
    pub fn set(&mut self, i: usize, x: Elem) {
        assert!(i < self.len(), "edge index {i} out of range");
        let (w, s) = self.slot(i);
        let mask = ((1u64 << self.bits) - 1) << s;
        self.words[w] = (self.words[w] & !mask) | ((x as u64) << s);
    }

    pub fn labels(&self) -> Vec<Elem> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// Labels at the given positions, in that order.
    pub fn restrict(&self, idx: &[usize]) -> Vec<Elem> {
        idx.iter().map(|&i| self.get(i)).collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration{:?}", self.labels())
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn pack_round_trip(order in 1usize..=256, raw in proptest::collection::vec(any::<u8>(), 0..80)) {
            let g = Group::cyclic(order).unwrap();
            let labels: Vec<Elem> = raw.iter().map(|&x| (x as usize % order) as Elem).collect();
            let c = Configuration::from_labels(&labels, &g);
            prop_assert_eq!(c.labels(), labels);
        }
    }

    #[test]
    fn word_layout() {
        let g = Group::cyclic(3).unwrap();
        let c = Configuration::from_labels(&[1, 2, 0, 1], &g);
        assert_eq!(c.words(), &[0b01_00_10_01]);
        let c = Configuration::from_labels(&[2; 33], &g);
        assert_eq!(c.words().len(), 2);
        assert_eq!(c.get(32), 2);
    }
}
