//! Exhaustive enumeration over G^n, used as the oracle for everything else.

use super::packed::Configuration;
use crate::error::{Error, Result};
use crate::group::{Elem, Group};
use crate::lattice::Region;
use crate::paths::plaquettes_flat;
use rayon::prelude::*;

/// Default cap on raw states visited by exhaustive loops.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

const CHUNK: u64 = 1 << 12;

/// Fails with [`Error::Budget`] if `order^n` exceeds `budget`; returns the count otherwise.
pub fn check_budget(order: usize, n: usize, budget: u64) -> Result<u64> {
    let needed = (0..n).try_fold(1u128, |acc, _| acc.checked_mul(order as u128)).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(Error::Budget { needed, budget });
    }
    Ok(needed as u64)
}

fn digits_of(mut index: u64, order: usize, n: usize) -> Vec<Elem> {
    let mut digits = vec![0 as Elem; n];
    for d in digits.iter_mut().rev() {
        *d = (index % order as u64) as Elem;
        index /= order as u64;
    }
    digits
}

#[inline]
fn advance(digits: &mut [Elem], order: usize) {
    for d in digits.iter_mut().rev() {
        if (*d as usize) + 1 < order {
            *d += 1;
            return;
        }
        *d = 0;
    }
}

/// Visits every tuple of G^n in lexicographic order (last position fastest),
/// in parallel chunks, keeping the `Some` results in order.
///
/// `init` builds per-chunk scratch space handed to `f`.
pub fn par_scan<S, T, I, F>(order: usize, n: usize, init: I, f: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> S + Sync,
    F: Fn(&[Elem], &mut S) -> Option<T> + Sync,
{
    let total = (order as u64).pow(n as u32);
    let chunks = total.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let start = c * CHUNK;
            let len = CHUNK.min(total - start);
            let mut digits = digits_of(start, order, n);
            let mut scratch = init();
            let mut out = Vec::new();
            for _ in 0..len {
                if let Some(t) = f(&digits, &mut scratch) {
                    out.push(t);
                }
                advance(&mut digits, order);
            }
            out
        })
        .collect()
}

/// Folds over every tuple of G^n in parallel chunks.
///
/// Each chunk starts from `zero()` with fresh scratch from `init()`; chunk
/// results are combined with `reduce`, which must be associative.
pub fn par_fold<S, A, I, Z, F, R>(order: usize, n: usize, init: I, zero: Z, f: F, reduce: R) -> A
where
    A: Send,
    I: Fn() -> S + Sync,
    Z: Fn() -> A + Sync + Send,
    F: Fn(&mut A, &[Elem], &mut S) + Sync,
    R: Fn(A, A) -> A + Sync + Send,
{
    let total = (order as u64).pow(n as u32);
    (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let mut digits = digits_of(start, order, n);
            let mut scratch = init();
            let mut acc = zero();
            for _ in 0..CHUNK.min(total - start) {
                f(&mut acc, &digits, &mut scratch);
                advance(&mut digits, order);
            }
            acc
        })
        .reduce(&zero, &reduce)
}

/// Counts tuples of G^n accepted by `f`, in parallel.
pub fn par_count<F>(order: usize, n: usize, f: F) -> u64
where
    F: Fn(&[Elem]) -> bool + Sync,
{
    par_fold(order, n, || (), || 0u64, |acc, x, _| *acc += f(x) as u64, |a, b| a + b)
}

/// bottom·right = left·top on every plaquette of `region`.
pub fn is_admissible(region: &Region, group: &Group, c: &Configuration) -> bool {
    c.len() == region.len() && plaquettes_flat(region, group, &c.labels())
}

/// Every admissible labelling of `region`, in lexicographic label order.
pub fn enumerate_admissible_bruteforce(
    region: &Region,
    group: &Group,
    budget: u64,
) -> Result<Vec<Configuration>> {
    check_budget(group.order(), region.len(), budget)?;
    Ok(par_scan(group.order(), region.len(), || (), |labels, _| {
        plaquettes_flat(region, group, labels).then(|| Configuration::from_labels(labels, group))
    }))
}

pub fn count_admissible_bruteforce(region: &Region, group: &Group, budget: u64) -> Result<u64> {
    check_budget(group.order(), region.len(), budget)?;
    Ok(par_count(group.order(), region.len(), |labels| plaquettes_flat(region, group, labels)))
}
