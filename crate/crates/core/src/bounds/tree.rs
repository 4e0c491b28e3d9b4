//! Exact evaluation of the tree-graph majorant for a handful of bodies.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use crate::combinatorics::{pair_count, pair_slot, PartitionScheme, MAX_IDENTITY_VERTICES};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sum over vertex sets `X` containing `distinguished` with `|X| >= 2`, and over spanning
/// trees of `X`, of `prod_tree (5/4) vbar_ij * prod_extra(tree) exp(vbar_ij)`.
///
/// `vbar` holds one upper bound on `|V_ij|` per pair in slot order. Every entry must lie in
/// `[0, 1/2]`.
pub fn tree_bound_small_n<T: Scalar>(vbar: &[T], n: usize, distinguished: usize) -> Result<T> {
    if n == 0 || n > MAX_IDENTITY_VERTICES {
        return Err(Error::EnumerationCap {
            n,
            cap: MAX_IDENTITY_VERTICES,
        });
    }
    if vbar.len() != pair_count(n) {
        return Err(Error::Domain(format!(
            "{} pair bounds for {} pairs",
            vbar.len(),
            pair_count(n)
        )));
    }
    if distinguished >= n {
        return Err(Error::Domain(format!("body {distinguished} outside 0..{n}")));
    }
    let half = T::of(0.5);
    if let Some(bad) = vbar.iter().find(|&&v| !(v >= T::zero() && v <= half)) {
        return Err(Error::Precondition(format!("pair bound {bad} outside [0, 1/2]")));
    }
    let v = |i: usize, j: usize| vbar[pair_slot(n, i.min(j), i.max(j))];
    let lin = T::of(1.25);

    let mut schemes: HashMap<(usize, usize), PartitionScheme> = HashMap::new();
    let mut total = T::zero();
    for mask in 0u16..(1 << n) {
        if mask >> distinguished & 1 == 0 || mask.count_ones() < 2 {
            continue;
        }
        let labels: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
        let size = labels.len();
        let root = labels.iter().position(|&k| k == distinguished).expect("mask holds it");
        let scheme = match schemes.entry((size, root)) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => e.insert(PartitionScheme::build(size, root)?),
        };
        for (tree, extra) in scheme.intervals() {
            let tree_weight = tree
                .graph()
                .edges()
                .fold(T::one(), |acc, (i, j)| acc * lin * v(labels[i], labels[j]));
            let extra_sum: T = extra.edges().map(|(i, j)| v(labels[i], labels[j])).sum();
            total = total + tree_weight * extra_sum.exp();
        }
    }
    Ok(total)
}

/// [`tree_bound_small_n`] with the same bound on every pair.
pub fn tree_bound_uniform<T: Scalar>(vbar: T, n: usize, distinguished: usize) -> Result<T> {
    tree_bound_small_n(&vec![vbar; pair_count(n)], n, distinguished)
}
