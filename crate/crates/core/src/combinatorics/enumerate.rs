//! Exhaustive, deterministic enumeration of labelled graphs in ascending bit-pattern order.

use std::ops::Range;

use super::graph::{check_cap, pair_count, LabeledGraph, Tree};
use crate::error::Result;

/// `2^(n(n-1)/2)`, the number of labelled graphs on `n` vertices.
pub fn graph_count(n: usize) -> Result<u64> {
    check_cap(n)?;
    Ok(1u64 << pair_count(n))
}

/// Every labelled graph on `n` vertices, exactly once.
pub fn enumerate_graphs(n: usize) -> Result<impl Iterator<Item = LabeledGraph>> {
    let total = graph_count(n)?;
    graphs_in_range(n, 0..total)
}

/// Graphs whose bit pattern lies in `patterns`. Disjoint ranges can be handed to separate
/// workers; their concatenation in range order reproduces [`enumerate_graphs`].
pub fn graphs_in_range(n: usize, patterns: Range<u64>) -> Result<impl Iterator<Item = LabeledGraph>> {
    let total = graph_count(n)?;
    let end = patterns.end.min(total);
    let start = patterns.start.min(end);
    Ok((start..end).map(move |b| LabeledGraph::from_bits_unchecked(n, b as u32)))
}

pub fn enumerate_connected_graphs(n: usize) -> Result<impl Iterator<Item = LabeledGraph>> {
    Ok(enumerate_graphs(n)?.filter(LabeledGraph::is_connected))
}

/// All labelled spanning trees of the complete graph on `n` vertices.
///
/// Walks the bit patterns with exactly `n - 1` edges in ascending order and keeps the
/// connected ones.
pub fn enumerate_trees(n: usize) -> Result<impl Iterator<Item = Tree>> {
    check_cap(n)?;
    let slots = pair_count(n) as u32;
    let k = (n - 1) as u32;
    let first = if k == 0 { 0u64 } else { (1u64 << k) - 1 };
    let limit = 1u64 << slots;
    let patterns = std::iter::successors(Some(first), move |&v| {
        if v == 0 {
            return None;
        }
        // Gosper's hack: next integer with the same popcount
        let c = v & v.wrapping_neg();
        let r = v + c;
        let next = (((r ^ v) >> 2) / c) | r;
        (next < limit).then_some(next)
    });
    Ok(patterns
        .map(move |b| LabeledGraph::from_bits_unchecked(n, b as u32))
        .filter(LabeledGraph::is_connected)
        .map(Tree::new_unchecked))
}
