//! Graph-sum identities checked by brute force: the product expansion of a Gibbs weight
//! and its factorisation over connected components.

use std::collections::HashMap;
use std::fmt::Debug;

use num_traits::{Num, Signed};

use super::enumerate::{enumerate_connected_graphs, enumerate_graphs};
use super::graph::{pair_count, pair_slot, pairs, LabeledGraph};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest vertex count for the brute-force identity checks.
pub const MAX_IDENTITY_VERTICES: usize = 6;

/// Edge weight arithmetic: floats, or exact rationals.
pub trait Weight: Clone + Num + Signed + PartialOrd + Debug {}

impl<W: Clone + Num + Signed + PartialOrd + Debug> Weight for W {}

/// Per-pair bond weights `f_ij = exp(-v_ij) - 1` on `n` vertices, indexed by pair slot.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeWeights<W> {
    n: usize,
    bond: Vec<W>,
    potential: Option<Vec<W>>,
}

impl<W: Weight> EdgeWeights<W> {
    /// Bond weights given directly, one per pair in slot order.
    pub fn from_bonds(n: usize, bond: Vec<W>) -> Result<Self> {
        if bond.len() != pair_count(n) {
            return Err(Error::Domain(format!(
                "{} bond weights for {} pairs",
                bond.len(),
                pair_count(n)
            )));
        }
        Ok(Self {
            n,
            bond,
            potential: None,
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> W) -> Self {
        Self {
            n,
            bond: pairs(n).map(|(i, j)| f(i, j)).collect(),
            potential: None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `f_ij`; symmetric in its arguments.
    pub fn bond(&self, i: usize, j: usize) -> W {
        self.bond[pair_slot(self.n, i.min(j), i.max(j))].clone()
    }

    /// `exp(-v_ij) = 1 + f_ij`.
    pub fn boltzmann(&self, i: usize, j: usize) -> W {
        W::one() + self.bond(i, j)
    }

    /// The pair potentials, if the weights were built from them.
    pub fn potentials(&self) -> Option<&[W]> {
        self.potential.as_deref()
    }

    /// Product of bond weights over the edges of `g`.
    pub fn graph_weight(&self, g: &LabeledGraph) -> W {
        g.edges().fold(W::one(), |acc, (i, j)| acc * self.bond(i, j))
    }

    /// Product of Boltzmann factors over the edges of `g`.
    pub fn boltzmann_weight(&self, g: &LabeledGraph) -> W {
        g.edges().fold(W::one(), |acc, (i, j)| acc * self.boltzmann(i, j))
    }

    fn check_graph(&self, g: &LabeledGraph) -> Result<()> {
        if g.n() != self.n {
            return Err(Error::Domain(format!(
                "graph on {} vertices, weights on {}",
                g.n(),
                self.n
            )));
        }
        Ok(())
    }

    pub fn checked_graph_weight(&self, g: &LabeledGraph) -> Result<W> {
        self.check_graph(g)?;
        Ok(self.graph_weight(g))
    }
}

impl<T: Scalar> EdgeWeights<T> {
    /// Bond weights `exp(-v) - 1` from pair potentials in slot order.
    pub fn from_potentials(n: usize, potential: Vec<T>) -> Result<Self> {
        if potential.len() != pair_count(n) {
            return Err(Error::Domain(format!(
                "{} potentials for {} pairs",
                potential.len(),
                pair_count(n)
            )));
        }
        if let Some(v) = potential.iter().find(|v| v.is_nan()) {
            return Err(Error::Domain(format!("pair potential {v}")));
        }
        Ok(Self {
            n,
            bond: potential.iter().map(|&v| (-v).exp_m1()).collect(),
            potential: Some(potential),
        })
    }
}

pub(crate) fn check_identity_cap(n: usize) -> Result<()> {
    if n > MAX_IDENTITY_VERTICES {
        return Err(Error::EnumerationCap {
            n,
            cap: MAX_IDENTITY_VERTICES,
        });
    }
    if n == 0 {
        return Err(Error::Domain("need at least one vertex".into()));
    }
    Ok(())
}

/// `|lhs - rhs| / max(1, |lhs|)`.
pub(crate) fn relative_residual<W: Weight>(lhs: &W, rhs: &W) -> W {
    let scale = lhs.abs();
    let scale = if scale > W::one() { scale } else { W::one() };
    (lhs.clone() - rhs.clone()).abs() / scale
}

/// Compares `prod_{i<j} (1 + f_ij)` with `sum_g prod_{E(g)} f_ij` over all graphs.
/// Returns the relative residual; zero in exact arithmetic.
pub fn product_expansion_check<W: Weight>(weights: &EdgeWeights<W>) -> Result<W> {
    check_identity_cap(weights.n)?;
    let lhs = pairs(weights.n).fold(W::one(), |acc, (i, j)| acc * weights.boltzmann(i, j));
    let rhs = enumerate_graphs(weights.n)?
        .map(|g| weights.graph_weight(&g))
        .fold(W::zero(), |a, b| a + b);
    Ok(relative_residual(&lhs, &rhs))
}

/// Set partitions of `0..n` as lists of vertex bit-masks, via restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<u16>> {
    fn grow(v: usize, n: usize, blocks: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if v == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= 1 << v;
            grow(v + 1, n, blocks, out);
            blocks[b] &= !(1 << v);
        }
        blocks.push(1 << v);
        grow(v + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    if n > 0 {
        grow(0, n, &mut Vec::new(), &mut out);
    }
    out
}

pub(crate) fn mask_vertices(mask: u16) -> Vec<usize> {
    (0..16).filter(|v| mask >> v & 1 == 1).collect()
}

/// Sum of `prod_{E(g)} f` over connected graphs `g` whose vertex set is `mask`.
pub(crate) fn connected_sum<W: Weight>(weights: &EdgeWeights<W>, mask: u16) -> Result<W> {
    let labels = mask_vertices(mask);
    let mut total = W::zero();
    for g in enumerate_connected_graphs(labels.len())? {
        let embedded = g.relabel(&labels, weights.n)?;
        total = total + weights.graph_weight(&embedded);
    }
    Ok(total)
}

/// Compares the full graph sum with its factorisation over connected components:
/// `sum_g prod f = sum_{set partitions} prod_blocks (sum over connected graphs on the block)`.
pub fn component_decomposition_check<W: Weight>(weights: &EdgeWeights<W>) -> Result<W> {
    check_identity_cap(weights.n)?;
    let lhs = enumerate_graphs(weights.n)?
        .map(|g| weights.graph_weight(&g))
        .fold(W::zero(), |a, b| a + b);
    let mut cache: HashMap<u16, W> = HashMap::new();
    let mut rhs = W::zero();
    for partition in set_partitions(weights.n) {
        let mut term = W::one();
        for block in partition {
            let c = match cache.get(&block) {
                Some(c) => c.clone(),
                None => {
                    let c = connected_sum(weights, block)?;
                    cache.insert(block, c.clone());
                    c
                }
            };
            term = term * c;
        }
        rhs = rhs + term;
    }
    Ok(relative_residual(&lhs, &rhs))
}
