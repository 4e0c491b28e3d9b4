//! Breadth-first tree map and the induced partition of connected graphs into boolean
//! intervals `[tree, tree + extra(tree)]`.

use std::collections::BTreeMap;

use super::enumerate::{enumerate_connected_graphs, enumerate_trees};
use super::graph::{check_cap, pair_slot, LabeledGraph, Tree};
use super::identities::{check_identity_cap, relative_residual, EdgeWeights, Weight};
use crate::error::{Error, Result};

/// Breadth-first depths from `root`; `None` for unreachable vertices.
pub fn bfs_depths(g: &LabeledGraph, root: usize) -> Vec<Option<usize>> {
    let n = g.n();
    let adj = g.adjacency();
    let mut depth = vec![None; n];
    depth[root] = Some(0);
    let mut frontier = vec![root];
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for &u in &frontier {
            for (v, slot) in depth.iter_mut().enumerate() {
                if adj[u] >> v & 1 == 1 && slot.is_none() {
                    *slot = Some(d);
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    depth
}

/// Maps a connected graph to a spanning tree: each non-root vertex is attached to its
/// smallest-label neighbour one layer closer to `root`.
pub fn penrose_map(g: &LabeledGraph, root: usize) -> Result<Tree> {
    let n = g.n();
    if root >= n {
        return Err(Error::Domain(format!("root {root} outside 0..{n}")));
    }
    let depth = bfs_depths(g, root);
    let depth: Vec<usize> = depth.into_iter().collect::<Option<_>>().ok_or(Error::Disconnected)?;
    let adj = g.adjacency();
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in (0..n).filter(|&v| v != root) {
        let parent = (0..n)
            .find(|&u| adj[v] >> u & 1 == 1 && depth[u] + 1 == depth[v])
            .expect("a vertex at positive depth has a neighbour one layer up");
        edges.push((parent, v));
    }
    Tree::try_from(LabeledGraph::from_edges(n, &edges)?)
}

/// Edges that may be added to `tree` without changing its image under [`penrose_map`]:
/// edges inside a layer, and edges from `u` one layer up to `v` when `u` exceeds the
/// parent of `v`.
pub fn allowed_extra_edges(tree: &Tree, root: usize) -> Result<LabeledGraph> {
    let g = tree.graph();
    let n = g.n();
    if root >= n {
        return Err(Error::Domain(format!("root {root} outside 0..{n}")));
    }
    let depth: Vec<usize> = bfs_depths(g, root)
        .into_iter()
        .collect::<Option<_>>()
        .ok_or(Error::Disconnected)?;
    let adj = g.adjacency();
    let parent = |v: usize| (0..n).find(|&u| adj[v] >> u & 1 == 1 && depth[u] + 1 == depth[v]);
    let mut bits = 0u32;
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(i, j) {
                continue;
            }
            let allowed = if depth[i] == depth[j] {
                true
            } else {
                let (u, v) = if depth[i] < depth[j] { (i, j) } else { (j, i) };
                depth[u] + 1 == depth[v] && parent(v).is_some_and(|p| u > p)
            };
            if allowed {
                bits |= 1 << pair_slot(n, i, j);
            }
        }
    }
    LabeledGraph::from_bits(n, bits)
}

/// The fibres of [`penrose_map`] on connected graphs over `n` vertices, verified to be
/// disjoint boolean intervals that together cover every connected graph.
#[derive(Clone, Debug)]
pub struct PartitionScheme {
    n: usize,
    root: usize,
    /// tree -> union of its fibre, minus the tree
    extra: BTreeMap<Tree, LabeledGraph>,
}

impl PartitionScheme {
    pub fn build(n: usize, root: usize) -> Result<Self> {
        check_cap(n)?;
        if root >= n {
            return Err(Error::Domain(format!("root {root} outside 0..{n}")));
        }
        let mut fibres: BTreeMap<Tree, (LabeledGraph, u64)> = BTreeMap::new();
        let mut connected = 0u64;
        for g in enumerate_connected_graphs(n)? {
            connected += 1;
            let t = penrose_map(&g, root)?;
            if !t.graph().is_subgraph_of(&g) {
                return Err(Error::PartitionScheme(format!("{t:?} is not inside {g:?}")));
            }
            let entry = fibres.entry(t).or_insert((*t.graph(), 0));
            entry.0 = entry.0.union(&g);
            entry.1 += 1;
        }
        let trees = enumerate_trees(n)?.count();
        if fibres.len() != trees {
            return Err(Error::PartitionScheme(format!(
                "{} trees have a non-empty fibre, expected all {trees}",
                fibres.len()
            )));
        }
        let mut extra = BTreeMap::new();
        let mut covered = 0u64;
        for (t, (top, size)) in fibres {
            let free = top.difference(t.graph());
            // the fibre lies inside [t, top]; equal size forces it to be the whole interval
            let interval = 1u64 << free.edge_count();
            if size != interval {
                return Err(Error::PartitionScheme(format!(
                    "fibre of {t:?} has {size} graphs, interval [tree, {top:?}] has {interval}"
                )));
            }
            let predicted = allowed_extra_edges(&t, root)?;
            if predicted != free {
                return Err(Error::PartitionScheme(format!(
                    "fibre of {t:?} adds {free:?}, layer rule predicts {predicted:?}"
                )));
            }
            covered += size;
            extra.insert(t, free);
        }
        if covered != connected {
            return Err(Error::PartitionScheme(format!(
                "intervals cover {covered} of {connected} connected graphs"
            )));
        }
        Ok(Self { n, root, extra })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Extra edges allowed on top of `tree`; `None` if `tree` is not on `n` vertices.
    pub fn extra_edges(&self, tree: &Tree) -> Option<&LabeledGraph> {
        self.extra.get(tree)
    }

    /// `(tree, extra edges)` pairs in ascending tree order.
    pub fn intervals(&self) -> impl Iterator<Item = (&Tree, &LabeledGraph)> {
        self.extra.iter()
    }
}

/// `true` when the breadth-first map partitions the connected graphs on `n` vertices into
/// boolean intervals.
pub fn penrose_partition_check(n: usize, root: usize) -> bool {
    PartitionScheme::build(n, root).is_ok()
}

/// Compares `sum_{g connected} prod_{E(g)} f` with
/// `sum_trees prod_{E(tree)} f * prod_{extra(tree)} (1 + f)`. Returns the relative residual.
pub fn penrose_identity_check<W: Weight>(weights: &EdgeWeights<W>, root: usize) -> Result<W> {
    check_identity_cap(weights.n())?;
    let scheme = PartitionScheme::build(weights.n(), root)?;
    let lhs = enumerate_connected_graphs(weights.n())?
        .map(|g| weights.graph_weight(&g))
        .fold(W::zero(), |a, b| a + b);
    let rhs = scheme
        .intervals()
        .map(|(t, extra)| weights.graph_weight(t.graph()) * weights.boltzmann_weight(extra))
        .fold(W::zero(), |a, b| a + b);
    Ok(relative_residual(&lhs, &rhs))
}
