use std::fmt;

use crate::error::{Error, Result};

/// Largest vertex count any enumeration will accept.
pub const MAX_VERTICES: usize = 8;

/// Number of unordered pairs on `n` vertices.
#[inline]
pub const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Slot of the pair `{i, j}` (`i < j`, 0-based) in lexicographic pair order
/// `(0,1), (0,2), ..., (0,n-1), (1,2), ...`.
#[inline]
pub const fn pair_slot(n: usize, i: usize, j: usize) -> usize {
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// All pairs of `n` vertices in slot order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Simple undirected graph on vertices `0..n`, stored as a bit-set over pair slots.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledGraph {
    n: u8,
    bits: u32,
}

impl LabeledGraph {
    pub fn empty(n: usize) -> Result<Self> {
        check_cap(n)?;
        Ok(Self { n: n as u8, bits: 0 })
    }

    /// Graph with the given edge bit pattern. Bits beyond `pair_count(n)` are rejected.
    pub fn from_bits(n: usize, bits: u32) -> Result<Self> {
        check_cap(n)?;
        let slots = pair_count(n);
        if slots < 32 && bits >> slots != 0 {
            return Err(Error::Domain(format!(
                "edge pattern {bits:#x} has bits beyond the {slots} pair slots of n = {n}"
            )));
        }
        Ok(Self { n: n as u8, bits })
    }

    pub(crate) const fn from_bits_unchecked(n: usize, bits: u32) -> Self {
        Self { n: n as u8, bits }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(a, b) in edges {
            if a == b {
                return Err(Error::Domain(format!("self-loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::Domain(format!("edge {{{a},{b}}} outside 0..{n}")));
            }
            let bit = 1u32 << pair_slot(n, a.min(b), a.max(b));
            if g.bits & bit != 0 {
                return Err(Error::Domain(format!("duplicate edge {{{a},{b}}}")));
            }
            g.bits |= bit;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn edge_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        if i == j || i >= self.n() || j >= self.n() {
            return false;
        }
        self.bits >> pair_slot(self.n(), i.min(j), i.max(j)) & 1 == 1
    }

    /// Edges `(i, j)`, `i < j`, in slot order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let bits = self.bits;
        pairs(self.n())
            .enumerate()
            .filter(move |(k, _)| bits >> k & 1 == 1)
            .map(|(_, p)| p)
    }

    /// Neighbour sets as vertex bit-masks.
    pub fn adjacency(&self) -> [u16; MAX_VERTICES] {
        let mut adj = [0u16; MAX_VERTICES];
        for (i, j) in self.edges() {
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n <= 1 {
            return true;
        }
        let adj = self.adjacency();
        let all = (1u16 << n) - 1;
        let mut seen = 1u16;
        let mut frontier = 1u16;
        while frontier != 0 {
            let mut next = 0u16;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == all
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() + 1 == self.n().max(1) && self.is_connected()
    }

    /// `self` is a spanning subgraph of `other`.
    pub fn is_subgraph_of(&self, other: &LabeledGraph) -> bool {
        self.n == other.n && self.bits & !other.bits == 0
    }

    pub fn union(&self, other: &LabeledGraph) -> LabeledGraph {
        debug_assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            bits: self.bits | other.bits,
        }
    }

    /// Edges of `self` not in `other`.
    pub fn difference(&self, other: &LabeledGraph) -> LabeledGraph {
        debug_assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            bits: self.bits & !other.bits,
        }
    }

    /// Maps vertex `v` to `labels[v]`, producing a graph on `n` vertices.
    pub fn relabel(&self, labels: &[usize], n: usize) -> Result<LabeledGraph> {
        if labels.len() != self.n() {
            return Err(Error::Domain(format!(
                "{} labels for a graph on {} vertices",
                labels.len(),
                self.n()
            )));
        }
        let edges: Vec<_> = self.edges().map(|(i, j)| (labels[i], labels[j])).collect();
        LabeledGraph::from_edges(n, &edges)
    }
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}{{", self.n)?;
        for (k, (i, j)) in self.edges().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}{j}")?;
        }
        write!(f, "}}")
    }
}

/// Connected graph with `n - 1` edges; checked on construction.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Tree(LabeledGraph);

impl Tree {
    pub fn graph(&self) -> &LabeledGraph {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub(crate) fn new_unchecked(g: LabeledGraph) -> Self {
        debug_assert!(g.is_tree());
        Tree(g)
    }
}

impl TryFrom<LabeledGraph> for Tree {
    type Error = Error;

    fn try_from(g: LabeledGraph) -> Result<Self> {
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        if g.edge_count() + 1 != g.n().max(1) {
            return Err(Error::Domain(format!(
                "{} edges on {} vertices is not a tree",
                g.edge_count(),
                g.n()
            )));
        }
        Ok(Tree(g))
    }
}

impl From<Tree> for LabeledGraph {
    fn from(t: Tree) -> Self {
        t.0
    }
}

pub(crate) fn check_cap(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        return Err(Error::EnumerationCap { n, cap: MAX_VERTICES });
    }
    if n == 0 {
        return Err(Error::Domain("graphs need at least one vertex".into()));
    }
    Ok(())
}
