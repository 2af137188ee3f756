//! Simple graphs, trees, subtrees and subtree systems.
//!
//! Vertices are `0..n`. Paths `P_t` are labeled `0..t-1` in path order.
//! Subtree-level types store vertex sets as `u64` masks, so their hosts are
//! limited to 64 vertices; plain graphs and trees are unbounded.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::bits::{mask_of, mask_vertices, BitSet, MaskIter};

pub type Vertex = usize;
pub type Edge = (Vertex, Vertex);

/// Largest host tree supported by [`Subtree`] and [`SubtreeSystem`].
pub const MAX_SUBTREE_HOST: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("invalid subtree: {0}")]
    InvalidSubtree(String),
    #[error("host has {0} vertices; subtree operations support at most 64")]
    HostTooLarge(usize),
}

/// Undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    nbrs: Vec<Vec<Vertex>>,
    rows: Vec<BitSet>,
    m: usize,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        SimpleGraph {
            n,
            nbrs: vec![Vec::new(); n],
            rows: vec![BitSet::new(n); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list. Repeated edges are merged.
    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<Self, GraphError> {
        let mut g = SimpleGraph::empty(n);
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            if !g.rows[u].contains(v) {
                g.rows[u].insert(v);
                g.rows[v].insert(u);
                g.nbrs[u].push(v);
                g.nbrs[v].push(u);
                g.m += 1;
            }
        }
        for list in &mut g.nbrs {
            list.sort_unstable();
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<Edge> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        SimpleGraph::from_edges(n, &edges).expect("valid")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<Edge> = (1..n).map(|v| (v - 1, v)).collect();
        SimpleGraph::from_edges(n, &edges).expect("valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least 3 vertices");
        let mut edges: Vec<Edge> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((0, n - 1));
        SimpleGraph::from_edges(n, &edges).expect("valid")
    }

    /// Star `K_{1,leaves}` with center 0.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<Edge> = (1..=leaves).map(|v| (0, v)).collect();
        SimpleGraph::from_edges(leaves + 1, &edges).expect("valid")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges: Vec<Edge> = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
        SimpleGraph::from_edges(a + b, &edges).expect("valid")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.rows[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.nbrs[v]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.nbrs[v].len()
    }

    #[inline]
    pub fn row(&self, v: Vertex) -> &BitSet {
        &self.rows[v]
    }

    /// Adjacency row of `v` as a mask; only meaningful when `n <= 64`.
    #[inline]
    pub fn row_mask(&self, v: Vertex) -> u64 {
        debug_assert!(self.n <= 64);
        self.rows[v].low_word()
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for &v in &self.nbrs[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// Subgraph induced by `vertices`; new vertex `i` is `vertices[i]`.
    pub fn induced(&self, vertices: &[Vertex]) -> SimpleGraph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.nbrs[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        SimpleGraph::from_edges(vertices.len(), &edges).expect("induced edges are valid")
    }

    /// Number of edges with both ends in `vertices`.
    pub fn induced_edge_count(&self, vertices: &[Vertex]) -> usize {
        let set: BTreeSet<Vertex> = vertices.iter().copied().collect();
        self.edges()
            .into_iter()
            .filter(|(u, v)| set.contains(u) && set.contains(v))
            .count()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.nbrs[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Proper 2-colouring if one exists.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut color = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.nbrs[v] {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        queue.push_back(w);
                    } else if color[w] == color[v] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl Serialize for SimpleGraph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&crate::codec::to_graph6(self))
    }
}

impl<'de> Deserialize<'de> for SimpleGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        crate::codec::from_graph6(&text).map_err(serde::de::Error::custom)
    }
}

/// Connected acyclic graph with at least one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    graph: SimpleGraph,
}

impl Tree {
    pub fn new(graph: SimpleGraph) -> Result<Self, GraphError> {
        if graph.n() == 0 {
            return Err(GraphError::NotATree("no vertices".into()));
        }
        if graph.edge_count() + 1 != graph.n() {
            return Err(GraphError::NotATree(format!(
                "{} vertices but {} edges",
                graph.n(),
                graph.edge_count()
            )));
        }
        if !graph.is_connected() {
            return Err(GraphError::NotATree("disconnected".into()));
        }
        Ok(Tree { graph })
    }

    pub fn path(t: usize) -> Self {
        Tree::new(SimpleGraph::path(t)).expect("paths are trees")
    }

    pub fn star(leaves: usize) -> Self {
        Tree::new(SimpleGraph::star(leaves)).expect("stars are trees")
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn into_graph(self) -> SimpleGraph {
        self.graph
    }

    /// Vertices of degree at most one (the single vertex of `K1` counts).
    pub fn leaves(&self) -> Vec<Vertex> {
        (0..self.n()).filter(|&v| self.degree(v) <= 1).collect()
    }

    /// Whether the vertices are labeled `0..n` in path order.
    pub fn is_canonical_path(&self) -> bool {
        (1..self.n()).all(|v| self.adjacent(v - 1, v))
    }

    /// Unique path from `u` to `v`, inclusive.
    pub fn path_between(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        let parent = self.bfs_parents(u);
        let mut out = vec![v];
        let mut cur = v;
        while cur != u {
            cur = parent[cur];
            out.push(cur);
        }
        out.reverse();
        out
    }

    fn bfs_parents(&self, root: Vertex) -> Vec<Vertex> {
        let mut parent = vec![usize::MAX; self.n()];
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    pub fn distances_from(&self, root: Vertex) -> Vec<usize> {
        bfs_distances(&self.graph, root)
    }
}

impl Deref for Tree {
    type Target = SimpleGraph;

    fn deref(&self) -> &SimpleGraph {
        &self.graph
    }
}

fn bfs_distances(g: &SimpleGraph, root: Vertex) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Connected, non-empty vertex subset of a host tree with at most 64 vertices.
///
/// Ordered by size, then lexicographically by sorted vertex list.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subtree {
    mask: u64,
}

impl Subtree {
    pub fn new(host: &Tree, vertices: &[Vertex]) -> Result<Self, GraphError> {
        if host.n() > MAX_SUBTREE_HOST {
            return Err(GraphError::HostTooLarge(host.n()));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v >= host.n()) {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: host.n() });
        }
        Subtree::from_mask(host, mask_of(vertices))
    }

    pub fn from_mask(host: &Tree, mask: u64) -> Result<Self, GraphError> {
        if host.n() > MAX_SUBTREE_HOST {
            return Err(GraphError::HostTooLarge(host.n()));
        }
        if mask == 0 {
            return Err(GraphError::InvalidSubtree("empty vertex set".into()));
        }
        if host.n() < 64 && mask >> host.n() != 0 {
            return Err(GraphError::VertexOutOfRange {
                vertex: 63 - mask.leading_zeros() as usize,
                n: host.n(),
            });
        }
        if !mask_is_connected(host, mask) {
            return Err(GraphError::InvalidSubtree(format!(
                "{:?} is not connected in the host",
                mask_vertices(mask)
            )));
        }
        Ok(Subtree { mask })
    }

    /// Caller guarantees `mask` is a non-empty connected vertex set of the host.
    pub(crate) fn from_mask_unchecked(mask: u64) -> Self {
        debug_assert!(mask != 0);
        Subtree { mask }
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        mask_vertices(self.mask)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        v < 64 && self.mask & (1u64 << v) != 0
    }

    #[inline]
    pub fn intersects_mask(&self, mask: u64) -> bool {
        self.mask & mask != 0
    }

    pub fn is_subset_of(&self, other: &Subtree) -> bool {
        self.mask & !other.mask == 0
    }
}

impl Ord for Subtree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| MaskIter(self.mask).cmp(MaskIter(other.mask)))
    }
}

impl PartialOrd for Subtree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subtree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subtree{:?}", self.vertices())
    }
}

pub(crate) fn mask_is_connected(host: &SimpleGraph, mask: u64) -> bool {
    if mask == 0 {
        return false;
    }
    let start = mask.trailing_zeros() as usize;
    let mut seen = 1u64 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0u64;
        for v in MaskIter(frontier) {
            next |= host.row_mask(v);
        }
        next &= mask & !seen;
        seen |= next;
        frontier = next;
    }
    seen == mask
}

/// Host tree together with a list of subtrees (duplicates allowed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtreeSystem {
    host: Tree,
    members: Vec<Subtree>,
}

impl SubtreeSystem {
    pub fn new(host: Tree, members: Vec<Subtree>) -> Result<Self, GraphError> {
        if host.n() > MAX_SUBTREE_HOST {
            return Err(GraphError::HostTooLarge(host.n()));
        }
        for s in &members {
            Subtree::from_mask(&host, s.mask())?;
        }
        Ok(SubtreeSystem { host, members })
    }

    /// Builds a system from explicit vertex lists.
    pub fn from_vertex_lists(host: Tree, lists: &[Vec<Vertex>]) -> Result<Self, GraphError> {
        let members = lists
            .iter()
            .map(|l| Subtree::new(&host, l))
            .collect::<Result<Vec<_>, _>>()?;
        SubtreeSystem::new(host, members)
    }

    pub(crate) fn new_unchecked(host: Tree, members: Vec<Subtree>) -> Self {
        SubtreeSystem { host, members }
    }

    pub fn host(&self) -> &Tree {
        &self.host
    }

    pub fn members(&self) -> &[Subtree] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The subsystem made of the members at `indices`.
    pub fn select(&self, indices: &[usize]) -> SubtreeSystem {
        SubtreeSystem {
            host: self.host.clone(),
            members: indices.iter().map(|&i| self.members[i]).collect(),
        }
    }

    pub fn member_masks(&self) -> Vec<u64> {
        self.members.iter().map(Subtree::mask).collect()
    }

    /// Members that contain no other member as a proper subset.
    pub fn minimal_members(&self) -> Vec<Subtree> {
        let mut out: Vec<Subtree> = self
            .members
            .iter()
            .copied()
            .filter(|s| {
                !self
                    .members
                    .iter()
                    .any(|o| o.mask() != s.mask() && o.is_subset_of(s))
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// `N(T')`: vertices outside the subtree adjacent to it.
pub fn neighborhood(host: &Tree, sub: &Subtree) -> Vec<Vertex> {
    mask_vertices(neighborhood_mask(host, sub.mask()))
}

pub fn neighborhood_mask(host: &SimpleGraph, mask: u64) -> u64 {
    let mut out = 0u64;
    for v in MaskIter(mask) {
        out |= host.row_mask(v);
    }
    out & !mask
}

/// Leaves, diameter and one longest path of a tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeMetrics {
    pub leaves: Vec<Vertex>,
    pub diameter: usize,
    /// `v0 ... vd`, from the lexicographically smallest diametral endpoint pair.
    pub longest_path: Vec<Vertex>,
}

pub fn tree_metrics(t: &Tree) -> TreeMetrics {
    let n = t.n();
    let mut best = (0usize, 0usize, 0usize);
    for u in 0..n {
        let dist = t.distances_from(u);
        for (v, &d) in dist.iter().enumerate().skip(u) {
            if d > best.0 {
                best = (d, u, v);
            }
        }
    }
    let (diameter, u, v) = best;
    TreeMetrics {
        leaves: t.leaves(),
        diameter,
        longest_path: t.path_between(u, v),
    }
}

/// Components of `h - r`, each sorted, ordered by smallest vertex.
pub fn components_after_removal(h: &SimpleGraph, r: &[Vertex]) -> Vec<Vec<Vertex>> {
    let mut removed = vec![false; h.n()];
    for &v in r {
        removed[v] = true;
    }
    let mut seen = removed.clone();
    let mut comps = Vec::new();
    for s in 0..h.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in h.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// `w(R)`, the number of components of `h - r`.
pub fn component_count(h: &SimpleGraph, r: &[Vertex]) -> usize {
    components_after_removal(h, r).len()
}

/// Every subtree of `t` with at most `max_size` vertices, each exactly once,
/// ordered by size and then lexicographically.
pub fn enumerate_subtrees(t: &Tree, max_size: Option<usize>) -> Vec<Subtree> {
    assert!(t.n() <= MAX_SUBTREE_HOST, "subtree enumeration needs a host of at most 64 vertices");
    let limit = max_size.unwrap_or(t.n()).min(t.n());
    let mut out = Vec::new();
    let mut level: BTreeSet<u64> = (0..t.n()).map(|v| 1u64 << v).collect();
    let mut size = 1;
    while size <= limit && !level.is_empty() {
        let mut subs: Vec<Subtree> = level.iter().map(|&m| Subtree::from_mask_unchecked(m)).collect();
        subs.sort();
        out.extend_from_slice(&subs);
        if size == limit {
            break;
        }
        let mut next = BTreeSet::new();
        for &m in &level {
            for v in MaskIter(neighborhood_mask(t, m)) {
                next.insert(m | (1u64 << v));
            }
        }
        level = next;
        size += 1;
    }
    out
}

/// 2-core of `g` and, for each surviving vertex, its label in `g`.
pub fn two_core(g: &SimpleGraph) -> (SimpleGraph, Vec<Vertex>) {
    let mut alive = vec![true; g.n()];
    let mut deg: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut stack: Vec<Vertex> = (0..g.n()).filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    let survivors: Vec<Vertex> = (0..g.n()).filter(|&v| alive[v]).collect();
    (g.induced(&survivors), survivors)
}

/// Rooted AHU encoding of the subtree below `v`.
fn ahu(t: &Tree, v: Vertex, parent: Vertex) -> String {
    let mut kids: Vec<String> = t
        .neighbors(v)
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| ahu(t, w, v))
        .collect();
    kids.sort_unstable();
    format!("({})", kids.concat())
}

/// Isomorphism-invariant string for a tree, rooted at its center or bicenter.
pub fn tree_canonical_form(t: &Tree) -> String {
    let n = t.n();
    let mut deg: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut layer: Vec<Vertex> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in t.neighbors(v) {
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    match layer.as_slice() {
        [c] => ahu(t, *c, usize::MAX),
        [a, b] => {
            let (x, y) = (ahu(t, *a, *b), ahu(t, *b, *a));
            if x <= y {
                format!("{x}{y}")
            } else {
                format!("{y}{x}")
            }
        }
        _ => unreachable!("a tree has one or two centers"),
    }
}

/// One tree per isomorphism class on `n >= 1` vertices, sorted by canonical form.
pub fn enumerate_trees(n: usize) -> Vec<Tree> {
    assert!(n >= 1);
    let mut level: Vec<(String, Tree)> = vec![(String::new(), Tree::path(1))];
    for size in 2..=n {
        let mut next: std::collections::BTreeMap<String, Tree> = std::collections::BTreeMap::new();
        for (_, t) in &level {
            let mut edges = t.edges();
            for v in 0..t.n() {
                edges.push((v, size - 1));
                let grown = Tree::new(SimpleGraph::from_edges(size, &edges).expect("valid")).expect("leaf added");
                next.entry(tree_canonical_form(&grown)).or_insert(grown);
                edges.pop();
            }
        }
        level = next.into_iter().collect();
    }
    level.into_iter().map(|(_, t)| t).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spider(legs: &[usize]) -> Tree {
        let mut edges = Vec::new();
        let mut next = 1;
        for &len in legs {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Tree::new(SimpleGraph::from_edges(next, &edges).unwrap()).unwrap()
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert_eq!(
            SimpleGraph::from_edges(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(SimpleGraph::from_edges(3, &[(1, 1)]), Err(GraphError::Loop(1)));
        let g = SimpleGraph::from_edges(3, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.adjacent(1, 0) && g.adjacent(0, 1));
    }

    #[test]
    fn tree_validation() {
        assert!(Tree::new(SimpleGraph::cycle(4)).is_err());
        assert!(Tree::new(SimpleGraph::empty(0)).is_err());
        let forest = SimpleGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(Tree::new(forest).is_err());
        assert!(Tree::new(SimpleGraph::empty(1)).is_ok());
    }

    #[test]
    fn metrics_examples() {
        let p6 = tree_metrics(&Tree::path(6));
        assert_eq!((p6.leaves.len(), p6.diameter), (2, 5));
        assert_eq!(p6.longest_path, vec![0, 1, 2, 3, 4, 5]);
        let star = tree_metrics(&Tree::star(5));
        assert_eq!((star.leaves.len(), star.diameter), (5, 2));
        assert_eq!(star.longest_path, vec![1, 0, 2]);
        let k1 = tree_metrics(&Tree::path(1));
        assert_eq!((k1.leaves.len(), k1.diameter), (1, 0));
    }

    #[test]
    fn spider_metrics_match_double_bfs() {
        let t = spider(&[1, 2, 3]);
        let m = tree_metrics(&t);
        // oracle: farthest vertex from any vertex is a diameter endpoint
        let d0 = t.distances_from(0);
        let far = (0..t.n()).max_by_key(|&v| d0[v]).unwrap();
        let d1 = t.distances_from(far);
        assert_eq!(m.diameter, *d1.iter().max().unwrap());
        assert_eq!((m.leaves.len(), m.diameter), (3, 5));
        assert_eq!(m.longest_path.len(), 6);
    }

    #[test]
    fn components_examples() {
        let p3 = SimpleGraph::path(3);
        assert_eq!(component_count(&p3, &[1]), 2);
        // 1-based positions {2,5} on P6
        let comps = components_after_removal(&SimpleGraph::path(6), &[1, 4]);
        assert_eq!(comps, vec![vec![0], vec![2, 3], vec![5]]);
        // P4 on 1..4, R = {1,3}
        let comps = components_after_removal(&SimpleGraph::path(4), &[0, 2]);
        assert_eq!(comps, vec![vec![1], vec![3]]);
    }

    #[test]
    fn neighborhood_examples() {
        let p5 = Tree::path(5);
        let sub = Subtree::new(&p5, &[0, 1]).unwrap();
        assert_eq!(neighborhood(&p5, &sub), vec![2]);
        let whole = Subtree::new(&p5, &[0, 1, 2, 3, 4]).unwrap();
        assert!(neighborhood(&p5, &whole).is_empty());
        let star = Tree::star(4);
        let leaf = Subtree::new(&star, &[3]).unwrap();
        assert_eq!(neighborhood(&star, &leaf), vec![0]);
    }

    #[test]
    fn subtree_validation() {
        let p5 = Tree::path(5);
        assert!(Subtree::new(&p5, &[0, 2]).is_err());
        assert!(Subtree::new(&p5, &[]).is_err());
        assert!(Subtree::new(&p5, &[5]).is_err());
        assert!(Subtree::new(&p5, &[2, 1, 3]).is_ok());
    }

    #[test]
    fn subtree_enumeration_examples() {
        let p3 = enumerate_subtrees(&Tree::path(3), None);
        let lists: Vec<Vec<usize>> = p3.iter().map(Subtree::vertices).collect();
        assert_eq!(
            lists,
            vec![vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 1, 2]]
        );
        for t in 1..=10 {
            assert_eq!(enumerate_subtrees(&Tree::path(t), None).len(), t * (t + 1) / 2);
        }
        // brute force over all non-empty subsets of K_{1,3}
        let star = Tree::star(3);
        let brute = (1u64..16).filter(|&m| mask_is_connected(&star, m)).count();
        assert_eq!(brute, 11);
        assert_eq!(enumerate_subtrees(&star, None).len(), brute);
        assert_eq!(enumerate_subtrees(&star, Some(1)).len(), 4);
    }

    #[test]
    fn two_core_examples() {
        let (core, map) = two_core(&SimpleGraph::path(7));
        assert_eq!(core.n(), 0);
        assert!(map.is_empty());
        let mut edges: Vec<Edge> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.push((2, 5));
        let g = SimpleGraph::from_edges(6, &edges).unwrap();
        let (core, map) = two_core(&g);
        assert_eq!(map, vec![0, 1, 2, 3, 4]);
        assert_eq!(core.edge_count(), 5);
        assert!((0..5).all(|v| core.degree(v) == 2));
    }

    #[test]
    fn minimal_members_and_select() {
        let p4 = Tree::path(4);
        let sys = SubtreeSystem::from_vertex_lists(p4, &[vec![0, 1], vec![1], vec![2, 3], vec![1]]).unwrap();
        let minimal: Vec<Vec<usize>> = sys.minimal_members().iter().map(Subtree::vertices).collect();
        assert_eq!(minimal, vec![vec![1], vec![2, 3]]);
        assert_eq!(sys.select(&[2]).members()[0].vertices(), vec![2, 3]);
    }

    #[test]
    fn tree_counts() {
        let counts: Vec<usize> = (1..=10).map(|n| enumerate_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);
        let forms: BTreeSet<String> = enumerate_trees(7).iter().map(tree_canonical_form).collect();
        assert_eq!(forms.len(), 11);
    }
}
