//! Vertex, edge and mixed piercing of subtree systems, Edge Helly checks,
//! pierce-or-witness certificates and nice tuples on paths.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{mask_of, mask_vertices, MaskIter};
use crate::constructions::{flower, FlowerSpec};
use crate::counting::{
    extendable_set, for_each_subset, graph_image_union, highly_extendable_subtrees, sunflower_extract,
    CountingError, Monomorphism, MonomorphismFamily,
};
use crate::graph::{
    component_count, neighborhood_mask, Edge, SimpleGraph, Subtree, SubtreeSystem, Tree, Vertex,
};
use crate::search::{is_isomorphic, is_monomorphism};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PiercingError {
    #[error("no certificate: {tuples} violating tuples tried, none gave {q} petals on every subtree")]
    Inconclusive { tuples: usize, q: usize },
    #[error("pierce-or-witness needs q >= 2, got {0}")]
    PetalCount(usize),
    #[error("the family's pattern is not the given tree or its host is not the given graph")]
    Mismatch,
    #[error("map is not a member of the family")]
    NotAMember,
    #[error("matching edges must be disjoint path edges in increasing order")]
    BadMatching,
    #[error("small-tree search needs k >= 3 and t not congruent to 2 mod k-1 (t={t}, k={k})")]
    Precondition { t: usize, k: usize },
    #[error("no interior tuple member meets the size bound")]
    NoSmallTree,
    #[error(transparent)]
    Counting(#[from] CountingError),
}

/// Edges and vertices of the host tree; the span is the vertices plus all edge endpoints.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiercingSet {
    pub edges: Vec<Edge>,
    pub vertices: Vec<Vertex>,
}

impl PiercingSet {
    pub fn from_edges(edges: Vec<Edge>) -> Self {
        PiercingSet { edges, vertices: Vec::new() }
    }

    pub fn span_mask(&self) -> u64 {
        self.edges
            .iter()
            .fold(mask_of(&self.vertices), |m, &(u, v)| m | 1 << u | 1 << v)
    }
}

pub fn pierces(p: &PiercingSet, sys: &SubtreeSystem) -> bool {
    let span = p.span_mask();
    sys.members().iter().all(|s| s.mask() & span != 0)
}

fn edge_masks(tree: &Tree) -> (Vec<Edge>, Vec<u64>) {
    let edges = tree.edges();
    let masks = edges.iter().map(|&(u, v)| 1u64 << u | 1 << v).collect();
    (edges, masks)
}

/// Lexicographically least index set of size at most `size` whose edges pierce every
/// mask; exact size when no smaller set exists.
fn edge_cover_of_size(masks: &[u64], emask: &[u64], size: usize) -> Option<Vec<usize>> {
    fn go(masks: &[u64], emask: &[u64], size: usize, pos: usize, span: u64, chosen: &mut Vec<usize>) -> bool {
        let open = masks.iter().find(|&&m| m & span == 0);
        let Some(&open) = open else {
            return true;
        };
        if chosen.len() == size {
            return false;
        }
        if !emask[pos..].iter().any(|&e| e & open != 0) {
            return false;
        }
        for i in pos..emask.len() {
            chosen.push(i);
            if go(masks, emask, size, i + 1, span | emask[i], chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::with_capacity(size);
    go(masks, emask, size, 0, 0, &mut chosen).then_some(chosen)
}

/// Minimum edge piercing set; `None` when no edge set pierces the system (a non-empty
/// system on `K1`). Edges are ranked by members pierced, then by member vertices
/// covered, then lexicographically, and the first optimum in that ranking is returned
/// sorted.
pub fn min_edge_piercing(sys: &SubtreeSystem) -> Option<Vec<Edge>> {
    min_edge_piercing_masks(sys.host(), &sys.member_masks())
}

fn min_edge_piercing_masks(tree: &Tree, masks: &[u64]) -> Option<Vec<Edge>> {
    let (edges, emask) = edge_masks(tree);
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by_key(|&i| {
        let pierced = masks.iter().filter(|&&m| m & emask[i] != 0).count();
        let covered: u32 = masks.iter().map(|&m| (m & emask[i]).count_ones()).sum();
        (std::cmp::Reverse(pierced), std::cmp::Reverse(covered), i)
    });
    let ranked: Vec<u64> = order.iter().map(|&i| emask[i]).collect();
    let idx = (0..=edges.len().min(masks.len())).find_map(|s| edge_cover_of_size(masks, &ranked, s))?;
    let mut out: Vec<Edge> = idx.into_iter().map(|i| edges[order[i]]).collect();
    out.sort_unstable();
    Some(out)
}

/// Piercing by at most `k` edges following the leaf recursion of the Edge Helly proof,
/// always taking the least-labeled leaf. Exact: returns a minimum piercing set whenever
/// one of size at most `k` exists.
pub fn proof_recursion_piercing(sys: &SubtreeSystem, k: usize) -> Option<Vec<Edge>> {
    let tree = sys.host();
    let active = if tree.n() == 64 { u64::MAX } else { (1u64 << tree.n()) - 1 };
    let mut out = recurse(tree, active, sys.member_masks(), k)?;
    out.sort_unstable();
    Some(out)
}

fn recurse(tree: &Tree, active: u64, members: Vec<u64>, k: usize) -> Option<Vec<Edge>> {
    if members.is_empty() {
        return Some(Vec::new());
    }
    let size = active.count_ones();
    if k == 0 || size <= 1 {
        return None;
    }
    let verts = mask_vertices(active);
    if size == 2 {
        return Some(vec![(verts[0], verts[1])]);
    }
    let x = verts
        .iter()
        .copied()
        .find(|&v| (tree.row_mask(v) & active).count_ones() == 1)
        .expect("a tree on at least two vertices has a leaf");
    let y = (tree.row_mask(x) & active).trailing_zeros() as usize;
    let xy = (x.min(y), x.max(y));
    let xm = 1u64 << x;
    if members.contains(&xm) {
        let rest: Vec<u64> = members.into_iter().filter(|&m| m & (xm | 1 << y) == 0).collect();
        let mut sol = recurse(tree, active & !xm, rest, k - 1)?;
        sol.push(xy);
        Some(sol)
    } else {
        let rest = members.into_iter().map(|m| m & !xm).collect();
        recurse(tree, active & !xm, rest, k)
    }
}

/// Outcome of an Edge Helly local-to-global check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HellyReport {
    pub k: usize,
    pub local_ok: bool,
    /// Member indices of a subfamily of size at most `k + 1` that needs more than `k` edges.
    pub local_witness: Option<Vec<usize>>,
    pub global_ok: bool,
    pub min_size: Option<usize>,
    pub min_edges: Option<Vec<Edge>>,
    pub verdict: bool,
}

/// Checks every subfamily of size `min(k + 1, |sys|)`; pierceability is inherited by
/// subfamilies, so this covers all sizes up to `k + 1`.
pub fn edge_helly_check(sys: &SubtreeSystem, k: usize) -> HellyReport {
    let masks = sys.member_masks();
    let tree = sys.host();
    let (_, emask) = edge_masks(tree);
    let size = (k + 1).min(masks.len());
    let mut local_witness = None;
    let mut pick = Vec::with_capacity(size);
    for_each_combination(masks.len(), size, &mut |idx| {
        pick.clear();
        pick.extend(idx.iter().map(|&i| masks[i]));
        let ok = edge_cover_of_size(&pick, &emask, k).is_some();
        if !ok {
            local_witness = Some(idx.to_vec());
        }
        !ok
    });
    let min_edges = min_edge_piercing_masks(tree, &masks);
    let min_size = min_edges.as_ref().map(Vec::len);
    let local_ok = local_witness.is_none();
    let global_ok = min_size.is_some_and(|s| s <= k);
    HellyReport {
        k,
        local_ok,
        local_witness,
        global_ok,
        min_size,
        min_edges,
        verdict: !(local_ok && !global_ok),
    }
}

fn for_each_combination(n: usize, size: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == size {
            return f(cur);
        }
        for i in start..=n - (size - cur.len()) {
            cur.push(i);
            if go(n, size, i + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    if size > n {
        return false;
    }
    go(n, size, 0, &mut Vec::with_capacity(size), f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeighborReport {
    pub holds: bool,
    /// `k + 1` member indices, pairwise neither intersecting nor adjacent.
    pub violation: Option<Vec<usize>>,
}

/// Whether every `k + 1` members contain a pair `i != j` with `(V(T_i) ∪ N(T_i)) ∩ V(T_j) ≠ ∅`.
pub fn neighbor_condition_check(sys: &SubtreeSystem, k: usize) -> NeighborReport {
    let masks = sys.member_masks();
    let closed: Vec<u64> = masks.iter().map(|&m| m | neighborhood_mask(sys.host(), m)).collect();
    let n = masks.len();
    let apart = |i: usize, j: usize| closed[i] & masks[j] == 0 && closed[j] & masks[i] == 0;
    fn go(n: usize, need: usize, start: usize, cur: &mut Vec<usize>, apart: &dyn Fn(usize, usize) -> bool) -> bool {
        if cur.len() == need {
            return true;
        }
        for i in start..n {
            if n - i < need - cur.len() {
                break;
            }
            if cur.iter().all(|&c| apart(c, i)) {
                cur.push(i);
                if go(n, need, i + 1, cur, apart) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    let mut cur = Vec::new();
    if go(n, k + 1, 0, &mut cur, &apart) {
        NeighborReport {
            holds: false,
            violation: Some(cur),
        }
    } else {
        NeighborReport {
            holds: true,
            violation: None,
        }
    }
}

/// At most `b` vertices hitting every mask, found by branching on the first unhit mask.
fn vertex_hitting_set(masks: &[u64], b: usize) -> Option<Vec<Vertex>> {
    fn go(masks: &[u64], b: usize, hit: u64, chosen: &mut Vec<Vertex>) -> bool {
        let Some(&open) = masks.iter().find(|&&m| m & hit == 0) else {
            return true;
        };
        if chosen.len() == b {
            return false;
        }
        for v in MaskIter(open) {
            chosen.push(v);
            if go(masks, b, hit | 1 << v, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    go(masks, b, 0, &mut chosen).then(|| {
        chosen.sort_unstable();
        chosen
    })
}

/// An `(a, b)`-piercing set: edge sets in order of size then index, each completed by an
/// exact vertex hitting set of size at most `b`.
pub fn mixed_piercing_search(sys: &SubtreeSystem, a: usize, b: usize) -> Option<PiercingSet> {
    mixed_masks(sys.host(), &sys.member_masks(), a, b)
}

fn mixed_masks(tree: &Tree, masks: &[u64], a: usize, b: usize) -> Option<PiercingSet> {
    let (edges, emask) = edge_masks(tree);
    let mut found = None;
    for_each_subset(edges.len(), a, &mut |idx| {
        let span = idx.iter().fold(0, |s, &i| s | emask[i]);
        let open: Vec<u64> = masks.iter().copied().filter(|&m| m & span == 0).collect();
        match vertex_hitting_set(&open, b) {
            Some(vertices) => {
                found = Some(PiercingSet {
                    edges: idx.iter().map(|&i| edges[i]).collect(),
                    vertices,
                });
                true
            }
            None => false,
        }
    });
    found
}

/// Uniform random labeled tree on `n` vertices from a Prüfer sequence.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Tree {
    if n <= 2 {
        return Tree::path(n);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in &seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("Prüfer decoding keeps a leaf");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Tree::new(SimpleGraph::from_edges(n, &edges).expect("in range")).expect("Prüfer sequences decode to trees")
}

/// Random subtree grown from a random vertex by adding random boundary vertices.
pub fn random_subtree<R: Rng>(tree: &Tree, rng: &mut R) -> Subtree {
    let n = tree.n();
    let target = rng.gen_range(1..=n);
    let mut mask = 1u64 << rng.gen_range(0..n);
    while (mask.count_ones() as usize) < target {
        let boundary = mask_vertices(neighborhood_mask(tree, mask));
        mask |= 1 << boundary[rng.gen_range(0..boundary.len())];
    }
    Subtree::from_mask(tree, mask).expect("grown sets are connected")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub max_members: usize,
    pub a: usize,
    pub b: usize,
    pub h: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub config: ProbeConfig,
    pub trials_run: usize,
    /// Host graph6 and member vertex lists of the first counterexample.
    pub counterexample: Option<(String, Vec<Vec<Vertex>>)>,
}

/// Searches seeded random systems for one whose `h`-subfamilies are all
/// `(a, b)`-pierceable while the whole system is not.
pub fn mixed_helly_probe(config: &ProbeConfig) -> ProbeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let lo = config.min_vertices.max(1);
    let hi = config.max_vertices.max(lo);
    for trial in 0..config.trials {
        let tree = random_tree(rng.gen_range(lo..=hi), &mut rng);
        let count = rng.gen_range(1..=config.max_members.max(1));
        let masks: Vec<u64> = (0..count).map(|_| random_subtree(&tree, &mut rng).mask()).collect();
        if let Some(found) = probe_counterexample(&tree, &masks, config) {
            return ProbeReport {
                config: config.clone(),
                trials_run: trial + 1,
                counterexample: Some(found),
            };
        }
    }
    ProbeReport {
        config: config.clone(),
        trials_run: config.trials,
        counterexample: None,
    }
}

fn probe_counterexample(tree: &Tree, masks: &[u64], config: &ProbeConfig) -> Option<(String, Vec<Vec<Vertex>>)> {
    if masks.len() <= config.h || mixed_masks(tree, masks, config.a, config.b).is_some() {
        return None;
    }
    let mut pick = Vec::new();
    let local_fails = for_each_combination(masks.len(), config.h, &mut |idx| {
        pick.clear();
        pick.extend(idx.iter().map(|&i| masks[i]));
        mixed_masks(tree, &pick, config.a, config.b).is_none()
    });
    (!local_fails).then(|| {
        (
            crate::codec::to_graph6(tree),
            masks.iter().map(|&m| mask_vertices(m)).collect(),
        )
    })
}

/// `q` monomorphisms of the pattern tree agreeing exactly on `roots`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlowerEmbedding {
    pub roots: Vec<Vertex>,
    pub maps: Vec<Monomorphism>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    Piercing(PiercingSet),
    Witness(FlowerEmbedding),
}

impl FlowerEmbedding {
    /// Maps are monomorphisms agreeing exactly on the roots, `T - R` has at least
    /// `k + 1` components, and the union of images is isomorphic to `T_R^q`.
    pub fn is_valid(&self, g: &SimpleGraph, t: &Tree, k: usize, q: usize) -> bool {
        if self.maps.len() != q || q < 2 || component_count(t, &self.roots) < k + 1 {
            return false;
        }
        let mut root = vec![false; t.n()];
        for &r in &self.roots {
            root[r] = true;
        }
        if !self.maps.iter().all(|m| is_monomorphism(t, g, m.map())) {
            return false;
        }
        for i in 0..q {
            for j in i + 1..q {
                for x in 0..t.n() {
                    for y in 0..t.n() {
                        if (self.maps[i].get(x) == self.maps[j].get(y)) != (x == y && root[x]) {
                            return false;
                        }
                    }
                }
            }
        }
        let Ok(spec) = FlowerSpec::new(t.graph().clone(), self.roots.clone(), q) else {
            return false;
        };
        is_isomorphic(&graph_image_union(t, &self.maps), &flower(&spec).graph)
    }
}

impl Certificate {
    /// Re-validates against the instance: the piercing side must use at most `k` edges
    /// and pierce `𝒯_{φ,Φ,c}`.
    #[allow(clippy::too_many_arguments)]
    pub fn is_valid(
        &self,
        g: &SimpleGraph,
        t: &Tree,
        k: usize,
        q: usize,
        c: usize,
        fam: &MonomorphismFamily,
        phi: &Monomorphism,
    ) -> bool {
        match self {
            Certificate::Piercing(p) => {
                p.vertices.is_empty()
                    && p.edges.len() <= k
                    && p.edges.iter().all(|&(u, v)| t.adjacent(u, v))
                    && highly_extendable_subtrees(phi, fam, c).is_ok_and(|sys| pierces(p, &sys))
            }
            Certificate::Witness(w) => w.is_valid(g, t, k, q),
        }
    }
}

/// Either at most `k` edges piercing `𝒯_{φ,Φ,c}`, or a member of `F_{T,k+1}^q` in `g`
/// amalgamated from sunflowers on a tuple violating the neighbor condition.
pub fn pierce_or_witness(
    g: &SimpleGraph,
    t: &Tree,
    k: usize,
    q: usize,
    c: usize,
    fam: &MonomorphismFamily,
    phi: &Monomorphism,
) -> Result<Certificate, PiercingError> {
    if q < 2 {
        return Err(PiercingError::PetalCount(q));
    }
    if fam.pattern() != t.graph() || fam.host() != g {
        return Err(PiercingError::Mismatch);
    }
    if !fam.contains(phi) {
        return Err(PiercingError::NotAMember);
    }
    let sys = highly_extendable_subtrees(phi, fam, c)?;
    if let Some(edges) = min_edge_piercing(&sys).filter(|e| e.len() <= k) {
        return Ok(Certificate::Piercing(PiercingSet::from_edges(edges)));
    }
    let masks = sys.member_masks();
    let closed: Vec<u64> = masks.iter().map(|&m| m | neighborhood_mask(t, m)).collect();
    let mut tried = 0;
    let mut result = None;
    let mut cur = Vec::new();
    violating_tuples(&masks, &closed, k + 1, 0, &mut cur, &mut |tuple| {
        tried += 1;
        match amalgamate(g, t, k, q, fam, phi, &sys, tuple) {
            Some(w) => {
                result = Some(w);
                true
            }
            None => false,
        }
    });
    result
        .map(Certificate::Witness)
        .ok_or(PiercingError::Inconclusive { tuples: tried, q })
}

fn violating_tuples(
    masks: &[u64],
    closed: &[u64],
    need: usize,
    start: usize,
    cur: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if cur.len() == need {
        return f(cur);
    }
    for i in start..masks.len() {
        if cur.iter().all(|&j| closed[i] & masks[j] == 0 && closed[j] & masks[i] == 0) {
            cur.push(i);
            if violating_tuples(masks, closed, need, i + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
    }
    false
}

#[allow(clippy::too_many_arguments)]
fn amalgamate(
    g: &SimpleGraph,
    t: &Tree,
    k: usize,
    q: usize,
    fam: &MonomorphismFamily,
    phi: &Monomorphism,
    sys: &SubtreeSystem,
    tuple: &[usize],
) -> Option<FlowerEmbedding> {
    let mut maps: Vec<Vec<Vertex>> = vec![phi.map().to_vec(); q];
    let mut roots_mask = (0..t.n()).fold(0u64, |m, v| m | 1 << v);
    for &j in tuple {
        let sub = &sys.members()[j];
        let verts = sub.vertices();
        let anchor = phi.image_of_mask(neighborhood_mask(t, sub.mask()));
        let ext = extendable_set(sub, &anchor, fam).ok()?;
        let local = ext.as_family(fam);
        let sf = sunflower_extract(&local, q).ok()?;
        roots_mask &= !sub.mask();
        roots_mask |= sf.roots.iter().fold(0u64, |m, &r| m | 1 << verts[r]);
        for (p, petal) in sf.maps.iter().enumerate() {
            for (i, &x) in verts.iter().enumerate() {
                maps[p][x] = petal.get(i);
            }
        }
    }
    let w = FlowerEmbedding {
        roots: mask_vertices(roots_mask),
        maps: maps
            .into_iter()
            .map(|m| Monomorphism::new(t, g, m))
            .collect::<Result<_, _>>()
            .ok()?,
    };
    w.is_valid(g, t, k, q).then_some(w)
}

/// `2k` subtrees of a path with their matching, stored 0-based as intervals `[l_i, r_i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NiceTuple {
    pub trees: Vec<(Vertex, Vertex)>,
    pub matching: Vec<Edge>,
}

impl NiceTuple {
    pub fn k(&self) -> usize {
        self.matching.len()
    }

    fn x(&self) -> Vec<Vertex> {
        self.matching.iter().flat_map(|&(u, v)| [u, v]).collect()
    }

    /// Properties O1 to O5, stated with 1-based indices `i = 1..2k` (odd `i` is 0-based even).
    pub fn observations(&self) -> [bool; 5] {
        let x = self.x();
        let tr = &self.trees;
        let m = tr.len();
        let o1 = tr.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1);
        let mut o2 = true;
        let mut o4 = true;
        let mut o5 = true;
        for i in 0..m {
            for j in i + 1..m {
                o2 &= x[i] < tr[j].0 && tr[j].0 <= tr[j].1 && tr[i].0 <= tr[i].1 && tr[i].1 < x[j];
                if i + 1 < j {
                    o4 &= tr[i].1 + 1 < tr[j].0;
                }
                if tr[i].1 >= tr[j].0 && tr[j].1 >= tr[i].0 {
                    o5 &= j == i + 1 && i % 2 == 1;
                }
            }
        }
        let o3 = (0..m).all(|i| {
            if i % 2 == 0 {
                tr[i].1 == x[i] && tr[i].1 + 1 == tr[i + 1].0
            } else {
                tr[i].0 == x[i]
            }
        });
        [o1, o2, o3, o4, o5]
    }
}

fn interval(mask: u64) -> (Vertex, Vertex) {
    (mask.trailing_zeros() as usize, 63 - mask.leading_zeros() as usize)
}

/// The nice tuple induced by `matching` on a path host: member `i` contains `x̂_i` and no
/// other matched vertex and is minimal in the system.
pub fn find_nice_tuple(sys: &SubtreeSystem, matching: &[Edge]) -> Result<Option<NiceTuple>, PiercingError> {
    let tree = sys.host();
    if !tree.is_canonical_path() {
        return Err(PiercingError::BadMatching);
    }
    let x: Vec<Vertex> = matching.iter().flat_map(|&(u, v)| [u.min(v), u.max(v)]).collect();
    let ok = matching.iter().all(|&(u, v)| u.max(v) == u.min(v) + 1 && u.max(v) < tree.n())
        && x.windows(2).all(|w| w[0] < w[1]);
    if !ok {
        return Err(PiercingError::BadMatching);
    }
    let masks = sys.member_masks();
    let minimal: Vec<u64> = masks
        .iter()
        .copied()
        .filter(|&s| !masks.iter().any(|&o| o != s && o & !s == 0))
        .collect();
    let mut trees = Vec::with_capacity(x.len());
    for (i, &xi) in x.iter().enumerate() {
        let pick = minimal
            .iter()
            .copied()
            .filter(|&s| s >> xi & 1 == 1 && x.iter().enumerate().all(|(j, &xj)| j == i || s >> xj & 1 == 0))
            .min_by_key(|&s| (s.count_ones(), s));
        match pick {
            Some(s) => trees.push(interval(s)),
            None => return Ok(None),
        }
    }
    Ok(Some(NiceTuple {
        trees,
        matching: x.chunks(2).map(|p| (p[0], p[1])).collect(),
    }))
}

/// 0-based index of an interior tuple member with `|V(T_i)| <= (t-3)/(k-1) - 1`,
/// scanning the interstitial intervals first.
pub fn small_tree_locate(tuple: &NiceTuple, t: usize, k: usize) -> Result<usize, PiercingError> {
    if k < 3 || t % (k - 1) == 2 % (k - 1) {
        return Err(PiercingError::Precondition { t, k });
    }
    let m = tuple.trees.len();
    let fits = |i: usize| {
        let (l, r) = tuple.trees[i];
        (r - l + 2) * (k - 1) + 3 <= t
    };
    // 1-based index i even (0-based odd), I_i = [l_i + 1, r_{i+1} - 1]
    let by_gap = (1..m.saturating_sub(1)).step_by(2).min_by_key(|&i| {
        let lo = tuple.trees[i].0 + 1;
        let hi = tuple.trees[i + 1].1;
        hi.saturating_sub(lo)
    });
    if let Some(i) = by_gap.filter(|&i| fits(i)) {
        return Ok(i);
    }
    (1..m.saturating_sub(1)).find(|&i| fits(i)).ok_or(PiercingError::NoSmallTree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::canonical_family;

    fn system(t: Tree, lists: &[&[usize]]) -> SubtreeSystem {
        let lists: Vec<Vec<usize>> = lists.iter().map(|l| l.to_vec()).collect();
        SubtreeSystem::from_vertex_lists(t, &lists).unwrap()
    }

    fn brute_min_edges(sys: &SubtreeSystem) -> Option<usize> {
        let edges = sys.host().edges();
        let masks = sys.member_masks();
        (0..=edges.len()).find(|&s| {
            let mut found = false;
            for_each_combination(edges.len(), s, &mut |idx| {
                let span = idx.iter().fold(0u64, |m, &i| m | 1 << edges[i].0 | 1 << edges[i].1);
                found = masks.iter().all(|&m| m & span != 0);
                found
            });
            found
        })
    }

    #[test]
    fn pierces_examples() {
        let p3 = Tree::path(3);
        assert!(pierces(&PiercingSet::default(), &system(p3.clone(), &[])));
        let s = system(p3, &[&[0]]);
        assert!(pierces(&PiercingSet::from_edges(vec![(0, 1)]), &s));
        assert!(!pierces(&PiercingSet::from_edges(vec![(1, 2)]), &s));
    }

    #[test]
    fn min_edge_examples() {
        let s = system(Tree::path(6), &[&[0], &[1, 2], &[4, 5]]);
        assert_eq!(min_edge_piercing(&s), Some(vec![(0, 1), (4, 5)]));
        assert_eq!(proof_recursion_piercing(&s, 2).map(|e| e.len()), Some(2));
        assert_eq!(proof_recursion_piercing(&s, 1), None);
        let s = system(Tree::path(5), &[&[0], &[2], &[4]]);
        assert_eq!(min_edge_piercing(&s).unwrap().len(), 3);
        let s = system(Tree::path(5), &[&[0, 1, 2, 3, 4]]);
        assert_eq!(min_edge_piercing(&s), Some(vec![(0, 1)]));
        assert_eq!(min_edge_piercing(&system(Tree::path(1), &[&[0]])), None);
    }

    #[test]
    fn solvers_agree_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let t = random_tree(rng.gen_range(1..=8), &mut rng);
            let members = (0..rng.gen_range(0..6)).map(|_| random_subtree(&t, &mut rng)).collect();
            let sys = SubtreeSystem::new(t, members).unwrap();
            let exact = min_edge_piercing(&sys);
            assert_eq!(exact.as_ref().map(Vec::len), brute_min_edges(&sys));
            if let Some(e) = &exact {
                assert!(pierces(&PiercingSet::from_edges(e.clone()), &sys));
                let rec = proof_recursion_piercing(&sys, e.len()).unwrap();
                assert_eq!(rec.len(), e.len());
                assert!(pierces(&PiercingSet::from_edges(rec), &sys));
            }
        }
    }

    #[test]
    fn helly_examples() {
        let s = system(Tree::path(5), &[&[0], &[2], &[4]]);
        let r = edge_helly_check(&s, 2);
        assert!(!r.local_ok && !r.global_ok && r.verdict);
        assert_eq!(r.local_witness, Some(vec![0, 1, 2]));
        let r = edge_helly_check(&s, 3);
        assert!(r.local_ok && r.global_ok && r.verdict);
    }

    #[test]
    fn neighbor_examples() {
        let s = system(Tree::path(10), &[&[0], &[3], &[6], &[9]]);
        assert_eq!(neighbor_condition_check(&s, 3).violation, Some(vec![0, 1, 2, 3]));
        let s = system(Tree::star(4), &[&[0], &[0, 1], &[0, 2, 3]]);
        assert!((0..4).all(|k| neighbor_condition_check(&s, k).holds || k == 0));
        let (_, fam) = canonical_family(&FlowerSpec::new(SimpleGraph::path(5), vec![2, 3], 3).unwrap());
        let sys = highly_extendable_subtrees(&fam.members()[0], &fam, 3).unwrap();
        let r = neighbor_condition_check(&sys, 1);
        assert!(!r.holds);
    }

    #[test]
    fn mixed_examples() {
        let s = system(Tree::path(5), &[&[0], &[2], &[4]]);
        assert_eq!(mixed_piercing_search(&s, 1, 1), None);
        let p = mixed_piercing_search(&s, 1, 2).unwrap();
        assert!(pierces(&p, &s));
        let p = mixed_piercing_search(&s, 0, 3).unwrap();
        assert_eq!(p.vertices, vec![0, 2, 4]);
        assert!(mixed_piercing_search(&s, 3, 0).is_some());
    }

    #[test]
    fn probe_classical_cases() {
        for (a, b, h) in [(1, 0, 2), (2, 0, 3), (0, 1, 2)] {
            let cfg = ProbeConfig {
                min_vertices: 1,
                max_vertices: 7,
                max_members: 6,
                a,
                b,
                h,
                trials: 300,
                seed: 5,
            };
            assert_eq!(mixed_helly_probe(&cfg).counterexample, None);
        }
    }

    #[test]
    fn pierce_or_witness_examples() {
        let m = 3;
        let spec = FlowerSpec::new(SimpleGraph::path(5), vec![2, 3], m).unwrap();
        let (fl, fam) = canonical_family(&spec);
        let t = Tree::path(5);
        let phi = fam.members()[0].clone();
        let cert = pierce_or_witness(&fl.graph, &t, 1, 2, m, &fam, &phi).unwrap();
        assert!(matches!(cert, Certificate::Witness(_)));
        assert!(cert.is_valid(&fl.graph, &t, 1, 2, m, &fam, &phi));
        let cert = pierce_or_witness(&fl.graph, &t, 2, 2, m, &fam, &phi).unwrap();
        assert!(matches!(&cert, Certificate::Piercing(p) if p.edges.len() == 2));
        assert!(cert.is_valid(&fl.graph, &t, 2, 2, m, &fam, &phi));
        let single = fam.subset(&[0]);
        let cert = pierce_or_witness(&fl.graph, &t, 1, 2, 2, &single, &phi).unwrap();
        assert_eq!(cert, Certificate::Piercing(PiercingSet::default()));
    }

    #[test]
    fn nice_tuple_example() {
        let s = system(Tree::path(7), &[&[0, 1], &[2, 3], &[4], &[5, 6]]);
        let tuple = find_nice_tuple(&s, &[(1, 2), (4, 5)]).unwrap().unwrap();
        assert_eq!(tuple.trees, vec![(0, 1), (2, 3), (4, 4), (5, 6)]);
        assert_eq!(tuple.observations(), [true; 5]);
        let s = system(Tree::path(7), &[&[0, 1, 2], &[2, 3], &[4], &[5, 6]]);
        assert_eq!(find_nice_tuple(&s, &[(1, 2), (4, 5)]).unwrap(), None);
        assert!(find_nice_tuple(&s, &[(1, 3)]).is_err());
    }

    #[test]
    fn small_tree_preconditions() {
        let s = system(Tree::path(9), &[&[0], &[1], &[3], &[4], &[5], &[6], &[7], &[8]]);
        let tuple = find_nice_tuple(&s, &[(0, 1), (3, 4), (5, 6), (7, 8)]).unwrap().unwrap();
        let i = small_tree_locate(&tuple, 9, 4).unwrap();
        assert!(i > 0 && i < 7);
        assert!(small_tree_locate(&tuple, 8, 3).is_err());
        assert!(small_tree_locate(&tuple, 9, 2).is_err());
    }
}
