//! Monomorphism families: copy counting, distinguishing families, sunflower
//! extraction, extendable sets, highly extendable subtrees, pseudo-piercing
//! and refinement-sequence condition checks.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{mask_vertices, MaskIter};
use crate::constructions::{flower, Flower, FlowerSpec};
use crate::graph::{
    components_after_removal, enumerate_subtrees, neighborhood_mask, Edge, SimpleGraph, Subtree, SubtreeSystem,
    Tree, Vertex, MAX_SUBTREE_HOST,
};
use crate::piercing::PiercingSet;
use crate::search::{is_isomorphic, is_monomorphism, Matcher};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountingError {
    #[error("map {0:?} is not a monomorphism of the pattern into the host")]
    NotAMonomorphism(Vec<Vertex>),
    #[error("pattern must be a tree with at most 64 vertices")]
    PatternNotTree,
    #[error("sunflower extraction needs q >= 2, got {0}")]
    PetalCount(usize),
    #[error("no {q} maps form a sunflower among {distinct} distinct maps")]
    SunflowerNotFound { q: usize, distinct: usize },
    #[error("levels disagree on pattern or host")]
    MismatchedLevels,
    #[error("expected {expected} level constants, got {found}")]
    ConstantCount { expected: usize, found: usize },
    #[error("partition has {found} entries for a host on {expected} vertices")]
    PartitionLength { expected: usize, found: usize },
}

/// Injective homomorphism stored as `map[pattern vertex] = host vertex`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomorphism(Vec<Vertex>);

impl Monomorphism {
    pub fn new(pattern: &SimpleGraph, host: &SimpleGraph, map: Vec<Vertex>) -> Result<Self, CountingError> {
        if !is_monomorphism(pattern, host, &map) {
            return Err(CountingError::NotAMonomorphism(map));
        }
        Ok(Monomorphism(map))
    }

    pub fn map(&self) -> &[Vertex] {
        &self.0
    }

    pub fn get(&self, x: Vertex) -> Vertex {
        self.0[x]
    }

    /// Sorted image of the pattern vertices in `mask`.
    pub fn image_of_mask(&self, mask: u64) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = MaskIter(mask).map(|x| self.0[x]).collect();
        out.sort_unstable();
        out
    }

    pub fn restrict(&self, vertices: &[Vertex]) -> Vec<Vertex> {
        vertices.iter().map(|&x| self.0[x]).collect()
    }
}

/// Monomorphisms sharing a pattern and host, with an optional distinguishing partition
/// (`partition[v]` is the pattern vertex whose class contains host vertex `v`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomorphismFamily {
    pattern: SimpleGraph,
    host: SimpleGraph,
    members: Vec<Monomorphism>,
    partition: Option<Vec<Vertex>>,
}

impl MonomorphismFamily {
    pub fn new(pattern: SimpleGraph, host: SimpleGraph, maps: Vec<Vec<Vertex>>) -> Result<Self, CountingError> {
        let members = maps
            .into_iter()
            .map(|m| Monomorphism::new(&pattern, &host, m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MonomorphismFamily {
            pattern,
            host,
            members,
            partition: None,
        })
    }

    pub(crate) fn from_parts(pattern: SimpleGraph, host: SimpleGraph, members: Vec<Monomorphism>) -> Self {
        MonomorphismFamily {
            pattern,
            host,
            members,
            partition: None,
        }
    }

    /// Attaches a partition witness; it must have one entry per host vertex.
    pub fn with_partition(mut self, partition: Vec<Vertex>) -> Result<Self, CountingError> {
        if partition.len() != self.host.n() {
            return Err(CountingError::PartitionLength {
                expected: self.host.n(),
                found: partition.len(),
            });
        }
        self.partition = Some(partition);
        Ok(self)
    }

    pub fn pattern(&self) -> &SimpleGraph {
        &self.pattern
    }

    pub fn host(&self) -> &SimpleGraph {
        &self.host
    }

    pub fn members(&self) -> &[Monomorphism] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn partition(&self) -> Option<&[Vertex]> {
        self.partition.as_deref()
    }

    pub fn contains(&self, phi: &Monomorphism) -> bool {
        self.members.contains(phi)
    }

    /// Members at `indices`; the partition witness is kept.
    pub fn subset(&self, indices: &[usize]) -> MonomorphismFamily {
        MonomorphismFamily {
            pattern: self.pattern.clone(),
            host: self.host.clone(),
            members: indices.iter().map(|&i| self.members[i].clone()).collect(),
            partition: self.partition.clone(),
        }
    }

    /// Whether every member's images respect the attached partition.
    pub fn partition_is_witness(&self) -> bool {
        match &self.partition {
            None => false,
            Some(p) => self
                .members
                .iter()
                .all(|m| m.map().iter().enumerate().all(|(x, &v)| p[v] == x)),
        }
    }

    fn pattern_tree(&self) -> Result<Tree, CountingError> {
        if self.pattern.n() > MAX_SUBTREE_HOST {
            return Err(CountingError::PatternNotTree);
        }
        Tree::new(self.pattern.clone()).map_err(|_| CountingError::PatternNotTree)
    }
}

/// All monomorphisms in search order, or the first `cap` with a truncation flag.
pub fn enumerate_monomorphisms(h: &SimpleGraph, g: &SimpleGraph, cap: Option<usize>) -> (Vec<Monomorphism>, bool) {
    let (maps, truncated) = Matcher::new(h, g).collect(cap);
    (maps.into_iter().map(Monomorphism).collect(), truncated)
}

pub fn mon(h: &SimpleGraph, g: &SimpleGraph) -> u64 {
    Matcher::new(h, g).count()
}

/// Size of the automorphism group.
pub fn aut(h: &SimpleGraph) -> u64 {
    mon(h, h)
}

/// Copies of `h` in `g` as `mon(h, g) / aut(h)`.
pub fn count_copies(h: &SimpleGraph, g: &SimpleGraph) -> u64 {
    mon(h, g) / aut(h)
}

/// Monomorphisms of the pattern into its flower that send every pattern vertex to a
/// flower vertex with the same provenance label.
pub fn canonical_family(spec: &FlowerSpec) -> (Flower, MonomorphismFamily) {
    let fl = flower(spec);
    let h = spec.pattern();
    let domains = (0..h.n())
        .map(|x| {
            let mut d = crate::bits::BitSet::new(fl.graph.n());
            for (v, l) in fl.labels.iter().enumerate() {
                if l.pattern_vertex() == x {
                    d.insert(v);
                }
            }
            d
        })
        .collect();
    let (maps, _) = Matcher::with_domains(h, &fl.graph, domains).collect(None);
    let partition = fl.labels.iter().map(|l| l.pattern_vertex()).collect();
    let fam = MonomorphismFamily::from_parts(h.clone(), fl.graph.clone(), maps.into_iter().map(Monomorphism).collect())
        .with_partition(partition)
        .expect("one label per flower vertex");
    (fl, fam)
}

pub fn is_distinguishing(fam: &MonomorphismFamily) -> bool {
    maps_are_distinguishing(fam.host.n(), fam.members.iter().map(Monomorphism::map))
}

fn maps_are_distinguishing<'a>(host_n: usize, maps: impl Iterator<Item = &'a [Vertex]>) -> bool {
    let mut owner = vec![usize::MAX; host_n];
    for m in maps {
        for (x, &v) in m.iter().enumerate() {
            if owner[v] == usize::MAX {
                owner[v] = x;
            } else if owner[v] != x {
                return false;
            }
        }
    }
    true
}

/// Distinguishing subfamily of `Mon(h, g)` of size at least `v(h)^{-v(h)} mon(h, g)`.
///
/// Seeded random partitions are tried first; if none reaches the bound the
/// partition is built by conditional expectations, which always does.
pub fn extract_distinguishing(h: &SimpleGraph, g: &SimpleGraph, seed: u64) -> MonomorphismFamily {
    let (all, _) = Matcher::new(h, g).collect(None);
    let v = h.n();
    let total = all.len() as u128;
    let scale = (v as u128).checked_pow(v as u32).unwrap_or(u128::MAX);
    let keep = |part: &[Vertex]| -> Vec<Monomorphism> {
        all.iter()
            .filter(|m| m.iter().enumerate().all(|(x, &w)| part[w] == x))
            .map(|m| Monomorphism(m.clone()))
            .collect()
    };
    let finish = |members: Vec<Monomorphism>, part: Vec<Vertex>| {
        MonomorphismFamily::from_parts(h.clone(), g.clone(), members)
            .with_partition(part)
            .expect("one class per host vertex")
    };
    if all.is_empty() || v == 0 {
        let members = all.iter().map(|m| Monomorphism(m.clone())).collect();
        return finish(members, vec![0; g.n()]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tries = scale.saturating_mul(64).min(u64::MAX as u128) as u64;
    for _ in 0..tries {
        let part: Vec<Vertex> = (0..g.n()).map(|_| rng.gen_range(0..v)).collect();
        let members = keep(&part);
        if (members.len() as u128).saturating_mul(scale) >= total {
            return finish(members, part);
        }
    }
    let part = conditional_expectation_partition(&all, v, g.n());
    let members = keep(&part);
    finish(members, part)
}

/// Assigns host vertices one at a time to the class maximizing
/// `sum over consistent maps of v^(v - unassigned images)`.
fn conditional_expectation_partition(all: &[Vec<Vertex>], v: usize, host_n: usize) -> Vec<Vertex> {
    let pow: Vec<u128> = (0..=v as u32).map(|e| (v as u128).saturating_pow(e)).collect();
    let mut part = vec![usize::MAX; host_n];
    let mut alive = vec![true; all.len()];
    let mut unassigned = vec![v; all.len()];
    let mut hits: Vec<Vec<(usize, Vertex)>> = vec![Vec::new(); host_n];
    for (i, m) in all.iter().enumerate() {
        for (x, &w) in m.iter().enumerate() {
            hits[w].push((i, x));
        }
    }
    for w in 0..host_n {
        let mut best = (0u128, 0usize);
        for c in 0..v {
            let mut total = 0u128;
            for (i, _) in alive.iter().enumerate().filter(|(_, &a)| a) {
                let mut u = unassigned[i];
                let mut ok = true;
                if let Some(&(_, x)) = hits[w].iter().find(|&&(j, _)| j == i) {
                    ok = x == c;
                    u -= 1;
                }
                if ok {
                    total = total.saturating_add(pow[v - u]);
                }
            }
            if c == 0 || total > best.0 {
                best = (total, c);
            }
        }
        let c = best.1;
        part[w] = c;
        for &(i, x) in &hits[w] {
            if x != c {
                alive[i] = false;
            }
            unassigned[i] -= 1;
        }
    }
    part
}

/// `q` maps agreeing exactly on `roots` and image-disjoint elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sunflower {
    pub roots: Vec<Vertex>,
    pub maps: Vec<Monomorphism>,
}

/// Union of the graph-images of `maps`, relabeled by sorted host vertex.
pub fn graph_image_union(pattern: &SimpleGraph, maps: &[Monomorphism]) -> SimpleGraph {
    let verts: BTreeSet<Vertex> = maps.iter().flat_map(|m| m.map().iter().copied()).collect();
    let index: BTreeMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges: Vec<Edge> = maps
        .iter()
        .flat_map(|m| pattern.edges().into_iter().map(|(x, y)| (index[&m.get(x)], index[&m.get(y)])))
        .collect();
    SimpleGraph::from_edges(verts.len(), &edges).expect("image edges are in range")
}

impl Sunflower {
    /// Pairwise agreement exactly on the kernel, and the union of images is the flower.
    pub fn is_valid(&self, pattern: &SimpleGraph, host: &SimpleGraph) -> bool {
        let q = self.maps.len();
        if q < 2 || !self.maps.iter().all(|m| is_monomorphism(pattern, host, m.map())) {
            return false;
        }
        let mut in_root = vec![false; pattern.n()];
        for &r in &self.roots {
            in_root[r] = true;
        }
        for i in 0..q {
            for j in i + 1..q {
                let (a, b) = (&self.maps[i], &self.maps[j]);
                for x in 0..pattern.n() {
                    for y in 0..pattern.n() {
                        let equal = a.get(x) == b.get(y);
                        if equal != (x == y && in_root[x]) {
                            return false;
                        }
                    }
                }
            }
        }
        let Ok(spec) = FlowerSpec::new(pattern.clone(), self.roots.clone(), q) else {
            return false;
        };
        is_isomorphic(&graph_image_union(pattern, &self.maps), &flower(&spec).graph)
    }
}

/// Sunflower of `q` distinct members, searching kernels among the pairwise agreement
/// sets (and the empty set) by size, then lexicographically.
pub fn sunflower_extract(fam: &MonomorphismFamily, q: usize) -> Result<Sunflower, CountingError> {
    if q < 2 {
        return Err(CountingError::PetalCount(q));
    }
    let distinct: Vec<&Monomorphism> = fam.members.iter().collect::<BTreeSet<_>>().into_iter().collect();
    let not_found = CountingError::SunflowerNotFound {
        q,
        distinct: distinct.len(),
    };
    if distinct.len() < q {
        return Err(not_found);
    }
    let n = fam.pattern.n();
    let mut kernels: BTreeSet<Vec<Vertex>> = BTreeSet::from([Vec::new()]);
    for i in 0..distinct.len() {
        for j in i + 1..distinct.len() {
            let agree: Vec<Vertex> = (0..n).filter(|&x| distinct[i].get(x) == distinct[j].get(x)).collect();
            kernels.insert(agree);
        }
    }
    let mut kernels: Vec<Vec<Vertex>> = kernels.into_iter().collect();
    kernels.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for r in kernels {
        let outside: Vec<Vertex> = (0..n).filter(|x| !r.contains(x)).collect();
        let mut groups: BTreeMap<Vec<Vertex>, Vec<usize>> = BTreeMap::new();
        for (i, m) in distinct.iter().enumerate() {
            groups.entry(m.restrict(&r)).or_default().push(i);
        }
        for idx in groups.values().filter(|g| g.len() >= q) {
            let images: Vec<Vec<Vertex>> = idx
                .iter()
                .map(|&i| {
                    let mut im = distinct[i].restrict(&outside);
                    im.sort_unstable();
                    im
                })
                .collect();
            if let Some(chosen) = disjoint_selection(&images, q) {
                let sf = Sunflower {
                    roots: r.clone(),
                    maps: chosen.iter().map(|&c| distinct[idx[c]].clone()).collect(),
                };
                if sf.is_valid(&fam.pattern, &fam.host) {
                    return Ok(sf);
                }
            }
        }
    }
    Err(not_found)
}

fn sorted_disjoint(a: &[Vertex], b: &[Vertex]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Indices of `need` pairwise disjoint sorted sets, lexicographically first.
pub(crate) fn disjoint_selection(sets: &[Vec<Vertex>], need: usize) -> Option<Vec<usize>> {
    fn go(sets: &[Vec<Vertex>], need: usize, start: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == need {
            return true;
        }
        if sets.len() - start < need - chosen.len() {
            return false;
        }
        for i in start..sets.len() {
            if chosen.iter().all(|&c| sorted_disjoint(&sets[c], &sets[i])) {
                chosen.push(i);
                if go(sets, need, i + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    go(sets, need, 0, &mut chosen).then_some(chosen)
}

/// `Ψ(T', S; Φ)`: restrictions to `V(T')` (in vertex order) of members with `φ(N(T')) = S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendableSet {
    pub subtree: Vec<Vertex>,
    pub anchor_image: Vec<Vertex>,
    pub restrictions: Vec<Vec<Vertex>>,
}

impl ExtendableSet {
    pub fn len(&self) -> usize {
        self.restrictions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.restrictions.is_empty()
    }

    /// The restrictions as a family of the subtree (relabeled `0..|T'|`) into the host.
    pub fn as_family(&self, fam: &MonomorphismFamily) -> MonomorphismFamily {
        let pattern = fam.pattern.induced(&self.subtree);
        let members = self.restrictions.iter().cloned().map(Monomorphism).collect();
        MonomorphismFamily::from_parts(pattern, fam.host.clone(), members)
    }
}

pub fn extendable_set(sub: &Subtree, s: &[Vertex], fam: &MonomorphismFamily) -> Result<ExtendableSet, CountingError> {
    let tree = fam.pattern_tree()?;
    Ok(extendable_in(&tree, sub.mask(), s, fam))
}

fn extendable_in(tree: &Tree, mask: u64, s: &[Vertex], fam: &MonomorphismFamily) -> ExtendableSet {
    let nb = neighborhood_mask(tree, mask);
    let mut anchor = s.to_vec();
    anchor.sort_unstable();
    let vertices = mask_vertices(mask);
    let restrictions: BTreeSet<Vec<Vertex>> = fam
        .members
        .iter()
        .filter(|m| m.image_of_mask(nb) == anchor)
        .map(|m| m.restrict(&vertices))
        .collect();
    ExtendableSet {
        subtree: vertices,
        anchor_image: anchor,
        restrictions: restrictions.into_iter().collect(),
    }
}

fn extendable_count(tree: &Tree, mask: u64, phi: &Monomorphism, fam: &MonomorphismFamily) -> usize {
    let nb = neighborhood_mask(tree, mask);
    let anchor = phi.image_of_mask(nb);
    let vertices = mask_vertices(mask);
    fam.members
        .iter()
        .filter(|m| m.image_of_mask(nb) == anchor)
        .map(|m| m.restrict(&vertices))
        .collect::<HashSet<_>>()
        .len()
}

/// `𝒯_{φ,Φ,C}`: subtrees `T'` of the pattern with `|Ψ(T', φ(N(T')); Φ)| >= c`.
pub fn highly_extendable_subtrees(
    phi: &Monomorphism,
    fam: &MonomorphismFamily,
    c: usize,
) -> Result<SubtreeSystem, CountingError> {
    let tree = fam.pattern_tree()?;
    let members: Vec<Subtree> = enumerate_subtrees(&tree, None)
        .into_iter()
        .filter(|s| extendable_count(&tree, s.mask(), phi, fam) >= c)
        .collect();
    Ok(SubtreeSystem::new(tree, members).expect("enumerated subtrees are valid"))
}

/// Whether `w` `(φ,Φ)`-pseudo-pierces `sub`: some `x̂ ∈ V(T')` has at most `v(T)` images
/// among members agreeing with `φ` on `w` setwise.
pub fn pseudo_pierces(w: &[Vertex], sub: &Subtree, phi: &Monomorphism, fam: &MonomorphismFamily) -> bool {
    let wmask = crate::bits::mask_of(w);
    let agreeing = agreeing_members(wmask, phi, fam);
    pseudo_pierces_with(&agreeing, sub.mask(), fam.pattern.n())
}

fn agreeing_members<'a>(wmask: u64, phi: &Monomorphism, fam: &'a MonomorphismFamily) -> Vec<&'a Monomorphism> {
    let target = phi.image_of_mask(wmask);
    fam.members.iter().filter(|m| m.image_of_mask(wmask) == target).collect()
}

fn pseudo_pierces_with(agreeing: &[&Monomorphism], sub_mask: u64, t: usize) -> bool {
    MaskIter(sub_mask).any(|x| agreeing.iter().map(|m| m.get(x)).collect::<HashSet<_>>().len() <= t)
}

/// Some `(a, b, φ, Φ)`-pseudo-piercing set of `sys`, searched over all edge sets of size
/// at most `a` and vertex sets of size at most `b`.
pub fn find_pseudo_piercing_set(
    sys: &SubtreeSystem,
    phi: &Monomorphism,
    fam: &MonomorphismFamily,
    a: usize,
    b: usize,
) -> Option<PiercingSet> {
    let tree = sys.host();
    let edges = tree.edges();
    let t = tree.n();
    let masks = sys.member_masks();
    let mut found = None;
    for_each_subset(edges.len(), a, &mut |eidx| {
        let espan = eidx.iter().fold(0u64, |m, &i| m | 1 << edges[i].0 | 1 << edges[i].1);
        for_each_subset(t, b, &mut |vidx| {
            let wmask = vidx.iter().fold(espan, |m, &v| m | 1 << v);
            let agreeing = agreeing_members(wmask, phi, fam);
            if masks.iter().all(|&s| pseudo_pierces_with(&agreeing, s, t)) {
                found = Some(PiercingSet {
                    edges: eidx.iter().map(|&i| edges[i]).collect(),
                    vertices: vidx.to_vec(),
                });
                true
            } else {
                false
            }
        })
    });
    found
}

/// Calls `f` on every subset of `0..n` of size at most `max`, by size then lexicographically,
/// until it returns true. Returns whether it stopped early.
pub(crate) fn for_each_subset(n: usize, max: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == size {
            return f(cur);
        }
        for i in start..n {
            if n - i < size - cur.len() {
                break;
            }
            cur.push(i);
            if go(n, size, i + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    for size in 0..=max.min(n) {
        if go(n, size, 0, &mut Vec::with_capacity(size), f) {
            return true;
        }
    }
    false
}

/// Evaluation of the refinement-sequence conditions S1 to S5.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementReport {
    /// `|Φ_1|, ..., |Φ_L|`.
    pub level_sizes: Vec<usize>,
    /// `C_1, ..., C_{L-1}`.
    pub constants: Vec<usize>,
    pub c_prime: usize,
    pub c_double_prime: usize,
    pub mon: u64,
    /// The common system of S2 when one exists.
    pub system: Option<Vec<Vec<Vertex>>>,
    pub s1: bool,
    pub s2: bool,
    pub s3: bool,
    pub s4: bool,
    pub s5: bool,
}

impl RefinementReport {
    pub fn all(&self) -> bool {
        self.s1 && self.s2 && self.s3 && self.s4 && self.s5
    }
}

/// Checks a sequence given as `levels[0] = Φ_1, ..., levels[L-1] = Φ_L` with
/// `constants[i-1] = C_i`. Each flag is evaluated on its own: S3 and S4 use the
/// per-map systems `𝒯_{φ,Φ_i,C_i}` rather than assuming S2.
pub fn check_refinement_conditions(
    levels: &[MonomorphismFamily],
    constants: &[usize],
    c_prime: usize,
    c_double_prime: usize,
    a: usize,
    b: usize,
) -> Result<RefinementReport, CountingError> {
    let first = levels.first().ok_or(CountingError::ConstantCount { expected: 0, found: 0 })?;
    if levels.iter().any(|l| l.pattern != first.pattern || l.host != first.host) {
        return Err(CountingError::MismatchedLevels);
    }
    if constants.len() + 1 != levels.len() {
        return Err(CountingError::ConstantCount {
            expected: levels.len() - 1,
            found: constants.len(),
        });
    }
    let tree = first.pattern_tree()?;
    let subtrees = enumerate_subtrees(&tree, None);
    let system_of = |phi: &Monomorphism, fam: &MonomorphismFamily, c: usize| -> Vec<u64> {
        subtrees
            .iter()
            .filter(|s| extendable_count(&tree, s.mask(), phi, fam) >= c)
            .map(Subtree::mask)
            .collect()
    };

    let nested = levels.windows(2).all(|w| {
        let outer: HashSet<&Monomorphism> = w[0].members.iter().collect();
        w[1].members.iter().all(|m| outer.contains(m))
    });
    let s1 = nested && levels.iter().all(is_distinguishing);

    let chain: Vec<usize> = std::iter::once(c_prime)
        .chain(constants.iter().copied())
        .chain(std::iter::once(c_double_prime))
        .collect();
    let monotone = chain.windows(2).all(|w| w[0] <= w[1]);
    let mut common: Option<Vec<u64>> = None;
    let mut consistent = true;
    for i in 1..levels.len() {
        for phi in &levels[i].members {
            let sys = system_of(phi, &levels[i - 1], constants[i - 1]);
            match &common {
                None => common = Some(sys),
                Some(c) if *c != sys => consistent = false,
                _ => {}
            }
        }
    }
    let s2 = monotone && consistent;

    let mut s3 = true;
    'outer: for i in 1..levels.len() {
        for phi in &levels[i].members {
            let sys = system_of(phi, &levels[i - 1], constants[i - 1]);
            let minimal: Vec<u64> = sys
                .iter()
                .copied()
                .filter(|&s| !sys.iter().any(|&o| o != s && o & !s == 0))
                .collect();
            for m in minimal {
                let ext = extendable_in(&tree, m, &phi.image_of_mask(neighborhood_mask(&tree, m)), first);
                let images: Vec<Vec<Vertex>> = ext
                    .restrictions
                    .iter()
                    .map(|r| {
                        let mut v = r.clone();
                        v.sort_unstable();
                        v
                    })
                    .collect();
                if disjoint_selection(&images, c_prime).is_none() {
                    s3 = false;
                    break 'outer;
                }
            }
        }
    }

    let mut s4 = true;
    'outer4: for i in 1..levels.len() {
        for phi in &levels[i].members {
            let masks = system_of(phi, &levels[i - 1], constants[i - 1]);
            let members = masks.into_iter().map(Subtree::from_mask_unchecked).collect();
            let sys = SubtreeSystem::new_unchecked(tree.clone(), members);
            if find_pseudo_piercing_set(&sys, phi, &levels[i - 1], a, b).is_some() {
                s4 = false;
                break 'outer4;
            }
        }
    }

    let total = mon(&first.pattern, &first.host);
    let last = levels.last().expect("non-empty").len() as u128;
    let s5 = last * c_double_prime as u128 >= total as u128;

    Ok(RefinementReport {
        level_sizes: levels.iter().map(MonomorphismFamily::len).collect(),
        constants: constants.to_vec(),
        c_prime,
        c_double_prime,
        mon: total,
        system: if consistent {
            common.map(|c| c.into_iter().map(mask_vertices).collect())
        } else {
            None
        },
        s1,
        s2,
        s3,
        s4,
        s5,
    })
}

/// Decomposition used to encode a map by its pieces: the low-ambiguity vertices
/// `V̂_{E,U}` and the components of the pattern tree after removing them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EncodingFrame {
    pub low: Vec<Vertex>,
    pub components: Vec<Vec<Vertex>>,
}

/// Frame for the host edges `e` and host vertices `u`, computed over the members of
/// `fam` whose image contains `V(e) ∪ u`.
pub fn encoding_frame(fam: &MonomorphismFamily, e: &[Edge], u: &[Vertex]) -> EncodingFrame {
    let need: BTreeSet<Vertex> = e.iter().flat_map(|&(x, y)| [x, y]).chain(u.iter().copied()).collect();
    let covering: Vec<&Monomorphism> = fam
        .members
        .iter()
        .filter(|m| need.iter().all(|v| m.map().contains(v)))
        .collect();
    let t = fam.pattern.n();
    let low: Vec<Vertex> = (0..t)
        .filter(|&x| covering.iter().map(|m| m.get(x)).collect::<HashSet<_>>().len() <= t)
        .collect();
    EncodingFrame {
        components: components_after_removal(&fam.pattern, &low),
        low,
    }
}

/// `(φ_0, φ_1, ..., φ_m)`: restrictions to the low set and to each component.
pub fn encode_map(frame: &EncodingFrame, phi: &Monomorphism) -> Vec<Vec<Vertex>> {
    std::iter::once(&frame.low)
        .chain(frame.components.iter())
        .map(|part| phi.restrict(part))
        .collect()
}

pub fn decode_map(frame: &EncodingFrame, tuple: &[Vec<Vertex>], t: usize) -> Vec<Vertex> {
    let mut out = vec![usize::MAX; t];
    for (part, images) in std::iter::once(&frame.low).chain(frame.components.iter()).zip(tuple) {
        for (&x, &v) in part.iter().zip(images) {
            out[x] = v;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::FlowerSpec;

    fn p5_flower(m: usize) -> (Flower, MonomorphismFamily) {
        canonical_family(&FlowerSpec::new(SimpleGraph::path(5), vec![2, 3], m).unwrap())
    }

    fn brute_mon(h: &SimpleGraph, g: &SimpleGraph) -> u64 {
        fn rec(h: &SimpleGraph, g: &SimpleGraph, map: &mut Vec<usize>) -> u64 {
            if map.len() == h.n() {
                return is_monomorphism(h, g, map) as u64;
            }
            let mut c = 0;
            for v in 0..g.n() {
                if !map.contains(&v) {
                    map.push(v);
                    c += rec(h, g, map);
                    map.pop();
                }
            }
            c
        }
        rec(h, g, &mut Vec::new())
    }

    #[test]
    fn monomorphism_counts() {
        let k3 = SimpleGraph::complete(3);
        let p3 = SimpleGraph::path(3);
        assert_eq!(mon(&p3, &k3), 6);
        assert_eq!(aut(&p3), 2);
        assert_eq!(count_copies(&p3, &k3), 3);
        let c5 = SimpleGraph::cycle(5);
        assert_eq!(mon(&SimpleGraph::complete(2), &c5), 10);
        for m in 1..=3 {
            let (fl, _) = p5_flower(m);
            assert_eq!(mon(&SimpleGraph::path(5), &fl.graph), brute_mon(&SimpleGraph::path(5), &fl.graph));
        }
    }

    #[test]
    fn canonical_family_size() {
        for m in 1..=4 {
            let (_, fam) = p5_flower(m);
            assert_eq!(fam.len(), m * m);
            assert!(is_distinguishing(&fam));
            assert!(fam.partition_is_witness());
        }
    }

    #[test]
    fn distinguishing_examples() {
        let k2 = SimpleGraph::complete(2);
        let p3 = SimpleGraph::path(3);
        let fam = MonomorphismFamily::new(k2.clone(), p3.clone(), vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert!(!is_distinguishing(&fam));
        assert!(is_distinguishing(&fam.subset(&[0])));
        let c4 = SimpleGraph::cycle(4);
        let d = extract_distinguishing(&k2, &c4, 7);
        assert!(is_distinguishing(&d) && d.partition_is_witness());
        assert!(d.len() * 4 >= 8);
        let d = extract_distinguishing(&p3, &p3, 1);
        assert!(!d.is_empty() && is_distinguishing(&d));
        let none = extract_distinguishing(&SimpleGraph::complete(3), &p3, 3);
        assert!(none.is_empty() && is_distinguishing(&none));
    }

    #[test]
    fn conditional_expectation_meets_bound() {
        let g = SimpleGraph::complete_bipartite(3, 3);
        let h = SimpleGraph::path(4);
        let (all, _) = Matcher::new(&h, &g).collect(None);
        let part = conditional_expectation_partition(&all, 4, g.n());
        let kept = all
            .iter()
            .filter(|m| m.iter().enumerate().all(|(x, &w)| part[w] == x))
            .count();
        assert!(kept as u128 * 256 >= all.len() as u128);
    }

    #[test]
    fn sunflower_examples() {
        let m = 3;
        let (fl, fam) = p5_flower(m);
        let sf = sunflower_extract(&fam, m).unwrap();
        assert_eq!(sf.roots, vec![2, 3]);
        assert!(sf.is_valid(fam.pattern(), &fl.graph));
        let k2 = SimpleGraph::complete(2);
        let matching = SimpleGraph::from_edges(6, &[(0, 1), (2, 3), (4, 5)]).unwrap();
        let fam = MonomorphismFamily::new(k2.clone(), matching, vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        assert_eq!(sunflower_extract(&fam, 3).unwrap().roots, Vec::<usize>::new());
        let same = MonomorphismFamily::new(k2.clone(), SimpleGraph::path(2), vec![vec![0, 1]; 3]).unwrap();
        assert!(matches!(
            sunflower_extract(&same, 2),
            Err(CountingError::SunflowerNotFound { distinct: 1, .. })
        ));
        assert_eq!(sunflower_extract(&same, 1), Err(CountingError::PetalCount(1)));
    }

    #[test]
    fn extendable_examples() {
        let m = 3;
        let (fl, fam) = p5_flower(m);
        let tree = Tree::path(5);
        let phi = &fam.members()[0];
        let left = Subtree::new(&tree, &[0, 1]).unwrap();
        let ext = extendable_set(&left, &[phi.get(2)], &fam).unwrap();
        assert_eq!(ext.len(), m);
        let whole = Subtree::new(&tree, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(extendable_set(&whole, &[], &fam).unwrap().len(), fam.len());
        let missing = extendable_set(&left, &[fl.graph.n() - 1], &fam).unwrap();
        assert!(missing.is_empty());
    }

    #[test]
    fn highly_extendable_examples() {
        let m = 3;
        let (_, fam) = p5_flower(m);
        let phi = &fam.members()[0];
        let sys = highly_extendable_subtrees(phi, &fam, m).unwrap();
        let mut got: Vec<Vec<usize>> = sys.members().iter().map(Subtree::vertices).collect();
        got.sort();
        let mut expected = vec![
            vec![0, 1],
            vec![0, 1, 2],
            vec![0, 1, 2, 3],
            vec![0, 1, 2, 3, 4],
            vec![1, 2, 3, 4],
            vec![2, 3, 4],
            vec![3, 4],
            vec![4],
        ];
        expected.sort();
        assert_eq!(got, expected);
        assert_eq!(highly_extendable_subtrees(phi, &fam, 1).unwrap().len(), 15);
        assert!(highly_extendable_subtrees(phi, &fam, fam.len() + 1).unwrap().is_empty());
    }

    #[test]
    fn pseudo_piercing_examples() {
        let m = 6;
        let (_, fam) = p5_flower(m);
        let tree = Tree::path(5);
        let phi = &fam.members()[0];
        let left = Subtree::new(&tree, &[0, 1]).unwrap();
        assert!(pseudo_pierces(&[1], &left, phi, &fam));
        assert!(!pseudo_pierces(&[], &left, phi, &fam));
        let small = fam.subset(&[0, 1, 2]);
        assert!(enumerate_subtrees(&tree, None)
            .iter()
            .all(|s| pseudo_pierces(&[], s, &small.members()[0], &small)));
        let sys = highly_extendable_subtrees(phi, &fam, m).unwrap();
        assert!(find_pseudo_piercing_set(&sys, phi, &fam, 0, 1).is_none());
        assert!(find_pseudo_piercing_set(&sys, phi, &fam, 2, 0).is_some());
    }

    #[test]
    fn refinement_examples() {
        let (_, fam) = p5_flower(3);
        let single = check_refinement_conditions(std::slice::from_ref(&fam), &[], 1, 1, 0, 0).unwrap();
        assert!(single.s1 && single.s4);
        let (_, wide) = p5_flower(6);
        let inner = wide.subset(&[0, 7, 14, 21, 28, 35]);
        let report = check_refinement_conditions(&[wide.clone(), inner.clone()], &[6], 6, 6, 1, 0).unwrap();
        assert!(report.s1 && report.s2 && report.s3 && report.s4);
        assert_eq!(report.system.as_ref().unwrap().len(), 8);
        assert!(!report.s5);
        let big = report.mon as usize;
        let report = check_refinement_conditions(&[wide.clone(), inner.clone()], &[6], 6, big, 1, 0).unwrap();
        assert!(report.all());
        let report = check_refinement_conditions(&[wide.clone(), inner.clone()], &[6], 6, big, 2, 0).unwrap();
        assert!(!report.s4);
        let small = check_refinement_conditions(&[fam.clone(), fam.subset(&[0, 4, 8])], &[3], 3, 3, 1, 0).unwrap();
        assert!(!small.s4);
        let inner = fam.subset(&[0, 4, 8]);
        let bad = check_refinement_conditions(&[inner.clone(), fam.clone()], &[3], 3, 3, 1, 0).unwrap();
        assert!(!bad.s1);
    }

    #[test]
    fn encoding_reconstructs() {
        let (fl, fam) = p5_flower(3);
        let edges = fl.graph.edges();
        for &e in edges.iter().take(4) {
            let frame = encoding_frame(&fam, &[e], &[]);
            for phi in fam.members() {
                let tuple = encode_map(&frame, phi);
                assert_eq!(decode_map(&frame, &tuple, 5), phi.map());
            }
        }
    }
}
