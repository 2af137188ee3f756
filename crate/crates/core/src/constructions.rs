//! Flower powers, the family `F_{H,k}^q`, theta graphs, leaf duplication,
//! diameter root sets and theta subgraphs inside path flowers.
//!
//! Flower vertices are labeled roots first (in pattern order), then copy
//! `p = 0..q` with its non-root vertices in pattern order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{component_count, components_after_removal, tree_metrics, GraphError, SimpleGraph, Tree, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("root {root} is not a vertex of a {n}-vertex pattern")]
    RootOutOfRange { root: Vertex, n: usize },
    #[error("the root set must be a proper subset of the pattern's vertices")]
    RootsNotProper,
    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("theta parameters must all be at least 1, got ({a}, {b}, {c})")]
    InvalidTheta { a: usize, b: usize, c: usize },
    #[error("leaf duplication needs a tree with at least 3 vertices (K1 and K2 do not stay trees), got {0}")]
    TooSmallForDuplication(usize),
    #[error("diameter {diameter} is below 2k = {}", 2 * .k)]
    DiameterTooSmall { diameter: usize, k: usize },
    #[error("k must be at least {min}, got {k}")]
    KTooSmall { k: usize, min: usize },
    #[error("pattern is not a path labeled in path order")]
    NotAPath,
    #[error("path on {t} vertices is too short for k = {k}: need t >= 2k + 1")]
    PathTooShort { t: usize, k: usize },
    #[error("roots {roots:?} leave {components} components, need at least {needed}")]
    NotInFamily {
        roots: Vec<Vertex>,
        components: usize,
        needed: usize,
    },
    #[error("no interior component with at most {max} vertices for roots {roots:?}")]
    NoThetaComponent { roots: Vec<Vertex>, max: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Recipe `(H, R, q)` for the flower power `H_R^q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowerSpec {
    pattern: SimpleGraph,
    roots: Vec<Vertex>,
    q: usize,
}

impl FlowerSpec {
    /// Roots are sorted and deduplicated.
    pub fn new(pattern: SimpleGraph, mut roots: Vec<Vertex>, q: usize) -> Result<Self, ConstructionError> {
        roots.sort_unstable();
        roots.dedup();
        if let Some(&r) = roots.iter().find(|&&r| r >= pattern.n()) {
            return Err(ConstructionError::RootOutOfRange { root: r, n: pattern.n() });
        }
        if roots.len() == pattern.n() {
            return Err(ConstructionError::RootsNotProper);
        }
        if q == 0 {
            return Err(ConstructionError::ZeroMultiplicity);
        }
        Ok(FlowerSpec { pattern, roots, q })
    }

    pub fn pattern(&self) -> &SimpleGraph {
        &self.pattern
    }

    pub fn roots(&self) -> &[Vertex] {
        &self.roots
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn with_q(&self, q: usize) -> Result<Self, ConstructionError> {
        FlowerSpec::new(self.pattern.clone(), self.roots.clone(), q)
    }

    /// `w(R)`.
    pub fn components(&self) -> usize {
        component_count(&self.pattern, &self.roots)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowerLabel {
    Root { vertex: Vertex },
    Copy { copy: usize, vertex: Vertex },
}

impl FlowerLabel {
    pub fn pattern_vertex(&self) -> Vertex {
        match *self {
            FlowerLabel::Root { vertex } | FlowerLabel::Copy { vertex, .. } => vertex,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flower {
    pub graph: SimpleGraph,
    /// Provenance of each flower vertex.
    pub labels: Vec<FlowerLabel>,
    /// `copies[p][v]` is the flower vertex playing pattern vertex `v` in copy `p`.
    pub copies: Vec<Vec<Vertex>>,
}

pub fn flower(spec: &FlowerSpec) -> Flower {
    flower_kernel(&spec.pattern, &spec.roots, spec.q)
}

fn flower_kernel(h: &SimpleGraph, roots: &[Vertex], q: usize) -> Flower {
    let n = h.n();
    let mut is_root = vec![false; n];
    for &r in roots {
        is_root[r] = true;
    }
    let mut labels: Vec<FlowerLabel> = roots.iter().map(|&v| FlowerLabel::Root { vertex: v }).collect();
    let mut copies = Vec::with_capacity(q);
    for p in 0..q {
        let mut map = vec![0; n];
        for (i, &r) in roots.iter().enumerate() {
            map[r] = i;
        }
        for v in (0..n).filter(|&v| !is_root[v]) {
            map[v] = labels.len();
            labels.push(FlowerLabel::Copy { copy: p, vertex: v });
        }
        copies.push(map);
    }
    let mut edges = Vec::new();
    for (u, v) in h.edges() {
        if is_root[u] && is_root[v] {
            edges.push((copies[0][u], copies[0][v]));
        } else {
            for map in &copies {
                edges.push((map[u], map[v]));
            }
        }
    }
    let graph = SimpleGraph::from_edges(labels.len(), &edges).expect("flower edges are in range");
    Flower { graph, labels, copies }
}

/// `F_{H,k}^q`: every proper root set with at least `k` components, by size then lexicographically.
pub fn flower_family(h: &SimpleGraph, k: usize, q: usize) -> Vec<FlowerSpec> {
    assert!(h.n() < 64, "flower_family enumerates subsets and needs fewer than 64 vertices");
    let n = h.n();
    let mut sets: Vec<Vec<Vertex>> = (0u64..(1u64 << n).saturating_sub(1))
        .map(crate::bits::mask_vertices)
        .filter(|r| component_count(h, r) >= k)
        .collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sets.into_iter()
        .map(|r| FlowerSpec::new(h.clone(), r, q.max(1)).expect("proper subset"))
        .collect()
}

/// `θ_{a,b,c}`: `a` paths on `1 + cb` vertices sharing vertices `0, b, ..., cb`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThetaSpec {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl ThetaSpec {
    pub fn new(a: usize, b: usize, c: usize) -> Result<Self, ConstructionError> {
        if a == 0 || b == 0 || c == 0 {
            return Err(ConstructionError::InvalidTheta { a, b, c });
        }
        Ok(ThetaSpec { a, b, c })
    }

    pub fn vertex_count(&self) -> usize {
        (self.c + 1) + self.a * self.c * (self.b - 1)
    }

    /// `a·c·b`, except for `b = 1` where all strands coincide and the graph is `P_{1+c}`.
    pub fn edge_count(&self) -> usize {
        if self.b == 1 {
            self.c
        } else {
            self.a * self.c * self.b
        }
    }

    fn strand_roots(&self) -> Vec<Vertex> {
        (0..=self.c).map(|i| i * self.b).collect()
    }
}

pub fn theta(spec: &ThetaSpec) -> SimpleGraph {
    theta_flower(spec).graph
}

/// Theta graph with flower provenance; strand `p` is flower copy `p`.
pub fn theta_flower(spec: &ThetaSpec) -> Flower {
    let strand = SimpleGraph::path(1 + spec.c * spec.b);
    flower_kernel(&strand, &spec.strand_roots(), spec.a)
}

/// Replaces every leaf by `m` pendant copies, i.e. the flower over the non-leaves.
pub fn duplicate_leaves(t: &Tree, m: usize) -> Result<Tree, ConstructionError> {
    if t.n() <= 2 {
        return Err(ConstructionError::TooSmallForDuplication(t.n()));
    }
    let inner: Vec<Vertex> = (0..t.n()).filter(|&v| t.degree(v) > 1).collect();
    let spec = FlowerSpec::new(t.graph().clone(), inner, m)?;
    Ok(Tree::new(flower(&spec).graph)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootSet {
    pub roots: Vec<Vertex>,
    pub b: usize,
    /// The longest path `v0 ... vd` the roots were taken from.
    pub path: Vec<Vertex>,
}

/// `R = {v_{1+ib} : 0 <= i <= k-1}` with `b = floor((d-2)/(k-1))` on a fixed longest path.
pub fn diameter_root_set(t: &Tree, k: usize) -> Result<RootSet, ConstructionError> {
    if k < 2 {
        return Err(ConstructionError::KTooSmall { k, min: 2 });
    }
    let metrics = tree_metrics(t);
    let d = metrics.diameter;
    if d < 2 * k {
        return Err(ConstructionError::DiameterTooSmall { diameter: d, k });
    }
    let b = (d - 2) / (k - 1);
    let mut roots: Vec<Vertex> = (0..k).map(|i| metrics.longest_path[1 + i * b]).collect();
    roots.sort_unstable();
    Ok(RootSet {
        roots,
        b,
        path: metrics.longest_path,
    })
}

/// Injection of a theta graph (labeled as by [`theta`]) into a host.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaEmbedding {
    pub host: SimpleGraph,
    pub spec: ThetaSpec,
    pub vertex_map: Vec<Vertex>,
}

impl ThetaEmbedding {
    pub fn is_valid(&self) -> bool {
        let th = theta(&self.spec);
        crate::search::is_monomorphism(&th, &self.host, &self.vertex_map)
    }
}

/// Theta subgraph `θ_{q,b'}` in `(P_t)_R^q`, taken from the lexicographically first
/// component of `P_t - R` that avoids both path ends and has at most `b - 1` vertices,
/// where `b = floor((t-3)/(k-1))`.
pub fn find_theta_in_flower(spec: &FlowerSpec, k: usize) -> Result<ThetaEmbedding, ConstructionError> {
    let h = spec.pattern();
    let t = h.n();
    let path = Tree::new(h.clone()).map_err(|_| ConstructionError::NotAPath)?;
    if !path.is_canonical_path() {
        return Err(ConstructionError::NotAPath);
    }
    if k < 2 {
        return Err(ConstructionError::KTooSmall { k, min: 2 });
    }
    if t < 2 * k + 1 {
        return Err(ConstructionError::PathTooShort { t, k });
    }
    let comps = components_after_removal(h, spec.roots());
    if comps.len() < k + 1 {
        return Err(ConstructionError::NotInFamily {
            roots: spec.roots().to_vec(),
            components: comps.len(),
            needed: k + 1,
        });
    }
    let b = (t - 3) / (k - 1);
    let seg = comps
        .iter()
        .find(|c| !c.contains(&0) && !c.contains(&(t - 1)) && c.len() < b)
        .ok_or_else(|| ConstructionError::NoThetaComponent {
            roots: spec.roots().to_vec(),
            max: b.saturating_sub(1),
        })?;
    let left = seg[0] - 1;
    let bp = seg.len() + 1;
    let fl = flower(spec);
    let th = ThetaSpec::new(spec.q(), bp, 1)?;
    let tf = theta_flower(&th);
    let mut vertex_map = vec![0; tf.graph.n()];
    for (tv, label) in tf.labels.iter().enumerate() {
        vertex_map[tv] = match *label {
            FlowerLabel::Root { vertex } => fl.copies[0][left + vertex],
            FlowerLabel::Copy { copy, vertex } => fl.copies[copy][left + vertex],
        };
    }
    Ok(ThetaEmbedding {
        host: fl.graph,
        spec: th,
        vertex_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::two_core;
    use crate::search::{is_isomorphic, is_monomorphism};

    fn spec(h: SimpleGraph, roots: &[usize], q: usize) -> FlowerSpec {
        FlowerSpec::new(h, roots.to_vec(), q).unwrap()
    }

    #[test]
    fn worked_flowers() {
        // P6 with 1-based roots {2,5}
        let f = flower(&spec(SimpleGraph::path(6), &[1, 4], 4));
        assert_eq!((f.graph.n(), f.graph.edge_count()), (18, 20));
        // P5 with 1-based roots {3,4}
        let f = flower(&spec(SimpleGraph::path(5), &[2, 3], 3));
        assert_eq!((f.graph.n(), f.graph.edge_count()), (11, 10));
    }

    #[test]
    fn copies_are_pattern_images() {
        let h = SimpleGraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap();
        let f = flower(&spec(h.clone(), &[1, 2], 3));
        for map in &f.copies {
            assert!(is_monomorphism(&h, &f.graph, map));
            assert!(is_isomorphic(&f.graph.induced(map), &h));
        }
        let single = flower(&spec(h.clone(), &[0, 4], 1));
        assert!(is_isomorphic(&single.graph, &h));
    }

    #[test]
    fn rejects_full_root_set() {
        assert_eq!(
            FlowerSpec::new(SimpleGraph::path(2), vec![0, 1], 2),
            Err(ConstructionError::RootsNotProper)
        );
        assert_eq!(
            FlowerSpec::new(SimpleGraph::path(2), vec![0], 0),
            Err(ConstructionError::ZeroMultiplicity)
        );
    }

    fn brute_family(h: &SimpleGraph, k: usize) -> Vec<Vec<usize>> {
        let n = h.n();
        let mut out = Vec::new();
        for mask in 0u64..(1 << n) - 1 {
            let r: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            // flood fill oracle
            let mut seen: Vec<bool> = (0..n).map(|v| r.contains(&v)).collect();
            let mut comps = 0;
            for s in 0..n {
                if seen[s] {
                    continue;
                }
                comps += 1;
                let mut stack = vec![s];
                seen[s] = true;
                while let Some(v) = stack.pop() {
                    for &w in h.neighbors(v) {
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
            }
            if comps >= k {
                out.push(r);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn family_examples() {
        let roots = |h: &SimpleGraph, k| {
            let mut v: Vec<Vec<usize>> = flower_family(h, k, 2).iter().map(|s| s.roots().to_vec()).collect();
            v.sort();
            v
        };
        assert_eq!(roots(&SimpleGraph::path(3), 2), vec![vec![1]]);
        let p4 = roots(&SimpleGraph::path(4), 2);
        assert_eq!(p4, brute_family(&SimpleGraph::path(4), 2));
        let mut expected = vec![vec![1], vec![2], vec![1, 2], vec![0, 2], vec![1, 3]];
        expected.sort();
        assert_eq!(p4, expected);
        assert!(flower_family(&SimpleGraph::path(2), 2, 3).is_empty());
        let order: Vec<Vec<usize>> = flower_family(&SimpleGraph::path(4), 2, 1)
            .iter()
            .map(|s| s.roots().to_vec())
            .collect();
        assert_eq!(order, vec![vec![1], vec![2], vec![0, 2], vec![1, 2], vec![1, 3]]);
    }

    #[test]
    fn theta_examples() {
        let t = theta(&ThetaSpec::new(3, 2, 1).unwrap());
        assert_eq!((t.n(), t.edge_count()), (5, 6));
        assert!(is_isomorphic(&t, &SimpleGraph::complete_bipartite(2, 3)));
        let one = theta(&ThetaSpec::new(1, 3, 2).unwrap());
        assert!(is_isomorphic(&one, &SimpleGraph::path(7)));
        let k2 = theta(&ThetaSpec::new(4, 1, 1).unwrap());
        assert_eq!(k2, SimpleGraph::complete(2));
        let (core, _) = two_core(&theta(&ThetaSpec::new(3, 2, 1).unwrap()));
        assert_eq!(core.n(), 5);
        assert!((0..core.n()).all(|v| core.degree(v) >= 2));
    }

    #[test]
    fn duplicate_leaves_examples() {
        let d = duplicate_leaves(&Tree::path(3), 3).unwrap();
        assert_eq!(d.n(), 7);
        assert_eq!(d.leaves().len(), 6);
        assert_eq!(duplicate_leaves(&Tree::path(4), 1).unwrap().n(), 4);
        assert!(is_isomorphic(
            &duplicate_leaves(&Tree::star(3), 2).unwrap(),
            &SimpleGraph::star(6)
        ));
        assert!(duplicate_leaves(&Tree::path(2), 2).is_err());
        assert!(duplicate_leaves(&Tree::path(1), 2).is_err());
    }

    #[test]
    fn root_set_examples() {
        let rs = diameter_root_set(&Tree::path(7), 3).unwrap();
        assert_eq!((rs.roots.clone(), rs.b), (vec![1, 3, 5], 2));
        assert_eq!(
            components_after_removal(&SimpleGraph::path(7), &rs.roots),
            vec![vec![0], vec![2], vec![4], vec![6]]
        );
        let rs = diameter_root_set(&Tree::path(6), 2).unwrap();
        assert_eq!((rs.roots.clone(), rs.b), (vec![1, 4], 3));
        let f = flower(&spec(SimpleGraph::path(6), &rs.roots, 4));
        let (core, _) = two_core(&f.graph);
        assert!(is_isomorphic(&core, &theta(&ThetaSpec::new(4, 3, 1).unwrap())));
        assert!(matches!(
            diameter_root_set(&Tree::path(5), 3),
            Err(ConstructionError::DiameterTooSmall { diameter: 4, k: 3 })
        ));
    }

    #[test]
    fn theta_in_flower_examples() {
        // P7 with 1-based roots {2,4,6}
        let e = find_theta_in_flower(&spec(SimpleGraph::path(7), &[1, 3, 5], 2), 2).unwrap();
        assert_eq!(e.spec, ThetaSpec::new(2, 2, 1).unwrap());
        assert!(e.is_valid());
        // P6 with 1-based roots {2,5}
        let e = find_theta_in_flower(&spec(SimpleGraph::path(6), &[1, 4], 3), 2).unwrap();
        assert_eq!(e.spec, ThetaSpec::new(3, 3, 1).unwrap());
        assert!(e.is_valid());
        let not_member = find_theta_in_flower(&spec(SimpleGraph::path(7), &[3], 2), 2);
        assert!(matches!(not_member, Err(ConstructionError::NotInFamily { .. })));
    }
}
