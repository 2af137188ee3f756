//! Exhaustive small-order search for extremal and generalized extremal numbers,
//! family-freeness with witnesses, and the flower dichotomy probe.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{from_graph6, to_graph6, CodecError};
use crate::constructions::{flower, flower_family, FlowerSpec};
use crate::counting::count_copies;
use crate::graph::{component_count, SimpleGraph, Tree, Vertex};
use crate::search::Matcher;

/// Largest order enumerated natively.
pub const MAX_NATIVE_ORDER: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtremalError {
    #[error("native enumeration stops at n = {MAX_NATIVE_ORDER}, got {0}; supply a graph6 corpus")]
    OrderTooLarge(usize),
    #[error("family member {0} has no edges")]
    EdgelessMember(usize),
    #[error("family is empty")]
    EmptyFamily,
    #[error("corpus line {line}: {source}")]
    Corpus { line: usize, source: CodecError },
    #[error("corpus graph on line {line} has {found} vertices, expected {expected}")]
    CorpusOrder { line: usize, expected: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyMember {
    Graph(SimpleGraph),
    Flower(FlowerSpec),
}

impl FamilyMember {
    pub fn graph(&self) -> SimpleGraph {
        match self {
            FamilyMember::Graph(g) => g.clone(),
            FamilyMember::Flower(spec) => flower(spec).graph,
        }
    }
}

/// A forbidden family; every member has at least one edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    members: Vec<FamilyMember>,
    #[serde(skip)]
    expanded: Vec<SimpleGraph>,
}

impl FamilySpec {
    pub fn new(members: Vec<FamilyMember>) -> Result<Self, ExtremalError> {
        let expanded: Vec<SimpleGraph> = members.iter().map(FamilyMember::graph).collect();
        if let Some(i) = expanded.iter().position(|g| g.edge_count() == 0) {
            return Err(ExtremalError::EdgelessMember(i));
        }
        Ok(FamilySpec { members, expanded })
    }

    pub fn graphs(graphs: Vec<SimpleGraph>) -> Result<Self, ExtremalError> {
        FamilySpec::new(graphs.into_iter().map(FamilyMember::Graph).collect())
    }

    pub fn members(&self) -> &[FamilyMember] {
        &self.members
    }

    pub fn expanded(&self) -> &[SimpleGraph] {
        &self.expanded
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn without(&self, index: usize) -> Result<Self, ExtremalError> {
        let mut members = self.members.clone();
        members.remove(index);
        FamilySpec::new(members)
    }
}

impl<'de> Deserialize<'de> for FamilySpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            members: Vec<FamilyMember>,
        }
        let raw = Raw::deserialize(d)?;
        FamilySpec::new(raw.members).map_err(serde::de::Error::custom)
    }
}

/// A family member found in a host, with the verified embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyEmbedding {
    pub member: usize,
    pub map: Vec<Vertex>,
}

pub fn find_family_member(g: &SimpleGraph, f: &FamilySpec) -> Option<FamilyEmbedding> {
    f.expanded.iter().enumerate().find_map(|(member, h)| {
        if h.n() > g.n() || h.edge_count() > g.edge_count() {
            return None;
        }
        Matcher::new(h, g).first().map(|map| FamilyEmbedding { member, map })
    })
}

pub fn is_family_free(g: &SimpleGraph, f: &FamilySpec) -> bool {
    find_family_member(g, f).is_none()
}

/// Canonical code of a graph on at most 8 vertices: the least upper-triangle word over
/// the leaves of an individualization-refinement search.
pub fn canonical_code(g: &SimpleGraph) -> u64 {
    let n = g.n();
    assert!(n <= MAX_NATIVE_ORDER, "canonical codes are defined for n <= 8");
    let rows: Vec<u64> = (0..n).map(|v| g.row_mask(v)).collect();
    let colors = refine(&rows, vec![0; n]);
    let mut best = u64::MAX;
    search_leaves(&rows, colors, &mut best);
    best
}

fn refine(rows: &[u64], mut colors: Vec<usize>) -> Vec<usize> {
    let n = rows.len();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n).filter(|&w| rows[v] >> w & 1 == 1).map(|w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let distinct: BTreeSet<&(usize, Vec<usize>)> = sigs.iter().collect();
        let rank: Vec<&(usize, Vec<usize>)> = distinct.into_iter().collect();
        let next: Vec<usize> = sigs.iter().map(|s| rank.binary_search(&s).expect("present")).collect();
        let before = colors.iter().collect::<BTreeSet<_>>().len();
        let after = rank.len();
        colors = next;
        if after == before {
            return colors;
        }
    }
}

fn search_leaves(rows: &[u64], colors: Vec<usize>, best: &mut u64) {
    let n = rows.len();
    let cells = colors.iter().collect::<BTreeSet<_>>().len();
    if cells == n {
        let mut pos = vec![0; n];
        for v in 0..n {
            pos[colors[v]] = v;
        }
        let mut code = 0u64;
        for j in 1..n {
            for i in 0..j {
                code = code << 1 | (rows[pos[i]] >> pos[j] & 1);
            }
        }
        *best = (*best).min(code);
        return;
    }
    // first non-singleton cell by color
    let mut count = vec![0; n];
    for &c in &colors {
        count[c] += 1;
    }
    let cell = (0..n).find(|&c| count[c] > 1).expect("not discrete");
    for v in (0..n).filter(|&v| colors[v] == cell) {
        // colors are ranks, so shifting everything at or above `cell` splits v off first
        let split: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(w, &c)| if c > cell || (c == cell && w != v) { c + 1 } else { c })
            .collect();
        search_leaves(rows, refine(rows, split), best);
    }
}

pub fn graph_from_code(n: usize, code: u64) -> SimpleGraph {
    let bits = n * n.saturating_sub(1) / 2;
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if code >> (bits - 1 - k) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    SimpleGraph::from_edges(n, &edges).expect("in range")
}

/// One representative per isomorphism class on `n` vertices, ordered by edge count then
/// canonical code, built layer by layer by edge addition.
pub fn enumerate_graphs(n: usize) -> Result<Vec<SimpleGraph>, ExtremalError> {
    if n > MAX_NATIVE_ORDER {
        return Err(ExtremalError::OrderTooLarge(n));
    }
    let mut layer: BTreeSet<u64> = BTreeSet::from([canonical_code(&SimpleGraph::empty(n))]);
    let mut out: Vec<SimpleGraph> = Vec::new();
    let max_edges = n * n.saturating_sub(1) / 2;
    for _ in 0..=max_edges {
        let graphs: Vec<SimpleGraph> = layer.iter().map(|&c| graph_from_code(n, c)).collect();
        let mut next = BTreeSet::new();
        for g in &graphs {
            for j in 1..n {
                for i in 0..j {
                    if !g.adjacent(i, j) {
                        let mut edges = g.edges();
                        edges.push((i, j));
                        let h = SimpleGraph::from_edges(n, &edges).expect("in range");
                        next.insert(canonical_code(&h));
                    }
                }
            }
        }
        out.extend(graphs);
        layer = next;
        if layer.is_empty() {
            break;
        }
    }
    Ok(out)
}

/// Newline-delimited graph6; blank lines are skipped and the header is allowed.
pub fn read_graph6_corpus(text: &str) -> Result<Vec<SimpleGraph>, ExtremalError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| from_graph6(l).map_err(|source| ExtremalError::Corpus { line: i + 1, source }))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Objective {
    Edges,
    Copies { tree: SimpleGraph },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub n: usize,
    pub objective: Objective,
    pub value: u64,
    /// graph6 of every optimum, one per isomorphism class, sorted.
    pub extremal_graphs: Vec<String>,
}

/// Best objective over the F-free graphs of `universe`, all of order `n`.
pub fn extremal_over(n: usize, universe: &[SimpleGraph], objective: &Objective, f: &FamilySpec) -> ExtremalRecord {
    let score = |g: &SimpleGraph| match objective {
        Objective::Edges => g.edge_count() as u64,
        Objective::Copies { tree } => count_copies(tree, g),
    };
    let mut value = 0;
    let mut optima: BTreeSet<String> = BTreeSet::new();
    for g in universe {
        let s = score(g);
        if s < value || !is_family_free(g, f) {
            continue;
        }
        if s > value {
            value = s;
            optima.clear();
        }
        optima.insert(to_graph6(&canonical_form(g)));
    }
    ExtremalRecord {
        n,
        objective: objective.clone(),
        value,
        extremal_graphs: optima.into_iter().collect(),
    }
}

fn canonical_form(g: &SimpleGraph) -> SimpleGraph {
    if g.n() <= MAX_NATIVE_ORDER {
        graph_from_code(g.n(), canonical_code(g))
    } else {
        g.clone()
    }
}

pub fn extremal_number(n: usize, f: &FamilySpec) -> Result<ExtremalRecord, ExtremalError> {
    Ok(extremal_over(n, &enumerate_graphs(n)?, &Objective::Edges, f))
}

pub fn generalized_extremal_number(n: usize, t: &Tree, f: &FamilySpec) -> Result<ExtremalRecord, ExtremalError> {
    let objective = Objective::Copies { tree: t.graph().clone() };
    Ok(extremal_over(n, &enumerate_graphs(n)?, &objective, f))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum DichotomyVerdict {
    /// Some family member embeds in `T_R^q`.
    Case1 { q: usize, member: usize, map: Vec<Vertex> },
    /// No member embeds for any `q <= up_to`; `proven` when a structural certificate
    /// rules out every `q`.
    Case2 { up_to: usize, proven: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub n_prime: usize,
    pub graph6: String,
    pub vertices: usize,
    pub copies: u64,
    pub bound: u64,
    pub family_free: bool,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DichotomyEntry {
    pub roots: Vec<Vertex>,
    pub components: usize,
    pub verdict: DichotomyVerdict,
    pub lower_bound: Option<LowerBound>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DichotomyReport {
    pub k: usize,
    pub q_max: usize,
    pub n: usize,
    pub entries: Vec<DichotomyEntry>,
}

impl DichotomyReport {
    pub fn case2_fired(&self) -> bool {
        self.entries
            .iter()
            .any(|e| matches!(e.verdict, DichotomyVerdict::Case2 { .. }))
    }

    /// Every emitted lower-bound construction was verified.
    pub fn lower_bounds_verified(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.lower_bound.as_ref().is_none_or(|l| l.verified))
    }
}

/// For each root set with at least `k + 1` components, look for a family member in
/// `T_R^q` for `q = 1..=q_max`. Flowers of trees are bipartite, so a family with no
/// bipartite member proves Case 2 outright.
pub fn dichotomy_probe(t: &Tree, f: &FamilySpec, k: usize, q_max: usize, n: usize) -> DichotomyReport {
    let structural = f.expanded.iter().all(|g| !g.is_bipartite());
    let mut entries = Vec::new();
    for spec in flower_family(t, k + 1, 1) {
        let roots = spec.roots().to_vec();
        let mut verdict = DichotomyVerdict::Case2 {
            up_to: q_max,
            proven: structural,
        };
        if !structural {
            for q in 1..=q_max {
                let host = flower(&spec.with_q(q).expect("q >= 1")).graph;
                if let Some(e) = find_family_member(&host, f) {
                    verdict = DichotomyVerdict::Case1 {
                        q,
                        member: e.member,
                        map: e.map,
                    };
                    break;
                }
            }
        }
        let n_prime = n / t.n().max(1);
        let lower_bound = match verdict {
            DichotomyVerdict::Case2 { .. } if n_prime >= 1 => {
                let g = flower(&spec.with_q(n_prime).expect("n' >= 1")).graph;
                let copies = count_copies(t, &g);
                let bound = (n_prime as u64).saturating_pow(k as u32 + 1);
                let family_free = is_family_free(&g, f);
                Some(LowerBound {
                    n_prime,
                    graph6: to_graph6(&g),
                    vertices: g.n(),
                    copies,
                    bound,
                    family_free,
                    verified: family_free && copies >= bound,
                })
            }
            _ => None,
        };
        entries.push(DichotomyEntry {
            components: component_count(t, &roots),
            roots,
            verdict,
            lower_bound,
        });
    }
    DichotomyReport { k, q_max, n, entries }
}

/// Least-squares slope of `log y` against `log x` over points with positive coordinates;
/// descriptive only.
pub fn fit_exponent(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::is_isomorphic;

    fn k3() -> FamilySpec {
        FamilySpec::graphs(vec![SimpleGraph::complete(3)]).unwrap()
    }

    #[test]
    fn graph_counts() {
        let counts: Vec<usize> = (0..=6).map(|n| enumerate_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156]);
        assert!(enumerate_graphs(9).is_err());
    }

    #[test]
    fn representatives_pairwise_non_isomorphic() {
        let gs = enumerate_graphs(5).unwrap();
        for i in 0..gs.len() {
            for j in i + 1..gs.len() {
                assert!(!is_isomorphic(&gs[i], &gs[j]));
            }
        }
    }

    #[test]
    fn canonical_code_is_invariant() {
        let g = SimpleGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (2, 5)]).unwrap();
        let perm = [4, 2, 5, 0, 1, 3];
        let edges: Vec<_> = g.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        let h = SimpleGraph::from_edges(6, &edges).unwrap();
        assert_eq!(canonical_code(&g), canonical_code(&h));
        assert_ne!(canonical_code(&g), canonical_code(&SimpleGraph::path(6)));
    }

    #[test]
    fn freeness_examples() {
        let e = find_family_member(&SimpleGraph::complete(3), &k3()).unwrap();
        assert_eq!(e.member, 0);
        let fl = flower(&FlowerSpec::new(SimpleGraph::path(5), vec![2, 3], 3).unwrap()).graph;
        assert!(is_family_free(&fl, &k3()));
        let c4 = FamilySpec::graphs(vec![SimpleGraph::cycle(4)]).unwrap();
        assert!(is_family_free(&SimpleGraph::cycle(6), &c4));
        assert_eq!(FamilySpec::graphs(vec![SimpleGraph::empty(3)]), Err(ExtremalError::EdgelessMember(0)));
    }

    #[test]
    fn extremal_examples() {
        let p3 = FamilySpec::graphs(vec![SimpleGraph::path(3)]).unwrap();
        assert_eq!(extremal_number(4, &p3).unwrap().value, 2);
        let r = extremal_number(5, &k3()).unwrap();
        assert_eq!(r.value, 6);
        assert_eq!(r.extremal_graphs.len(), 1);
        let c4 = FamilySpec::graphs(vec![SimpleGraph::cycle(4)]).unwrap();
        assert_eq!(extremal_number(6, &c4).unwrap().value, 7);
        let star = FamilySpec::graphs(vec![SimpleGraph::star(3)]).unwrap();
        let r = generalized_extremal_number(5, &Tree::path(3), &star).unwrap();
        assert_eq!(r.value, 5);
        assert!(r.extremal_graphs.contains(&to_graph6(&canonical_form(&SimpleGraph::cycle(5)))));
        let k2 = FamilySpec::graphs(vec![SimpleGraph::complete(2)]).unwrap();
        assert_eq!(generalized_extremal_number(5, &Tree::path(3), &k2).unwrap().value, 0);
    }

    #[test]
    fn dichotomy_examples() {
        let r = dichotomy_probe(&Tree::path(5), &k3(), 1, 4, 20);
        let entry = r.entries.iter().find(|e| e.roots == vec![2, 3]).unwrap();
        assert!(matches!(entry.verdict, DichotomyVerdict::Case2 { proven: true, .. }));
        let lb = entry.lower_bound.as_ref().unwrap();
        assert!(lb.verified && lb.copies >= 16);
        assert!(r.lower_bounds_verified());
        let k2 = FamilySpec::graphs(vec![SimpleGraph::complete(2)]).unwrap();
        let r = dichotomy_probe(&Tree::path(6), &k2, 1, 4, 12);
        assert!(r
            .entries
            .iter()
            .all(|e| matches!(e.verdict, DichotomyVerdict::Case1 { q: 1, .. })));
    }

    #[test]
    fn exponent_fit() {
        let pts: Vec<(f64, f64)> = (1..6).map(|n| (n as f64, (n * n) as f64)).collect();
        assert!((fit_exponent(&pts).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(fit_exponent(&[(1.0, 1.0)]), None);
    }
}
