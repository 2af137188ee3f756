//! Backtracking subgraph matcher with forward checking.
//!
//! Pattern vertices are assigned in a fixed order: highest degree first,
//! then repeatedly the vertex with the most already-ordered neighbours.
//! After each assignment the domains of every unassigned pattern vertex
//! lose the used host vertex, and domains of pattern neighbours are cut
//! down to the host neighbourhood.

use std::ops::ControlFlow;

use crate::bits::BitSet;
use crate::graph::SimpleGraph;

pub struct Matcher<'a> {
    pattern: &'a SimpleGraph,
    host: &'a SimpleGraph,
    order: Vec<usize>,
    initial: Vec<BitSet>,
}

impl<'a> Matcher<'a> {
    pub fn new(pattern: &'a SimpleGraph, host: &'a SimpleGraph) -> Self {
        let initial = (0..pattern.n())
            .map(|x| {
                let mut d = BitSet::new(host.n());
                for v in 0..host.n() {
                    if host.degree(v) >= pattern.degree(x) {
                        d.insert(v);
                    }
                }
                d
            })
            .collect();
        Matcher::with_domains(pattern, host, initial)
    }

    /// Matcher whose pattern vertex `x` may only map into `domains[x]`.
    pub fn with_domains(pattern: &'a SimpleGraph, host: &'a SimpleGraph, domains: Vec<BitSet>) -> Self {
        assert_eq!(domains.len(), pattern.n());
        Matcher {
            pattern,
            host,
            order: assignment_order(pattern),
            initial: domains,
        }
    }

    /// Calls `f` with every monomorphism as a map `pattern vertex -> host vertex`.
    pub fn for_each<F>(&self, mut f: F)
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let k = self.pattern.n();
        if k == 0 {
            let _ = f(&[]);
            return;
        }
        if k > self.host.n() {
            return;
        }
        // levels[d][i] is the domain of order[i] after the first d assignments
        let mut levels: Vec<Vec<BitSet>> = vec![self.order.iter().map(|&x| self.initial[x].clone()).collect()];
        levels.resize(k + 1, levels[0].clone());
        let mut assign = vec![usize::MAX; k];
        let _ = self.descend(0, &mut levels, &mut assign, &mut f);
    }

    fn descend<F>(
        &self,
        depth: usize,
        levels: &mut [Vec<BitSet>],
        assign: &mut [usize],
        f: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let k = self.order.len();
        if depth == k {
            return f(assign);
        }
        let x = self.order[depth];
        let candidates: Vec<usize> = levels[depth][depth].iter().collect();
        'cand: for v in candidates {
            let (cur, next) = levels.split_at_mut(depth + 1);
            let cur = &cur[depth];
            let next = &mut next[0];
            for i in depth + 1..k {
                let y = self.order[i];
                next[i].clone_from(&cur[i]);
                next[i].remove(v);
                if self.pattern.adjacent(x, y) {
                    next[i].intersect_with(self.host.row(v));
                }
                if next[i].is_empty() {
                    continue 'cand;
                }
            }
            assign[x] = v;
            self.descend(depth + 1, levels, assign, f)?;
        }
        assign[x] = usize::MAX;
        ControlFlow::Continue(())
    }

    pub fn count(&self) -> u64 {
        let mut c = 0u64;
        self.for_each(|_| {
            c += 1;
            ControlFlow::Continue(())
        });
        c
    }

    pub fn first(&self) -> Option<Vec<usize>> {
        let mut out = None;
        self.for_each(|m| {
            out = Some(m.to_vec());
            ControlFlow::Break(())
        });
        out
    }

    /// Up to `cap` monomorphisms in search order, plus a truncation flag.
    pub fn collect(&self, cap: Option<usize>) -> (Vec<Vec<usize>>, bool) {
        let mut out = Vec::new();
        let mut truncated = false;
        self.for_each(|m| {
            if cap.is_some_and(|c| out.len() >= c) {
                truncated = true;
                return ControlFlow::Break(());
            }
            out.push(m.to_vec());
            ControlFlow::Continue(())
        });
        (out, truncated)
    }
}

fn assignment_order(pattern: &SimpleGraph) -> Vec<usize> {
    let n = pattern.n();
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by(|&a, &b| {
                (links[a], pattern.degree(a))
                    .cmp(&(links[b], pattern.degree(b)))
                    .then(b.cmp(&a))
            })
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
        for &w in pattern.neighbors(next) {
            links[w] += 1;
        }
    }
    order
}

/// Whether `map` is an injective homomorphism of `pattern` into `host`.
pub fn is_monomorphism(pattern: &SimpleGraph, host: &SimpleGraph, map: &[usize]) -> bool {
    if map.len() != pattern.n() || map.iter().any(|&v| v >= host.n()) {
        return false;
    }
    let mut seen = BitSet::new(host.n());
    for &v in map {
        if seen.contains(v) {
            return false;
        }
        seen.insert(v);
    }
    pattern.edges().iter().all(|&(x, y)| host.adjacent(map[x], map[y]))
}

/// An isomorphism `a -> b` if the graphs are isomorphic.
pub fn find_isomorphism(a: &SimpleGraph, b: &SimpleGraph) -> Option<Vec<usize>> {
    if a.n() != b.n() || a.edge_count() != b.edge_count() || a.degree_sequence() != b.degree_sequence() {
        return None;
    }
    let domains = (0..a.n())
        .map(|x| {
            let mut d = BitSet::new(b.n());
            for v in 0..b.n() {
                if b.degree(v) == a.degree(x) {
                    d.insert(v);
                }
            }
            d
        })
        .collect();
    Matcher::with_domains(a, b, domains).first()
}

pub fn is_isomorphic(a: &SimpleGraph, b: &SimpleGraph) -> bool {
    find_isomorphism(a, b).is_some()
}
