//! JSON shapes written by the subcommands. All vertex labels are 1-based.

use serde::{Deserialize, Serialize};
use treehelly::constructions::{Flower, FlowerLabel};
use treehelly::extremal::{DichotomyReport, DichotomyVerdict, ExtremalRecord, Objective};
use treehelly::verify::SuiteReport;
use treehelly::{Edge, SimpleGraph, Vertex};

pub fn up(v: Vertex) -> usize {
    v + 1
}

pub fn up_all(vs: &[Vertex]) -> Vec<usize> {
    vs.iter().map(|&v| v + 1).collect()
}

pub fn up_edges(es: &[Edge]) -> Vec<[usize; 2]> {
    es.iter().map(|&(u, v)| [u + 1, v + 1]).collect()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelOut {
    Root { vertex: usize },
    Copy { copy: usize, vertex: usize },
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphOut {
    pub graph6: String,
    pub vertices: usize,
    pub edges: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<LabelOut>>,
}

impl GraphOut {
    pub fn new(g: &SimpleGraph) -> Self {
        GraphOut {
            graph6: treehelly::codec::to_graph6(g),
            vertices: g.n(),
            edges: g.edge_count(),
            labels: None,
        }
    }

    pub fn flower(f: &Flower) -> Self {
        let labels = f
            .labels
            .iter()
            .map(|l| match *l {
                FlowerLabel::Root { vertex } => LabelOut::Root { vertex: up(vertex) },
                FlowerLabel::Copy { copy, vertex } => LabelOut::Copy {
                    copy: up(copy),
                    vertex: up(vertex),
                },
            })
            .collect();
        GraphOut {
            labels: Some(labels),
            ..GraphOut::new(&f.graph)
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RootSetOut {
    pub k: usize,
    pub roots: Vec<usize>,
    pub b: usize,
    pub path: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MinEdgeOut {
    pub size: Option<usize>,
    pub edges: Option<Vec<[usize; 2]>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MixedOut {
    pub a: usize,
    pub b: usize,
    pub found: bool,
    pub edges: Vec<[usize; 2]>,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CheckOut {
    pub pierces: bool,
    /// Members missed by the set.
    pub unpierced: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HellyOut {
    pub k: usize,
    pub local_ok: bool,
    pub local_witness: Option<Vec<usize>>,
    pub global_ok: bool,
    pub min_size: Option<usize>,
    pub min_edges: Option<Vec<[usize; 2]>>,
    pub neighbor_condition: Option<bool>,
    pub verdict: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SystemOut {
    pub host: String,
    pub members: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ProbeOut {
    pub seed: u64,
    pub a: usize,
    pub b: usize,
    pub h: usize,
    pub trials: usize,
    pub trials_run: usize,
    pub counterexample: Option<SystemOut>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CountOut {
    pub pattern: String,
    pub host: String,
    pub mon: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aut: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copies: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SunflowerOut {
    pub q: usize,
    pub kernel: Vec<usize>,
    pub maps: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DistinguishingOut {
    pub seed: u64,
    pub mon: u64,
    pub size: usize,
    /// Pattern vertex class of every host vertex.
    pub classes: Option<Vec<usize>>,
    pub maps: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ExtremalOut {
    pub family: Vec<String>,
    pub objective: Objective,
    pub records: Vec<ExtremalRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum VerdictOut {
    Case1 { q: usize, member: usize, map: Vec<usize> },
    Case2 { up_to: usize, proven: bool },
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LowerBoundOut {
    pub n_prime: usize,
    pub graph6: String,
    pub vertices: usize,
    pub copies: u64,
    pub bound: u64,
    pub family_free: bool,
    pub verified: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EntryOut {
    pub roots: Vec<usize>,
    pub components: usize,
    pub verdict: VerdictOut,
    pub lower_bound: Option<LowerBoundOut>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DichotomyOut {
    pub tree: String,
    pub family: Vec<String>,
    pub k: usize,
    pub q_max: usize,
    pub n: usize,
    pub case2_fired: bool,
    pub entries: Vec<EntryOut>,
}

impl DichotomyOut {
    pub fn new(tree: String, family: Vec<String>, r: &DichotomyReport) -> Self {
        let entries = r
            .entries
            .iter()
            .map(|e| EntryOut {
                roots: up_all(&e.roots),
                components: e.components,
                verdict: match &e.verdict {
                    DichotomyVerdict::Case1 { q, member, map } => VerdictOut::Case1 {
                        q: *q,
                        member: up(*member),
                        map: up_all(map),
                    },
                    DichotomyVerdict::Case2 { up_to, proven } => VerdictOut::Case2 {
                        up_to: *up_to,
                        proven: *proven,
                    },
                },
                lower_bound: e.lower_bound.as_ref().map(|l| LowerBoundOut {
                    n_prime: l.n_prime,
                    graph6: l.graph6.clone(),
                    vertices: l.vertices,
                    copies: l.copies,
                    bound: l.bound,
                    family_free: l.family_free,
                    verified: l.verified,
                }),
            })
            .collect();
        DichotomyOut {
            tree,
            family,
            k: r.k,
            q_max: r.q_max,
            n: r.n,
            case2_fired: r.case2_fired(),
            entries,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VerifyOut {
    pub seed: u64,
    pub passed: bool,
    pub reports: Vec<SuiteReport>,
}
