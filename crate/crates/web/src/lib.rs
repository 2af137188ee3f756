//! Browser bindings. Each export takes plain arguments and returns a JSON string
//! (1-based vertex labels) or throws a string error.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use treehelly::codec::{from_graph6, to_graph6};
use treehelly::constructions::{find_theta_in_flower, flower, flower_family, theta, FlowerLabel, FlowerSpec};
use treehelly::piercing::{edge_helly_check, min_edge_piercing};
use treehelly::{SimpleGraph, SubtreeSystem, Tree};

#[derive(Serialize)]
struct FlowerView {
    graph6: String,
    vertices: usize,
    edges: Vec<[usize; 2]>,
    /// 0 for roots, otherwise the copy number.
    copy: Vec<usize>,
    /// Pattern vertex each flower vertex comes from.
    origin: Vec<usize>,
    components: usize,
}

#[derive(Serialize)]
struct PiercingView {
    t: usize,
    k: usize,
    min_size: Option<usize>,
    min_edges: Option<Vec<[usize; 2]>>,
    local_ok: bool,
    local_witness: Option<Vec<usize>>,
    verdict: bool,
}

#[derive(Serialize)]
struct ThetaView {
    flower: FlowerView,
    roots: Vec<usize>,
    a: usize,
    b: usize,
    c: usize,
    /// Flower vertex hit by each theta vertex.
    map: Vec<usize>,
    theta_edges: Vec<[usize; 2]>,
    valid: bool,
}

fn pattern(text: &str) -> Result<SimpleGraph, String> {
    let text = text.trim();
    if let Some(n) = text.strip_prefix('P').and_then(|s| s.parse::<usize>().ok()) {
        if n >= 1 {
            return Ok(SimpleGraph::path(n));
        }
    }
    if let Some(k) = text.strip_prefix('S').and_then(|s| s.parse::<usize>().ok()) {
        return Ok(SimpleGraph::star(k));
    }
    from_graph6(text).map_err(|e| e.to_string())
}

fn labels(text: &str, n: usize) -> Result<Vec<usize>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse::<usize>() {
            Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
            _ => Err(format!("bad vertex {s:?}; labels run 1..={n}")),
        })
        .collect()
}

fn view(spec: &FlowerSpec) -> FlowerView {
    let f = flower(spec);
    let (copy, origin) = f
        .labels
        .iter()
        .map(|l| match *l {
            FlowerLabel::Root { vertex } => (0, vertex + 1),
            FlowerLabel::Copy { copy, vertex } => (copy + 1, vertex + 1),
        })
        .unzip();
    FlowerView {
        graph6: to_graph6(&f.graph),
        vertices: f.graph.n(),
        edges: f.graph.edges().iter().map(|&(u, v)| [u + 1, v + 1]).collect(),
        copy,
        origin,
        components: spec.components(),
    }
}

fn json(v: &impl Serialize) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// `H_R^q` for a pattern (`P6`, `S3` or graph6), comma-separated roots and `q`.
pub fn flower_json(pattern_text: &str, roots: &str, q: usize) -> Result<String, String> {
    let h = pattern(pattern_text)?;
    let r = labels(roots, h.n())?;
    let spec = FlowerSpec::new(h, r, q).map_err(|e| e.to_string())?;
    Ok(json(&view(&spec)))
}

/// Minimum edge piercing and the Helly check for intervals on `P_t`, given as
/// `"1-1; 2-3; 5-6"`.
pub fn path_piercing_json(t: usize, intervals: &str, k: usize) -> Result<String, String> {
    if !(1..=64).contains(&t) {
        return Err("path length must be in 1..=64".into());
    }
    let lists = intervals
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (a, b) = s.split_once('-').unwrap_or((s, s));
            let (a, b) = (labels(a, t)?, labels(b, t)?);
            match (a.as_slice(), b.as_slice()) {
                ([a], [b]) if a <= b => Ok((*a..=*b).collect()),
                _ => Err(format!("bad interval {s:?}")),
            }
        })
        .collect::<Result<Vec<Vec<usize>>, String>>()?;
    let sys = SubtreeSystem::from_vertex_lists(Tree::path(t), &lists).map_err(|e| e.to_string())?;
    let best = min_edge_piercing(&sys);
    let helly = edge_helly_check(&sys, k);
    Ok(json(&PiercingView {
        t,
        k,
        min_size: best.as_ref().map(Vec::len),
        min_edges: best.map(|e| e.iter().map(|&(u, v)| [u + 1, v + 1]).collect()),
        local_ok: helly.local_ok,
        local_witness: helly.local_witness.map(|w| w.iter().map(|i| i + 1).collect()),
        verdict: helly.verdict,
    }))
}

/// A theta graph inside the `index`-th (1-based) member of `F_{P_t,k+1}^q`.
pub fn theta_in_flower_json(t: usize, k: usize, q: usize, index: usize) -> Result<String, String> {
    if !(2..=16).contains(&t) {
        return Err("t must be in 2..=16".into());
    }
    let family = flower_family(&SimpleGraph::path(t), k + 1, q);
    let spec = index
        .checked_sub(1)
        .and_then(|i| family.get(i))
        .ok_or_else(|| format!("the family has {} members", family.len()))?;
    let emb = find_theta_in_flower(spec, k).map_err(|e| e.to_string())?;
    Ok(json(&ThetaView {
        flower: view(spec),
        roots: spec.roots().iter().map(|r| r + 1).collect(),
        a: emb.spec.a,
        b: emb.spec.b,
        c: emb.spec.c,
        map: emb.vertex_map.iter().map(|v| v + 1).collect(),
        theta_edges: theta(&emb.spec)
            .edges()
            .iter()
            .map(|&(x, y)| [emb.vertex_map[x] + 1, emb.vertex_map[y] + 1])
            .collect(),
        valid: emb.is_valid(),
    }))
}

/// Size of `F_{P_t,k+1}^q`, for the index picker.
pub fn family_size(t: usize, k: usize, q: usize) -> usize {
    if !(2..=16).contains(&t) {
        return 0;
    }
    flower_family(&SimpleGraph::path(t), k + 1, q).len()
}

#[wasm_bindgen(js_name = flower)]
pub fn flower_js(pattern: &str, roots: &str, q: usize) -> Result<String, JsValue> {
    flower_json(pattern, roots, q).map_err(JsValue::from)
}

#[wasm_bindgen(js_name = pathPiercing)]
pub fn path_piercing_js(t: usize, intervals: &str, k: usize) -> Result<String, JsValue> {
    path_piercing_json(t, intervals, k).map_err(JsValue::from)
}

#[wasm_bindgen(js_name = thetaInFlower)]
pub fn theta_in_flower_js(t: usize, k: usize, q: usize, index: usize) -> Result<String, JsValue> {
    theta_in_flower_json(t, k, q, index).map_err(JsValue::from)
}

#[wasm_bindgen(js_name = familySize)]
pub fn family_size_js(t: usize, k: usize, q: usize) -> usize {
    family_size(t, k, q)
}
