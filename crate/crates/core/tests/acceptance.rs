//! One line per criterion; run with `cargo test -p treehelly --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use treehelly::extremal::{enumerate_graphs, FamilySpec};
use treehelly::graph::{enumerate_trees, SimpleGraph, Tree};
use treehelly::verify::{self, SuiteReport};

const SEED: u64 = 0x5eed;

struct Outcome {
    id: usize,
    report: SuiteReport,
    elapsed: Duration,
    budget: Option<Duration>,
    extra: Vec<(String, bool)>,
}

impl Outcome {
    fn ok(&self) -> bool {
        self.report.passed && self.budget.is_none_or(|b| self.elapsed <= b) && self.extra.iter().all(|(_, ok)| *ok)
    }

    fn line(&self) -> String {
        let mut s = format!(
            "criterion {:>2} {:<24} {} checked={} failures={} time={:.2}s",
            self.id,
            self.report.suite,
            if self.ok() { "PASS" } else { "FAIL" },
            self.report.checked,
            self.report.failure_count,
            self.elapsed.as_secs_f64()
        );
        if let Some(b) = self.budget {
            s += &format!(" budget={}s", b.as_secs());
        }
        for (k, v) in &self.report.notes {
            s += &format!(" {k}={v}");
        }
        for (what, ok) in &self.extra {
            if !ok {
                s += &format!(" [oracle mismatch: {what}]");
            }
        }
        for f in &self.report.failures {
            s += &format!("\n    {f}");
        }
        s
    }
}

fn run(id: usize, budget: Option<u64>, f: impl FnOnce() -> SuiteReport) -> Outcome {
    let start = Instant::now();
    let report = f();
    Outcome {
        id,
        report,
        elapsed: start.elapsed(),
        budget: budget.map(Duration::from_secs),
        extra: Vec::new(),
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn acceptance() {
    // Unlabeled trees (OEIS A000055) and graphs (A000088).
    let tree_counts: [usize; 12] = [1, 1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235];
    let graph_counts: [usize; 8] = [1, 1, 2, 4, 11, 34, 156, 1044];
    let k3 = FamilySpec::graphs(vec![SimpleGraph::complete(3)]).unwrap();
    let mut out = Vec::new();

    let mut o = run(1, Some(300), || verify::edge_helly_exhaustive(&Tree::path(6), 6, &[1, 2]));
    let expected: u64 = (0..=6).map(|j| binomial(21, j)).sum();
    o.extra.push(("systems".into(), o.report.note_value("systems") == Some(expected)));
    o.extra.push(("subtrees".into(), o.report.note_value("subtrees") == Some(21)));
    out.push(o);

    out.push(run(2, Some(120), || verify::edge_helly_random(SEED, 10_000, 9, 8, &[1, 2, 3])));
    out.push(run(3, None, || verify::solver_equivalence(SEED, 1000, 500)));

    let mut o = run(4, None, || verify::counting_identities(5, 6, 4));
    o.extra.push(("hosts".into(), o.report.note_value("hosts") == Some(156)));
    out.push(o);

    out.push(run(5, None, || verify::construction_identities(8, 5)));

    let mut o = run(6, None, || verify::leaf_diameter(3, 10));
    let trees: usize = tree_counts[3..=10].iter().sum();
    o.extra.push(("trees".into(), o.report.note_value("trees") == Some(trees as u64)));
    out.push(o);

    out.push(run(7, Some(180), || verify::theta_in_flower(&[7, 8, 9, 10], &[2, 3], &[2, 3])));
    out.push(run(8, None, || verify::key_observation(&verify::key_observation_samples(), 4, &k3)));
    out.push(run(9, None, || verify::pierce_or_witness_soundness(SEED, 200)));
    out.push(run(10, None, || verify::nice_tuples(12, &[3, 4], SEED, 20)));

    let mut o = run(11, Some(600), || verify::extremal_harness(7, 6));
    for (n, &expected) in graph_counts.iter().enumerate() {
        let ok = enumerate_graphs(n).map(|g| g.len()) == Ok(expected);
        o.extra.push((format!("graphs on {n} vertices"), ok));
    }
    for (n, &expected) in tree_counts.iter().enumerate().take(11).skip(1) {
        o.extra.push((format!("trees on {n} vertices"), enumerate_trees(n).len() == expected));
    }
    out.push(o);

    for o in &out {
        println!("{}", o.line());
    }
    let failed: Vec<usize> = out.iter().filter(|o| !o.ok()).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
