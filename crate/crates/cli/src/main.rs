use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use treehelly::codec::{to_dot, to_edge_list, to_graph6};
use treehelly::constructions::{
    diameter_root_set, duplicate_leaves, flower, theta, ConstructionError, FlowerSpec, ThetaSpec,
};
use treehelly::counting::{
    aut, count_copies, enumerate_monomorphisms, extract_distinguishing, mon, sunflower_extract, CountingError,
    MonomorphismFamily,
};
use treehelly::extremal::{
    dichotomy_probe, enumerate_graphs, extremal_over, ExtremalError, FamilySpec, Objective,
};
use treehelly::piercing::{
    edge_helly_check, min_edge_piercing, mixed_helly_probe, mixed_piercing_search, neighbor_condition_check,
    pierces, PiercingSet, ProbeConfig,
};
use treehelly::verify::{self, SuiteReport};
use treehelly::{SimpleGraph, Tree};

mod input;
mod output;
mod render;

use output::*;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("report does not match a known schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Counting(#[from] CountingError),
    #[error(transparent)]
    Extremal(#[from] ExtremalError),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input(_) => "input",
            CliError::Schema(_) => "schema",
            CliError::Construction(_) => "construction",
            CliError::Counting(_) => "counting",
            CliError::Extremal(_) => "extremal",
        }
    }
}

/// Subtree piercing, flower constructions and Turán-type counts on small graphs.
#[derive(Parser)]
#[command(name = "treehelly", version)]
struct Cli {
    /// Worker threads; output is identical for every value.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Print wall-clock time to stderr.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build flowers, theta graphs, leaf duplications and root sets.
    #[command(subcommand)]
    Gen(Gen),
    /// Piercing sets for subtree systems.
    #[command(subcommand)]
    Pierce(Pierce),
    /// Helly-type checks.
    #[command(subcommand)]
    Helly(Helly),
    /// Monomorphism and copy counts.
    #[command(subcommand)]
    Count(Count),
    /// Extremal numbers over exhaustively enumerated graphs.
    #[command(subcommand)]
    Extremal(Extremal),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Render a report as a table.
    Render {
        #[arg(long, default_value = "-")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = render::Format::Text)]
        format: render::Format,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum GraphFormat {
    Json,
    Graph6,
    Edges,
    Dot,
}

#[derive(Args)]
struct GraphOpts {
    #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
    format: GraphFormat,
}

#[derive(Subcommand)]
enum Gen {
    Flower {
        #[arg(long)]
        pattern: String,
        /// Comma-separated root labels.
        #[arg(long, default_value = "")]
        roots: String,
        #[arg(long)]
        q: usize,
        #[command(flatten)]
        out: GraphOpts,
    },
    Theta {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = 1)]
        c: usize,
        #[command(flatten)]
        out: GraphOpts,
    },
    DupLeaves {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: GraphOpts,
    },
    RootSet {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum Pierce {
    MinEdge {
        #[arg(long)]
        system: PathBuf,
    },
    Mixed {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    /// Exit 1 when the given set misses a member.
    Check {
        #[arg(long)]
        system: PathBuf,
        /// Edges as `1-2,5-6`.
        #[arg(long, default_value = "")]
        edges: String,
        #[arg(long, default_value = "")]
        vertices: String,
    },
}

#[derive(Subcommand)]
enum Helly {
    /// Exit 1 when every small subfamily is k-pierceable but the system is not.
    Verify {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Random search for systems whose h-subfamilies are (a,b)-pierceable while the system is not.
    Probe {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        min_vertices: usize,
        #[arg(long, default_value_t = 9)]
        max_vertices: usize,
        #[arg(long, default_value_t = 8)]
        max_members: usize,
    },
}

#[derive(Args)]
struct PatternHost {
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    host: String,
}

#[derive(Subcommand)]
enum Count {
    Mon(PatternHost),
    Copies(PatternHost),
    Sunflower {
        #[command(flatten)]
        graphs: PatternHost,
        #[arg(long)]
        q: usize,
    },
    Distinguishing {
        #[command(flatten)]
        graphs: PatternHost,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// Forbidden graph; repeat for a family.
    #[arg(long = "forbid", required = true)]
    forbid: Vec<String>,
}

impl FamilyArgs {
    fn family(&self) -> Result<(FamilySpec, Vec<String>), CliError> {
        let graphs = self.forbid.iter().map(|s| input::graph(s)).collect::<Result<Vec<_>, _>>()?;
        let names = graphs.iter().map(to_graph6).collect();
        Ok((FamilySpec::graphs(graphs)?, names))
    }
}

#[derive(Subcommand)]
enum Extremal {
    Edges {
        #[command(flatten)]
        family: FamilyArgs,
        /// Order or inclusive range such as `3..6`.
        #[arg(long)]
        n: String,
    },
    Copies {
        #[arg(long)]
        tree: String,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: String,
    },
    Dichotomy {
        #[arg(long)]
        tree: String,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        q_max: usize,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Suite {
    All,
    EdgeHelly,
    Solvers,
    Counting,
    Constructions,
    LeafDiameter,
    ThetaInFlower,
    KeyObservation,
    PierceOrWitness,
    NiceTuples,
    Extremal,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    #[arg(long)]
    seed: u64,
    /// Random systems for the randomized Helly run.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Host tree for the exhaustive Helly run.
    #[arg(long, default_value = "P6")]
    exhaustive: String,
    /// Comma-separated piercing budgets for the Helly runs.
    #[arg(long)]
    k: Option<String>,
    #[arg(long, default_value_t = 6)]
    max_members: usize,
}

enum Outcome {
    Ok(String),
    Violation(String),
}

fn json(v: &impl Serialize) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn graph_out(g: &SimpleGraph, full: GraphOut, format: GraphFormat) -> String {
    match format {
        GraphFormat::Json => json(&full),
        GraphFormat::Graph6 => to_graph6(g),
        GraphFormat::Edges => to_edge_list(g).trim_end().to_string(),
        GraphFormat::Dot => to_dot(g, None).trim_end().to_string(),
    }
}

fn gen(cmd: Gen) -> Result<Outcome, CliError> {
    Ok(Outcome::Ok(match cmd {
        Gen::Flower { pattern, roots, q, out } => {
            let h = input::graph(&pattern)?;
            let roots = input::vertices(&roots, h.n())?;
            let f = flower(&FlowerSpec::new(h, roots, q)?);
            graph_out(&f.graph, GraphOut::flower(&f), out.format)
        }
        Gen::Theta { a, b, c, out } => {
            let g = theta(&ThetaSpec::new(a, b, c)?);
            graph_out(&g, GraphOut::new(&g), out.format)
        }
        Gen::DupLeaves { tree, m, out } => {
            let t = duplicate_leaves(&input::tree(&tree)?, m)?;
            graph_out(&t, GraphOut::new(&t), out.format)
        }
        Gen::RootSet { tree, k } => {
            let rs = diameter_root_set(&input::tree(&tree)?, k)?;
            json(&RootSetOut {
                k,
                roots: up_all(&rs.roots),
                b: rs.b,
                path: up_all(&rs.path),
            })
        }
    }))
}

fn pierce(cmd: Pierce) -> Result<Outcome, CliError> {
    Ok(match cmd {
        Pierce::MinEdge { system } => {
            let sys = input::system(&system)?;
            let best = min_edge_piercing(&sys);
            Outcome::Ok(json(&MinEdgeOut {
                size: best.as_ref().map(Vec::len),
                edges: best.as_deref().map(up_edges),
            }))
        }
        Pierce::Mixed { system, a, b } => {
            let sys = input::system(&system)?;
            let found = mixed_piercing_search(&sys, a, b);
            let p = found.clone().unwrap_or_default();
            Outcome::Ok(json(&MixedOut {
                a,
                b,
                found: found.is_some(),
                edges: up_edges(&p.edges),
                vertices: up_all(&p.vertices),
            }))
        }
        Pierce::Check { system, edges, vertices } => {
            let sys = input::system(&system)?;
            let n = sys.host().n();
            let p = PiercingSet {
                edges: input::edges(&edges, n)?,
                vertices: input::vertices(&vertices, n)?,
            };
            if let Some(e) = p.edges.iter().find(|&&(u, v)| !sys.host().adjacent(u, v)) {
                return Err(CliError::Input(format!("{}-{} is not an edge of the host", e.0 + 1, e.1 + 1)));
            }
            let span = p.span_mask();
            let unpierced: Vec<usize> = sys
                .members()
                .iter()
                .enumerate()
                .filter(|(_, m)| !m.intersects_mask(span))
                .map(|(i, _)| i + 1)
                .collect();
            let out = json(&CheckOut {
                pierces: pierces(&p, &sys),
                unpierced,
            });
            if pierces(&p, &sys) {
                Outcome::Ok(out)
            } else {
                Outcome::Violation(out)
            }
        }
    })
}

fn helly(cmd: Helly) -> Result<Outcome, CliError> {
    Ok(match cmd {
        Helly::Verify { system, k } => {
            let sys = input::system(&system)?;
            let r = edge_helly_check(&sys, k);
            let nb = (sys.host().n() >= 2).then(|| neighbor_condition_check(&sys, k).holds);
            let out = json(&HellyOut {
                k,
                local_ok: r.local_ok,
                local_witness: r.local_witness.as_deref().map(up_all),
                global_ok: r.global_ok,
                min_size: r.min_size,
                min_edges: r.min_edges.as_deref().map(up_edges),
                neighbor_condition: nb,
                verdict: r.verdict,
            });
            if r.verdict {
                Outcome::Ok(out)
            } else {
                Outcome::Violation(out)
            }
        }
        Helly::Probe {
            a,
            b,
            h,
            trials,
            seed,
            min_vertices,
            max_vertices,
            max_members,
        } => {
            if min_vertices == 0 || min_vertices > max_vertices || max_vertices > 64 {
                return Err(CliError::Usage("need 1 <= min-vertices <= max-vertices <= 64".into()));
            }
            let r = mixed_helly_probe(&ProbeConfig {
                min_vertices,
                max_vertices,
                max_members,
                a,
                b,
                h,
                trials,
                seed,
            });
            let out = json(&ProbeOut {
                seed,
                a,
                b,
                h,
                trials,
                trials_run: r.trials_run,
                counterexample: r.counterexample.as_ref().map(|(host, members)| SystemOut {
                    host: host.clone(),
                    members: members.iter().map(|m| up_all(m)).collect(),
                }),
            });
            if r.counterexample.is_some() {
                Outcome::Violation(out)
            } else {
                Outcome::Ok(out)
            }
        }
    })
}

fn count(cmd: Count) -> Result<Outcome, CliError> {
    let graphs = |p: &PatternHost| -> Result<(SimpleGraph, SimpleGraph), CliError> {
        Ok((input::graph(&p.pattern)?, input::graph(&p.host)?))
    };
    Ok(Outcome::Ok(match cmd {
        Count::Mon(p) => {
            let (h, g) = graphs(&p)?;
            json(&CountOut {
                pattern: to_graph6(&h),
                host: to_graph6(&g),
                mon: mon(&h, &g),
                aut: None,
                copies: None,
            })
        }
        Count::Copies(p) => {
            let (h, g) = graphs(&p)?;
            json(&CountOut {
                pattern: to_graph6(&h),
                host: to_graph6(&g),
                mon: mon(&h, &g),
                aut: Some(aut(&h)),
                copies: Some(count_copies(&h, &g)),
            })
        }
        Count::Sunflower { graphs: p, q } => {
            let (h, g) = graphs(&p)?;
            let (maps, _) = enumerate_monomorphisms(&h, &g, None);
            let fam = MonomorphismFamily::new(h, g, maps.iter().map(|m| m.map().to_vec()).collect())?;
            let s = sunflower_extract(&fam, q)?;
            json(&SunflowerOut {
                q,
                kernel: up_all(&s.roots),
                maps: s.maps.iter().map(|m| up_all(m.map())).collect(),
            })
        }
        Count::Distinguishing { graphs: p, seed } => {
            let (h, g) = graphs(&p)?;
            let fam = extract_distinguishing(&h, &g, seed);
            json(&DistinguishingOut {
                seed,
                mon: mon(&h, &g),
                size: fam.len(),
                classes: fam.partition().map(up_all),
                maps: fam.members().iter().map(|m| up_all(m.map())).collect(),
            })
        }
    }))
}

fn extremal(cmd: Extremal) -> Result<Outcome, CliError> {
    let sweep = |orders: Vec<usize>, objective: Objective, f: &FamilySpec| {
        orders
            .into_par_iter()
            .map(|n| Ok(extremal_over(n, &enumerate_graphs(n)?, &objective, f)))
            .collect::<Result<Vec<_>, CliError>>()
    };
    Ok(Outcome::Ok(match cmd {
        Extremal::Edges { family, n } => {
            let (f, names) = family.family()?;
            let records = sweep(input::range(&n)?, Objective::Edges, &f)?;
            json(&ExtremalOut {
                family: names,
                objective: Objective::Edges,
                records,
            })
        }
        Extremal::Copies { tree, family, n } => {
            let t = input::tree(&tree)?;
            let (f, names) = family.family()?;
            let objective = Objective::Copies { tree: t.graph().clone() };
            let records = sweep(input::range(&n)?, objective.clone(), &f)?;
            json(&ExtremalOut {
                family: names,
                objective,
                records,
            })
        }
        Extremal::Dichotomy {
            tree,
            family,
            k,
            q_max,
            n,
        } => {
            let t = input::tree(&tree)?;
            let (f, names) = family.family()?;
            let r = dichotomy_probe(&t, &f, k, q_max, n);
            json(&DichotomyOut::new(to_graph6(&t), names, &r))
        }
    }))
}

type Job = Box<dyn Fn() -> SuiteReport + Send + Sync>;

fn verify_cmd(args: VerifyArgs) -> Result<Outcome, CliError> {
    let seed = args.seed;
    let ks = match &args.k {
        Some(s) => s
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| CliError::Usage(format!("bad k list {s:?}"))))
            .collect::<Result<Vec<usize>, _>>()?,
        None => Vec::new(),
    };
    let host: Tree = input::tree(&args.exhaustive)?;
    if host.n() > 10 {
        return Err(CliError::Usage("the exhaustive host is limited to 10 vertices".into()));
    }
    let k3 = FamilySpec::graphs(vec![SimpleGraph::complete(3)])?;
    let want = |s: Suite| args.suite == Suite::All || args.suite == s;
    let mut jobs: Vec<Job> = Vec::new();
    if want(Suite::EdgeHelly) {
        let (exhaustive_ks, random_ks) = if ks.is_empty() { (vec![1, 2], vec![1, 2, 3]) } else { (ks.clone(), ks.clone()) };
        let max = args.max_members;
        jobs.push(Box::new(move || verify::edge_helly_exhaustive(&host, max, &exhaustive_ks)));
        let trials = args.trials;
        jobs.push(Box::new(move || verify::edge_helly_random(seed, trials, 9, 8, &random_ks)));
    }
    if want(Suite::Solvers) {
        jobs.push(Box::new(move || verify::solver_equivalence(seed, 1000, 500)));
    }
    if want(Suite::Counting) {
        jobs.push(Box::new(|| verify::counting_identities(5, 6, 4)));
    }
    if want(Suite::Constructions) {
        jobs.push(Box::new(|| verify::construction_identities(8, 5)));
    }
    if want(Suite::LeafDiameter) {
        jobs.push(Box::new(|| verify::leaf_diameter(3, 10)));
    }
    if want(Suite::ThetaInFlower) {
        jobs.push(Box::new(|| verify::theta_in_flower(&[7, 8, 9, 10], &[2, 3], &[2, 3])));
    }
    if want(Suite::KeyObservation) {
        jobs.push(Box::new(move || verify::key_observation(&verify::key_observation_samples(), 4, &k3)));
    }
    if want(Suite::PierceOrWitness) {
        jobs.push(Box::new(move || verify::pierce_or_witness_soundness(seed, 200)));
    }
    if want(Suite::NiceTuples) {
        jobs.push(Box::new(move || verify::nice_tuples(12, &[3, 4], seed, 20)));
    }
    if want(Suite::Extremal) {
        jobs.push(Box::new(|| verify::extremal_harness(7, 6)));
    }
    let reports: Vec<SuiteReport> = jobs.par_iter().map(|j| j()).collect();
    let passed = reports.iter().all(|r| r.passed);
    let out = json(&VerifyOut { seed, passed, reports });
    Ok(if passed { Outcome::Ok(out) } else { Outcome::Violation(out) })
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Gen(c) => gen(c),
        Command::Pierce(c) => pierce(c),
        Command::Helly(c) => helly(c),
        Command::Count(c) => count(c),
        Command::Extremal(c) => extremal(c),
        Command::Verify(a) => verify_cmd(a),
        Command::Render { input: path, format } => {
            let text = input::read(&path)?;
            Ok(Outcome::Ok(render::render(&text, format)?.trim_end().to_string()))
        }
    }
}

#[derive(Serialize)]
struct ErrorOut<'a> {
    error: &'a str,
    message: String,
}

fn fail(kind: &str, message: String) -> ExitCode {
    eprintln!("{}", json(&ErrorOut { error: kind, message }));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.render().to_string().trim_end().to_string()),
    };
    if cli.workers == 0 {
        return fail("usage", "--workers must be at least 1".into());
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build() {
        Ok(p) => p,
        Err(e) => return fail("usage", e.to_string()),
    };
    let timings = cli.timings;
    let start = Instant::now();
    let result = pool.install(|| run(cli));
    if timings {
        eprintln!("{{\"elapsed_ms\":{}}}", start.elapsed().as_millis());
    }
    match result {
        Ok(Outcome::Ok(s)) => {
            if !s.is_empty() {
                println!("{s}");
            }
            ExitCode::SUCCESS
        }
        Ok(Outcome::Violation(s)) => {
            println!("{s}");
            ExitCode::from(1)
        }
        Err(e) => fail(e.kind(), e.to_string()),
    }
}
