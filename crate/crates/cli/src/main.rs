//! Command-line driver: synthesize cut sets, verify test graphs, render
//! gridworlds, and benchmark random instances.
//!
//! Exit codes: 0 success, 1 input error, 2 infeasible environment, 3
//! enumeration budget exceeded, 4 verification failed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use waymark::graph::PathMode;
use waymark::gridworld::{grid_to_graph, random_instance, render_grid, GridworldSpec};
use waymark::io;
use waymark::model::{LabeledGraph, TestProblem};
use waymark::synthesis::{restrict_transitions, CutSet};
use waymark::verify::is_test_graph;
use waymark::Error;

#[derive(Parser)]
#[command(name = "waymark", version, about = "Static test environment synthesis for sequenced reachability missions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Enumerate all simple paths per leg.
    All,
    /// Enumerate only shortest paths per leg.
    Shortest,
}

impl From<ModeArg> for PathMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::All => PathMode::AllPaths,
            ModeArg::Shortest => PathMode::ShortestPaths,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the cut set that forces ordered waypoint visits.
    Synthesize {
        /// Graph or Kripke JSON file (grid JSON also accepted).
        #[arg(long, conflicts_with = "grid")]
        graph: Option<PathBuf>,
        /// Gridworld JSON file with embedded waypoints.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Problem JSON naming the chain and mission propositions.
        #[arg(long)]
        problem: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "all")]
        mode: ModeArg,
        /// Enumeration budget for paths, realizations, and combinations.
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
        /// Write the cut-set JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a graph minus a cut set is a test graph.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        problem: Option<PathBuf>,
        #[arg(long)]
        cuts: PathBuf,
        /// Budget for the exhaustive path audit.
        #[arg(long, default_value_t = 10_000)]
        audit_limit: usize,
    },
    /// Draw a gridworld with its one-way constraints as ASCII.
    Render {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        cuts: Option<PathBuf>,
        /// Also write a DOT export of the grid graph with cut edges dashed.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run seeded random gridworld instances and record runtimes as CSV.
    Bench {
        /// Comma-separated grid sizes, e.g. 3,4,5.
        #[arg(long)]
        sizes: String,
        /// Comma-separated waypoint counts, e.g. 2,3.
        #[arg(long)]
        props: String,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "all")]
        mode: ModeArg,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(classify(&err))
        }
    }
}

/// Maps library errors onto the documented exit codes.
fn classify(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::InfeasibleEnvironment(_)) => 2,
        Some(Error::EnumerationBudgetExceeded { .. }) => 3,
        Some(Error::UnreachableGoal { .. }) => 4,
        _ => 1,
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Synthesize {
            graph,
            grid,
            problem,
            mode,
            limit,
            out,
        } => {
            let path = graph
                .or(grid)
                .ok_or_else(|| anyhow::anyhow!("one of --graph or --grid is required"))?;
            let (tp, _) = load_instance(&path, problem.as_deref())?;
            let cuts = restrict_transitions(&tp, mode.into(), limit)?;
            let pruned = apply_cuts(&tp, &cuts);
            let report = is_test_graph(&pruned, &tp, limit)?;
            let cuts_json = io::cuts_to_json(&cuts);
            match out {
                Some(p) => fs::write(&p, &cuts_json)?,
                None => print!("{cuts_json}"),
            }
            print!("{}", io::report_to_json(&report));
            Ok(if report.verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            })
        }
        Command::Verify {
            graph,
            problem,
            cuts,
            audit_limit,
        } => {
            let (tp, _) = load_instance(&graph, problem.as_deref())?;
            let cut_set: CutSet = io::parse_cuts_json(&read(&cuts)?)?;
            let pruned = apply_cut_names(&tp, &cut_set.edge_names())?;
            let report = is_test_graph(&pruned, &tp, audit_limit)?;
            print!("{}", io::report_to_json(&report));
            Ok(if report.verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            })
        }
        Command::Render { grid, cuts, dot } => {
            let spec = io::parse_grid_json(&read(&grid)?)?;
            let cut_names = match cuts {
                Some(p) => io::parse_cuts_json(&read(&p)?)?.edge_names(),
                None => Vec::new(),
            };
            print!("{}", render_grid(&spec, &cut_names)?);
            if let Some(dot_path) = dot {
                let tp = grid_to_graph(&spec)?;
                fs::write(&dot_path, io::to_dot(&tp.graph, &cut_names))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            sizes,
            props,
            trials,
            seed,
            mode,
            csv,
            limit,
        } => {
            let sizes = parse_list(&sizes)?;
            let props = parse_list(&props)?;
            let out = run_bench(&sizes, &props, trials, seed, mode, limit)?;
            fs::write(&csv, out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))
}

fn parse_list(s: &str) -> anyhow::Result<Vec<u32>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| anyhow::anyhow!("invalid list entry `{p}`"))
        })
        .collect()
}

/// Loads a problem instance from a graph, Kripke, or grid JSON file,
/// sniffing the format from its top-level keys. Plain graphs use identity
/// labeling, so problem propositions name vertices directly.
fn load_instance(
    path: &Path,
    problem: Option<&Path>,
) -> anyhow::Result<(TestProblem, Option<GridworldSpec>)> {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let keys = value
        .as_object()
        .map(|o| o.keys().cloned().collect::<Vec<_>>());
    let has = |k: &str| keys.as_ref().is_some_and(|ks| ks.iter().any(|x| x == k));

    if has("rows") {
        let spec = io::parse_grid_json(&text)?;
        if problem.is_some() {
            anyhow::bail!(
                "--problem cannot be combined with a grid file; the grid names its own waypoints"
            );
        }
        let tp = grid_to_graph(&spec)?;
        return Ok((tp, Some(spec)));
    }

    let problem =
        problem.ok_or_else(|| anyhow::anyhow!("--problem is required with a graph or Kripke file"))?;
    let prob = io::parse_problem_json(&read(problem)?)?;
    let labeled = if has("states") {
        io::parse_kripke_json(&text)?.induce_graph()?
    } else {
        LabeledGraph::identity(io::parse_graph_json(&text)?)
    };
    Ok((labeled.resolve(&prob.chain, &prob.mission)?, None))
}

fn apply_cuts(tp: &TestProblem, cuts: &CutSet) -> waymark::DirectedGraph {
    apply_cut_names(tp, &cuts.edge_names()).expect("synthesized cuts name existing vertices")
}

fn apply_cut_names(
    tp: &TestProblem,
    names: &[(String, String)],
) -> anyhow::Result<waymark::DirectedGraph> {
    let mut pairs = Vec::with_capacity(names.len());
    for (a, b) in names {
        let u = tp
            .graph
            .vertex_index(a)
            .ok_or_else(|| anyhow::anyhow!("cut names unknown vertex `{a}`"))?;
        let v = tp
            .graph
            .vertex_index(b)
            .ok_or_else(|| anyhow::anyhow!("cut names unknown vertex `{b}`"))?;
        pairs.push((u, v));
    }
    Ok(tp.graph.without_edges(&pairs))
}

/// Per-instance seed: a fixed mix of the base seed with the trial
/// coordinates, so corpora are reproducible row by row.
fn instance_seed(base: u64, t: u32, props: u32, trial: usize) -> u64 {
    let mut z = base ^ (u64::from(t) << 42) ^ (u64::from(props) << 21) ^ (trial as u64);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn run_bench(
    sizes: &[u32],
    props: &[u32],
    trials: usize,
    seed: u64,
    mode: ModeArg,
    limit: usize,
) -> anyhow::Result<String> {
    let mode_name = match mode {
        ModeArg::All => "all",
        ModeArg::Shortest => "shortest",
    };
    let mut out =
        String::from("t,props,trial,seed,mode,status,wall_time_s,iterations,cut_count,sequence_flow\n");
    for &t in sizes {
        for &p in props {
            let mut times = Vec::with_capacity(trials);
            let mut ok_rows: Vec<(usize, usize, usize)> = Vec::new();
            for trial in 0..trials {
                let iseed = instance_seed(seed, t, p, trial);
                // Instances satisfying the shortest-path assumption, so both
                // modes bench the same feasible corpus.
                let spec = match random_instance(t, p as usize, iseed, true) {
                    Ok(s) => s,
                    Err(e) => {
                        out.push_str(&format!(
                            "{t},{p},{trial},{iseed},{mode_name},resample:{e},,,\n"
                        ));
                        continue;
                    }
                };
                let tp = grid_to_graph(&spec)?;
                let start = Instant::now();
                let result = restrict_transitions(&tp, mode.into(), limit);
                let elapsed = start.elapsed().as_secs_f64();
                times.push(elapsed);
                match result {
                    Ok(cuts) => {
                        ok_rows.push((cuts.iterations, cuts.cuts.len(), cuts.sequence_flow));
                        out.push_str(&format!(
                            "{t},{p},{trial},{iseed},{mode_name},ok,{elapsed:.6},{},{},{}\n",
                            cuts.iterations,
                            cuts.cuts.len(),
                            cuts.sequence_flow
                        ));
                    }
                    Err(e) => {
                        let status = match e {
                            Error::InfeasibleEnvironment(_) => "infeasible",
                            Error::EnumerationBudgetExceeded { .. } => "budget",
                            _ => "error",
                        };
                        out.push_str(&format!(
                            "{t},{p},{trial},{iseed},{mode_name},{status},{elapsed:.6},,,\n"
                        ));
                    }
                }
            }
            let mean = avg(&times);
            let sd = stddev(&times, mean);
            let mean_of = |f: fn(&(usize, usize, usize)) -> usize| -> String {
                if ok_rows.is_empty() {
                    String::new()
                } else {
                    format!(
                        "{:.2}",
                        ok_rows.iter().map(f).sum::<usize>() as f64 / ok_rows.len() as f64
                    )
                }
            };
            out.push_str(&format!(
                "{t},{p},summary,{seed},{mode_name},summary,{mean:.6}±{sd:.6},{},{},{}\n",
                mean_of(|r| r.0),
                mean_of(|r| r.1),
                mean_of(|r| r.2),
            ));
        }
    }
    Ok(out)
}

fn avg(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

fn stddev(xs: &[f64], mean: f64) -> f64 {
    if xs.len() < 2 {
        0.0
    } else {
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
    }
}
