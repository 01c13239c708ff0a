//! File formats: graph, Kripke, problem, gridworld, and cut-set JSON, plus a
//! DOT export. All parsers validate their input and never panic on malformed
//! data; the fuzz targets in `fuzz/` drive each entry point.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::gridworld::{Cell, GridworldSpec};
use crate::model::KripkeAbstraction;
use crate::synthesis::CutSet;
use crate::verify::VerificationReport;

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

/// Parses `{"vertices": [...], "edges": [[from, to], ...]}`. File order
/// defines the canonical vertex and edge order.
pub fn parse_graph_json(s: &str) -> Result<DirectedGraph> {
    let raw: GraphFile = serde_json::from_str(s)?;
    DirectedGraph::new(raw.vertices, raw.edges)
}

pub fn graph_to_json(g: &DirectedGraph) -> String {
    let file = GraphFile {
        vertices: g.vertices().map(str::to_string).collect(),
        edges: g
            .edge_names()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect(),
    };
    to_pretty(&file)
}

#[derive(Deserialize)]
struct KripkeFile {
    states: Vec<String>,
    #[serde(default)]
    actions: Vec<String>,
    #[serde(default)]
    transitions: HashMap<String, Vec<String>>,
    #[serde(default)]
    init: Vec<String>,
    #[serde(default)]
    labels: HashMap<String, Vec<String>>,
}

/// Parses `{"states": [...], "transitions": {"a": ["b"], ...}, "init":
/// [...], "labels": {"q0": ["p1"], ...}}`. An `actions` array is accepted
/// and carried but unused. Edge order follows the `states` array, then each
/// state's target list.
pub fn parse_kripke_json(s: &str) -> Result<KripkeAbstraction> {
    let raw: KripkeFile = serde_json::from_str(s)?;
    Ok(KripkeAbstraction {
        states: raw.states,
        actions: raw.actions,
        transitions: raw.transitions,
        init: raw.init,
        labels: raw.labels,
    })
}

/// The ordered chain propositions and the mission proposition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub chain: Vec<String>,
    pub mission: String,
}

/// Parses `{"chain": ["p1", "p2"], "mission": "p3"}`.
pub fn parse_problem_json(s: &str) -> Result<ProblemSpec> {
    let spec: ProblemSpec = serde_json::from_str(s)?;
    if spec.chain.is_empty() {
        return Err(Error::EmptyChain);
    }
    Ok(spec)
}

#[derive(Serialize, Deserialize)]
struct GridFile {
    rows: u32,
    cols: u32,
    waypoints: BTreeMap<String, Cell>,
    goal: Cell,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

/// Parses `{"rows": t, "cols": t, "waypoints": {"p1": [r, c], ...}, "goal":
/// [r, c]}` and validates bounds and distinctness.
///
/// The waypoint chain is ordered by natural key order (`p2` before `p10`).
pub fn parse_grid_json(s: &str) -> Result<GridworldSpec> {
    let raw: GridFile = serde_json::from_str(s)?;
    let mut waypoints: Vec<(String, Cell)> = raw.waypoints.into_iter().collect();
    waypoints.sort_by(|(a, _), (b, _)| natural_cmp(a, b));
    let spec = GridworldSpec {
        rows: raw.rows,
        cols: raw.cols,
        waypoints,
        goal: raw.goal,
        seed: raw.seed,
    };
    spec.validate()?;
    Ok(spec)
}

pub fn grid_to_json(spec: &GridworldSpec) -> String {
    let file = GridFile {
        rows: spec.rows,
        cols: spec.cols,
        waypoints: spec.waypoints.iter().cloned().collect(),
        goal: spec.goal,
        seed: spec.seed,
    };
    to_pretty(&file)
}

/// Compares strings digit-run by digit-run, so `p2` sorts before `p10`.
fn natural_cmp(a: &str, b: &str) -> std::cmp::Ordering {
    let (mut ai, mut bi) = (a.chars().peekable(), b.chars().peekable());
    loop {
        match (ai.peek().copied(), bi.peek().copied()) {
            (None, None) => return std::cmp::Ordering::Equal,
            (None, Some(_)) => return std::cmp::Ordering::Less,
            (Some(_), None) => return std::cmp::Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let mut na = 0u128;
                while let Some(d) = ai.peek().and_then(|c| c.to_digit(10)) {
                    na = na.saturating_mul(10).saturating_add(d as u128);
                    ai.next();
                }
                let mut nb = 0u128;
                while let Some(d) = bi.peek().and_then(|c| c.to_digit(10)) {
                    nb = nb.saturating_mul(10).saturating_add(d as u128);
                    bi.next();
                }
                match na.cmp(&nb) {
                    std::cmp::Ordering::Equal => {}
                    other => return other,
                }
            }
            (Some(x), Some(y)) => match x.cmp(&y) {
                std::cmp::Ordering::Equal => {
                    ai.next();
                    bi.next();
                }
                other => return other,
            },
        }
    }
}

/// Parses the cut-set JSON produced by synthesis.
pub fn parse_cuts_json(s: &str) -> Result<CutSet> {
    Ok(serde_json::from_str(s)?)
}

/// `{"cuts": [{"from": ..., "to": ..., "iteration": k}, ...],
/// "sequence_flow": f, "iterations": m}`.
pub fn cuts_to_json(cuts: &CutSet) -> String {
    to_pretty(cuts)
}

pub fn report_to_json(report: &VerificationReport) -> String {
    to_pretty(report)
}

/// DOT export of a graph; cut edges are drawn dashed instead of removed.
pub fn to_dot(g: &DirectedGraph, cuts: &[(String, String)]) -> String {
    let mut out = String::from("digraph G {\n  rankdir=LR;\n");
    for v in g.vertices() {
        out.push_str(&format!("  \"{v}\";\n"));
    }
    for (a, b) in g.edge_names() {
        let dashed = cuts
            .iter()
            .any(|(x, y)| x == a && y == b);
        if dashed {
            out.push_str(&format!("  \"{a}\" -> \"{b}\" [style=dashed, color=red];\n"));
        } else {
            out.push_str(&format!("  \"{a}\" -> \"{b}\";\n"));
        }
    }
    out.push_str("}\n");
    out
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::resolve_waypoints;

    #[test]
    fn graph_round_trip() {
        let g = parse_graph_json(
            r#"{"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]]}"#,
        )
        .unwrap();
        assert_eq!(g.vertex_count(), 3);
        let again = parse_graph_json(&graph_to_json(&g)).unwrap();
        assert_eq!(g.edges(), again.edges());
    }

    #[test]
    fn graph_rejects_bad_edges() {
        assert!(parse_graph_json(r#"{"vertices": ["a"], "edges": [["a", "a"]]}"#).is_err());
        assert!(parse_graph_json(r#"{"vertices": ["a"], "edges": [["a", "x"]]}"#).is_err());
        assert!(parse_graph_json("{").is_err());
        assert!(parse_graph_json("[]").is_err());
    }

    #[test]
    fn kripke_parse_and_resolve() {
        let k = parse_kripke_json(
            r#"{
                "states": ["q0", "v2", "w", "v4", "v5", "v6", "g"],
                "transitions": {
                    "q0": ["v2"],
                    "v2": ["w", "v4", "v5"],
                    "w": ["v6"], "v4": ["v6"], "v5": ["v6"],
                    "v6": ["g"]
                },
                "init": ["q0"],
                "labels": {"q0": ["p1"], "w": ["p2"], "g": ["p3"]}
            }"#,
        )
        .unwrap();
        let tp = resolve_waypoints(&k, &["p1", "p2"], "p3").unwrap();
        assert_eq!(tp.waypoint_names(), vec!["q0", "w", "g"]);
        assert_eq!(tp.graph.edge_count(), 8);
    }

    #[test]
    fn problem_parse() {
        let p = parse_problem_json(r#"{"chain": ["p1", "p2"], "mission": "p3"}"#).unwrap();
        assert_eq!(p.chain, vec!["p1", "p2"]);
        assert_eq!(p.mission, "p3");
        assert!(parse_problem_json(r#"{"chain": [], "mission": "x"}"#).is_err());
    }

    #[test]
    fn grid_parse_orders_waypoints_naturally() {
        let spec = parse_grid_json(
            r#"{"rows": 4, "cols": 4,
                "waypoints": {"p10": [1, 2], "p2": [2, 2], "p1": [1, 1]},
                "goal": [4, 4]}"#,
        )
        .unwrap();
        let names: Vec<&str> = spec.waypoints.iter().map(|(p, _)| p.as_str()).collect();
        assert_eq!(names, vec!["p1", "p2", "p10"]);
        let again = parse_grid_json(&grid_to_json(&spec)).unwrap();
        assert_eq!(spec, again);
    }

    #[test]
    fn grid_rejects_out_of_bounds_and_overlap() {
        assert!(parse_grid_json(
            r#"{"rows": 2, "cols": 2, "waypoints": {"p1": [3, 1]}, "goal": [2, 2]}"#
        )
        .is_err());
        assert!(parse_grid_json(
            r#"{"rows": 2, "cols": 2, "waypoints": {"p1": [2, 2]}, "goal": [2, 2]}"#
        )
        .is_err());
        assert!(parse_grid_json(
            r#"{"rows": 0, "cols": 2, "waypoints": {"p1": [1, 1]}, "goal": [1, 2]}"#
        )
        .is_err());
    }

    #[test]
    fn cuts_round_trip() {
        let cs = CutSet {
            cuts: vec![crate::synthesis::CutEdge {
                from: "a".into(),
                to: "b".into(),
                iteration: 1,
            }],
            sequence_flow: 1,
            iterations: 1,
        };
        let json = cuts_to_json(&cs);
        assert!(json.contains("\"sequence_flow\": 1"));
        assert_eq!(parse_cuts_json(&json).unwrap(), cs);
    }

    #[test]
    fn dot_marks_cut_edges() {
        let g = parse_graph_json(r#"{"vertices": ["a", "b"], "edges": [["a", "b"]]}"#).unwrap();
        let dot = to_dot(&g, &[("a".into(), "b".into())]);
        assert!(dot.contains("style=dashed"));
        let dot_plain = to_dot(&g, &[]);
        assert!(!dot_plain.contains("style=dashed"));
    }

    #[test]
    fn natural_order() {
        let mut v = vec!["p10", "p9", "p1", "a", "p02"];
        v.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(v, vec!["a", "p1", "p02", "p9", "p10"]);
    }
}
