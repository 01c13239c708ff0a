//! Kripke abstractions, waypoint resolution, and the finite-trace checker for
//! sequenced reachability specifications.
//!
//! The specification family handled here asks a run to visit waypoint vertices
//! `v_1, ..., v_n` in order before reaching a goal `v_{n+1}`: the run must
//! eventually reach each waypoint, and must not touch `v_{i+1}` before its
//! first visit to `v_i`. Temporal operators are evaluated on the finite trace,
//! so "eventually" means "at some position of the trace".

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// A finite-state abstraction of the system under test: states, a
/// nondeterministic transition function, initial states, and a labeling of
/// states with atomic propositions.
///
/// Action labels are carried for round-tripping but play no role in
/// synthesis; the induced graph only records which transitions exist.
#[derive(Clone, Debug, Default)]
pub struct KripkeAbstraction {
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub transitions: HashMap<String, Vec<String>>,
    pub init: Vec<String>,
    pub labels: HashMap<String, Vec<String>>,
}

impl KripkeAbstraction {
    /// Builds the directed graph induced by the transition function: one
    /// vertex per state, one edge per transition pair, labels preserved.
    ///
    /// Self-loop transitions are dropped with a warning; they carry no flow
    /// and do not affect sequence satisfaction.
    pub fn induce_graph(&self) -> Result<LabeledGraph> {
        for s in self.transitions.keys().chain(self.init.iter()) {
            if !self.states.contains(s) {
                return Err(Error::UndeclaredEndpoint(s.clone()));
            }
        }
        for s in self.labels.keys() {
            if !self.states.contains(s) {
                return Err(Error::UnknownVertex(s.clone()));
            }
        }
        let mut edges = Vec::new();
        // Canonical edge order: source states in declaration order, targets
        // in listed order.
        for s in &self.states {
            for t in self.transitions.get(s).map(Vec::as_slice).unwrap_or(&[]) {
                if t == s {
                    log::warn!("dropping self-loop transition on state `{s}`");
                    continue;
                }
                edges.push((s.clone(), t.clone()));
            }
        }
        let graph = DirectedGraph::new(self.states.clone(), edges)?;
        let labels = self
            .states
            .iter()
            .map(|s| self.labels.get(s).cloned().unwrap_or_default())
            .collect();
        Ok(LabeledGraph { graph, labels })
    }
}

/// A directed graph together with the propositions labelling each vertex.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    pub graph: DirectedGraph,
    labels: Vec<Vec<String>>,
}

impl LabeledGraph {
    pub fn new<I, S, L, P>(graph: DirectedGraph, labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, L)>,
        S: AsRef<str>,
        L: IntoIterator<Item = P>,
        P: Into<String>,
    {
        let mut by_vertex = vec![Vec::new(); graph.vertex_count()];
        for (vertex, props) in labels {
            let i = graph
                .vertex_index(vertex.as_ref())
                .ok_or_else(|| Error::UnknownVertex(vertex.as_ref().to_string()))?;
            by_vertex[i] = props.into_iter().map(Into::into).collect();
        }
        Ok(LabeledGraph {
            graph,
            labels: by_vertex,
        })
    }

    /// Each vertex labeled with its own name, so propositions name vertices
    /// directly.
    pub fn identity(graph: DirectedGraph) -> Self {
        let labels = graph.vertices().map(|v| vec![v.to_string()]).collect();
        LabeledGraph { graph, labels }
    }

    pub fn labels_of(&self, vertex: usize) -> &[String] {
        &self.labels[vertex]
    }

    /// Resolves the ordered waypoint chain and the mission proposition to
    /// vertices. Every proposition must label exactly one vertex and the
    /// resolved vertices must be pairwise distinct.
    pub fn resolve(&self, chain: &[impl AsRef<str>], mission: &str) -> Result<TestProblem> {
        if chain.is_empty() {
            return Err(Error::EmptyChain);
        }
        let mut props: Vec<String> = chain.iter().map(|p| p.as_ref().to_string()).collect();
        props.push(mission.to_string());
        let mut waypoints = Vec::with_capacity(props.len());
        for p in &props {
            let matches: Vec<usize> = (0..self.graph.vertex_count())
                .filter(|&v| self.labels[v].iter().any(|l| l == p))
                .collect();
            if matches.len() != 1 {
                return Err(Error::AssumptionOneViolated {
                    prop: p.clone(),
                    count: matches.len(),
                });
            }
            waypoints.push(matches[0]);
        }
        for i in 0..waypoints.len() {
            for j in i + 1..waypoints.len() {
                if waypoints[i] == waypoints[j] {
                    return Err(Error::DuplicateWaypoint(props[i].clone(), props[j].clone()));
                }
            }
        }
        let mission = props.pop().unwrap();
        Ok(TestProblem {
            graph: self.graph.clone(),
            chain: props,
            mission,
            waypoints,
        })
    }
}

/// Convenience wrapper: induce the graph of `k` and resolve the waypoints in
/// one step.
pub fn resolve_waypoints(
    k: &KripkeAbstraction,
    chain: &[impl AsRef<str>],
    mission: &str,
) -> Result<TestProblem> {
    k.induce_graph()?.resolve(chain, mission)
}

/// A resolved synthesis instance: the graph, the ordered chain propositions,
/// the mission proposition, and the waypoint vertices they name.
#[derive(Clone, Debug)]
pub struct TestProblem {
    pub graph: DirectedGraph,
    chain: Vec<String>,
    mission: String,
    waypoints: Vec<usize>,
}

impl TestProblem {
    /// Number of chain propositions (the goal is not counted).
    pub fn chain_len(&self) -> usize {
        self.chain.len()
    }

    pub fn chain(&self) -> &[String] {
        &self.chain
    }

    pub fn mission(&self) -> &str {
        &self.mission
    }

    /// Waypoint vertex indices `v_1, ..., v_{n+1}`; the last entry is the
    /// goal.
    pub fn waypoints(&self) -> &[usize] {
        &self.waypoints
    }

    pub fn goal(&self) -> usize {
        *self.waypoints.last().unwrap()
    }

    pub fn start(&self) -> usize {
        self.waypoints[0]
    }

    pub fn waypoint_names(&self) -> Vec<&str> {
        self.waypoints
            .iter()
            .map(|&v| self.graph.vertex_name(v))
            .collect()
    }

    /// The same problem posed on a different graph over the same vertex index
    /// space (typically the graph minus synthesized cuts).
    pub fn with_graph(&self, graph: DirectedGraph) -> TestProblem {
        debug_assert_eq!(graph.vertex_count(), self.graph.vertex_count());
        TestProblem {
            graph,
            chain: self.chain.clone(),
            mission: self.mission.clone(),
            waypoints: self.waypoints.clone(),
        }
    }
}

/// A finite, nonempty run of the system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    states: Vec<String>,
}

impl Trace {
    pub fn new<I, S>(states: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        if states.is_empty() {
            return Err(Error::InvalidFormat {
                what: "trace",
                detail: "empty state sequence".into(),
            });
        }
        Ok(Trace { states })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    /// Checks that consecutive states are joined by graph edges.
    pub fn validate(&self, g: &DirectedGraph) -> Result<()> {
        let mut prev: Option<usize> = None;
        for s in &self.states {
            let v = g
                .vertex_index(s)
                .ok_or_else(|| Error::UnknownVertex(s.clone()))?;
            if let Some(u) = prev {
                if !g.has_edge(u, v) {
                    return Err(Error::InvalidFormat {
                        what: "trace",
                        detail: format!("missing edge ({}, {})", g.vertex_name(u), s),
                    });
                }
            }
            prev = Some(v);
        }
        Ok(())
    }
}

/// Outcome of evaluating a trace against a sequenced reachability
/// specification.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TraceVerdict {
    /// Reaches the goal with all waypoint first-visits in chain order.
    SatisfiesSequence,
    /// Reaches the goal but violates the visit ordering.
    MissionOnly,
    /// Never reaches the goal.
    NeitherOrIncomplete,
}

/// Evaluates the ordered-visit specification on a finite trace.
///
/// The trace satisfies the sequence iff it reaches the goal, visits every
/// waypoint, and no waypoint `v_{i+1}` occurs before the first visit of
/// `v_i`.
pub fn check_trace(trace: &Trace, tp: &TestProblem) -> TraceVerdict {
    let first_visit: Vec<Option<usize>> = tp
        .waypoints()
        .iter()
        .map(|&w| {
            let name = tp.graph.vertex_name(w);
            trace.states().iter().position(|s| s == name)
        })
        .collect();
    let goal_reached = first_visit.last().unwrap().is_some();
    if !goal_reached {
        return TraceVerdict::NeitherOrIncomplete;
    }
    let ordered = first_visit.windows(2).all(|w| match (w[0], w[1]) {
        (Some(a), Some(b)) => a < b,
        _ => false,
    });
    if ordered {
        TraceVerdict::SatisfiesSequence
    } else {
        TraceVerdict::MissionOnly
    }
}
