//! Iterative synthesis of the cut set: find paths that skip waypoints, build
//! the integer program, accept the first solution preserving the maximum
//! sequence flow, remove the chosen edges, repeat until no skipping path is
//! left.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::PathMode;
use crate::ilp::{
    build_ilp_instance, solve_ilp, solve_ilp_protected, CutCandidateSet, IlpInstance, IlpSolution,
    TieBreak,
};
use crate::model::TestProblem;
use crate::seqflow::{pair_subgraph, sequence_flows};

/// One synthesized constraint edge with the iteration that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutEdge {
    pub from: String,
    pub to: String,
    pub iteration: usize,
}

/// The synthesized constraint set: removing these edges from the input graph
/// yields the test graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSet {
    pub cuts: Vec<CutEdge>,
    /// Sequence flow value of the final test graph.
    pub sequence_flow: usize,
    /// Number of synthesis iterations performed.
    pub iterations: usize,
}

impl CutSet {
    pub fn edge_names(&self) -> Vec<(String, String)> {
        self.cuts
            .iter()
            .map(|c| (c.from.clone(), c.to.clone()))
            .collect()
    }
}

/// One solver call kept for auditing.
#[derive(Clone, Debug)]
pub struct SolvedIlp {
    pub instance: IlpInstance,
    pub solution: IlpSolution,
}

/// What one synthesis iteration saw and decided.
#[derive(Clone, Debug)]
pub struct IterationRecord {
    /// Maximum sequence flow value of this iteration's catalog.
    pub max_sequence_flow: usize,
    /// Objective of the accepted solution.
    pub accepted_objective: usize,
    /// Edges removed this iteration.
    pub cut_edges: Vec<(String, String)>,
    /// Every program solved before acceptance, in solve order.
    pub solved: Vec<SolvedIlp>,
}

/// Full audit trail of a synthesis run.
#[derive(Clone, Debug, Default)]
pub struct SynthesisLog {
    pub iterations: Vec<IterationRecord>,
}

/// Names of the cut edges selected by a solution's `x` vector.
fn selected_edge_names(
    cut: &CutCandidateSet,
    sol: &IlpSolution,
    tp: &TestProblem,
) -> Vec<(String, String)> {
    cut.edges
        .iter()
        .zip(&sol.x)
        .filter(|(_, &on)| on)
        .map(|(&(u, v), _)| {
            (
                tp.graph.vertex_name(u).to_string(),
                tp.graph.vertex_name(v).to_string(),
            )
        })
        .collect()
}

/// Edge-disjoint augmenting paths between every waypoint pair that skips at
/// least one intermediate waypoint, computed on the pair's subgraph. An
/// empty result means the graph is already a test graph.
pub fn find_cut_paths(tp: &TestProblem) -> CutCandidateSet {
    let n1 = tp.waypoints().len();
    let mut paths = Vec::new();
    for i in 0..n1 {
        for j in i + 2..n1 {
            let sub = pair_subgraph(tp, i, j);
            let flow = sub.max_flow_idx(tp.waypoints()[i], tp.waypoints()[j]);
            paths.extend(flow.paths().iter().cloned());
        }
    }
    CutCandidateSet::new(paths)
}

/// Synthesizes the cut set for `tp` (Restrict-Transitions).
///
/// Each iteration recomputes the sequence-flow catalog on the current graph,
/// walks its combinations (maximum achievers first), and accepts the first
/// solution whose objective matches the catalog maximum; failing that, the
/// best positive objective seen. A best objective of zero means no sequence
/// flow can be preserved and the environment is infeasible.
pub fn restrict_transitions(tp: &TestProblem, mode: PathMode, limit: usize) -> Result<CutSet> {
    synthesize_with_log(tp, mode, limit).map(|(cuts, _)| cuts)
}

/// As [`restrict_transitions`], also returning the per-iteration audit log.
pub fn synthesize_with_log(
    tp: &TestProblem,
    mode: PathMode,
    limit: usize,
) -> Result<(CutSet, SynthesisLog)> {
    let mut current = tp.clone();
    let mut cuts: Vec<CutEdge> = Vec::new();
    let mut log = SynthesisLog::default();
    let mut iteration = 0;

    loop {
        let cut_candidates = find_cut_paths(&current);
        if cut_candidates.is_empty() {
            break;
        }
        iteration += 1;

        let catalog = match sequence_flows(&current, mode, limit) {
            Ok(c) => c,
            Err(Error::EmptyCatalog { leg, from, to }) => {
                return Err(Error::InfeasibleEnvironment(format!(
                    "leg {leg} ({from} -> {to}) has no flow"
                )))
            }
            Err(e) => return Err(e),
        };

        // Minimum-cut edges per leg, on the same subgraphs the leg flows
        // were computed on.
        let mc_keep: Vec<Vec<(usize, usize)>> = catalog
            .legs
            .iter()
            .map(|l| l.graph.min_cut_edges_idx(l.source, l.sink))
            .collect();

        if catalog.max_value == 0 {
            return Err(Error::InfeasibleEnvironment(
                "no sequence flow exists on the current graph".into(),
            ));
        }

        // First pass: accept the first combination whose optimum attains the
        // catalog maximum and admits an assignment that keeps the surviving
        // flow paths physically intact. The plain program only watches
        // minimum-cut edges, so its canonical optimum may sever a kept path
        // through several individually redundant edges; the protected search
        // closes that gap without giving up optimality.
        let mut solved: Vec<SolvedIlp> = Vec::new();
        let mut accepted: Option<(IlpSolution, usize)> = None;
        'combos: for combination in &catalog.combinations {
            for flow in &combination.flows {
                let instance =
                    build_ilp_instance(&cut_candidates, &catalog, combination, &mc_keep, flow)?;
                let canonical = solve_ilp(&instance, TieBreak::MinimizeCuts)?;
                let hit = canonical.objective == catalog.max_value;
                let protected = if hit {
                    solve_ilp_protected(&instance, catalog.max_value)
                } else {
                    None
                };
                if let Some(applied) = &protected {
                    solved.push(SolvedIlp {
                        instance: instance.clone(),
                        solution: applied.clone(),
                    });
                }
                solved.push(SolvedIlp {
                    instance,
                    solution: canonical,
                });
                if let Some(applied) = protected {
                    accepted = Some((applied, catalog.max_value));
                    break 'combos;
                }
            }
        }

        // Fallback tiers below the maximum. A protected assignment at the
        // maximum always exists when a maximal sequence flow does, so this
        // is defensive.
        if accepted.is_none() {
            'tiers: for tier in (1..catalog.max_value).rev() {
                for combination in &catalog.combinations {
                    for flow in &combination.flows {
                        let instance = build_ilp_instance(
                            &cut_candidates,
                            &catalog,
                            combination,
                            &mc_keep,
                            flow,
                        )?;
                        if let Some(applied) = solve_ilp_protected(&instance, tier) {
                            accepted = Some((applied, tier));
                            break 'tiers;
                        }
                    }
                }
            }
        }

        let Some((applied, guaranteed)) = accepted else {
            return Err(Error::InfeasibleEnvironment(
                "every cut destroys all sequence flow".into(),
            ));
        };

        let new_edges = selected_edge_names(&cut_candidates, &applied, &current);
        debug_assert!(!new_edges.is_empty(), "A_cut x >= 1 forces progress");

        log.iterations.push(IterationRecord {
            max_sequence_flow: catalog.max_value,
            accepted_objective: guaranteed,
            cut_edges: new_edges.clone(),
            solved,
        });

        let remove: Vec<(usize, usize)> = new_edges
            .iter()
            .map(|(a, b)| {
                (
                    current.graph.vertex_index(a).unwrap(),
                    current.graph.vertex_index(b).unwrap(),
                )
            })
            .collect();
        for (from, to) in new_edges {
            cuts.push(CutEdge {
                from,
                to,
                iteration,
            });
        }
        current = current.with_graph(current.graph.without_edges(&remove));
    }

    // The loop only guarantees zero skip flows; the graph is a test graph
    // iff it still carries a sequence flow (reported with the cut set).
    let sequence_flow = match sequence_flows(&current, PathMode::AllPaths, limit) {
        Ok(catalog) => catalog.max_value,
        Err(Error::EmptyCatalog { leg, from, to }) => {
            return Err(Error::InfeasibleEnvironment(format!(
                "leg {leg} ({from} -> {to}) has no flow"
            )))
        }
        Err(e) => return Err(e),
    };
    if sequence_flow == 0 {
        return Err(Error::InfeasibleEnvironment(
            "no sequence flow exists on the final graph".into(),
        ));
    }
    Ok((
        CutSet {
            cuts,
            sequence_flow,
            iterations: iteration,
        },
        log,
    ))
}
