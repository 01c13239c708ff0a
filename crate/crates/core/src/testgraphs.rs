//! Shared unit-test fixtures.

use crate::graph::DirectedGraph;
use crate::model::{LabeledGraph, TestProblem};

/// Seven-vertex example: one waypoint routed around by two detours.
pub(crate) fn fig3_graph() -> DirectedGraph {
    DirectedGraph::new(
        ["q0", "v2", "w", "v4", "v5", "v6", "g"],
        [
            ("q0", "v2"),
            ("v2", "w"),
            ("v2", "v4"),
            ("v2", "v5"),
            ("w", "v6"),
            ("v4", "v6"),
            ("v5", "v6"),
            ("v6", "g"),
        ],
    )
    .unwrap()
}

pub(crate) fn fig3_problem() -> TestProblem {
    let labeled = LabeledGraph::new(
        fig3_graph(),
        [("q0", vec!["p1"]), ("w", vec!["p2"]), ("g", vec!["p3"])],
    )
    .unwrap();
    labeled.resolve(&["p1", "p2"], "p3").unwrap()
}

/// Three-edge example with no feasible static environment.
pub(crate) fn fig2_graph() -> DirectedGraph {
    DirectedGraph::new(
        ["v1", "v2", "vg"],
        [("v1", "v2"), ("v2", "v1"), ("v1", "vg")],
    )
    .unwrap()
}

pub(crate) fn fig2_problem() -> TestProblem {
    let labeled = LabeledGraph::new(
        fig2_graph(),
        [("v1", vec!["p1"]), ("v2", vec!["p2"]), ("vg", vec!["g"])],
    )
    .unwrap();
    labeled.resolve(&["p1", "p2"], "g").unwrap()
}

/// v1 -> v2 -> v3 chain with the waypoints on the chain.
pub(crate) fn chain_problem() -> TestProblem {
    let g = DirectedGraph::new(["v1", "v2", "v3"], [("v1", "v2"), ("v2", "v3")]).unwrap();
    let labeled = LabeledGraph::new(
        g,
        [("v1", vec!["p1"]), ("v2", vec!["p2"]), ("v3", vec!["p3"])],
    )
    .unwrap();
    labeled.resolve(&["p1", "p2"], "p3").unwrap()
}
