//! waymark synthesizes static test environments for discrete-state agents.
//!
//! Given a directed graph induced by the agent's transition system, an
//! ordered chain of waypoint propositions, and a goal, it computes a set of
//! edge removals (static constraints) so that every run from the start that
//! reaches the goal must visit the waypoints in order, while keeping as many
//! edge-disjoint routes through the chain as possible.
//!
//! The pipeline:
//!
//! 1. [`model`] resolves propositions to waypoint vertices and checks traces
//!    against the sequence specification.
//! 2. [`graph`] provides unit-capacity max-flow, minimum-cut edges, and flow
//!    realization enumeration.
//! 3. [`seqflow`] combines per-leg realizations into sequence flows and
//!    computes the maximum sequence flow value.
//! 4. [`synthesis`] iteratively picks cuts with an exact 0-1 integer
//!    program ([`ilp`]) until no run can skip a waypoint.
//! 5. [`verify`] independently validates the result, including an
//!    exhaustive oracle for small graphs.
//! 6. [`gridworld`] generates benchmark instances and renders constraints.
//! 7. [`io`] defines the JSON file formats and a DOT export.

pub mod error;
pub mod graph;
pub mod gridworld;
pub mod ilp;
pub mod io;
pub mod model;
pub mod seqflow;
pub mod synthesis;
pub mod verify;

mod bits;
#[cfg(test)]
pub(crate) mod testgraphs;

pub use error::{Error, Result};
pub use graph::{DirectedGraph, Distance, FlowRealization, PathMode, SimplePath};
pub use model::{
    check_trace, resolve_waypoints, KripkeAbstraction, LabeledGraph, TestProblem, Trace,
    TraceVerdict,
};
pub use seqflow::{
    has_ij_cycle, max_sequence_flow_value, sequence_flows, SequenceFlowCatalog, SequenceFlowPath,
};
pub use synthesis::{restrict_transitions, synthesize_with_log, CutEdge, CutSet, SynthesisLog};
pub use verify::{brute_force_synthesis, is_test_graph, sequence_flow_value, VerificationReport};
