//! Property tests over seeded random graphs: flow values against an
//! exhaustive oracle, determinism, mode relationships, and agreement between
//! the iterative synthesis and the brute-force search.

use proptest::prelude::*;

use waymark::graph::{DirectedGraph, PathMode};
use waymark::model::{check_trace, LabeledGraph, TestProblem, Trace, TraceVerdict};
use waymark::seqflow::sequence_flows;
use waymark::synthesis::{restrict_transitions, synthesize_with_log};
use waymark::verify::{brute_force_synthesis, sequence_flow_value};
use waymark::Error;

/// Exhaustive maximum number of pairwise edge-disjoint s-t paths.
fn max_disjoint_oracle(g: &DirectedGraph, s: &str, t: &str) -> usize {
    let paths = g.simple_paths(s, t, 1_000_000).unwrap();
    let edge_sets: Vec<Vec<(usize, usize)>> =
        paths.iter().map(|p| p.edge_pairs().collect()).collect();
    fn rec(sets: &[Vec<(usize, usize)>], start: usize, used: &mut Vec<(usize, usize)>) -> usize {
        let mut best = 0;
        for i in start..sets.len() {
            if sets[i].iter().all(|e| !used.contains(e)) {
                used.extend(&sets[i]);
                best = best.max(1 + rec(sets, i + 1, used));
                used.truncate(used.len() - sets[i].len());
            }
        }
        best
    }
    rec(&edge_sets, 0, &mut Vec::new())
}

#[derive(Debug, Clone)]
struct RandomGraph {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

impl RandomGraph {
    fn build(&self) -> DirectedGraph {
        DirectedGraph::new(self.vertices.clone(), self.edges.clone()).unwrap()
    }
}

fn arb_graph(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = RandomGraph> {
    (3..=max_vertices).prop_flat_map(move |v| {
        let pairs: Vec<(usize, usize)> = (0..v)
            .flat_map(|a| (0..v).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        let max = max_edges.min(pairs.len());
        proptest::sample::subsequence(pairs, 0..=max).prop_map(move |chosen| RandomGraph {
            vertices: (0..v).map(|i| format!("n{i}")).collect(),
            edges: chosen
                .into_iter()
                .map(|(a, b)| (format!("n{a}"), format!("n{b}")))
                .collect(),
        })
    })
}

fn arb_problem() -> impl Strategy<Value = TestProblem> {
    (arb_graph(8, 14), 1usize..=2).prop_flat_map(|(rg, n)| {
        let v = rg.vertices.len();
        proptest::sample::subsequence((0..v).collect::<Vec<_>>(), n + 1).prop_map(
            move |waypoints| {
                let g = rg.build();
                let labeled = LabeledGraph::identity(g);
                let names: Vec<String> = waypoints.iter().map(|&i| format!("n{i}")).collect();
                let (chain, mission) = names.split_at(names.len() - 1);
                labeled.resolve(chain, &mission[0]).unwrap()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn max_flow_matches_exhaustive_oracle(rg in arb_graph(7, 12)) {
        let g = rg.build();
        let (s, t) = ("n0", "n1");
        let flow = g.max_flow(s, t).unwrap();
        prop_assert_eq!(flow.value(), max_disjoint_oracle(&g, s, t));
        // Conservation at unit capacity: every edge carries at most one path.
        let mut used = std::collections::HashSet::new();
        for p in flow.paths() {
            for e in p.edge_pairs() {
                prop_assert!(used.insert(e));
            }
        }
    }

    #[test]
    fn min_cut_edges_match_removal_oracle(rg in arb_graph(6, 10)) {
        let g = rg.build();
        let (s, t) = ("n0", "n1");
        let base = max_disjoint_oracle(&g, s, t);
        let cut = g.min_cut_edges(s, t).unwrap();
        for &e in g.edges() {
            let decreased = max_disjoint_oracle(&g.without_edges(&[e]), s, t) < base;
            prop_assert_eq!(cut.contains(&e), decreased);
        }
    }

    #[test]
    fn flows_are_deterministic(rg in arb_graph(8, 14)) {
        let g1 = rg.build();
        let g2 = rg.build();
        let a = g1.max_flow("n0", "n2").unwrap();
        let b = g2.max_flow("n0", "n2").unwrap();
        prop_assert_eq!(a.paths(), b.paths());
        let ra = g1.enumerate_flow_realizations("n0", "n2", PathMode::AllPaths, 10_000).unwrap();
        let rb = g2.enumerate_flow_realizations("n0", "n2", PathMode::AllPaths, 10_000).unwrap();
        prop_assert_eq!(ra, rb);
    }

    #[test]
    fn shortest_mode_is_a_subset_of_all_paths_mode(rg in arb_graph(7, 12)) {
        let g = rg.build();
        let all = g.enumerate_flow_realizations("n0", "n1", PathMode::AllPaths, 10_000).unwrap();
        let short = g.enumerate_flow_realizations("n0", "n1", PathMode::ShortestPaths, 10_000).unwrap();
        let d = g.shortest_distance("n0", "n1").unwrap();
        for r in &short {
            for p in r.paths() {
                prop_assert_eq!(waymark::Distance::Finite(p.len()), d);
            }
            prop_assert!(all.contains(r));
        }
    }

    #[test]
    fn sequence_flow_bounded_by_min_leg_flow(tp in arb_problem()) {
        match sequence_flows(&tp, PathMode::AllPaths, 50_000) {
            Ok(catalog) => {
                let min_leg = catalog.legs.iter().map(|l| l.max_flow).min().unwrap();
                prop_assert!(catalog.max_value <= min_leg);
            }
            Err(Error::EmptyCatalog { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        }
    }

    #[test]
    fn trace_verdicts_are_prefix_monotone(tp in arb_problem(), walk in proptest::collection::vec(0usize..8, 1..12)) {
        let names: Vec<String> = walk
            .iter()
            .map(|&i| format!("n{}", i % tp.graph.vertex_count()))
            .collect();
        let mut last = TraceVerdict::NeitherOrIncomplete;
        for k in 1..=names.len() {
            let t = Trace::new(names[..k].to_vec()).unwrap();
            let v = check_trace(&t, &tp);
            if last != TraceVerdict::NeitherOrIncomplete {
                prop_assert!(v != TraceVerdict::NeitherOrIncomplete);
            }
            last = v;
        }
    }

    #[test]
    fn synthesis_agrees_with_brute_force(tp in arb_problem()) {
        let oracle = brute_force_synthesis(&tp.graph, &tp, 14).unwrap();
        match restrict_transitions(&tp, PathMode::AllPaths, 50_000) {
            Ok(cs) => {
                let index_pairs: Vec<(usize, usize)> = cs
                    .cuts
                    .iter()
                    .map(|c| {
                        (
                            tp.graph.vertex_index(&c.from).unwrap(),
                            tp.graph.vertex_index(&c.to).unwrap(),
                        )
                    })
                    .collect();
                let pruned = tp.graph.without_edges(&index_pairs);
                let flow = sequence_flow_value(&pruned, &tp, 50_000).unwrap();
                prop_assert_eq!(cs.sequence_flow, flow);
                prop_assert_eq!(flow, oracle.best_flow, "cuts: {:?}", cs.cuts);
            }
            Err(Error::InfeasibleEnvironment(_)) => {
                prop_assert_eq!(oracle.best_flow, 0);
            }
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        }
    }

    #[test]
    fn accepted_objective_never_undercuts_next_iteration(tp in arb_problem()) {
        if let Ok((cs, log)) = synthesize_with_log(&tp, PathMode::AllPaths, 50_000) {
            for w in log.iterations.windows(2) {
                prop_assert!(w[1].max_sequence_flow >= w[0].accepted_objective);
            }
            if let Some(last) = log.iterations.last() {
                prop_assert!(cs.sequence_flow >= last.accepted_objective);
            }
        }
    }
}
