//! Independent validation of synthesized test graphs.
//!
//! A graph qualifies as a test graph when (a) the waypoints sit at strictly
//! decreasing distances from the goal, (b) no flow can skip an intermediate
//! waypoint, and (c) — audited exhaustively when affordable — every simple
//! path from the start to the goal visits the waypoints in order.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Distance};
use crate::model::{check_trace, TestProblem, Trace, TraceVerdict};
use crate::seqflow::max_sequence_flow_value;

/// Result of the exhaustive path audit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PathAudit {
    /// Every start-to-goal simple path satisfies the sequence and at least
    /// one exists.
    Passed { paths_checked: usize },
    /// The number of simple paths exceeded the audit budget.
    Skipped,
    /// A path violates the sequence (or none reaches the goal).
    Failed { counterexample: Vec<String> },
}

/// Flow between a waypoint pair that ought to be zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkipFlow {
    /// One-based chain positions of the pair.
    pub from_position: usize,
    pub to_position: usize,
    pub from: String,
    pub to: String,
    pub flow: usize,
}

/// Everything the test-graph check observed.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    /// Distance from each waypoint to the goal, ending with the goal's zero.
    pub distance_chain: Vec<Distance>,
    pub ordering_ok: bool,
    /// All waypoint pairs skipping an intermediate waypoint; every flow must
    /// be zero.
    pub skip_flows: Vec<SkipFlow>,
    pub path_audit: PathAudit,
    pub verdict: bool,
}

/// Checks whether `g_prime` is a test graph for the waypoints of `tp`.
///
/// Waypoints are located in `g_prime` by name, so the graph may be any
/// variant of the problem graph. Fails with [`Error::UnreachableGoal`] when
/// the goal cannot be reached from the start at all.
pub fn is_test_graph(
    g_prime: &DirectedGraph,
    tp: &TestProblem,
    audit_limit: usize,
) -> Result<VerificationReport> {
    let wp: Vec<usize> = tp
        .waypoint_names()
        .iter()
        .map(|name| {
            g_prime
                .vertex_index(name)
                .ok_or_else(|| Error::UnknownVertex(name.to_string()))
        })
        .collect::<Result<_>>()?;
    let goal = *wp.last().unwrap();

    let distance_chain: Vec<Distance> = wp
        .iter()
        .map(|&v| g_prime.shortest_distance_idx(v, goal))
        .collect();
    if !distance_chain[0].is_finite() {
        return Err(Error::UnreachableGoal {
            from: g_prime.vertex_name(wp[0]).to_string(),
            goal: g_prime.vertex_name(goal).to_string(),
        });
    }
    let ordering_ok = distance_chain.windows(2).all(|w| match (w[0], w[1]) {
        (Distance::Finite(a), Distance::Finite(b)) => a > b,
        _ => false,
    }) && distance_chain.len() >= 1;

    let mut skip_flows = Vec::new();
    for i in 0..wp.len() {
        for j in i + 2..wp.len() {
            let excluded: Vec<usize> = wp
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i && k != j)
                .map(|(_, &v)| v)
                .collect();
            let sub = g_prime.excluding_vertices(&excluded);
            let flow = sub.max_flow_idx(wp[i], wp[j]).value();
            skip_flows.push(SkipFlow {
                from_position: i + 1,
                to_position: j + 1,
                from: g_prime.vertex_name(wp[i]).to_string(),
                to: g_prime.vertex_name(wp[j]).to_string(),
                flow,
            });
        }
    }
    let skips_zero = skip_flows.iter().all(|s| s.flow == 0);

    let path_audit = match g_prime.simple_paths_idx(wp[0], goal, audit_limit) {
        Err(Error::EnumerationBudgetExceeded { .. }) => PathAudit::Skipped,
        Err(e) => return Err(e),
        Ok(paths) => {
            if paths.is_empty() {
                PathAudit::Failed {
                    counterexample: Vec::new(),
                }
            } else {
                let mut failed = None;
                for p in &paths {
                    let names: Vec<String> = p
                        .vertex_indices()
                        .iter()
                        .map(|&v| g_prime.vertex_name(v).to_string())
                        .collect();
                    let trace = Trace::new(names.clone()).expect("paths are nonempty");
                    if check_trace(&trace, tp) != TraceVerdict::SatisfiesSequence {
                        failed = Some(names);
                        break;
                    }
                }
                match failed {
                    Some(counterexample) => PathAudit::Failed { counterexample },
                    None => PathAudit::Passed {
                        paths_checked: paths.len(),
                    },
                }
            }
        }
    };

    let verdict = ordering_ok && skips_zero && !matches!(path_audit, PathAudit::Failed { .. });
    Ok(VerificationReport {
        distance_chain,
        ordering_ok,
        skip_flows,
        path_audit,
        verdict,
    })
}

/// Sequence flow value of `g_prime` under the waypoints of `tp`.
pub fn sequence_flow_value(
    g_prime: &DirectedGraph,
    tp: &TestProblem,
    limit: usize,
) -> Result<usize> {
    max_sequence_flow_value(g_prime, tp, limit)
}

/// Outcome of the exhaustive synthesis oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceOutcome {
    /// The best sequence flow over all cut sets yielding a test graph; zero
    /// means no test graph exists.
    pub best_flow: usize,
    /// All minimal-cardinality cut sets achieving `best_flow`, as name
    /// pairs, in (cardinality, edge-index) order.
    pub witnesses: Vec<Vec<(String, String)>>,
}

/// Exhaustive search over cut subsets, for cross-checking the iterative
/// synthesis at small scale.
///
/// Subsets are visited in (cardinality, lexicographic) order; supersets of a
/// subset that already yielded a test graph are skipped.
pub fn brute_force_synthesis(
    g: &DirectedGraph,
    tp: &TestProblem,
    max_edges: usize,
) -> Result<BruteForceOutcome> {
    let m = g.edge_count();
    if m > max_edges {
        return Err(Error::TooLarge {
            edges: m,
            max: max_edges,
        });
    }
    const AUDIT_LIMIT: usize = 10_000;
    const FLOW_LIMIT: usize = 100_000;

    let mut found: Vec<(u64, usize)> = Vec::new(); // (mask, flow)
    for k in 0..=m {
        for combo in index_combinations(m, k) {
            let mask = combo.iter().fold(0u64, |acc, &i| acc | (1 << i));
            if found.iter().any(|&(f, _)| f & mask == f) {
                continue;
            }
            let remove: Vec<(usize, usize)> = combo.iter().map(|&i| g.edges()[i]).collect();
            let candidate = g.without_edges(&remove);
            let report = match is_test_graph(&candidate, tp, AUDIT_LIMIT) {
                Ok(r) => r,
                Err(Error::UnreachableGoal { .. }) => continue,
                Err(e) => return Err(e),
            };
            if report.verdict {
                let flow = sequence_flow_value(&candidate, tp, FLOW_LIMIT)?;
                found.push((mask, flow));
            }
        }
    }

    let best_flow = found.iter().map(|&(_, f)| f).max().unwrap_or(0);
    if best_flow == 0 {
        return Ok(BruteForceOutcome {
            best_flow: 0,
            witnesses: Vec::new(),
        });
    }
    let min_card = found
        .iter()
        .filter(|&&(_, f)| f == best_flow)
        .map(|&(mask, _)| mask.count_ones())
        .min()
        .unwrap();
    let witnesses = found
        .iter()
        .filter(|&&(mask, f)| f == best_flow && mask.count_ones() == min_card)
        .map(|&(mask, _)| {
            (0..m)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| {
                    let (u, v) = g.edges()[i];
                    (
                        g.vertex_name(u).to_string(),
                        g.vertex_name(v).to_string(),
                    )
                })
                .collect()
        })
        .collect();
    Ok(BruteForceOutcome {
        best_flow,
        witnesses,
    })
}

/// All `k`-subsets of `0..m` in lexicographic order.
fn index_combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(m, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(m, k, 0, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testgraphs::{chain_problem, fig2_graph, fig2_problem, fig3_graph, fig3_problem};

    #[test]
    fn fig3_minus_canonical_cuts_verifies() {
        let tp = fig3_problem();
        let g = fig3_graph();
        let v = |n: &str| g.vertex_index(n).unwrap();
        let pruned = g.without_edges(&[(v("v2"), v("v4")), (v("v2"), v("v5"))]);
        let report = is_test_graph(&pruned, &tp, 10_000).unwrap();
        assert!(report.verdict);
        assert_eq!(
            report.distance_chain,
            vec![
                Distance::Finite(4),
                Distance::Finite(2),
                Distance::Finite(0)
            ]
        );
        assert!(matches!(report.path_audit, PathAudit::Passed { .. }));
    }

    #[test]
    fn fig3_minus_reported_cuts_verifies() {
        // The four-edge variant is a different optimum with the same
        // reachability structure.
        let tp = fig3_problem();
        let g = fig3_graph();
        let v = |n: &str| g.vertex_index(n).unwrap();
        let pruned = g.without_edges(&[
            (v("v2"), v("v4")),
            (v("v4"), v("v6")),
            (v("v2"), v("v5")),
            (v("v5"), v("v6")),
        ]);
        assert!(is_test_graph(&pruned, &tp, 10_000).unwrap().verdict);
    }

    #[test]
    fn unmodified_fig2_fails_with_positive_skip_flow() {
        let tp = fig2_problem();
        let report = is_test_graph(&fig2_graph(), &tp, 10_000).unwrap();
        assert!(!report.verdict);
        assert_eq!(report.skip_flows.len(), 1);
        assert_eq!(report.skip_flows[0].flow, 1);
        assert_eq!(report.skip_flows[0].from, "v1");
        assert_eq!(report.skip_flows[0].to, "vg");
    }

    #[test]
    fn unreachable_goal_is_an_error() {
        let g = DirectedGraph::new(["a", "b", "c"], [("b", "c")]).unwrap();
        let labeled = crate::model::LabeledGraph::identity(g.clone());
        let tp = labeled.resolve(&["a", "b"], "c").unwrap();
        assert!(matches!(
            is_test_graph(&g, &tp, 100),
            Err(Error::UnreachableGoal { .. })
        ));
    }

    #[test]
    fn brute_force_fig3() {
        let tp = fig3_problem();
        let out = brute_force_synthesis(&fig3_graph(), &tp, 14).unwrap();
        assert_eq!(out.best_flow, 1);
        let canonical = vec![
            ("v2".to_string(), "v4".to_string()),
            ("v2".to_string(), "v5".to_string()),
        ];
        assert!(out.witnesses.contains(&canonical), "{:?}", out.witnesses);
        for w in &out.witnesses {
            assert_eq!(w.len(), 2);
        }
    }

    #[test]
    fn brute_force_fig2_infeasible() {
        let tp = fig2_problem();
        let out = brute_force_synthesis(&fig2_graph(), &tp, 14).unwrap();
        assert_eq!(out.best_flow, 0);
        assert!(out.witnesses.is_empty());
    }

    #[test]
    fn brute_force_chain() {
        let tp = chain_problem();
        let out = brute_force_synthesis(&tp.graph, &tp, 14).unwrap();
        assert_eq!(out.best_flow, 1);
        assert_eq!(out.witnesses, vec![Vec::new()]);
    }

    #[test]
    fn brute_force_refuses_large_graphs() {
        let tp = fig3_problem();
        assert!(matches!(
            brute_force_synthesis(&fig3_graph(), &tp, 4),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn sequence_flow_values() {
        let tp = fig3_problem();
        let g = fig3_graph();
        let v = |n: &str| g.vertex_index(n).unwrap();
        let pruned = g.without_edges(&[(v("v2"), v("v4")), (v("v2"), v("v5"))]);
        assert_eq!(sequence_flow_value(&pruned, &tp, 10_000).unwrap(), 1);
        assert_eq!(
            sequence_flow_value(&chain_problem().graph, &chain_problem(), 100).unwrap(),
            1
        );
        let iso = DirectedGraph::new(["a", "b", "c"], [] as [(&str, &str); 0]).unwrap();
        let labeled = crate::model::LabeledGraph::identity(iso.clone());
        let tp2 = labeled.resolve(&["a", "b"], "c").unwrap();
        assert_eq!(sequence_flow_value(&iso, &tp2, 100).unwrap(), 0);
    }
}
