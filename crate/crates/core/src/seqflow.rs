//! Sequence flows: combining per-leg flow realizations into bundles of
//! chained waypoint-to-waypoint paths.
//!
//! A *sequence flow path* is a tuple of per-leg simple paths, one from each
//! waypoint to the next, whose union keeps the strict distance ordering to
//! the goal and introduces no `ij`-cycle (a vertex that an earlier leg enters
//! and a later leg leaves, which would let a run shortcut the chain). A
//! *sequence flow* is a set of such tuples that are pairwise edge-disjoint
//! and remain cycle-free even when legs are mixed across tuples. The largest
//! achievable set size over all per-leg realization combinations is the
//! maximum sequence flow value.

use itertools::Itertools;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, FlowRealization, PathMode, SimplePath};
use crate::model::TestProblem;

/// The subgraph on which flows between waypoints `i` and `j` are computed:
/// the problem graph with every other waypoint's edges removed.
pub fn pair_subgraph(tp: &TestProblem, i: usize, j: usize) -> DirectedGraph {
    let excluded: Vec<usize> = tp
        .waypoints()
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i && k != j)
        .map(|(_, &v)| v)
        .collect();
    tp.graph.excluding_vertices(&excluded)
}

/// True iff some vertex is entered by leg `i` and left by leg `j > i`,
/// except for the junction waypoint shared by consecutive legs.
pub fn has_ij_cycle(legs: &[SimplePath], waypoints: &[usize]) -> bool {
    for i in 0..legs.len() {
        for j in i + 1..legs.len() {
            if leg_pair_cycles(&legs[i], i, &legs[j], j, waypoints) {
                return true;
            }
        }
    }
    false
}

/// The two-leg pattern underlying `ij`-cycles: `early` (at chain position
/// `ei`) enters a vertex that `late` (at position `lj > ei`) leaves.
fn leg_pair_cycles(
    early: &SimplePath,
    ei: usize,
    late: &SimplePath,
    lj: usize,
    waypoints: &[usize],
) -> bool {
    debug_assert!(ei < lj);
    for (_, w) in early.edge_pairs() {
        for (x, _) in late.edge_pairs() {
            if w == x && !(lj == ei + 1 && w == waypoints[ei + 1]) {
                return true;
            }
        }
    }
    false
}

/// Whether the union of the legs keeps every waypoint strictly closer to the
/// goal than its predecessor, measured on the induced subgraph alone.
fn induced_ordering_ok(legs: &[SimplePath], waypoints: &[usize], vertex_count: usize) -> bool {
    // Reverse adjacency of the induced subgraph.
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for leg in legs {
        for (u, v) in leg.edge_pairs() {
            if !pred[v].contains(&u) {
                pred[v].push(u);
            }
        }
    }
    let goal = *waypoints.last().unwrap();
    let mut dist = vec![None; vertex_count];
    dist[goal] = Some(0usize);
    let mut queue = std::collections::VecDeque::from([goal]);
    while let Some(u) = queue.pop_front() {
        for &p in &pred[u] {
            if dist[p].is_none() {
                dist[p] = Some(dist[u].unwrap() + 1);
                queue.push_back(p);
            }
        }
    }
    let mut prev = usize::MAX;
    for &w in waypoints {
        match dist[w] {
            Some(d) if d < prev => prev = d,
            _ => return false,
        }
    }
    prev == 0
}

/// A tuple of per-leg simple paths chaining the start to the goal.
#[derive(Clone, Debug)]
pub struct SequenceFlowPath {
    pub legs: Vec<SimplePath>,
}

impl SequenceFlowPath {
    /// Checks both defining conditions: no `ij`-cycle and the induced
    /// distance ordering.
    pub fn is_valid(&self, tp: &TestProblem) -> bool {
        !has_ij_cycle(&self.legs, tp.waypoints())
            && induced_ordering_ok(&self.legs, tp.waypoints(), tp.graph.vertex_count())
    }
}

/// All flow realizations between one waypoint pair, together with the
/// subgraph they were computed on.
#[derive(Clone, Debug)]
pub struct LegFlows {
    /// Problem graph with the other waypoints' edges removed.
    pub graph: DirectedGraph,
    /// Endpoints of this leg in the shared vertex index space.
    pub source: usize,
    pub sink: usize,
    /// Maximum flow value between the endpoints on `graph`.
    pub max_flow: usize,
    /// Every maximal edge-disjoint realization of that flow.
    pub realizations: Vec<FlowRealization>,
}

/// One sequence flow: the rows select, per member path and per leg, a path
/// index within the combination's chosen realization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceFlowSet {
    pub members: Vec<Vec<usize>>,
}

impl SequenceFlowSet {
    pub fn value(&self) -> usize {
        self.members.len()
    }
}

/// One combination of per-leg realizations and the sequence flows it admits.
#[derive(Clone, Debug)]
pub struct Combination {
    /// Index of the chosen realization within each leg's `realizations`.
    pub choice: Vec<usize>,
    /// All maximal sequence flows for this combination, largest first.
    pub flows: Vec<SequenceFlowSet>,
    /// Size of the largest flow in `flows` (zero when none exists).
    pub best: usize,
}

/// The full catalog produced by the sequence-flows subroutine.
#[derive(Clone, Debug)]
pub struct SequenceFlowCatalog {
    pub legs: Vec<LegFlows>,
    /// Every combination in the cartesian product of per-leg realizations,
    /// with the ones achieving the maximum sequence flow value ordered
    /// first.
    pub combinations: Vec<Combination>,
    /// The maximum sequence flow value over all combinations.
    pub max_value: usize,
}

impl SequenceFlowCatalog {
    /// Number of realization combinations.
    pub fn count(&self) -> usize {
        self.combinations.len()
    }

    /// The realization chosen for each leg by `combo`.
    pub fn chosen_realizations<'a>(&'a self, combo: &Combination) -> Vec<&'a FlowRealization> {
        combo
            .choice
            .iter()
            .enumerate()
            .map(|(leg, &m)| &self.legs[leg].realizations[m])
            .collect()
    }

    /// Materializes one member row of a sequence flow as concrete legs.
    pub fn member_legs<'a>(&'a self, combo: &Combination, member: &[usize]) -> Vec<&'a SimplePath> {
        member
            .iter()
            .enumerate()
            .map(|(leg, &p)| &self.legs[leg].realizations[combo.choice[leg]].paths()[p])
            .collect()
    }
}

/// Computes the sequence-flow catalog for a problem: per-leg flow
/// realizations on the waypoint-excluded subgraphs, every combination in
/// their cartesian product, and each combination's maximal sequence flows.
///
/// Fails with [`Error::EmptyCatalog`] when some leg admits no flow at all,
/// and with [`Error::EnumerationBudgetExceeded`] when candidate paths,
/// realizations, or combinations outgrow `limit`.
pub fn sequence_flows(
    tp: &TestProblem,
    mode: PathMode,
    limit: usize,
) -> Result<SequenceFlowCatalog> {
    let n = tp.chain_len();
    let waypoints = tp.waypoints();
    let mut legs = Vec::with_capacity(n);
    for i in 0..n {
        let graph = pair_subgraph(tp, i, i + 1);
        let (source, sink) = (waypoints[i], waypoints[i + 1]);
        let max_flow = graph.max_flow_idx(source, sink).value();
        if max_flow == 0 {
            return Err(Error::EmptyCatalog {
                leg: i + 1,
                from: tp.graph.vertex_name(source).to_string(),
                to: tp.graph.vertex_name(sink).to_string(),
            });
        }
        let realizations = graph.enumerate_flow_realizations_idx(source, sink, mode, limit)?;
        legs.push(LegFlows {
            graph,
            source,
            sink,
            max_flow,
            realizations,
        });
    }

    let combo_count: usize = legs
        .iter()
        .map(|l| l.realizations.len())
        .try_fold(1usize, |acc, k| acc.checked_mul(k))
        .unwrap_or(usize::MAX);
    if combo_count > limit {
        return Err(Error::EnumerationBudgetExceeded {
            count: combo_count,
            limit,
        });
    }

    let mut combinations = Vec::with_capacity(combo_count);
    let mut max_value = 0;
    for choice in legs
        .iter()
        .map(|l| 0..l.realizations.len())
        .multi_cartesian_product()
    {
        let flows = combination_flows(tp, &legs, &choice);
        let best = flows.first().map_or(0, SequenceFlowSet::value);
        max_value = max_value.max(best);
        combinations.push(Combination {
            choice,
            flows,
            best,
        });
    }
    // Combinations that achieve the maximum first, otherwise in product
    // order, so iterative synthesis can stop at the first hit.
    combinations.sort_by_key(|c| c.best != max_value);
    Ok(SequenceFlowCatalog {
        legs,
        combinations,
        max_value,
    })
}

/// All maximal sequence flows of one realization combination, sorted largest
/// first, then lexicographically.
fn combination_flows(tp: &TestProblem, legs: &[LegFlows], choice: &[usize]) -> Vec<SequenceFlowSet> {
    let chosen: Vec<&FlowRealization> = legs
        .iter()
        .zip(choice)
        .map(|(l, &m)| &l.realizations[m])
        .collect();
    // Valid tuples: one path per leg, no ij-cycle, ordering preserved.
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    for tuple in chosen
        .iter()
        .map(|r| 0..r.paths().len())
        .multi_cartesian_product()
    {
        let path_legs: Vec<SimplePath> = tuple
            .iter()
            .enumerate()
            .map(|(leg, &p)| chosen[leg].paths()[p].clone())
            .collect();
        let sfp = SequenceFlowPath { legs: path_legs };
        if sfp.is_valid(tp) {
            tuples.push(tuple);
        }
    }
    if tuples.is_empty() {
        return Vec::new();
    }

    // Pairwise compatibility: edge-disjoint and cycle-free under leg mixing.
    // An ij-cycle involves exactly two legs, so checking ordered pairs of
    // members covers every mixed tuple.
    let edge_bits: Vec<Bits> = tuples
        .iter()
        .map(|t| {
            let mut bits = Bits::new(tp.graph.edge_count());
            for (leg, &p) in t.iter().enumerate() {
                bits.or_assign(&tp.graph.edge_bits(&chosen[leg].paths()[p]));
            }
            bits
        })
        .collect();
    let materialize = |t: &[usize]| -> Vec<&SimplePath> {
        t.iter()
            .enumerate()
            .map(|(leg, &p)| &chosen[leg].paths()[p])
            .collect()
    };
    let waypoints = tp.waypoints();
    let cross_ok = |a: &[usize], b: &[usize]| -> bool {
        let la = materialize(a);
        let lb = materialize(b);
        for i in 0..la.len() {
            for j in i + 1..lb.len() {
                if leg_pair_cycles(la[i], i, lb[j], j, waypoints)
                    || leg_pair_cycles(lb[i], i, la[j], j, waypoints)
                {
                    return false;
                }
            }
        }
        true
    };
    let k = tuples.len();
    let mut compat = vec![vec![false; k]; k];
    for a in 0..k {
        for b in a + 1..k {
            compat[a][b] = !edge_bits[a].intersects(&edge_bits[b]) && cross_ok(&tuples[a], &tuples[b]);
            compat[b][a] = compat[a][b];
        }
    }

    // Maximal cliques of the compatibility graph, enumerated in ascending
    // index order.
    let mut sets = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    fn dfs(
        k: usize,
        compat: &[Vec<bool>],
        start: usize,
        current: &mut Vec<usize>,
        sets: &mut Vec<Vec<usize>>,
    ) {
        let fits = |t: usize, current: &[usize]| current.iter().all(|&c| compat[c][t]);
        let maximal = (0..k).all(|t| current.contains(&t) || !fits(t, current));
        if maximal && !current.is_empty() {
            sets.push(current.clone());
        }
        for t in start..k {
            if fits(t, current) {
                current.push(t);
                dfs(k, compat, t + 1, current, sets);
                current.pop();
            }
        }
    }
    dfs(k, &compat, 0, &mut current, &mut sets);

    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    sets.into_iter()
        .map(|rows| SequenceFlowSet {
            members: rows.into_iter().map(|r| tuples[r].clone()).collect(),
        })
        .collect()
}

/// The maximum sequence flow value of `g` under the waypoints of `tp`,
/// computed from the all-paths catalog; zero when no sequence flow exists.
pub fn max_sequence_flow_value(
    g: &DirectedGraph,
    tp: &TestProblem,
    limit: usize,
) -> Result<usize> {
    match sequence_flows(&tp.with_graph(g.clone()), PathMode::AllPaths, limit) {
        Ok(catalog) => Ok(catalog.max_value),
        Err(Error::EmptyCatalog { .. }) => Ok(0),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testgraphs::{chain_problem, fig2_problem, fig3_problem};

    fn path(tp: &TestProblem, names: &[&str]) -> SimplePath {
        SimplePath::new(&tp.graph, names).unwrap()
    }

    #[test]
    fn ij_cycle_cases() {
        // Shared interior vertex between legs is a cycle; the junction
        // waypoint between consecutive legs is not.
        let g = DirectedGraph::new(
            ["v1", "u", "v2", "v3"],
            [
                ("v1", "u"),
                ("u", "v2"),
                ("v2", "u"),
                ("u", "v3"),
                ("v1", "v2"),
                ("v2", "v3"),
            ],
        )
        .unwrap();
        let labeled = crate::model::LabeledGraph::identity(g);
        let tp = labeled.resolve(&["v1", "v2"], "v3").unwrap();
        let wps = tp.waypoints();

        let legs = [path(&tp, &["v1", "u", "v2"]), path(&tp, &["v2", "u", "v3"])];
        assert!(has_ij_cycle(&legs, wps));

        let legs = [path(&tp, &["v1", "v2"]), path(&tp, &["v2", "v3"])];
        assert!(!has_ij_cycle(&legs, wps));

        let legs = [path(&tp, &["v1", "u", "v2"]), path(&tp, &["v2", "v3"])];
        assert!(!has_ij_cycle(&legs, wps));
    }

    #[test]
    fn chain_catalog() {
        let tp = chain_problem();
        let catalog = sequence_flows(&tp, PathMode::AllPaths, 1000).unwrap();
        assert_eq!(catalog.count(), 1);
        assert_eq!(catalog.max_value, 1);
        assert_eq!(catalog.combinations[0].flows.len(), 1);
    }

    #[test]
    fn fig3_catalog() {
        let tp = fig3_problem();
        let catalog = sequence_flows(&tp, PathMode::AllPaths, 1000).unwrap();
        assert_eq!(catalog.count(), 1);
        assert_eq!(catalog.max_value, 1);
        let combo = &catalog.combinations[0];
        let realizations = catalog.chosen_realizations(combo);
        assert_eq!(
            realizations[0].paths()[0].vertex_names(&tp.graph),
            vec!["q0", "v2", "w"]
        );
        assert_eq!(
            realizations[1].paths()[0].vertex_names(&tp.graph),
            vec!["w", "v6", "g"]
        );
        assert_eq!(combo.flows.len(), 1);
        assert_eq!(combo.flows[0].members, vec![vec![0, 0]]);
    }

    #[test]
    fn fig2_is_infeasible() {
        let tp = fig2_problem();
        // The second leg has no flow once v1 is excluded.
        assert!(matches!(
            sequence_flows(&tp, PathMode::AllPaths, 1000),
            Err(Error::EmptyCatalog { leg: 2, .. })
        ));
        assert_eq!(max_sequence_flow_value(&tp.graph, &tp, 1000).unwrap(), 0);
    }

    #[test]
    fn fig2_legs_through_waypoints_would_cycle() {
        // Even if the middle leg were allowed to pass through v1, the pair
        // ([v1,v2], [v2,v1,vg]) fails the induced distance ordering.
        let tp = fig2_problem();
        let sfp = SequenceFlowPath {
            legs: vec![path(&tp, &["v1", "v2"]), path(&tp, &["v2", "v1", "vg"])],
        };
        assert!(!sfp.is_valid(&tp));
    }

    #[test]
    fn cycling_combination_contributes_nothing() {
        // Two realizations for the middle leg; one shares an interior vertex
        // with the first leg and yields no sequence flow, the other does.
        let g = DirectedGraph::new(
            ["a", "x", "b", "m", "y", "c"],
            [
                ("a", "x"),
                ("x", "b"),
                ("b", "m"),
                ("m", "x"),
                ("m", "y"),
                ("x", "c"),
                ("y", "c"),
            ],
        )
        .unwrap();
        let labeled = crate::model::LabeledGraph::identity(g);
        let tp = labeled.resolve(&["a", "b"], "c").unwrap();
        let catalog = sequence_flows(&tp, PathMode::AllPaths, 1000).unwrap();
        assert_eq!(catalog.count(), 2);
        assert_eq!(catalog.max_value, 1);
        let bests: Vec<usize> = catalog.combinations.iter().map(|c| c.best).collect();
        assert_eq!(bests, vec![1, 0], "achieving combination sorted first");
    }

    #[test]
    fn bound_by_min_leg_flow() {
        let tp = fig3_problem();
        let catalog = sequence_flows(&tp, PathMode::AllPaths, 1000).unwrap();
        let min_leg = catalog.legs.iter().map(|l| l.max_flow).min().unwrap();
        assert!(catalog.max_value <= min_leg);
    }

    #[test]
    fn combination_budget() {
        let tp = fig3_problem();
        assert!(matches!(
            sequence_flows(&tp, PathMode::AllPaths, 0),
            Err(Error::EnumerationBudgetExceeded { .. })
        ));
    }
}
