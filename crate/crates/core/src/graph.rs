//! Unit-capacity directed graphs with maximum-flow search, minimum-cut edge
//! identification, and enumeration of flow realizations.
//!
//! Every edge carries capacity one, so a maximum flow from `s` to `t` is
//! witnessed by a set of pairwise edge-disjoint simple paths. All operations
//! are deterministic: ties are broken by vertex insertion order, then by edge
//! insertion order.

use std::collections::HashMap;
use std::collections::VecDeque;

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Hop-count distance between two vertices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl std::fmt::Display for Distance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

/// Serialized as the hop count, or `null` when unreachable.
impl serde::Serialize for Distance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u64(*d as u64),
            Distance::Infinite => s.serialize_none(),
        }
    }
}

/// Which candidate paths an enumeration draws from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PathMode {
    /// All simple paths between the endpoints.
    AllPaths,
    /// Only paths of minimum hop count.
    ShortestPaths,
}

/// A directed graph with unit capacity on every edge.
///
/// Vertex identifiers are opaque strings; internally vertices are numbered in
/// insertion order and that numbering is stable across the derived subgraphs
/// produced by [`DirectedGraph::excluding_vertices`] and
/// [`DirectedGraph::without_edges`].
#[derive(Clone, Debug)]
pub struct DirectedGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl DirectedGraph {
    /// Builds a graph from vertex names and directed edges.
    ///
    /// Rejects duplicate vertices, duplicate edges, self-loops, and edges with
    /// undeclared endpoints.
    pub fn new<V, E, S, A, B>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = S>,
        E: IntoIterator<Item = (A, B)>,
        S: Into<String>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut names = Vec::new();
        let mut index = HashMap::new();
        for v in vertices {
            let v = v.into();
            if index.contains_key(&v) {
                return Err(Error::DuplicateVertex(v));
            }
            index.insert(v.clone(), names.len());
            names.push(v);
        }
        let mut g = DirectedGraph {
            succ: vec![Vec::new(); names.len()],
            pred: vec![Vec::new(); names.len()],
            names,
            index,
            edges: Vec::new(),
            edge_index: HashMap::new(),
        };
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let u = *g
                .index
                .get(a)
                .ok_or_else(|| Error::UndeclaredEndpoint(a.to_string()))?;
            let v = *g
                .index
                .get(b)
                .ok_or_else(|| Error::UndeclaredEndpoint(b.to_string()))?;
            if u == v {
                return Err(Error::SelfLoop(a.to_string()));
            }
            if g.edge_index.contains_key(&(u, v)) {
                return Err(Error::DuplicateEdge(a.to_string(), b.to_string()));
            }
            g.edge_index.insert((u, v), g.edges.len());
            g.edges.push((u, v));
            g.succ[u].push(v);
            g.pred[v].push(u);
        }
        for list in g.succ.iter_mut().chain(g.pred.iter_mut()) {
            list.sort_unstable();
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(|s| s.as_str())
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    fn require_vertex(&self, name: &str) -> Result<usize> {
        self.vertex_index(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Edges as vertex-index pairs, in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges as name pairs, in insertion order.
    pub fn edge_names(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges
            .iter()
            .map(|&(u, v)| (self.names[u].as_str(), self.names[v].as_str()))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index.contains_key(&(u, v))
    }

    pub fn edge_position(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_index.get(&(u, v)).copied()
    }

    pub fn successors(&self, u: usize) -> &[usize] {
        &self.succ[u]
    }

    /// A copy of this graph with the given edges removed. Edges absent from
    /// the graph are ignored. Vertex numbering is unchanged.
    pub fn without_edges(&self, remove: &[(usize, usize)]) -> DirectedGraph {
        let kept = self
            .edges
            .iter()
            .filter(|e| !remove.contains(e))
            .map(|&(u, v)| (self.names[u].clone(), self.names[v].clone()));
        DirectedGraph::new(self.names.clone(), kept.collect::<Vec<_>>())
            .expect("subgraph of a valid graph is valid")
    }

    /// A copy of this graph with all edges incident to the given vertices
    /// removed. The vertices themselves stay in the index space, so paths and
    /// indices remain comparable with the parent graph; for flows and
    /// distances an isolated vertex is equivalent to a deleted one.
    pub fn excluding_vertices(&self, remove: &[usize]) -> DirectedGraph {
        let kept = self
            .edges
            .iter()
            .filter(|(u, v)| !remove.contains(u) && !remove.contains(v))
            .map(|&(u, v)| (self.names[u].clone(), self.names[v].clone()));
        DirectedGraph::new(self.names.clone(), kept.collect::<Vec<_>>())
            .expect("subgraph of a valid graph is valid")
    }

    /// Hop count of a shortest directed path from `u` to `v`; zero when the
    /// endpoints coincide.
    pub fn shortest_distance(&self, u: &str, v: &str) -> Result<Distance> {
        Ok(self.shortest_distance_idx(self.require_vertex(u)?, self.require_vertex(v)?))
    }

    pub(crate) fn shortest_distance_idx(&self, u: usize, v: usize) -> Distance {
        match self.bfs_distances(u)[v] {
            Some(d) => Distance::Finite(d),
            None => Distance::Infinite,
        }
    }

    fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.names.len()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.succ[u] {
                if dist[v].is_none() {
                    dist[v] = Some(dist[u].unwrap() + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Distances from every vertex to `dst`, following edges forward.
    pub(crate) fn distances_to(&self, dst: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.names.len()];
        dist[dst] = Some(0);
        let mut queue = VecDeque::from([dst]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.pred[u] {
                if dist[v].is_none() {
                    dist[v] = Some(dist[u].unwrap() + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Maximum flow from `s` to `t` found by shortest-augmenting-path search,
    /// decomposed into pairwise edge-disjoint simple paths.
    pub fn max_flow(&self, s: &str, t: &str) -> Result<FlowRealization> {
        Ok(self.max_flow_idx(self.require_vertex(s)?, self.require_vertex(t)?))
    }

    pub(crate) fn max_flow_idx(&self, s: usize, t: usize) -> FlowRealization {
        let mut residual = ResidualNetwork::new(self);
        while let Some(arcs) = residual.shortest_augmenting_path(s, t) {
            residual.augment(&arcs);
        }
        let paths = residual.decompose(s, t);
        FlowRealization {
            source: s,
            sink: t,
            paths,
        }
    }

    /// Exactly the edges whose individual removal strictly decreases the
    /// maximum flow from `s` to `t`, in edge insertion order.
    pub fn min_cut_edges(&self, s: &str, t: &str) -> Result<Vec<(usize, usize)>> {
        let (s, t) = (self.require_vertex(s)?, self.require_vertex(t)?);
        Ok(self.min_cut_edges_idx(s, t))
    }

    pub(crate) fn min_cut_edges_idx(&self, s: usize, t: usize) -> Vec<(usize, usize)> {
        let base = self.max_flow_idx(s, t).value();
        if base == 0 {
            return Vec::new();
        }
        self.edges
            .iter()
            .copied()
            .filter(|&e| self.without_edges(&[e]).max_flow_idx(s, t).value() < base)
            .collect()
    }

    /// Every maximal set of pairwise edge-disjoint `s`–`t` paths whose
    /// cardinality equals the maximum flow value, drawn from all simple paths
    /// or from all shortest paths.
    ///
    /// `limit` bounds both the number of candidate paths and the number of
    /// realizations produced.
    pub fn enumerate_flow_realizations(
        &self,
        s: &str,
        t: &str,
        mode: PathMode,
        limit: usize,
    ) -> Result<Vec<FlowRealization>> {
        let (s, t) = (self.require_vertex(s)?, self.require_vertex(t)?);
        self.enumerate_flow_realizations_idx(s, t, mode, limit)
    }

    pub(crate) fn enumerate_flow_realizations_idx(
        &self,
        s: usize,
        t: usize,
        mode: PathMode,
        limit: usize,
    ) -> Result<Vec<FlowRealization>> {
        let value = self.max_flow_idx(s, t).value();
        if value == 0 {
            // The empty set is the sole realization of a zero flow.
            return Ok(vec![FlowRealization {
                source: s,
                sink: t,
                paths: Vec::new(),
            }]);
        }
        let candidates = match mode {
            PathMode::AllPaths => self.simple_paths_idx(s, t, limit)?,
            PathMode::ShortestPaths => self.shortest_paths_idx(s, t, limit)?,
        };
        let sets = disjoint_path_sets(self, &candidates, value, limit)?;
        Ok(sets
            .into_iter()
            .map(|paths| FlowRealization {
                source: s,
                sink: t,
                paths,
            })
            .collect())
    }

    /// All simple paths from `s` to `t`, ordered by (length, vertex sequence).
    pub fn simple_paths(&self, s: &str, t: &str, limit: usize) -> Result<Vec<SimplePath>> {
        let (s, t) = (self.require_vertex(s)?, self.require_vertex(t)?);
        self.simple_paths_idx(s, t, limit)
    }

    pub(crate) fn simple_paths_idx(
        &self,
        s: usize,
        t: usize,
        limit: usize,
    ) -> Result<Vec<SimplePath>> {
        // Prune branches that can no longer reach t.
        let reach = self.distances_to(t);
        let mut paths = Vec::new();
        if reach[s].is_none() {
            return Ok(paths);
        }
        let mut on_path = vec![false; self.names.len()];
        on_path[s] = true;
        let mut stack = vec![s];
        let step_cap = limit.saturating_mul(500).max(1_000_000);
        let mut steps = 0usize;
        self.path_dfs(
            s,
            t,
            &reach,
            &mut on_path,
            &mut stack,
            &mut paths,
            limit,
            step_cap,
            &mut steps,
            None,
        )?;
        sort_paths(&mut paths);
        Ok(paths)
    }

    /// All shortest paths from `s` to `t`, same ordering as
    /// [`DirectedGraph::simple_paths`].
    pub(crate) fn shortest_paths_idx(
        &self,
        s: usize,
        t: usize,
        limit: usize,
    ) -> Result<Vec<SimplePath>> {
        let reach = self.distances_to(t);
        let mut paths = Vec::new();
        if reach[s].is_none() {
            return Ok(paths);
        }
        let mut on_path = vec![false; self.names.len()];
        on_path[s] = true;
        let mut stack = vec![s];
        let step_cap = limit.saturating_mul(500).max(1_000_000);
        let mut steps = 0usize;
        self.path_dfs(
            s,
            t,
            &reach,
            &mut on_path,
            &mut stack,
            &mut paths,
            limit,
            step_cap,
            &mut steps,
            Some(()),
        )?;
        sort_paths(&mut paths);
        Ok(paths)
    }

    #[allow(clippy::too_many_arguments)]
    fn path_dfs(
        &self,
        u: usize,
        t: usize,
        reach: &[Option<usize>],
        on_path: &mut Vec<bool>,
        stack: &mut Vec<usize>,
        paths: &mut Vec<SimplePath>,
        limit: usize,
        step_cap: usize,
        steps: &mut usize,
        descend_only: Option<()>,
    ) -> Result<()> {
        if u == t {
            if paths.len() == limit {
                return Err(Error::EnumerationBudgetExceeded {
                    count: limit + 1,
                    limit,
                });
            }
            paths.push(SimplePath {
                verts: stack.clone(),
            });
            return Ok(());
        }
        for &v in &self.succ[u] {
            *steps += 1;
            if *steps > step_cap {
                return Err(Error::EnumerationBudgetExceeded {
                    count: paths.len(),
                    limit,
                });
            }
            if on_path[v] || reach[v].is_none() {
                continue;
            }
            if descend_only.is_some() && reach[v] != Some(reach[u].unwrap() - 1) {
                continue;
            }
            on_path[v] = true;
            stack.push(v);
            self.path_dfs(
                v, t, reach, on_path, stack, paths, limit, step_cap, steps, descend_only,
            )?;
            stack.pop();
            on_path[v] = false;
        }
        Ok(())
    }

    pub(crate) fn edge_bits(&self, path: &SimplePath) -> Bits {
        let mut bits = Bits::new(self.edges.len());
        for (u, v) in path.edge_pairs() {
            bits.set(self.edge_index[&(u, v)]);
        }
        bits
    }
}

fn sort_paths(paths: &mut [SimplePath]) {
    paths.sort_by(|a, b| {
        a.verts
            .len()
            .cmp(&b.verts.len())
            .then_with(|| a.verts.cmp(&b.verts))
    });
}

/// All maximal sets of exactly `size` pairwise edge-disjoint paths drawn from
/// `candidates`, in lexicographic order of candidate indices.
fn disjoint_path_sets(
    g: &DirectedGraph,
    candidates: &[SimplePath],
    size: usize,
    limit: usize,
) -> Result<Vec<Vec<SimplePath>>> {
    let bits: Vec<Bits> = candidates.iter().map(|p| g.edge_bits(p)).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let node_cap = limit.saturating_mul(500).max(1_000_000);
    let mut nodes = 0usize;

    fn rec(
        bits: &[Bits],
        candidates: &[SimplePath],
        start: usize,
        used: &Bits,
        chosen: &mut Vec<usize>,
        size: usize,
        out: &mut Vec<Vec<SimplePath>>,
        limit: usize,
        node_cap: usize,
        nodes: &mut usize,
    ) -> Result<()> {
        if chosen.len() == size {
            if out.len() == limit {
                return Err(Error::EnumerationBudgetExceeded {
                    count: limit + 1,
                    limit,
                });
            }
            out.push(chosen.iter().map(|&i| candidates[i].clone()).collect());
            return Ok(());
        }
        let need = size - chosen.len();
        for i in start..bits.len() {
            if bits.len() - i < need {
                break;
            }
            *nodes += 1;
            if *nodes > node_cap {
                return Err(Error::EnumerationBudgetExceeded {
                    count: out.len(),
                    limit,
                });
            }
            if bits[i].intersects(used) {
                continue;
            }
            let mut next = used.clone();
            next.or_assign(&bits[i]);
            chosen.push(i);
            rec(
                bits, candidates, i + 1, &next, chosen, size, out, limit, node_cap, nodes,
            )?;
            chosen.pop();
        }
        Ok(())
    }

    rec(
        &bits,
        candidates,
        0,
        &Bits::new(g.edge_count()),
        &mut chosen,
        size,
        &mut out,
        limit,
        node_cap,
        &mut nodes,
    )?;
    Ok(out)
}

/// A simple directed path: a nonempty vertex sequence without repeats.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct SimplePath {
    verts: Vec<usize>,
}

impl SimplePath {
    /// Validates that `names` traces existing edges without repeating a
    /// vertex.
    pub fn new(g: &DirectedGraph, names: &[&str]) -> Result<Self> {
        let mut verts = Vec::with_capacity(names.len());
        for n in names {
            verts.push(g.require_vertex(n)?);
        }
        if verts.is_empty() {
            return Err(Error::InvalidFormat {
                what: "path",
                detail: "empty vertex sequence".into(),
            });
        }
        let mut seen = vec![false; g.vertex_count()];
        for &v in &verts {
            if seen[v] {
                return Err(Error::InvalidFormat {
                    what: "path",
                    detail: format!("vertex `{}` repeats", g.vertex_name(v)),
                });
            }
            seen[v] = true;
        }
        for w in verts.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(Error::InvalidFormat {
                    what: "path",
                    detail: format!(
                        "missing edge ({}, {})",
                        g.vertex_name(w[0]),
                        g.vertex_name(w[1])
                    ),
                });
            }
        }
        Ok(SimplePath { verts })
    }

    pub(crate) fn from_indices(verts: Vec<usize>) -> Self {
        debug_assert!(!verts.is_empty());
        SimplePath { verts }
    }

    pub fn vertex_indices(&self) -> &[usize] {
        &self.verts
    }

    pub fn vertex_names<'g>(&self, g: &'g DirectedGraph) -> Vec<&'g str> {
        self.verts.iter().map(|&v| g.vertex_name(v)).collect()
    }

    pub fn first(&self) -> usize {
        self.verts[0]
    }

    pub fn last(&self) -> usize {
        *self.verts.last().unwrap()
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.verts.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edge_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.verts.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn contains_edge(&self, e: (usize, usize)) -> bool {
        self.edge_pairs().any(|p| p == e)
    }
}

/// A set of pairwise edge-disjoint simple paths witnessing a flow from
/// `source` to `sink`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowRealization {
    source: usize,
    sink: usize,
    paths: Vec<SimplePath>,
}

impl FlowRealization {
    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn paths(&self) -> &[SimplePath] {
        &self.paths
    }

    /// The flow value: the number of paths.
    pub fn value(&self) -> usize {
        self.paths.len()
    }
}

/// Residual network of a unit-capacity graph under a current flow.
pub struct ResidualNetwork<'g> {
    base: &'g DirectedGraph,
    flow: Vec<bool>,
}

/// One residual arc on an augmenting path.
#[derive(Clone, Copy)]
struct Arc {
    edge: usize,
    forward: bool,
}

impl<'g> ResidualNetwork<'g> {
    pub fn new(base: &'g DirectedGraph) -> Self {
        ResidualNetwork {
            base,
            flow: vec![false; base.edge_count()],
        }
    }

    /// Residual capacity of the ordered pair `(u, v)`:
    /// `c(u,v) - f(u,v)` on forward edges, `f(v,u)` on reverse edges, zero
    /// otherwise.
    pub fn residual_capacity(&self, u: usize, v: usize) -> u8 {
        if let Some(e) = self.base.edge_position(u, v) {
            return if self.flow[e] { 0 } else { 1 };
        }
        if let Some(e) = self.base.edge_position(v, u) {
            return if self.flow[e] { 1 } else { 0 };
        }
        0
    }

    /// Breadth-first search for a shortest augmenting path, exploring forward
    /// arcs before reverse arcs and neighbors in vertex order.
    fn shortest_augmenting_path(&self, s: usize, t: usize) -> Option<Vec<Arc>> {
        let n = self.base.vertex_count();
        let mut parent: Vec<Option<(usize, Arc)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &v in self.base.successors(u) {
                let e = self.base.edge_position(u, v).unwrap();
                if !seen[v] && !self.flow[e] {
                    seen[v] = true;
                    parent[v] = Some((u, Arc { edge: e, forward: true }));
                    queue.push_back(v);
                }
            }
            for &w in &self.base.pred[u] {
                let e = self.base.edge_position(w, u).unwrap();
                if !seen[w] && self.flow[e] {
                    seen[w] = true;
                    parent[w] = Some((u, Arc { edge: e, forward: false }));
                    queue.push_back(w);
                }
            }
        }
        if !seen[t] {
            return None;
        }
        let mut arcs = Vec::new();
        let mut v = t;
        while v != s {
            let (u, arc) = parent[v].unwrap();
            arcs.push(arc);
            v = u;
        }
        arcs.reverse();
        Some(arcs)
    }

    fn augment(&mut self, arcs: &[Arc]) {
        for arc in arcs {
            self.flow[arc.edge] = arc.forward;
        }
    }

    /// Decomposes the current flow into edge-disjoint simple `s`–`t` paths,
    /// cancelling flow cycles encountered along the way.
    fn decompose(&mut self, s: usize, t: usize) -> Vec<SimplePath> {
        let mut paths = Vec::new();
        loop {
            let Some(first) = self.take_flow_edge(s) else {
                break;
            };
            let mut verts = vec![s, first];
            let mut pos: HashMap<usize, usize> = HashMap::from([(s, 0), (first, 1)]);
            while *verts.last().unwrap() != t {
                let cur = *verts.last().unwrap();
                let next = self
                    .take_flow_edge(cur)
                    .expect("flow conservation guarantees an outgoing flow edge");
                if let Some(&k) = pos.get(&next) {
                    // A flow cycle: drop it and resume from its entry point.
                    for v in verts.drain(k + 1..) {
                        pos.remove(&v);
                    }
                } else {
                    pos.insert(next, verts.len());
                    verts.push(next);
                }
            }
            paths.push(SimplePath::from_indices(verts));
        }
        paths
    }

    /// Removes and returns the smallest-index successor of `u` still carrying
    /// flow.
    fn take_flow_edge(&mut self, u: usize) -> Option<usize> {
        for &v in self.base.successors(u) {
            let e = self.base.edge_position(u, v).unwrap();
            if self.flow[e] {
                self.flow[e] = false;
                return Some(v);
            }
        }
        None
    }
}
