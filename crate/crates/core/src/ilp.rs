//! Exact 0-1 integer program deciding which candidate edges to cut.
//!
//! Variables: `x` picks edges to constrain, `b` marks kept augmenting paths
//! that lost a minimum-cut edge, `f` marks sequence flow paths that survive.
//! The constraints (`A_cut x >= 1`, `A_keep x <= D_keep b`, `b <= A_keep x`,
//! `D_f f <= A_f (1 - b)`, `f >= A_f (1 - b) - D_f 1 + 1`) force `b` and `f`
//! to be exact functions of `x`, so the solver searches over `x` alone: it
//! maximizes the number of surviving sequence flow paths, then minimizes the
//! number of cut edges, then prefers the earliest edges in column order.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::graph::SimplePath;
use crate::seqflow::{SequenceFlowCatalog, SequenceFlowSet};

/// Paths that must be severed, plus the deduplicated list of their edges in
/// first-appearance order. The edge list fixes the column order of every
/// matrix built from this set.
#[derive(Clone, Debug)]
pub struct CutCandidateSet {
    pub paths: Vec<SimplePath>,
    pub edges: Vec<(usize, usize)>,
}

impl CutCandidateSet {
    pub fn new(paths: Vec<SimplePath>) -> Self {
        let mut edges = Vec::new();
        for p in &paths {
            for e in p.edge_pairs() {
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
        CutCandidateSet { paths, edges }
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// Problem data of one solver call, built per Appendix-style membership
/// rules from the cut candidates, one realization combination, the per-leg
/// minimum-cut edges, and one sequence flow.
#[derive(Clone, Debug)]
pub struct IlpInstance {
    /// Row per cut path, column per cut-candidate edge.
    pub a_cut: Vec<Vec<bool>>,
    /// Row per kept augmenting path; entries restricted to minimum-cut
    /// edges of the path's leg.
    pub a_keep: Vec<Vec<bool>>,
    /// Diagonal of `diag(A_keep 1)`: per-row counts of `a_keep`.
    pub d_keep: Vec<usize>,
    /// Row per sequence flow path, column per kept path.
    pub a_f: Vec<Vec<bool>>,
    /// Diagonal of `diag(A_f 1)`: always the number of legs.
    pub d_f: Vec<usize>,
    /// Column order: the cut-candidate edges.
    pub e_cut: Vec<(usize, usize)>,
    /// Leg sizes `n_i`; kept-path rows are grouped leg by leg.
    pub leg_sizes: Vec<usize>,
    /// Full edge membership of each kept path over the `e_cut` columns
    /// (unlike `a_keep`, not restricted to minimum-cut edges). Bookkeeping
    /// for the survival check in synthesis.
    pub keep_path_cols: Vec<Vec<bool>>,
}

impl IlpInstance {
    pub fn num_edges(&self) -> usize {
        self.e_cut.len()
    }

    pub fn num_keep_paths(&self) -> usize {
        self.a_keep.len()
    }

    pub fn num_flow_paths(&self) -> usize {
        self.a_f.len()
    }
}

/// Builds the matrices for one (combination, sequence flow) pair.
///
/// `mc_keep[i]` must hold the minimum-cut edges of leg `i` computed on the
/// same subgraph as the leg's flow.
pub fn build_ilp_instance(
    cut: &CutCandidateSet,
    catalog: &SequenceFlowCatalog,
    combination: &crate::seqflow::Combination,
    mc_keep: &[Vec<(usize, usize)>],
    flow: &SequenceFlowSet,
) -> Result<IlpInstance> {
    let chosen = catalog.chosen_realizations(combination);
    let leg_sizes: Vec<usize> = chosen.iter().map(|r| r.value()).collect();
    let m: usize = leg_sizes.iter().sum();
    for member in &flow.members {
        if member.len() != leg_sizes.len() {
            return Err(Error::InconsistentDimensions {
                expected: leg_sizes.len(),
                got: member.len(),
            });
        }
    }

    let a_cut: Vec<Vec<bool>> = cut
        .paths
        .iter()
        .map(|p| cut.edges.iter().map(|&e| p.contains_edge(e)).collect())
        .collect();

    let mut a_keep = Vec::with_capacity(m);
    let mut keep_path_cols = Vec::with_capacity(m);
    for (leg, realization) in chosen.iter().enumerate() {
        for path in realization.paths() {
            let row: Vec<bool> = cut
                .edges
                .iter()
                .map(|&e| path.contains_edge(e) && mc_keep[leg].contains(&e))
                .collect();
            a_keep.push(row);
            keep_path_cols.push(cut.edges.iter().map(|&e| path.contains_edge(e)).collect());
        }
    }
    let d_keep: Vec<usize> = a_keep
        .iter()
        .map(|row| row.iter().filter(|&&b| b).count())
        .collect();

    let offsets: Vec<usize> = leg_sizes
        .iter()
        .scan(0, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    let a_f: Vec<Vec<bool>> = flow
        .members
        .iter()
        .map(|member| {
            let mut row = vec![false; m];
            for (leg, &p) in member.iter().enumerate() {
                row[offsets[leg] + p] = true;
            }
            row
        })
        .collect();
    let d_f: Vec<usize> = a_f
        .iter()
        .map(|row| row.iter().filter(|&&b| b).count())
        .collect();

    Ok(IlpInstance {
        a_cut,
        a_keep,
        d_keep,
        a_f,
        d_f,
        e_cut: cut.edges.clone(),
        leg_sizes,
        keep_path_cols,
    })
}

/// An optimal assignment. `objective` is the number of surviving sequence
/// flow paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpSolution {
    pub x: Vec<bool>,
    pub b: Vec<bool>,
    pub f: Vec<bool>,
    pub objective: usize,
}

impl IlpSolution {
    /// Verifies all five constraint families on this assignment.
    pub fn satisfies(&self, inst: &IlpInstance) -> bool {
        let xi: Vec<usize> = self.x.iter().map(|&b| b as usize).collect();
        let dot = |row: &[bool], v: &[usize]| -> usize {
            row.iter().zip(v).map(|(&r, &x)| (r as usize) * x).sum()
        };
        for row in &inst.a_cut {
            if dot(row, &xi) < 1 {
                return false;
            }
        }
        for (q, row) in inst.a_keep.iter().enumerate() {
            let lhs = dot(row, &xi);
            if lhs > inst.d_keep[q] * (self.b[q] as usize) {
                return false;
            }
            if (self.b[q] as usize) > lhs {
                return false;
            }
        }
        let not_b: Vec<usize> = self.b.iter().map(|&b| 1 - b as usize).collect();
        for (q, row) in inst.a_f.iter().enumerate() {
            let free = dot(row, &not_b);
            let fq = self.f[q] as usize;
            if inst.d_f[q] * fq > free {
                return false;
            }
            // f >= A_f(1-b) - D_f 1 + 1, elementwise.
            if (fq as isize) < free as isize - inst.d_f[q] as isize + 1 {
                return false;
            }
        }
        true
    }
}

/// Tie-breaking policy among objective-optimal solutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    /// Fewest cut edges, then the earliest edge indices in column order.
    MinimizeCuts,
}

/// Solves the program exactly.
///
/// Because `b` and `f` are determined by `x`, the search enumerates survivor
/// sets of sequence flow rows from largest to smallest; a survivor set is
/// feasible when every cut path still has a selectable edge outside the
/// protected minimum-cut columns, and the cheapest `x` for it is an exact
/// minimum hitting set.
pub fn solve_ilp(inst: &IlpInstance, _tie: TieBreak) -> Result<IlpSolution> {
    let n_cols = inst.num_edges();
    let cut_rows: Vec<Bits> = inst.a_cut.iter().map(|r| row_bits(r, n_cols)).collect();
    if cut_rows.iter().any(Bits::is_empty) {
        return Err(Error::Infeasible);
    }
    let keep_rows: Vec<Bits> = inst.a_keep.iter().map(|r| row_bits(r, n_cols)).collect();
    let l = inst.num_flow_paths();

    // Columns that must stay uncut for a survivor set: the minimum-cut
    // columns of every kept path used by a surviving row.
    let forbidden = |rows: &[usize]| -> Bits {
        let mut z = Bits::new(n_cols);
        for &q in rows {
            for (p, &used) in inst.a_f[q].iter().enumerate() {
                if used {
                    z.or_assign(&keep_rows[p]);
                }
            }
        }
        z
    };

    for target in (0..=l).rev() {
        let mut best: Option<Vec<usize>> = None;
        for rows in combinations(l, target) {
            let z = forbidden(&rows);
            let allowed: Vec<Bits> = cut_rows
                .iter()
                .map(|r| {
                    let mut a = r.clone();
                    a.and_not_assign(&z);
                    a
                })
                .collect();
            if allowed.iter().any(Bits::is_empty) {
                continue;
            }
            let hs = min_hitting_set(&allowed, best.as_ref().map(Vec::len));
            if let Some(hs) = hs {
                if better(&hs, best.as_deref()) {
                    best = Some(hs);
                }
            }
        }
        if let Some(cols) = best {
            let mut x = vec![false; n_cols];
            for c in cols {
                x[c] = true;
            }
            return Ok(assemble(inst, &keep_rows, x));
        }
    }
    unreachable!("the empty survivor set is always feasible once A_cut rows are nonempty")
}

/// Like [`solve_ilp`], but only accepts assignments under which `target`
/// surviving sequence flow rows keep **every** edge of their constituent
/// paths, not just their minimum-cut edges.
///
/// The plain program lets several individually redundant edges of a kept
/// path be cut at once, which can sever the flow it claims to preserve; an
/// assignment found here guarantees the surviving rows remain physically
/// present after the cut. Returns `None` when no such assignment exists at
/// this target. When one exists, it is also an optimum of the plain program
/// whenever `target` equals the plain optimum.
pub fn solve_ilp_protected(inst: &IlpInstance, target: usize) -> Option<IlpSolution> {
    let n_cols = inst.num_edges();
    let cut_rows: Vec<Bits> = inst.a_cut.iter().map(|r| row_bits(r, n_cols)).collect();
    if cut_rows.iter().any(Bits::is_empty) {
        return None;
    }
    let keep_rows: Vec<Bits> = inst.a_keep.iter().map(|r| row_bits(r, n_cols)).collect();
    let path_cols: Vec<Bits> = inst
        .keep_path_cols
        .iter()
        .map(|r| row_bits(r, n_cols))
        .collect();
    let l = inst.num_flow_paths();
    if target > l {
        return None;
    }

    let mut best: Option<Vec<usize>> = None;
    for rows in combinations(l, target) {
        let mut z = Bits::new(n_cols);
        for &q in &rows {
            for (p, &used) in inst.a_f[q].iter().enumerate() {
                if used {
                    z.or_assign(&path_cols[p]);
                }
            }
        }
        let allowed: Vec<Bits> = cut_rows
            .iter()
            .map(|r| {
                let mut a = r.clone();
                a.and_not_assign(&z);
                a
            })
            .collect();
        if allowed.iter().any(Bits::is_empty) {
            continue;
        }
        if let Some(hs) = min_hitting_set(&allowed, best.as_ref().map(Vec::len)) {
            if better(&hs, best.as_deref()) {
                best = Some(hs);
            }
        }
    }
    best.map(|cols| {
        let mut x = vec![false; n_cols];
        for c in cols {
            x[c] = true;
        }
        assemble(inst, &keep_rows, x)
    })
}

fn row_bits(row: &[bool], n: usize) -> Bits {
    let mut b = Bits::new(n);
    for (i, &on) in row.iter().enumerate() {
        if on {
            b.set(i);
        }
    }
    b
}

/// `chosen` is strictly better than the incumbent under (size, columns).
fn better(chosen: &[usize], incumbent: Option<&[usize]>) -> bool {
    match incumbent {
        None => true,
        Some(inc) => match chosen.len().cmp(&inc.len()) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => chosen < inc,
        },
    }
}

/// Exact minimum hitting set over the rows, preferring fewer columns and
/// then the lexicographically earliest column list. `cap` prunes branches
/// that cannot beat an incumbent size.
fn min_hitting_set(rows: &[Bits], cap: Option<usize>) -> Option<Vec<usize>> {
    let mut best: Option<Vec<usize>> = None;
    let mut chosen: Vec<usize> = Vec::new();
    fn dfs(
        rows: &[Bits],
        covered: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        best: &mut Option<Vec<usize>>,
        cap: Option<usize>,
    ) {
        let next = (0..rows.len()).find(|&r| !covered[r]);
        let Some(next) = next else {
            if better(chosen, best.as_deref()) {
                *best = Some(chosen.clone());
            }
            return;
        };
        let bound = best.as_ref().map(Vec::len).or(cap);
        if let Some(b) = bound {
            if chosen.len() + 1 > b {
                return;
            }
        }
        let cols: Vec<usize> = rows[next].iter_ones().collect();
        for c in cols {
            let newly: Vec<usize> = (0..rows.len())
                .filter(|&r| !covered[r] && rows[r].get(c))
                .collect();
            for &r in &newly {
                covered[r] = true;
            }
            chosen.push(c);
            dfs(rows, covered, chosen, best, cap);
            chosen.pop();
            for &r in &newly {
                covered[r] = false;
            }
        }
    }
    let mut covered = vec![false; rows.len()];
    dfs(rows, &mut covered, &mut chosen, &mut best, cap);
    best
}

/// All `size`-subsets of `0..l` in lexicographic order.
fn combinations(l: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(l: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..l {
            if l - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(l, size, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(l, size, 0, &mut cur, &mut out);
    out
}

/// Derives `b` and `f` from `x` and packages the solution.
fn assemble(inst: &IlpInstance, keep_rows: &[Bits], x: Vec<bool>) -> IlpSolution {
    let mut xb = Bits::new(inst.num_edges());
    for (i, &on) in x.iter().enumerate() {
        if on {
            xb.set(i);
        }
    }
    let b: Vec<bool> = keep_rows.iter().map(|r| r.intersects(&xb)).collect();
    let f: Vec<bool> = inst
        .a_f
        .iter()
        .map(|row| row.iter().zip(&b).all(|(&used, &hit)| !used || !hit))
        .collect();
    let objective = f.iter().filter(|&&v| v).count();
    IlpSolution { x, b, f, objective }
}
