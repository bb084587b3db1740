//! The containment relation: does a host matrix contain a pattern?
//!
//! A host `A` contains a pattern `P` when strictly increasing row and
//! column maps carry every 1 of `P` onto a 1 of `A`. The search backtracks
//! over pattern columns, assigning strictly increasing host columns, and
//! prunes each partial assignment with an order-preserving row-injection
//! check resolved greedily against per-column bitsets.
//!
//! Two passes run under the hood. A decision pass orders pattern columns
//! so that each column shares rows with an earlier one whenever possible,
//! which lets candidate host columns be generated from the sparse row
//! structure instead of scanned. When that pass finds the pattern, a
//! second pass in left-to-right column order recovers the canonical
//! witness: the lexicographically first `(colMap, rowMap)` pair.
//!
//! The search is budgeted. Exceeding the node budget yields
//! [`Outcome::Unknown`], never a wrong answer, and the outcome is
//! identical whether or not the top-level candidate loop runs in
//! parallel.

use crate::matrix::Matrix01;
use crate::pattern::Pattern;

/// A witness embedding: strictly increasing host row and column indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
}

/// Result of a containment search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The host contains the pattern; this is the lexicographically first
    /// witness under `(cols, rows)` order.
    Witness(Occurrence),
    /// The host provably avoids the pattern.
    Free,
    /// The node budget ran out before the search finished.
    Unknown,
}

impl Outcome {
    pub fn is_witness(&self) -> bool {
        matches!(self, Outcome::Witness(_))
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Outcome::Free)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Backtrack node budget; exceeding it returns [`Outcome::Unknown`].
    pub node_budget: u64,
    /// Split the first column's candidates across threads. No effect on
    /// the result.
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_budget: 1_000_000_000,
            parallel: cfg!(feature = "parallel"),
        }
    }
}

pub fn contains(p: &Pattern, a: &Matrix01) -> Outcome {
    contains_with(p, a, &SearchOptions::default())
}

pub fn contains_with(p: &Pattern, a: &Matrix01, opts: &SearchOptions) -> Outcome {
    if p.rows() > a.rows() || p.cols() > a.cols() {
        return Outcome::Free;
    }
    let identity: Vec<u32> = (0..p.cols() as u32).collect();
    let heuristic = linked_order(p);

    if heuristic == identity {
        let (res, _) = run(p, a, &identity, opts.node_budget, opts.parallel);
        return match res {
            RunResult::Found(occ) => Outcome::Witness(occ),
            RunResult::Exhausted => Outcome::Free,
            RunResult::Budget => Outcome::Unknown,
        };
    }

    let (decision, used) = run(p, a, &heuristic, opts.node_budget, opts.parallel);
    match decision {
        RunResult::Exhausted => Outcome::Free,
        RunResult::Budget => Outcome::Unknown,
        RunResult::Found(_) => {
            let remaining = opts.node_budget - used;
            match run(p, a, &identity, remaining, opts.parallel) {
                (RunResult::Found(occ), _) => Outcome::Witness(occ),
                (RunResult::Budget, _) => Outcome::Unknown,
                (RunResult::Exhausted, _) => {
                    unreachable!("canonical pass must find a witness the decision pass found")
                }
            }
        }
    }
}

/// Orders pattern columns so the heaviest column comes first and every
/// later column shares a row with an earlier one whenever the pattern
/// allows it. Columns left without row links (disconnected pieces,
/// zero-weight columns) go last.
fn linked_order(p: &Pattern) -> Vec<u32> {
    let l = p.cols();
    let col_rows: Vec<Vec<u32>> = (0..l as u32).map(|c| p.col_ones(c)).collect();
    let mut order: Vec<u32> = Vec::with_capacity(l);
    let mut placed = vec![false; l];
    let mut rows_seen = vec![false; p.rows()];

    let first = (0..l)
        .max_by_key(|&j| (col_rows[j].len(), std::cmp::Reverse(j)))
        .unwrap();
    order.push(first as u32);
    placed[first] = true;
    for &r in &col_rows[first] {
        rows_seen[r as usize] = true;
    }

    while order.len() < l {
        let next = (0..l)
            .filter(|&j| !placed[j])
            .max_by_key(|&j| {
                let links = col_rows[j]
                    .iter()
                    .filter(|&&r| rows_seen[r as usize])
                    .count();
                (links, col_rows[j].len(), std::cmp::Reverse(j))
            })
            .unwrap();
        order.push(next as u32);
        placed[next] = true;
        for &r in &col_rows[next] {
            rows_seen[r as usize] = true;
        }
    }
    order
}

enum RunResult {
    Found(Occurrence),
    Exhausted,
    Budget,
}

/// Runs one backtracking pass in the given column order. Returns the
/// result together with the number of nodes consumed, which is the same
/// figure the sequential run would report even when parallel.
fn run(p: &Pattern, a: &Matrix01, order: &[u32], budget: u64, parallel: bool) -> (RunResult, u64) {
    let mut root = Search::new(p, a, order, budget);
    let Some(g) = root.greedy_forward() else {
        return (RunResult::Exhausted, 0);
    };
    let root_cands = root.candidates(0, &g);

    let wide_enough = root_cands.len() >= 64;
    if !(parallel && wide_enough && cfg!(feature = "parallel")) {
        for &h in &root_cands {
            match root.try_candidate(0, h) {
                RunResult::Exhausted => continue,
                other => return (other, root.nodes),
            }
        }
        return (RunResult::Exhausted, root.nodes);
    }

    // Parallel: each first-column candidate explores its subtree with the
    // full budget, then a sequential fold replays exactly what the
    // sequential loop would have seen.
    let sub: Vec<(RunResult, u64)> = crate::par::map_slice(true, &root_cands, |&h| {
        let mut s = Search::new(p, a, order, budget);
        let res = s.try_candidate(0, h);
        (res, s.nodes)
    });
    let mut consumed = 0u64;
    for (res, nodes) in sub {
        let remaining = budget - consumed;
        if nodes > remaining {
            return (RunResult::Budget, budget.saturating_add(1));
        }
        match res {
            RunResult::Budget => return (RunResult::Budget, budget.saturating_add(1)),
            RunResult::Found(occ) => return (RunResult::Found(occ), consumed + nodes),
            RunResult::Exhausted => consumed += nodes,
        }
    }
    (RunResult::Exhausted, consumed)
}

struct Search<'a> {
    a: &'a Matrix01,
    k: usize,
    l: usize,
    pat_col_rows: Vec<Vec<u32>>,
    order: &'a [u32],
    budget: u64,
    nodes: u64,
    /// Host column per pattern column, or -1.
    assign: Vec<i64>,
    /// Host columns demanded per pattern row (stack discipline).
    demands: Vec<Vec<u32>>,
}

impl<'a> Search<'a> {
    fn new(p: &Pattern, a: &'a Matrix01, order: &'a [u32], budget: u64) -> Search<'a> {
        let pat_col_rows = (0..p.cols() as u32).map(|c| p.col_ones(c)).collect();
        Search {
            a,
            k: p.rows(),
            l: p.cols(),
            pat_col_rows,
            order,
            budget,
            nodes: 0,
            assign: vec![-1; p.cols()],
            demands: vec![Vec::new(); p.rows()],
        }
    }

    /// Smallest host row >= `at_least` whose column set covers `cols`.
    fn min_row_with(&self, cols: &[u32], at_least: u32) -> Option<u32> {
        let pivot = *cols
            .iter()
            .min_by_key(|&&c| self.a.col_weight(c))
            .expect("nonempty demands");
        let rows = self.a.col_rows(pivot);
        let start = rows.partition_point(|&r| r < at_least);
        rows[start..]
            .iter()
            .copied()
            .find(|&r| cols.iter().all(|&c| c == pivot || self.a.get(r, c)))
    }

    /// Largest host row <= `at_most` whose column set covers `cols`.
    fn max_row_with(&self, cols: &[u32], at_most: u32) -> Option<u32> {
        let pivot = *cols
            .iter()
            .min_by_key(|&&c| self.a.col_weight(c))
            .expect("nonempty demands");
        let rows = self.a.col_rows(pivot);
        let end = rows.partition_point(|&r| r <= at_most);
        rows[..end]
            .iter()
            .rev()
            .copied()
            .find(|&r| cols.iter().all(|&c| c == pivot || self.a.get(r, c)))
    }

    /// Lexicographically minimal feasible row map for the current demands.
    fn greedy_forward(&self) -> Option<Vec<u32>> {
        let n = self.a.rows() as u32;
        let mut out = Vec::with_capacity(self.k);
        let mut next = 0u32;
        for i in 0..self.k {
            let g = if self.demands[i].is_empty() {
                if next >= n {
                    return None;
                }
                next
            } else {
                self.min_row_with(&self.demands[i], next)?
            };
            out.push(g);
            next = g + 1;
        }
        Some(out)
    }

    /// Componentwise maximal feasible row map for the current demands.
    fn greedy_reverse(&self) -> Option<Vec<u32>> {
        let n = self.a.rows() as u32;
        let mut out = vec![0u32; self.k];
        let mut prev = n; // exclusive upper bound
        for i in (0..self.k).rev() {
            if prev == 0 {
                return None;
            }
            let g = if self.demands[i].is_empty() {
                prev - 1
            } else {
                self.max_row_with(&self.demands[i], prev - 1)?
            };
            out[i] = g;
            prev = g;
        }
        Some(out)
    }

    /// Candidate host columns for the pattern column at `depth`, ascending.
    fn candidates(&self, depth: usize, gfwd: &[u32]) -> Vec<u32> {
        let j = self.order[depth] as usize;

        // Interval bounds induced by already assigned pattern columns.
        let mut lo = j as i64;
        for j2 in (0..j).rev() {
            if self.assign[j2] >= 0 {
                lo = self.assign[j2] + (j - j2) as i64;
                break;
            }
        }
        let mut hi = (self.a.cols() - 1) as i64 - (self.l - 1 - j) as i64;
        for j2 in j + 1..self.l {
            if self.assign[j2] >= 0 {
                hi = self.assign[j2] - (j2 - j) as i64;
                break;
            }
        }
        if lo > hi {
            return Vec::new();
        }
        let (lo, hi) = (lo as u32, hi as u32);

        // Prefer generating candidates from a row already pinned down by
        // earlier columns; fall back to a range scan for unlinked columns.
        let linked = self.pat_col_rows[j]
            .iter()
            .copied()
            .filter(|&i| !self.demands[i as usize].is_empty())
            .min_by_key(|&i| {
                self.demands[i as usize]
                    .iter()
                    .map(|&c| self.a.col_weight(c))
                    .min()
                    .unwrap()
            });

        let Some(pivot_row) = linked else {
            let need = self.pat_col_rows[j].len();
            return (lo..=hi)
                .filter(|&c| self.a.col_weight(c) >= need)
                .collect();
        };

        let Some(grev) = self.greedy_reverse() else {
            return Vec::new();
        };
        let i = pivot_row as usize;
        let (row_lo, row_hi) = (gfwd[i], grev[i]);
        if row_lo > row_hi {
            return Vec::new();
        }
        let dem = &self.demands[i];
        let pivot_col = *dem.iter().min_by_key(|&&c| self.a.col_weight(c)).unwrap();
        let rows = self.a.col_rows(pivot_col);
        let start = rows.partition_point(|&r| r < row_lo);
        let end = rows.partition_point(|&r| r <= row_hi);

        let mut out = Vec::new();
        for &r in &rows[start..end] {
            if !dem.iter().all(|&c| c == pivot_col || self.a.get(r, c)) {
                continue;
            }
            let cols = self.a.row_cols(r);
            let s = cols.partition_point(|&c| c < lo);
            let e = cols.partition_point(|&c| c <= hi);
            out.extend_from_slice(&cols[s..e]);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn try_candidate(&mut self, depth: usize, h: u32) -> RunResult {
        self.nodes += 1;
        if self.nodes > self.budget {
            return RunResult::Budget;
        }
        let j = self.order[depth] as usize;
        self.assign[j] = h as i64;
        for idx in 0..self.pat_col_rows[j].len() {
            let i = self.pat_col_rows[j][idx] as usize;
            self.demands[i].push(h);
        }

        let result = match self.greedy_forward() {
            None => RunResult::Exhausted,
            Some(g) => {
                if depth + 1 == self.l {
                    RunResult::Found(Occurrence {
                        rows: g,
                        cols: self.assign.iter().map(|&h| h as u32).collect(),
                    })
                } else {
                    let mut res = RunResult::Exhausted;
                    for h2 in self.candidates(depth + 1, &g) {
                        match self.try_candidate(depth + 1, h2) {
                            RunResult::Exhausted => continue,
                            other => {
                                res = other;
                                break;
                            }
                        }
                    }
                    res
                }
            }
        };

        for idx in 0..self.pat_col_rows[j].len() {
            let i = self.pat_col_rows[j][idx] as usize;
            self.demands[i].pop();
        }
        self.assign[j] = -1;
        result
    }
}
