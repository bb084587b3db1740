//! Landmark columns, discretized signatures, and the 4-step marking
//! procedure, plus the audit that ties leftover unmarked 1s to an
//! occurrence of the alternating pattern.
//!
//! For a 1 at `(r, c)` the landmarks are column indices to its right in
//! row `r`:
//!
//! ```text
//! c < F <= a_1 < b_1 <= a_2 < ... <= a_{t-1} < b_{t-1} <= L
//! ```
//!
//! `F` and `L` are the first and last 1s after `c`; `(a_{t-1}, b_{t-1})`
//! is the widest pair of consecutive 1s between `F` and `L` (first such
//! pair on ties), and each earlier `(a_j, b_j)` is the widest pair
//! between `F` and `a_{j+1}`. If `c` is one of the last two 1s of its row
//! everything is undefined, and once some `a_j` hits `F` the earlier
//! pairs do not exist.
//!
//! Signatures discretize landmark distances with floor-logs in base
//! `zeta` and base `1 + eps`, `eps = 1/(6*(zeta+1)*(t+2))`. All floor
//! logs come from exact integer threshold tables (the base-(1+eps) table
//! is built with arbitrary-precision cross multiplication), so no
//! floating point is involved anywhere. A signature piece whose landmark
//! is missing is an undefined token, and undefined compares equal only
//! to undefined in the same position.

use crate::contains::{contains_with, Occurrence, SearchOptions};
use crate::error::{Error, Result};
use crate::matrix::Matrix01;
use crate::par;
use crate::registry::alternating;
use num_bigint::BigUint;
use serde::Serialize;
use std::collections::HashMap;
use std::collections::HashSet;

/// Landmark columns for one 1. `pairs[j]` holds `(a_{j+1}, b_{j+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Landmarks {
    pub first: Option<u32>,
    pub last: Option<u32>,
    pub pairs: Vec<Option<(u32, u32)>>,
}

impl Landmarks {
    fn undefined(t: u32) -> Landmarks {
        Landmarks {
            first: None,
            last: None,
            pairs: vec![None; t.saturating_sub(1) as usize],
        }
    }
}

/// A signature piece: a discretized value, or the undefined token.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Piece {
    Def(u64),
    Undef,
}

/// Three-way position of one discretized value against another.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Rel {
    Smaller,
    Equal,
    Larger,
    Undef,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sig0(pub Vec<Piece>);

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sig1 {
    pub a_logs: Vec<Piece>,
    /// `rel[j][k]`: position of the discretized `b_{j+1}` distance
    /// against the discretized `a_{k+1}` distance.
    pub rel: Vec<Vec<Rel>>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sig2 {
    pub b_logs: Vec<Piece>,
    pub rel: Vec<Vec<Rel>>,
    /// Capped gap ratios, last entry measured against `L`.
    pub gaps: Vec<Piece>,
}

/// Exact floor-log thresholds: `table[k]` is the least integer `x` with
/// `floor(log_base(x)) >= k`.
struct LogTable {
    thresholds: Vec<u64>,
}

impl LogTable {
    fn integer_base(base: u64, max_x: u64) -> LogTable {
        let mut thresholds = vec![1u64];
        let mut cur: u128 = 1;
        loop {
            cur *= base as u128;
            if cur > max_x as u128 {
                break;
            }
            thresholds.push(cur as u64);
        }
        LogTable { thresholds }
    }

    /// Base `(q+1)/q`; thresholds are `ceil((q+1)^k / q^k)` computed with
    /// big integers.
    fn rational_base(q: u64, max_x: u64) -> LogTable {
        let mut thresholds = vec![1u64];
        let mut num = BigUint::from(1u32);
        let mut den = BigUint::from(1u32);
        let (bq1, bq) = (BigUint::from(q + 1), BigUint::from(q));
        loop {
            num *= &bq1;
            den *= &bq;
            let ceil = (&num + &den - BigUint::from(1u32)) / &den;
            let Ok(v) = u64::try_from(&ceil) else { break };
            if v > max_x {
                break;
            }
            thresholds.push(v);
        }
        LogTable { thresholds }
    }

    fn floor_log(&self, x: u64) -> u64 {
        debug_assert!(x >= 1);
        (self.thresholds.partition_point(|&t| t <= x) - 1) as u64
    }
}

/// Landmarks for the 1 at position `pos` of a row whose 1s sit at `cols`.
fn landmarks_in_row(cols: &[u32], pos: usize, t: u32) -> Landmarks {
    let after = &cols[pos + 1..];
    if after.len() < 2 {
        return Landmarks::undefined(t);
    }
    let mut lm = Landmarks {
        first: Some(after[0]),
        last: Some(*after.last().unwrap()),
        pairs: vec![None; t.saturating_sub(1) as usize],
    };
    if t < 2 {
        return lm;
    }
    // Fill right to left: the widest adjacent pair below the previous
    // pair's left end, first such pair on ties.
    let mut right = after.len() - 1;
    for j in (0..(t - 1) as usize).rev() {
        if right == 0 {
            break;
        }
        let mut best = 0usize;
        let mut best_gap = 0u32;
        for x in 0..right {
            let gap = after[x + 1] - after[x];
            if gap > best_gap {
                best_gap = gap;
                best = x;
            }
        }
        lm.pairs[j] = Some((after[best], after[best + 1]));
        if best == 0 {
            break; // a_j landed on F; earlier pairs do not exist
        }
        right = best;
    }
    lm
}

/// Standalone landmark computation for the 1 at `(r, c)`.
pub fn landmarks(a: &Matrix01, r: u32, c: u32, t: u32) -> Result<Landmarks> {
    let cols = a.row_cols(r);
    let Ok(pos) = cols.binary_search(&c) else {
        return Err(Error::InvalidArgument(format!("({r}, {c}) is not a 1")));
    };
    Ok(landmarks_in_row(cols, pos, t))
}

struct SigContext {
    t: u32,
    zeta_table: LogTable,
    eps_table: LogTable,
}

impl SigContext {
    fn new(t: u32, zeta: u32, max_dim: u64) -> SigContext {
        let q = 6 * (zeta as u64 + 1) * (t as u64 + 2);
        SigContext {
            t,
            zeta_table: LogTable::integer_base(zeta as u64, max_dim),
            eps_table: LogTable::rational_base(q, max_dim),
        }
    }

    fn signatures(&self, lm: &Landmarks, c: u32) -> (Sig0, Sig1, Sig2) {
        let t = self.t as usize;
        let dist = |col: u32| (col - c) as u64;

        let mut sig0 = Vec::with_capacity(t);
        sig0.push(match lm.first {
            Some(f) => Piece::Def(self.zeta_table.floor_log(dist(f))),
            None => Piece::Undef,
        });
        for j in 0..t.saturating_sub(1) {
            sig0.push(match lm.pairs[j] {
                Some((a, b)) => Piece::Def(self.zeta_table.floor_log((b - a) as u64)),
                None => Piece::Undef,
            });
        }

        let a_logs: Vec<Piece> = (0..t.saturating_sub(1))
            .map(|j| match lm.pairs[j] {
                Some((a, _)) => Piece::Def(self.eps_table.floor_log(dist(a))),
                None => Piece::Undef,
            })
            .collect();
        let b_logs: Vec<Piece> = (0..t.saturating_sub(1))
            .map(|j| match lm.pairs[j] {
                Some((_, b)) => Piece::Def(self.eps_table.floor_log(dist(b))),
                None => Piece::Undef,
            })
            .collect();
        let rel_of = |xs: &[Piece], ys: &[Piece]| -> Vec<Vec<Rel>> {
            xs.iter()
                .map(|x| {
                    ys.iter()
                        .map(|y| match (x, y) {
                            (Piece::Def(a), Piece::Def(b)) => match a.cmp(b) {
                                std::cmp::Ordering::Less => Rel::Smaller,
                                std::cmp::Ordering::Equal => Rel::Equal,
                                std::cmp::Ordering::Greater => Rel::Larger,
                            },
                            _ => Rel::Undef,
                        })
                        .collect()
                })
                .collect()
        };
        let sig1 = Sig1 {
            rel: rel_of(&b_logs, &a_logs),
            a_logs: a_logs.clone(),
        };

        // Capped gap ratios: (a_{j+2} - b_{j+1}) against (b_{j+1} - c)/2
        // for the inner entries, then (L - b_{t-1}) against the last.
        let cap = 3 * self.t as u64;
        let ratio = |num: u64, b_col: u32| Piece::Def((2 * num / dist(b_col)).min(cap));
        let mut gaps: Vec<Piece> = Vec::with_capacity(t.saturating_sub(1));
        for j in 0..t.saturating_sub(1) {
            let next_a = if j + 1 < t - 1 {
                lm.pairs[j + 1].map(|(a, _)| a)
            } else {
                lm.last
            };
            gaps.push(match (lm.pairs[j], next_a) {
                (Some((_, b)), Some(na)) => ratio((na - b) as u64, b),
                _ => Piece::Undef,
            });
        }
        let sig2 = Sig2 {
            rel: rel_of(&a_logs, &b_logs),
            b_logs,
            gaps,
        };
        (Sig0(sig0), sig1, sig2)
    }
}

/// Standalone signature computation for the 1 at `(r, c)`.
pub fn signatures(a: &Matrix01, r: u32, c: u32, t: u32, zeta: u32) -> Result<(Sig0, Sig1, Sig2)> {
    check_zeta(t, zeta)?;
    let lm = landmarks(a, r, c, t)?;
    let ctx = SigContext::new(t, zeta, a.rows().max(a.cols()) as u64);
    Ok(ctx.signatures(&lm, c))
}

fn check_zeta(t: u32, zeta: u32) -> Result<()> {
    if t < 1 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    if zeta < t.max(2) {
        return Err(Error::InvalidArgument(format!(
            "zeta must be at least max(t, 2), got {zeta}"
        )));
    }
    Ok(())
}

/// Default scale base: the least integer `z >= max(t, 2)` with
/// `2^(z^t) >= min(rows, cols)`, i.e. the ceiling of the t-th root of
/// the binary log, computed exactly.
pub fn default_zeta(a: &Matrix01, t: u32) -> u32 {
    let n = a.rows().min(a.cols()) as u128;
    let mut z = t.max(2);
    loop {
        let exp = (z as u64).saturating_pow(t);
        if exp >= 127 || (1u128 << exp) >= n {
            return z;
        }
        z += 1;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SignatureTypeCounts {
    pub sig0: usize,
    pub sig1: usize,
    pub sig2: usize,
}

/// Bookkeeping for one marking run.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MarkReport {
    pub t: u32,
    pub zeta: u32,
    /// `eps = 1 / eps_denominator` exactly.
    pub eps_denominator: u64,
    pub rows: usize,
    pub cols: usize,
    pub weight: usize,
    /// Marks added by each of the four steps.
    pub per_step_counts: [u64; 4],
    pub signature_type_counts: SignatureTypeCounts,
    /// Cap implied by the type counts:
    /// `rows*(2 + #sig0) + cols*#sig1 + t*(rows + cols)*#sig2`.
    pub structural_bound: u64,
    pub marked_total: u64,
    pub unmarked: Vec<(u32, u32)>,
}

#[derive(Clone, Copy, Debug)]
pub struct MarkOptions {
    pub parallel: bool,
}

impl Default for MarkOptions {
    fn default() -> Self {
        MarkOptions {
            parallel: cfg!(feature = "parallel"),
        }
    }
}

struct OneState {
    lm: Landmarks,
    sig0: Sig0,
    sig1: Sig1,
    sig2: Sig2,
}

/// Runs the 4-step marking procedure.
///
/// 1. per row: mark the last two 1s and the last 1 of each sig0 type;
/// 2. per column: among 1s meeting the first-gap inequality
///    `3*zeta*(a_1 - F) > F - c`, mark the last unmarked of each sig1
///    type;
/// 3. per row: mark the last `t` unmarked of each sig2 type;
/// 4. per column: mark the last `t` unmarked of each sig2 type.
///
/// Steps see the marks of earlier steps; within a step, selection reads
/// the state at step entry. Rows (and columns) partition the 1s, so both
/// phases commute and the parallel run equals the sequential one.
pub fn run_marking(a: &Matrix01, t: u32, zeta: u32, opts: &MarkOptions) -> Result<MarkReport> {
    check_zeta(t, zeta)?;
    let ctx = SigContext::new(t, zeta, a.rows().max(a.cols()) as u64);

    // Flat per-1 state, indexed like the row-major ones list.
    let mut offsets = Vec::with_capacity(a.rows() + 1);
    offsets.push(0usize);
    for r in 0..a.rows() as u32 {
        offsets.push(offsets.last().unwrap() + a.row_cols(r).len());
    }
    let per_row_state: Vec<Vec<OneState>> = par::map_range(opts.parallel, a.rows(), |ri| {
        let cols = a.row_cols(ri as u32);
        (0..cols.len())
            .map(|pos| {
                let lm = landmarks_in_row(cols, pos, t);
                let (sig0, sig1, sig2) = ctx.signatures(&lm, cols[pos]);
                OneState {
                    lm,
                    sig0,
                    sig1,
                    sig2,
                }
            })
            .collect()
    });
    let state: Vec<OneState> = per_row_state.into_iter().flatten().collect();
    let idx_of = |r: u32, c: u32| -> usize {
        let cols = a.row_cols(r);
        offsets[r as usize] + cols.binary_search(&c).expect("is a 1")
    };

    let mut marks = vec![false; a.weight()];
    let mut per_step = [0u64; 4];

    // Step 1: per row, last two 1s plus the last of each sig0 type.
    let step1: Vec<Vec<usize>> = par::map_range(opts.parallel, a.rows(), |ri| {
        let cols = a.row_cols(ri as u32);
        let base = offsets[ri];
        let mut chosen: Vec<usize> = Vec::new();
        let len = cols.len();
        if len >= 1 {
            chosen.push(base + len - 1);
        }
        if len >= 2 {
            chosen.push(base + len - 2);
        }
        let mut last_of_type: HashMap<&Sig0, usize> = HashMap::new();
        for pos in 0..len {
            last_of_type.insert(&state[base + pos].sig0, base + pos);
        }
        chosen.extend(last_of_type.into_values());
        chosen
    });
    commit(&mut marks, step1, &mut per_step[0]);

    // Step 2: per column, the last unmarked 1 of each sig1 type among
    // those satisfying the first-gap inequality.
    let entry2 = marks.clone();
    let step2: Vec<Vec<usize>> = par::map_range(opts.parallel, a.cols(), |ci| {
        let mut last_of_type: HashMap<&Sig1, usize> = HashMap::new();
        for &r in a.col_rows(ci as u32) {
            let idx = idx_of(r, ci as u32);
            if entry2[idx] {
                continue;
            }
            let st = &state[idx];
            let (Some(f), Some((a1, _))) = (st.lm.first, st.lm.pairs.first().copied().flatten())
            else {
                continue;
            };
            // 3*zeta*(a1 - F) > F - c, all exact in integers.
            if 3 * zeta as u64 * (a1 - f) as u64 > (f - ci as u32) as u64 {
                last_of_type.insert(&st.sig1, idx);
            }
        }
        last_of_type.into_values().collect()
    });
    commit(&mut marks, step2, &mut per_step[1]);

    // Steps 3 and 4: last t unmarked of each sig2 type, per row then per
    // column.
    let entry3 = marks.clone();
    let step3: Vec<Vec<usize>> = par::map_range(opts.parallel, a.rows(), |ri| {
        let base = offsets[ri];
        let len = a.row_cols(ri as u32).len();
        let mut by_type: HashMap<&Sig2, Vec<usize>> = HashMap::new();
        for pos in 0..len {
            let idx = base + pos;
            if !entry3[idx] {
                by_type.entry(&state[idx].sig2).or_default().push(idx);
            }
        }
        take_last_t(by_type, t)
    });
    commit(&mut marks, step3, &mut per_step[2]);

    let entry4 = marks.clone();
    let step4: Vec<Vec<usize>> = par::map_range(opts.parallel, a.cols(), |ci| {
        let mut by_type: HashMap<&Sig2, Vec<usize>> = HashMap::new();
        for &r in a.col_rows(ci as u32) {
            let idx = idx_of(r, ci as u32);
            if !entry4[idx] {
                by_type.entry(&state[idx].sig2).or_default().push(idx);
            }
        }
        take_last_t(by_type, t)
    });
    commit(&mut marks, step4, &mut per_step[3]);

    let unmarked: Vec<(u32, u32)> = a
        .ones()
        .enumerate()
        .filter(|&(i, _)| !marks[i])
        .map(|(_, rc)| rc)
        .collect();

    let sig0_types: HashSet<&Sig0> = state.iter().map(|s| &s.sig0).collect();
    let sig1_types: HashSet<&Sig1> = state.iter().map(|s| &s.sig1).collect();
    let sig2_types: HashSet<&Sig2> = state.iter().map(|s| &s.sig2).collect();
    let counts = SignatureTypeCounts {
        sig0: sig0_types.len(),
        sig1: sig1_types.len(),
        sig2: sig2_types.len(),
    };
    let marked_total: u64 = per_step.iter().sum();
    let structural_bound = (a.rows() as u64) * (2 + counts.sig0 as u64)
        + (a.cols() as u64) * counts.sig1 as u64
        + t as u64 * (a.rows() as u64 + a.cols() as u64) * counts.sig2 as u64;
    debug_assert!(marked_total as usize + unmarked.len() == a.weight());

    let q = 6 * (zeta as u64 + 1) * (t as u64 + 2);
    Ok(MarkReport {
        t,
        zeta,
        eps_denominator: q,
        rows: a.rows(),
        cols: a.cols(),
        weight: a.weight(),
        per_step_counts: per_step,
        signature_type_counts: counts,
        structural_bound,
        marked_total,
        unmarked,
    })
}

fn take_last_t(by_type: HashMap<&Sig2, Vec<usize>>, t: u32) -> Vec<usize> {
    let mut chosen = Vec::new();
    for (_, mut idxs) in by_type {
        // Indices were gathered in ascending position order.
        let keep = idxs.len().saturating_sub(t as usize);
        chosen.extend(idxs.drain(keep..));
    }
    chosen
}

fn commit(marks: &mut [bool], selections: Vec<Vec<usize>>, counter: &mut u64) {
    for idx in selections.into_iter().flatten() {
        if !marks[idx] {
            marks[idx] = true;
            *counter += 1;
        }
    }
}

/// Result of checking leftover unmarked 1s. A host that avoids the
/// alternating pattern ends fully marked, so leftovers must come with an
/// occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum AuditOutcome {
    NoneUnmarked,
    /// The host did contain the alternating pattern, as it must when
    /// anything stays unmarked.
    Occurrence { rows: Vec<u32>, cols: Vec<u32> },
}

/// If the report left 1s unmarked, the host must contain the alternating
/// pattern; failing to find one is a hard inconsistency.
pub fn audit_unmarked(
    a: &Matrix01,
    t: u32,
    report: &MarkReport,
    opts: &SearchOptions,
) -> Result<AuditOutcome> {
    if report.unmarked.is_empty() {
        return Ok(AuditOutcome::NoneUnmarked);
    }
    let p = alternating(t)?;
    match contains_with(&p, a, opts) {
        crate::contains::Outcome::Witness(Occurrence { rows, cols }) => {
            Ok(AuditOutcome::Occurrence { rows, cols })
        }
        crate::contains::Outcome::Free => Err(Error::Inconsistency(format!(
            "{} unmarked 1s remain but the host avoids the alternating pattern",
            report.unmarked.len()
        ))),
        crate::contains::Outcome::Unknown => Err(Error::BudgetExceeded(
            "containment search for the audit ran out of budget".into(),
        )),
    }
}
