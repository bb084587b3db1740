//! Exact extremal numbers on tiny hosts by branch and bound, plus the
//! density sweep table for the constructions.

use crate::constructions::{self, BuildLimits, Variant};
use crate::contains::{contains_with, SearchOptions};
use crate::error::{Error, Result};
use crate::matrix::Matrix01;
use crate::pattern::Pattern;
use serde::Serialize;

/// Result of an exact search: the maximum weight of a pattern-free host
/// of the given dimensions, with a witness. `exact` is false when the
/// node budget ran out, in which case `value` is only a lower bound.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExResult {
    pub pattern: String,
    pub n: usize,
    pub m: usize,
    pub value: u64,
    pub exact: bool,
    pub nodes_explored: u64,
    /// Witness in matrix file format.
    pub witness: String,
}

#[derive(Clone, Copy, Debug)]
pub struct ExOptions {
    /// Full branch-and-bound node budget.
    pub node_budget: u64,
    /// Largest `n*m` accepted without an explicit larger budget.
    pub max_cells: usize,
}

impl Default for ExOptions {
    fn default() -> Self {
        ExOptions {
            node_budget: 100_000_000,
            max_cells: 36,
        }
    }
}

/// Exact maximum weight over all pattern-free `n x m` hosts. Branches
/// over cells in row-major order, 1 before 0, pruning with an incremental
/// containment check and the remaining-cells bound. The first maximal
/// witness in branch order is returned, so results are deterministic.
pub fn exact_ex(p: &Pattern, n: usize, m: usize, opts: &ExOptions) -> Result<ExResult> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("host must be nonempty".into()));
    }
    if p.weight() == 0 {
        return Err(Error::InvalidArgument(
            "every host contains the empty pattern; the maximum is undefined".into(),
        ));
    }
    if n * m > opts.max_cells {
        return Err(Error::CapExceeded(format!(
            "{n}x{m} host exceeds the {}-cell search cap",
            opts.max_cells
        )));
    }
    if m > 63 {
        return Err(Error::CapExceeded("host wider than the 64-bit row masks".into()));
    }

    let mut search = BbSearch {
        pattern_rows: p
            .ones()
            .iter()
            .fold(vec![0u64; p.rows()], |mut acc, &(i, j)| {
                acc[i as usize] |= 1 << j;
                acc
            }),
        pk: p.rows(),
        pl: p.cols(),
        n,
        m,
        grid: vec![0u64; n],
        best: 0,
        best_grid: None,
        nodes: 0,
        budget: opts.node_budget,
        exhausted: false,
    };
    search.descend(0, 0);

    let witness_rows = search.best_grid.unwrap_or_else(|| vec![0u64; n]);
    let mut ones = Vec::new();
    for (r, bits) in witness_rows.iter().enumerate() {
        for c in 0..m as u32 {
            if bits & (1 << c) != 0 {
                ones.push((r as u32, c));
            }
        }
    }
    let witness = Matrix01::from_sorted_ones(n, m, ones)?;

    // Re-verify the witness through the production matcher.
    if contains_with(p, &witness, &SearchOptions::default()).is_witness() {
        return Err(Error::Inconsistency(
            "branch-and-bound witness contains the pattern".into(),
        ));
    }
    debug_assert_eq!(witness.weight() as u64, search.best);

    Ok(ExResult {
        pattern: p.to_text(),
        n,
        m,
        value: search.best,
        exact: !search.exhausted,
        nodes_explored: search.nodes,
        witness: witness.to_file_string(),
    })
}

struct BbSearch {
    pattern_rows: Vec<u64>,
    pk: usize,
    pl: usize,
    n: usize,
    m: usize,
    grid: Vec<u64>,
    best: u64,
    best_grid: Option<Vec<u64>>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl BbSearch {
    fn descend(&mut self, idx: usize, weight: u64) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let total = self.n * self.m;
        // Even filling every remaining cell cannot beat the incumbent.
        if weight + (total - idx) as u64 <= self.best {
            return;
        }
        if idx == total {
            if weight > self.best {
                self.best = weight;
                self.best_grid = Some(self.grid.clone());
            }
            return;
        }
        let (r, c) = (idx / self.m, idx % self.m);
        self.grid[r] |= 1 << c;
        if !self.partial_contains() {
            self.descend(idx + 1, weight + 1);
        }
        self.grid[r] &= !(1u64 << c);
        if self.exhausted {
            return;
        }
        self.descend(idx + 1, weight);
    }

    /// Containment of the pattern in the current partial grid (cells not
    /// yet branched on are 0, which only underestimates).
    fn partial_contains(&self) -> bool {
        if self.pk > self.n || self.pl > self.m {
            return false;
        }
        self.choose_rows(0, 0, &mut vec![0u64; self.pk])
    }

    fn choose_rows(&self, pi: usize, start: usize, picked: &mut Vec<u64>) -> bool {
        if pi == self.pk {
            return self.choose_cols(0, 0, picked);
        }
        for r in start..=self.n - (self.pk - pi) {
            picked[pi] = self.grid[r];
            if self.choose_rows(pi + 1, r + 1, picked) {
                return true;
            }
        }
        false
    }

    fn choose_cols(&self, pj: usize, start: usize, picked: &[u64]) -> bool {
        if pj == self.pl {
            return true;
        }
        'cols: for c in start..=self.m - (self.pl - pj) {
            for (pi, &row_bits) in self.pattern_rows.iter().enumerate() {
                if row_bits & (1 << pj) != 0 && picked[pi] & (1 << c) == 0 {
                    continue 'cols;
                }
            }
            if self.choose_cols(pj + 1, c + 1, picked) {
                return true;
            }
        }
        false
    }
}

/// One row of the density sweep.
#[derive(Clone, Debug, Serialize)]
pub struct DensityRow {
    pub b: usize,
    pub m: u32,
    pub t: Option<u32>,
    pub rows: usize,
    pub cols: usize,
    pub weight: usize,
    pub density: f64,
    /// Guaranteed weight floor for the family, as an exact decimal string.
    pub bound: String,
    pub status: &'static str,
}

/// Builds each grid entry and tabulates weight against the applicable
/// guaranteed floor. Entries beyond the caps come back with status
/// "skipped".
pub fn density_table(
    variant: Variant,
    grid: &[(usize, u32, Option<u32>)],
    limits: &BuildLimits,
) -> Result<Vec<DensityRow>> {
    let mut out = Vec::with_capacity(grid.len());
    for &(b, m, t) in grid {
        let built = match variant {
            Variant::A => constructions::build_a(b, m, limits),
            Variant::At => {
                let t = t.ok_or_else(|| Error::InvalidArgument("variant at needs t".into()))?;
                constructions::build_at(b, m, t, limits)
            }
            Variant::Dense => {
                let t = t.ok_or_else(|| Error::InvalidArgument("variant dense needs t".into()))?;
                crate::behrend::build_dense_s0t(b, t, limits).map(|(lm, _)| lm)
            }
        };
        match built {
            Ok(lm) => {
                let cols = lm.matrix.cols();
                let weight = lm.matrix.weight();
                let bound = match variant {
                    Variant::A => constructions::weight_bound_a(b, m)?.to_string(),
                    Variant::At => at_bound_string(cols as u64, lm.params.m, t.unwrap_or(0)),
                    Variant::Dense => "0".to_string(),
                };
                out.push(DensityRow {
                    b,
                    m: lm.params.m,
                    t,
                    rows: lm.matrix.rows(),
                    cols,
                    weight,
                    density: weight as f64 / cols as f64,
                    bound,
                    status: "ok",
                });
            }
            Err(Error::CapExceeded(_)) => out.push(DensityRow {
                b,
                m,
                t,
                rows: 0,
                cols: 0,
                weight: 0,
                density: 0.0,
                bound: String::new(),
                status: "skipped",
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Testable size bound for the alternating variant with the slack
/// parameter fixed at 1/4: `cols * (floor(m/2) - 1) / 4^t`, emitted as an
/// exact decimal (the denominator is a power of 4).
fn at_bound_string(cols: u64, m: u32, t: u32) -> String {
    let numer = cols as i128 * (m as i128 / 2 - 1);
    if numer <= 0 {
        return "0".to_string();
    }
    exact_decimal(numer as u128, 4u128.pow(t))
}

/// Formats `numer/denom` as an exact decimal; the denominator must be of
/// the form 2^a * 5^b.
fn exact_decimal(numer: u128, denom: u128) -> String {
    let (mut d, mut twos, mut fives) = (denom, 0u32, 0u32);
    while d % 2 == 0 {
        d /= 2;
        twos += 1;
    }
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    assert_eq!(d, 1, "denominator must be 2^a * 5^b");
    let digits = twos.max(fives);
    let scale = 10u128.pow(digits) / denom;
    let scaled = numer * scale;
    let (int, frac) = (scaled / 10u128.pow(digits), scaled % 10u128.pow(digits));
    if digits == 0 || frac == 0 {
        return int.to_string();
    }
    let s = format!("{int}.{frac:0width$}", width = digits as usize);
    s.trim_end_matches('0').to_string()
}

/// Renders density rows as CSV with the fixed header.
pub fn density_csv(rows: &[DensityRow]) -> String {
    let mut out = String::from("b,m,t,rows,cols,weight,density,bound,status\n");
    for r in rows {
        let t = r.t.map(|t| t.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.6},{},{}\n",
            r.b, r.m, t, r.rows, r.cols, r.weight, r.density, r.bound, r.status
        ));
    }
    out
}
