//! Explicit pattern-avoiding matrix families, generated sparsely with full
//! row/column labels so their structural properties can be audited.
//!
//! Rows are labeled `(s, r)` with `s` a scalar in `[m]` (or drawn from a
//! solution-free set for the dense variant) and `r` a vector in `[m]^b`.
//! Columns are labeled `(c, i)` with `c` in `[m]^b` and `i` an offset
//! selector. A cell holds a 1 exactly when the variant's defining
//! equation `r = c + <offsets>` holds coordinatewise inside `[m]`.
//!
//! Index encodings are fixed so files are reproducible bit for bit:
//! 1-based label components, 0-based matrix indices,
//! `row = (s_index)*m^b + sum_u (r_u - 1)*m^(b-u)` and
//! `col = (sum_u (c_u - 1)*m^(b-u)) * i_count + i_rank`.

use crate::error::{Error, Result};
use crate::matrix::Matrix01;
use crate::par;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Offset `s * i`, `i` ranging over all of `{0,1}^b`.
    A,
    /// Alternating offsets `s * i_even + (m+1-s) * i_odd`, `i` restricted
    /// to weight-t selectors.
    At,
    /// Offset `s * i` with digit selectors `i` in `{0..t-1}^b` and `s`
    /// drawn from a solution-free set.
    Dense,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::A => "a",
            Variant::At => "at",
            Variant::Dense => "dense",
        }
    }
}

/// Everything needed to regenerate the labels of a constructed matrix.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub variant: Variant,
    pub b: usize,
    pub m: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<u32>,
    /// The `s` scalars used by the dense variant, ascending.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s_values: Option<Vec<u32>>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RowLabel {
    pub s: u32,
    pub r: Vec<u32>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColLabel {
    pub c: Vec<u32>,
    pub i: Vec<u32>,
}

/// A constructed matrix together with its labels.
#[derive(Clone, Debug)]
pub struct LabeledMatrix {
    pub matrix: Matrix01,
    pub params: ConstructionParams,
    pub row_labels: Vec<RowLabel>,
    pub col_labels: Vec<ColLabel>,
}

/// Size caps for constructions. The CLI lets `ZOM_CELL_CAP` override the
/// cell cap.
#[derive(Clone, Copy, Debug)]
pub struct BuildLimits {
    pub max_cells: u64,
    pub max_ones: u64,
    pub parallel: bool,
}

impl Default for BuildLimits {
    fn default() -> Self {
        BuildLimits {
            max_cells: 1 << 32,
            max_ones: 100_000_000,
            parallel: cfg!(feature = "parallel"),
        }
    }
}

fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::CapExceeded(format!("{base}^{exp} overflows")))
}

fn check_dims(rows: u64, cols: u64, limits: &BuildLimits) -> Result<()> {
    let cells = (rows as u128) * (cols as u128);
    if cells > limits.max_cells as u128 {
        return Err(Error::CapExceeded(format!(
            "{rows} x {cols} = {cells} cells exceeds cap {}",
            limits.max_cells
        )));
    }
    if rows > u32::MAX as u64 || cols > u32::MAX as u64 {
        return Err(Error::CapExceeded("dimension exceeds u32 index range".into()));
    }
    Ok(())
}

/// Decodes a rank into a 1-based vector of length `b` over `[m]`, most
/// significant coordinate first.
fn unrank_vec(mut idx: u64, b: usize, m: u32) -> Vec<u32> {
    let mut v = vec![1u32; b];
    for u in (0..b).rev() {
        v[u] = (idx % m as u64) as u32 + 1;
        idx /= m as u64;
    }
    v
}

/// Splits a 0/1 selector into its even and odd parts: the odd part keeps
/// the last, 3rd last, 5th last 1s, the even part the rest. Computed by
/// the suffix-sum parity formulas.
pub fn split_even_odd(i: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let b = i.len();
    let mut even = vec![0u32; b];
    let mut odd = vec![0u32; b];
    let mut suffix = 0u32;
    for u in (0..b).rev() {
        suffix += i[u];
        even[u] = i[u] * ((1 + suffix) % 2);
        odd[u] = i[u] * (suffix % 2);
    }
    (even, odd)
}

/// Per-variant selector table: the ordered list of `i` vectors and the
/// offset each one applies to coordinate `u` for a given scalar `s`.
struct SelectorTable {
    b: usize,
    m: u32,
    n_sel: usize,
    /// (selector vector, per-coordinate offset coefficients): offset for
    /// coordinate u at scalar s is `even[u]*s + odd[u]*(m+1-s)` where for
    /// the non-alternating variants `even` is just the selector itself.
    sels: Vec<(Vec<u32>, Vec<u32>, Vec<u32>)>,
}

impl SelectorTable {
    fn new(params: &ConstructionParams) -> Result<SelectorTable> {
        let (b, m) = (params.b, params.m);
        if b >= 32 {
            return Err(Error::CapExceeded("b too large".into()));
        }
        let vectors: Vec<Vec<u32>> = match params.variant {
            Variant::A => (0u32..(1 << b))
                .map(|mask| (0..b).map(|u| (mask >> (b - 1 - u)) & 1).collect())
                .collect(),
            Variant::At => {
                let t = params.t.ok_or_else(|| {
                    Error::InvalidArgument("variant at requires t".into())
                })?;
                (0u32..(1 << b))
                    .filter(|mask| mask.count_ones() == t)
                    .map(|mask| (0..b).map(|u| (mask >> (b - 1 - u)) & 1).collect())
                    .collect()
            }
            Variant::Dense => {
                let t = params.t.ok_or_else(|| {
                    Error::InvalidArgument("variant dense requires t".into())
                })? as u64;
                let tb = checked_pow(t, b as u32)?;
                (0..tb)
                    .map(|idx| {
                        let mut v = vec![0u32; b];
                        let mut x = idx;
                        for u in (0..b).rev() {
                            v[u] = (x % t) as u32;
                            x /= t;
                        }
                        v
                    })
                    .collect()
            }
        };
        let sels = vectors
            .into_iter()
            .map(|v| {
                let (even, odd) = match params.variant {
                    Variant::At => split_even_odd(&v),
                    _ => (v.clone(), vec![0; b]),
                };
                (v, even, odd)
            })
            .collect::<Vec<_>>();
        Ok(SelectorTable {
            b,
            m,
            n_sel: sels.len(),
            sels,
        })
    }

    /// Column indices of the 1s in the row labeled `(s, r)`, ascending.
    fn row_cols(&self, s: u32, r: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::new();
        'sel: for (i_rank, (_, even, odd)) in self.sels.iter().enumerate() {
            let mut c_rank = 0u64;
            for u in 0..self.b {
                let offset =
                    s as i64 * even[u] as i64 + (self.m as i64 + 1 - s as i64) * odd[u] as i64;
                let cu = r[u] as i64 - offset;
                if cu < 1 || cu > self.m as i64 {
                    continue 'sel;
                }
                c_rank = c_rank * self.m as u64 + (cu as u64 - 1);
            }
            out.push((c_rank * self.n_sel as u64 + i_rank as u64) as u32);
        }
        out.sort_unstable();
        out
    }
}

/// Builds the base family: rows `[m] x [m]^b`, columns `[m]^b x {0,1}^b`,
/// 1 at `((s,r),(c,i))` iff `r = c + s*i` coordinatewise inside `[m]`.
pub fn build_a(b: usize, m: u32, limits: &BuildLimits) -> Result<LabeledMatrix> {
    if b < 1 || m < 1 {
        return Err(Error::InvalidArgument("build_a requires b >= 1, m >= 1".into()));
    }
    build(
        ConstructionParams {
            variant: Variant::A,
            b,
            m,
            t: None,
            s_values: None,
        },
        limits,
    )
}

/// Builds the alternating-offset family: same rows as the base family,
/// columns restricted to weight-t selectors, 1 iff
/// `r = c + s*i_even + (m+1-s)*i_odd`.
pub fn build_at(b: usize, m: u32, t: u32, limits: &BuildLimits) -> Result<LabeledMatrix> {
    if b < 1 || m < 1 {
        return Err(Error::InvalidArgument("build_at requires b >= 1, m >= 1".into()));
    }
    if t < 1 || t as usize > b {
        return Err(Error::InvalidArgument(format!(
            "build_at requires 1 <= t <= b, got t={t}, b={b}"
        )));
    }
    build(
        ConstructionParams {
            variant: Variant::At,
            b,
            m,
            t: Some(t),
            s_values: None,
        },
        limits,
    )
}

/// Builds the dense variant from an explicit solution-free scalar set,
/// ascending. Rows `S x [m]^b`, columns `[m]^b x {0..t-1}^b`.
pub(crate) fn build_dense_from_set(
    b: usize,
    m: u32,
    t: u32,
    s_values: &[u32],
    limits: &BuildLimits,
) -> Result<LabeledMatrix> {
    if b < 1 || m < 1 || t < 2 {
        return Err(Error::InvalidArgument(
            "dense variant requires b >= 1, m >= 1, t >= 2".into(),
        ));
    }
    if s_values.is_empty() || s_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "scalar set must be nonempty and strictly increasing".into(),
        ));
    }
    build(
        ConstructionParams {
            variant: Variant::Dense,
            b,
            m,
            t: Some(t),
            s_values: Some(s_values.to_vec()),
        },
        limits,
    )
}

fn scalar_count(params: &ConstructionParams) -> u64 {
    match &params.s_values {
        Some(sv) => sv.len() as u64,
        None => params.m as u64,
    }
}

fn scalar_at(params: &ConstructionParams, idx: usize) -> u32 {
    match &params.s_values {
        Some(sv) => sv[idx],
        None => idx as u32 + 1,
    }
}

fn build(params: ConstructionParams, limits: &BuildLimits) -> Result<LabeledMatrix> {
    let table = SelectorTable::new(&params)?;
    let mb = checked_pow(params.m as u64, params.b as u32)?;
    let rows = mb
        .checked_mul(scalar_count(&params))
        .ok_or_else(|| Error::CapExceeded("row count".into()))?;
    let cols = mb
        .checked_mul(table.n_sel as u64)
        .ok_or_else(|| Error::CapExceeded("column count".into()))?;
    check_dims(rows, cols, limits)?;

    let per_row = par::map_range(limits.parallel, rows as usize, |ri| {
        let s = scalar_at(&params, ri / mb as usize);
        let r = unrank_vec(ri as u64 % mb, params.b, params.m);
        table.row_cols(s, &r)
    });

    let weight: usize = per_row.iter().map(|v| v.len()).sum();
    if weight as u64 > limits.max_ones {
        return Err(Error::CapExceeded(format!(
            "{weight} ones exceed cap {}",
            limits.max_ones
        )));
    }
    let mut ones = Vec::with_capacity(weight);
    for (ri, cs) in per_row.iter().enumerate() {
        for &c in cs {
            ones.push((ri as u32, c));
        }
    }
    let matrix = Matrix01::from_sorted_ones(rows as usize, cols as usize, ones)?;
    let (row_labels, col_labels) = regenerate_labels(&params, rows as usize, cols as usize)?;
    Ok(LabeledMatrix {
        matrix,
        params,
        row_labels,
        col_labels,
    })
}

fn regenerate_labels(
    params: &ConstructionParams,
    rows: usize,
    cols: usize,
) -> Result<(Vec<RowLabel>, Vec<ColLabel>)> {
    let (b, m) = (params.b, params.m);
    let mb = checked_pow(m as u64, b as u32)?;
    let table = SelectorTable::new(params)?;
    let row_labels = (0..rows)
        .map(|ri| RowLabel {
            s: scalar_at(params, ri / mb as usize),
            r: unrank_vec(ri as u64 % mb, b, m),
        })
        .collect();
    let col_labels = (0..cols)
        .map(|ci| ColLabel {
            c: unrank_vec(ci as u64 / table.n_sel as u64, b, m),
            i: table.sels[ci % table.n_sel].0.clone(),
        })
        .collect();
    Ok((row_labels, col_labels))
}

impl LabeledMatrix {
    /// Checks one labeled cell against the defining equation.
    pub fn equation_holds(&self, row: &RowLabel, col: &ColLabel) -> bool {
        let m = self.params.m as i64;
        let s = row.s as i64;
        match self.params.variant {
            Variant::A | Variant::Dense => row
                .r
                .iter()
                .zip(col.c.iter().zip(col.i.iter()))
                .all(|(&r, (&c, &i))| r as i64 == c as i64 + s * i as i64),
            Variant::At => {
                let (even, odd) = split_even_odd(&col.i);
                row.r.iter().enumerate().all(|(u, &r)| {
                    r as i64
                        == col.c[u] as i64 + s * even[u] as i64 + (m + 1 - s) * odd[u] as i64
                })
            }
        }
    }

    /// Rebuilds a labeled matrix from a bare matrix plus parameters,
    /// verifying that every 1 satisfies the defining equation.
    pub fn from_matrix(matrix: Matrix01, params: ConstructionParams) -> Result<LabeledMatrix> {
        let (row_labels, col_labels) = regenerate_labels(&params, matrix.rows(), matrix.cols())?;
        let lm = LabeledMatrix {
            matrix,
            params,
            row_labels,
            col_labels,
        };
        for (r, c) in lm.matrix.ones() {
            if !lm.equation_holds(&lm.row_labels[r as usize], &lm.col_labels[c as usize]) {
                return Err(Error::Inconsistency(format!(
                    "cell ({r}, {c}) does not satisfy the defining equation"
                )));
            }
        }
        Ok(lm)
    }

    pub fn sidecar(&self) -> Sidecar {
        Sidecar {
            params: self.params.clone(),
            rows: self.matrix.rows(),
            cols: self.matrix.cols(),
            weight: self.matrix.weight(),
            row_index_encoding: "(s_index)*m^b + sum_u (r_u - 1)*m^(b-u)".into(),
            col_index_encoding: "(sum_u (c_u - 1)*m^(b-u))*i_count + i_rank".into(),
        }
    }
}

/// JSON sidecar stored next to a matrix file; enough to rebuild labels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sidecar {
    #[serde(flatten)]
    pub params: ConstructionParams,
    pub rows: usize,
    pub cols: usize,
    pub weight: usize,
    pub row_index_encoding: String,
    pub col_index_encoding: String,
}

/// Exact evaluation of the guaranteed weight of the base family:
/// `ceil(2^b * m^b * (m/(b+1) - 1))`, clamped at zero.
pub fn weight_bound_a(b: usize, m: u32) -> Result<u64> {
    if b >= 32 {
        return Err(Error::CapExceeded("b too large".into()));
    }
    let two_b = 1i128 << b;
    let mb = (m as i128)
        .checked_pow(b as u32)
        .ok_or_else(|| Error::CapExceeded("m^b".into()))?;
    let numer = two_b
        .checked_mul(mb)
        .and_then(|x| x.checked_mul(m as i128 - (b as i128 + 1)))
        .ok_or_else(|| Error::CapExceeded("weight bound overflows".into()))?;
    if numer <= 0 {
        return Ok(0);
    }
    let denom = b as i128 + 1;
    Ok(((numer + denom - 1) / denom) as u64)
}

/// One audit finding; the scan order (regeneration, then columns, then
/// rows, each ascending) makes the first finding deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditViolation {
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct AuditReport {
    pub pass: bool,
    pub violation: Option<AuditViolation>,
    pub column_pairs: u64,
    pub row_pairs: u64,
}

/// Audits a constructed matrix. Three checks run in order: every row's 1s
/// match what the defining equation regenerates (so any toggled bit is
/// caught); down any column the scalars strictly increase; and along any
/// row the first nonzero coordinate of the column-label difference pins
/// down the offset applied by the left 1's selector.
pub fn audit_simple_properties(lm: &LabeledMatrix) -> AuditReport {
    let a = &lm.matrix;
    let parallel = cfg!(feature = "parallel");

    let table = match SelectorTable::new(&lm.params) {
        Ok(t) => t,
        Err(e) => {
            return AuditReport {
                pass: false,
                violation: Some(AuditViolation {
                    detail: format!("bad parameters: {e}"),
                }),
                column_pairs: 0,
                row_pairs: 0,
            }
        }
    };

    let regen = par::map_range(parallel, a.rows(), |ri| {
        let label = &lm.row_labels[ri];
        let expected = table.row_cols(label.s, &label.r);
        if expected != a.row_cols(ri as u32) {
            Some(AuditViolation {
                detail: format!("row {ri} does not match the defining equation"),
            })
        } else {
            None
        }
    });

    let col_results = par::map_range(parallel, a.cols(), |ci| {
        let rows = a.col_rows(ci as u32);
        let mut pairs = 0u64;
        for x in 0..rows.len() {
            for y in x + 1..rows.len() {
                pairs += 1;
                let s0 = lm.row_labels[rows[x] as usize].s;
                let s1 = lm.row_labels[rows[y] as usize].s;
                if s0 >= s1 {
                    return (
                        pairs,
                        Some(AuditViolation {
                            detail: format!(
                                "column {ci}: rows {} and {} have s {} >= {}",
                                rows[x], rows[y], s0, s1
                            ),
                        }),
                    );
                }
            }
        }
        (pairs, None)
    });

    let row_results = par::map_range(parallel, a.rows(), |ri| {
        let cols = a.row_cols(ri as u32);
        let label = &lm.row_labels[ri];
        let mut pairs = 0u64;
        for x in 0..cols.len() {
            for y in x + 1..cols.len() {
                pairs += 1;
                if let Some(v) = check_row_pair(lm, ri as u32, label, cols[x], cols[y]) {
                    return (pairs, Some(v));
                }
            }
        }
        (pairs, None)
    });

    let mut report = AuditReport {
        pass: true,
        violation: None,
        column_pairs: col_results.iter().map(|(p, _)| p).sum(),
        row_pairs: row_results.iter().map(|(p, _)| p).sum(),
    };
    let first = regen
        .into_iter()
        .chain(col_results.into_iter().map(|(_, v)| v))
        .chain(row_results.into_iter().map(|(_, v)| v))
        .flatten()
        .next();
    if let Some(v) = first {
        report.pass = false;
        report.violation = Some(v);
    }
    report
}

fn check_row_pair(
    lm: &LabeledMatrix,
    ri: u32,
    row: &RowLabel,
    c0: u32,
    c1: u32,
) -> Option<AuditViolation> {
    let l0 = &lm.col_labels[c0 as usize];
    let l1 = &lm.col_labels[c1 as usize];
    let diff: Vec<i64> = l1
        .c
        .iter()
        .zip(l0.c.iter())
        .map(|(&a, &b)| a as i64 - b as i64)
        .collect();
    let fail = |msg: String| {
        Some(AuditViolation {
            detail: format!("row {ri}, columns {c0} and {c1}: {msg}"),
        })
    };
    let Some(u) = diff.iter().position(|&d| d != 0) else {
        return fail("column labels share the same c vector".into());
    };
    if diff[u] < 0 {
        return fail("first nonzero of c1 - c0 is negative".into());
    }
    let s0 = row.s as i64;
    let m = lm.params.m as i64;
    match lm.params.variant {
        Variant::A => {
            if l0.i[u] != 1 {
                return fail(format!("selector of left column is 0 at position {u}"));
            }
            if diff[u] != s0 {
                return fail(format!("(c1-c0)({u}) = {} but s0 = {s0}", diff[u]));
            }
        }
        Variant::At => {
            if l0.i[u] != 1 {
                return fail(format!("selector of left column is 0 at position {u}"));
            }
            let (even, odd) = split_even_odd(&l0.i);
            let expected = if even[u] == 1 { s0 } else { m + 1 - s0 };
            debug_assert!(even[u] + odd[u] == 1);
            if diff[u] != expected {
                return fail(format!("(c1-c0)({u}) = {} but expected {expected}", diff[u]));
            }
        }
        Variant::Dense => {
            let t = lm.params.t.expect("dense has t") as i64;
            if l0.i[u] == 0 {
                return fail(format!("selector of left column is 0 at position {u}"));
            }
            for (v, &d) in diff.iter().enumerate() {
                if d % s0 != 0 || (d / s0).abs() > t - 1 {
                    return fail(format!(
                        "(c1-c0)({v}) = {d} is not j*s0 with |j| <= {}",
                        t - 1
                    ));
                }
            }
            if diff[u] / s0 < 1 {
                return fail(format!("(c1-c0)({u}) = {} below s0 = {s0}", diff[u]));
            }
        }
    }
    None
}
