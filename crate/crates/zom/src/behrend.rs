//! Solution-free integer sets and the dense matrix construction built on
//! them.
//!
//! A set `S` inside `[N]` is solution-free for bound `h` when the only
//! triples `s0 < s1 < s2` from `S` solving `a*s0 + b*s1 + c*s2 = 0` with
//! `|a|,|b|,|c| <= h` are trivial: `a+b+c = 0` and
//! `ab(s0-s1) = bc(s1-s2) = ca(s2-s0) = 0`.
//!
//! The constructive path groups the vectors of `{0..d-1}^D` by squared
//! Euclidean norm, keeps the most populous shell, prefixes a digit 1 and
//! reads the digits in base `2hd`. Parameters use binary logarithms with
//! explicit floors so everything stays in integer arithmetic:
//! `D = floor(sqrt(floor(log(N/2)) / floor(log h)))` and
//! `d = floor(2^floor(sqrt(floor(log(N/2)) * floor(log h))) / 2h)`.
//! When those formulas degenerate (tiny `N`, or `h = 1`) a greedy
//! fallback scans `1..N` keeping every element that preserves
//! solution-freeness. Either way the output is re-verified by the
//! exhaustive checker before it is returned.

use crate::constructions::{build_dense_from_set, BuildLimits, LabeledMatrix};
use crate::error::{Error, Result};
use crate::par;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BehrendParams {
    Shell {
        d: u64,
        #[serde(rename = "D")]
        dim: u32,
        base: u64,
        shell_norm: u64,
    },
    Fallback,
}

/// A verified solution-free subset of `[N]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BehrendSet {
    #[serde(rename = "N")]
    pub n: u64,
    pub h: u64,
    pub params: BehrendParams,
    /// Strictly increasing.
    pub elements: Vec<u64>,
    pub verified: bool,
}

/// Outcome of the exhaustive solution check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum VerifyOutcome {
    Ok,
    /// First nontrivial solution in scan order: `(a, b, c, s0, s1, s2)`.
    Counterexample(i64, i64, i64, u64, u64, u64),
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, VerifyOutcome::Ok)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Cap on `|S|^3 * (2h+1)^3`, the nominal size of the scan.
    pub op_budget: u128,
    pub parallel: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            op_budget: 100_000_000_000,
            parallel: cfg!(feature = "parallel"),
        }
    }
}

/// Exhaustively checks solution-freeness over all increasing triples and
/// coefficient triples (sign-normalized: the first nonzero coefficient is
/// positive, mirrored solutions being equivalent). The scan is
/// lexicographic in `(s0, s1, s2, a, b)`, which fixes which
/// counterexample is reported, in parallel or not.
pub fn verify_behrend(elements: &[u64], h: u64, opts: &VerifyOptions) -> Result<VerifyOutcome> {
    if elements.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("set must be strictly increasing".into()));
    }
    if elements.contains(&0) {
        return Err(Error::InvalidArgument("elements must be positive".into()));
    }
    let s = elements.len() as u128;
    let coef = (2 * h + 1) as u128;
    let nominal = s * s * s * coef * coef * coef;
    if nominal > opts.op_budget {
        return Err(Error::BudgetExceeded(format!(
            "verification needs ~{nominal} operations, budget {}",
            opts.op_budget
        )));
    }

    let n = elements.len();
    let per_s0 = par::map_range(opts.parallel, n, |x| {
        for y in x + 1..n {
            for z in y + 1..n {
                if let Some(cex) = first_violation(elements[x], elements[y], elements[z], h) {
                    return Some(cex);
                }
            }
        }
        None
    });
    match per_s0.into_iter().flatten().next() {
        Some(cex) => Ok(VerifyOutcome::Counterexample(
            cex.0, cex.1, cex.2, cex.3, cex.4, cex.5,
        )),
        None => Ok(VerifyOutcome::Ok),
    }
}

type Cex = (i64, i64, i64, u64, u64, u64);

/// First nontrivial solution on one increasing triple, scanning `(a, b)`
/// lexicographically; `c` is forced by the equation.
fn first_violation(s0: u64, s1: u64, s2: u64, h: u64) -> Option<Cex> {
    let h = h as i64;
    let (v0, v1, v2) = (s0 as i64, s1 as i64, s2 as i64);
    for a in -h..=h {
        for b in -h..=h {
            let rest = a * v0 + b * v1;
            if rest.rem_euclid(v2) != 0 {
                continue;
            }
            let c = -rest / v2;
            if c.abs() > h {
                continue;
            }
            let first = [a, b, c].into_iter().find(|&x| x != 0).unwrap_or(0);
            if first <= 0 {
                continue; // zero solution, or the mirror of one already seen
            }
            let trivial = a + b + c == 0
                && a * b * (v0 - v1) == 0
                && b * c * (v1 - v2) == 0
                && c * a * (v2 - v0) == 0;
            if !trivial {
                return Some((a, b, c, s0, s1, s2));
            }
        }
    }
    None
}

/// For the greedy fallback: can `x` (larger than everything in `set`)
/// join without creating a nontrivial solution? Only triples containing
/// `x` need checking, and `x` is always the largest, so it sits in the
/// `s2` slot.
fn extension_ok(set: &[u64], x: u64, h: u64) -> bool {
    for (yi, &y) in set.iter().enumerate() {
        for &z in &set[yi + 1..] {
            if first_violation(y, z, x, h).is_some() {
                return false;
            }
        }
    }
    true
}

fn ilog2(x: u64) -> u32 {
    63 - x.leading_zeros()
}

fn isqrt(x: u64) -> u64 {
    if x == 0 {
        return 0;
    }
    let mut r = (x as f64).sqrt() as u64;
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    while r * r > x {
        r -= 1;
    }
    r
}

const SHELL_VECTOR_CAP: u128 = 50_000_000;

/// Builds a solution-free subset of `[N]` for coefficient bound `h`.
pub fn behrend_set(n: u64, h: u64) -> Result<BehrendSet> {
    behrend_set_with(n, h, &VerifyOptions::default())
}

pub fn behrend_set_with(n: u64, h: u64, vopts: &VerifyOptions) -> Result<BehrendSet> {
    if n < 1 || h < 1 {
        return Err(Error::InvalidArgument(
            "behrend_set requires N >= 1, h >= 1".into(),
        ));
    }
    let (params, elements) = match shell_parameters(n, h) {
        Some((d, dim)) => {
            let base = 2 * h * d;
            let (shell_norm, elements) = best_shell(d, dim, base)?;
            debug_assert!(elements.last().is_none_or(|&s| s < n));
            // Pigeonhole size guarantee: |S| * D * d^2 >= d^D.
            debug_assert!(
                (elements.len() as u128) * dim as u128 * (d as u128).pow(2)
                    >= (d as u128).pow(dim)
            );
            (
                BehrendParams::Shell {
                    d,
                    dim,
                    base,
                    shell_norm,
                },
                elements,
            )
        }
        None => {
            let mut out: Vec<u64> = Vec::new();
            for x in 1..=n {
                if extension_ok(&out, x, h) {
                    out.push(x);
                }
            }
            (BehrendParams::Fallback, out)
        }
    };

    match verify_behrend(&elements, h, vopts)? {
        VerifyOutcome::Ok => Ok(BehrendSet {
            n,
            h,
            params,
            elements,
            verified: true,
        }),
        VerifyOutcome::Counterexample(a, b, c, s0, s1, s2) => Err(Error::Inconsistency(format!(
            "constructed set admits {a}*{s0} + {b}*{s1} + {c}*{s2} = 0"
        ))),
    }
}

/// Integer-only evaluation of the shell parameters; `None` means the
/// formulas degenerate and the greedy fallback should run.
fn shell_parameters(n: u64, h: u64) -> Option<(u64, u32)> {
    if h < 2 || n < 2 {
        return None;
    }
    let log_h = ilog2(h) as u64;
    let log_half = ilog2(n / 2) as u64;
    if log_half < 1 {
        return None;
    }
    let dim = isqrt(log_half / log_h) as u32;
    let exponent = isqrt(log_half * log_h);
    if exponent >= 63 {
        return None;
    }
    let d = (1u64 << exponent) / (2 * h);
    if d < 2 || dim < 1 {
        return None;
    }
    // Range safety: e*D <= log(N/2), so 2*(2hd)^D <= 2^(1+log(N/2)) <= N.
    debug_assert!(exponent * dim as u64 <= log_half);
    Some((d, dim))
}

/// Enumerates `{0..d-1}^D`, groups by squared norm, and returns the most
/// populous shell (smallest norm on ties) read as base-`base` integers
/// with a leading 1 digit.
fn best_shell(d: u64, dim: u32, base: u64) -> Result<(u64, Vec<u64>)> {
    let count = (d as u128)
        .checked_pow(dim)
        .filter(|&c| c <= SHELL_VECTOR_CAP);
    let Some(count) = count else {
        return Err(Error::CapExceeded(format!(
            "shell enumeration over {d}^{dim} vectors"
        )));
    };
    let max_norm = (dim as u64) * (d - 1) * (d - 1);
    let mut counts = vec![0u64; max_norm as usize + 1];
    let mut digits = vec![0u64; dim as usize];
    for _ in 0..count {
        let norm: u64 = digits.iter().map(|&v| v * v).sum();
        counts[norm as usize] += 1;
        bump(&mut digits, d);
    }
    let best_norm = (0..counts.len())
        .max_by_key(|&i| (counts[i], std::cmp::Reverse(i)))
        .unwrap();

    let lead = base
        .checked_pow(dim)
        .ok_or_else(|| Error::CapExceeded("base^D overflows".into()))?;
    let mut elements = Vec::with_capacity(counts[best_norm] as usize);
    let mut digits = vec![0u64; dim as usize];
    for _ in 0..count {
        let norm: u64 = digits.iter().map(|&v| v * v).sum();
        if norm as usize == best_norm {
            elements.push(lead + digits.iter().fold(0u64, |acc, &v| acc * base + v));
        }
        bump(&mut digits, d);
    }
    elements.sort_unstable();
    Ok((best_norm as u64, elements))
}

fn bump(digits: &mut [u64], d: u64) {
    for v in digits.iter_mut().rev() {
        *v += 1;
        if *v < d {
            return;
        }
        *v = 0;
    }
}

/// Builds the dense construction: finds the least `m` whose solution-free
/// set inside `[m/b]` (coefficient bound `t-1`) reaches `t^b` elements,
/// truncates the set to exactly that many scalars, and assembles the
/// matrix. Returns the matrix together with the truncated set.
pub fn build_dense_s0t(
    b: usize,
    t: u32,
    limits: &BuildLimits,
) -> Result<(LabeledMatrix, BehrendSet)> {
    if b < 1 || t < 2 {
        return Err(Error::InvalidArgument(
            "dense construction requires b >= 1, t >= 2".into(),
        ));
    }
    let needed = (t as u64)
        .checked_pow(b as u32)
        .ok_or_else(|| Error::CapExceeded("t^b overflows".into()))?;
    let h = (t - 1) as u64;

    let mut m = (b as u64) * needed;
    loop {
        // The finished matrix is square with (m*t)^b rows; bail out before
        // scanning into sizes the cell cap can never accept.
        let cells = (m * t as u64)
            .checked_pow(b as u32)
            .and_then(|d| d.checked_mul(d));
        match cells {
            Some(c) if c <= limits.max_cells => {}
            _ => {
                return Err(Error::CapExceeded(format!(
                    "dense construction needs m >= {m}, beyond the cell cap"
                )))
            }
        }

        let set = behrend_set(m / b as u64, h)?;
        if set.elements.len() as u64 >= needed {
            let scalars: Vec<u32> = set.elements[..needed as usize]
                .iter()
                .map(|&s| s as u32)
                .collect();
            let lm = build_dense_from_set(b, m as u32, t, &scalars, limits)?;
            let truncated = BehrendSet {
                elements: set.elements[..needed as usize].to_vec(),
                ..set
            };
            return Ok((lm, truncated));
        }
        m += 1;
    }
}
