//! Structural pattern taxonomy: covering detection, degeneracy class, the
//! weight-1-column reduction engine, and the light/Q-free test.

use crate::contains::{contains_with, SearchOptions};
use crate::error::{Error, Result};
use crate::matrix::pattern_as_matrix;
use crate::pattern::{Pattern, Transform, ALL_TRANSFORMS};
use crate::registry;
use serde::Serialize;
use std::collections::HashMap;

/// Witness that a pattern is covering: the distinguished row, the other
/// multi-1 rows, and their column spans.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CoveringWitness {
    pub k_star: u32,
    #[serde(rename = "J")]
    pub j_rows: Vec<u32>,
    /// `(row, first, last)` per row of `j_rows`.
    pub intervals: Vec<(u32, u32, u32)>,
}

/// Covering test: the pattern must be acyclic; some row `k*` holds 1s in
/// the first and last columns; among the other rows with at least two 1s
/// at most one sits above `k*`, each is tied to `k*`'s side by a column
/// carrying two 1s inside the connecting row range; and their column
/// spans cover the full width as real intervals. Returns the witness for
/// the smallest valid `k*`.
pub fn is_covering(p: &Pattern) -> Option<CoveringWitness> {
    if !p.is_acyclic() {
        return None;
    }
    let last_col = p.cols() as u32 - 1;
    'next_k: for k_star in 0..p.rows() as u32 {
        if !p.get(k_star, 0) || !p.get(k_star, last_col) {
            continue;
        }
        let j_rows: Vec<u32> = (0..p.rows() as u32)
            .filter(|&r| r != k_star && p.row_weight(r) >= 2)
            .collect();
        let above: Vec<u32> = j_rows.iter().copied().filter(|&r| r < k_star).collect();
        if above.len() > 1 {
            continue;
        }
        // Column linking: a column with two 1s inside the row range
        // joining each member of J to k*.
        for &j in &j_rows {
            let (lo, hi) = if j < k_star { (j, k_star) } else { (k_star, j) };
            let linked = (0..p.cols() as u32).any(|c| {
                p.col_ones(c).iter().filter(|&&r| r >= lo && r <= hi).count() >= 2
            });
            if !linked {
                continue 'next_k;
            }
        }
        // Real-interval cover of [0, last_col].
        let mut intervals: Vec<(u32, u32, u32)> = j_rows
            .iter()
            .map(|&r| {
                let ones = p.row_ones(r);
                (r, ones[0], *ones.last().unwrap())
            })
            .collect();
        let mut spans: Vec<(u32, u32)> = intervals.iter().map(|&(_, f, l)| (f, l)).collect();
        spans.sort_unstable();
        if spans.first().is_none_or(|&(f, _)| f != 0) {
            continue;
        }
        let mut covered = 0u32;
        for (f, l) in spans {
            if f > covered {
                continue 'next_k;
            }
            covered = covered.max(l);
        }
        if covered != last_col {
            continue;
        }
        intervals.sort_unstable();
        return Some(CoveringWitness {
            k_star,
            j_rows,
            intervals,
        });
    }
    None
}

/// Minimal depth of recursive horizontal cuts, each cut crossing at most
/// one column that has 1s in both halves. Single rows are class 0; `None`
/// means no decomposition exists.
pub fn degeneracy_class(p: &Pattern) -> Option<u32> {
    let col_rows: Vec<Vec<u32>> = (0..p.cols() as u32).map(|c| p.col_ones(c)).collect();
    let mut memo: HashMap<(u32, u32), Option<u32>> = HashMap::new();
    class_of(&col_rows, 0, p.rows() as u32, &mut memo)
}

fn class_of(
    col_rows: &[Vec<u32>],
    lo: u32,
    hi: u32,
    memo: &mut HashMap<(u32, u32), Option<u32>>,
) -> Option<u32> {
    if hi - lo == 1 {
        return Some(0);
    }
    if let Some(&v) = memo.get(&(lo, hi)) {
        return v;
    }
    let mut best: Option<u32> = None;
    for cut in lo + 1..hi {
        let shared = col_rows
            .iter()
            .filter(|rows| {
                rows.iter().any(|&r| r >= lo && r < cut)
                    && rows.iter().any(|&r| r >= cut && r < hi)
            })
            .count();
        if shared > 1 {
            continue;
        }
        if let (Some(top), Some(bottom)) = (
            class_of(col_rows, lo, cut, memo),
            class_of(col_rows, cut, hi, memo),
        ) {
            let candidate = 1 + top.max(bottom);
            best = Some(best.map_or(candidate, |b: u32| b.min(candidate)));
        }
    }
    memo.insert((lo, hi), best);
    best
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Rule {
    A,
    B,
    C,
}

impl Rule {
    fn cost(self) -> u32 {
        match self {
            Rule::A | Rule::B => 1,
            Rule::C => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionStep {
    pub rule: Rule,
    /// Symmetry applied before removing the site, by name.
    pub transform: String,
    /// Column index removed (rule C removes `site` and `site + 1`).
    pub site: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionOutcome {
    Success,
    Stuck,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub steps: Vec<ReductionStep>,
    pub exponent: u32,
    pub residual: String,
    pub outcome: ReductionOutcome,
}

/// Membership in the base set of patterns taken as having linear
/// extremal functions: acyclic with weight at most 3, permutation
/// matrices, and monotone (chain) patterns.
pub fn is_base_linear(p: &Pattern) -> bool {
    (p.weight() <= 3 && p.is_acyclic()) || p.is_permutation() || p.is_monotone()
}

/// Rule A site: the last column has exactly one 1.
fn site_a(p: &Pattern) -> Option<u32> {
    let last = p.cols() as u32 - 1;
    (p.col_weight(last) == 1).then_some(last)
}

/// Rule B at `j`: a weight-1 column whose 1 (row `i0`) extends right,
/// with a row carrying 1s at `j-1` and `j+1`.
fn b_applies(p: &Pattern, j: u32) -> bool {
    if j == 0 || j + 1 >= p.cols() as u32 || p.col_weight(j) != 1 {
        return false;
    }
    let i0 = p.col_ones(j)[0];
    p.get(i0, j + 1) && (0..p.rows() as u32).any(|i1| p.get(i1, j - 1) && p.get(i1, j + 1))
}

/// Rule C at `j`: adjacent weight-1 columns `j`, `j+1` anchored outward
/// on both sides, with a row spanning `j-1` to `j+2`.
fn c_applies(p: &Pattern, j: u32) -> bool {
    if j == 0 || j + 2 >= p.cols() as u32 {
        return false;
    }
    if p.col_weight(j) != 1 || p.col_weight(j + 1) != 1 {
        return false;
    }
    let i0 = p.col_ones(j)[0];
    let i1 = p.col_ones(j + 1)[0];
    p.get(i0, j - 1)
        && p.get(i1, j + 2)
        && (0..p.rows() as u32).any(|i2| p.get(i2, j - 1) && p.get(i2, j + 2))
}

fn site_b(p: &Pattern) -> Option<u32> {
    (0..p.cols() as u32).find(|&j| b_applies(p, j))
}

fn site_c(p: &Pattern) -> Option<u32> {
    (0..p.cols() as u32).find(|&j| c_applies(p, j))
}

fn find_step(p: &Pattern) -> Option<(Rule, Transform, u32)> {
    for rule in [Rule::A, Rule::B, Rule::C] {
        for tf in ALL_TRANSFORMS {
            let q = p.transform(tf);
            let site = match rule {
                Rule::A => site_a(&q),
                Rule::B => site_b(&q),
                Rule::C => site_c(&q),
            };
            if let Some(site) = site {
                return Some((rule, tf, site));
            }
        }
    }
    None
}

fn apply_step(p: &Pattern, rule: Rule, tf: Transform, site: u32) -> Result<Pattern> {
    let q = p.transform(tf);
    match rule {
        Rule::A | Rule::B => q.remove_cols(&[site]),
        Rule::C => q.remove_cols(&[site, site + 1]),
    }
}

/// Greedy reduction: repeatedly applies the first applicable rule (A
/// before B before C, transforms in their canonical order, leftmost
/// site), stopping when the residual is base linear or nothing applies.
/// The exponent adds 1 per A or B step and 2 per C step.
pub fn reduce_polylog(p: &Pattern) -> ReductionReport {
    let mut current = p.clone();
    let mut steps = Vec::new();
    let mut exponent = 0;
    loop {
        if is_base_linear(&current) {
            return ReductionReport {
                steps,
                exponent,
                residual: current.to_text(),
                outcome: ReductionOutcome::Success,
            };
        }
        let Some((rule, tf, site)) = find_step(&current) else {
            return ReductionReport {
                steps,
                exponent,
                residual: current.to_text(),
                outcome: ReductionOutcome::Stuck,
            };
        };
        current = apply_step(&current, rule, tf, site).expect("site stays in range");
        exponent += rule.cost();
        steps.push(ReductionStep {
            rule,
            transform: tf.name().to_string(),
            site,
        });
    }
}

/// Exhaustive variant of the reduction search for patterns with at most
/// 8 columns: the minimum exponent over every applicable rule sequence,
/// or `None` if no sequence reaches a base-linear residual.
pub fn exhaustive_min_exponent(p: &Pattern) -> Result<Option<u32>> {
    if p.cols() > 8 {
        return Err(Error::InvalidArgument(
            "exhaustive reduction is limited to 8 columns".into(),
        ));
    }
    let mut memo = HashMap::new();
    Ok(min_exponent(p, &mut memo))
}

fn min_exponent(p: &Pattern, memo: &mut HashMap<Pattern, Option<u32>>) -> Option<u32> {
    if is_base_linear(p) {
        return Some(0);
    }
    if let Some(v) = memo.get(p) {
        return *v;
    }
    let mut best: Option<u32> = None;
    for rule in [Rule::A, Rule::B, Rule::C] {
        for tf in ALL_TRANSFORMS {
            let q = p.transform(tf);
            let sites: Vec<u32> = match rule {
                Rule::A => site_a(&q).into_iter().collect(),
                Rule::B => (0..q.cols() as u32).filter(|&j| b_applies(&q, j)).collect(),
                Rule::C => (0..q.cols() as u32).filter(|&j| c_applies(&q, j)).collect(),
            };
            for site in sites {
                if let Ok(next) = apply_step(p, rule, tf, site) {
                    if let Some(sub) = min_exponent(&next, memo) {
                        let total = sub + rule.cost();
                        best = Some(best.map_or(total, |b: u32| b.min(total)));
                    }
                }
            }
        }
    }
    memo.insert(p.clone(), best);
    best
}

/// Light and avoiding the oscillation obstructions: true iff the pattern
/// has one 1 per column and contains none of q3, q3p, or their
/// horizontal/vertical reflections.
pub fn q_free_light_check(p: &Pattern) -> bool {
    if !p.is_light() {
        return false;
    }
    let host = pattern_as_matrix(p);
    let opts = SearchOptions::default();
    let mut members = Vec::new();
    for name in ["q3", "q3p"] {
        let base = registry::registry_pattern(name, None).expect("registry pattern");
        for tf in [
            Transform::Identity,
            Transform::FlipH,
            Transform::FlipV,
            Transform::Rot180,
        ] {
            let q = base.transform(tf);
            if !members.contains(&q) {
                members.push(q);
            }
        }
    }
    members
        .iter()
        .all(|q| !contains_with(q, &host, &opts).is_witness())
}

/// Full classifier report for one pattern.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassifyReport {
    pub pattern: String,
    pub rows: usize,
    pub cols: usize,
    pub weight: usize,
    pub acyclic: bool,
    pub light: bool,
    pub covering: Option<CoveringWitness>,
    pub degeneracy: Option<u32>,
    pub degeneracy_transposed: Option<u32>,
    pub reduction: ReductionReport,
    pub q_free_light: bool,
}

pub fn classify(p: &Pattern) -> ClassifyReport {
    ClassifyReport {
        pattern: p.to_text(),
        rows: p.rows(),
        cols: p.cols(),
        weight: p.weight(),
        acyclic: p.is_acyclic(),
        light: p.is_light(),
        covering: is_covering(p),
        degeneracy: degeneracy_class(p),
        degeneracy_transposed: degeneracy_class(&p.transform(Transform::Transpose)),
        reduction: reduce_polylog(p),
        q_free_light: q_free_light_check(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::registry_pattern;

    fn named(n: &str) -> Pattern {
        registry_pattern(n, None).unwrap()
    }

    #[test]
    fn covering_family() {
        for name in ["s0", "s1", "s2", "s3"] {
            assert!(is_covering(&named(name)).is_some(), "{name} should cover");
        }
        for name in ["p1", "q3"] {
            assert!(is_covering(&named(name)).is_none(), "{name} should not cover");
        }
        assert!(is_covering(&Pattern::parse("1.1").unwrap()).is_none());
    }

    #[test]
    fn covering_witness_for_s0() {
        let w = is_covering(&named("s0")).unwrap();
        assert_eq!(w.k_star, 1);
        assert_eq!(w.j_rows, vec![0, 2]);
        assert_eq!(w.intervals, vec![(0, 0, 2), (2, 1, 3)]);
    }

    #[test]
    fn covering_needs_real_interval_cover() {
        // Spans [0,1] and [2,3] touch as integers but leave (1,2) open,
        // so the union is not the full real interval [0,3].
        let p = Pattern::parse("1..1\n11..\n..11").unwrap();
        assert!(p.is_acyclic());
        assert!(is_covering(&p).is_none());

        // Overlapping spans [0,2] and [1,3] do cover.
        let q = Pattern::parse("1..1\n1.1.\n.1.1").unwrap();
        assert!(is_covering(&q).is_some());
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(degeneracy_class(&Pattern::parse("1.1").unwrap()), Some(0));
        assert_eq!(degeneracy_class(&named("s0")), Some(2));
        assert_eq!(degeneracy_class(&named("s1")), Some(2));
        assert_eq!(degeneracy_class(&named("q3")), Some(1));
        assert_eq!(degeneracy_class(&Pattern::parse("11\n11").unwrap()), None);
    }

    #[test]
    fn duplicated_last_row_changes_class_by_at_most_one() {
        // A duplicated row with two or more 1s shares every one of its
        // columns with its twin, so no horizontal cut can ever separate
        // them and the class becomes undefined. Where a decomposition
        // survives, the class moves by at most one.
        for name in ["s0", "q3", "p2", "r0"] {
            let p = named(name);
            let Some(base) = degeneracy_class(&p) else { continue };
            let last = p.rows() as u32 - 1;
            let mut ones = p.ones().to_vec();
            for &(r, c) in p.ones() {
                if r == last {
                    ones.push((last + 1, c));
                }
            }
            let dup = Pattern::new(p.rows() + 1, p.cols(), ones).unwrap();
            match degeneracy_class(&dup) {
                Some(d) => assert!(d == base || d == base + 1, "{name}: {base} -> {d}"),
                None => assert!(
                    p.row_weight(last) >= 2,
                    "{name}: class vanished despite a weight-1 last row"
                ),
            }
        }
    }

    #[test]
    fn reduction_exponents() {
        let expect = [("p1", 1), ("p2", 2), ("p3", 3), ("r0", 2), ("r1", 3), ("r2", 2)];
        for (name, exp) in expect {
            let report = reduce_polylog(&named(name));
            assert_eq!(report.outcome, ReductionOutcome::Success, "{name}");
            assert_eq!(report.exponent, exp, "{name}");
        }
        for name in ["s0", "s1"] {
            let report = reduce_polylog(&named(name));
            assert_eq!(report.outcome, ReductionOutcome::Stuck, "{name}");
        }
    }

    #[test]
    fn reduction_steps_replay() {
        // Every recorded step must re-validate when replayed.
        for name in ["p3", "r0", "r1", "r2"] {
            let mut current = named(name);
            for step in reduce_polylog(&current).steps {
                let tf = Transform::parse(&step.transform).unwrap();
                let q = current.transform(tf);
                let found = match step.rule {
                    Rule::A => site_a(&q),
                    Rule::B => site_b(&q),
                    Rule::C => site_c(&q),
                };
                assert_eq!(found, Some(step.site), "{name} step {step:?}");
                current = apply_step(&current, step.rule, tf, step.site).unwrap();
            }
        }
    }

    #[test]
    fn strong_version_consistency() {
        // Wherever greedy reduction succeeds, exponent <= weight - 3.
        for name in ["p1", "p2", "p3", "p4", "r0", "r1", "r2"] {
            let p = named(name);
            let report = reduce_polylog(&p);
            if report.outcome == ReductionOutcome::Success {
                assert!(
                    report.exponent <= p.weight() as u32 - 3,
                    "{name}: exponent {} too high",
                    report.exponent
                );
            }
        }
    }

    #[test]
    fn exhaustive_never_beaten_by_greedy() {
        for name in ["p1", "p2", "p3", "r0", "r1", "r2", "s0", "s1", "q3"] {
            let p = named(name);
            let greedy = reduce_polylog(&p);
            let best = exhaustive_min_exponent(&p).unwrap();
            match (greedy.outcome, best) {
                (ReductionOutcome::Success, Some(b)) => assert!(b <= greedy.exponent, "{name}"),
                (ReductionOutcome::Success, None) => panic!("{name}: exhaustive missed a path"),
                (ReductionOutcome::Stuck, _) => {}
            }
        }
    }

    #[test]
    fn q_free_light_examples() {
        assert!(q_free_light_check(&named("o2")));
        assert!(!q_free_light_check(&named("q3")));
        assert!(!q_free_light_check(&named("s0")));
    }

    #[test]
    fn classify_report_serializes() {
        let report = classify(&named("s0"));
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"qFreeLight\":false"));
        assert!(json.contains("\"degeneracyTransposed\""));
    }
}
