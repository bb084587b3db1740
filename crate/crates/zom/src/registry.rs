//! Named pattern registry.
//!
//! Fixed patterns are spelled out in the text grammar; the two
//! parameterized families are generated:
//!
//! * `p(t)`: 2 x (t+2); column 0 carries 1s in both rows, column j >= 1 a
//!   single 1 in row `(j+1) mod 2`, so the two rows alternate.
//! * `s0t(t)`: 3 x 2t; row 0 holds the even columns 0..2t-2, row 1 the two
//!   extremes 0 and 2t-1, row 2 the odd columns 1..2t-1. `s0t(2)` is `s0`.
//!
//! CLI-friendly names embed the parameter: `p3` means `p(3)`, `s0t2`
//! means `s0t(2)`.

use crate::error::{Error, Result};
use crate::pattern::Pattern;

const FIXED: &[(&str, &str)] = &[
    ("s0", "1.1.\n1..1\n.1.1"),
    ("s1", "1..1\n1.1.\n.1.1"),
    ("s2", ".1...1.\n...1...\n1..1..1\n1.1....\n....1.1"),
    ("s3", "1......1\n...1....\n...1..1.\n.....1.1\n.1..1...\n1.1....."),
    ("q3", "1.1.\n.1.1"),
    ("q3p", "1...\n..1.\n.1.1"),
    ("r0", "11.\n..1\n1.1"),
    ("r1", "11..\n..11\n1..1"),
    ("r2", "11..\n1..1\n..11"),
    ("x", ".1.11\n..1.1\n.1...\n1...1"),
    ("o2", ".11.\n1..1"),
    ("o3", ".1..1.\n1....1\n..11.."),
    ("o4", "...11...\n.1....1.\n1......1\n..1..1.."),
];

/// The alternating two-row pattern with t+1 alternating 1s after the
/// doubled first column.
pub fn alternating(t: u32) -> Result<Pattern> {
    if t < 1 {
        return Err(Error::InvalidArgument("p(t) requires t >= 1".into()));
    }
    let mut ones = vec![(0u32, 0u32), (1, 0)];
    for j in 1..=t + 1 {
        ones.push(((j + 1) % 2, j));
    }
    Pattern::new(2, t as usize + 2, ones)
}

/// The 3 x 2t generalization of `s0`.
pub fn s0_general(t: u32) -> Result<Pattern> {
    if t < 2 {
        return Err(Error::InvalidArgument("s0t(t) requires t >= 2".into()));
    }
    let mut ones = Vec::new();
    for j in (0..2 * t - 1).step_by(2) {
        ones.push((0, j));
    }
    ones.push((1, 0));
    ones.push((1, 2 * t - 1));
    for j in (1..2 * t).step_by(2) {
        ones.push((2, j));
    }
    Pattern::new(3, 2 * t as usize, ones)
}

/// Looks up a named pattern. `t` is required for the bare parameterized
/// names `p` and `s0t`; names like `p3` or `s0t2` carry it inline.
pub fn registry_pattern(name: &str, t: Option<u32>) -> Result<Pattern> {
    let lower = name.to_ascii_lowercase();
    if let Some((_, text)) = FIXED.iter().find(|(n, _)| *n == lower) {
        return Pattern::parse(text);
    }
    let (family, param) = split_param(&lower);
    let t = match (param, t) {
        (Some(p), _) => Some(p),
        (None, explicit) => explicit,
    };
    match (family, t) {
        ("p", Some(t)) => alternating(t),
        ("s0t", Some(t)) => s0_general(t),
        ("p" | "s0t", None) => Err(Error::InvalidArgument(format!(
            "pattern '{name}' needs a parameter, e.g. '{name}3'"
        ))),
        _ => Err(Error::InvalidArgument(format!("unknown pattern '{name}'"))),
    }
}

fn split_param(name: &str) -> (&str, Option<u32>) {
    let digits = name.len() - name.chars().rev().take_while(|c| c.is_ascii_digit()).count();
    match (&name[..digits], name[digits..].parse::<u32>().ok()) {
        // "s0t" itself ends in a digit; treat known families specially.
        _ if name == "s0t" || name == "p" => (name, None),
        (head, Some(t)) if head == "p" || head == "s0t" => (head, Some(t)),
        _ => (name, None),
    }
}

/// Every registry name with small parameters, used by corpus-wide tests.
pub fn corpus() -> Vec<(String, Pattern)> {
    let mut out: Vec<(String, Pattern)> = FIXED
        .iter()
        .map(|(n, text)| (n.to_string(), Pattern::parse(text).unwrap()))
        .collect();
    for t in 1..=5 {
        out.push((format!("p{t}"), alternating(t).unwrap()));
    }
    for t in 2..=4 {
        out.push((format!("s0t{t}"), s0_general(t).unwrap()));
    }
    out
}
