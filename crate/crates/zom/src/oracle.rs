//! Naive reference implementations, kept deliberately independent of the
//! production search paths. The test suite checks the fast code against
//! these on small inputs; nothing else should call them.

use crate::contains::Occurrence;
use crate::matrix::Matrix01;
use crate::pattern::Pattern;

/// Exhaustive containment check: enumerates every strictly increasing
/// column map in lexicographic order, and for each, every row map, and
/// returns the first embedding found. That enumeration order makes the
/// returned witness the lexicographically first `(cols, rows)` pair.
pub fn naive_contains(p: &Pattern, a: &Matrix01) -> Option<Occurrence> {
    let (k, l) = (p.rows(), p.cols());
    let (n, m) = (a.rows(), a.cols());
    if k > n || l > m {
        return None;
    }
    let mut cols = first_combination(l);
    loop {
        if let Some(rows) = first_matching_rows(p, a, &cols, k, n) {
            return Some(Occurrence { rows, cols });
        }
        if !next_combination(&mut cols, m) {
            return None;
        }
    }
}

fn first_matching_rows(
    p: &Pattern,
    a: &Matrix01,
    cols: &[u32],
    k: usize,
    n: usize,
) -> Option<Vec<u32>> {
    let mut rows = first_combination(k);
    if k > n {
        return None;
    }
    loop {
        if dominates(p, a, &rows, cols) {
            return Some(rows);
        }
        if !next_combination(&mut rows, n) {
            return None;
        }
    }
}

fn dominates(p: &Pattern, a: &Matrix01, rows: &[u32], cols: &[u32]) -> bool {
    p.ones()
        .iter()
        .all(|&(i, j)| a.get(rows[i as usize], cols[j as usize]))
}

fn first_combination(len: usize) -> Vec<u32> {
    (0..len as u32).collect()
}

/// Advances a strictly increasing index tuple to its lexicographic
/// successor below `limit`; false when exhausted.
fn next_combination(combo: &mut [u32], limit: usize) -> bool {
    let len = combo.len();
    for i in (0..len).rev() {
        if (combo[i] as usize) < limit - (len - i) {
            combo[i] += 1;
            for j in i + 1..len {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Maximum weight of a P-free n x m host, by enumerating all 2^(nm)
/// matrices. Only sane for n*m up to ~20.
pub fn brute_force_ex(p: &Pattern, n: usize, m: usize) -> u64 {
    assert!(n * m <= 25, "brute force oracle limited to 25 cells");
    let cells = n * m;
    let mut best = 0u64;
    for mask in 0u64..(1u64 << cells) {
        let weight = mask.count_ones() as u64;
        if weight <= best {
            continue;
        }
        let ones: Vec<(u32, u32)> = (0..cells)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| ((i / m) as u32, (i % m) as u32))
            .collect();
        let host = Matrix01::from_sorted_ones(n, m, ones).unwrap();
        if naive_contains(p, &host).is_none() {
            best = weight;
        }
    }
    best
}
