//! Toy-scale r-dimensional lift of the containment relation.
//!
//! A pattern lifts by appending width-1 axes; a host matrix stacks into a
//! tensor by replicating itself along trailing axes. Containment then
//! asks for an index subset per axis on which the pattern is entrywise
//! dominated. Everything here is brute force and capped.

use crate::error::{Error, Result};
use crate::matrix::Matrix01;
use crate::pattern::Pattern;

/// Dense 0-1 tensor, row-major strides, last axis fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor01 {
    pub shape: Vec<usize>,
    data: Vec<bool>,
}

const CELL_CAP: u64 = 1_000_000;
const SELECTION_CAP: u128 = 100_000_000;

impl Tensor01 {
    fn new(shape: Vec<usize>) -> Result<Tensor01> {
        let cells = shape.iter().try_fold(1u64, |acc, &d| {
            acc.checked_mul(d as u64).filter(|&c| c <= CELL_CAP)
        });
        let Some(cells) = cells else {
            return Err(Error::CapExceeded(format!(
                "tensor of shape {shape:?} exceeds {CELL_CAP} cells"
            )));
        };
        Ok(Tensor01 {
            shape,
            data: vec![false; cells as usize],
        })
    }

    fn offset(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub fn get(&self, idx: &[usize]) -> bool {
        self.data[self.offset(idx)]
    }

    fn set(&mut self, idx: &[usize]) {
        let off = self.offset(idx);
        self.data[off] = true;
    }

    pub fn weight(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// All index tuples holding a 1.
    pub fn ones(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for (flat, &v) in self.data.iter().enumerate() {
            if !v {
                continue;
            }
            let mut idx = vec![0; self.shape.len()];
            let mut rest = flat;
            for ax in (0..self.shape.len()).rev() {
                idx[ax] = rest % self.shape[ax];
                rest /= self.shape[ax];
            }
            out.push(idx);
        }
        out
    }
}

/// Lifts a 2-D pattern to `r` dimensions by appending `r-2` width-1 axes.
/// `r = 2` returns the pattern unchanged as a tensor.
pub fn lift_pattern(p: &Pattern, r: usize) -> Result<Tensor01> {
    if !(2..=4).contains(&r) {
        return Err(Error::InvalidArgument("lift requires 2 <= r <= 4".into()));
    }
    let mut shape = vec![p.rows(), p.cols()];
    shape.extend(std::iter::repeat_n(1, r - 2));
    let mut t = Tensor01::new(shape)?;
    let zeros = vec![0usize; r - 2];
    for &(i, j) in p.ones() {
        let mut idx = vec![i as usize, j as usize];
        idx.extend_from_slice(&zeros);
        t.set(&idx);
    }
    Ok(t)
}

/// Replicates a host matrix identically along `r-2` trailing axes of
/// extent `n` (the host's row count), so every slice fixing the trailing
/// coordinates is a copy of the host.
pub fn stack_matrix(a: &Matrix01, r: usize) -> Result<Tensor01> {
    if !(2..=4).contains(&r) {
        return Err(Error::InvalidArgument("stack requires 2 <= r <= 4".into()));
    }
    let n = a.rows();
    let mut shape = vec![a.rows(), a.cols()];
    shape.extend(std::iter::repeat_n(n, r - 2));
    let mut t = Tensor01::new(shape)?;
    let trailing: u64 = (0..r - 2).fold(1u64, |acc, _| acc * n as u64);
    for (row, col) in a.ones() {
        for rep in 0..trailing {
            let mut idx = vec![row as usize, col as usize];
            let mut rest = rep;
            for _ in 0..r - 2 {
                idx.push((rest % n as u64) as usize);
                rest /= n as u64;
            }
            t.set(&idx);
        }
    }
    Ok(t)
}

/// Brute-force r-dimensional containment: true iff there are index sets
/// `I_ax` (one per axis, sizes matching the pattern tensor) on which the
/// pattern is entrywise dominated.
pub fn contains_r(tp: &Tensor01, ta: &Tensor01) -> Result<bool> {
    if tp.shape.len() != ta.shape.len() {
        return Err(Error::InvalidArgument(
            "pattern and host tensors must share their rank".into(),
        ));
    }
    if tp.shape.iter().zip(&ta.shape).any(|(&kp, &ka)| kp > ka) {
        return Ok(false);
    }
    let mut total: u128 = 1;
    for (&kp, &ka) in tp.shape.iter().zip(&ta.shape) {
        total = total.saturating_mul(n_choose_k(ka, kp));
        if total > SELECTION_CAP {
            return Err(Error::CapExceeded(
                "too many index-set selections for brute force".into(),
            ));
        }
    }

    let pattern_ones = tp.ones();
    let mut selection: Vec<Vec<usize>> = Vec::with_capacity(tp.shape.len());
    Ok(search_axis(tp, ta, 0, &mut selection, &pattern_ones))
}

fn n_choose_k(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn search_axis(
    tp: &Tensor01,
    ta: &Tensor01,
    axis: usize,
    selection: &mut Vec<Vec<usize>>,
    pattern_ones: &[Vec<usize>],
) -> bool {
    if axis == tp.shape.len() {
        return pattern_ones.iter().all(|pidx| {
            let host_idx: Vec<usize> = pidx
                .iter()
                .enumerate()
                .map(|(ax, &i)| selection[ax][i])
                .collect();
            ta.get(&host_idx)
        });
    }
    let k = tp.shape[axis];
    let n = ta.shape[axis];
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        selection.push(combo.clone());
        if search_axis(tp, ta, axis + 1, selection, pattern_ones) {
            selection.pop();
            return true;
        }
        selection.pop();
        if !advance(&mut combo, n) {
            return false;
        }
    }
}

fn advance(combo: &mut [usize], limit: usize) -> bool {
    let len = combo.len();
    for i in (0..len).rev() {
        if combo[i] < limit - (len - i) {
            combo[i] += 1;
            for j in i + 1..len {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
