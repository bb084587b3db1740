//! The host side of the containment relation: large sparse 0-1 matrices.
//!
//! `Matrix01` keeps its 1s as a row-major sorted sparse list plus two
//! derived indexes: per-row column slices (CSR) and per-column row lists
//! with a per-column bitset over rows for O(1) membership probes.

use crate::bitset::BitTable;
use crate::error::{Error, Result};
use crate::pattern::{Pattern, Transform};

#[derive(Clone, Debug)]
pub struct Matrix01 {
    n: usize,
    m: usize,
    /// CSR: column indices of the 1s, row-major sorted.
    csr_cols: Vec<u32>,
    row_ptr: Vec<u32>,
    /// CSC: row indices of the 1s per column, sorted.
    csc_rows: Vec<Vec<u32>>,
    col_bits: BitTable,
}

impl Matrix01 {
    /// Builds a matrix from its dimensions and 1 positions. The positions
    /// may arrive in any order; duplicates and out-of-range cells are
    /// rejected.
    pub fn from_ones(n: usize, m: usize, mut ones: Vec<(u32, u32)>) -> Result<Matrix01> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument(
                "matrix must have at least one row and one column".into(),
            ));
        }
        ones.sort_unstable();
        Matrix01::from_sorted_ones(n, m, ones)
    }

    /// Same as [`Matrix01::from_ones`] but requires the list to already be
    /// row-major sorted.
    pub fn from_sorted_ones(n: usize, m: usize, ones: Vec<(u32, u32)>) -> Result<Matrix01> {
        for w in ones.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidArgument(format!(
                    "ones not sorted or duplicated near ({}, {})",
                    w[1].0, w[1].1
                )));
            }
        }
        if let Some(&(r, c)) = ones.iter().find(|&&(r, c)| r as usize >= n || c as usize >= m) {
            return Err(Error::InvalidArgument(format!(
                "position ({r}, {c}) out of range for {n}x{m}"
            )));
        }

        let mut row_ptr = vec![0u32; n + 1];
        let mut csr_cols = Vec::with_capacity(ones.len());
        let mut csc_rows = vec![Vec::new(); m];
        let mut col_bits = BitTable::new(m, n);
        for &(r, c) in &ones {
            row_ptr[r as usize + 1] += 1;
            csr_cols.push(c);
            csc_rows[c as usize].push(r);
            col_bits.set(c as usize, r as usize);
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Matrix01 {
            n,
            m,
            csr_cols,
            row_ptr,
            csc_rows,
            col_bits,
        })
    }

    pub fn zero(n: usize, m: usize) -> Matrix01 {
        Matrix01::from_sorted_ones(n, m, Vec::new()).expect("empty matrix is valid")
    }

    pub fn all_ones(n: usize, m: usize) -> Matrix01 {
        let ones = (0..n as u32)
            .flat_map(|r| (0..m as u32).map(move |c| (r, c)))
            .collect();
        Matrix01::from_sorted_ones(n, m, ones).expect("full matrix is valid")
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    pub fn weight(&self) -> usize {
        self.csr_cols.len()
    }

    #[inline]
    pub fn get(&self, r: u32, c: u32) -> bool {
        self.col_bits.contains(c as usize, r as usize)
    }

    /// Columns of the 1s in row `r`, ascending.
    #[inline]
    pub fn row_cols(&self, r: u32) -> &[u32] {
        let lo = self.row_ptr[r as usize] as usize;
        let hi = self.row_ptr[r as usize + 1] as usize;
        &self.csr_cols[lo..hi]
    }

    /// Rows of the 1s in column `c`, ascending.
    #[inline]
    pub fn col_rows(&self, c: u32) -> &[u32] {
        &self.csc_rows[c as usize]
    }

    #[inline]
    pub fn col_weight(&self, c: u32) -> usize {
        self.csc_rows[c as usize].len()
    }

    /// Row-major iteration over the 1 positions.
    pub fn ones(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n as u32).flat_map(move |r| self.row_cols(r).iter().map(move |&c| (r, c)))
    }

    /// Flips a single cell, returning the modified matrix.
    pub fn with_toggled(&self, r: u32, c: u32) -> Matrix01 {
        let mut ones: Vec<(u32, u32)> = self.ones().collect();
        match ones.binary_search(&(r, c)) {
            Ok(idx) => {
                ones.remove(idx);
            }
            Err(idx) => ones.insert(idx, (r, c)),
        }
        Matrix01::from_sorted_ones(self.n, self.m, ones).expect("toggle preserves validity")
    }

    pub fn transform(&self, op: Transform) -> Matrix01 {
        let p = Pattern::new(self.n, self.m, self.ones().collect())
            .expect("matrix positions are valid")
            .transform(op);
        Matrix01::from_ones(p.rows(), p.cols(), p.ones().to_vec()).expect("transform is valid")
    }

    /// Serializes to the plain text matrix format: a header `n m w` line
    /// followed by one `r c` line per 1, row-major sorted, 0-based.
    pub fn to_file_string(&self) -> String {
        let mut out = String::with_capacity(16 + self.weight() * 8);
        out.push_str(&format!("{} {} {}\n", self.n, self.m, self.weight()));
        for (r, c) in self.ones() {
            out.push_str(&format!("{r} {c}\n"));
        }
        out
    }

    /// Parses the text matrix format. The 1 list must be sorted and match
    /// the header's count.
    pub fn parse_file(text: &str) -> Result<Matrix01> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 3 {
            return Err(Error::Parse(format!(
                "header must be 'n m w', got '{header}'"
            )));
        }
        let n: usize = head[0]
            .parse()
            .map_err(|_| Error::Parse("bad row count".into()))?;
        let m: usize = head[1]
            .parse()
            .map_err(|_| Error::Parse("bad column count".into()))?;
        let w: usize = head[2]
            .parse()
            .map_err(|_| Error::Parse("bad weight".into()))?;
        let mut ones = Vec::with_capacity(w);
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let r: u32 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad entry line '{line}'")))?;
            let c: u32 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad entry line '{line}'")))?;
            if it.next().is_some() {
                return Err(Error::Parse(format!("trailing junk on line '{line}'")));
            }
            ones.push((r, c));
        }
        if ones.len() != w {
            return Err(Error::Parse(format!(
                "header promises {w} ones, file has {}",
                ones.len()
            )));
        }
        for win in ones.windows(2) {
            if win[0] >= win[1] {
                return Err(Error::Parse("ones not sorted lexicographically".into()));
            }
        }
        Matrix01::from_sorted_ones(n, m, ones)
    }
}

/// Renders a pattern as a dense host matrix of the same dimensions.
pub fn pattern_as_matrix(p: &Pattern) -> Matrix01 {
    Matrix01::from_sorted_ones(p.rows(), p.cols(), p.ones().to_vec())
        .expect("pattern positions are valid")
}
