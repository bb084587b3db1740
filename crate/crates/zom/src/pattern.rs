//! Small dense 0-1 patterns: the forbidden objects.
//!
//! A pattern is a `k x l` 0-1 matrix, stored as its sorted list of 1
//! positions. Patterns are parsed from a fixed text grammar ('1', '●' or '*'
//! for a 1; '0' or '.' for a 0) and support the eight symmetries of the
//! rectangle plus structural predicates used by the classifier.

use crate::error::{Error, Result};
use std::fmt;

/// A forbidden 0-1 pattern.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Pattern {
    rows: usize,
    cols: usize,
    /// Sorted row-major, duplicate-free.
    ones: Vec<(u32, u32)>,
}

/// The eight symmetries of a rectangle.
///
/// `FlipV` mirrors across the vertical axis (reverses columns); `FlipH`
/// mirrors across the horizontal axis (reverses rows). `Antitranspose`
/// transposes along the anti-diagonal.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Transform {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    FlipH,
    FlipV,
    Transpose,
    Antitranspose,
}

/// All transforms in a fixed canonical order.
pub const ALL_TRANSFORMS: [Transform; 8] = [
    Transform::Identity,
    Transform::Rot90,
    Transform::Rot180,
    Transform::Rot270,
    Transform::FlipH,
    Transform::FlipV,
    Transform::Transpose,
    Transform::Antitranspose,
];

impl Transform {
    pub fn name(self) -> &'static str {
        match self {
            Transform::Identity => "identity",
            Transform::Rot90 => "rot90",
            Transform::Rot180 => "rot180",
            Transform::Rot270 => "rot270",
            Transform::FlipH => "flipH",
            Transform::FlipV => "flipV",
            Transform::Transpose => "transpose",
            Transform::Antitranspose => "antitranspose",
        }
    }

    pub fn parse(name: &str) -> Result<Transform> {
        ALL_TRANSFORMS
            .iter()
            .copied()
            .find(|t| t.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown transform '{name}'")))
    }

    /// Maps a cell of a `k x l` matrix; returns the new dims and cell.
    #[inline]
    fn apply(self, k: usize, l: usize, i: u32, j: u32) -> ((usize, usize), (u32, u32)) {
        let (ki, li) = (k as u32 - 1, l as u32 - 1);
        match self {
            Transform::Identity => ((k, l), (i, j)),
            Transform::Rot90 => ((l, k), (j, ki - i)),
            Transform::Rot180 => ((k, l), (ki - i, li - j)),
            Transform::Rot270 => ((l, k), (li - j, i)),
            Transform::FlipH => ((k, l), (ki - i, j)),
            Transform::FlipV => ((k, l), (i, li - j)),
            Transform::Transpose => ((l, k), (j, i)),
            Transform::Antitranspose => ((l, k), (li - j, ki - i)),
        }
    }
}

impl Pattern {
    /// Builds a pattern from explicit dimensions and 1 positions.
    pub fn new(rows: usize, cols: usize, mut ones: Vec<(u32, u32)>) -> Result<Pattern> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(
                "pattern must have at least one row and one column".into(),
            ));
        }
        ones.sort_unstable();
        for w in ones.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidArgument(format!(
                    "duplicate position ({}, {})",
                    w[0].0, w[0].1
                )));
            }
        }
        if let Some(&(r, c)) = ones.iter().find(|&&(r, c)| r as usize >= rows || c as usize >= cols)
        {
            return Err(Error::InvalidArgument(format!(
                "position ({r}, {c}) out of range for {rows}x{cols}"
            )));
        }
        Ok(Pattern { rows, cols, ones })
    }

    /// Parses the bullet/dot text form. Every line must have the same
    /// length; '1', '●', '*' mark 1s and '0', '.' mark 0s.
    pub fn parse(text: &str) -> Result<Pattern> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        if lines.is_empty() {
            return Err(Error::Parse("empty pattern".into()));
        }
        let mut ones = Vec::new();
        let mut cols = None;
        for (i, line) in lines.iter().enumerate() {
            let cells: Vec<char> = line.trim().chars().collect();
            match cols {
                None => cols = Some(cells.len()),
                Some(c) if c != cells.len() => {
                    return Err(Error::Parse(format!(
                        "ragged line {}: expected {} cells, got {}",
                        i + 1,
                        c,
                        cells.len()
                    )))
                }
                _ => {}
            }
            for (j, ch) in cells.iter().enumerate() {
                match ch {
                    '1' | '●' | '*' => ones.push((i as u32, j as u32)),
                    '0' | '.' => {}
                    other => {
                        return Err(Error::Parse(format!(
                            "illegal character '{other}' at line {}, column {}",
                            i + 1,
                            j + 1
                        )))
                    }
                }
            }
        }
        Pattern::new(lines.len(), cols.unwrap(), ones)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn weight(&self) -> usize {
        self.ones.len()
    }

    pub fn ones(&self) -> &[(u32, u32)] {
        &self.ones
    }

    #[inline]
    pub fn get(&self, r: u32, c: u32) -> bool {
        self.ones.binary_search(&(r, c)).is_ok()
    }

    /// 1 positions of row `r`, in column order.
    pub fn row_ones(&self, r: u32) -> Vec<u32> {
        self.ones
            .iter()
            .filter(|&&(i, _)| i == r)
            .map(|&(_, j)| j)
            .collect()
    }

    /// 1 positions of column `c`, in row order.
    pub fn col_ones(&self, c: u32) -> Vec<u32> {
        self.ones
            .iter()
            .filter(|&&(_, j)| j == c)
            .map(|&(i, _)| i)
            .collect()
    }

    pub fn row_weight(&self, r: u32) -> usize {
        self.ones.iter().filter(|&&(i, _)| i == r).count()
    }

    pub fn col_weight(&self, c: u32) -> usize {
        self.ones.iter().filter(|&&(_, j)| j == c).count()
    }

    /// Applies one of the eight rectangle symmetries.
    pub fn transform(&self, op: Transform) -> Pattern {
        let mut dims = (self.cols, self.rows);
        if matches!(
            op,
            Transform::Identity | Transform::Rot180 | Transform::FlipH | Transform::FlipV
        ) {
            dims = (self.rows, self.cols);
        }
        let ones = self
            .ones
            .iter()
            .map(|&(i, j)| op.apply(self.rows, self.cols, i, j).1)
            .collect();
        Pattern::new(dims.0, dims.1, ones).expect("transform preserves validity")
    }

    /// True iff the bipartite graph on rows and columns with the 1s as
    /// edges is a forest.
    pub fn is_acyclic(&self) -> bool {
        let mut dsu = Dsu::new(self.rows + self.cols);
        for &(i, j) in &self.ones {
            if !dsu.union(i as usize, self.rows + j as usize) {
                return false;
            }
        }
        true
    }

    /// True iff every column contains exactly one 1.
    pub fn is_light(&self) -> bool {
        let mut counts = vec![0u32; self.cols];
        for &(_, j) in &self.ones {
            counts[j as usize] += 1;
        }
        counts.iter().all(|&c| c == 1)
    }

    /// True iff the pattern is square with exactly one 1 per row and column.
    pub fn is_permutation(&self) -> bool {
        if self.rows != self.cols || self.ones.len() != self.rows {
            return false;
        }
        let mut rs = vec![0u32; self.rows];
        let mut cs = vec![0u32; self.cols];
        for &(i, j) in &self.ones {
            rs[i as usize] += 1;
            cs[j as usize] += 1;
        }
        rs.iter().all(|&c| c == 1) && cs.iter().all(|&c| c == 1)
    }

    /// True iff the 1s form a chain under the componentwise order, in
    /// either orientation (all 1s marching down-right, or down-left).
    pub fn is_monotone(&self) -> bool {
        fn ascending(p: &Pattern) -> bool {
            // ones are sorted row-major; a chain needs non-decreasing
            // columns across consecutive entries.
            p.ones.windows(2).all(|w| w[0].1 <= w[1].1)
        }
        ascending(self) || ascending(&self.transform(Transform::FlipV))
    }

    /// Removes a set of columns (indices in the current pattern).
    pub fn remove_cols(&self, remove: &[u32]) -> Result<Pattern> {
        let keep: Vec<u32> = (0..self.cols as u32).filter(|c| !remove.contains(c)).collect();
        if keep.is_empty() {
            return Err(Error::InvalidArgument("cannot remove all columns".into()));
        }
        let ones = self
            .ones
            .iter()
            .filter_map(|&(i, j)| {
                keep.iter()
                    .position(|&c| c == j)
                    .map(|new_j| (i, new_j as u32))
            })
            .collect();
        Pattern::new(self.rows, keep.len(), ones)
    }

    /// Text form using '1' and '.', one line per row.
    pub fn to_text(&self) -> String {
        let mut grid = vec![vec!['.'; self.cols]; self.rows];
        for &(i, j) in &self.ones {
            grid[i as usize][j as usize] = '1';
        }
        grid.into_iter()
            .map(|row| row.into_iter().collect::<String>())
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns false if `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s0() -> Pattern {
        Pattern::parse("1.1.\n1..1\n.1.1").unwrap()
    }

    #[test]
    fn parse_s0_positions() {
        let p = s0();
        assert_eq!(p.rows(), 3);
        assert_eq!(p.cols(), 4);
        assert_eq!(
            p.ones(),
            &[(0, 0), (0, 2), (1, 0), (1, 3), (2, 1), (2, 3)]
        );
        assert_eq!(p.weight(), 6);
    }

    #[test]
    fn parse_single_cell() {
        let p = Pattern::parse("1").unwrap();
        assert_eq!((p.rows(), p.cols(), p.weight()), (1, 1, 1));
    }

    #[test]
    fn parse_bullets() {
        let p = Pattern::parse("●.●\n.●.").unwrap();
        assert_eq!(p.ones(), &[(0, 0), (0, 2), (1, 1)]);
    }

    #[test]
    fn parse_rejects_illegal_character() {
        assert!(matches!(Pattern::parse("1.\n.x"), Err(Error::Parse(_))));
    }

    #[test]
    fn parse_rejects_ragged_lines() {
        assert!(matches!(Pattern::parse("1.\n1"), Err(Error::Parse(_))));
    }

    #[test]
    fn parse_rejects_empty() {
        assert!(Pattern::parse("").is_err());
        assert!(Pattern::parse("  \n ").is_err());
    }

    #[test]
    fn transform_identity_and_inverses() {
        let p = s0();
        assert_eq!(p.transform(Transform::Identity), p);
        assert_eq!(p.transform(Transform::Rot90).transform(Transform::Rot270), p);
        assert_eq!(p.transform(Transform::Rot180).transform(Transform::Rot180), p);
        assert_eq!(p.transform(Transform::FlipH).transform(Transform::FlipH), p);
        assert_eq!(p.transform(Transform::FlipV).transform(Transform::FlipV), p);
        assert_eq!(
            p.transform(Transform::Transpose).transform(Transform::Transpose),
            p
        );
        assert_eq!(
            p.transform(Transform::Antitranspose)
                .transform(Transform::Antitranspose),
            p
        );
    }

    #[test]
    fn flip_v_mirrors_columns() {
        // Mirroring across the vertical axis reverses each row.
        let p1 = Pattern::parse("11.\n1.1").unwrap();
        let refl = p1.transform(Transform::FlipV);
        assert_eq!(refl.to_text(), ".11\n1.1");
    }

    #[test]
    fn acyclic_examples() {
        assert!(!Pattern::parse("11\n11").unwrap().is_acyclic());
        assert!(s0().is_acyclic());
        assert!(Pattern::parse("1").unwrap().is_acyclic());
    }

    #[test]
    fn light_examples() {
        assert!(Pattern::parse("1.1.\n.1.1").unwrap().is_light()); // one 1 per column
        assert!(!s0().is_light());
        assert!(Pattern::parse("1").unwrap().is_light());
    }

    #[test]
    fn monotone_examples() {
        assert!(Pattern::parse("1.\n11\n.1").unwrap().is_monotone());
        assert!(Pattern::parse(".1\n11\n1.").unwrap().is_monotone());
        assert!(!Pattern::parse("11.\n1.1").unwrap().is_monotone());
    }

    #[test]
    fn remove_cols_reindexes() {
        let p = Pattern::parse("1.1\n.11").unwrap();
        let q = p.remove_cols(&[1]).unwrap();
        assert_eq!(q.to_text(), "11\n.1");
    }
}
