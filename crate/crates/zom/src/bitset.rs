//! Minimal fixed-width bitset storage, one bit row per column of a matrix.

/// A rectangular bit table: `lanes` bitsets, each over `width` positions.
#[derive(Clone, Debug)]
pub struct BitTable {
    width: usize,
    words_per_lane: usize,
    data: Vec<u64>,
}

impl BitTable {
    pub fn new(lanes: usize, width: usize) -> Self {
        let words_per_lane = width.div_ceil(64);
        BitTable {
            width,
            words_per_lane,
            data: vec![0; lanes * words_per_lane],
        }
    }

    #[inline]
    pub fn set(&mut self, lane: usize, pos: usize) {
        debug_assert!(pos < self.width);
        self.data[lane * self.words_per_lane + pos / 64] |= 1u64 << (pos % 64);
    }

    #[inline]
    pub fn contains(&self, lane: usize, pos: usize) -> bool {
        debug_assert!(pos < self.width);
        self.data[lane * self.words_per_lane + pos / 64] & (1u64 << (pos % 64)) != 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_and_probe() {
        let mut t = BitTable::new(3, 130);
        t.set(0, 0);
        t.set(2, 129);
        t.set(1, 64);
        assert!(t.contains(0, 0));
        assert!(t.contains(2, 129));
        assert!(t.contains(1, 64));
        assert!(!t.contains(0, 1));
        assert!(!t.contains(2, 128));
    }
}
