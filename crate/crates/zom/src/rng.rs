//! Tiny deterministic generator (splitmix64) for reproducible random
//! hosts; seeds fully determine the output on every platform.

use crate::matrix::Matrix01;

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, bound)`.
    pub fn below(&mut self, bound: u64) -> u64 {
        // Modulo bias is irrelevant at these scales.
        self.next_u64() % bound
    }
}

/// Random 0-1 matrix with each cell independently 1 with probability
/// `num/den`.
pub fn random_matrix(n: usize, m: usize, num: u64, den: u64, seed: u64) -> Matrix01 {
    assert!(num <= den && den > 0);
    let mut rng = SplitMix64::new(seed);
    let mut ones = Vec::new();
    for r in 0..n as u32 {
        for c in 0..m as u32 {
            if rng.below(den) < num {
                ones.push((r, c));
            }
        }
    }
    Matrix01::from_sorted_ones(n, m, ones).expect("generated cells are in range")
}
