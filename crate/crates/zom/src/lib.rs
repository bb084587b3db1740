//! Toolkit for forbidden 0-1 matrix problems: pattern containment search,
//! explicit pattern-avoiding constructions with structural audits,
//! solution-free integer sets, a structural pattern classifier, the
//! signature marking procedure, and exact extremal numbers at toy scale.
//!
//! The containment core is data parallel (rayon) behind the `parallel`
//! feature, on by default; disabling it leaves identical sequential code
//! paths. Every parallel entry point produces the same output as its
//! sequential run.

pub mod behrend;
mod bitset;
pub mod classify;
pub mod constructions;
pub mod contains;
pub mod error;
pub mod extremal;
pub mod marking;
pub mod matrix;
pub mod oracle;
mod par;
pub mod pattern;
pub mod registry;
pub mod rng;
pub mod tensor;

pub use contains::{contains, contains_with, Occurrence, Outcome, SearchOptions};
pub use error::{Error, Result};
pub use matrix::{pattern_as_matrix, Matrix01};
pub use pattern::{Pattern, Transform};
pub use registry::registry_pattern;

/// Caps the worker pool used by the parallel code paths. Must run before
/// any parallel work; once a pool exists the call has no effect. Without
/// the `parallel` feature this is a no-op.
pub fn set_thread_count(threads: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}
