//! Tiny dispatch helpers: data-parallel via rayon when the `parallel`
//! feature is enabled and the caller asks for it, plain loops otherwise.
//! Both paths produce identical, order-preserving results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) fn map_range<U, F>(parallel: bool, n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel && n > 1 {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..n).map(f).collect()
}

pub(crate) fn map_slice<T, U, F>(parallel: bool, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel && items.len() > 1 {
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}
