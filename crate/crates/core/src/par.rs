//! Switches the crate's hot loops between rayon and plain iteration.
//!
//! Every data-parallel kernel is written against [`map_indexed`], which runs
//! on rayon when both the `parallel` feature is enabled and the caller asks
//! for it. The sequential path is always compiled, so the `*_seq` entry
//! points (and the benchmarks comparing the two) work in every build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many items the rayon setup cost outweighs the work.
pub(crate) const MIN_PARALLEL_ITEMS: usize = 64;

/// Maps `f` over `0..count` preserving order.
pub(crate) fn map_indexed<T, F>(count: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel && count >= MIN_PARALLEL_ITEMS {
        return (0..count).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..count).map(f).collect()
}

/// Whether public entry points should use the parallel path by default.
#[inline]
pub(crate) fn default_parallel() -> bool {
    cfg!(feature = "parallel")
}
