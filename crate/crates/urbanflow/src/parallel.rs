//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (the default) these fan out over rayon's
//! current thread pool; without it they run as plain iterators. Callers rely
//! on output order matching input order, so results are bitwise identical
//! for any worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving input order in the output.
#[cfg(feature = "parallel")]
pub fn map_ordered<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_ordered<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    items.iter().map(f).collect()
}

/// Map `f` over indices `0..n`, preserving index order in the output.
#[cfg(feature = "parallel")]
pub fn map_indices<R: Send>(n: usize, f: impl Fn(usize) -> R + Sync + Send) -> Vec<R> {
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indices<R>(n: usize, f: impl Fn(usize) -> R) -> Vec<R> {
    (0..n).map(f).collect()
}

/// Fill `out[i] = f(i)` for all indices.
#[cfg(feature = "parallel")]
pub fn fill_indexed<R: Send>(out: &mut [R], f: impl Fn(usize) -> R + Sync + Send) {
    out.par_iter_mut().enumerate().for_each(|(i, slot)| *slot = f(i));
}

#[cfg(not(feature = "parallel"))]
pub fn fill_indexed<R>(out: &mut [R], f: impl Fn(usize) -> R) {
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = f(i);
    }
}
