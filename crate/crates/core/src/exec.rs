//! Data-parallel map over independent grid points.
//!
//! Every sweep in this crate evaluates a pure function at each point of an
//! index grid. With the `parallel` feature the work fans across the rayon
//! pool; results are collected in input order, so the output is identical to
//! the sequential path regardless of thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Evaluate `f` at `0..n`, collecting results in index order.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sequential reference implementation of [`map_range`]; used by the bench
/// suite to measure the parallel speed-up and by callers that must stay on
/// one thread.
pub fn map_range_seq<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(f).collect()
}

/// Evenly spaced grid over `[start, stop]` with `count >= 2` points.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let step = (stop - start) / (count - 1) as f64;
    (0..count).map(|i| start + step * i as f64).collect()
}
