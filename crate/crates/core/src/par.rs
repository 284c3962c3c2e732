//! Frame-level map helper: rayon when the `parallel` feature is on, a plain
//! sequential loop otherwise. Results come back in input order either way, so
//! callers are deterministic regardless of thread count.

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    I: Sync,
    O: Send,
    F: Fn(usize, &I) -> O + Sync,
{
    use rayon::prelude::*;
    items.par_iter().enumerate().map(|(i, x)| f(i, x)).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    F: Fn(usize, &I) -> O,
{
    items.iter().enumerate().map(|(i, x)| f(i, x)).collect()
}
