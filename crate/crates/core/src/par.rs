//! Dispatch layer between the rayon-backed and sequential code paths.
//!
//! The sequential kernels are always compiled; the `parallel` feature only
//! decides which side the dispatch functions call. Keeping both alive lets
//! the bench suite compare them directly, and guarantees the two paths
//! return identical results: every parallel kernel merges in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving input order in the output.
pub(crate) fn map_in_order<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

pub(crate) fn map_in_order_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Keep the items satisfying `pred`, in input order.
pub(crate) fn filter_in_order<T, F>(items: Vec<T>, pred: F) -> Vec<T>
where
    T: Send + Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().filter(|t| pred(t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().filter(|t| pred(t)).collect()
    }
}

/// Least value of `f` over `items`, or None when `items` is empty.
/// Ties do not matter to callers; the minimum itself is unique.
pub(crate) fn min_value<T, F>(items: &[T], f: F) -> Option<usize>
where
    T: Sync,
    F: Fn(&T) -> usize + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).min()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).min()
    }
}

pub(crate) fn min_value_seq<T, F>(items: &[T], f: F) -> Option<usize>
where
    F: Fn(&T) -> usize,
{
    items.iter().map(f).min()
}

