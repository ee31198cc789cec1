//! Data-parallel helpers with a sequential fallback.
//!
//! Both paths must produce identical results: the maps are pure and the sorts
//! are stable, so toggling the `parallel` feature never changes output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

fn row_order(a: &(Vec<f64>, f64), b: &(Vec<f64>, f64)) -> std::cmp::Ordering {
    for (x, y) in a.0.iter().zip(&b.0) {
        let o = x.total_cmp(y);
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    a.0.len().cmp(&b.0.len()).then(a.1.total_cmp(&b.1))
}

/// Lexicographic sort of `(row, rhs)` pairs; duplicates become adjacent.
pub(crate) fn sort_rows(rows: &mut [(Vec<f64>, f64)]) {
    #[cfg(feature = "parallel")]
    rows.par_sort_by(row_order);
    #[cfg(not(feature = "parallel"))]
    rows.sort_by(row_order);
}
