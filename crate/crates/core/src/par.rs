//! Data-parallel helpers with a sequential fallback when the `parallel`
//! feature is off. Output order always follows input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;

/// Map `f` over `items`, in parallel when `parallel` is set and the feature is enabled.
pub fn map<T, U, F>(items: &[T], parallel: bool, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

/// Fallible map; the first error in input order is returned.
pub fn try_map<T, U, F>(items: &[T], parallel: bool, f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    map(items, parallel, f).into_iter().collect()
}

pub fn try_for_each<T, F>(items: &[T], f: F) -> Result<()>
where
    T: Sync,
    F: Fn(&T) -> Result<()> + Sync + Send,
{
    try_map(items, true, f).map(|_| ())
}

/// Whether the crate was built with rayon.
pub const fn parallel_available() -> bool {
    cfg!(feature = "parallel")
}
