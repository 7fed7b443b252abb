//! Data-parallel helpers. With the `parallel` feature (default) the mapped
//! closures run on the rayon pool; without it they run sequentially. Both
//! entry points preserve input order, so results are deterministic either
//! way. `map_seq` stays available under the feature so benches can compare
//! the two paths in one binary.

/// Order-preserving parallel (or sequential) map.
#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Sequential reference path, kept unconditionally for benchmarking.
pub fn map_seq<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}
