//! Running many independent integrations. With the `parallel` feature the
//! work is spread over rayon's thread pool; otherwise it runs in order on the
//! calling thread. Results are always returned in index order, so output does
//! not depend on scheduling.

/// Applies `job` to every index in `0..count` and collects the results in
/// index order.
pub fn map_indexed<T, J>(count: usize, job: J) -> Vec<T>
where
    T: Send,
    J: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(job).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_indexed_seq(count, job)
    }
}

/// Sequential counterpart of [`map_indexed`], always available.
pub fn map_indexed_seq<T, J>(count: usize, job: J) -> Vec<T>
where
    J: Fn(usize) -> T,
{
    (0..count).map(job).collect()
}
