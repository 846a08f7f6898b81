//! Chunked map-reduce over an index range, with a rayon backend behind the
//! `parallel` feature and a sequential fallback that produces bit-identical
//! results (all reductions in this crate are pure count aggregations).

/// Split `0..total` into chunks, run `work(start, end)` on each, and merge.
/// Chunk boundaries do not affect the result for the commutative,
/// associative merges used here, so the parallel and sequential paths agree
/// exactly.
pub(crate) fn chunk_reduce<T, W, M>(total: u64, work: W, merge: M) -> Option<T>
where
    T: Send,
    W: Fn(u64, u64) -> T + Sync,
    M: Fn(T, T) -> T + Sync + Send,
{
    if total == 0 {
        return None;
    }
    #[cfg(feature = "parallel")]
    {
        Some(chunk_reduce_par(total, &work, &merge))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = &merge;
        Some(work(0, total))
    }
}

/// Sequential path, always available (used directly by the benchmarks).
pub(crate) fn chunk_reduce_seq<T, W>(total: u64, work: W) -> Option<T>
where
    W: Fn(u64, u64) -> T,
{
    if total == 0 {
        None
    } else {
        Some(work(0, total))
    }
}

#[cfg(feature = "parallel")]
fn chunk_reduce_par<T, W, M>(total: u64, work: &W, merge: &M) -> T
where
    T: Send,
    W: Fn(u64, u64) -> T + Sync,
    M: Fn(T, T) -> T + Sync + Send,
{
    use rayon::prelude::*;

    let threads = rayon::current_num_threads() as u64;
    let chunk = (total / (threads * 8).max(1)).clamp(256, 1 << 20);
    let n_chunks = total.div_ceil(chunk);
    (0..n_chunks)
        .into_par_iter()
        .map(|i| {
            let start = i * chunk;
            let end = (start + chunk).min(total);
            work(start, end)
        })
        .reduce_with(merge)
        .expect("nonempty range")
}
