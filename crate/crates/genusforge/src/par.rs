//! Chunked reductions over index ranges.
//!
//! Point-counting loops are sums of per-index contributions; this module
//! owns the chunking so results are bit-identical whether the chunks run on
//! one thread or many.  The sequential twin is always compiled and is what
//! the `parallel` feature falls back to.

/// Sums `f(t)` for `t` in `lo..hi` on the current thread.
pub fn chunked_sum_u64_seq<F>(lo: u64, hi: u64, f: F) -> u64
where
    F: Fn(u64) -> u64,
{
    (lo..hi).map(f).sum()
}

/// Sums `f(t)` for `t` in `lo..hi` in chunks of `chunk` consecutive indices.
/// Wrapping u64 addition is associative and commutative, so the result does
/// not depend on the chunk size or the number of worker threads.
#[cfg(feature = "parallel")]
pub fn chunked_sum_u64<F>(lo: u64, hi: u64, chunk: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync,
{
    use rayon::prelude::*;
    assert!(chunk > 0);
    if hi <= lo {
        return 0;
    }
    let starts: Vec<u64> = (lo..hi).step_by(chunk.min(u32::MAX as u64) as usize).collect();
    starts
        .into_par_iter()
        .map(|s| {
            let end = s.saturating_add(chunk).min(hi);
            (s..end).map(&f).sum::<u64>()
        })
        .sum()
}

#[cfg(not(feature = "parallel"))]
pub fn chunked_sum_u64<F>(lo: u64, hi: u64, chunk: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync,
{
    assert!(chunk > 0);
    let mut total = 0u64;
    let mut s = lo;
    while s < hi {
        let end = s.saturating_add(chunk).min(hi);
        total = total.wrapping_add((s..end).map(&f).sum::<u64>());
        s = end;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunked_matches_sequential() {
        let f = |t: u64| t.wrapping_mul(2654435761).rotate_left(7);
        let expect = chunked_sum_u64_seq(3, 10_000, f);
        for chunk in [1, 7, 64, 4096, 1 << 20] {
            assert_eq!(chunked_sum_u64(3, 10_000, chunk, f), expect, "chunk={chunk}");
        }
    }

    #[test]
    fn empty_range_is_zero() {
        assert_eq!(chunked_sum_u64(5, 5, 16, |t| t), 0);
        assert_eq!(chunked_sum_u64(9, 2, 16, |t| t), 0);
        assert_eq!(chunked_sum_u64_seq(5, 5, |t| t), 0);
    }
}
