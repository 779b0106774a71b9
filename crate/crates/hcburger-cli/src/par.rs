//! Deterministic parallel loops.
//!
//! Work is cut into fixed chunks; chunk `c` draws from its own stream and the
//! results come back in chunk order, so output does not depend on the number
//! of threads.

use std::ops::Range;

use rayon::prelude::*;

/// Samples per chunk for commands that draw many cheap samples.
pub const CHUNK: u64 = 10_000;

pub fn chunked<A, F>(count: u64, size: u64, f: F) -> Vec<A>
where
    A: Send,
    F: Fn(u64, Range<u64>) -> A + Sync,
{
    let k = count.div_ceil(size);
    (0..k).into_par_iter().map(|c| f(c, c * size..((c + 1) * size).min(count))).collect()
}

/// One result per replica, in replica order.
pub fn per_replica<A, F>(count: u64, f: F) -> Vec<A>
where
    A: Send,
    F: Fn(u64) -> A + Sync,
{
    (0..count).into_par_iter().map(|r| f(r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_in_order() {
        let v = chunked(25, 10, |c, r| (c, r));
        assert_eq!(v, vec![(0, 0..10), (1, 10..20), (2, 20..25)]);
        assert!(chunked(0, 10, |c, _| c).is_empty());
    }
}
