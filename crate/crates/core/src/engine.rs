//! Path-parallel Monte Carlo driver.
//!
//! Paths are cut into fixed blocks whose size does not depend on the worker
//! count. Each block folds its paths into a fresh accumulator, and block
//! accumulators are merged left to right in block order. Combined with one
//! RNG stream per path, results are bit-identical for any number of workers.

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rng::StreamFactory;

/// Paths per block.
pub const BLOCK_PATHS: u64 = 16_384;

/// A per-block statistic that can absorb another block's statistic.
pub trait Mergeable: Send {
    fn merge(&mut self, other: Self);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Sequential,
    /// Thread pool with the given worker count (requires the `parallel` feature).
    Parallel(usize),
}

impl Backend {
    /// Parallel when compiled in and more than one worker is requested.
    pub fn for_workers(workers: usize) -> Self {
        if cfg!(feature = "parallel") && workers > 1 {
            Backend::Parallel(workers)
        } else {
            Backend::Sequential
        }
    }
}

/// Simulates `n_paths` paths and returns the merged accumulator.
///
/// `scratch` builds per-worker buffers, `fresh` an empty accumulator, and
/// `path` simulates one path from its own stream into the block accumulator.
pub fn run<A, S, FS, FA, FP>(
    n_paths: u64,
    seed: u64,
    backend: Backend,
    scratch: FS,
    fresh: FA,
    path: FP,
) -> Result<A>
where
    A: Mergeable,
    FS: Fn() -> S + Sync + Send,
    FA: Fn() -> A + Sync + Send,
    FP: Fn(&mut S, &mut ChaCha8Rng, u64, &mut A) + Sync + Send,
{
    let streams = StreamFactory::new(seed);
    let n_blocks = n_paths.div_ceil(BLOCK_PATHS);
    let block = |s: &mut S, b: u64| {
        let mut acc = fresh();
        let end = ((b + 1) * BLOCK_PATHS).min(n_paths);
        for i in b * BLOCK_PATHS..end {
            let mut rng = streams.stream(i);
            path(s, &mut rng, i, &mut acc);
        }
        acc
    };
    let blocks: Vec<A> = match backend {
        Backend::Sequential => {
            let mut s = scratch();
            (0..n_blocks).map(|b| block(&mut s, b)).collect()
        }
        Backend::Parallel(workers) => parallel_blocks(n_blocks, workers, &scratch, &block)?,
    };
    let mut iter = blocks.into_iter();
    let mut total = iter.next().unwrap_or_else(&fresh);
    for acc in iter {
        total.merge(acc);
    }
    Ok(total)
}

#[cfg(feature = "parallel")]
fn parallel_blocks<A, S, FS, FB>(n_blocks: u64, workers: usize, scratch: &FS, block: &FB) -> Result<Vec<A>>
where
    A: Send,
    FS: Fn() -> S + Sync,
    FB: Fn(&mut S, u64) -> A + Sync,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        (0..n_blocks)
            .into_par_iter()
            .map_init(scratch, |s, b| block(s, b))
            .collect()
    }))
}

#[cfg(not(feature = "parallel"))]
fn parallel_blocks<A, S, FS, FB>(n_blocks: u64, _workers: usize, scratch: &FS, block: &FB) -> Result<Vec<A>>
where
    FS: Fn() -> S,
    FB: Fn(&mut S, u64) -> A,
{
    let mut s = scratch();
    Ok((0..n_blocks).map(|b| block(&mut s, b)).collect())
}

/// Tallies how many paths have a statistic strictly above each grid level.
#[derive(Debug, Clone, PartialEq)]
pub struct ExceedanceCounts {
    /// `hist[k]` counts paths whose statistic exceeds exactly the first `k` levels.
    hist: Vec<u64>,
}

impl ExceedanceCounts {
    pub fn new(levels: usize) -> Self {
        Self {
            hist: vec![0; levels + 1],
        }
    }

    /// Records statistic `z` against increasing `grid`.
    #[inline]
    pub fn record(&mut self, grid: &[f64], z: f64) {
        let k = grid.partition_point(|x| *x < z);
        self.hist[k] += 1;
    }

    /// Count of recorded statistics above each grid level.
    pub fn counts(&self) -> Vec<u64> {
        let mut out = vec![0; self.hist.len() - 1];
        let mut running = 0;
        for j in (0..out.len()).rev() {
            running += self.hist[j + 1];
            out[j] = running;
        }
        out
    }
}

impl Mergeable for ExceedanceCounts {
    fn merge(&mut self, other: Self) {
        for (a, b) in self.hist.iter_mut().zip(other.hist) {
            *a += b;
        }
    }
}

impl Mergeable for f64 {
    fn merge(&mut self, other: Self) {
        *self += other;
    }
}

impl Mergeable for u64 {
    fn merge(&mut self, other: Self) {
        *self += other;
    }
}

impl<A: Mergeable, B: Mergeable> Mergeable for (A, B) {
    fn merge(&mut self, other: Self) {
        self.0.merge(other.0);
        self.1.merge(other.1);
    }
}

impl<A: Mergeable> Mergeable for Vec<A> {
    fn merge(&mut self, other: Self) {
        for (a, b) in self.iter_mut().zip(other) {
            a.merge(b);
        }
    }
}

/// Validates that a level grid is positive and strictly increasing.
pub fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::param("x grid is empty"));
    }
    if !grid.iter().all(|x| *x > 0.0 && x.is_finite()) {
        return Err(Error::param("x grid entries must be positive and finite"));
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::param("x grid must be strictly increasing"));
    }
    Ok(())
}
