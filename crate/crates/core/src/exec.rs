//! Trial fan-out. With the `parallel` feature, independent trials run on the
//! rayon pool; otherwise they run in order on the calling thread. Results
//! are always returned in trial order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Runs `f(i)` for `i in 0..count`, sequentially.
pub fn map_trials_seq<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

/// Runs `f(i)` for `i in 0..count` on the rayon pool.
#[cfg(feature = "parallel")]
pub fn map_trials_par<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

/// Parallel when the `parallel` feature is enabled, sequential otherwise.
pub fn map_trials<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_trials_par(count, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_trials_seq(count, f)
    }
}

/// Independent deterministic stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
