//! Seeded sampling of positive metric vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default exponent range for log-uniform sampling.
pub const DEFAULT_BOX: (f64, f64) = (-1.5, 1.5);

/// Generator for draw number `stream` under `seed`.
///
/// ChaCha8 seeded with `seed_from_u64(seed)`, then switched to stream
/// `stream`, so every start owns an independent sequence regardless of the
/// order in which starts are evaluated.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `n` values `10^u` with `u` uniform on `[lo, hi]`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, n: usize, (lo, hi): (f64, f64)) -> Vec<f64> {
    (0..n).map(|_| 10f64.powf(rng.gen_range(lo..=hi))).collect()
}
