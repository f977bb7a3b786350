//! Deterministic random-number plumbing: a counter-based generator with
//! per-worker/per-draw substreams, and standard complex Gaussian draws.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Fixed number of logical Monte Carlo workers. Work is split across these
/// substreams and merged in worker order, so results are identical whether
/// the substreams are consumed sequentially or in parallel.
pub const MC_WORKERS: u64 = 8;

/// Generator for a (seed, stream) pair. Streams partition the generator's
/// keyspace, so distinct workers or draws never overlap.
pub fn substream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One standard complex Gaussian CN(0, 1): independent real and imaginary
/// parts, each N(0, 1/2).
pub fn complex_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * std::f64::consts::FRAC_1_SQRT_2, im * std::f64::consts::FRAC_1_SQRT_2)
}

/// A vector of k i.i.d. CN(0, 1) entries.
pub fn complex_normal_vector<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<Complex64> {
    (0..k).map(|_| complex_standard_normal(rng)).collect()
}

/// Splits `total` items across `MC_WORKERS` substreams: worker w gets
/// total/W plus one extra for the first total%W workers.
pub fn worker_shares(total: u64) -> Vec<u64> {
    let base = total / MC_WORKERS;
    let extra = total % MC_WORKERS;
    (0..MC_WORKERS).map(|w| base + u64::from(w < extra)).collect()
}
