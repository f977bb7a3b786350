//! Exact and Monte Carlo permanent oracles: Ryser's inclusion–exclusion with
//! Gray-code subset enumeration, the closed-form rank-one permanent, a
//! Gaussian-integral estimator, and the sphere-average correction factor.

use num_complex::Complex64;

use crate::constants::log_factorial;
use crate::error::{Error, Result};
use crate::hermitian::{GramFactor, HermitianMatrix, Matrix};
use crate::rng::{complex_normal_vector, substream_rng, worker_shares};

/// Largest n accepted by the exact oracle (cost O(2^n * n)).
pub const EXACT_CAP: usize = 20;

/// Monte Carlo estimate with pooled variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermanentEstimate {
    /// Sample mean. When `log_domain` is true this is the log of the
    /// estimated mean instead.
    pub mean: f64,
    /// Standard error of the mean; in log space when `log_domain` is true
    /// (approximately the relative standard error).
    pub std_error: f64,
    pub samples: u64,
    pub log_domain: bool,
}

/// Product of complex factors with the magnitude accumulated in log space;
/// returns 0 as soon as any factor is 0. Avoids overflow/underflow for long
/// products.
fn stable_product(vals: &[Complex64]) -> Complex64 {
    let mut log_mag = 0.0f64;
    let mut phase = Complex64::new(1.0, 0.0);
    for z in vals {
        let m = z.norm();
        if m == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        log_mag += m.ln();
        phase *= z / m;
    }
    phase * log_mag.exp()
}

/// Exact permanent via Ryser's formula with Gray-code subset enumeration:
/// per(A) = (-1)^n sum_{S != empty} (-1)^{|S|} prod_i sum_{j in S} a_ij.
pub fn permanent_exact(a: &Matrix) -> Result<Complex64> {
    let n = a.dim();
    if n > EXACT_CAP {
        return Err(Error::ExactCapExceeded { n, cap: EXACT_CAP });
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut gray_prev: u64 = 0;
    for k in 1..(1u64 << n) {
        let gray = k ^ (k >> 1);
        let flipped = gray ^ gray_prev;
        let j = flipped.trailing_zeros() as usize;
        if gray & flipped != 0 {
            for (i, rs) in row_sums.iter_mut().enumerate() {
                *rs += a.get(i, j);
            }
        } else {
            for (i, rs) in row_sums.iter_mut().enumerate() {
                *rs -= a.get(i, j);
            }
        }
        let term = stable_product(&row_sums);
        if gray.count_ones() % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        gray_prev = gray;
    }
    if n % 2 == 1 {
        acc = -acc;
    }
    Ok(acc)
}

/// Exact permanent of a Hermitian PSD matrix: validates that the imaginary
/// part is negligible (<= 1e-9 relative) and returns the real part.
pub fn permanent_exact_hpsd(a: &HermitianMatrix) -> Result<f64> {
    let p = permanent_exact(a.matrix())?;
    if p.im.abs() > 1e-9 * p.norm().max(1e-300) {
        return Err(Error::Numeric(format!(
            "permanent of a Hermitian matrix came out non-real: {} + {}i",
            p.re, p.im
        )));
    }
    Ok(p.re)
}

/// per(v v†) = n! prod_i |v_i|^2, evaluated in log space; 0 when any
/// component vanishes.
pub fn permanent_rank_one(v: &[Complex64]) -> f64 {
    match log_permanent_rank_one(v) {
        Some(log) => log.exp(),
        None => 0.0,
    }
}

/// log per(v v†) = log n! + 2 sum_i log |v_i|, or None when a component is 0.
pub fn log_permanent_rank_one(v: &[Complex64]) -> Option<f64> {
    let n = v.len() as u64;
    let mut log_prod = 0.0f64;
    for z in v {
        let m = z.norm();
        if m == 0.0 {
            return None;
        }
        log_prod += 2.0 * m.ln();
    }
    Some(log_factorial(n) + log_prod)
}

/// Unbiased Gaussian-integral estimator of per(V†V): the mean of
/// prod_i |<v_i, x>|^2 over x ~ CN(0, I_n). Deterministic given seed; the
/// sample stream is split across `MC_WORKERS` substreams merged in worker
/// order with Welford-style pooling.
pub fn permanent_mc_gaussian(v: &GramFactor, samples: u64, seed: u64) -> Result<PermanentEstimate> {
    if samples < 1 {
        return Err(Error::InvalidArgument("permanent_mc_gaussian requires samples >= 1".into()));
    }
    let n = v.dim();
    let shares = worker_shares(samples);
    // Per-worker Welford accumulators, merged pairwise in worker order.
    let mut count = 0u64;
    let mut mean = 0.0f64;
    let mut m2 = 0.0f64;
    for (w, &share) in shares.iter().enumerate() {
        if share == 0 {
            continue;
        }
        let mut rng = substream_rng(seed, w as u64);
        let mut w_count = 0u64;
        let mut w_mean = 0.0f64;
        let mut w_m2 = 0.0f64;
        for _ in 0..share {
            let x = complex_normal_vector(&mut rng, n);
            let mut value = 1.0f64;
            for i in 0..n {
                let col = v.column(i);
                let mut ip = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    ip += col[k].conj() * x[k];
                }
                value *= ip.norm_sqr();
            }
            w_count += 1;
            let delta = value - w_mean;
            w_mean += delta / w_count as f64;
            w_m2 += delta * (value - w_mean);
        }
        // Merge the worker's running mean/variance into the global ones.
        let total = count + w_count;
        let delta = w_mean - mean;
        mean += delta * w_count as f64 / total as f64;
        m2 += w_m2 + delta * delta * (count as f64 * w_count as f64) / total as f64;
        count = total;
    }
    let std_error = if count >= 2 {
        (m2 / (count as f64 - 1.0) / count as f64).sqrt()
    } else {
        0.0
    };
    Ok(PermanentEstimate { mean, std_error, samples: count, log_domain: false })
}

/// Sphere-average correction in log space:
/// log[(n+d-1)! / (n^n (n-1)!)]. At d = n this is the factor relating the
/// sphere average of a degree-n form to its Gaussian expectation.
pub fn sphere_correction(n: u64, d: u64) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidArgument("sphere_correction requires n >= 1".into()));
    }
    Ok(log_factorial(n + d - 1) - n as f64 * (n as f64).ln() - log_factorial(n - 1))
}
