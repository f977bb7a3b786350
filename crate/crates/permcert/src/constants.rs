//! Harmonic numbers, the sequence L_r = H_{r-1} - log r, integer digamma
//! values, the rank-dependent approximation factor, and the asymptotic
//! bracket 1/(2r) < gamma - L_r < (r+2)/(2r(r+1)).

use crate::error::{Error, Result};

/// Euler–Mascheroni constant, hard-coded to full double precision.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// H_r = sum_{k=1..r} 1/k with compensated (Kahan) accumulation; H_0 = 0.
pub fn harmonic(r: u64) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for k in 1..=r {
        let term = 1.0 / k as f64;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// L_r = H_{r-1} - log r; L_1 = 0 exactly, increasing to gamma.
pub fn l_value(r: u64) -> Result<f64> {
    if r < 1 {
        return Err(Error::InvalidArgument("l_value requires r >= 1".into()));
    }
    Ok(harmonic(r - 1) - (r as f64).ln())
}

/// Digamma at a positive integer: psi(r) = H_{r-1} - gamma.
pub fn digamma_integer(r: u64) -> Result<f64> {
    if r < 1 {
        return Err(Error::InvalidArgument("digamma_integer requires r >= 1".into()));
    }
    Ok(harmonic(r - 1) - EULER_GAMMA)
}

/// log Gamma(x) for x > 0 via the Stirling series with an argument shift;
/// relative error below 1e-13 for the factorial range used here.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires a positive argument");
    // Shift x upward until the asymptotic series is accurate, using
    // Gamma(x) = Gamma(x + k) / (x (x+1) ... (x+k-1)).
    let mut shift = 0.0f64;
    let mut z = x;
    while z < 12.0 {
        shift += z.ln();
        z += 1.0;
    }
    // Stirling series coefficients B_{2k} / (2k (2k-1)).
    const COEFFS: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let z2 = z * z;
    let mut series = 0.0;
    let mut zp = z;
    for c in COEFFS {
        series += c / zp;
        zp *= z2;
    }
    const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_7;
    (z - 0.5) * z.ln() - z + HALF_LN_TWO_PI + series - shift
}

/// log n! = log Gamma(n + 1). Small arguments use an exact compensated sum
/// of log k (so log 0! = log 1! = 0 exactly); large arguments use the
/// Stirling-series log-gamma.
pub fn log_factorial(n: u64) -> f64 {
    if n <= 256 {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for k in 2..=n {
            let term = (k as f64).ln();
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// The a-priori approximation factor (n!/n^n) e^{-n L_r} in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxFactor {
    pub n: u64,
    pub r: u64,
    /// log(n!) - n log n - n L_r; always <= 0.
    pub log_value: f64,
}

/// Rank-r approximation factor for size n; requires 1 <= r <= n.
pub fn approx_factor(n: u64, r: u64) -> Result<ApproxFactor> {
    if n < 1 {
        return Err(Error::InvalidArgument("approx_factor requires n >= 1".into()));
    }
    if r < 1 || r > n {
        return Err(Error::InvalidArgument(format!(
            "approx_factor requires 1 <= r <= n, got r = {r}, n = {n}"
        )));
    }
    let log_value = log_factorial(n) - n as f64 * (n as f64).ln() - n as f64 * l_value(r)?;
    Ok(ApproxFactor { n, r, log_value })
}

/// Evidence for the bracket 1/(2r) < gamma - L_r < (r+2)/(2r(r+1)).
#[derive(Debug, Clone, Copy)]
pub struct LrBoundsReport {
    pub r: u64,
    pub gamma_minus_l: f64,
    pub lower: f64,
    pub upper: f64,
    pub holds: bool,
}

fn lr_bounds_from_l(r: u64, l: f64) -> LrBoundsReport {
    let rf = r as f64;
    let gamma_minus_l = EULER_GAMMA - l;
    let lower = 1.0 / (2.0 * rf);
    let upper = (rf + 2.0) / (2.0 * rf * (rf + 1.0));
    LrBoundsReport { r, gamma_minus_l, lower, upper, holds: lower < gamma_minus_l && gamma_minus_l < upper }
}

/// Checks the bracket at a single r >= 1.
pub fn check_lr_bounds(r: u64) -> Result<LrBoundsReport> {
    Ok(lr_bounds_from_l(r, l_value(r)?))
}

/// Outcome of sweeping the bracket over r = 1..=max_r.
#[derive(Debug, Clone, Copy)]
pub struct LrSweepReport {
    pub checked: u64,
    /// First r where the strict bracket failed, if any.
    pub first_bracket_violation: Option<u64>,
    /// First r where L(r+1) > L(r) or L(r) < gamma failed, if any.
    pub first_monotonicity_violation: Option<u64>,
}

impl LrSweepReport {
    pub fn all_hold(&self) -> bool {
        self.first_bracket_violation.is_none() && self.first_monotonicity_violation.is_none()
    }
}

/// Sweeps r = 1..=max_r with an incrementally maintained compensated
/// harmonic sum, checking the bracket strictly at every r plus strict
/// monotonicity L(r) < L(r+1) < gamma.
pub fn sweep_lr_bounds(max_r: u64) -> LrSweepReport {
    let mut report = LrSweepReport {
        checked: 0,
        first_bracket_violation: None,
        first_monotonicity_violation: None,
    };
    // Kahan state for H_{r-1}.
    let mut h = 0.0f64;
    let mut comp = 0.0f64;
    let mut prev_l: Option<f64> = None;
    for r in 1..=max_r {
        let l = h - (r as f64).ln();
        let b = lr_bounds_from_l(r, l);
        if !b.holds && report.first_bracket_violation.is_none() {
            report.first_bracket_violation = Some(r);
        }
        let monotone_ok = l < EULER_GAMMA && prev_l.is_none_or(|p| l > p);
        if !monotone_ok && report.first_monotonicity_violation.is_none() {
            report.first_monotonicity_violation = Some(r);
        }
        prev_l = Some(l);
        report.checked = r;
        // Advance H_{r-1} -> H_r.
        let term = 1.0 / r as f64;
        let y = term - comp;
        let t = h + y;
        comp = (t - h) - y;
        h = t;
    }
    report
}
