//! Desk-scale numerical exploration of two open questions: the van der
//! Waerden analog n!/n^n * r(A) <= per(A) <= r(A), where r(A) is the exact
//! sphere maximum of the product of linear forms, and the tensor inequality
//! per(A (x) J_k) >= per(A)^k (k!)^n.
//!
//! Local search can only under-estimate r(A), so the proven lower direction
//! is asserted hard while the conjectured upper direction is only ever
//! classed "consistent" or "unresolved", never "disproved".

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::log_factorial;
use crate::error::{Error, Result};
use crate::hermitian::{GramFactor, HermitianMatrix, Matrix};
use crate::permanent::permanent_exact_hpsd;
use crate::relaxation::{rel, SolveOptions};
use crate::rounding::{objective_product, round_once};
use crate::rng::substream_rng;

/// Inner products this small are treated as on the singular set of the log
/// objective: their gradient terms are dropped and the iterate is nudged off
/// the set by a random tangent perturbation.
const SINGULAR_FORM_FLOOR: f64 = 1e-280;

/// Options for the projected-gradient sphere ascent.
#[derive(Debug, Clone, Copy)]
pub struct SphereSearchOptions {
    pub max_iter: u64,
    /// Terminate when the Riemannian (tangent) gradient norm drops below this.
    pub step_tol: f64,
}

impl Default for SphereSearchOptions {
    fn default() -> Self {
        // A tangent norm of 1e-6 puts the objective within ~1e-12 of the
        // local optimum (the gap is quadratic in the gradient norm) while
        // staying well above the scale where Armijo increments sink below
        // float resolution of the objective.
        Self { max_iter: 2000, step_tol: 1e-6 }
    }
}

/// Result of a local sphere maximization.
#[derive(Debug, Clone)]
pub struct SphereSearchResult {
    pub x: Vec<Complex64>,
    /// Final objective sum_i log |<v_i, x>|^2.
    pub objective_log: f64,
    /// False when the iteration budget ran out before the tangent gradient
    /// reached step_tol; the best iterate is still returned.
    pub converged: bool,
}

/// Per-instance exploration report for the sphere-maximum sandwich.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub instance_id: String,
    /// Best found value of the sphere objective: a lower bound on log r(A).
    pub log_r_lower: f64,
    pub log_per: f64,
    /// n!/n^n * r_found <= per(A): a proven statement, so false means a bug.
    pub lower_holds: bool,
    /// per(A) <= relaxation value (which upper-bounds r(A)).
    pub upper_consistent: bool,
    /// True only when a proven inequality failed numerically.
    pub counterexample_flag: bool,
}

/// Options for `check_vdw_conjecture`.
#[derive(Debug, Clone, Copy)]
pub struct ConjectureOptions {
    pub starts: usize,
    pub seed: u64,
}

impl Default for ConjectureOptions {
    fn default() -> Self {
        Self { starts: 20, seed: 0 }
    }
}

/// Outcome of one tensor-inequality check per(A (x) J_k) >= per(A)^k (k!)^n.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PateCheck {
    pub lhs_log: f64,
    pub rhs_log: f64,
    pub holds: bool,
}

fn inner(v: &[Complex64], x: &[Complex64]) -> Complex64 {
    v.iter().zip(x).map(|(a, b)| a.conj() * b).sum()
}

/// Multiply by a global phase making the first significant component real
/// positive; the objective is phase-invariant, so this is a pure gauge fix
/// that stabilizes convergence and comparison of iterates.
fn fix_phase(x: &mut [Complex64]) {
    let max_mod = x.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if max_mod == 0.0 {
        return;
    }
    let lead = x.iter().find(|z| z.norm() > 1e-12 * max_mod);
    if let Some(&z) = lead {
        let r = z.norm();
        if r > 0.0 {
            let phase = z.conj() / r;
            for c in x.iter_mut() {
                *c *= phase;
            }
        }
    }
}

fn renormalize_to_sphere(x: &mut [Complex64], n: usize) -> Result<()> {
    let norm2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    if norm2 == 0.0 {
        return Err(Error::Numeric("sphere iterate collapsed to zero".into()));
    }
    let scale = (n as f64 / norm2).sqrt();
    for z in x.iter_mut() {
        *z *= scale;
    }
    Ok(())
}

/// Maximizer of f along the retracted ray x + t*u, t >= 0. With
/// s_i = <v_i,x> and w_i = <v_i,u>, the pulled-back objective is
///
///   g(t) = sum_i log(q_i + b_i t + c_i t^2) - n log(1 + t^2 ||u||^2 / n),
///
/// whose derivative is strictly decreasing between consecutive poles, with
/// g'(0) = ||u||^2 > 0. The search brackets the first sign change of g'
/// before the first pole and bisects it.
fn ray_maximum(v: &GramFactor, x: &[Complex64], u: &[Complex64], unorm2: f64) -> f64 {
    let n = v.dim();
    let nf = n as f64;
    let mut quad = Vec::with_capacity(n);
    // Largest step before some linear form vanishes along the ray.
    let mut t_pole = f64::INFINITY;
    for i in 0..n {
        let col = v.column(i);
        let s = inner(col, x);
        let w = inner(col, u);
        let q0 = s.norm_sqr();
        let b = 2.0 * (s.conj() * w).re;
        let c = w.norm_sqr();
        // Smallest positive root of c t^2 + b t + q0 = 0, if any.
        if c > 0.0 {
            let disc = b * b - 4.0 * c * q0;
            if disc >= 0.0 {
                let root = (-b - disc.sqrt()) / (2.0 * c);
                if root > 0.0 {
                    t_pole = t_pole.min(root);
                }
            }
        } else if b < 0.0 {
            let root = -q0 / b;
            if root > 0.0 {
                t_pole = t_pole.min(root);
            }
        }
        quad.push((q0, b, c));
    }
    let hi_limit = if t_pole.is_finite() { t_pole * (1.0 - 1e-9) } else { 1e12 };
    if hi_limit <= 0.0 {
        return 0.0;
    }
    let deriv = |t: f64| -> f64 {
        let mut d = -2.0 * nf * t * unorm2 / (nf + t * t * unorm2);
        for &(q0, b, c) in &quad {
            d += (b + 2.0 * c * t) / (q0 + t * (b + c * t));
        }
        d
    };
    let mut hi = 1.0f64.min(hi_limit);
    while deriv(hi) > 0.0 && hi < hi_limit {
        hi = (hi * 2.0).min(hi_limit);
    }
    if deriv(hi) > 0.0 {
        return hi;
    }
    let mut lo = 0.0f64;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if deriv(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Projected gradient ascent for f(x) = sum_i log |<v_i, x>|^2 on the sphere
/// ||x||^2 = n: Euclidean gradient 2 sum_i v_i <v_i,x>/|<v_i,x>|^2, projected
/// to the tangent space, exact line search along the retracted ray. The
/// objective never decreases across iterations.
pub fn local_maximize_sphere(
    v: &GramFactor,
    x0: &[Complex64],
    opts: &SphereSearchOptions,
) -> Result<SphereSearchResult> {
    let n = v.dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch { left: x0.len(), right: n });
    }
    let mut x = x0.to_vec();
    renormalize_to_sphere(&mut x, n)?;
    fix_phase(&mut x);
    let mut f = objective_product(v, &x);
    if f == f64::NEG_INFINITY {
        return Err(Error::InvalidArgument(
            "starting point lies on the zero set of the objective".into(),
        ));
    }
    let mut perturb_rng = substream_rng(0x5bd1_e995, 0);
    let mut converged = false;
    let mut iter = 0u64;
    while iter < opts.max_iter {
        iter += 1;
        // Euclidean gradient with singular terms clamped.
        let mut grad = vec![Complex64::new(0.0, 0.0); n];
        let mut singular = false;
        for i in 0..n {
            let col = v.column(i);
            let ip = inner(col, &x);
            let q = ip.norm_sqr();
            if q < SINGULAR_FORM_FLOOR {
                singular = true;
                continue;
            }
            let coeff = 2.0 * ip / q;
            for (g, c) in grad.iter_mut().zip(col) {
                *g += coeff * c;
            }
        }
        if singular {
            // Nudge off the singular set along a random tangent direction
            // small enough to keep the retraction well conditioned.
            let mut dir: Vec<Complex64> =
                (0..n).map(|_| crate::rng::complex_standard_normal(&mut perturb_rng)).collect();
            let overlap: Complex64 = inner(&x, &dir);
            let re_part = overlap.re / n as f64;
            for (d, xc) in dir.iter_mut().zip(&x) {
                *d -= re_part * xc;
            }
            let dir_norm = dir.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if dir_norm > 0.0 {
                let eps = 1e-6 * (n as f64).sqrt() / dir_norm;
                for (xc, d) in x.iter_mut().zip(&dir) {
                    *xc += eps * d;
                }
                renormalize_to_sphere(&mut x, n)?;
                fix_phase(&mut x);
                let f_new = objective_product(v, &x);
                if f_new > f || f == f64::NEG_INFINITY {
                    f = f_new;
                }
            }
            continue;
        }
        // Tangent-space projection: remove the real component along x.
        let overlap = inner(&x, &grad);
        let re_part = overlap.re / n as f64;
        let tangent: Vec<Complex64> =
            grad.iter().zip(&x).map(|(g, xc)| g - re_part * xc).collect();
        let tnorm2: f64 = tangent.iter().map(|z| z.norm_sqr()).sum();
        let tnorm = tnorm2.sqrt();
        if tnorm <= opts.step_tol {
            converged = true;
            break;
        }
        // Exact line search along t -> sqrt(n) (x + t u)/||x + t u||: the
        // objective restricted to the ray is a sum of logs of quadratics in
        // t minus the normalization term, so its derivative can be bisected.
        let t_star = ray_maximum(v, &x, &tangent, tnorm2);
        let mut advanced = false;
        if t_star > 0.0 {
            let mut cand: Vec<Complex64> =
                x.iter().zip(&tangent).map(|(xc, u)| xc + t_star * u).collect();
            if renormalize_to_sphere(&mut cand, n).is_ok() {
                let f_cand = objective_product(v, &cand);
                if f_cand > f {
                    x = cand;
                    fix_phase(&mut x);
                    f = f_cand;
                    advanced = true;
                }
            }
        }
        if !advanced {
            // The 1-D optimum yields no measurable increase: numerically
            // stationary even when the tangent norm is above tolerance.
            converged = tnorm <= opts.step_tol * 100.0;
            break;
        }
    }
    Ok(SphereSearchResult { x, objective_log: f, converged })
}

/// Multi-start exploration of the sandwich n!/n^n r(A) <= per(A) <= r(A):
/// each start is a rounding draw of the relaxation optimizer pushed uphill
/// by local search. The proven lower direction is checked against the exact
/// permanent; the upper direction is only checked for consistency against
/// the relaxation value.
pub fn check_vdw_conjecture(
    a: &HermitianMatrix,
    instance_id: &str,
    opts: &ConjectureOptions,
) -> Result<ConjectureReport> {
    let n = a.dim();
    let per = permanent_exact_hpsd(a)?;
    let log_per = if per > 0.0 { per.ln() } else { f64::NEG_INFINITY };
    let outcome = rel(a, &SolveOptions::default())?;
    let v = &outcome.gram;

    let mut log_r_lower = f64::NEG_INFINITY;
    if outcome.value_log > f64::NEG_INFINITY {
        let u = &outcome.solution.u_factor;
        for s in 0..opts.starts.max(1) {
            let mut rng = substream_rng(opts.seed, s as u64);
            let draw = round_once(u, v, &mut rng)?;
            if draw.objective_log == f64::NEG_INFINITY {
                continue;
            }
            let found = local_maximize_sphere(v, &draw.y, &SphereSearchOptions::default())?;
            if found.objective_log > log_r_lower {
                log_r_lower = found.objective_log;
            }
        }
    }

    let log_nn = log_factorial(n as u64) - n as f64 * (n as f64).ln();
    let slack = 1e-8;
    let lower_holds = log_nn + log_r_lower <= log_per + slack
        || log_r_lower == f64::NEG_INFINITY;
    let upper_consistent =
        log_per <= outcome.value_log + slack || log_per == f64::NEG_INFINITY;
    Ok(ConjectureReport {
        instance_id: instance_id.to_string(),
        log_r_lower,
        log_per,
        lower_holds,
        upper_consistent,
        counterexample_flag: !(lower_holds && upper_consistent),
    })
}

/// Exact check of per(A (x) J_k) >= per(A)^k (k!)^n in log space, where J_k
/// is the k x k all-ones matrix. Requires n*k within the exact-oracle cap.
pub fn check_pate(a: &HermitianMatrix, k: usize) -> Result<PateCheck> {
    let n = a.dim();
    if k < 1 {
        return Err(Error::InvalidArgument("tensor order k must be >= 1".into()));
    }
    if n * k > crate::permanent::EXACT_CAP {
        return Err(Error::ExactCapExceeded { n: n * k, cap: crate::permanent::EXACT_CAP });
    }
    let ones = Matrix::from_rows(&vec![vec![Complex64::new(1.0, 0.0); k]; k])?;
    let kron = a.matrix().kron(&ones);
    let big = HermitianMatrix::new(kron)?;
    let per_big = permanent_exact_hpsd(&big)?;
    let per_a = permanent_exact_hpsd(a)?;
    let lhs_log = if per_big > 0.0 { per_big.ln() } else { f64::NEG_INFINITY };
    let rhs_log = if per_a > 0.0 {
        k as f64 * per_a.ln() + n as f64 * log_factorial(k as u64)
    } else {
        f64::NEG_INFINITY
    };
    let holds = lhs_log >= rhs_log - 1e-9 * (1.0 + rhs_log.abs());
    Ok(PateCheck { lhs_log, rhs_log, holds })
}
