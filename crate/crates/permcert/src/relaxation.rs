//! Dual solver for the product-of-linear-forms relaxation:
//! maximize sum_i log(v_i† P v_i) over {P >= 0, Tr P = n}, with a diagonal
//! upper-bound certificate extracted from any feasible iterate.
//!
//! The solver is a fully-corrective conditional-gradient scheme. Each outer
//! round evaluates the gradient G = sum_i v_i v_i† / (v_i† P v_i), whose top
//! eigenvector w is the linear-minimization-oracle vertex n·ww†; an exact
//! univariate line search toward that vertex gives the classical
//! conditional-gradient iterate, which is then fully corrected by re-solving
//! the program restricted to the span of all retained directions with a
//! damped-Newton log-det barrier (the correction only improves the iterate).
//! The same eigendecomposition yields the duality gap n·log lambda_max(G),
//! so every iteration carries a certified upper bound.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{
    eigh, loewner_leq, EigDecomposition, GramFactor, HermitianMatrix, Matrix,
};

/// Multiplicative inflation applied to the certificate diagonal before the
/// Löwner validation; the inflated value is the reported upper bound.
pub const DELTA_INFLATION: f64 = 1e-8;

/// Solver options; `max_iter = None` means the default 50·n².
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub gap_tol: f64,
    pub max_iter: Option<u64>,
    /// Forms v_i†Pv_i below this floor abort with a numeric error.
    pub min_form_floor: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { gap_tol: 1e-7, max_iter: None, min_form_floor: 1e-300 }
    }
}

/// One gap evaluation: the best objective seen so far and the certified
/// upper bound computed at this iterate (both in log space).
#[derive(Debug, Clone, Copy)]
pub struct IterateRecord {
    pub log_nu: f64,
    pub log_mu_bound: f64,
}

/// Converged (or best-found) dual point with its certificate values.
#[derive(Debug, Clone)]
pub struct RelaxationSolution {
    /// The dual iterate, trace n, PSD.
    pub p: HermitianMatrix,
    /// Columns u_j with P = sum_j u_j u_j†.
    pub u_factor: Vec<Vec<Complex64>>,
    /// sum_i log(v_i† P v_i).
    pub log_nu: f64,
    /// Certified upper bound on the optimum (uninflated analytic value).
    pub log_mu_bound: f64,
    /// exp(log_mu_bound - log_nu), at least 1.
    pub gap_ratio: f64,
    /// Number of gap evaluations performed.
    pub iterations: u64,
    pub converged: bool,
    /// (best log_nu so far, upper bound at that iteration) per evaluation.
    pub iterate_trace: Vec<IterateRecord>,
}

/// Diagonal upper-bound certificate: A <= Diag(d), d_i = lambda / alpha_i.
/// The stored d and lambda include the inflation, so the Löwner relation
/// holds for the stored values exactly as validated.
#[derive(Debug, Clone)]
pub struct DiagonalCertificate {
    pub d: Vec<f64>,
    pub lambda: f64,
    pub alpha: Vec<f64>,
    pub validated: bool,
    /// Validated upper bound sum_i log d_i = n·log lambda - sum_i log alpha_i.
    pub log_mu_bound: f64,
}

/// Result of the full relaxation pipeline.
#[derive(Debug, Clone)]
pub struct RelResult {
    /// log rel(A) = log_nu at convergence.
    pub value_log: f64,
    pub solution: RelaxationSolution,
    pub certificate: DiagonalCertificate,
    /// The Gram factorization A = V†V used by the solver (and by rounding).
    pub gram: GramFactor,
}

// ---------------------------------------------------------------------------
// Small dense helpers (column-major orthonormal frames, raw Hermitian blocks).
// ---------------------------------------------------------------------------

fn cdot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        s += a.conj() * b;
    }
    s
}

fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Eigendecomposition of a raw Hermitian-by-construction block.
fn eigh_raw(n: usize, data: &[Complex64]) -> Result<EigDecomposition> {
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, data[i * n + j]);
        }
    }
    eigh(&HermitianMatrix::new(m)?)
}

/// Appends the component of w orthogonal to the columns of b (double
/// Gram–Schmidt); returns false when the residual is below tolerance.
/// Callers pass unit-norm w.
fn orth_append(b: &mut Vec<Vec<Complex64>>, w: &[Complex64]) -> bool {
    let mut r = w.to_vec();
    for _ in 0..2 {
        for col in b.iter() {
            let c = cdot(col, &r);
            for (ri, ci) in r.iter_mut().zip(col) {
                *ri -= c * ci;
            }
        }
    }
    let nr = norm2(&r).sqrt();
    if nr < 1e-10 {
        return false;
    }
    for ri in r.iter_mut() {
        *ri /= nr;
    }
    b.push(r);
    true
}

/// b <- b · w_cols, where w_cols are orthonormal coefficient columns
/// (each of length b.len()).
fn rotate_frame(b: &[Vec<Complex64>], w_cols: &[&[Complex64]]) -> Vec<Vec<Complex64>> {
    let n = b[0].len();
    w_cols
        .iter()
        .map(|w| {
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            for (c, coeff) in w.iter().enumerate() {
                for (row, out) in col.iter_mut().enumerate() {
                    *out += b[c][row] * coeff;
                }
            }
            col
        })
        .collect()
}

/// Fraction of v's mass inside span(b).
fn coverage(b: &[Vec<Complex64>], v: &[Complex64]) -> f64 {
    let denom = norm2(v).max(1e-300);
    let num: f64 = b.iter().map(|col| cdot(col, v).norm_sqr()).sum();
    num / denom
}

/// Partial-pivot LU solve of a dense real system, in place.
fn solve_real_linear(a: &mut [f64], b: &mut [f64], dim: usize) -> Result<()> {
    for col in 0..dim {
        let mut piv = col;
        let mut best = a[col * dim + col].abs();
        for row in (col + 1)..dim {
            let mag = a[row * dim + col].abs();
            if mag > best {
                best = mag;
                piv = row;
            }
        }
        if best == 0.0 {
            return Err(Error::Numeric("singular linear system in Newton step".into()));
        }
        if piv != col {
            for k in 0..dim {
                a.swap(col * dim + k, piv * dim + k);
            }
            b.swap(col, piv);
        }
        let inv = 1.0 / a[col * dim + col];
        for row in (col + 1)..dim {
            let f = a[row * dim + col] * inv;
            if f == 0.0 {
                continue;
            }
            a[row * dim + col] = 0.0;
            for k in (col + 1)..dim {
                a[row * dim + k] -= f * a[col * dim + k];
            }
            b[row] -= f * b[col];
        }
    }
    for col in (0..dim).rev() {
        let mut s = b[col];
        for k in (col + 1)..dim {
            s -= a[col * dim + k] * b[k];
        }
        b[col] = s / a[col * dim + col];
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Real parametrization of Hermitian m×m blocks.
// Coordinate order: diagonals (k,k), then for k < l the pair (Re, Im).
// ---------------------------------------------------------------------------

/// Basis index -> (k, l, kind) with kind 0 = diagonal, 1 = Re, 2 = Im.
fn hermitian_basis(m: usize) -> Vec<(usize, usize, u8)> {
    let mut basis: Vec<(usize, usize, u8)> = (0..m).map(|k| (k, k, 0)).collect();
    for k in 0..m {
        for l in (k + 1)..m {
            basis.push((k, l, 1));
            basis.push((k, l, 2));
        }
    }
    basis
}

/// Gradient coordinates of M (pairing h -> Tr(M H)): [M_kk; 2Re M_kl; 2Im M_kl].
fn pack_grad(m_mat: &[Complex64], m: usize) -> Vec<f64> {
    let mut g: Vec<f64> = (0..m).map(|k| m_mat[k * m + k].re).collect();
    for k in 0..m {
        for l in (k + 1)..m {
            g.push(2.0 * m_mat[k * m + l].re);
            g.push(2.0 * m_mat[k * m + l].im);
        }
    }
    g
}

/// Coordinates of a Hermitian H itself: [H_kk; Re H_kl; Im H_kl].
fn pack_h(h_mat: &[Complex64], m: usize) -> Vec<f64> {
    let mut h: Vec<f64> = (0..m).map(|k| h_mat[k * m + k].re).collect();
    for k in 0..m {
        for l in (k + 1)..m {
            h.push(h_mat[k * m + l].re);
            h.push(h_mat[k * m + l].im);
        }
    }
    h
}

/// Inverse of pack_h.
fn unpack(h: &[f64], m: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); m * m];
    for k in 0..m {
        out[k * m + k] = Complex64::new(h[k], 0.0);
    }
    let mut idx = m;
    for k in 0..m {
        for l in (k + 1)..m {
            let z = Complex64::new(h[idx], h[idx + 1]);
            out[k * m + l] = z;
            out[l * m + k] = z.conj();
            idx += 2;
        }
    }
    out
}

/// Hessian of -log det H in the real coordinates:
/// Q[a,b] = Tr(H⁻¹ E_a H⁻¹ E_b), using the sparsity of the basis matrices
/// (each S_a = H⁻¹ E_a H⁻¹ is a rank-<=2 combination of H⁻¹ columns, so any
/// single entry of S_a is O(1) to evaluate).
fn logdet_hessian(hinv: &[Complex64], m: usize, basis: &[(usize, usize, u8)], q: &mut [f64]) {
    let nn = basis.len();
    let at = |p: usize, r: usize| hinv[p * m + r];
    for (a, &(k, l, kind)) in basis.iter().enumerate() {
        // S(p, r) for this basis element.
        let s = |p: usize, r: usize| -> Complex64 {
            match kind {
                0 => at(p, k) * at(k, r),
                1 => at(p, k) * at(l, r) + at(p, l) * at(k, r),
                _ => Complex64::new(0.0, 1.0) * (at(p, k) * at(l, r) - at(p, l) * at(k, r)),
            }
        };
        for (b, &(p, r, kind2)) in basis.iter().enumerate() {
            let v = match kind2 {
                0 => s(p, p),
                1 => s(p, r) + s(r, p),
                _ => Complex64::new(0.0, 1.0) * (s(r, p) - s(p, r)),
            };
            q[a * nn + b] = v.re;
        }
    }
}

// ---------------------------------------------------------------------------
// Subspace correction: maximize eta·sum log(u_i†Hu_i) + log det H subject to
// Tr H = n by damped Newton along an increasing eta ladder. The objective is
// self-concordant for eta >= 1, so the damped step stays in the cone.
// ---------------------------------------------------------------------------

fn subspace_solve(us: &[Vec<Complex64>], h0: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    let m = (h0.len() as f64).sqrt().round() as usize;
    let nn = m * m;
    let basis = hermitian_basis(m);
    let eta_end = 1e10 * m as f64;

    // Linear forms a_i with a_i · h = u_i† H u_i.
    let mut a = vec![0.0f64; us.len() * nn];
    for (i, u) in us.iter().enumerate() {
        let mut outer = vec![Complex64::new(0.0, 0.0); nn];
        for k in 0..m {
            for l in 0..m {
                outer[k * m + l] = u[k] * u[l].conj();
            }
        }
        a[i * nn..(i + 1) * nn].copy_from_slice(&pack_grad(&outer, m));
    }
    let c = {
        let mut eye = vec![Complex64::new(0.0, 0.0); nn];
        for k in 0..m {
            eye[k * m + k] = Complex64::new(1.0, 0.0);
        }
        pack_grad(&eye, m)
    };

    let mut h = pack_h(h0, m);
    let forms = |h: &[f64], a: &[f64]| -> Vec<f64> {
        (0..us.len())
            .map(|i| {
                let row = &a[i * nn..(i + 1) * nn];
                row.iter().zip(h).map(|(x, y)| x * y).sum()
            })
            .collect()
    };

    let mut eta = 1.0f64;
    let kdim = nn + 1;
    let mut kkt = vec![0.0f64; kdim * kdim];
    let mut rhs = vec![0.0f64; kdim];
    let mut neg_hess = vec![0.0f64; nn * nn];
    let mut ld_hess = vec![0.0f64; nn * nn];
    loop {
        let final_phase = eta >= eta_end;
        let lam_tol = if final_phase { 0.02 } else { 0.1 };
        for _ in 0..80 {
            let q = forms(&h, &a);
            let h_mat = unpack(&h, m);
            let eig = eigh_raw(m, &h_mat)?;
            let min_ew = *eig.eigenvalues.last().unwrap();
            if min_ew <= 0.0 || q.iter().any(|&x| x <= 0.0) {
                return Err(Error::Numeric("subspace iterate left the cone".into()));
            }
            // H⁻¹ from the eigensystem.
            let mut hinv = vec![Complex64::new(0.0, 0.0); nn];
            for (ew, w) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
                let inv = 1.0 / ew;
                for p in 0..m {
                    for r in 0..m {
                        hinv[p * m + r] += w[p] * w[r].conj() * inv;
                    }
                }
            }
            // Gradient of the eta-scaled objective.
            let mut grad = pack_grad(&hinv, m);
            for (i, &qi) in q.iter().enumerate() {
                let wgt = eta / qi;
                let row = &a[i * nn..(i + 1) * nn];
                for (g, x) in grad.iter_mut().zip(row) {
                    *g += wgt * x;
                }
            }
            // Negative Hessian: eta · sum a_i a_iᵀ / q_i² + Q(H⁻¹).
            logdet_hessian(&hinv, m, &basis, &mut ld_hess);
            neg_hess.copy_from_slice(&ld_hess);
            for (i, &qi) in q.iter().enumerate() {
                let wgt = eta / (qi * qi);
                let row = &a[i * nn..(i + 1) * nn];
                for x in 0..nn {
                    let fx = wgt * row[x];
                    if fx == 0.0 {
                        continue;
                    }
                    for y in 0..nn {
                        neg_hess[x * nn + y] += fx * row[y];
                    }
                }
            }
            // Equality-constrained Newton step via the KKT system
            // [negH c; cᵀ 0] [delta; theta] = [grad; 0].
            for x in 0..kdim {
                for y in 0..kdim {
                    kkt[x * kdim + y] = if x < nn && y < nn {
                        neg_hess[x * nn + y]
                    } else if x < nn && y == nn {
                        c[x]
                    } else if x == nn && y < nn {
                        c[y]
                    } else {
                        0.0
                    };
                }
            }
            rhs[..nn].copy_from_slice(&grad);
            rhs[nn] = 0.0;
            solve_real_linear(&mut kkt, &mut rhs, kdim)?;
            let delta = &rhs[..nn];
            // Newton decrement.
            let mut lam2 = 0.0;
            for x in 0..nn {
                let mut row = 0.0;
                for y in 0..nn {
                    row += neg_hess[x * nn + y] * delta[y];
                }
                lam2 += delta[x] * row;
            }
            let lam = lam2.max(0.0).sqrt();
            let mut t = if lam <= 0.25 { 1.0 } else { 1.0 / (1.0 + lam) };
            // Safeguard: the damped step must stay strictly interior.
            let mut ok = false;
            let mut hn = h.clone();
            for _ in 0..60 {
                for (o, (hi, di)) in hn.iter_mut().zip(h.iter().zip(delta)) {
                    *o = hi + t * di;
                }
                let interior = forms(&hn, &a).iter().all(|&x| x > 0.0) && {
                    let eign = eigh_raw(m, &unpack(&hn, m))?;
                    *eign.eigenvalues.last().unwrap() > 0.0
                };
                if interior {
                    ok = true;
                    break;
                }
                t *= 0.5;
            }
            if !ok {
                break;
            }
            h = hn;
            if lam < lam_tol {
                break;
            }
        }
        if final_phase {
            break;
        }
        eta = (eta * 10.0).min(eta_end);
    }
    // Exact trace restoration (drift from linear-solve round-off).
    let tr: f64 = (0..m).map(|k| h[k]).sum();
    let scale = n as f64 / tr;
    for x in h.iter_mut() {
        *x *= scale;
    }
    Ok(unpack(&h, m))
}

// ---------------------------------------------------------------------------
// Exact line search for the conditional-gradient step.
// ---------------------------------------------------------------------------

/// Maximizes phi(t) = sum_i log((1-t) q_i + t s_i) over t in [0, 1] by
/// bisection on the decreasing derivative (phi is concave).
fn exact_line_search(q: &[f64], s: &[f64]) -> f64 {
    let dphi = |t: f64| -> f64 {
        q.iter()
            .zip(s)
            .map(|(&qi, &si)| {
                let denom = (1.0 - t) * qi + t * si;
                if denom <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                (si - qi) / denom
            })
            .sum()
    };
    if dphi(0.0) <= 0.0 {
        return 0.0;
    }
    let mut hi = 1.0 - 1e-12;
    if dphi(hi) >= 0.0 {
        return hi;
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if dphi(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// ---------------------------------------------------------------------------
// Outer solver.
// ---------------------------------------------------------------------------

struct GapEval {
    log_gap: f64,
    eig: EigDecomposition,
}

/// Gradient eigensystem and the duality gap n·log lambda_max(G) at forms q.
fn evaluate_gap(v: &GramFactor, q: &[f64]) -> Result<GapEval> {
    let n = v.dim();
    let mut g = vec![Complex64::new(0.0, 0.0); n * n];
    for (i, qi) in q.iter().enumerate() {
        let col = v.column(i);
        let inv = 1.0 / qi;
        for p in 0..n {
            let w = col[p] * inv;
            for r in 0..n {
                g[p * n + r] += w * col[r].conj();
            }
        }
    }
    let eig = eigh_raw(n, &g)?;
    let lam_max = eig.eigenvalues[0];
    if lam_max <= 0.0 {
        return Err(Error::Numeric("gradient matrix lost positivity".into()));
    }
    // lambda_max >= 1 holds analytically (Tr(GP) = n = Tr P); clamp round-off.
    let log_gap = (n as f64 * lam_max.ln()).max(0.0);
    Ok(GapEval { log_gap, eig })
}

fn check_form_floor(q: &[f64], floor: f64) -> Result<()> {
    for (i, &qi) in q.iter().enumerate() {
        if qi.is_nan() || qi < floor {
            return Err(Error::FormUnderflow { index: i, floor });
        }
    }
    Ok(())
}

/// Repairs coverage: every v_i must keep relative mass >= 1e-8 in span(b).
/// Returns the number of appended directions.
fn repair_coverage(b: &mut Vec<Vec<Complex64>>, v: &GramFactor) -> usize {
    let mut added = 0;
    for i in 0..v.dim() {
        let vi = v.column(i);
        if coverage(b, vi) < 1e-8 {
            let nv = norm2(vi).sqrt();
            if nv == 0.0 {
                continue;
            }
            let unit: Vec<Complex64> = vi.iter().map(|z| z / nv).collect();
            if orth_append(b, &unit) {
                added += 1;
            }
        }
    }
    added
}

struct Frame {
    b: Vec<Vec<Complex64>>,
    h: Vec<Complex64>, // m×m Hermitian block, trace n
}

impl Frame {
    fn m(&self) -> usize {
        self.b.len()
    }

    fn forms(&self, v: &GramFactor) -> Vec<f64> {
        let us = self.subspace_vectors(v);
        let m = self.m();
        us.iter()
            .map(|u| {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..m {
                    let mut row = Complex64::new(0.0, 0.0);
                    for (l, ul) in u.iter().enumerate() {
                        row += self.h[k * m + l] * ul;
                    }
                    s += u[k].conj() * row;
                }
                s.re
            })
            .collect()
    }

    fn subspace_vectors(&self, v: &GramFactor) -> Vec<Vec<Complex64>> {
        (0..v.dim()).map(|i| self.b.iter().map(|col| cdot(col, v.column(i))).collect()).collect()
    }
}

/// Solves the dual program by conditional gradient with full subspace
/// corrections. See the module docs for the scheme.
pub fn solve_dual(v: &GramFactor, opts: &SolveOptions) -> Result<RelaxationSolution> {
    let n = v.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let norms2: Vec<f64> = (0..n).map(|i| norm2(v.column(i))).collect();
    if norms2.contains(&0.0) {
        return Err(Error::InvalidArgument(
            "solve_dual requires every ||v_i||^2 > 0 (zero diagonal is handled upstream)".into(),
        ));
    }
    check_form_floor(&norms2, opts.min_form_floor)?;
    let max_iter = opts.max_iter.unwrap_or(50 * (n as u64) * (n as u64)).max(1);
    let gap_target = opts.gap_tol.ln_1p();

    let mut trace_records = Vec::new();
    let mut iterations: u64 = 0;

    // Iteration 0: P = I.
    let log_nu0: f64 = norms2.iter().map(|&x| x.ln()).sum();
    let gap0 = evaluate_gap(v, &norms2)?;
    iterations += 1;
    trace_records.push(IterateRecord { log_nu: log_nu0, log_mu_bound: log_nu0 + gap0.log_gap });
    if gap0.log_gap <= gap_target {
        let u_factor: Vec<Vec<Complex64>> = (0..n)
            .map(|j| {
                let mut e = vec![Complex64::new(0.0, 0.0); n];
                e[j] = Complex64::new(1.0, 0.0);
                e
            })
            .collect();
        return Ok(RelaxationSolution {
            p: HermitianMatrix::identity(n),
            u_factor,
            log_nu: log_nu0,
            log_mu_bound: log_nu0 + gap0.log_gap,
            gap_ratio: gap0.log_gap.exp(),
            iterations,
            converged: true,
            iterate_trace: trace_records,
        });
    }

    // Initial frame: top eigenvectors of the gradient at P = I, plus
    // coverage for every form.
    let k0 = (((n + 1) as f64).sqrt().ceil() as usize + 1).min(n);
    let mut frame = Frame {
        b: gap0.eig.eigenvectors[..k0].to_vec(),
        h: Vec::new(),
    };
    repair_coverage(&mut frame.b, v);
    let m0 = frame.m();
    frame.h = vec![Complex64::new(0.0, 0.0); m0 * m0];
    for k in 0..m0 {
        frame.h[k * m0 + k] = Complex64::new(n as f64 / m0 as f64, 0.0);
    }

    let m_cap = (2 * (((n + 1) as f64).sqrt().ceil() as usize)).max(12);
    let mut best: Option<(f64, Frame, f64)> = None; // (log_nu, frame, log_gap)
    let mut best_log_nu = log_nu0;

    while iterations < max_iter {
        // Cap the working dimension: keep the top eigendirections of H.
        if frame.m() > m_cap {
            let eig = eigh_raw(frame.m(), &frame.h)?;
            let cols: Vec<&[Complex64]> =
                eig.eigenvectors[..m_cap].iter().map(|w| w.as_slice()).collect();
            frame.b = rotate_frame(&frame.b, &cols);
            let mut hw: Vec<f64> = eig.eigenvalues[..m_cap].to_vec();
            let lam_max = hw[0];
            if repair_coverage(&mut frame.b, v) > 0 {
                hw.resize(frame.m(), 1e-6 * lam_max);
            }
            let m = frame.m();
            let tr: f64 = hw.iter().sum();
            frame.h = vec![Complex64::new(0.0, 0.0); m * m];
            for (k, &w) in hw.iter().enumerate() {
                frame.h[k * m + k] = Complex64::new(w * n as f64 / tr, 0.0);
            }
        }

        // Fully-corrective solve on the current span; on a cone-departure
        // failure, repair coverage and restart the block from scaled identity.
        let us = frame.subspace_vectors(v);
        match subspace_solve(&us, &frame.h, n) {
            Ok(h) => frame.h = h,
            Err(Error::Numeric(_)) => {
                repair_coverage(&mut frame.b, v);
                let m = frame.m();
                let mut h = vec![Complex64::new(0.0, 0.0); m * m];
                for k in 0..m {
                    h[k * m + k] = Complex64::new(n as f64 / m as f64, 0.0);
                }
                let us = frame.subspace_vectors(v);
                frame.h = subspace_solve(&us, &h, n)?;
            }
            Err(e) => return Err(e),
        }

        // Prune directions that carry no mass, then re-solve on the span.
        {
            let eig = eigh_raw(frame.m(), &frame.h)?;
            let lam_max = eig.eigenvalues[0];
            let kept: Vec<usize> =
                (0..frame.m()).filter(|&j| eig.eigenvalues[j] > 1e-8 * lam_max).collect();
            if kept.len() < frame.m() {
                let cols: Vec<&[Complex64]> =
                    kept.iter().map(|&j| eig.eigenvectors[j].as_slice()).collect();
                frame.b = rotate_frame(&frame.b, &cols);
                let mut hw: Vec<f64> = kept.iter().map(|&j| eig.eigenvalues[j]).collect();
                let seed = 1e-6 * hw.iter().cloned().fold(f64::MIN, f64::max);
                let added = repair_coverage(&mut frame.b, v);
                for _ in 0..added {
                    hw.push(seed);
                }
                let m = frame.m();
                let tr: f64 = hw.iter().sum();
                let mut h = vec![Complex64::new(0.0, 0.0); m * m];
                for k in 0..m {
                    h[k * m + k] = Complex64::new(hw[k] * n as f64 / tr, 0.0);
                }
                let us = frame.subspace_vectors(v);
                frame.h = subspace_solve(&us, &h, n)?;
            }
        }

        // Gap evaluation (doubles as the linear minimization oracle).
        let q = frame.forms(v);
        check_form_floor(&q, opts.min_form_floor)?;
        let gap = evaluate_gap(v, &q)?;
        iterations += 1;
        let log_nu: f64 = q.iter().map(|&x| x.ln()).sum();
        if log_nu > best_log_nu {
            best_log_nu = log_nu;
            best =
                Some((log_nu, Frame { b: frame.b.clone(), h: frame.h.clone() }, gap.log_gap));
        }
        trace_records
            .push(IterateRecord { log_nu: best_log_nu, log_mu_bound: log_nu + gap.log_gap });
        if gap.log_gap <= gap_target {
            return finish_solution(v, frame, log_nu, gap.log_gap, iterations, true, trace_records);
        }
        if iterations >= max_iter {
            break;
        }

        // Conditional-gradient step: vertex n·ww† from the top eigenvector of
        // the gradient, exact line search for its weight, and enrichment of
        // the span with the leading gradient eigenvectors so the corrective
        // solve can rotate the face.
        let w_top = &gap.eig.eigenvectors[0];
        let s: Vec<f64> =
            (0..n).map(|i| n as f64 * cdot(w_top, v.column(i)).norm_sqr()).collect();
        let t_star = exact_line_search(&q, &s);
        let rank = {
            let eig = eigh_raw(frame.m(), &frame.h)?;
            let lam_max = eig.eigenvalues[0];
            eig.eigenvalues.iter().filter(|&&x| x > 1e-8 * lam_max).count()
        };
        let k_add = (rank + 1).min(n).min(8);
        let m_before = frame.m();
        for j in 0..k_add {
            orth_append(&mut frame.b, &gap.eig.eigenvectors[j]);
        }
        let m_after = frame.m();
        if m_after > m_before {
            // Warm start: the line-searched conditional-gradient iterate
            // (1 - t)·H + t·n·ŵŵ† expressed in the enlarged frame, with a
            // small uniform seed on the remaining new directions.
            let extra = m_after - m_before;
            let w_hat: Vec<Complex64> = frame.b.iter().map(|col| cdot(col, w_top)).collect();
            let seeded = if extra > 1 { 1e-3 } else { 0.0 };
            let t_eff = t_star.clamp(1e-4, 1.0 - 1e-3) .min(1.0 - seeded - 1e-4);
            let old_scale = 1.0 - t_eff - seeded;
            let mut h = vec![Complex64::new(0.0, 0.0); m_after * m_after];
            for k in 0..m_before {
                for l in 0..m_before {
                    h[k * m_after + l] = frame.h[k * m_before + l] * old_scale;
                }
            }
            for k in 0..m_after {
                for l in 0..m_after {
                    h[k * m_after + l] += t_eff * n as f64 * w_hat[k] * w_hat[l].conj();
                }
            }
            if extra > 1 {
                for k in m_before..m_after {
                    h[k * m_after + k] += Complex64::new(seeded * n as f64 / extra as f64, 0.0);
                }
            }
            // Exact trace n.
            let tr: f64 = (0..m_after).map(|k| h[k * m_after + k].re).sum();
            let scale = n as f64 / tr;
            for z in h.iter_mut() {
                *z *= scale;
            }
            frame.h = h;
        } else {
            // Nothing appended: the subspace solve was marginally inexact.
            // Nudge into the interior and retry.
            let m = frame.m();
            for k in 0..m {
                frame.h[k * m + k] += Complex64::new(1e-9 * n as f64 / m as f64, 0.0);
            }
            let tr: f64 = (0..m).map(|k| frame.h[k * m + k].re).sum();
            let scale = n as f64 / tr;
            for z in frame.h.iter_mut() {
                *z *= scale;
            }
        }
    }

    match best {
        Some((log_nu, frame, log_gap)) => {
            finish_solution(v, frame, log_nu, log_gap, iterations, false, trace_records)
        }
        // No outer round improved on P = I (or none ran): fall back to it.
        None => {
            let u_factor: Vec<Vec<Complex64>> = (0..n)
                .map(|j| {
                    let mut e = vec![Complex64::new(0.0, 0.0); n];
                    e[j] = Complex64::new(1.0, 0.0);
                    e
                })
                .collect();
            Ok(RelaxationSolution {
                p: HermitianMatrix::identity(n),
                u_factor,
                log_nu: log_nu0,
                log_mu_bound: log_nu0 + gap0.log_gap,
                gap_ratio: gap0.log_gap.exp(),
                iterations,
                converged: false,
                iterate_trace: trace_records,
            })
        }
    }
}

fn finish_solution(
    v: &GramFactor,
    frame: Frame,
    log_nu: f64,
    log_gap: f64,
    iterations: u64,
    converged: bool,
    iterate_trace: Vec<IterateRecord>,
) -> Result<RelaxationSolution> {
    let n = v.dim();
    let m = frame.m();
    let eig = eigh_raw(m, &frame.h)?;
    let mut u_factor = Vec::new();
    for (ew, wvec) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
        if *ew <= 0.0 {
            continue;
        }
        let s = ew.sqrt();
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for (c, coeff) in wvec.iter().enumerate() {
            for (row, out) in col.iter_mut().enumerate() {
                *out += frame.b[c][row] * coeff * s;
            }
        }
        u_factor.push(col);
    }
    let p = HermitianMatrix::from_factor_columns(n, &u_factor)?;
    Ok(RelaxationSolution {
        p,
        u_factor,
        log_nu,
        log_mu_bound: log_nu + log_gap,
        gap_ratio: log_gap.exp(),
        iterations,
        converged,
        iterate_trace,
    })
}

/// Builds the diagonal certificate at an arbitrary feasible P:
/// alpha_i = c / (v_i†Pv_i) with the geometric normalization prod alpha = 1,
/// lambda = (1 + delta)·lambda_max(sum_i alpha_i v_i v_i†), d_i = lambda/alpha_i,
/// validated by an explicit Löwner comparison against A = V†V.
pub fn extract_diagonal_certificate(
    v: &GramFactor,
    p: &HermitianMatrix,
) -> Result<DiagonalCertificate> {
    let n = v.dim();
    if p.dim() != n {
        return Err(Error::DimensionMismatch { left: p.dim(), right: n });
    }
    let q: Vec<f64> = (0..n).map(|i| p.quadratic_form(v.column(i))).collect();
    for (i, &qi) in q.iter().enumerate() {
        if qi.is_nan() || qi <= 0.0 {
            return Err(Error::FormUnderflow { index: i, floor: 0.0 });
        }
    }
    let log_q: Vec<f64> = q.iter().map(|&x| x.ln()).collect();
    let log_c = log_q.iter().sum::<f64>() / n as f64;
    let alpha: Vec<f64> = log_q.iter().map(|&lq| (log_c - lq).exp()).collect();
    let gap = evaluate_gap(v, &q)?;
    // lambda = (1+delta) · c · lambda_max(G) since sum alpha_i v_i v_i† = c·G.
    let log_lambda = log_c + gap.eig.eigenvalues[0].max(1e-300).ln() + DELTA_INFLATION.ln_1p();
    let lambda = log_lambda.exp();
    let d: Vec<f64> = alpha.iter().map(|&ai| lambda / ai).collect();
    let log_alpha_sum: f64 = log_q.iter().map(|&lq| log_c - lq).sum();
    let log_mu_bound = n as f64 * log_lambda - log_alpha_sum;
    let a = v.gram_matrix();
    let d_mat = HermitianMatrix::diagonal(&d);
    let validated = loewner_leq(&a, &d_mat, 1e-9)?;
    Ok(DiagonalCertificate { d, lambda, alpha, validated, log_mu_bound })
}

/// Full relaxation pipeline: PSD check, Gram factorization, zero-diagonal
/// short-circuit, dual solve, certificate extraction.
pub fn rel(a: &HermitianMatrix, opts: &SolveOptions) -> Result<RelResult> {
    let n = a.dim();
    let psd = crate::hermitian::check_hpsd(a, 1e-9)?;
    if !psd.is_psd {
        return Err(Error::NotPsd { eigenvalue: psd.min_eigenvalue, tol: 1e-9 });
    }
    let v = crate::hermitian::factorize_gram(a)?;

    // Zero diagonal forces a zero row/column in a PSD matrix: rel = per = 0,
    // certified by a diagonal with zeros at those positions.
    if (0..n).any(|i| a.get(i, i).re == 0.0) {
        let lam_max = psd.max_eigenvalue.max(0.0) * (1.0 + DELTA_INFLATION);
        let d: Vec<f64> =
            (0..n).map(|i| if a.get(i, i).re == 0.0 { 0.0 } else { lam_max }).collect();
        let alpha: Vec<f64> =
            d.iter().map(|&di| if di == 0.0 { f64::INFINITY } else { lam_max / di }).collect();
        let d_mat = HermitianMatrix::diagonal(&d);
        let validated = loewner_leq(a, &d_mat, 1e-9)?;
        let certificate = DiagonalCertificate {
            d,
            lambda: lam_max,
            alpha,
            validated,
            log_mu_bound: f64::NEG_INFINITY,
        };
        let u_factor: Vec<Vec<Complex64>> = (0..n)
            .map(|j| {
                let mut e = vec![Complex64::new(0.0, 0.0); n];
                e[j] = Complex64::new(1.0, 0.0);
                e
            })
            .collect();
        let solution = RelaxationSolution {
            p: HermitianMatrix::identity(n),
            u_factor,
            log_nu: f64::NEG_INFINITY,
            log_mu_bound: f64::NEG_INFINITY,
            gap_ratio: 1.0,
            iterations: 0,
            converged: true,
            iterate_trace: vec![],
        };
        return Ok(RelResult { value_log: f64::NEG_INFINITY, solution, certificate, gram: v });
    }

    let solution = solve_dual(&v, opts)?;
    let certificate = extract_diagonal_certificate(&v, &solution.p)?;
    Ok(RelResult { value_log: solution.log_nu, solution, certificate, gram: v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::factorize_gram;
    use crate::rng::{complex_standard_normal, substream_rng};

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn circulant_211() -> HermitianMatrix {
        HermitianMatrix::from_rows(&[
            vec![r(2.0), r(1.0), r(1.0)],
            vec![r(1.0), r(2.0), r(1.0)],
            vec![r(1.0), r(1.0), r(2.0)],
        ])
        .unwrap()
    }

    /// Random HPSD instance A = V†V with standard complex Gaussian V.
    fn random_hpsd(n: usize, seed: u64) -> HermitianMatrix {
        let mut rng = substream_rng(seed, 0);
        let cols: Vec<Vec<Complex64>> =
            (0..n).map(|_| (0..n).map(|_| complex_standard_normal(&mut rng)).collect()).collect();
        GramFactor::from_columns(cols).unwrap().gram_matrix()
    }

    #[test]
    fn diagonal_instances_converge_at_identity() {
        let a = HermitianMatrix::diagonal(&[1.0, 2.0, 3.0, 4.0]);
        let out = rel(&a, &SolveOptions::default()).unwrap();
        let want = (24.0f64).ln();
        assert!((out.value_log - want).abs() < 1e-9, "{} vs {want}", out.value_log);
        assert!(out.solution.converged);
        assert_eq!(out.solution.iterations, 1);
        assert!(out.certificate.validated);
    }

    #[test]
    fn identity_has_rel_one() {
        let out = rel(&HermitianMatrix::identity(4), &SolveOptions::default()).unwrap();
        assert!(out.value_log.abs() < 1e-9);
    }

    #[test]
    fn all_ones_2x2_has_rel_four() {
        let a = HermitianMatrix::from_rows(&[vec![r(1.0), r(1.0)], vec![r(1.0), r(1.0)]]).unwrap();
        let out = rel(&a, &SolveOptions::default()).unwrap();
        assert!((out.value_log - 4.0f64.ln()).abs() < 1e-6, "{}", out.value_log);
        assert!(out.solution.converged);
        assert!(out.certificate.validated);
    }

    #[test]
    fn circulant_211_has_rel_sixtyfour() {
        let out = rel(&circulant_211(), &SolveOptions::default()).unwrap();
        assert!((out.value_log - 64.0f64.ln()).abs() < 1e-6, "{}", out.value_log);
        assert!(out.solution.gap_ratio <= 1.0 + 1e-6);
    }

    #[test]
    fn two_by_two_correlation_matches_closed_form() {
        // rel([[1, c], [c, 1]]) = (1 + c)^2.
        for &c in &[0.0, 0.3, 0.7, 0.95] {
            let a =
                HermitianMatrix::from_rows(&[vec![r(1.0), r(c)], vec![r(c), r(1.0)]]).unwrap();
            let out = rel(&a, &SolveOptions::default()).unwrap();
            let want = 2.0 * (1.0 + c).ln();
            assert!((out.value_log - want).abs() < 1e-6, "c = {c}: {} vs {want}", out.value_log);
        }
    }

    #[test]
    fn zero_diagonal_short_circuits_with_valid_certificate() {
        let a = HermitianMatrix::from_rows(&[vec![r(0.0), r(0.0)], vec![r(0.0), r(2.0)]]).unwrap();
        let out = rel(&a, &SolveOptions::default()).unwrap();
        assert_eq!(out.value_log, f64::NEG_INFINITY);
        assert!(out.certificate.validated);
        assert_eq!(out.certificate.d[0], 0.0);
        assert!(out.certificate.d[1] >= 2.0);
        assert_eq!(out.certificate.log_mu_bound, f64::NEG_INFINITY);
    }

    #[test]
    fn certificate_at_identity_for_identity_matrix() {
        let v = factorize_gram(&HermitianMatrix::identity(3)).unwrap();
        let cert = extract_diagonal_certificate(&v, &HermitianMatrix::identity(3)).unwrap();
        assert!(cert.validated);
        for (&ai, &di) in cert.alpha.iter().zip(&cert.d) {
            assert!((ai - 1.0).abs() < 1e-10);
            assert!((di - 1.0).abs() < 1e-7);
        }
        assert!((cert.lambda - 1.0).abs() < 1e-7);
        assert!(cert.log_mu_bound.abs() < 1e-6);
    }

    #[test]
    fn certificate_at_ones_projector_for_all_ones() {
        // P = 11† (trace 2) for the all-ones 2x2: alpha = 1, lambda = 2,
        // d = (2, 2), mu-bound = 4.
        let a = HermitianMatrix::from_rows(&[vec![r(1.0), r(1.0)], vec![r(1.0), r(1.0)]]).unwrap();
        let v = factorize_gram(&a).unwrap();
        let p = HermitianMatrix::from_rows(&[vec![r(1.0), r(1.0)], vec![r(1.0), r(1.0)]]).unwrap();
        let cert = extract_diagonal_certificate(&v, &p).unwrap();
        assert!(cert.validated);
        assert!((cert.lambda - 2.0).abs() < 1e-6);
        assert!((cert.log_mu_bound - 4.0f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn certificate_at_ones_projector_for_circulant() {
        let v = factorize_gram(&circulant_211()).unwrap();
        let mut p_raw = Matrix::zeros(3);
        for i in 0..3 {
            for j in 0..3 {
                p_raw.set(i, j, r(1.0));
            }
        }
        let p = HermitianMatrix::new(p_raw).unwrap();
        let cert = extract_diagonal_certificate(&v, &p).unwrap();
        assert!(cert.validated);
        for &di in &cert.d {
            assert!((di - 4.0).abs() < 1e-6);
        }
        assert!((cert.log_mu_bound - 64.0f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn certificate_is_valid_at_non_optimal_points() {
        // Any feasible P yields a genuine upper bound; check a skewed one.
        let a = random_hpsd(4, 11);
        let v = factorize_gram(&a).unwrap();
        let p = HermitianMatrix::diagonal(&[2.0, 1.0, 0.5, 0.5]);
        let cert = extract_diagonal_certificate(&v, &p).unwrap();
        assert!(cert.validated);
        let opt = rel(&a, &SolveOptions::default()).unwrap();
        assert!(cert.log_mu_bound >= opt.value_log - 1e-9);
    }

    #[test]
    fn random_instances_converge_with_weak_duality() {
        for n in [2usize, 3, 5, 8] {
            for seed in 0..3u64 {
                let a = random_hpsd(n, 100 + seed * 7 + n as u64);
                let out = rel(&a, &SolveOptions::default()).unwrap();
                let sol = &out.solution;
                assert!(sol.converged, "n={n} seed={seed} failed to converge");
                assert!(sol.gap_ratio <= 1.0 + 1e-6, "gap {}", sol.gap_ratio);
                assert!(sol.gap_ratio >= 1.0);
                // Weak duality at every recorded iterate.
                for rec in &sol.iterate_trace {
                    assert!(rec.log_nu <= rec.log_mu_bound + 1e-9);
                }
                // Monotone best objective.
                for w in sol.iterate_trace.windows(2) {
                    assert!(w[1].log_nu >= w[0].log_nu - 1e-12);
                }
                // Feasibility of the returned point.
                assert!((sol.p.trace() - n as f64).abs() <= 1e-9 * n as f64);
                let psd = crate::hermitian::check_hpsd(&sol.p, 1e-9).unwrap();
                assert!(psd.is_psd);
                // Certificate validates and dominates the primal value.
                assert!(out.certificate.validated);
                assert!(out.certificate.log_mu_bound >= sol.log_nu - 1e-9);
            }
        }
    }

    #[test]
    fn scaling_covariance() {
        let a = random_hpsd(4, 21);
        let base = rel(&a, &SolveOptions::default()).unwrap().value_log;
        for &t in &[0.5f64, 2.0] {
            let mut scaled = Matrix::zeros(4);
            for i in 0..4 {
                for j in 0..4 {
                    scaled.set(i, j, a.get(i, j) * t);
                }
            }
            let at = HermitianMatrix::new(scaled).unwrap();
            let got = rel(&at, &SolveOptions::default()).unwrap().value_log;
            let want = base + 4.0 * t.ln();
            assert!((got - want).abs() < 1e-6, "t = {t}: {got} vs {want}");
        }
    }

    #[test]
    fn factorization_invariance_under_unitary_rotation() {
        let a = random_hpsd(4, 33);
        let v = factorize_gram(&a).unwrap();
        // Random unitary via Gram-Schmidt on a seeded Gaussian matrix.
        let mut rng = substream_rng(77, 0);
        let mut qcols: Vec<Vec<Complex64>> = Vec::new();
        while qcols.len() < 4 {
            let cand: Vec<Complex64> = (0..4).map(|_| complex_standard_normal(&mut rng)).collect();
            let nv = norm2(&cand).sqrt();
            let unit: Vec<Complex64> = cand.iter().map(|z| z / nv).collect();
            orth_append(&mut qcols, &unit);
        }
        // Columns of Q·V: (QV)_i = Q v_i.
        let rotated: Vec<Vec<Complex64>> = (0..4)
            .map(|i| {
                let vi = v.column(i);
                (0..4)
                    .map(|row| {
                        let mut s = Complex64::new(0.0, 0.0);
                        for (c, qc) in qcols.iter().enumerate() {
                            s += qc[row] * vi[c];
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        let v2 = GramFactor::from_columns(rotated).unwrap();
        let s1 = solve_dual(&v, &SolveOptions::default()).unwrap();
        let s2 = solve_dual(&v2, &SolveOptions::default()).unwrap();
        assert!((s1.log_nu - s2.log_nu).abs() < 1e-6, "{} vs {}", s1.log_nu, s2.log_nu);
    }

    #[test]
    fn rank_deficient_and_scaled_instances_converge() {
        // Rank-deficient: Gram factor with zeroed tail rows.
        let mut rng = substream_rng(5, 0);
        let cols: Vec<Vec<Complex64>> = (0..6)
            .map(|_| {
                (0..6)
                    .map(|row| {
                        if row < 3 {
                            complex_standard_normal(&mut rng)
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    })
                    .collect()
            })
            .collect();
        let a = GramFactor::from_columns(cols).unwrap().gram_matrix();
        let out = rel(&a, &SolveOptions::default()).unwrap();
        assert!(out.solution.converged);

        // Extreme uniform scaling in both directions.
        for &scale in &[1e-6f64, 1e6] {
            let base = random_hpsd(5, 7);
            let mut scaled = Matrix::zeros(5);
            for i in 0..5 {
                for j in 0..5 {
                    scaled.set(i, j, base.get(i, j) * scale);
                }
            }
            let at = HermitianMatrix::new(scaled).unwrap();
            let out = rel(&at, &SolveOptions::default()).unwrap();
            assert!(out.solution.converged, "scale {scale}");
            assert!(out.certificate.validated, "scale {scale}");
        }
    }

    #[test]
    fn near_rank_one_instances_converge_to_tight_bound() {
        let mut rng = substream_rng(9, 0);
        let v: Vec<Complex64> = (0..5).map(|_| complex_standard_normal(&mut rng)).collect();
        for &eps in &[1e-8f64, 1e-12] {
            let mut m = Matrix::zeros(5);
            for i in 0..5 {
                for j in 0..5 {
                    let base = v[i] * v[j].conj();
                    let diag = if i == j { eps } else { 0.0 };
                    m.set(i, j, base + r(diag));
                }
            }
            let a = HermitianMatrix::new(m).unwrap();
            let out = rel(&a, &SolveOptions::default()).unwrap();
            assert!(out.solution.converged, "eps {eps}");
        }
    }

    #[test]
    fn non_psd_input_is_rejected() {
        let a = HermitianMatrix::from_rows(&[vec![r(1.0), r(2.0)], vec![r(2.0), r(1.0)]]).unwrap();
        assert!(matches!(rel(&a, &SolveOptions::default()), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn subnormal_diagonal_triggers_form_floor() {
        let v = GramFactor::from_columns(vec![
            vec![r(1e-160), r(0.0)],
            vec![r(0.0), r(1e-160)],
        ])
        .unwrap();
        // ||v_i||^2 = 1e-320 is subnormal, below the default floor.
        assert!(matches!(
            solve_dual(&v, &SolveOptions::default()),
            Err(Error::FormUnderflow { .. })
        ));
    }

    #[test]
    fn line_search_brackets_known_optima() {
        // q = s: flat objective, derivative 0 at t = 0.
        assert_eq!(exact_line_search(&[1.0, 1.0], &[1.0, 1.0]), 0.0);
        // s dominates q: push all the way.
        assert!(exact_line_search(&[1.0, 1.0], &[3.0, 3.0]) > 1.0 - 1e-9);
        // Mixed: phi'(t) = 1/(1+t) - 1/(1-t·0.5)·0.5... verify against a
        // dense scan.
        let q = [1.0, 2.0];
        let s = [2.0, 1.0];
        let t = exact_line_search(&q, &s);
        let phi = |t: f64| ((1.0 - t) * q[0] + t * s[0]).ln() + ((1.0 - t) * q[1] + t * s[1]).ln();
        let mut best = (0.0, phi(0.0));
        for i in 0..=1000 {
            let tt = i as f64 / 1000.0 * 0.999;
            if phi(tt) > best.1 {
                best = (tt, phi(tt));
            }
        }
        assert!((t - best.0).abs() < 2e-3, "{t} vs {}", best.0);
    }
}
