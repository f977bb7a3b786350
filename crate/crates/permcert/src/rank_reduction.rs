//! Null-step rank reduction of a feasible dual point P: repeatedly moves
//! along a direction that is invisible to all n+1 defining functionals
//! (the forms v_i† P v_i and the trace) until the PSD boundary is hit,
//! dropping one rank per step. Terminates once r² <= n+1, i.e.
//! r <= floor(sqrt(n+1)), which improves the rounding factor since L_r is
//! increasing in r.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{eigh, GramFactor, HermitianMatrix, Matrix};

/// Relative tolerance on the null-direction residual ||M delta|| / sigma_max;
/// a candidate direction above it aborts the reduction.
const NULL_RESIDUAL_TOL: f64 = 1e-10;

/// Eigenvalues of I + t*Delta within this distance of zero are truncated
/// after the boundary step.
const BOUNDARY_TRUNCATION: f64 = 1e-12;

/// One boundary step of the reduction.
#[derive(Debug, Clone, Copy)]
pub struct ReductionStep {
    /// ||M delta|| / sigma_max for the chosen null direction.
    pub null_direction_residual: f64,
    /// The step length t with 1 + t*lambda_min(Delta) = 0.
    pub boundary_step: f64,
}

/// Audit record of a rank reduction.
#[derive(Debug, Clone)]
pub struct ReductionTrace {
    pub initial_rank: usize,
    pub final_rank: usize,
    pub steps: Vec<ReductionStep>,
    /// |log prod v_i†P'v_i - log prod v_i†Pv_i|.
    pub objective_drift: f64,
    /// True when a degenerate null-space solve aborted the reduction and the
    /// original point was returned.
    pub aborted: bool,
}

/// Number of eigenvalues exceeding tol * lambda_max(P).
pub fn numeric_rank(p: &HermitianMatrix, tol: f64) -> Result<usize> {
    let eig = eigh(p)?;
    let lam_max = eig.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    Ok(eig.eigenvalues.iter().filter(|&&x| x > tol * lam_max).count())
}

/// Low-rank factor columns of a PSD matrix: P = sum_j c_j c_j†, keeping
/// eigenvalues above tol * lambda_max.
pub fn low_rank_factor(p: &HermitianMatrix, tol: f64) -> Result<Vec<Vec<Complex64>>> {
    let eig = eigh(p)?;
    let lam_max = eig.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let mut cols = Vec::new();
    for (lam, vec) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
        if *lam > tol * lam_max && *lam > 0.0 {
            let s = lam.sqrt();
            cols.push(vec.iter().map(|z| z * s).collect());
        }
    }
    Ok(cols)
}

/// Real coordinates of the functional Delta -> Tr(M Delta) on r×r Hermitian
/// Delta, in the basis (diagonals; then Re/Im pairs for k < l).
fn functional_row(m_mat: &[Complex64], r: usize) -> Vec<f64> {
    let mut row: Vec<f64> = (0..r).map(|k| m_mat[k * r + k].re).collect();
    for k in 0..r {
        for l in (k + 1)..r {
            row.push(2.0 * m_mat[k * r + l].re);
            row.push(2.0 * m_mat[k * r + l].im);
        }
    }
    row
}

/// Hermitian Delta from its real coordinates.
fn unpack_direction(x: &[f64], r: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); r * r];
    for k in 0..r {
        out[k * r + k] = Complex64::new(x[k], 0.0);
    }
    let mut idx = r;
    for k in 0..r {
        for l in (k + 1)..r {
            let z = Complex64::new(x[idx], x[idx + 1]);
            out[k * r + l] = z;
            out[l * r + k] = z.conj();
            idx += 2;
        }
    }
    out
}

struct NullDirection {
    coords: Vec<f64>,
    residual: f64,
}

/// A unit vector in the kernel of the functional matrix M (rows = packed
/// functionals), found by projecting canonical basis vectors onto the
/// orthogonal complement of the row space; the relative residual
/// ||M x|| / sigma_max is reported for validation against the tolerance.
fn null_direction(rows: &[Vec<f64>], dim: usize) -> Result<NullDirection> {
    // sigma_max via the small Gram matrix of the rows.
    let d = rows.len();
    let mut gram = Matrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            let s: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
            gram.set(i, j, Complex64::new(s, 0.0));
        }
    }
    let sigma_max = {
        let eig = eigh(&HermitianMatrix::new(gram)?)?;
        eig.eigenvalues.first().copied().unwrap_or(0.0).max(0.0).sqrt()
    };
    if sigma_max == 0.0 {
        return Err(Error::Numeric("all functionals vanished in rank reduction".into()));
    }
    // Orthonormal basis of the row space (double Gram-Schmidt; near-zero
    // rows are dependent and dropped).
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        for _ in 0..2 {
            for b in &basis {
                let c: f64 = b.iter().zip(&r).map(|(x, y)| x * y).sum();
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= c * bi;
                }
            }
        }
        let nr = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nr > 1e-12 * sigma_max {
            for ri in r.iter_mut() {
                *ri /= nr;
            }
            basis.push(r);
        }
    }
    // Project canonical directions until one keeps substantial mass outside
    // the row space (at least one must, since the kernel is nontrivial).
    for a in 0..dim {
        let mut x = vec![0.0f64; dim];
        x[a] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let c: f64 = b.iter().zip(&x).map(|(p, q)| p * q).sum();
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi -= c * bi;
                }
            }
        }
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nx < 1e-6 {
            continue;
        }
        for xi in x.iter_mut() {
            *xi /= nx;
        }
        let mut residual = 0.0f64;
        for row in rows {
            let v: f64 = row.iter().zip(&x).map(|(p, q)| p * q).sum();
            residual += v * v;
        }
        let residual = residual.sqrt() / sigma_max;
        return Ok(NullDirection { coords: x, residual });
    }
    Err(Error::Numeric("no null direction found in rank reduction".into()))
}

/// Reduces the rank of a feasible P while preserving all forms v_i†Pv_i and
/// the trace; `tol` is the relative eigenvalue cut used to factor P.
/// On a degenerate null-space solve the original P is returned with
/// `trace.aborted` set.
pub fn reduce_rank(
    v: &GramFactor,
    p: &HermitianMatrix,
    tol: f64,
) -> Result<(HermitianMatrix, ReductionTrace)> {
    let n = v.dim();
    if p.dim() != n {
        return Err(Error::DimensionMismatch { left: p.dim(), right: n });
    }
    let q0 = v.form_values(p);
    for (i, &qi) in q0.iter().enumerate() {
        if qi.is_nan() || qi <= 0.0 {
            return Err(Error::FormUnderflow { index: i, floor: 0.0 });
        }
    }
    let log_obj0: f64 = q0.iter().map(|&x| x.ln()).sum();

    let mut u = low_rank_factor(p, tol)?;
    let initial_rank = u.len();
    let d = n + 1;
    let mut steps = Vec::new();

    while u.len() * u.len() > d {
        let r = u.len();
        // Packed functionals on r×r Hermitian space: u_i u_i† with
        // u_i = U†v_i, plus U†U for the trace.
        let mut rows = Vec::with_capacity(d);
        for i in 0..n {
            let vi = v.column(i);
            let ui: Vec<Complex64> = u
                .iter()
                .map(|col| col.iter().zip(vi).map(|(a, b)| a.conj() * b).sum())
                .collect();
            let mut outer = vec![Complex64::new(0.0, 0.0); r * r];
            for k in 0..r {
                for l in 0..r {
                    outer[k * r + l] = ui[k] * ui[l].conj();
                }
            }
            rows.push(functional_row(&outer, r));
        }
        let mut utu = vec![Complex64::new(0.0, 0.0); r * r];
        for k in 0..r {
            for l in 0..r {
                utu[k * r + l] = u[k].iter().zip(&u[l]).map(|(a, b)| a.conj() * b).sum();
            }
        }
        rows.push(functional_row(&utu, r));

        let nd = null_direction(&rows, r * r)?;
        if nd.residual > NULL_RESIDUAL_TOL {
            // Degenerate solve: keep the original point, flag the trace.
            steps.push(ReductionStep {
                null_direction_residual: nd.residual,
                boundary_step: 0.0,
            });
            return Ok((
                p.clone(),
                ReductionTrace {
                    initial_rank,
                    final_rank: initial_rank,
                    steps,
                    objective_drift: 0.0,
                    aborted: true,
                },
            ));
        }
        let delta = unpack_direction(&nd.coords, r);
        let mut dm = Matrix::zeros(r);
        for k in 0..r {
            for l in 0..r {
                dm.set(k, l, delta[k * r + l]);
            }
        }
        let eig = eigh(&HermitianMatrix::new(dm)?)?;
        let lam_min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if lam_min >= -1e-14 {
            // A weighted-traceless nonzero direction must have a negative
            // eigenvalue; numerically losing it counts as degenerate.
            steps.push(ReductionStep {
                null_direction_residual: nd.residual,
                boundary_step: 0.0,
            });
            return Ok((
                p.clone(),
                ReductionTrace {
                    initial_rank,
                    final_rank: initial_rank,
                    steps,
                    objective_drift: 0.0,
                    aborted: true,
                },
            ));
        }
        let t = -1.0 / lam_min;
        steps.push(ReductionStep { null_direction_residual: nd.residual, boundary_step: t });
        // New factor columns: U Q_j sqrt(1 + t*delta_j) for surviving j.
        let mut next = Vec::new();
        for (lam, qvec) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
            let s = 1.0 + t * lam;
            if s <= BOUNDARY_TRUNCATION {
                continue;
            }
            let sq = s.sqrt();
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            for (c, coeff) in qvec.iter().enumerate() {
                for (row, out) in col.iter_mut().enumerate() {
                    *out += u[c][row] * coeff * sq;
                }
            }
            next.push(col);
        }
        if next.len() >= u.len() {
            return Err(Error::Numeric("boundary step failed to reduce rank".into()));
        }
        u = next;
    }

    let p_new = HermitianMatrix::from_factor_columns(n, &u)?;
    let q1 = v.form_values(&p_new);
    for (i, &qi) in q1.iter().enumerate() {
        if qi.is_nan() || qi <= 0.0 {
            return Err(Error::FormUnderflow { index: i, floor: 0.0 });
        }
    }
    let log_obj1: f64 = q1.iter().map(|&x| x.ln()).sum();
    Ok((
        p_new,
        ReductionTrace {
            initial_rank,
            final_rank: u.len(),
            steps,
            objective_drift: (log_obj1 - log_obj0).abs(),
            aborted: false,
        },
    ))
}
