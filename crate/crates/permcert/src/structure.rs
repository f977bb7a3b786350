//! Structural shortcuts: circulant matrices admit a closed-form relaxation
//! value n*log(lambda_max) with a rank-1 optimal point, and the rank of A
//! itself pre-bounds the rounding factor before any solve.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::hermitian::{check_hpsd, HermitianMatrix};
use crate::rank_reduction::numeric_rank;

/// Closed-form solution for a circulant instance.
#[derive(Debug, Clone)]
pub struct CirculantSolution {
    /// Rank-1 optimal point w w† scaled to trace n.
    pub p_star: HermitianMatrix,
    /// n * log(lambda_max(A)).
    pub log_rel: f64,
}

/// True iff A_{ij} depends only on (j - i) mod n, within `tol` scaled by the
/// largest entry magnitude.
pub fn is_circulant(a: &HermitianMatrix, tol: f64) -> bool {
    let n = a.dim();
    let m = a.matrix();
    let mut scale: f64 = 1.0;
    for i in 0..n {
        for j in 0..n {
            scale = scale.max(m.get(i, j).norm());
        }
    }
    for i in 0..n {
        for j in 0..n {
            let k = (j + n - i) % n;
            if (m.get(i, j) - m.get(0, k)).norm() > tol * scale {
                return false;
            }
        }
    }
    true
}

/// Eigenvalues of a circulant matrix by direct transform of its first row:
/// lambda_m = sum_k c_k e^{2 pi i k m / n}. Real for Hermitian input.
fn circulant_eigenvalues(a: &HermitianMatrix) -> Vec<f64> {
    let n = a.dim();
    let m = a.matrix();
    let first_row: Vec<Complex64> = (0..n).map(|k| m.get(0, k)).collect();
    (0..n)
        .map(|j| {
            let mut lam = Complex64::new(0.0, 0.0);
            for (k, c) in first_row.iter().enumerate() {
                let theta = TAU * (k * j) as f64 / n as f64;
                lam += c * Complex64::new(theta.cos(), theta.sin());
            }
            lam.re
        })
        .collect()
}

/// Closed-form relaxation for a circulant HPSD matrix: the diagonal
/// certificate is lambda_max * I, the value is n*log(lambda_max), and a
/// rank-1 optimal point is n * w w† for the Fourier eigenvector w attaining
/// lambda_max. Complementary slackness Tr(P* A) = n*lambda_max is verified
/// before returning.
pub fn solve_circulant(a: &HermitianMatrix) -> Result<CirculantSolution> {
    let n = a.dim();
    if !is_circulant(a, 1e-9) {
        return Err(Error::NotCirculant { tol: 1e-9 });
    }
    check_hpsd(a, 1e-9)?;
    let eigs = circulant_eigenvalues(a);
    let mut best = 0usize;
    for (j, &lam) in eigs.iter().enumerate() {
        if lam > eigs[best] {
            best = j;
        }
    }
    let lam_max = eigs[best];
    if lam_max <= 0.0 {
        return Err(Error::InvalidArgument("circulant matrix is zero".into()));
    }
    // Fourier eigenvector for index `best`, scaled so ww† has trace n
    // (each component has modulus 1).
    let w: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = TAU * (k * best) as f64 / n as f64;
            Complex64::new(theta.cos(), theta.sin())
        })
        .collect();
    let p_star = HermitianMatrix::from_factor_columns(n, std::slice::from_ref(&w))?;
    // Complementary slackness: Tr(P* A) = w†Aw must equal n * lambda_max.
    let trace_pa = a.quadratic_form(&w);
    let target = n as f64 * lam_max;
    if (trace_pa - target).abs() > 1e-8 * target {
        return Err(Error::Numeric(format!(
            "complementary slackness violated: Tr(P*A) = {trace_pa}, expected {target}"
        )));
    }
    Ok(CirculantSolution { p_star, log_rel: n as f64 * lam_max.ln() })
}

/// Structural pre-bound on the rank of any optimal point: rank(P*) never
/// needs to exceed rank(A), so the rounding factor L_r can be bounded
/// before solving.
pub fn rank_bound_structural(a: &HermitianMatrix) -> Result<usize> {
    check_hpsd(a, 1e-9)?;
    numeric_rank(a, 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::GramFactor;
    use crate::relaxation::{rel, SolveOptions};
    use crate::rng::{complex_standard_normal, substream_rng};
    use rand::Rng;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn circulant_from_first_row(row: &[Complex64]) -> HermitianMatrix {
        let n = row.len();
        let rows: Vec<Vec<Complex64>> =
            (0..n).map(|i| (0..n).map(|j| row[(j + n - i) % n]).collect()).collect();
        HermitianMatrix::from_rows(&rows).unwrap()
    }

    /// Random HPSD circulant built from nonnegative Fourier eigenvalues.
    fn random_psd_circulant(n: usize, seed: u64) -> HermitianMatrix {
        let mut rng = substream_rng(seed, 0);
        let eigs: Vec<f64> = (0..n).map(|_| 0.1 + rng.gen::<f64>()).collect();
        let row: Vec<Complex64> = (0..n)
            .map(|k| {
                let mut c = Complex64::new(0.0, 0.0);
                for (m, &lam) in eigs.iter().enumerate() {
                    let theta = -TAU * (k * m) as f64 / n as f64;
                    c += lam * Complex64::new(theta.cos(), theta.sin());
                }
                c / n as f64
            })
            .collect();
        circulant_from_first_row(&row)
    }

    #[test]
    fn circulant_detection_examples() {
        let c = circulant_from_first_row(&[r(2.0), r(1.0), r(1.0)]);
        assert!(is_circulant(&c, 1e-9));
        assert!(is_circulant(&HermitianMatrix::identity(4), 1e-9));
        let d = HermitianMatrix::diagonal(&[1.0, 2.0]);
        assert!(!is_circulant(&d, 1e-9));
    }

    #[test]
    fn identity_circulant_closed_form() {
        let sol = solve_circulant(&HermitianMatrix::identity(3)).unwrap();
        assert_eq!(sol.log_rel, 0.0);
        assert!((sol.p_star.trace() - 3.0).abs() < 1e-12);
        assert_eq!(numeric_rank(&sol.p_star, 1e-9).unwrap(), 1);
        // Matches the general solver.
        let general = rel(&HermitianMatrix::identity(3), &SolveOptions::default()).unwrap();
        assert!((general.value_log - sol.log_rel).abs() < 1e-9);
    }

    #[test]
    fn circulant_211_closed_form() {
        let a = circulant_from_first_row(&[r(2.0), r(1.0), r(1.0)]);
        let sol = solve_circulant(&a).unwrap();
        assert!((sol.log_rel - 64.0f64.ln()).abs() < 1e-12);
        // lambda_max is attained at the flat Fourier vector, so P* = 11†.
        let m = sol.p_star.matrix();
        for i in 0..3 {
            for j in 0..3 {
                assert!((m.get(i, j) - r(1.0)).norm() < 1e-12, "P*[{i},{j}] = {}", m.get(i, j));
            }
        }
    }

    #[test]
    fn circulant_one_half_half_closed_form() {
        let a = circulant_from_first_row(&[r(1.0), r(0.5), r(0.5)]);
        let sol = solve_circulant(&a).unwrap();
        assert!((sol.log_rel - 8.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn non_circulant_input_is_rejected() {
        let d = HermitianMatrix::diagonal(&[1.0, 2.0]);
        match solve_circulant(&d) {
            Err(Error::NotCirculant { .. }) => {}
            other => panic!("expected NotCirculant, got {other:?}"),
        }
    }

    #[test]
    fn closed_form_matches_general_solver_on_random_circulants() {
        for n in [3usize, 5, 8, 12] {
            for seed in 0..3u64 {
                let a = random_psd_circulant(n, 40 + 7 * seed + n as u64);
                assert!(is_circulant(&a, 1e-9));
                let sol = solve_circulant(&a).unwrap();
                let general = rel(&a, &SolveOptions::default()).unwrap();
                assert!(
                    (sol.log_rel - general.value_log).abs() <= 1e-6,
                    "n={n} seed={seed}: closed {} vs solver {}",
                    sol.log_rel,
                    general.value_log
                );
                assert!((sol.p_star.trace() - n as f64).abs() < 1e-9 * n as f64);
            }
        }
    }

    #[test]
    fn degenerate_top_eigenspace_still_matches() {
        // Fourier eigenvalues (1, 2, 2): lambda_max is twofold degenerate and
        // attained away from the flat vector, so P* is complex — the value
        // must still agree with the general solver.
        let row = [r(5.0 / 3.0), r(-1.0 / 3.0), r(-1.0 / 3.0)];
        let a = circulant_from_first_row(&row);
        let sol = solve_circulant(&a).unwrap();
        assert!((sol.log_rel - 3.0 * 2.0f64.ln()).abs() < 1e-12);
        let general = rel(&a, &SolveOptions::default()).unwrap();
        assert!((general.value_log - sol.log_rel).abs() <= 1e-6);
    }

    #[test]
    fn structural_rank_bound_examples() {
        // Rank-1 A = vv†.
        let mut rng = substream_rng(9, 0);
        let v: Vec<Complex64> = (0..5).map(|_| complex_standard_normal(&mut rng)).collect();
        let a = HermitianMatrix::from_factor_columns(5, &[v]).unwrap();
        assert_eq!(rank_bound_structural(&a).unwrap(), 1);

        // Full-rank random A = V†V with n independent columns.
        let cols: Vec<Vec<Complex64>> =
            (0..4).map(|_| (0..4).map(|_| complex_standard_normal(&mut rng)).collect()).collect();
        let full = GramFactor::from_columns(cols).unwrap().gram_matrix();
        assert_eq!(rank_bound_structural(&full).unwrap(), 4);

        // V with exactly 2 nonzero rows: Gram rank 2.
        let cols: Vec<Vec<Complex64>> = (0..4)
            .map(|_| {
                let mut c = vec![Complex64::new(0.0, 0.0); 4];
                c[0] = complex_standard_normal(&mut rng);
                c[1] = complex_standard_normal(&mut rng);
                c
            })
            .collect();
        let thin = GramFactor::from_columns(cols).unwrap().gram_matrix();
        assert_eq!(rank_bound_structural(&thin).unwrap(), 2);
    }
}
