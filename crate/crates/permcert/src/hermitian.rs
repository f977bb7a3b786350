//! Dense complex Hermitian linear algebra: eigendecomposition (cyclic Jacobi),
//! PSD checks, Löwner comparison, and Gram factorization via the Hermitian
//! square root.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance for the Hermitian symmetry check at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Relative Frobenius tolerance for factorization/reconstruction round trips.
pub const RECONSTRUCT_TOL: f64 = 1e-10;
/// Eigenvalues in [-CLAMP_TOL * lambda_max, 0] are clamped to zero.
pub const CLAMP_TOL: f64 = 1e-10;
/// Absolute floor applied to relative tolerance scales.
pub const ABS_TOL_FLOOR: f64 = 1e-14;

const MAX_JACOBI_SWEEPS: usize = 100;
/// Off-diagonal Frobenius target, relative to the input Frobenius norm.
const JACOBI_OFF_TOL: f64 = 1e-14;
/// A component counts as the "first nonzero" of an eigenvector when its
/// modulus is at least this fraction of the largest component modulus.
const PHASE_FLOOR: f64 = 1e-8;

/// General dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    /// Builds an n x n matrix from row-major data.
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::NotSquare {
                rows: data.len().checked_div(n).unwrap_or(0),
                cols: n,
            });
        }
        Ok(Self { n, data })
    }

    /// Builds a matrix from nested rows, validating squareness.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare { rows: n, cols: row.len() });
            }
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Kronecker product self (n x n) with other (m x m) -> nm x nm.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let m = other.n;
        let nm = n * m;
        let mut out = Matrix::zeros(nm);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                for p in 0..m {
                    for q in 0..m {
                        out.set(i * m + p, j * m + q, a * other.get(p, q));
                    }
                }
            }
        }
        out
    }
}

/// Validated complex Hermitian matrix. Entries are symmetrized at
/// construction (exact conjugate symmetry, real diagonal) so downstream
/// kernels may rely on it.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: Matrix,
}

impl HermitianMatrix {
    /// Validates Hermitian symmetry within `HERMITIAN_TOL` (relative to the
    /// largest entry modulus, floored at `ABS_TOL_FLOOR`), then stores the
    /// symmetrized matrix (A + A†)/2.
    pub fn new(m: Matrix) -> Result<Self> {
        let n = m.dim();
        let scale = m.max_abs().max(ABS_TOL_FLOOR);
        let mut deviation: f64 = 0.0;
        for i in 0..n {
            deviation = deviation.max(m.get(i, i).im.abs());
            for j in (i + 1)..n {
                deviation = deviation.max((m.get(i, j) - m.get(j, i).conj()).norm());
            }
        }
        if deviation > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { deviation, tol: HERMITIAN_TOL * scale });
        }
        let mut sym = m;
        for i in 0..n {
            let d = sym.get(i, i);
            sym.set(i, i, Complex64::new(d.re, 0.0));
            for j in (i + 1)..n {
                let avg = 0.5 * (sym.get(i, j) + sym.get(j, i).conj());
                sym.set(i, j, avg);
                sym.set(j, i, avg.conj());
            }
        }
        Ok(Self { inner: sym })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    /// Real diagonal matrix.
    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Matrix::zeros(n);
        for (i, &di) in d.iter().enumerate() {
            m.set(i, i, Complex64::new(di, 0.0));
        }
        Self { inner: m }
    }

    pub fn identity(n: usize) -> Self {
        Self { inner: Matrix::identity(n) }
    }

    /// sum_j c_j c_j† from factor columns (each of length n); PSD and
    /// Hermitian by construction.
    pub fn from_factor_columns(n: usize, cols: &[Vec<Complex64>]) -> Result<Self> {
        let mut m = Matrix::zeros(n);
        for col in cols {
            if col.len() != n {
                return Err(Error::DimensionMismatch { left: col.len(), right: n });
            }
            for i in 0..n {
                for j in 0..n {
                    let cur = m.get(i, j);
                    m.set(i, j, cur + col[i] * col[j].conj());
                }
            }
        }
        Self::new(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner.get(i, j)
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix {
        &self.inner
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    /// B - A, entrywise (dimensions must match).
    pub fn sub(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        let n = self.dim();
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.get(i, j) - other.get(i, j));
            }
        }
        Ok(HermitianMatrix { inner: m })
    }

    /// x† A x (real for Hermitian A).
    pub fn quadratic_form(&self, x: &[Complex64]) -> f64 {
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for (j, xj) in x.iter().enumerate() {
                row += self.get(i, j) * xj;
            }
            acc += x[i].conj() * row;
        }
        acc.re
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i).re).sum()
    }
}

/// Eigendecomposition of a Hermitian matrix: descending real eigenvalues and
/// orthonormal eigenvectors under a deterministic phase convention.
#[derive(Debug, Clone)]
pub struct EigDecomposition {
    /// Eigenvalues in descending order.
    pub eigenvalues: Vec<f64>,
    /// eigenvectors[k] is the (column) eigenvector for eigenvalues[k].
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl EigDecomposition {
    /// Reconstructs sum_k lambda_k v_k v_k†.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.eigenvectors.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(n);
        for (lam, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..n {
                for j in 0..n {
                    let cur = m.get(i, j);
                    m.set(i, j, cur + lam * v[i] * v[j].conj());
                }
            }
        }
        m
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices. Deterministic: fixed
/// pivot order, fixed rotation formulas, stable descending sort, and a phase
/// convention making the first significant component of each eigenvector real
/// positive.
pub fn eigh(m: &HermitianMatrix) -> Result<EigDecomposition> {
    let n = m.dim();
    if n == 0 {
        return Ok(EigDecomposition { eigenvalues: vec![], eigenvectors: vec![] });
    }
    let mut a: Vec<Complex64> = m.matrix().data().to_vec();
    let mut v: Vec<Complex64> = Matrix::identity(n).data().to_vec();
    let fro0 = m.frobenius_norm();
    let off_target = JACOBI_OFF_TOL * fro0.max(ABS_TOL_FLOOR);

    let off_norm = |a: &[Complex64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += a[p * n + q].norm_sqr();
            }
        }
        (2.0 * s).sqrt()
    };

    let mut residual = off_norm(&a);
    let mut sweeps = 0;
    while residual > off_target {
        if sweeps >= MAX_JACOBI_SWEEPS {
            return Err(Error::EigNonConvergence { sweeps, residual });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                // Phase removal followed by a real 2x2 Jacobi rotation:
                // G = diag(1, e^{-i phi}a) . [[c, s], [-s, c]] restricted to (p,q).
                let eminus = (apq / mag).conj();
                let eplus = eminus.conj();
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Column update A <- A G.
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * eminus * akq;
                    a[k * n + q] = s * akp + c * eminus * akq;
                }
                // Row update A <- G† A.
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * eplus * aqk;
                    a[q * n + k] = s * apk + c * eplus * aqk;
                }
                // Exact annihilation and real diagonal.
                a[p * n + p] = Complex64::new(app - t * mag, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                // Eigenvector accumulation V <- V G.
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * eminus * vkq;
                    v[k * n + q] = s * vkp + c * eminus * vkq;
                }
            }
        }
        sweeps += 1;
        residual = off_norm(&a);
    }

    // Stable descending sort keeps Jacobi column order on ties.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[j * n + j].re.partial_cmp(&a[i * n + i].re).expect("eigenvalues are finite")
    });

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    for &idx in &order {
        eigenvalues.push(a[idx * n + idx].re);
        let mut col: Vec<Complex64> = (0..n).map(|k| v[k * n + idx]).collect();
        apply_phase_convention(&mut col);
        eigenvectors.push(col);
    }
    Ok(EigDecomposition { eigenvalues, eigenvectors })
}

/// Multiplies by a global phase making the first significant component real
/// positive (significant: modulus at least PHASE_FLOOR times the max modulus).
fn apply_phase_convention(col: &mut [Complex64]) {
    let max_mod = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max_mod == 0.0 {
        return;
    }
    let lead = col.iter().find(|z| z.norm() >= PHASE_FLOOR * max_mod);
    if let Some(&z) = lead {
        let phase = z.conj() / z.norm();
        for c in col.iter_mut() {
            *c *= phase;
        }
    }
}

/// PSD verdict with the minimum-eigenvalue evidence.
#[derive(Debug, Clone, Copy)]
pub struct PsdReport {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

/// True iff the smallest eigenvalue is at least -tol * max(|lambda|_max, 1).
pub fn check_hpsd(m: &HermitianMatrix, tol: f64) -> Result<PsdReport> {
    let eig = eigh(m)?;
    let min_eigenvalue = eig.eigenvalues.last().copied().unwrap_or(0.0);
    let max_eigenvalue = eig.eigenvalues.first().copied().unwrap_or(0.0);
    let scale = max_eigenvalue.abs().max(min_eigenvalue.abs()).max(1.0);
    Ok(PsdReport { is_psd: min_eigenvalue >= -tol * scale, min_eigenvalue, max_eigenvalue })
}

/// True iff B - A has minimum eigenvalue >= -tol * scale, with scale the
/// largest eigenvalue magnitude of B - A floored at ABS_TOL_FLOOR.
pub fn loewner_leq(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<bool> {
    let c = b.sub(a)?;
    let eig = eigh(&c)?;
    let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
    let max = eig.eigenvalues.first().copied().unwrap_or(0.0);
    let scale = max.abs().max(min.abs()).max(ABS_TOL_FLOOR);
    Ok(min >= -tol * scale)
}

/// Gram factor V with A = V†V; columns v_1..v_n, each of length n
/// (zero-padded implicitly when rank(A) < n since V is the Hermitian root).
#[derive(Debug, Clone)]
pub struct GramFactor {
    n: usize,
    cols: Vec<Vec<Complex64>>,
}

impl GramFactor {
    /// Wraps explicit columns (each of length n).
    pub fn from_columns(cols: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = cols.len();
        for c in &cols {
            if c.len() != n {
                return Err(Error::NotSquare { rows: c.len(), cols: n });
            }
        }
        Ok(Self { n, cols })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn column(&self, i: usize) -> &[Complex64] {
        &self.cols[i]
    }

    pub fn columns(&self) -> &[Vec<Complex64>] {
        &self.cols
    }

    /// V†V as a Hermitian matrix: entry (i, j) = <v_i, v_j>.
    pub fn gram_matrix(&self) -> HermitianMatrix {
        let n = self.n;
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    s += self.cols[i][k].conj() * self.cols[j][k];
                }
                m.set(i, j, s);
            }
        }
        HermitianMatrix::new(m).expect("Gram matrices are Hermitian by construction")
    }

    /// All quadratic forms v_i† P v_i.
    pub fn form_values(&self, p: &HermitianMatrix) -> Vec<f64> {
        self.cols.iter().map(|v| p.quadratic_form(v)).collect()
    }
}

/// Hermitian square root factorization A = V†V with V = A^{1/2}.
/// Deterministic for singular A; eigenvalues in [-CLAMP_TOL * lambda_max, 0]
/// are clamped to zero, anything lower is a PSD domain error.
pub fn factorize_gram(a: &HermitianMatrix) -> Result<GramFactor> {
    let n = a.dim();
    let eig = eigh(a)?;
    let lam_max = eig.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let clamp_floor = -(CLAMP_TOL * lam_max).max(ABS_TOL_FLOOR);
    let mut lams = Vec::with_capacity(n);
    for &lam in &eig.eigenvalues {
        if lam < clamp_floor {
            return Err(Error::NotPsd { eigenvalue: lam, tol: -clamp_floor });
        }
        lams.push(lam.max(0.0));
    }
    // A^{1/2} = U diag(sqrt(lambda)) U†, assembled column by column.
    let mut cols = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (lam, u) in lams.iter().zip(&eig.eigenvectors) {
        let s = lam.sqrt();
        for (j, col) in cols.iter_mut().enumerate() {
            let w = s * u[j].conj();
            for (i, c) in col.iter_mut().enumerate() {
                *c += u[i] * w;
            }
        }
    }
    GramFactor::from_columns(cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    pub(crate) fn circulant_211() -> HermitianMatrix {
        HermitianMatrix::from_rows(&[
            vec![r(2.0), r(1.0), r(1.0)],
            vec![r(1.0), r(2.0), r(1.0)],
            vec![r(1.0), r(1.0), r(2.0)],
        ])
        .unwrap()
    }

    #[test]
    fn identity_is_hpsd() {
        let m = HermitianMatrix::identity(3);
        let rep = check_hpsd(&m, 1e-9).unwrap();
        assert!(rep.is_psd);
        assert!((rep.min_eigenvalue - 1.0).abs() < 1e-12);
    }

    #[test]
    fn indefinite_symmetric_is_not_hpsd() {
        // [[1,2],[2,1]] has eigenvalues 3 and -1.
        let m = HermitianMatrix::from_rows(&[vec![r(1.0), r(2.0)], vec![r(2.0), r(1.0)]]).unwrap();
        let rep = check_hpsd(&m, 1e-9).unwrap();
        assert!(!rep.is_psd);
        assert!((rep.min_eigenvalue + 1.0).abs() < 1e-10);
    }

    #[test]
    fn circulant_211_is_hpsd_with_dft_eigenvalues() {
        let rep = check_hpsd(&circulant_211(), 1e-9).unwrap();
        assert!(rep.is_psd);
        let eig = eigh(&circulant_211()).unwrap();
        let expect = [4.0, 1.0, 1.0];
        for (got, want) in eig.eigenvalues.iter().zip(expect) {
            assert!((got - want).abs() < 1e-10, "eigenvalue {got} vs {want}");
        }
    }

    #[test]
    fn eigh_diagonal_sorts_descending_with_basis_vectors() {
        let m = HermitianMatrix::diagonal(&[3.0, 1.0, 2.0]);
        let eig = eigh(&m).unwrap();
        assert_eq!(eig.eigenvalues, vec![3.0, 2.0, 1.0]);
        // Eigenvectors are standard basis vectors (phase convention: +1 entry).
        let expect_pos = [0usize, 2, 1];
        for (k, v) in eig.eigenvectors.iter().enumerate() {
            for (i, z) in v.iter().enumerate() {
                let want = if i == expect_pos[k] { 1.0 } else { 0.0 };
                assert!((z - r(want)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eigh_all_ones_2x2() {
        let m = HermitianMatrix::from_rows(&[vec![r(1.0), r(1.0)], vec![r(1.0), r(1.0)]]).unwrap();
        let eig = eigh(&m).unwrap();
        assert!((eig.eigenvalues[0] - 2.0).abs() < 1e-12);
        assert!(eig.eigenvalues[1].abs() < 1e-12);
    }

    #[test]
    fn eigh_reconstructs_complex_hermitian() {
        let m = HermitianMatrix::from_rows(&[
            vec![r(2.0), c(0.5, 0.25), c(-0.5, 1.0)],
            vec![c(0.5, -0.25), r(1.0), c(0.0, -0.75)],
            vec![c(-0.5, -1.0), c(0.0, 0.75), r(3.0)],
        ])
        .unwrap();
        let eig = eigh(&m).unwrap();
        let rec = eig.reconstruct();
        let mut err = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                err += (rec.get(i, j) - m.get(i, j)).norm_sqr();
            }
        }
        assert!(err.sqrt() <= RECONSTRUCT_TOL * m.frobenius_norm());
        // Orthonormality.
        for a in 0..3 {
            for b in 0..3 {
                let mut dot = Complex64::new(0.0, 0.0);
                for k in 0..3 {
                    dot += eig.eigenvectors[a][k].conj() * eig.eigenvectors[b][k];
                }
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((dot - r(want)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn eigh_phase_convention_first_significant_component_real_positive() {
        let m = HermitianMatrix::from_rows(&[
            vec![r(1.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), r(1.0)],
        ])
        .unwrap();
        let eig = eigh(&m).unwrap();
        for v in &eig.eigenvectors {
            let max_mod = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let lead = v.iter().find(|z| z.norm() >= PHASE_FLOOR * max_mod).unwrap();
            assert!(lead.im.abs() < 1e-12 && lead.re > 0.0, "leading component {lead}");
        }
    }

    #[test]
    fn non_square_input_is_rejected() {
        let err = Matrix::from_rows(&[vec![r(1.0), r(2.0)], vec![r(3.0)]]).unwrap_err();
        assert!(matches!(err, Error::NotSquare { .. }));
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let err =
            HermitianMatrix::from_rows(&[vec![r(1.0), r(2.0)], vec![r(0.5), r(1.0)]]).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn factorize_identity_gives_identity() {
        let v = factorize_gram(&HermitianMatrix::identity(3)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v.column(i)[j] - r(want)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn factorize_diagonal_takes_square_roots() {
        let v = factorize_gram(&HermitianMatrix::diagonal(&[4.0, 9.0])).unwrap();
        assert!((v.column(0)[0] - r(2.0)).norm() < 1e-12);
        assert!((v.column(1)[1] - r(3.0)).norm() < 1e-12);
        assert!(v.column(0)[1].norm() < 1e-12);
    }

    #[test]
    fn factorize_circulant_root_has_ones_eigenvector_at_two() {
        // The Hermitian root of circulant(2,1,1) has eigenvalue 2 on the
        // all-ones direction (sqrt of eigenvalue 4).
        let v = factorize_gram(&circulant_211()).unwrap();
        let ones = [r(1.0), r(1.0), r(1.0)];
        for i in 0..3 {
            let mut s = Complex64::new(0.0, 0.0);
            for (j, one) in ones.iter().enumerate() {
                s += v.column(j)[i] * one; // row i of V times ones
            }
            assert!((s - r(2.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn factorize_then_gram_reconstructs() {
        let a = circulant_211();
        let v = factorize_gram(&a).unwrap();
        let rec = v.gram_matrix();
        let diff = rec.sub(&a).unwrap();
        assert!(diff.frobenius_norm() <= RECONSTRUCT_TOL * a.frobenius_norm());
    }

    #[test]
    fn factorize_rejects_indefinite() {
        let m = HermitianMatrix::from_rows(&[vec![r(1.0), r(2.0)], vec![r(2.0), r(1.0)]]).unwrap();
        let err = factorize_gram(&m).unwrap_err();
        match err {
            Error::NotPsd { eigenvalue, .. } => assert!((eigenvalue + 1.0).abs() < 1e-10),
            other => panic!("expected NotPsd, got {other}"),
        }
    }

    #[test]
    fn loewner_identity_ordering() {
        let i1 = HermitianMatrix::identity(2);
        let i2 = HermitianMatrix::diagonal(&[2.0, 2.0]);
        assert!(loewner_leq(&i1, &i2, 1e-9).unwrap());
        assert!(!loewner_leq(&i2, &i1, 1e-9).unwrap());
    }

    #[test]
    fn loewner_circulant_below_four_i() {
        let four_i = HermitianMatrix::diagonal(&[4.0, 4.0, 4.0]);
        assert!(loewner_leq(&circulant_211(), &four_i, 1e-9).unwrap());
    }

    #[test]
    fn loewner_reflexive_within_tolerance() {
        let a = circulant_211();
        assert!(loewner_leq(&a, &a, 1e-9).unwrap());
    }

    #[test]
    fn loewner_dimension_mismatch() {
        let a = HermitianMatrix::identity(2);
        let b = HermitianMatrix::identity(3);
        assert!(matches!(loewner_leq(&a, &b, 1e-9), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn quadratic_form_matches_direct_computation() {
        let a = circulant_211();
        let x = [c(1.0, 0.5), c(-0.25, 1.0), c(0.0, -1.5)];
        // x†Ax computed straightforwardly.
        let mut want = Complex64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                want += x[i].conj() * a.get(i, j) * x[j];
            }
        }
        assert!((a.quadratic_form(&x) - want.re).abs() < 1e-12);
        assert!(want.im.abs() < 1e-12);
    }

    #[test]
    fn kron_identity_with_ones() {
        let i2 = Matrix::identity(2);
        let mut ones = Matrix::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                ones.set(i, j, r(1.0));
            }
        }
        let k = i2.kron(&ones);
        assert_eq!(k.dim(), 4);
        assert_eq!(k.get(0, 1), r(1.0));
        assert_eq!(k.get(0, 2), r(0.0));
        assert_eq!(k.get(2, 3), r(1.0));
    }
}
