//! Dense complex linear algebra for small matrices (N ≤ 8).
//!
//! Everything here is sized for two-qubit work: 4×4 density matrices and
//! unitaries, with a little headroom. The Hermitian eigensolver is a cyclic
//! Jacobi iteration, which at this size is both fast and unconditionally
//! stable.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Largest dimension accepted by the eigensolver and the samplers.
pub const MAX_DIM: usize = 8;

/// Tolerance on `max |M − M†|` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Eigenvalues in `[-PSD_CLAMP_TOL, 0)` are treated as round-off and clamped to zero.
pub const PSD_CLAMP_TOL: f64 = 1e-9;
/// Nonnegative eigenvalues below this are zeroed by [`psd_sqrt_floored`]. The
/// Jacobi solver leaves residues of order 1e-16 on exactly singular inputs,
/// and their square roots (~1e-8) would otherwise leak into traces of `√M`.
pub const SQRT_ROUND_OFF_FLOOR: f64 = 1e-13;

const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix dimension {0} outside supported range 1..={MAX_DIM}")]
    UnsupportedDimension(usize),
    #[error("matrix is not Hermitian (max |M - M†| = {0:e})")]
    NonHermitian(f64),
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("expected {expected} entries, got {got}")]
    BadShape { expected: usize, got: usize },
}

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if dim == 0 {
            return Err(LinalgError::UnsupportedDimension(0));
        }
        if data.len() != dim * dim {
            return Err(LinalgError::BadShape {
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        let dim = rows.len();
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::from_row_major(dim, data)
    }

    /// Outer product `|v⟩⟨v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.dim != rhs.dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// `max_ij |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max_ij |m_ij - conj(m_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max_ij |(M M†)_ij - δ_ij|`.
    pub fn unitarity_error(&self) -> f64 {
        let prod = self * &self.adjoint();
        prod.max_abs_diff(&Self::identity(self.dim))
    }

    /// Real part of the diagonal.
    pub fn real_diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)].re).collect()
    }

    fn check_eig_input(&self) -> Result<(), LinalgError> {
        if self.dim > MAX_DIM {
            return Err(LinalgError::UnsupportedDimension(self.dim));
        }
        if !self.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        let herm = self.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(LinalgError::NonHermitian(herm));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Panics on dimension mismatch; use [`ComplexMatrix::matmul`] for a fallible product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Spectral decomposition `M = V diag(λ) V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += v[(i, k)] * v[(j, k)].conj() * fl[k];
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)].im = 0.0;
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigenDecomposition, LinalgError> {
    m.check_eig_input()?;
    let n = m.dim();
    // Work on the exactly Hermitian part.
    let mut a = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < JACOBI_OFF_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, new_col)] = v[(i, old_col)];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only (ascending).
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    hermitian_eig(m).map(|e| e.eigenvalues)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One two-sided rotation annihilating `a[p][q]`.
///
/// With `a_pq = r e^{iφ}` the rotation is `J = diag-phase · real Givens`,
/// `J = [[c, s], [-s e^{-iφ}, c e^{-iφ}]]` on the (p, q) plane; `A ← J† A J`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < f64::MIN_POSITIVE {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / r; // e^{iφ}
    let phase_c = phase.conj();

    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = phase_c * (-s);
    let j_qq = phase_c * c;

    let n = a.dim();
    // A ← A J (columns p, q).
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    // A ← J† A (rows p, q).
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues in `[-1e-9, 0)` are clamped to zero; anything more negative
/// is reported as [`LinalgError::NotPsd`].
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let eig = hermitian_eig(m)?;
    let lowest = eig.eigenvalues[0];
    if lowest < -PSD_CLAMP_TOL {
        return Err(LinalgError::NotPsd(lowest));
    }
    Ok(eig.reconstruct_with(|l| l.max(0.0).sqrt()))
}

/// [`psd_sqrt`] that also treats eigenvalues in `[0, floor)` as zero.
pub fn psd_sqrt_floored(m: &ComplexMatrix, floor: f64) -> Result<ComplexMatrix, LinalgError> {
    let eig = hermitian_eig(m)?;
    let lowest = eig.eigenvalues[0];
    if lowest < -PSD_CLAMP_TOL {
        return Err(LinalgError::NotPsd(lowest));
    }
    Ok(eig.reconstruct_with(|l| if l < floor { 0.0 } else { l.sqrt() }))
}

/// Householder QR factorization `A = Q R` with `Q` unitary and `R` upper triangular.
pub fn qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.dim();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(1) {
        let norm_x: f64 = (k..n).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        // v = x + e^{i arg x0} |x| e_1, reflector H = I - 2 v v† / (v† v)
        let mut v: Vec<Complex64> = (k..n).map(|i| r[(i, k)]).collect();
        v[0] += phase * norm_x;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in 0..n {
            let dot: Complex64 = (k..n).map(|i| v[i - k].conj() * r[(i, j)]).sum();
            let f = dot * (2.0 / vnorm2);
            for i in k..n {
                r[(i, j)] -= v[i - k] * f;
            }
        }
        // Q ← Q H
        for i in 0..n {
            let dot: Complex64 = (k..n).map(|j| q[(i, j)] * v[j - k]).sum();
            let f = dot * (2.0 / vnorm2);
            for j in k..n {
                q[(i, j)] -= f * v[j - k].conj();
            }
        }
    }
    for i in 1..n {
        for j in 0..i {
            r[(i, j)] = Complex64::new(0.0, 0.0);
        }
    }
    (q, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
            for j in (i + 1)..n {
                let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    fn random_square(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let data = (0..n * n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        ComplexMatrix::from_row_major(n, data).unwrap()
    }

    #[test]
    fn identity_eigenvalues_are_ones() {
        let e = hermitian_eig(&ComplexMatrix::identity(4)).unwrap();
        for l in &e.eigenvalues {
            assert!((l - 1.0).abs() < 1e-15);
        }
        assert!(e.eigenvectors.unitarity_error() < 1e-12);
    }

    #[test]
    fn diagonal_eigen_is_sorted_standard_basis() {
        let m = ComplexMatrix::from_real_diag(&[2.0, 0.0, 3.0, 1.0]);
        let e = hermitian_eig(&m).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0, 1.0, 2.0, 3.0]);
        // column k is a standard basis vector up to phase
        let expected_rows = [1, 3, 0, 2];
        for (k, &row) in expected_rows.iter().enumerate() {
            assert!((e.eigenvectors[(row, k)].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn random_hermitian_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..100 {
            let n = 2 + trial % 7;
            let m = random_hermitian(n, &mut rng);
            let e = hermitian_eig(&m).unwrap();
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            assert!(e.eigenvectors.unitarity_error() < 1e-12);
            assert!(e.reconstruct().max_abs_diff(&m) < 1e-12, "trial {trial}");
        }
    }

    #[test]
    fn eig_rejects_non_hermitian_and_non_finite() {
        let mut m = ComplexMatrix::identity(3);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(matches!(
            hermitian_eig(&m),
            Err(LinalgError::NonHermitian(_))
        ));
        let mut m = ComplexMatrix::identity(3);
        m[(2, 2)] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(hermitian_eig(&m).unwrap_err(), LinalgError::NonFinite);
        assert!(matches!(
            hermitian_eig(&ComplexMatrix::identity(9)),
            Err(LinalgError::UnsupportedDimension(9))
        ));
    }

    #[test]
    fn psd_sqrt_diagonal_cases() {
        let r = psd_sqrt(&ComplexMatrix::identity(4)).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
        let r = psd_sqrt(&ComplexMatrix::from_real_diag(&[4.0, 1.0, 0.0, 9.0])).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_real_diag(&[2.0, 1.0, 0.0, 3.0])) < 1e-15);
    }

    #[test]
    fn psd_sqrt_clamps_round_off_but_rejects_negative() {
        let r = psd_sqrt(&ComplexMatrix::from_real_diag(&[1.0, -5e-10])).unwrap();
        assert_eq!(r[(1, 1)].re, 0.0);
        assert!(matches!(
            psd_sqrt(&ComplexMatrix::from_real_diag(&[1.0, -1e-6])),
            Err(LinalgError::NotPsd(_))
        ));
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let a = random_square(4, &mut rng);
            let m = &a * &a.adjoint();
            let r = psd_sqrt(&m).unwrap();
            assert!(r.hermiticity_error() < 1e-14);
            assert!((&r * &r).max_abs_diff(&m) < 1e-10);
            // psd_sqrt(R^4) = R^2
            let r2 = &r * &r;
            let r4 = &r2 * &r2;
            assert!(psd_sqrt(&r4).unwrap().max_abs_diff(&r2) < 1e-9);
        }
    }

    #[test]
    fn basic_compositions() {
        assert_eq!(ComplexMatrix::identity(4).trace(), Complex64::new(4.0, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = random_square(4, &mut rng);
            let b = random_square(4, &mut rng);
            assert_eq!(a.adjoint().adjoint(), a);
            assert!(((&a * &b).trace() - (&b * &a).trace()).norm() < 1e-12);
        }
        let err = ComplexMatrix::identity(2)
            .matmul(&ComplexMatrix::identity(3))
            .unwrap_err();
        assert_eq!(err, LinalgError::DimensionMismatch { left: 2, right: 3 });
    }

    #[test]
    fn qr_factors_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=8 {
            let a = random_square(n, &mut rng);
            let (q, r) = qr(&a);
            assert!(q.unitarity_error() < 1e-13);
            assert!((&q * &r).max_abs_diff(&a) < 1e-13);
            for i in 0..n {
                for j in 0..i {
                    assert_eq!(r[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
        }
    }
}
