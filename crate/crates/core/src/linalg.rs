//! Dense complex matrices and the handful of decompositions the rest of the
//! crate is built on.
//!
//! Everything spectral goes through [`eigh`], a cyclic Jacobi solver for
//! Hermitian matrices. Square roots, Löwner comparisons and inverse square
//! roots are all derived from it; nothing here iterates towards a fixed point.
//!
//! Tensor products are ordered base-major: for `m ⊗ n` the row index is
//! `i * dim(n) + k` where `i` indexes `m` and `k` indexes `n`. With this
//! ordering `I ⊗ F` is block diagonal and [`partial_trace_probe`] traces out
//! the second (minor) factor.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Numerical thresholds shared by every validation in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative Frobenius threshold for matrix equality.
    pub eq_tol: f64,
    /// Largest negative eigenvalue still treated as zero.
    pub psd_tol: f64,
}

impl Tolerance {
    pub const MAX: f64 = 1e-6;

    pub fn new(eq_tol: f64, psd_tol: f64) -> Result<Self> {
        for (name, v) in [("eq_tol", eq_tol), ("psd_tol", psd_tol)] {
            if !(v > 0.0 && v <= Self::MAX) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} = {v} must lie in (0, {}]",
                    Self::MAX
                )));
            }
        }
        Ok(Self { eq_tol, psd_tol })
    }

    /// Frobenius-distance equality scaled by the operand norms.
    pub fn matrices_close(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> bool {
        if a.rows != b.rows || a.cols != b.cols {
            return false;
        }
        let scale = 1.0 + a.frobenius_norm().max(b.frobenius_norm());
        a.distance(b) <= self.eq_tol * scale
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eq_tol: 1e-9,
            psd_tol: 1e-9,
        }
    }
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::BadDimension(0));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Square matrix from real row-major entries. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n, rows[0].len());
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), m.cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = C64::new(v, 0.0);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let cols = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend_from_slice(row);
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_columns(cols: &[Vec<C64>]) -> Self {
        let rows = cols[0].len();
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, &z) in c.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// `|u⟩⟨v|`.
    pub fn ket_bra(u: &[C64], v: &[C64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, &ui) in u.iter().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                m[(i, j)] = ui * vj.conj();
            }
        }
        m
    }

    /// Matrix unit `|i⟩⟨j|` of size `n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = ONE;
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Side length of a square matrix (row count otherwise).
    pub fn dim(&self) -> usize {
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// `‖M − M†‖_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn is_hermitian(&self, tol: &Tolerance) -> bool {
        self.is_square()
            && self.hermiticity_defect() <= tol.eq_tol * (1.0 + self.frobenius_norm())
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        m
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Real part of `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> f64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut s = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                s += self[(i, k)] * other[(k, i)];
            }
        }
        s.re
    }

    /// `‖M†M − I‖_F`.
    pub fn isometry_defect(&self) -> f64 {
        (&self.adjoint() * self).distance(&Self::identity(self.cols))
    }

    /// `max(‖U†U − I‖_F, ‖UU† − I‖_F)`; infinite for non-square input.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let id = Self::identity(self.rows);
        let a = (&self.adjoint() * self).distance(&id);
        let b = (self * &self.adjoint()).distance(&id);
        a.max(b)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl std::iter::Sum for ComplexMatrix {
    /// Panics on an empty iterator; there is no dimension to return.
    fn sum<I: Iterator<Item = Self>>(mut iter: I) -> Self {
        let first = iter.next().expect("sum of zero matrices");
        iter.fold(first, |acc, m| &acc + &m)
    }
}

/// `⟨u, v⟩`, antilinear in the first slot.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vector_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|x| x)
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let fl = f(lambda);
            if fl == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * fl;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eigh(m: &ComplexMatrix, tol: &Tolerance) -> Result<HermitianEig> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    if !m.is_hermitian(tol) {
        return Err(Error::NotHermitian(m.hermiticity_defect()));
    }
    Ok(jacobi_eigh(&m.hermitian_part()))
}

fn off_diagonal_norm_sqr(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

fn jacobi_eigh(input: &ComplexMatrix) -> HermitianEig {
    let n = input.rows();
    let mut a = input.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = input.frobenius_norm().max(f64::MIN_POSITIVE);
    let threshold = (f64::EPSILON * scale).powi(2) * 1e-2;

    for _sweep in 0..100 {
        if off_diagonal_norm_sqr(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Phase that makes the (p, q) entry real, then a real rotation.
                let phase = apq / r;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let pc = phase.conj();
                // G restricted to span{e_p, e_q}.
                let g00 = C64::new(c, 0.0);
                let g01 = C64::new(s, 0.0);
                let g10 = pc * (-s);
                let g11 = pc * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g00 + akq * g10;
                    a[(k, q)] = akp * g01 + akq * g11;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g00.conj() * apk + g10.conj() * aqk;
                    a[(q, k)] = g01.conj() * apk + g11.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g00 + vkq * g10;
                    v[(k, q)] = vkp * g01 + vkq * g11;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, new)] = v[(i, old)];
        }
    }
    HermitianEig {
        eigenvalues,
        eigenvectors,
    }
}

/// Eigendecomposition of a matrix that must be positive semidefinite; small
/// negative eigenvalues in `[-psd_tol, 0)` are clamped to zero, as are
/// positive ones at roundoff level, so that square roots of projections stay
/// exact.
pub fn psd_eigh(m: &ComplexMatrix, tol: &Tolerance) -> Result<HermitianEig> {
    let mut eig = eigh(m, tol)?;
    let lo = eig.min();
    if lo < -tol.psd_tol {
        return Err(Error::NotPositive(lo));
    }
    let floor = 16.0 * f64::EPSILON * m.rows() as f64 * (1.0 + eig.max().abs());
    for l in eig.eigenvalues.iter_mut() {
        if *l < floor {
            *l = 0.0;
        }
    }
    Ok(eig)
}

/// Unique positive square root.
pub fn psd_sqrt(m: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    Ok(psd_eigh(m, tol)?.map(f64::sqrt))
}

/// `m^{-1/2}` for a positive definite `m`.
pub fn psd_inv_sqrt(m: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let eig = psd_eigh(m, tol)?;
    if eig.min() <= tol.psd_tol {
        return Err(Error::NotPositive(eig.min()));
    }
    Ok(eig.map(|x| 1.0 / x.sqrt()))
}

pub fn min_eigenvalue(m: &ComplexMatrix, tol: &Tolerance) -> Result<f64> {
    Ok(eigh(m, tol)?.min())
}

/// Löwner order `s ≤ t`: the smallest eigenvalue of `t − s` is at least `−psd_tol`.
pub fn loewner_leq(s: &ComplexMatrix, t: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    if s.rows() != t.rows() || s.cols() != t.cols() {
        return Err(Error::DimensionMismatch {
            expected: s.rows(),
            found: t.rows(),
        });
    }
    for m in [s, t] {
        if !m.is_hermitian(tol) {
            return Err(Error::NotHermitian(m.hermiticity_defect()));
        }
    }
    Ok(min_eigenvalue(&(t - s), tol)? >= -tol.psd_tol)
}

/// Kronecker product, base-major.
pub fn tensor_product(m: &ComplexMatrix, n: &ComplexMatrix) -> ComplexMatrix {
    let (mr, mc, nr, nc) = (m.rows(), m.cols(), n.rows(), n.cols());
    let mut out = ComplexMatrix::zeros(mr * nr, mc * nc);
    for i in 0..mr {
        for j in 0..mc {
            let a = m[(i, j)];
            if a == ZERO {
                continue;
            }
            for k in 0..nr {
                for l in 0..nc {
                    out[(i * nr + k, j * nc + l)] = a * n[(k, l)];
                }
            }
        }
    }
    out
}

pub fn tensor_vector(u: &[C64], v: &[C64]) -> Vec<C64> {
    u.iter()
        .flat_map(|&a| v.iter().map(move |&b| a * b))
        .collect()
}

/// Partial trace over the probe (second) factor of `H ⊗ K`.
pub fn partial_trace_probe(m: &ComplexMatrix, dim_h: usize, dim_k: usize) -> Result<ComplexMatrix> {
    let n = dim_h * dim_k;
    if !m.is_square() || m.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.rows(),
        });
    }
    let mut out = ComplexMatrix::zeros(dim_h, dim_h);
    for i in 0..dim_h {
        for j in 0..dim_h {
            let mut s = ZERO;
            for k in 0..dim_k {
                s += m[(i * dim_k + k, j * dim_k + k)];
            }
            out[(i, j)] = s;
        }
    }
    Ok(out)
}

/// Residual norm below which a completion candidate is discarded.
const COMPLETION_RESIDUAL: f64 = 1e-8;

/// Extends the orthonormal columns of `v` to a unitary.
///
/// Candidates are the canonical basis vectors in index order; each is
/// orthogonalized (twice, for stability) against the columns collected so far
/// and kept if its residual norm is at least `1e-8`.
pub fn complete_isometry_to_unitary(v: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let (n, d) = (v.rows(), v.cols());
    if d > n {
        return Err(Error::NotIsometry(f64::INFINITY));
    }
    let defect = v.isometry_defect();
    if defect > tol.eq_tol * (1.0 + (d as f64).sqrt()) {
        return Err(Error::NotIsometry(defect));
    }
    let mut basis: Vec<Vec<C64>> = (0..d).map(|j| v.column(j)).collect();
    for e in 0..n {
        if basis.len() == n {
            break;
        }
        let mut cand = vec![ZERO; n];
        cand[e] = ONE;
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &cand);
                for (x, bi) in cand.iter_mut().zip(b) {
                    *x -= c * bi;
                }
            }
        }
        let norm = vector_norm(&cand);
        if norm < COMPLETION_RESIDUAL {
            continue;
        }
        cand.iter_mut().for_each(|x| *x /= norm);
        basis.push(cand);
    }
    debug_assert_eq!(basis.len(), n);
    Ok(ComplexMatrix::from_columns(&basis))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn tolerance_bounds() {
        assert!(Tolerance::new(1e-9, 1e-9).is_ok());
        assert!(Tolerance::new(0.0, 1e-9).is_err());
        assert!(Tolerance::new(1e-9, 1e-3).is_err());
    }

    #[test]
    fn eigh_reconstructs_complex_hermitian() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            vec![c(1.0, 1.0), c(-1.0, 0.0), c(0.3, 0.0)],
            vec![c(0.0, -0.5), c(0.3, 0.0), c(0.5, 0.0)],
        ]);
        let eig = eigh(&m, &tol()).unwrap();
        assert!(eig.reconstruct().distance(&m) < 1e-13);
        assert!(eig.eigenvectors.unitarity_defect() < 1e-13);
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let tr: f64 = eig.eigenvalues.iter().sum();
        assert!((tr - 1.5).abs() < 1e-13);
    }

    #[test]
    fn eigh_of_degenerate_matrix() {
        let eig = eigh(&ComplexMatrix::identity(4), &tol()).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0; 4]);
        let p = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let eig = eigh(&p, &tol()).unwrap();
        assert!(eig.eigenvalues[0].abs() < 1e-15);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eigh(&m, &tol()), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn sqrt_examples() {
        let id = ComplexMatrix::identity(3);
        assert!(psd_sqrt(&id, &tol()).unwrap().distance(&id) < 1e-15);

        let proj = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(psd_sqrt(&proj, &tol()).unwrap().distance(&proj) < 1e-14);

        let d = ComplexMatrix::diag_real(&[4.0, 9.0]);
        let s = psd_sqrt(&d, &tol()).unwrap();
        assert!(s.distance(&ComplexMatrix::diag_real(&[2.0, 3.0])) < 1e-15);
    }

    #[test]
    fn sqrt_clamps_noise_and_rejects_negative() {
        let m = ComplexMatrix::diag_real(&[1.0, -1e-12]);
        let s = psd_sqrt(&m, &tol()).unwrap();
        assert_eq!(s[(1, 1)], ZERO);
        let m = ComplexMatrix::diag_real(&[1.0, -1e-3]);
        assert!(matches!(psd_sqrt(&m, &tol()), Err(Error::NotPositive(_))));
    }

    #[test]
    fn loewner_examples() {
        let z = ComplexMatrix::zeros(2, 2);
        let id = ComplexMatrix::identity(2);
        assert!(loewner_leq(&z, &id, &tol()).unwrap());
        assert!(!loewner_leq(&id, &z, &tol()).unwrap());

        // S_+^x versus S_+^z: the difference has eigenvalues ±1/√2.
        let sx = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let sz = ComplexMatrix::diag_real(&[1.0, 0.0]);
        assert!(!loewner_leq(&sx, &sz, &tol()).unwrap());
        let eig = eigh(&(&sz - &sx), &tol()).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((eig.eigenvalues[0] + r).abs() < 1e-15);
        assert!((eig.eigenvalues[1] - r).abs() < 1e-15);

        let three = ComplexMatrix::identity(3);
        assert!(matches!(
            loewner_leq(&z, &three, &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tensor_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor_product(&i2, &i2), ComplexMatrix::identity(4));
        let p = ComplexMatrix::diag_real(&[1.0, 0.0]);
        assert_eq!(
            tensor_product(&p, &p),
            ComplexMatrix::diag_real(&[1.0, 0.0, 0.0, 0.0])
        );
        // base-major: I ⊗ F is block diagonal
        let f = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let m = tensor_product(&i2, &f);
        assert_eq!(m[(0, 1)], ONE);
        assert_eq!(m[(0, 2)], ZERO);
        assert_eq!(m[(2, 3)], ONE);
    }

    #[test]
    fn partial_trace_of_identity() {
        let m = ComplexMatrix::identity(6);
        let r = partial_trace_probe(&m, 2, 3).unwrap();
        assert_eq!(r, ComplexMatrix::identity(2).scale_real(3.0));
        assert!(partial_trace_probe(&m, 2, 2).is_err());
    }

    #[test]
    fn completion_examples() {
        let id = ComplexMatrix::identity(3);
        assert_eq!(complete_isometry_to_unitary(&id, &tol()).unwrap(), id);

        let e0 = ComplexMatrix::from_columns(&[vec![ONE, ZERO, ZERO]]);
        let u = complete_isometry_to_unitary(&e0, &tol()).unwrap();
        assert!(u.unitarity_defect() < 1e-12);
        assert_eq!(u.column(0), e0.column(0));

        let not_iso = ComplexMatrix::from_columns(&[vec![c(2.0, 0.0), ZERO]]);
        assert!(matches!(
            complete_isometry_to_unitary(&not_iso, &tol()),
            Err(Error::NotIsometry(_))
        ));
    }

    #[test]
    fn completion_skips_dependent_candidates() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = ComplexMatrix::from_columns(&[vec![c(h, 0.0), c(0.0, h), ZERO]]);
        let u = complete_isometry_to_unitary(&v, &tol()).unwrap();
        assert!(u.unitarity_defect() < 1e-12);
        assert_eq!(u.column(0), v.column(0));
        // e_0 survives projection, e_1 is then dependent, e_2 is kept.
        assert!(u[(2, 2)].norm() > 0.99);
    }
}
