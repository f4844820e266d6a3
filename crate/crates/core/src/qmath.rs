//! Small dense complex linear algebra.
//!
//! Everything here works on square matrices of dimension 2, 4 or 16: single
//! qubit operators, two-qubit operators and two-qubit superoperators. Entries
//! are stored row-major.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type ComplexScalar = Complex64;

pub const ZERO: ComplexScalar = Complex64::new(0.0, 0.0);
pub const ONE: ComplexScalar = Complex64::new(1.0, 0.0);
pub const I: ComplexScalar = Complex64::new(0.0, 1.0);

/// Dimensions a [`ComplexMatrix`] may take.
pub const SUPPORTED_DIMS: [usize; 3] = [2, 4, 16];

/// Tolerance on `‖a − a†‖_max` accepted by the Hermitian routines.
pub const HERMITIAN_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-14;
const PIVOT_REL_TOL: f64 = 1e-13;

fn check_dim(dim: usize) -> Result<()> {
    if SUPPORTED_DIMS.contains(&dim) {
        Ok(())
    } else {
        Err(Error::Usage(format!(
            "matrix dimension {dim} not supported (expected one of 2, 4, 16)"
        )))
    }
}

/// Dense square complex matrix of dimension 2, 4 or 16.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<ComplexScalar>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: vec![ZERO; dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(dim: usize, data: Vec<ComplexScalar>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::Usage(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite entry at ({}, {})",
                k / dim,
                k % dim
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> ComplexScalar) -> Result<Self> {
        check_dim(dim)?;
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self::from_vec(dim, data)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = ComplexScalar::new(d, 0.0);
        }
        Ok(m)
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[ComplexScalar], v: &[ComplexScalar]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::Usage("outer product of vectors with different lengths".into()));
        }
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[ComplexScalar] {
        &self.data
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        mat_mul(self, other)
    }

    pub fn adjoint(&self) -> Self {
        adjoint(self)
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = self.data[j * n + i];
            }
        }
        out
    }

    pub fn trace(&self) -> ComplexScalar {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: ComplexScalar) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(ComplexScalar::new(s, 0.0))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖a − a†‖_max`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(a + a†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = 0.5 * (self[(i, j)] + self[(j, i)].conj());
            }
        }
        out
    }

    /// `max |a_ij − b_ij|`; panics on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[ComplexScalar]) -> Result<Vec<ComplexScalar>> {
        if v.len() != self.dim {
            return Err(Error::Usage(format!(
                "vector length {} does not match matrix dimension {}",
                v.len(),
                self.dim
            )));
        }
        let n = self.dim;
        Ok((0..n)
            .map(|i| (0..n).map(|k| self.data[i * n + k] * v[k]).sum())
            .collect())
    }

    /// Column-stacked vectorization: entry `(i, j)` lands at `j * dim + i`.
    pub fn vectorize(&self) -> Vec<ComplexScalar> {
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self[(i, j)];
            }
        }
        out
    }

    /// Inverse of [`ComplexMatrix::vectorize`].
    pub fn unvectorize(v: &[ComplexScalar]) -> Result<Self> {
        let n = (v.len() as f64).sqrt().round() as usize;
        if n * n != v.len() {
            return Err(Error::Usage(format!("length {} is not a square", v.len())));
        }
        Self::from_fn(n, |i, j| v[j * n + i])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = ComplexScalar;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &ComplexScalar {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ComplexScalar {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({0}x{0}) [", self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:>+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// Operator forms panic on dimension mismatch; use `mat_mul` for the checked variant.
impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        mat_mul(self, rhs).expect("matrix dimensions must agree")
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions must agree");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions must agree");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim != b.dim {
        return Err(Error::Usage(format!(
            "cannot multiply {0}x{0} by {1}x{1}",
            a.dim, b.dim
        )));
    }
    let n = a.dim;
    let mut data = vec![ZERO; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a.data[i * n + k];
            if aik == ZERO {
                continue;
            }
            for j in 0..n {
                data[i * n + j] += aik * b.data[k * n + j];
            }
        }
    }
    Ok(ComplexMatrix { dim: n, data })
}

/// Conjugate transpose.
pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim;
    let mut out = a.clone();
    for i in 0..n {
        for j in 0..n {
            out.data[i * n + j] = a.data[j * n + i].conj();
        }
    }
    out
}

/// Kronecker product `a ⊗ b`, with `a` acting on the first (most significant) index.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim * b.dim;
    if n != 4 && n != 16 {
        return Err(Error::Usage(format!(
            "kron of {}x{} and {}x{} gives unsupported dimension {n}",
            a.dim, a.dim, b.dim, b.dim
        )));
    }
    let nb = b.dim;
    ComplexMatrix::from_fn(n, |r, c| a[(r / nb, c / nb)] * b[(r % nb, c % nb)])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, vec![ZERO, -I, I, ZERO]).expect("2x2")
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
    /// Number of Jacobi sweeps performed.
    pub sweeps: usize,
}

impl HermitianEigenDecomposition {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_eigenvalues(|l| l)
    }

    /// `V diag(f(λ)) V†`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.dim;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| v[(i, k)] * fl[k] * v[(j, k)].conj()).sum()
        })
        .expect("same dimension as input")
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
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

/// Eigenvalues and eigenvectors of a Hermitian matrix by cyclic Jacobi rotations.
///
/// The input is first replaced by its Hermitian part; inputs whose
/// anti-Hermitian part exceeds [`HERMITIAN_TOL`] are rejected. Sweeps continue
/// until the off-diagonal Frobenius norm drops below `1e-14 ‖a‖_F`.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigenDecomposition> {
    let dev = a.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::Domain(format!(
            "matrix is not Hermitian (‖a − a†‖_max = {dev:.3e})"
        )));
    }
    let mut m = a.hermitian_part();
    let n = m.dim;
    let mut v = ComplexMatrix::identity(n)?;
    let threshold = JACOBI_REL_TOL * m.frobenius_norm();

    let mut sweeps = 0;
    while off_diagonal_norm(&m) > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off_diagonal_norm(&m),
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])])?;
    Ok(HermitianEigenDecomposition {
        eigenvalues,
        eigenvectors,
        sweeps,
    })
}

/// Annihilates `m[p][q]` with a unitary `J = D R`, where `D` removes the phase
/// of `m[p][q]` and `R` is the real symmetric Schur rotation.
fn jacobi_rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let jpp = ComplexScalar::new(c, 0.0);
    let jpq = ComplexScalar::new(s, 0.0);
    let jqp = -s * phase.conj();
    let jqq = c * phase.conj();

    let n = m.dim;
    // M ← M J
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * jpp + mkq * jqp;
        m[(k, q)] = mkp * jpq + mkq * jqq;
    }
    // M ← J† M
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = jpp.conj() * mpk + jqp.conj() * mqk;
        m[(q, k)] = jpq.conj() * mpk + jqq.conj() * mqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = ComplexScalar::new(m[(p, p)].re, 0.0);
    m[(q, q)] = ComplexScalar::new(m[(q, q)].re, 0.0);
    // V ← V J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues in `[-1e-10, 0)` are treated as zero.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(a)?;
    if let Some(&min) = eig.eigenvalues.first() {
        if min < -HERMITIAN_TOL {
            return Err(Error::Domain(format!(
                "not positive semidefinite (smallest eigenvalue {min:.3e})"
            )));
        }
    }
    Ok(eig.map_eigenvalues(|l| l.max(0.0).sqrt()))
}

/// Solution of a dense linear system together with its residual.
#[derive(Debug, Clone)]
pub struct LinearSolution {
    pub x: Vec<ComplexScalar>,
    /// `‖a x − rhs‖_max`.
    pub residual: f64,
}

/// Solves `a x = rhs` by Gaussian elimination with partial pivoting.
pub fn solve_linear(a: &ComplexMatrix, rhs: &[ComplexScalar]) -> Result<LinearSolution> {
    let n = a.dim;
    if rhs.len() != n {
        return Err(Error::Usage(format!(
            "right-hand side has length {}, expected {n}",
            rhs.len()
        )));
    }
    let threshold = PIVOT_REL_TOL * a.max_abs();
    let mut m = a.data.clone();
    let mut b = rhs.to_vec();

    for col in 0..n {
        let (piv_row, piv_mag) = (col..n)
            .map(|r| (r, m[r * n + col].norm()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv_mag < threshold || piv_mag == 0.0 {
            return Err(Error::Singular {
                pivot: piv_mag,
                threshold,
            });
        }
        if piv_row != col {
            for j in 0..n {
                m.swap(col * n + j, piv_row * n + j);
            }
            b.swap(col, piv_row);
        }
        let pivot = m[col * n + col];
        for r in col + 1..n {
            let factor = m[r * n + col] / pivot;
            if factor == ZERO {
                continue;
            }
            for j in col..n {
                let upper = m[col * n + j];
                m[r * n + j] -= factor * upper;
            }
            let bc = b[col];
            b[r] -= factor * bc;
        }
    }

    let mut x = vec![ZERO; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in i + 1..n {
            acc -= m[i * n + j] * x[j];
        }
        x[i] = acc / m[i * n + i];
    }

    let ax = a.mul_vec(&x)?;
    let residual = ax
        .iter()
        .zip(rhs)
        .map(|(l, r)| (l - r).norm())
        .fold(0.0, f64::max);
    if x.iter().any(|z| !z.is_finite()) {
        return Err(Error::Numeric("linear solve produced non-finite values".into()));
    }
    Ok(LinearSolution { x, residual })
}
