//! Dense complex matrices and the handful of kernels the rest of the crate
//! needs: products, adjoints, Kronecker products, traces, a Hermitian
//! eigensolver, and validity predicates for density matrices and unitaries.
//!
//! Everything here is square. Matrices are stored row-major and indexed as
//! `m[(row, col)]`.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// Default tolerance for the validity predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_OFF_DIAGONAL: f64 = 1e-13;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const I: Complex = Complex::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn check_finite(re: f64, im: f64) -> bool {
    re.is_finite() && im.is_finite()
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = self
                .row(r)
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    /// Computed-value constructor; callers guarantee finiteness.
    pub(crate) fn build(dim: usize, f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut f = f;
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for col in 0..dim {
                data.push(f(r, col));
            }
        }
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::build(dim, |r, col| if r == col { ONE } else { ZERO })
    }

    /// Builds a matrix from a callback, rejecting non-finite values.
    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex) -> Result<Self> {
        let m = Self::build(dim, f);
        m.ensure_finite()?;
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            let lens: Vec<String> = rows.iter().map(|r| r.len().to_string()).collect();
            return Err(Error::NotSquare {
                rows: dim,
                detail: format!("[{}]", lens.join(", ")),
            });
        }
        let m = Self {
            dim,
            data: rows.into_iter().flatten().collect(),
        };
        m.ensure_finite()?;
        Ok(m)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| c(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_diag(values: &[f64]) -> Result<Self> {
        Self::from_fn(values.len(), |r, col| {
            if r == col {
                c(values[r], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// The projector `|v><v|`.
    pub fn outer(v: &[Complex]) -> Result<Self> {
        Self::from_fn(v.len(), |r, col| v[r] * v[col].conj())
    }

    fn ensure_finite(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::NotSquare {
                rows: 0,
                detail: "[]".into(),
            });
        }
        for (k, z) in self.data.iter().enumerate() {
            if !check_finite(z.re, z.im) {
                return Err(Error::NonFinite {
                    row: k / self.dim,
                    col: k % self.dim,
                });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex]> {
        self.data.chunks(self.dim.max(1))
    }

    pub fn column(&self, col: usize) -> Vec<Complex> {
        (0..self.dim).map(|r| self[(r, col)]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex> {
        (0..self.dim).map(|k| self[(k, k)]).collect()
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                let orow = &mut out[r * n..(r + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { dim: n, data: out })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::build(self.dim, |r, col| self[(col, r)].conj())
    }

    /// Kronecker product; the first factor's index varies slowest.
    pub fn kron(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        Self::build(da * db, |r, col| {
            self[(r / db, col / db)] * other[(r % db, col % db)]
        })
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    pub fn scale(&self, factor: Complex) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |a - a^dagger|` over all entries.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for col in r..n {
                worst = worst.max((self[(r, col)] - self[(col, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residual() <= tol
    }

    /// `(a + a^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::build(self.dim, |r, col| (self[(r, col)] + self[(col, r)].conj()) * 0.5)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    /// `max |a a^dagger - I|` over all entries.
    pub fn unitarity_residual(&self) -> f64 {
        let prod = self * &self.adjoint();
        prod.max_abs_diff(&Self::identity(self.dim))
            .expect("same dimension")
    }

    /// Hermitian within `tol`, unit trace within `tol`, spectrum `>= -tol`.
    pub fn is_density_matrix(&self, tol: f64) -> bool {
        self.density_violation(tol).is_none()
    }

    /// Why the matrix fails [`is_density_matrix`](Self::is_density_matrix), if it does.
    pub fn density_violation(&self, tol: f64) -> Option<String> {
        let residual = self.hermitian_residual();
        if residual > tol {
            return Some(format!("not Hermitian (residual {residual:e})"));
        }
        let tr = self.trace();
        if (tr - ONE).norm() > tol {
            return Some(format!("trace {} + {}i is not 1", tr.re, tr.im));
        }
        match self.hermitian_part().hermitian_eigensystem(f64::INFINITY) {
            Ok(eig) => {
                let min = eig.values.last().copied().unwrap_or(0.0);
                if min < -tol {
                    Some(format!("negative eigenvalue {min:e}"))
                } else {
                    None
                }
            }
            Err(e) => Some(e.to_string()),
        }
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
    /// rotations. Eigenvalues come back in descending order with the matching
    /// orthonormal eigenvectors as columns.
    pub fn hermitian_eigensystem(&self, tol: f64) -> Result<Eigensystem> {
        let residual = self.hermitian_residual();
        if residual > tol {
            return Err(Error::NotHermitian { residual });
        }
        let n = self.dim;
        let mut a = self.hermitian_part().data;
        let mut v = Self::identity(n).data;
        let target = JACOBI_REL_OFF_DIAGONAL * self.frobenius_norm();

        let off_norm = |a: &[Complex]| -> f64 {
            let mut s = 0.0;
            for r in 0..n {
                for col in 0..n {
                    if r != col {
                        s += a[r * n + col].norm_sqr();
                    }
                }
            }
            s.sqrt()
        };

        let mut converged = false;
        for _ in 0..JACOBI_MAX_SWEEPS {
            if off_norm(&a) <= target {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut a, &mut v, n, p, q);
                }
            }
        }
        if !converged {
            let off = off_norm(&a);
            if off > target {
                return Err(Error::NoConvergence {
                    sweeps: JACOBI_MAX_SWEEPS,
                    off,
                });
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| a[y * n + y].re.total_cmp(&a[x * n + x].re));
        let values = order.iter().map(|&k| a[k * n + k].re).collect();
        let vectors = Self::build(n, |r, col| v[r * n + order[col]]);
        Ok(Eigensystem { values, vectors })
    }
}

/// One two-sided rotation zeroing `a[p][q]`. The complex phase of the pivot is
/// absorbed first so the remaining 2x2 problem is real symmetric.
fn jacobi_rotate(a: &mut [Complex], v: &mut [Complex], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;
    // J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q)
    let jqp = -phase.conj() * sn;
    let jqq = phase.conj() * cs;

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * cs + akq * jqp;
        a[k * n + q] = akp * sn + akq * jqq;
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * cs + vkq * jqp;
        v[k * n + q] = vkp * sn + vkq * jqq;
    }
    for k in 0..n {
        let xpk = a[p * n + k];
        let xqk = a[q * n + k];
        a[p * n + k] = xpk * cs + xqk * jqp.conj();
        a[q * n + k] = xpk * sn + xqk * jqq.conj();
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p] = c(a[p * n + p].re, 0.0);
    a[q * n + q] = c(a[q * n + q].re, 0.0);
}

#[derive(Clone, Debug)]
pub struct Eigensystem {
    /// Descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl Eigensystem {
    pub fn vector(&self, k: usize) -> Vec<Complex> {
        self.vectors.column(k)
    }

    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.dim();
        ComplexMatrix::build(n, |r, col| {
            (0..n)
                .map(|k| self.vectors[(r, k)] * self.values[k] * self.vectors[(col, k)].conj())
                .sum()
        })
    }
}

/// Modified Gram-Schmidt on the columns of `m`. Fails if the columns are
/// numerically dependent.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.dim();
    let mut cols: Vec<Vec<Complex>> = (0..n).map(|k| m.column(k)).collect();
    for k in 0..n {
        for j in 0..k {
            let (done, rest) = cols.split_at_mut(k);
            let proj: Complex = done[j]
                .iter()
                .zip(rest[0].iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            for (x, basis) in rest[0].iter_mut().zip(done[j].iter()) {
                *x -= proj * basis;
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidBasis(format!(
                "column {k} is linearly dependent on the previous ones"
            )));
        }
        for x in cols[k].iter_mut() {
            *x /= norm;
        }
    }
    Ok(ComplexMatrix::build(n, |r, col| cols[col][r]))
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (r, col): (usize, usize)) -> &Complex {
        &self.data[r * self.dim + col]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on dimension mismatch; use [`ComplexMatrix::matmul`] for a checked product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix dimensions must agree")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix dimensions must agree")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(-ONE)
    }
}
