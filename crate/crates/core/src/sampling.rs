//! Seeded random draws used by the consistency check and the solver.

use std::f64::consts::PI;

use rand::Rng;

use crate::linalg::{c, orthonormalize_columns, Complex, ComplexMatrix};
use crate::opspace::{OperatorBasis, UnitaryParams};

const INVOLUTION_TOL: f64 = 1e-12;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller; one draw per call keeps the stream easy to reason about
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Complex Gaussian (Ginibre) matrix.
pub fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::build(dim, |_, _| c(gaussian(rng), gaussian(rng)))
}

pub fn random_params<R: Rng + ?Sized>(rng: &mut R) -> UnitaryParams {
    let mut angle = || rng.gen_range(0.0..4.0 * PI);
    UnitaryParams::new(angle(), angle(), angle(), angle())
}

/// Unitary from orthonormalised Ginibre columns.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        if let Ok(u) = orthonormalize_columns(&ginibre(dim, rng)) {
            return u;
        }
    }
}

/// Random density matrix `G G^dagger / tr`.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    let raw = &g * &g.adjoint();
    let tr = raw.trace().re;
    raw.scale(c(1.0 / tr, 0.0)).hermitian_part()
}

/// Random probability vector (normalised exponential weights).
pub fn random_pdf<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// A random unitary inside the span of `basis`.
///
/// Complete bases give an unrestricted random unitary (Euler angles on a
/// qubit). Otherwise a pair `A, B` with `A^dagger B` Hermitian and squaring
/// to `I` yields `e^{i phi}(cos t A + i sin t B)`; failing that, a phased
/// basis element.
pub fn random_unitary_in_span<R: Rng + ?Sized>(basis: &OperatorBasis, rng: &mut R) -> ComplexMatrix {
    let d = basis.object_dim();
    if basis.is_complete() {
        return if d == 2 {
            random_params(rng).to_unitary()
        } else {
            random_unitary(d, rng)
        };
    }
    let n = basis.len();
    let phase = Complex::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n);
    let (ea, eb) = (basis.element(a), basis.element(b));
    if a != b {
        let k = &ea.adjoint() * eb;
        let involutive = (&k * &k)
            .max_abs_diff(&ComplexMatrix::identity(d))
            .map(|r| r <= INVOLUTION_TOL)
            .unwrap_or(false);
        if k.is_hermitian(INVOLUTION_TOL) && involutive {
            let t = rng.gen_range(0.0..2.0 * PI);
            let mix = &ea.scale(c(t.cos(), 0.0)) + &eb.scale(c(0.0, t.sin()));
            return mix.scale(phase);
        }
    }
    ea.scale(phase)
}
