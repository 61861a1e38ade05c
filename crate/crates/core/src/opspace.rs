//! The Hilbert space of operators acting on a game object.
//!
//! An [`OperatorBasis`] is an ordered set of unitaries that is orthonormal
//! under `<A|B> = Tr(A^dagger B) / Tr(I)`. Strategies are expanded over such a
//! basis and a player's strategy state is a density matrix on the coefficient
//! space ([`StrategyDensity`]).

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{c, Complex, ComplexMatrix, DEFAULT_TOL, I, ONE, ZERO};

/// Elements of a basis must be unitary and orthonormal to within this.
pub const BASIS_TOL: f64 = 1e-10;
/// Largest reconstruction residual [`decompose`] accepts.
pub const SPAN_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    Classical,
    Quantum,
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorBasis {
    object_dim: usize,
    elements: Vec<ComplexMatrix>,
    labels: Vec<String>,
    kind: BasisKind,
}

/// `Tr(a^dagger b) / dim`.
pub fn inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let s: Complex = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(s / a.dim() as f64)
}

fn shift(d: usize) -> ComplexMatrix {
    ComplexMatrix::build(d, |r, col| if r == (col + 1) % d { ONE } else { ZERO })
}

fn clock(d: usize) -> ComplexMatrix {
    ComplexMatrix::build(d, |r, col| {
        if r == col {
            Complex::from_polar(1.0, 2.0 * PI * r as f64 / d as f64)
        } else {
            ZERO
        }
    })
}

fn power(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
    (0..k).fold(ComplexMatrix::identity(m.dim()), |acc, _| &acc * m)
}

/// The Pauli basis `(I, X, Y, Z)`, in that order.
pub fn pauli_basis() -> OperatorBasis {
    let x = ComplexMatrix::build(2, |r, col| if r != col { ONE } else { ZERO });
    let y = ComplexMatrix::build(2, |r, col| match (r, col) {
        (0, 1) => -I,
        (1, 0) => I,
        _ => ZERO,
    });
    let z = ComplexMatrix::build(2, |r, col| match (r, col) {
        (0, 0) => ONE,
        (1, 1) => -ONE,
        _ => ZERO,
    });
    OperatorBasis {
        object_dim: 2,
        elements: vec![ComplexMatrix::identity(2), x, y, z],
        labels: ["I", "X", "Y", "Z"].map(String::from).to_vec(),
        kind: BasisKind::Quantum,
    }
}

/// Permutation strategies on a `d`-state classical object: `(I, X)` for a
/// coin, the cyclic shifts `(I, S, ..., S^{d-1})` for `d > 2`.
pub fn classical_basis(d: usize) -> Result<OperatorBasis> {
    if d < 2 {
        return Err(Error::InvalidBasis(format!(
            "classical basis needs at least 2 object states, got {d}"
        )));
    }
    let s = shift(d);
    let elements: Vec<ComplexMatrix> = (0..d).map(|k| power(&s, k)).collect();
    let labels = if d == 2 {
        vec!["I".to_string(), "X".to_string()]
    } else {
        (0..d)
            .map(|k| match k {
                0 => "I".to_string(),
                1 => "S".to_string(),
                _ => format!("S^{k}"),
            })
            .collect()
    };
    Ok(OperatorBasis {
        object_dim: d,
        elements,
        labels,
        kind: BasisKind::Classical,
    })
}

/// Heisenberg-Weyl clock-shift products `X^a Z^b`, `a`-major. Spans every
/// operator on a `d`-state object.
pub fn weyl_basis(d: usize) -> Result<OperatorBasis> {
    if d < 2 {
        return Err(Error::InvalidBasis(format!(
            "Weyl basis needs at least 2 object states, got {d}"
        )));
    }
    let (x, z) = (shift(d), clock(d));
    let mut elements = Vec::with_capacity(d * d);
    let mut labels = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            elements.push(&power(&x, a) * &power(&z, b));
            labels.push(format!("X^{a}Z^{b}"));
        }
    }
    Ok(OperatorBasis {
        object_dim: d,
        elements,
        labels,
        kind: BasisKind::Quantum,
    })
}

impl OperatorBasis {
    /// A user-supplied basis. Every element must be unitary and the set
    /// orthonormal, both within [`BASIS_TOL`].
    pub fn custom(elements: Vec<ComplexMatrix>, labels: Option<Vec<String>>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::InvalidBasis("basis has no elements".into()));
        };
        let d = first.dim();
        if let Some(bad) = elements.iter().position(|e| e.dim() != d) {
            return Err(Error::InvalidBasis(format!(
                "element {bad} is {0}x{0}, expected {d}x{d}",
                elements[bad].dim()
            )));
        }
        if elements.len() > d * d {
            return Err(Error::InvalidBasis(format!(
                "{} elements exceed the operator-space dimension {}",
                elements.len(),
                d * d
            )));
        }
        let labels = match labels {
            Some(l) if l.len() != elements.len() => {
                return Err(Error::LengthMismatch {
                    expected: elements.len(),
                    found: l.len(),
                })
            }
            Some(l) => l,
            None => (0..elements.len()).map(|k| format!("B{k}")).collect(),
        };
        let basis = Self {
            object_dim: d,
            elements,
            labels,
            kind: BasisKind::Custom,
        };
        basis.verify_orthonormal(BASIS_TOL)?;
        Ok(basis)
    }

    pub fn object_dim(&self) -> usize {
        self.object_dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &ComplexMatrix {
        &self.elements[k]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, k: usize) -> &str {
        &self.labels[k]
    }

    /// True when the basis spans every operator on the object.
    pub fn is_complete(&self) -> bool {
        self.len() == self.object_dim * self.object_dim
    }

    /// Worst deviation of the Gram matrix from the identity.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (m, a) in self.elements.iter().enumerate() {
            for (n, b) in self.elements.iter().enumerate() {
                let expected = if m == n { ONE } else { ZERO };
                let g = inner(a, b).expect("same object dimension");
                worst = worst.max((g - expected).norm());
            }
        }
        worst
    }

    pub fn verify_orthonormal(&self, tol: f64) -> Result<()> {
        for (k, e) in self.elements.iter().enumerate() {
            let residual = e.unitarity_residual();
            if residual > tol {
                return Err(Error::InvalidBasis(format!(
                    "element {} ({}) is not unitary (residual {residual:e})",
                    k, self.labels[k]
                )));
            }
        }
        let residual = self.orthonormality_residual();
        if residual > tol {
            return Err(Error::InvalidBasis(format!(
                "elements are not orthonormal (residual {residual:e})"
            )));
        }
        Ok(())
    }
}

/// Expansion coefficients of an operator over a basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientVector(pub Vec<Complex>);

impl CoefficientVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.0
    }
}

/// Coefficients `c[mu] = <basis[mu] | u>`. Errors when `u` is not in the span.
pub fn decompose(u: &ComplexMatrix, basis: &OperatorBasis) -> Result<CoefficientVector> {
    if u.dim() != basis.object_dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: basis.object_dim(),
        });
    }
    let coeffs = CoefficientVector(
        basis
            .elements()
            .iter()
            .map(|b| inner(b, u))
            .collect::<Result<_>>()?,
    );
    let back = reconstruct(&coeffs, basis)?;
    let residual = back.max_abs_diff(u)?;
    if residual > SPAN_TOL {
        return Err(Error::OutsideSpan { residual });
    }
    Ok(coeffs)
}

/// `sum_mu c[mu] basis[mu]`.
pub fn reconstruct(coeffs: &CoefficientVector, basis: &OperatorBasis) -> Result<ComplexMatrix> {
    if coeffs.len() != basis.len() {
        return Err(Error::LengthMismatch {
            expected: basis.len(),
            found: coeffs.len(),
        });
    }
    let d = basis.object_dim();
    let mut acc = ComplexMatrix::zeros(d);
    for (z, b) in coeffs.0.iter().zip(basis.elements()) {
        if *z != ZERO {
            acc = &acc + &b.scale(*z);
        }
    }
    Ok(acc)
}

/// Euler-angle parameters of a 2x2 unitary (global phase `alpha`).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct UnitaryParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl UnitaryParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    /// Pauli coefficients `(I, X, Y, Z)` of the unitary.
    pub fn pauli_coefficients(&self) -> [Complex; 4] {
        let Self {
            alpha,
            beta,
            gamma,
            delta,
        } = *self;
        let phase = Complex::from_polar(1.0, alpha);
        let (sg, cg) = (gamma / 2.0).sin_cos();
        let (sp, cp) = ((beta + delta) / 2.0).sin_cos();
        let (sm, cm) = ((beta - delta) / 2.0).sin_cos();
        [
            phase * c(cg * cp, 0.0),
            phase * c(0.0, sg * sm),
            phase * c(0.0, -sg * cm),
            phase * c(0.0, -cg * sp),
        ]
    }

    pub fn to_unitary(&self) -> ComplexMatrix {
        let [ci, cx, cy, cz] = self.pauli_coefficients();
        // I, X, Y, Z written out
        ComplexMatrix::build(2, |r, col| match (r, col) {
            (0, 0) => ci + cz,
            (1, 1) => ci - cz,
            (0, 1) => cx - I * cy,
            (1, 0) => cx + I * cy,
            _ => unreachable!(),
        })
    }
}

pub fn unitary_from_params(p: &UnitaryParams) -> ComplexMatrix {
    p.to_unitary()
}

/// A player's strategy state: a density matrix on the coefficient space of
/// `basis`.
#[derive(Clone, Debug, PartialEq)]
pub struct StrategyDensity {
    basis: Arc<OperatorBasis>,
    rho: ComplexMatrix,
}

impl StrategyDensity {
    pub fn new(basis: Arc<OperatorBasis>, rho: ComplexMatrix) -> Result<Self> {
        if rho.dim() != basis.len() {
            return Err(Error::DimensionMismatch {
                left: rho.dim(),
                right: basis.len(),
            });
        }
        if let Some(why) = rho.density_violation(DEFAULT_TOL) {
            return Err(Error::NotDensity(why));
        }
        Ok(Self { basis, rho })
    }

    /// Skips validation; for states produced by convex combination of valid ones.
    pub(crate) fn from_parts(basis: Arc<OperatorBasis>, rho: ComplexMatrix) -> Self {
        Self { basis, rho }
    }

    /// The rank-1 state `|c><c| / <c|c>` for an arbitrary coefficient vector.
    pub fn from_coefficients(coeffs: &CoefficientVector, basis: Arc<OperatorBasis>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::LengthMismatch {
                expected: basis.len(),
                found: coeffs.len(),
            });
        }
        let norm = coeffs.norm_sqr();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotDensity("zero coefficient vector".into()));
        }
        let rho = ComplexMatrix::outer(coeffs.as_slice())?.scale(c(1.0 / norm, 0.0));
        Ok(Self { basis, rho })
    }

    /// Uniform diagonal mixture over the basis.
    pub fn maximally_mixed(basis: Arc<OperatorBasis>) -> Self {
        let n = basis.len();
        let rho = ComplexMatrix::build(n, |r, col| {
            if r == col {
                c(1.0 / n as f64, 0.0)
            } else {
                ZERO
            }
        });
        Self { basis, rho }
    }

    pub fn basis(&self) -> &Arc<OperatorBasis> {
        &self.basis
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// Largest off-diagonal modulus.
    pub fn off_diagonal_max(&self) -> f64 {
        let n = self.rho.dim();
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for col in 0..n {
                if r != col {
                    worst = worst.max(self.rho[(r, col)].norm());
                }
            }
        }
        worst
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.off_diagonal_max() <= tol
    }
}

/// Rank-1 strategy state of the unitary `u`. Global phases cancel.
pub fn pure_strategy_state(u: &ComplexMatrix, basis: &Arc<OperatorBasis>) -> Result<StrategyDensity> {
    let coeffs = decompose(u, basis)?;
    let norm = coeffs.norm_sqr();
    if (norm - 1.0).abs() > SPAN_TOL {
        return Err(Error::NotUnitary {
            residual: (norm - 1.0).abs(),
        });
    }
    StrategyDensity::from_coefficients(&coeffs, Arc::clone(basis))
}

/// Diagonal strategy state from a probability distribution over the basis.
pub fn classical_mixture_state(pdf: &[f64], basis: &Arc<OperatorBasis>) -> Result<StrategyDensity> {
    if pdf.len() != basis.len() {
        return Err(Error::LengthMismatch {
            expected: basis.len(),
            found: pdf.len(),
        });
    }
    if let Some((k, p)) = pdf.iter().enumerate().find(|(_, p)| !p.is_finite() || **p < 0.0) {
        return Err(Error::InvalidDistribution(format!("weight {k} is {p}")));
    }
    let total: f64 = pdf.iter().sum();
    if (total - 1.0).abs() > DEFAULT_TOL {
        return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
    }
    Ok(StrategyDensity {
        basis: Arc::clone(basis),
        rho: ComplexMatrix::from_diag(pdf)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::orthonormalize_columns;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn pauli() -> Arc<OperatorBasis> {
        Arc::new(pauli_basis())
    }

    fn close(a: Complex, b: Complex, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn inner_examples() {
        let b = pauli_basis();
        let (id, x, y) = (b.element(0), b.element(1), b.element(2));
        assert_eq!(inner(id, id).unwrap(), ONE);
        assert_eq!(inner(x, y).unwrap(), ZERO);
        assert_eq!(inner(x, x).unwrap(), ONE);
        assert!(inner(id, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn pauli_basis_layout() {
        let b = pauli_basis();
        assert_eq!(b.len(), 4);
        assert_eq!(b.element(0), &ComplexMatrix::identity(2));
        assert_eq!(b.element(2)[(0, 1)], -I);
        assert_eq!(b.element(2)[(1, 0)], I);
        assert_eq!(b.labels(), &["I", "X", "Y", "Z"]);
        b.verify_orthonormal(1e-12).unwrap();
        assert!(b.is_complete());
    }

    #[test]
    fn classical_basis_examples() {
        let b2 = classical_basis(2).unwrap();
        assert_eq!(b2.len(), 2);
        assert_eq!(b2.element(0), &ComplexMatrix::identity(2));
        assert_eq!(b2.element(1), pauli_basis().element(1));
        assert_eq!(b2.kind(), BasisKind::Classical);

        let b3 = classical_basis(3).unwrap();
        assert_eq!(b3.len(), 3);
        let s = b3.element(1);
        assert_eq!(&(s * s), b3.element(2));
        for d in 2..=4 {
            classical_basis(d).unwrap().verify_orthonormal(1e-12).unwrap();
        }
        assert!(classical_basis(1).is_err());
        assert!(classical_basis(0).is_err());
    }

    #[test]
    fn weyl_basis_is_orthonormal_and_complete() {
        for d in 2..=4 {
            let b = weyl_basis(d).unwrap();
            assert_eq!(b.len(), d * d);
            b.verify_orthonormal(1e-12).unwrap();
        }
    }

    #[test]
    fn custom_basis_validation() {
        let p = pauli_basis();
        let ok = OperatorBasis::custom(vec![p.element(0).clone(), p.element(3).clone()], None).unwrap();
        assert_eq!(ok.kind(), BasisKind::Custom);
        let dup = OperatorBasis::custom(vec![p.element(1).clone(), p.element(1).clone()], None);
        assert!(matches!(dup, Err(Error::InvalidBasis(_))));
        let non_unitary = OperatorBasis::custom(vec![p.element(1).scale(c(2.0, 0.0))], None);
        assert!(non_unitary.is_err());
        assert!(OperatorBasis::custom(vec![], None).is_err());
    }

    #[test]
    fn decompose_examples() {
        let b = pauli_basis();
        let h = c(FRAC_1_SQRT_2, 0.0);
        assert_eq!(decompose(b.element(0), &b).unwrap().0, vec![ONE, ZERO, ZERO, ZERO]);

        let u = (b.element(1) + b.element(2)).scale(h);
        let coeffs = decompose(&u, &b).unwrap();
        let expected = [ZERO, h, h, ZERO];
        for (got, want) in coeffs.0.iter().zip(expected) {
            assert!(close(*got, want, 1e-15));
        }

        let hadamard = (b.element(1) + b.element(3)).scale(h);
        let coeffs = decompose(&hadamard, &b).unwrap();
        for (got, want) in coeffs.0.iter().zip([ZERO, h, ZERO, h]) {
            assert!(close(*got, want, 1e-15));
        }
    }

    #[test]
    fn decompose_rejects_operators_outside_span() {
        let classical = classical_basis(2).unwrap();
        let y = pauli_basis().element(2).clone();
        assert!(matches!(decompose(&y, &classical), Err(Error::OutsideSpan { .. })));
        assert!(matches!(
            decompose(&ComplexMatrix::identity(3), &classical),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reconstruct_examples() {
        let b = pauli_basis();
        let h = c(FRAC_1_SQRT_2, 0.0);
        let id = reconstruct(&CoefficientVector(vec![ONE, ZERO, ZERO, ZERO]), &b).unwrap();
        assert_eq!(id, ComplexMatrix::identity(2));
        let u = reconstruct(&CoefficientVector(vec![ZERO, h, h, ZERO]), &b).unwrap();
        assert!(u.max_abs_diff(&(b.element(1) + b.element(2)).scale(h)).unwrap() < 1e-15);
        assert!(matches!(
            reconstruct(&CoefficientVector(vec![ONE]), &b),
            Err(Error::LengthMismatch { expected: 4, found: 1 })
        ));
    }

    #[test]
    fn unitary_from_params_examples() {
        let b = pauli_basis();
        assert!(UnitaryParams::default()
            .to_unitary()
            .max_abs_diff(&ComplexMatrix::identity(2))
            .unwrap()
            < 1e-15);
        let alpha = 0.7;
        let phased = unitary_from_params(&UnitaryParams::new(alpha, 0.0, 0.0, 0.0));
        let expected = ComplexMatrix::identity(2).scale(Complex::from_polar(1.0, alpha));
        assert!(phased.max_abs_diff(&expected).unwrap() < 1e-15);
        let ix = unitary_from_params(&UnitaryParams::new(0.0, PI, PI, 0.0));
        assert!(ix.max_abs_diff(&b.element(1).scale(I)).unwrap() < 1e-15);
    }

    #[test]
    fn pure_state_examples() {
        let b = pauli();
        let h = c(FRAC_1_SQRT_2, 0.0);
        let u = (b.element(1) + b.element(2)).scale(h);
        let s = pure_strategy_state(&u, &b).unwrap();
        for r in 0..4 {
            for col in 0..4 {
                let want = if (1..=2).contains(&r) && (1..=2).contains(&col) { 0.5 } else { 0.0 };
                assert!(close(s.rho()[(r, col)], c(want, 0.0), 1e-15));
            }
        }
        let id = pure_strategy_state(b.element(0), &b).unwrap();
        assert_eq!(id.rho(), &ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0]).unwrap());
        let ix = pure_strategy_state(&b.element(1).scale(I), &b).unwrap();
        assert!(ix
            .rho()
            .max_abs_diff(&ComplexMatrix::from_diag(&[0.0, 1.0, 0.0, 0.0]).unwrap())
            .unwrap()
            < 1e-15);
    }

    #[test]
    fn pure_state_rejects_non_unitary() {
        let b = pauli();
        let not_unitary = b.element(1) + b.element(2);
        assert!(matches!(pure_strategy_state(&not_unitary, &b), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn classical_mixture_examples() {
        let coin = Arc::new(classical_basis(2).unwrap());
        let s = classical_mixture_state(&[0.5, 0.5], &coin).unwrap();
        assert_eq!(s.rho(), &ComplexMatrix::from_diag(&[0.5, 0.5]).unwrap());
        let s = classical_mixture_state(&[1.0, 0.0], &coin).unwrap();
        assert_eq!(s.rho(), &ComplexMatrix::from_diag(&[1.0, 0.0]).unwrap());
        let s = classical_mixture_state(&[0.25; 4], &pauli()).unwrap();
        assert_eq!(s.rho(), &ComplexMatrix::from_diag(&[0.25; 4]).unwrap());
        assert_eq!(s.off_diagonal_max(), 0.0);

        assert!(matches!(
            classical_mixture_state(&[1.5, -0.5], &coin),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            classical_mixture_state(&[0.4, 0.4], &coin),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            classical_mixture_state(&[1.0], &coin),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn strategy_density_validates() {
        let b = pauli();
        assert!(StrategyDensity::new(Arc::clone(&b), ComplexMatrix::identity(4)).is_err());
        assert!(StrategyDensity::new(Arc::clone(&b), ComplexMatrix::identity(2)).is_err());
        assert!(StrategyDensity::new(b, ComplexMatrix::from_diag(&[0.25; 4]).unwrap()).is_ok());
    }

    fn arb_params() -> impl Strategy<Value = UnitaryParams> {
        let angle = || 0.0..4.0 * PI;
        (angle(), angle(), angle(), angle()).prop_map(|(a, b, g, d)| UnitaryParams::new(a, b, g, d))
    }

    fn arb_unitary(d: usize) -> impl Strategy<Value = ComplexMatrix> {
        crate::linalg::tests::arb_matrix(d).prop_filter_map("dependent columns", |m| orthonormalize_columns(&m).ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn params_give_unitaries_that_round_trip(p in arb_params()) {
            let b = pauli_basis();
            let u = p.to_unitary();
            prop_assert!(u.is_unitary(1e-10));
            let coeffs = decompose(&u, &b).unwrap();
            for (got, want) in coeffs.0.iter().zip(p.pauli_coefficients()) {
                prop_assert!((got - want).norm() <= 1e-12);
            }
            let back = reconstruct(&coeffs, &b).unwrap();
            prop_assert!(back.max_abs_diff(&u).unwrap() <= 1e-12);
        }

        #[test]
        fn weyl_round_trip(u in (2usize..=4).prop_flat_map(arb_unitary)) {
            let b = weyl_basis(u.dim()).unwrap();
            let back = reconstruct(&decompose(&u, &b).unwrap(), &b).unwrap();
            prop_assert!(back.max_abs_diff(&u).unwrap() <= 1e-12);
        }

        #[test]
        fn pure_states_are_rank_one_and_phase_blind(p in arb_params(), theta in 0.0..2.0 * PI) {
            let b = pauli();
            let u = p.to_unitary();
            let s = pure_strategy_state(&u, &b).unwrap();
            prop_assert!(s.rho().is_density_matrix(1e-9));
            let eig = s.rho().hermitian_eigensystem(1e-12).unwrap();
            prop_assert!(eig.values[1].abs() <= 1e-10);
            let phased = pure_strategy_state(&u.scale(Complex::from_polar(1.0, theta)), &b).unwrap();
            prop_assert!(phased.rho().max_abs_diff(s.rho()).unwrap() <= 1e-12);
        }
    }
}
