//! Payoff operators on the joint strategy space and the trace formula
//! `E^i = Tr(rho^S H^i)`.
//!
//! Joint basis vectors `|mu_1, ..., mu_N>` are ordered player-1-major, the
//! same convention as [`ComplexMatrix::kron`]. For a game with initial state
//! `rho_0` and scale `P^i` the entries are
//!
//! ```text
//! H^i[mu][nu] = tr(P^i M_nu rho_0 M_mu^dagger),   M_mu = mu_N ... mu_1
//! ```
//!
//! which is the Hermitian form whose value on the coefficient vector of a
//! pure profile equals the directly evaluated payoff.
//!
//! A player with a classical basis plays the basis elements and their
//! probabilistic mixtures only, so entries with `mu_i != nu_i` for such a
//! player are never reached by an admissible state and are set to zero. For
//! the penny-flip game this leaves exactly the diagonal payoff table.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{compose, manipulative_payoff, GameDefinition, PureProfile, TableGame};
use crate::linalg::{c, ComplexMatrix, DEFAULT_TOL, ZERO};
use crate::opspace::{pure_strategy_state, BasisKind, OperatorBasis, StrategyDensity};
use crate::sampling::random_unitary_in_span;

/// Largest imaginary part tolerated in `Tr(rho H)`.
pub const TRACE_IMAGINARY_TOL: f64 = 1e-9;
/// Pass threshold for [`consistency_check`].
pub const CONSISTENCY_TOL: f64 = 1e-10;
const EXHAUSTIVE_PROFILE_LIMIT: usize = 4096;

/// Mixed-radix indexing of the joint basis, player 1 most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointIndex {
    dims: Vec<usize>,
}

impl JointIndex {
    pub fn new(dims: Vec<usize>) -> Self {
        Self { dims }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn size(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.dims.len()];
        for (slot, &d) in digits.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        digits
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&digit, &d)| acc * d + digit)
    }

    /// All joint indices, decoded.
    pub fn all(&self) -> Vec<Vec<usize>> {
        (0..self.size()).map(|k| self.decode(k)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PayoffOperator {
    player: usize,
    matrix: ComplexMatrix,
}

impl PayoffOperator {
    pub fn new(player: usize, matrix: ComplexMatrix) -> Result<Self> {
        let residual = matrix.hermitian_residual();
        if residual > DEFAULT_TOL {
            return Err(Error::NotHermitian { residual });
        }
        Ok(Self { player, matrix })
    }

    pub fn player(&self) -> usize {
        self.player
    }

    pub fn joint_dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Same operator with every entry multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            player: self.player,
            matrix: self.matrix.scale(c(factor, 0.0)),
        }
    }
}

/// Evolution operators `M_mu` for every joint basis vector.
fn monomials(g: &GameDefinition, index: &JointIndex) -> Result<Vec<ComplexMatrix>> {
    (0..index.size())
        .map(|k| {
            let digits = index.decode(k);
            let factors: Vec<ComplexMatrix> = digits
                .iter()
                .zip(g.players())
                .map(|(&mu, p)| p.basis.element(mu).clone())
                .collect();
            compose(&factors)
        })
        .collect()
}

/// Whether entry `(mu, nu)` survives the classical-player restriction.
fn admissible_pairs(g: &GameDefinition, index: &JointIndex) -> Vec<bool> {
    let classical: Vec<bool> = g
        .players()
        .iter()
        .map(|p| p.basis.kind() == BasisKind::Classical)
        .collect();
    let digits = index.all();
    let n = digits.len();
    let mut keep = vec![true; n * n];
    for (mu, dm) in digits.iter().enumerate() {
        for (nu, dn) in digits.iter().enumerate() {
            keep[mu * n + nu] = dm
                .iter()
                .zip(dn)
                .zip(&classical)
                .all(|((a, b), &cl)| !cl || a == b);
        }
    }
    keep
}

fn operator_from_monomials(
    g: &GameDefinition,
    player: usize,
    mono: &[ComplexMatrix],
    keep: &[bool],
) -> Result<PayoffOperator> {
    let scale = &g.player(player)?.scale;
    let rho0 = g.initial_state();
    let n = mono.len();
    // B_nu = P M_nu rho_0, so H[mu][nu] = sum_ab B_nu[a][b] conj(M_mu[a][b])
    let right: Vec<ComplexMatrix> = mono.iter().map(|m| &(scale * m) * rho0).collect();
    let mut entries = vec![ZERO; n * n];
    for mu in 0..n {
        for nu in mu..n {
            if !keep[mu * n + nu] {
                continue;
            }
            let v = right[nu]
                .as_slice()
                .iter()
                .zip(mono[mu].as_slice())
                .map(|(b, m)| b * m.conj())
                .sum();
            entries[mu * n + nu] = v;
            entries[nu * n + mu] = if mu == nu { c(v.re, 0.0) } else { v.conj() };
        }
    }
    let matrix = ComplexMatrix::from_fn(n, |r, col| entries[r * n + col])?;
    PayoffOperator::new(player, matrix)
}

/// `H^i` for player `i` (0-based).
pub fn build_payoff_operator(g: &GameDefinition, i: usize) -> Result<PayoffOperator> {
    g.ensure_valid()?;
    g.player(i)?;
    let index = JointIndex::new(g.players().iter().map(|p| p.basis.len()).collect());
    let mono = monomials(g, &index)?;
    operator_from_monomials(g, i, &mono, &admissible_pairs(g, &index))
}

/// `diag(G^i(mu))` in joint-basis order.
pub fn classical_payoff_operator(t: &TableGame, i: usize) -> Result<PayoffOperator> {
    let table = t.table(i)?;
    Ok(PayoffOperator {
        player: i,
        matrix: ComplexMatrix::from_diag(table)?,
    })
}

/// Payoff operators for every player of one game, built once.
#[derive(Clone, Debug, PartialEq)]
pub struct PayoffSet {
    bases: Vec<Arc<OperatorBasis>>,
    operators: Vec<PayoffOperator>,
}

impl PayoffSet {
    pub fn from_game(g: &GameDefinition) -> Result<Self> {
        g.ensure_valid()?;
        let index = JointIndex::new(g.players().iter().map(|p| p.basis.len()).collect());
        let mono = monomials(g, &index)?;
        let keep = admissible_pairs(g, &index);
        let operators = (0..g.num_players())
            .map(|i| operator_from_monomials(g, i, &mono, &keep))
            .collect::<Result<_>>()?;
        Ok(Self {
            bases: g.bases(),
            operators,
        })
    }

    pub fn from_table(t: &TableGame) -> Result<Self> {
        let operators = (0..t.num_players())
            .map(|i| classical_payoff_operator(t, i))
            .collect::<Result<_>>()?;
        Ok(Self {
            bases: vec![Arc::clone(t.basis()); t.num_players()],
            operators,
        })
    }

    /// Assembles a set from explicit operators; each must be Hermitian and
    /// sized to the product of the basis sizes.
    pub fn from_parts(bases: Vec<Arc<OperatorBasis>>, operators: Vec<PayoffOperator>) -> Result<Self> {
        let joint: usize = bases.iter().map(|b| b.len()).product();
        if bases.len() != operators.len() {
            return Err(Error::LengthMismatch {
                expected: bases.len(),
                found: operators.len(),
            });
        }
        for h in &operators {
            if h.joint_dim() != joint {
                return Err(Error::DimensionMismatch {
                    left: h.joint_dim(),
                    right: joint,
                });
            }
        }
        Ok(Self { bases, operators })
    }

    pub fn num_players(&self) -> usize {
        self.operators.len()
    }

    pub fn bases(&self) -> &[Arc<OperatorBasis>] {
        &self.bases
    }

    pub fn operators(&self) -> &[PayoffOperator] {
        &self.operators
    }

    pub fn operator(&self, i: usize) -> &PayoffOperator {
        &self.operators[i]
    }

    pub fn joint_index(&self) -> JointIndex {
        JointIndex::new(self.bases.iter().map(|b| b.len()).collect())
    }

    /// Every operator multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            bases: self.bases.clone(),
            operators: self.operators.iter().map(|h| h.scaled(factor)).collect(),
        }
    }

    pub fn joint_state(&self, states: &[StrategyDensity]) -> Result<JointStrategyState> {
        joint_state(states, &self.bases)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JointStrategyState {
    matrix: ComplexMatrix,
    factorized: Option<Vec<StrategyDensity>>,
}

impl JointStrategyState {
    /// A possibly correlated joint state, given directly.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        if let Some(why) = matrix.density_violation(DEFAULT_TOL) {
            return Err(Error::NotDensity(why));
        }
        Ok(Self {
            matrix,
            factorized: None,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn factors(&self) -> Option<&[StrategyDensity]> {
        self.factorized.as_deref()
    }
}

/// `rho^S = rho^1 (x) ... (x) rho^N`, player 1 major.
pub fn joint_state(states: &[StrategyDensity], bases: &[Arc<OperatorBasis>]) -> Result<JointStrategyState> {
    if states.len() != bases.len() {
        return Err(Error::LengthMismatch {
            expected: bases.len(),
            found: states.len(),
        });
    }
    for (k, (s, b)) in states.iter().zip(bases).enumerate() {
        if !Arc::ptr_eq(s.basis(), b) && **s.basis() != **b {
            return Err(Error::InvalidProfile(format!(
                "player {} state is over a different basis",
                k + 1
            )));
        }
    }
    let Some(first) = states.first() else {
        return Err(Error::InvalidProfile("no player states".into()));
    };
    let matrix = states[1..]
        .iter()
        .fold(first.rho().clone(), |acc, s| acc.kron(s.rho()));
    Ok(JointStrategyState {
        matrix,
        factorized: Some(states.to_vec()),
    })
}

/// `Re Tr(rho H)`.
pub fn expected_payoff(s: &JointStrategyState, h: &PayoffOperator) -> Result<f64> {
    let (rho, hm) = (s.matrix(), h.matrix());
    if rho.dim() != hm.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: hm.dim(),
        });
    }
    let n = rho.dim();
    let mut tr = ZERO;
    for r in 0..n {
        for k in 0..n {
            tr += rho[(r, k)] * hm[(k, r)];
        }
    }
    if tr.im.abs() > TRACE_IMAGINARY_TOL {
        return Err(Error::ComplexPayoff {
            residual: tr.im.abs(),
        });
    }
    Ok(tr.re)
}

fn random_pure_strategy(basis: &OperatorBasis, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    if basis.kind() == BasisKind::Classical {
        let k = rng.gen_range(0..basis.len());
        let phase = c(0.0, rng.gen_range(0.0..std::f64::consts::TAU)).exp();
        basis.element(k).scale(phase)
    } else {
        random_unitary_in_span(basis, rng)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConsistencyReport {
    /// Random profiles drawn.
    pub trials: usize,
    /// Basis-element profiles checked exhaustively (0 when the joint basis is large).
    pub basis_profiles: usize,
    /// Worst `|trace formula - direct payoff|`, per player.
    pub max_deviation: Vec<f64>,
    pub passed: bool,
}

impl ConsistencyReport {
    pub fn worst(&self) -> f64 {
        self.max_deviation.iter().copied().fold(0.0, f64::max)
    }
}

/// Compares the trace formula against direct evaluation of the game on
/// every basis-element profile (when there are at most 4096) and on
/// `trials` random pure profiles. Players with a classical basis draw a
/// phased basis element; the others draw a unitary inside their span.
pub fn consistency_check(g: &GameDefinition, trials: usize, seed: u64) -> Result<ConsistencyReport> {
    let set = PayoffSet::from_game(g)?;
    let index = set.joint_index();
    let mut worst = vec![0.0f64; g.num_players()];

    let mut check = |strategies: Vec<ComplexMatrix>| -> Result<()> {
        let states = strategies
            .iter()
            .zip(set.bases())
            .map(|(u, b)| pure_strategy_state(u, b))
            .collect::<Result<Vec<_>>>()?;
        let joint = set.joint_state(&states)?;
        let direct = manipulative_payoff(g, &PureProfile::new(strategies))?;
        for (i, h) in set.operators().iter().enumerate() {
            let traced = expected_payoff(&joint, h)?;
            worst[i] = worst[i].max((traced - direct[i]).abs());
        }
        Ok(())
    };

    let basis_profiles = if index.size() <= EXHAUSTIVE_PROFILE_LIMIT {
        for digits in index.all() {
            let strategies = digits
                .iter()
                .zip(set.bases())
                .map(|(&mu, b)| b.element(mu).clone())
                .collect();
            check(strategies)?;
        }
        index.size()
    } else {
        0
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let strategies = g
            .players()
            .iter()
            .map(|p| random_pure_strategy(&p.basis, &mut rng))
            .collect();
        check(strategies)?;
    }

    let passed = worst.iter().all(|&w| w <= CONSISTENCY_TOL);
    Ok(ConsistencyReport {
        trials,
        basis_profiles,
        max_deviation: worst,
        passed,
    })
}
