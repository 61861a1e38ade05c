//! Best responses, exploitability and an averaged best-response solver over
//! per-player strategy densities.
//!
//! Two notions of admissible strategy are supported. In
//! [`Mode::OperatorDensity`] any density matrix on a player's coefficient
//! space is allowed, so a best response is a top eigenvector of the effective
//! operator. In [`Mode::ClassicalDiagonal`] states are probability vectors on
//! the basis and a best response is the best single basis element.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, ZERO};
use crate::opspace::{reconstruct, CoefficientVector, OperatorBasis, StrategyDensity};
use crate::payoff::{PayoffOperator, PayoffSet};
use crate::sampling::{random_density, random_pdf};

/// Off-diagonal tolerance for states in classical-diagonal mode.
pub const CLASSICAL_OFF_DIAGONAL_TOL: f64 = 1e-12;
const EFFECTIVE_HERMITIAN_TOL: f64 = 1e-9;
const RANK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    OperatorDensity,
    ClassicalDiagonal,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::OperatorDensity => "operator",
            Mode::ClassicalDiagonal => "classical",
        })
    }
}

/// One strategy density per player plus the admissibility mode.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    states: Vec<StrategyDensity>,
    mode: Mode,
}

impl Profile {
    pub fn new(states: Vec<StrategyDensity>, mode: Mode) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidProfile("no player states".into()));
        }
        if mode == Mode::ClassicalDiagonal {
            for (k, s) in states.iter().enumerate() {
                let off = s.off_diagonal_max();
                if off > CLASSICAL_OFF_DIAGONAL_TOL {
                    return Err(Error::InvalidProfile(format!(
                        "player {} has off-diagonal entry {off:e} in classical mode",
                        k + 1
                    )));
                }
            }
        }
        Ok(Self { states, mode })
    }

    /// Every player maximally mixed over its basis.
    pub fn uniform(bases: &[Arc<OperatorBasis>], mode: Mode) -> Self {
        Self {
            states: bases
                .iter()
                .map(|b| StrategyDensity::maximally_mixed(Arc::clone(b)))
                .collect(),
            mode,
        }
    }

    pub fn states(&self) -> &[StrategyDensity] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &StrategyDensity {
        &self.states[i]
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn num_players(&self) -> usize {
        self.states.len()
    }

    pub fn into_states(self) -> Vec<StrategyDensity> {
        self.states
    }
}

/// Joint-index digits cached for repeated contractions.
struct Contraction {
    dims: Vec<usize>,
    digits: Vec<Vec<usize>>,
}

impl Contraction {
    fn new(hs: &PayoffSet) -> Self {
        let index = hs.joint_index();
        Self {
            dims: index.dims().to_vec(),
            digits: index.all(),
        }
    }

    fn check(&self, hs: &PayoffSet, p: &Profile) -> Result<()> {
        if p.num_players() != hs.num_players() {
            return Err(Error::LengthMismatch {
                expected: hs.num_players(),
                found: p.num_players(),
            });
        }
        for (k, (s, b)) in p.states().iter().zip(hs.bases()).enumerate() {
            if s.dim() != b.len() {
                return Err(Error::DimensionMismatch {
                    left: s.dim(),
                    right: b.len(),
                });
            }
            if !Arc::ptr_eq(s.basis(), b) && **s.basis() != **b {
                return Err(Error::InvalidProfile(format!(
                    "player {} state is over a different basis",
                    k + 1
                )));
            }
        }
        Ok(())
    }

    fn effective(&self, h: &ComplexMatrix, states: &[StrategyDensity], i: usize) -> ComplexMatrix {
        let n = self.digits.len();
        let di = self.dims[i];
        let mut acc = vec![ZERO; di * di];
        for (nu, dn) in self.digits.iter().enumerate() {
            for (mu, dm) in self.digits.iter().enumerate() {
                let entry = h[(nu, mu)];
                if entry == ZERO {
                    continue;
                }
                let mut w = c(1.0, 0.0);
                for (j, s) in states.iter().enumerate() {
                    if j != i {
                        w *= s.rho()[(dm[j], dn[j])];
                        if w == ZERO {
                            break;
                        }
                    }
                }
                if w != ZERO {
                    acc[dn[i] * di + dm[i]] += w * entry;
                }
            }
        }
        debug_assert_eq!(n * n, h.as_slice().len());
        ComplexMatrix::from_fn(di, |r, col| acc[r * di + col])
            .expect("contraction of finite entries is finite")
    }
}

/// `R^i` such that `E^i = Tr(rho^i R^i)` with the other players' states fixed.
pub fn effective_payoff_operator(hs: &PayoffSet, p: &Profile, i: usize) -> Result<ComplexMatrix> {
    if i >= hs.num_players() {
        return Err(Error::PlayerOutOfRange {
            index: i,
            players: hs.num_players(),
        });
    }
    let k = Contraction::new(hs);
    k.check(hs, p)?;
    Ok(k.effective(hs.operator(i).matrix(), p.states(), i))
}

fn trace_product(rho: &ComplexMatrix, r: &ComplexMatrix) -> f64 {
    let n = rho.dim();
    let mut tr = ZERO;
    for a in 0..n {
        for b in 0..n {
            tr += rho[(a, b)] * r[(b, a)];
        }
    }
    tr.re
}

fn best_response_of(r: &ComplexMatrix, basis: &Arc<OperatorBasis>, mode: Mode) -> Result<(StrategyDensity, f64)> {
    match mode {
        Mode::OperatorDensity => {
            let eig = r.hermitian_eigensystem(EFFECTIVE_HERMITIAN_TOL)?;
            let rho = ComplexMatrix::outer(&eig.vector(0))?;
            Ok((StrategyDensity::from_parts(Arc::clone(basis), rho), eig.values[0]))
        }
        Mode::ClassicalDiagonal => {
            let diag = r.diagonal();
            let mut best = 0;
            for k in 1..diag.len() {
                if diag[k].re > diag[best].re {
                    best = k;
                }
            }
            let mut pdf = vec![0.0; diag.len()];
            pdf[best] = 1.0;
            let rho = ComplexMatrix::from_diag(&pdf)?;
            Ok((StrategyDensity::from_parts(Arc::clone(basis), rho), diag[best].re))
        }
    }
}

/// Best response of player `i` in the profile's mode, with its value.
pub fn best_response(hs: &PayoffSet, p: &Profile, i: usize) -> Result<(StrategyDensity, f64)> {
    let r = effective_payoff_operator(hs, p, i)?;
    best_response_of(&r, &hs.bases()[i], p.mode())
}

/// Per-player best-response values, current payoffs and best responses.
struct Sweep {
    responses: Vec<StrategyDensity>,
    values: Vec<f64>,
    payoffs: Vec<f64>,
}

impl Sweep {
    fn run(k: &Contraction, hs: &PayoffSet, states: &[StrategyDensity], mode: Mode) -> Result<Self> {
        let mut out = Sweep {
            responses: Vec::with_capacity(states.len()),
            values: Vec::with_capacity(states.len()),
            payoffs: Vec::with_capacity(states.len()),
        };
        for (i, h) in hs.operators().iter().enumerate() {
            let r = k.effective(h.matrix(), states, i);
            let (state, value) = best_response_of(&r, &hs.bases()[i], mode)?;
            out.payoffs.push(trace_product(states[i].rho(), &r));
            out.responses.push(state);
            out.values.push(value);
        }
        Ok(out)
    }

    fn exploitability(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.payoffs)
            .map(|(v, e)| v - e)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `max_i (best response value_i - E^i)`.
pub fn exploitability(hs: &PayoffSet, p: &Profile) -> Result<f64> {
    let k = Contraction::new(hs);
    k.check(hs, p)?;
    Ok(Sweep::run(&k, hs, p.states(), p.mode())?.exploitability())
}

/// Current payoff of every player.
pub fn profile_payoffs(hs: &PayoffSet, p: &Profile) -> Result<Vec<f64>> {
    let joint = hs.joint_state(p.states())?;
    hs.operators()
        .iter()
        .map(|h: &PayoffOperator| crate::payoff::expected_payoff(&joint, h))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub mode: Mode,
    pub eps: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            mode: Mode::OperatorDensity,
            eps: 1e-3,
            max_iters: 1_000_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub profile: Profile,
    pub exploitability: f64,
    pub payoffs: Vec<f64>,
    /// Averaging steps performed.
    pub iterations: usize,
    pub converged: bool,
}

fn initial_profile(hs: &PayoffSet, mode: Mode, seed: u64) -> Result<Profile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states = hs
        .bases()
        .iter()
        .map(|b| {
            let rho = match mode {
                Mode::OperatorDensity => random_density(b.len(), &mut rng),
                Mode::ClassicalDiagonal => ComplexMatrix::from_diag(&random_pdf(b.len(), &mut rng))?,
            };
            Ok(StrategyDensity::from_parts(Arc::clone(b), rho))
        })
        .collect::<Result<Vec<_>>>()?;
    Profile::new(states, mode)
}

/// Fictitious-play style search. Starting from a seeded random profile, step
/// `t` moves every player toward its best response against the current
/// profile with weight `1/(t+1)`. Stops as soon as exploitability is at most
/// `eps`, or after `max_iters` steps.
pub fn solve(hs: &PayoffSet, opts: &SolveOptions) -> Result<SolveReport> {
    if !(opts.eps > 0.0 && opts.eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {}", opts.eps)));
    }
    let k = Contraction::new(hs);
    let mut states = initial_profile(hs, opts.mode, opts.seed)?.into_states();

    let mut iterations = 0;
    let mut last = None;
    if opts.max_iters > 0 {
        loop {
            let sweep = Sweep::run(&k, hs, &states, opts.mode)?;
            if sweep.exploitability() <= opts.eps || iterations == opts.max_iters {
                last = Some(sweep);
                break;
            }
            iterations += 1;
            let w = 1.0 / (iterations as f64 + 1.0);
            for (s, br) in states.iter_mut().zip(&sweep.responses) {
                let rho = &s.rho().scale(c(1.0 - w, 0.0)) + &br.rho().scale(c(w, 0.0));
                *s = StrategyDensity::from_parts(Arc::clone(s.basis()), rho);
            }
        }
    }

    let profile = Profile::new(states, opts.mode)?;
    let (exploit, payoffs, converged) = match last {
        Some(sweep) => {
            let e = sweep.exploitability();
            (e, sweep.payoffs, e <= opts.eps)
        }
        None => {
            let sweep = Sweep::run(&k, hs, profile.states(), opts.mode)?;
            (sweep.exploitability(), sweep.payoffs, false)
        }
    };
    Ok(SolveReport {
        profile,
        exploitability: exploit,
        payoffs,
        iterations,
        converged,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Realizability {
    /// Rank 1 and the underlying operator is unitary.
    Realizable { operator: ComplexMatrix },
    /// Rank 1 but the underlying operator is not unitary.
    NotRealizable { operator: ComplexMatrix, residual: f64 },
    /// Rank above 1; not checked.
    Mixed { rank: usize },
}

impl Realizability {
    pub fn is_realizable(&self) -> bool {
        matches!(self, Realizability::Realizable { .. })
    }
}

/// Whether a state is the strategy state of some unitary. For a rank-1
/// state the unit-norm top eigenvector is the coefficient vector up to phase.
pub fn unitary_realizability(state: &StrategyDensity, tol: f64) -> Result<Realizability> {
    let eig = state.rho().hermitian_eigensystem(EFFECTIVE_HERMITIAN_TOL)?;
    let rank = eig.values.iter().filter(|&&v| v > RANK_TOL).count();
    if rank != 1 {
        return Ok(Realizability::Mixed { rank });
    }
    let operator = reconstruct(&CoefficientVector(eig.vector(0)), state.basis())?;
    let residual = operator.unitarity_residual();
    Ok(if residual <= tol {
        Realizability::Realizable { operator }
    } else {
        Realizability::NotRealizable { operator, residual }
    })
}
