//! Manipulative definition of a game: an object in state `rho_0`, players who
//! each act on it with a unitary from their strategy space, and per-player
//! scale operators reading the final state out as payoff,
//! `E^i(S) = tr(P^i L(S) rho_0 L(S)^dagger)` with `L = s^N ... s^1`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DEFAULT_TOL};
use crate::opspace::{classical_basis, decompose, pauli_basis, OperatorBasis};

/// Payoffs must be real to within this.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct PlayerSpec {
    pub name: String,
    pub basis: Arc<OperatorBasis>,
    pub scale: ComplexMatrix,
}

impl PlayerSpec {
    pub fn new(name: impl Into<String>, basis: Arc<OperatorBasis>, scale: ComplexMatrix) -> Self {
        Self {
            name: name.into(),
            basis,
            scale,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameDefinition {
    object_dim: usize,
    initial_state: ComplexMatrix,
    players: Vec<PlayerSpec>,
}

impl GameDefinition {
    /// Assembles a game without checking it; see [`validate_game`].
    pub fn new(object_dim: usize, initial_state: ComplexMatrix, players: Vec<PlayerSpec>) -> Self {
        Self {
            object_dim,
            initial_state,
            players,
        }
    }

    /// Assembles and validates.
    pub fn try_new(
        object_dim: usize,
        initial_state: ComplexMatrix,
        players: Vec<PlayerSpec>,
    ) -> Result<Self> {
        let game = Self::new(object_dim, initial_state, players);
        game.ensure_valid()?;
        Ok(game)
    }

    pub fn object_dim(&self) -> usize {
        self.object_dim
    }

    pub fn initial_state(&self) -> &ComplexMatrix {
        &self.initial_state
    }

    pub fn players(&self) -> &[PlayerSpec] {
        &self.players
    }

    pub fn player(&self, i: usize) -> Result<&PlayerSpec> {
        self.players.get(i).ok_or(Error::PlayerOutOfRange {
            index: i,
            players: self.players.len(),
        })
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn bases(&self) -> Vec<Arc<OperatorBasis>> {
        self.players.iter().map(|p| Arc::clone(&p.basis)).collect()
    }

    /// Size of the joint strategy basis, `prod_i |basis_i|`.
    pub fn joint_dim(&self) -> usize {
        self.players.iter().map(|p| p.basis.len()).product()
    }

    pub fn validate(&self) -> Vec<String> {
        validate_game(self)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidGame(violations))
        }
    }
}

/// Human-readable list of broken invariants; empty for a valid game.
pub fn validate_game(g: &GameDefinition) -> Vec<String> {
    let mut out = Vec::new();
    let d = g.object_dim;
    if d == 0 {
        out.push("object_dim must be positive".to_string());
    }
    if g.initial_state.dim() != d {
        out.push(format!(
            "initial_state is {0}x{0}, expected {d}x{d}",
            g.initial_state.dim()
        ));
    } else if let Some(why) = g.initial_state.density_violation(DEFAULT_TOL) {
        out.push(format!("initial_state is not a density matrix: {why}"));
    }
    if g.players.is_empty() {
        out.push("game has no players".to_string());
    }
    for (k, p) in g.players.iter().enumerate() {
        let who = format!("player {} ({})", k + 1, p.name);
        if p.basis.object_dim() != d {
            out.push(format!(
                "{who}: basis acts on dimension {}, expected {d}",
                p.basis.object_dim()
            ));
        }
        if p.basis.is_empty() {
            out.push(format!("{who}: empty strategy basis"));
        }
        if p.scale.dim() != d {
            out.push(format!("{who}: scale is {0}x{0}, expected {d}x{d}", p.scale.dim()));
        } else {
            let residual = p.scale.hermitian_residual();
            if residual > DEFAULT_TOL {
                out.push(format!("{who}: scale is not Hermitian (residual {residual:e})"));
            }
        }
    }
    out
}

fn zero_sum_coin_game(basis: OperatorBasis) -> GameDefinition {
    let basis = Arc::new(basis);
    let p1 = ComplexMatrix::from_diag(&[1.0, -1.0]).expect("finite");
    let p2 = ComplexMatrix::from_diag(&[-1.0, 1.0]).expect("finite");
    GameDefinition::new(
        2,
        ComplexMatrix::from_diag(&[1.0, 0.0]).expect("finite"),
        vec![
            PlayerSpec::new("player1", Arc::clone(&basis), p1),
            PlayerSpec::new("player2", basis, p2),
        ],
    )
}

/// Penny flipping: a coin starting heads, strategies `{I, X}`, player 1 is
/// paid `+1` for heads and `-1` for tails, player 2 the opposite.
pub fn make_pfg() -> GameDefinition {
    zero_sum_coin_game(classical_basis(2).expect("d = 2"))
}

/// Spin flipping: as [`make_pfg`] on a spin-1/2 with strategies spanned by
/// `{I, X, Y, Z}`.
pub fn make_sfg() -> GameDefinition {
    zero_sum_coin_game(pauli_basis())
}

/// One strategy per player, in play order.
#[derive(Clone, Debug, PartialEq)]
pub struct PureProfile {
    pub strategies: Vec<ComplexMatrix>,
}

impl PureProfile {
    pub fn new(strategies: Vec<ComplexMatrix>) -> Self {
        Self { strategies }
    }

    /// Builds a profile after checking each strategy lies in its player's span.
    pub fn in_game(game: &GameDefinition, strategies: Vec<ComplexMatrix>) -> Result<Self> {
        check_profile_len(game, strategies.len())?;
        for (s, p) in strategies.iter().zip(game.players()) {
            decompose(s, &p.basis)?;
        }
        Ok(Self { strategies })
    }
}

fn check_profile_len(g: &GameDefinition, n: usize) -> Result<()> {
    if n != g.num_players() {
        return Err(Error::LengthMismatch {
            expected: g.num_players(),
            found: n,
        });
    }
    Ok(())
}

/// `L(S) = s^N ... s^1`: later players multiply on the left.
pub fn compose(strategies: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let Some(first) = strategies.first() else {
        return Err(Error::InvalidProfile("empty profile".into()));
    };
    strategies[1..]
        .iter()
        .try_fold(first.clone(), |acc, s| s.matmul(&acc))
}

/// Final object state `L rho_0 L^dagger`.
pub fn evolve_object(g: &GameDefinition, p: &PureProfile) -> Result<ComplexMatrix> {
    check_profile_len(g, p.strategies.len())?;
    for s in &p.strategies {
        if s.dim() != g.object_dim() {
            return Err(Error::DimensionMismatch {
                left: s.dim(),
                right: g.object_dim(),
            });
        }
        let residual = s.unitarity_residual();
        if residual > DEFAULT_TOL {
            return Err(Error::NotUnitary { residual });
        }
    }
    let l = compose(&p.strategies)?;
    Ok(&(&l * g.initial_state()) * &l.adjoint())
}

/// Real part of `tr(P^i rho_end)` for each player.
pub fn manipulative_payoff(g: &GameDefinition, p: &PureProfile) -> Result<Vec<f64>> {
    let end = evolve_object(g, p)?;
    g.players()
        .iter()
        .map(|player| {
            let v = (&player.scale * &end).trace();
            if v.im.abs() > IMAGINARY_RESIDUE_TOL {
                return Err(Error::ComplexPayoff {
                    residual: v.im.abs(),
                });
            }
            Ok(v.re)
        })
        .collect()
}

/// A classical game given directly by its payoff table `G^i(mu)`. Each
/// player has `strategies` pure strategies; profiles are enumerated
/// player-1-major.
#[derive(Clone, Debug, PartialEq)]
pub struct TableGame {
    strategies: usize,
    num_players: usize,
    basis: Arc<OperatorBasis>,
    payoffs: Vec<Vec<f64>>,
}

impl TableGame {
    pub fn strategies(&self) -> usize {
        self.strategies
    }

    pub fn num_players(&self) -> usize {
        self.num_players
    }

    /// The nominal per-player strategy basis (permutations on a `d`-state object).
    pub fn basis(&self) -> &Arc<OperatorBasis> {
        &self.basis
    }

    pub fn joint_dim(&self) -> usize {
        self.strategies.pow(self.num_players as u32)
    }

    /// `G^i` over all profiles, player-1-major.
    pub fn table(&self, i: usize) -> Result<&[f64]> {
        self.payoffs
            .get(i)
            .map(Vec::as_slice)
            .ok_or(Error::PlayerOutOfRange {
                index: i,
                players: self.num_players,
            })
    }
}

/// `table[i]` lists player `i`'s payoff for every pure profile in
/// player-1-major order (length `d^n_players`).
pub fn classical_game_from_table(table: Vec<Vec<f64>>, d: usize, n_players: usize) -> Result<TableGame> {
    if n_players == 0 {
        return Err(Error::IncompleteTable("no players".into()));
    }
    let basis = Arc::new(classical_basis(d)?);
    if table.len() != n_players {
        return Err(Error::IncompleteTable(format!(
            "{} player tables for {n_players} players",
            table.len()
        )));
    }
    let profiles = d.pow(n_players as u32);
    for (i, t) in table.iter().enumerate() {
        if t.len() != profiles {
            return Err(Error::IncompleteTable(format!(
                "player {} has {} entries, expected {profiles}",
                i + 1,
                t.len()
            )));
        }
        if let Some(k) = t.iter().position(|x| !x.is_finite()) {
            return Err(Error::IncompleteTable(format!(
                "player {} entry {k} is not finite",
                i + 1
            )));
        }
    }
    Ok(TableGame {
        strategies: d,
        num_players: n_players,
        basis,
        payoffs: table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, I as IMAG};

    fn pauli(k: usize) -> ComplexMatrix {
        pauli_basis().element(k).clone()
    }

    fn profile(ks: &[usize]) -> PureProfile {
        PureProfile::new(ks.iter().map(|&k| pauli(k)).collect())
    }

    #[test]
    fn pfg_shape() {
        let g = make_pfg();
        assert!(validate_game(&g).is_empty());
        assert_eq!(g.object_dim(), 2);
        let sum = &g.players()[0].scale + &g.players()[1].scale;
        assert_eq!(sum, ComplexMatrix::zeros(2));
        assert_eq!(g.players()[0].basis.len(), 2);
    }

    #[test]
    fn sfg_shape() {
        let g = make_sfg();
        assert!(validate_game(&g).is_empty());
        assert_eq!(g.players()[0].basis.len(), 4);
        assert_eq!(g.joint_dim(), 16);
        assert_eq!(g.players()[0].scale, ComplexMatrix::from_diag(&[1.0, -1.0]).unwrap());
    }

    #[test]
    fn validation_catches_bad_initial_state() {
        let g = make_pfg();
        let bad = GameDefinition::new(
            2,
            ComplexMatrix::from_diag(&[2.0, -1.0]).unwrap(),
            g.players().to_vec(),
        );
        let v = validate_game(&bad);
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].contains("initial_state"));
    }

    #[test]
    fn validation_catches_non_hermitian_scale() {
        let g = make_pfg();
        let mut players = g.players().to_vec();
        players[0].scale = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, -1.0]]).unwrap();
        let bad = GameDefinition::new(2, g.initial_state().clone(), players);
        let v = validate_game(&bad);
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].contains("Hermitian"));
        assert!(matches!(bad.ensure_valid(), Err(Error::InvalidGame(_))));
    }

    #[test]
    fn validation_catches_dimension_clashes() {
        let g = make_pfg();
        let mut players = g.players().to_vec();
        players[1].basis = Arc::new(classical_basis(3).unwrap());
        let bad = GameDefinition::new(2, g.initial_state().clone(), players);
        assert_eq!(validate_game(&bad).len(), 1);
        let empty = GameDefinition::new(2, g.initial_state().clone(), vec![]);
        assert_eq!(validate_game(&empty), vec!["game has no players".to_string()]);
    }

    #[test]
    fn evolve_examples() {
        let g = make_sfg();
        let heads = ComplexMatrix::from_diag(&[1.0, 0.0]).unwrap();
        let tails = ComplexMatrix::from_diag(&[0.0, 1.0]).unwrap();
        assert_eq!(evolve_object(&g, &profile(&[0, 0])).unwrap(), heads);
        assert_eq!(evolve_object(&g, &profile(&[1, 0])).unwrap(), tails);
        assert_eq!(evolve_object(&g, &profile(&[1, 1])).unwrap(), heads);
    }

    #[test]
    fn evolve_uses_later_player_on_the_left() {
        let g = make_sfg();
        let (x, y) = (pauli(1), pauli(2));
        let l = compose(&[x.clone(), y.clone()]).unwrap();
        assert_eq!(l, pauli(3).scale(-IMAG));
        assert_eq!(l, &y * &x);
        // X then Hadamard sends |0> to |->; the reverse order gives |+>
        let h = (&x + &pauli(3)).scale(c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let got = evolve_object(&g, &PureProfile::new(vec![x.clone(), h.clone()])).unwrap();
        let hx = &h * &x;
        let want = &(&hx * g.initial_state()) * &hx.adjoint();
        assert_eq!(got, want);
        assert!((got[(0, 1)] - c(-0.5, 0.0)).norm() < 1e-15);
        let reversed = evolve_object(&g, &PureProfile::new(vec![h, x])).unwrap();
        assert!((reversed[(0, 1)] - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn evolve_errors() {
        let g = make_sfg();
        assert!(matches!(
            evolve_object(&g, &profile(&[0])),
            Err(Error::LengthMismatch { expected: 2, found: 1 })
        ));
        let not_unitary = &pauli(1) + &pauli(2);
        assert!(matches!(
            evolve_object(&g, &PureProfile::new(vec![not_unitary, pauli(0)])),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn manipulative_payoff_examples() {
        let sfg = make_sfg();
        assert_eq!(manipulative_payoff(&sfg, &profile(&[0, 0])).unwrap(), vec![1.0, -1.0]);
        assert_eq!(manipulative_payoff(&sfg, &profile(&[2, 2])).unwrap(), vec![1.0, -1.0]);
        let pfg = make_pfg();
        assert_eq!(manipulative_payoff(&pfg, &profile(&[1, 0])).unwrap(), vec![-1.0, 1.0]);
    }

    #[test]
    fn pfg_reproduces_matching_pennies_table() {
        let pfg = make_pfg();
        for (a, b, want) in [(0, 0, 1.0), (1, 1, 1.0), (0, 1, -1.0), (1, 0, -1.0)] {
            let got = manipulative_payoff(&pfg, &profile(&[a, b])).unwrap();
            assert_eq!(got, vec![want, -want]);
        }
    }

    #[test]
    fn pure_profile_checks_span() {
        let pfg = make_pfg();
        assert!(PureProfile::in_game(&pfg, vec![pauli(0), pauli(1)]).is_ok());
        assert!(matches!(
            PureProfile::in_game(&pfg, vec![pauli(2), pauli(1)]),
            Err(Error::OutsideSpan { .. })
        ));
    }

    #[test]
    fn table_game_validation() {
        let t = classical_game_from_table(
            vec![vec![1.0, -1.0, -1.0, 1.0], vec![-1.0, 1.0, 1.0, -1.0]],
            2,
            2,
        )
        .unwrap();
        assert_eq!(t.joint_dim(), 4);
        assert_eq!(t.table(1).unwrap()[0], -1.0);
        assert!(matches!(
            classical_game_from_table(vec![vec![1.0, 2.0, 3.0]], 2, 2),
            Err(Error::IncompleteTable(_))
        ));
        assert!(matches!(
            classical_game_from_table(vec![vec![1.0; 4], vec![1.0; 3]], 2, 2),
            Err(Error::IncompleteTable(_))
        ));
        assert!(classical_game_from_table(vec![vec![0.0; 9], vec![0.0; 9]], 3, 2).is_ok());
    }
}
