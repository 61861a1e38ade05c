//! Games whose strategies are operators on a classical or quantum object.
//!
//! A game is given operationally ([`game::GameDefinition`]): an initial object
//! state, a strategy basis per player, and a scale operator per player. From
//! it [`payoff`] builds one Hermitian payoff operator `H^i` per player on the
//! joint strategy space, so that for any joint strategy density `rho`
//! the expected payoff is `Tr(rho H^i)`. [`equilibrium`] computes best
//! responses, exploitability and approximate Nash equilibria over strategy
//! densities.
//!
//! ```
//! use qgame_core::{game::make_sfg, payoff::PayoffSet};
//!
//! let sfg = make_sfg();
//! let set = PayoffSet::from_game(&sfg).unwrap();
//! assert_eq!(set.operator(0).matrix().dim(), 16);
//! ```

pub mod equilibrium;
pub mod error;
pub mod game;
pub mod linalg;
pub mod opspace;
pub mod payoff;
pub mod sampling;

pub use equilibrium::{Mode, Profile, SolveOptions, SolveReport};
pub use error::{Error, Result};
pub use game::{GameDefinition, PlayerSpec, PureProfile, TableGame};
pub use linalg::{Complex, ComplexMatrix, Eigensystem};
pub use opspace::{BasisKind, CoefficientVector, OperatorBasis, StrategyDensity, UnitaryParams};
pub use payoff::{JointStrategyState, PayoffOperator, PayoffSet};
