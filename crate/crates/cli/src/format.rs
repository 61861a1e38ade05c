//! JSON documents read and written by the command line tool.
//!
//! Complex scalars are `[re, im]` pairs; plain numbers are accepted on input
//! as real scalars. Matrices are row-major nested arrays.

use std::path::Path;
use std::sync::Arc;

use qgame_core::game::{GameDefinition, PlayerSpec};
use qgame_core::linalg::{c, Complex, ComplexMatrix};
use qgame_core::opspace::{
    classical_basis, classical_mixture_state, pauli_basis, pure_strategy_state, weyl_basis, OperatorBasis,
    StrategyDensity, UnitaryParams,
};
use qgame_core::payoff::PayoffOperator;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Pair([f64; 2]),
    Real(f64),
}

impl Scalar {
    pub fn value(self) -> Complex {
        match self {
            Scalar::Pair([re, im]) => c(re, im),
            Scalar::Real(re) => c(re, 0.0),
        }
    }
}

impl From<Complex> for Scalar {
    fn from(z: Complex) -> Self {
        Scalar::Pair([z.re, z.im])
    }
}

pub type MatrixRepr = Vec<Vec<Scalar>>;

pub fn matrix_repr(m: &ComplexMatrix) -> MatrixRepr {
    m.rows().map(|row| row.iter().map(|&z| Scalar::from(z)).collect()).collect()
}

pub fn matrix_from_repr(repr: &MatrixRepr, what: &str) -> Result<ComplexMatrix, CliError> {
    let rows = repr
        .iter()
        .map(|row| row.iter().map(|s| s.value()).collect())
        .collect();
    ComplexMatrix::from_rows(rows).map_err(|e| CliError::Validation(vec![format!("{what}: {e}")]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisRepr {
    /// "pauli", "classical" or "weyl".
    Named(String),
    Explicit(Vec<MatrixRepr>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerEntry {
    pub name: String,
    pub basis: BasisRepr,
    pub scale: MatrixRepr,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub object_dim: usize,
    pub initial_state: MatrixRepr,
    pub players: Vec<PlayerEntry>,
}

fn named_basis(name: &str, d: usize) -> Result<OperatorBasis, String> {
    match name {
        "pauli" if d == 2 => Ok(pauli_basis()),
        "pauli" => Err(format!("basis \"pauli\" needs object_dim 2, got {d}")),
        "classical" => classical_basis(d).map_err(|e| e.to_string()),
        "weyl" => weyl_basis(d).map_err(|e| e.to_string()),
        other => Err(format!("unknown basis name \"{other}\"")),
    }
}

impl GameFile {
    pub fn from_game(g: &GameDefinition) -> Self {
        let d = g.object_dim();
        let players = g
            .players()
            .iter()
            .map(|p| {
                let basis = ["pauli", "classical", "weyl"]
                    .into_iter()
                    .find(|name| named_basis(name, d).map(|b| b == *p.basis).unwrap_or(false))
                    .map(|name| BasisRepr::Named(name.to_string()))
                    .unwrap_or_else(|| BasisRepr::Explicit(p.basis.elements().iter().map(matrix_repr).collect()));
                PlayerEntry {
                    name: p.name.clone(),
                    basis,
                    scale: matrix_repr(&p.scale),
                }
            })
            .collect();
        Self {
            object_dim: d,
            initial_state: matrix_repr(g.initial_state()),
            players,
        }
    }

    /// Builds the game and runs full validation; every problem found is
    /// reported.
    pub fn to_game(&self) -> Result<GameDefinition, CliError> {
        let d = self.object_dim;
        let mut problems = Vec::new();
        let initial = matrix_from_repr(&self.initial_state, "initial_state");
        if let Err(CliError::Validation(v)) = &initial {
            problems.extend(v.iter().cloned());
        }
        let mut cache: Vec<(String, Arc<OperatorBasis>)> = Vec::new();
        let mut players = Vec::new();
        for (k, p) in self.players.iter().enumerate() {
            let who = format!("player {} ({})", k + 1, p.name);
            let basis = match &p.basis {
                BasisRepr::Named(name) => match cache.iter().find(|(n, _)| n == name) {
                    Some((_, b)) => Ok(Arc::clone(b)),
                    None => named_basis(name, d).map(|b| {
                        let b = Arc::new(b);
                        cache.push((name.clone(), Arc::clone(&b)));
                        b
                    }),
                },
                BasisRepr::Explicit(ms) => ms
                    .iter()
                    .enumerate()
                    .map(|(j, m)| matrix_from_repr(m, &format!("basis element {j}")).map_err(|e| e.to_string()))
                    .collect::<Result<Vec<_>, _>>()
                    .and_then(|els| OperatorBasis::custom(els, None).map_err(|e| e.to_string()))
                    .map(Arc::new),
            };
            let scale = matrix_from_repr(&p.scale, "scale");
            match (basis, scale) {
                (Ok(b), Ok(s)) => players.push(PlayerSpec::new(p.name.clone(), b, s)),
                (b, s) => {
                    if let Err(e) = b {
                        problems.push(format!("{who}: {e}"));
                    }
                    if let Err(CliError::Validation(v)) = s {
                        problems.extend(v.into_iter().map(|e| format!("{who}: {e}")));
                    }
                }
            }
        }
        let initial = match initial {
            Ok(m) if problems.is_empty() => m,
            _ => return Err(CliError::Validation(problems)),
        };
        let game = GameDefinition::new(d, initial, players);
        let violations = game.validate();
        if violations.is_empty() {
            Ok(game)
        } else {
            Err(CliError::Validation(violations))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ProfileEntry {
    Unitary(MatrixRepr),
    Params([f64; 4]),
    Pdf(Vec<f64>),
    Density(MatrixRepr),
}

impl ProfileEntry {
    pub fn to_state(&self, basis: &Arc<OperatorBasis>) -> Result<StrategyDensity, CliError> {
        let state = match self {
            ProfileEntry::Unitary(m) => pure_strategy_state(&matrix_from_repr(m, "unitary")?, basis),
            ProfileEntry::Params([a, b, g, d]) => {
                pure_strategy_state(&UnitaryParams::new(*a, *b, *g, *d).to_unitary(), basis)
            }
            ProfileEntry::Pdf(p) => classical_mixture_state(p, basis),
            ProfileEntry::Density(m) => StrategyDensity::new(Arc::clone(basis), matrix_from_repr(m, "density")?),
        };
        state.map_err(|e| CliError::Validation(vec![e.to_string()]))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    pub players: Vec<ProfileEntry>,
}

impl ProfileFile {
    pub fn to_states(&self, bases: &[Arc<OperatorBasis>]) -> Result<Vec<StrategyDensity>, CliError> {
        if self.players.len() != bases.len() {
            return Err(CliError::Validation(vec![format!(
                "profile lists {} players, game has {}",
                self.players.len(),
                bases.len()
            )]));
        }
        let mut problems = Vec::new();
        let mut states = Vec::new();
        for (k, (entry, b)) in self.players.iter().zip(bases).enumerate() {
            match entry.to_state(b) {
                Ok(s) => states.push(s),
                Err(CliError::Validation(v)) => {
                    problems.extend(v.into_iter().map(|e| format!("player {}: {e}", k + 1)))
                }
                Err(e) => return Err(e),
            }
        }
        if problems.is_empty() {
            Ok(states)
        } else {
            Err(CliError::Validation(problems))
        }
    }
}

/// A payoff operator on disk. `player` is 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub player: usize,
    pub dim: usize,
    pub matrix: MatrixRepr,
}

impl MatrixFile {
    pub fn from_operator(h: &PayoffOperator) -> Self {
        Self {
            player: h.player() + 1,
            dim: h.joint_dim(),
            matrix: matrix_repr(h.matrix()),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        let m = matrix_from_repr(&self.matrix, "matrix")?;
        if m.dim() != self.dim {
            return Err(CliError::Validation(vec![format!(
                "matrix is {0}x{0} but dim says {1}",
                m.dim(),
                self.dim
            )]));
        }
        Ok(m)
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    std::fs::write(path, to_json_text(value)).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Pretty JSON with matrix rows kept on one line.
pub fn to_json_text<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("document types serialize");
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    out
}

fn array_depth(v: &serde_json::Value) -> Option<usize> {
    match v {
        serde_json::Value::Array(items) => items
            .iter()
            .map(array_depth)
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
            .map(|d| d + 1),
        serde_json::Value::Object(_) => None,
        _ => Some(0),
    }
}

fn write_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(_) if array_depth(v).is_some_and(|d| d <= 2) => {
            out.push_str(&serde_json::to_string(v).expect("json value"));
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                if k + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(key).expect("json key"));
                out.push_str(": ");
                write_value(item, indent + 1, out);
                if k + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("json scalar")),
    }
}
