//! The subcommands. Each writes its report to `out` and returns the exit
//! code for a completed run.

use std::io::Write;
use std::path::Path;

use qgame_core::equilibrium::{solve, Mode, SolveOptions};
use qgame_core::game::{make_pfg, make_sfg, GameDefinition};
use qgame_core::payoff::{consistency_check, expected_payoff, PayoffSet, CONSISTENCY_TOL};

use crate::error::CliError;
use crate::format::{read_json, to_json_text, write_json, GameFile, MatrixFile, ProfileFile};
use crate::render;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        message: e.to_string(),
    }
}

pub fn load_game(path: &Path) -> Result<GameDefinition, CliError> {
    read_json::<GameFile>(path)?.to_game()
}

fn player_name(g: &GameDefinition, i: usize) -> &str {
    &g.players()[i].name
}

/// Writes `H^player` (1-based) to `output`, or to `out` when no path is given.
pub fn payoff(
    game: &Path,
    player: usize,
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8, CliError> {
    let g = load_game(game)?;
    if player == 0 || player > g.num_players() {
        return Err(CliError::Usage(format!(
            "--player must be between 1 and {}, got {player}",
            g.num_players()
        )));
    }
    let set = PayoffSet::from_game(&g)?;
    let h = set.operator(player - 1);
    let summary = format!(
        "H^{player}: {0}x{0}, hermitian residual {1}\n",
        h.joint_dim(),
        render::real(h.matrix().hermitian_residual())
    );
    let file = MatrixFile::from_operator(h);
    match output {
        Some(path) => {
            write_json(path, &file)?;
            out.write_all(summary.as_bytes()).map_err(io_err)?;
        }
        None => {
            out.write_all(to_json_text(&file).as_bytes()).map_err(io_err)?;
            err.write_all(summary.as_bytes()).map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}

pub fn eval(game: &Path, profile: &Path, out: &mut dyn Write) -> Result<u8, CliError> {
    let g = load_game(game)?;
    let profile: ProfileFile = read_json(profile)?;
    let set = PayoffSet::from_game(&g)?;
    let states = profile.to_states(set.bases())?;
    let joint = set.joint_state(&states)?;
    for (i, h) in set.operators().iter().enumerate() {
        let e = expected_payoff(&joint, h)?;
        writeln!(out, "E^{} ({}) = {}", i + 1, player_name(&g, i), render::real(e)).map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

pub fn solve_game(game: &Path, opts: &SolveOptions, out: &mut dyn Write) -> Result<u8, CliError> {
    let g = load_game(game)?;
    let set = PayoffSet::from_game(&g)?;
    let report = solve(&set, opts)?;
    let mut text = String::new();
    text += &format!("mode: {}\n", opts.mode);
    text += &format!("converged: {}\n", report.converged);
    text += &format!("iterations: {}\n", report.iterations);
    text += &format!("exploitability: {}\n", render::real(report.exploitability));
    for (i, e) in report.payoffs.iter().enumerate() {
        text += &format!("E^{} ({}) = {}\n", i + 1, player_name(&g, i), render::real(*e));
    }
    for (i, s) in report.profile.states().iter().enumerate() {
        text += &format!("state {} ({}):\n", i + 1, player_name(&g, i));
        if opts.mode == Mode::ClassicalDiagonal {
            let pdf: Vec<String> = s.rho().diagonal().iter().map(|z| render::real(z.re)).collect();
            text += &format!("  pdf {}\n", pdf.join("  "));
        } else {
            text += &render::matrix(s.rho(), "  ");
        }
    }
    out.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(if report.converged { EXIT_OK } else { EXIT_FAILED })
}

pub fn check(game: &Path, trials: usize, seed: u64, out: &mut dyn Write) -> Result<u8, CliError> {
    let g = load_game(game)?;
    let report = consistency_check(&g, trials, seed)?;
    let mut text = format!(
        "{} max deviation {} (tolerance {}; {} basis profiles, {} random profiles)\n",
        if report.passed { "PASS" } else { "FAIL" },
        render::real(report.worst()),
        render::real(CONSISTENCY_TOL),
        report.basis_profiles,
        report.trials
    );
    for (i, d) in report.max_deviation.iter().enumerate() {
        text += &format!("  player {} ({}): {}\n", i + 1, player_name(&g, i), render::real(*d));
    }
    out.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_FAILED })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Demo {
    Pfg,
    Sfg,
}

impl Demo {
    pub fn name(self) -> &'static str {
        match self {
            Demo::Pfg => "pfg",
            Demo::Sfg => "sfg",
        }
    }

    pub fn game(self) -> GameDefinition {
        match self {
            Demo::Pfg => make_pfg(),
            Demo::Sfg => make_sfg(),
        }
    }
}

/// Writes `<name>.game.json` and `<name>.H<i>.json` for every player.
pub fn demo(which: Demo, dir: &Path, out: &mut dyn Write) -> Result<u8, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let g = which.game();
    let game_path = dir.join(format!("{}.game.json", which.name()));
    write_json(&game_path, &GameFile::from_game(&g))?;
    writeln!(out, "wrote {}", game_path.display()).map_err(io_err)?;
    let set = PayoffSet::from_game(&g)?;
    for h in set.operators() {
        let path = dir.join(format!("{}.H{}.json", which.name(), h.player() + 1));
        write_json(&path, &MatrixFile::from_operator(h))?;
        writeln!(out, "wrote {}", path.display()).map_err(io_err)?;
    }
    Ok(EXIT_OK)
}
