//! Command-line front end for `qgame-core`: file formats, subcommands and
//! argument parsing for the `qgame` binary.

pub mod commands;
pub mod error;
pub mod format;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use qgame_core::equilibrium::{Mode, SolveOptions};

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "qgame", version, about = "Payoff operators and equilibria for games on classical and quantum objects")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Any density matrix on the strategy coefficient space.
    Operator,
    /// Probability mixtures of basis strategies only.
    Classical,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Operator => Mode::OperatorDensity,
            ModeArg::Classical => Mode::ClassicalDiagonal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DemoArg {
    Pfg,
    Sfg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a player's payoff operator.
    Payoff {
        game: PathBuf,
        /// 1-based player index.
        #[arg(long, default_value_t = 1)]
        player: usize,
        /// Write the matrix here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Expected payoff of every player for a strategy profile.
    Eval { game: PathBuf, profile: PathBuf },
    /// Search for an approximate Nash equilibrium.
    Solve {
        game: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Operator)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare the trace formula with direct evaluation on random profiles.
    Check {
        game: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a built-in game and its payoff operators.
    Demo {
        #[arg(value_enum)]
        name: DemoArg,
        #[arg(default_value = ".")]
        output_dir: PathBuf,
    },
}

pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Payoff { game, player, output } => commands::payoff(&game, player, output.as_deref(), out, err),
        Command::Eval { game, profile } => commands::eval(&game, &profile, out),
        Command::Solve {
            game,
            mode,
            eps,
            max_iters,
            seed,
        } => {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(CliError::Usage(format!("--eps must be positive, got {eps}")));
            }
            let opts = SolveOptions {
                mode: mode.into(),
                eps,
                max_iters,
                seed,
            };
            commands::solve_game(&game, &opts, out)
        }
        Command::Check { game, trials, seed } => commands::check(&game, trials, seed, out),
        Command::Demo { name, output_dir } => {
            let which = match name {
                DemoArg::Pfg => commands::Demo::Pfg,
                DemoArg::Sfg => commands::Demo::Sfg,
            };
            commands::demo(which, &output_dir, out)
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                return 2;
            }
            let _ = out.write_all(text.as_bytes());
            return 0;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
