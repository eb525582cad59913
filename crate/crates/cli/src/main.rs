use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

mod commands;
mod keymap;
mod play;
mod style;

use commands::{user, CmdResult, Failure, RunRequest};
use style::Style;

/// Teaching environments, learners and experiments for reinforcement learning.
#[derive(Parser, Debug)]
#[command(name = "rlcourse", version)]
struct Cli {
    /// Print plain text without ANSI colours or screen clearing.
    #[arg(long, global = true)]
    no_color: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct EnvArgs {
    /// Environment name, as shown by `list`.
    env: String,
    /// Environment parameters as a JSON object, e.g. '{"height": 5}'.
    #[arg(long)]
    params: Option<String>,
    /// Seed for the environment's random stream.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the nine environments with their challenges and parameters.
    List,
    /// Show spaces, limits, key bindings and the initial frame of an environment.
    Inspect(EnvArgs),
    /// Play an environment from the keyboard (needs an interactive terminal).
    Play(EnvArgs),
    /// Run an experiment from a JSON config or a named preset.
    Run {
        /// Experiment configuration file (JSON).
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        /// Name of a built-in preset, as shown by `preset`.
        #[arg(long)]
        preset: Option<String>,
        /// Directory for the CSV and SVG outputs.
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Override the base seed; repetition i uses seed + i.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the number of repetitions.
        #[arg(long)]
        repetitions: Option<usize>,
    },
    /// List the presets, or print one as an editable JSON config.
    Preset {
        /// Preset to print; omit to list all.
        name: Option<String>,
    },
}

fn execute(cli: Cli) -> CmdResult<String> {
    let style = Style { color: !cli.no_color && std::io::stdout().is_terminal() };
    match cli.command {
        Command::List => Ok(commands::list(&style)),
        Command::Inspect(a) => {
            let params = commands::parse_params(a.params.as_deref())?;
            commands::inspect(&style, &a.env, &params, a.seed)
        }
        Command::Play(a) => {
            let params = commands::parse_params(a.params.as_deref())?;
            let env = commands::build_env(&a.env, &params, a.seed)?;
            if !play::is_interactive() {
                return Err(user(anyhow::anyhow!("play needs an interactive terminal on stdin and stdout")));
            }
            let play_style = Style { color: !cli.no_color };
            let summary = play::run_terminal(play::PlaySession::new(env), &play_style).map_err(Failure::Runtime)?;
            Ok(format!("\n{summary}\n"))
        }
        Command::Run { config, preset, out, seed, repetitions } => {
            let req = RunRequest { config: config.as_deref(), preset: preset.as_deref(), out: &out, seed, repetitions };
            let s = commands::run(&style, &req)?;
            Ok(format!("{}\nwrote {}\nwrote {}\n", s.table, s.csv.display(), s.svg.display()))
        }
        Command::Preset { name: None } => Ok(commands::preset_list(&style)),
        Command::Preset { name: Some(n) } => commands::preset_json(&n).map(|j| j + "\n"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}
