//! The `terra` command line: list, rollout, terrain, validate and render.

mod profile;
mod render;
mod rollout;
mod svg;
mod trajectory;
mod validate;

pub use profile::{cmd_terrain, load_params, profile_csv};
pub use render::cmd_render;
pub use rollout::{run_rollout, Policy, PolicyDriver, RolloutSummary};
pub use svg::{frame_svg, terrain_svg};
pub use trajectory::{
    build_version, read_trajectory, TrajectoryHeader, TrajectoryRecord, TRAJECTORY_FORMAT,
    TRAJECTORY_VERSION,
};
pub use validate::{cmd_validate, env_checks, physics_checks, run_checks, terrain_checks, CheckResult, Scope};

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::env::{list_envs, CatalogEntry};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Io(_) => EXIT_IO,
            CliError::Validation(_) => EXIT_VALIDATION,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "terra", version, about = "Seeded 2D locomotion environments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the environment catalog.
    List {
        /// Only entries whose name contains this substring.
        filter: Option<String>,
        /// Print the matching entries as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run a seeded rollout and write a trajectory file.
    Rollout {
        #[arg(long)]
        env: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        steps: u64,
        #[arg(long, value_enum, default_value_t = Policy::Random)]
        policy: Policy,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a terrain profile as CSV (and optionally SVG).
    Terrain {
        /// Terrain parameter file, or a preset name.
        #[arg(long)]
        params: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100.0)]
        length: f64,
        #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
        x_start: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run the invariant checks; `all`, an env name, or a terrain file.
    Validate {
        #[arg(default_value = "all")]
        scope: String,
    },
    /// Replay a trajectory and write SVG frames.
    Render {
        #[arg(long)]
        traj: PathBuf,
        #[arg(long)]
        env: String,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 10)]
        every: u64,
    },
}

/// Catalog rows whose name contains `filter`.
pub fn filtered_catalog(filter: Option<&str>) -> Vec<CatalogEntry> {
    list_envs()
        .into_iter()
        .filter(|e| filter.is_none_or(|f| e.name.contains(f)))
        .collect()
}

/// Table of `name obs_dim act_dim description`, one row per matching entry.
pub fn cmd_list(filter: Option<&str>, json: bool, out: &mut impl Write) -> std::io::Result<usize> {
    let rows = filtered_catalog(filter);
    if json {
        serde_json::to_writer_pretty(&mut *out, &rows)?;
        writeln!(out)?;
        return Ok(rows.len());
    }
    let width = rows.iter().map(|e| e.name.len()).max().unwrap_or(4).max(4);
    for e in &rows {
        writeln!(out, "{:<width$}  {:>7}  {:>7}  {}", e.name, e.obs_dim, e.act_dim, e.description)?;
    }
    Ok(rows.len())
}

/// Executes one parsed command; the return value is the process exit code.
pub fn run(cli: Cli) -> i32 {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result: Result<i32, CliError> = match cli.command {
        Command::List { filter, json } => match cmd_list(filter.as_deref(), json, &mut out) {
            Ok(_) => Ok(EXIT_OK),
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(EXIT_OK),
            Err(e) => Err(CliError::Io(e.to_string())),
        },
        Command::Rollout { env, seed, steps, policy, out: path } => (|| {
            // validate the env name before touching the file system
            crate::env::find_env(&env).map_err(|e| CliError::Input(e.to_string()))?;
            let file = std::fs::File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut w = std::io::BufWriter::new(file);
            let s = run_rollout(&env, seed, steps, policy, &mut w)?;
            writeln!(
                out,
                "env={env} seed={seed} policy={policy} steps={} episodes={} total_reward={:.6} steps_per_s={:.1}",
                s.steps, s.episodes, s.total_reward, s.steps_per_second
            )
            .map_err(|e| CliError::Io(e.to_string()))?;
            Ok(EXIT_OK)
        })(),
        Command::Terrain { params, seed, length, x_start, out: path, svg } => {
            cmd_terrain(&params, seed, x_start, length, &path, svg.as_deref()).map(|p| {
                let _ = writeln!(out, "{} vertices, {} features", p.vertices().len(), p.features().len());
                EXIT_OK
            })
        }
        Command::Validate { scope } => cmd_validate(&Scope::parse(&scope), &mut out)
            .map(|ok| if ok { EXIT_OK } else { EXIT_VALIDATION }),
        Command::Render { traj, env, out_dir, every } => cmd_render(&traj, &env, &out_dir, every).map(|n| {
            let _ = writeln!(out, "{n} frames written to {}", out_dir.display());
            EXIT_OK
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("terra: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
