use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::rollout::{run_rollout, Policy, PolicyDriver};
use super::CliError;
use crate::character::{builtin_character, Builtin};
use crate::env::{list_envs, make_env, CatalogEntry};
use crate::physics2d::{forward_kinematics, rigs, SimState, Vec2};
use crate::terrain::{check_compliance, generate_terrain, parse_terrain_params, preset, preset_names, TerrainParams};

/// One line of the validation report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub target: String,
    pub ok: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(check: &str, target: &str, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            target: target.into(),
            ok,
            detail: detail.into(),
        }
    }
}

/// What `validate` runs against.
#[derive(Debug, Clone, PartialEq)]
pub enum Scope {
    All,
    Env(String),
    TerrainFile(String),
}

impl Scope {
    pub fn parse(s: &str) -> Self {
        if s == "all" {
            Scope::All
        } else if Path::new(s).is_file() || s.ends_with(".json") {
            Scope::TerrainFile(s.into())
        } else {
            Scope::Env(s.into())
        }
    }
}

pub fn physics_checks() -> Vec<CheckResult> {
    let y = rigs::free_fall_height(2.0, 1.0);
    let err = (y - (2.0 - 0.5 * 9.8)).abs();
    let drift = rigs::pendulum_energy_drift(10.0);
    let (depth, speed) = rigs::resting_box(1.0);
    let biped = builtin_character(Builtin::Biped7);
    let start = SimState::new(forward_kinematics(
        &biped.mechanism,
        Vec2::new(0.0, biped.spawn_root_height),
        0.0,
        &biped.stance,
    ));
    let anchor = rigs::passive_anchor_drift(&biped.mechanism, start, 10.0);
    vec![
        CheckResult::new("free_fall", "physics", err < 1e-3, format!("error {err:.3e} m")),
        CheckResult::new("pendulum_energy", "physics", drift < 0.01, format!("relative drift {drift:.3e}")),
        CheckResult::new(
            "resting_box",
            "physics",
            depth < 5e-3 && speed < 1e-2,
            format!("penetration {depth:.3e} m, speed {speed:.3e} m/s"),
        ),
        CheckResult::new("anchor_drift", "biped7", anchor < 1e-3, format!("max anchor error {anchor:.3e} m")),
    ]
}

/// Parses and generates `seeds` profiles, checking every annotation.
pub fn terrain_checks(target: &str, params: Result<TerrainParams, String>, seeds: u64) -> Vec<CheckResult> {
    let params = match params {
        Ok(p) => p,
        Err(e) => return vec![CheckResult::new("terrain_parse", target, false, e)],
    };
    let mut out = vec![CheckResult::new("terrain_parse", target, true, params.terrain_type.name())];
    let mut violations = Vec::new();
    for seed in 0..seeds {
        let p = generate_terrain(&params, seed, -10.0, 150.0);
        for v in check_compliance(&params, &p) {
            violations.push(format!("seed {seed}: {} = {} at x = {:.3}", v.what, v.value, v.x));
        }
    }
    let detail = match violations.first() {
        None => format!("{seeds} seeds, no violations"),
        Some(first) => format!("{} violations, first: {first}", violations.len()),
    };
    out.push(CheckResult::new("terrain_compliance", target, violations.is_empty(), detail));
    out
}

pub fn env_checks(entry: &CatalogEntry) -> Vec<CheckResult> {
    let name = entry.name.as_str();
    let mut out = Vec::new();
    let mut env = match make_env(name) {
        Ok(e) => e,
        Err(e) => return vec![CheckResult::new("construct", name, false, e.to_string())],
    };
    let dims_ok = env.obs_dim() == entry.obs_dim && env.act_dim() == entry.act_dim;
    out.push(CheckResult::new(
        "construct",
        name,
        dims_ok,
        format!("obs_dim {} act_dim {}", env.obs_dim(), env.act_dim()),
    ));

    let (lo, hi) = env.observation_space();
    let mut driver = PolicyDriver::new(Policy::Random, 1);
    env.set_random_seed(1);
    let mut obs = env.reset();
    let mut layout_ok = obs.data.len() == entry.obs_dim;
    let mut bounds_ok = true;
    let mut reward_ok = true;
    let mut error = None;
    for _ in 0..10 {
        bounds_ok &= obs.data.iter().zip(lo.iter().zip(&hi)).all(|(x, (l, h))| l <= x && x <= h);
        let action = driver.act(&env);
        match env.step(&action) {
            Ok(r) => {
                reward_ok &= (0.0..=1.0).contains(&r.reward);
                layout_ok &= r.observation.data.len() == entry.obs_dim;
                obs = if r.done { env.reset() } else { r.observation };
            }
            Err(e) => {
                error = Some(e.to_string());
                break;
            }
        }
    }
    out.push(CheckResult::new(
        "random_steps",
        name,
        error.is_none(),
        error.unwrap_or_else(|| "10 steps".into()),
    ));
    out.push(CheckResult::new("layout", name, layout_ok && bounds_ok, format!("in bounds: {bounds_ok}")));
    out.push(CheckResult::new("reward_range", name, reward_ok, "rewards in [0, 1]"));

    let mut a = Vec::new();
    let mut b = Vec::new();
    let same = run_rollout(name, 42, 20, Policy::Random, &mut a).is_ok()
        && run_rollout(name, 42, 20, Policy::Random, &mut b).is_ok()
        && a == b;
    out.push(CheckResult::new("determinism", name, same, "two 20-step rollouts"));
    out
}

/// Runs every check for `scope`. Env checks run in parallel; results keep catalog order.
pub fn run_checks(scope: &Scope) -> Result<Vec<CheckResult>, CliError> {
    let mut out = Vec::new();
    match scope {
        Scope::All => {
            out.extend(physics_checks());
            for name in preset_names() {
                out.extend(terrain_checks(name, preset(name).map_err(|e| e.to_string()), 50));
            }
            let per_env: Vec<Vec<CheckResult>> = list_envs().par_iter().map(env_checks).collect();
            out.extend(per_env.into_iter().flatten());
        }
        Scope::Env(name) => {
            let entry = crate::env::find_env(name).map_err(|e| CliError::Input(e.to_string()))?;
            out.extend(env_checks(&entry));
        }
        Scope::TerrainFile(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
            out.extend(terrain_checks(path, parse_terrain_params(&text).map_err(|e| e.to_string()), 200));
        }
    }
    Ok(out)
}

/// Writes one JSON line per check; returns whether everything passed.
pub fn cmd_validate(scope: &Scope, out: &mut impl Write) -> Result<bool, CliError> {
    let results = run_checks(scope)?;
    for r in &results {
        super::trajectory::write_line(out, r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(results.iter().all(|r| r.ok))
}
