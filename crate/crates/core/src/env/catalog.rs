use serde::Serialize;

use super::config::{EnvConfig, TaskSpec, TerrainSpec};
use super::environment::{Env, TERRAIN_SAMPLES};
use super::reward::ImitationWeights;
use super::EnvError;
use crate::character::{ActuationMode, Builtin};

/// Terrain presets with their name tokens, in catalog order.
pub const TERRAINS: [(&str, &str); 8] = [
    ("Flat", "flat"),
    ("Incline", "incline"),
    ("Steps", "steps"),
    ("Slopes", "slopes"),
    ("Gaps", "gaps"),
    ("Walls", "walls"),
    ("Mixed", "mixed"),
    ("SlopesMixed", "slopes-mixed"),
];

const IMITATION_TERRAINS: [&str; 2] = ["Flat", "Steps"];
const HOPPER_TERRAINS: [&str; 5] = ["Flat", "Incline", "Steps", "Slopes", "Gaps"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub obs_dim: usize,
    pub act_dim: usize,
    pub description: String,
    pub config: EnvConfig,
}

fn entry(character: Builtin, mode: ActuationMode, imitate: bool, terrain_token: &str) -> CatalogEntry {
    let preset = TERRAINS.iter().find(|(t, _)| *t == terrain_token).unwrap().1;
    let task_token = if imitate { "Imitate" } else { "Walk" };
    let name = format!("{}_{}_{}-{}-v0", mode.name(), character.env_token(), task_token, terrain_token);
    let task = if imitate {
        TaskSpec::Imitation {
            clip: None,
            weights: ImitationWeights::default(),
        }
    } else {
        TaskSpec::Locomotion {
            target_speed: super::config::DEFAULT_TARGET_SPEED,
        }
    };
    let links = character.link_count();
    let joints = links - 1;
    let description = format!(
        "{character} ({links} links), {} actuation, {} on {preset} terrain",
        mode.name(),
        if imitate { "gait imitation" } else { "locomotion" },
    );
    CatalogEntry {
        obs_dim: TERRAIN_SAMPLES + 1 + 4 * links,
        act_dim: joints * mode.width(),
        description,
        config: EnvConfig {
            name: name.clone(),
            character: character.name().into(),
            actuation: mode,
            terrain: TerrainSpec::Preset(preset.into()),
            task,
            sim_hz: super::config::DEFAULT_SIM_HZ,
            control_hz: super::config::DEFAULT_CONTROL_HZ,
            max_episode_steps: super::config::DEFAULT_MAX_EPISODE_STEPS,
            jitter: true,
        },
        name,
    }
}

/// The generated environment catalog, in a fixed order.
pub fn list_envs() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for character in [Builtin::Biped7, Builtin::Raptor19, Builtin::Dog21] {
        for mode in ActuationMode::ALL {
            for (token, _) in TERRAINS {
                out.push(entry(character, mode, false, token));
            }
            for token in IMITATION_TERRAINS {
                out.push(entry(character, mode, true, token));
            }
        }
    }
    for mode in ActuationMode::ALL {
        for token in HOPPER_TERRAINS {
            out.push(entry(Builtin::Hopper4, mode, false, token));
        }
    }
    out
}

pub fn env_names() -> Vec<String> {
    list_envs().into_iter().map(|e| e.name).collect()
}

pub fn find_env(name: &str) -> Result<CatalogEntry, EnvError> {
    let all = list_envs();
    if let Some(e) = all.iter().find(|e| e.name == name) {
        return Ok(e.clone());
    }
    let mut scored: Vec<(usize, &str)> = all
        .iter()
        .map(|e| (strsim::levenshtein(name, &e.name), e.name.as_str()))
        .collect();
    scored.sort();
    Err(EnvError::UnknownEnv {
        name: name.to_string(),
        nearest: scored.iter().take(3).map(|(_, n)| n.to_string()).collect(),
    })
}

/// Builds a catalog environment (seed 0, not yet reset).
///
/// ```
/// let mut env = terra::env::make_env("PD_Biped2D_Walk-Mixed-v0").unwrap();
/// let obs = env.reset();
/// assert_eq!(obs.data.len(), env.obs_dim());
/// ```
pub fn make_env(name: &str) -> Result<Env, EnvError> {
    Env::new(find_env(name)?.config)
}

pub fn make_env_from_config(config: EnvConfig) -> Result<Env, EnvError> {
    Env::new(config)
}

/// The catalog as a JSON array of `{name, obs_dim, act_dim, description, config}`.
pub fn catalog_json() -> String {
    serde_json::to_string_pretty(&list_envs()).expect("catalog serializes")
}
