//! Seeded episodic environments: character, actuation, terrain and task.

mod catalog;
mod clip;
mod config;
mod environment;
mod reward;

pub use catalog::{catalog_json, env_names, find_env, list_envs, make_env, make_env_from_config, CatalogEntry, TERRAINS};
pub use clip::{sample_reference, Keyframe, Reference, ReferenceClip, CLIP_FORMAT};
pub use config::{
    EnvConfig, Task, TaskSpec, TerrainSpec, DEFAULT_CONTROL_HZ, DEFAULT_MAX_EPISODE_STEPS,
    DEFAULT_SIM_HZ, DEFAULT_TARGET_SPEED,
};
pub use environment::{
    observation_bounds, Env, Info, Observation, StepResult, FALL_HEIGHT_FRACTION, JITTER,
    REL_POSITION_BOUND, ROOT_HEIGHT_BOUNDS, ROOT_SINK, SPAWN_X, TERRAIN_SAMPLES, TERRAIN_SPACING,
    TERRAIN_X_END, TERRAIN_X_START, VELOCITY_BOUND,
};
pub use reward::{imitation_reward, locomotion_reward, speed_reward, ImitationTerms, ImitationWeights};

use crate::character::CharacterError;
use crate::terrain::TerrainError;

#[derive(Debug, thiserror::Error)]
pub enum EnvError {
    #[error("unknown environment {name:?}; nearest matches: {}", nearest.join(", "))]
    UnknownEnv { name: String, nearest: Vec<String> },
    #[error("invalid config field {field}: {reason}")]
    InvalidConfig { field: String, reason: String },
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Terrain(#[from] TerrainError),
    #[error("reference clip: {0}")]
    Clip(String),
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
    #[error("step called before reset")]
    NotReset,
    #[error("episode is finished; call reset")]
    EpisodeDone,
    #[error("expected action of dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("action contains non-finite values")]
    NonFiniteAction,
}

#[cfg(test)]
mod tests;
