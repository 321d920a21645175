use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::clip::ReferenceClip;
use super::reward::ImitationWeights;
use super::EnvError;
use crate::character::{try_builtin_character, ActuationMode, Builtin, CharacterModel};
use crate::terrain::{params_from_value, preset, TerrainParams};

pub const DEFAULT_SIM_HZ: u32 = 3000;
pub const DEFAULT_CONTROL_HZ: u32 = 30;
pub const DEFAULT_MAX_EPISODE_STEPS: u32 = 1000;
pub const DEFAULT_TARGET_SPEED: f64 = 1.0;

/// A preset name or an inline terrain document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TerrainSpec {
    Preset(String),
    Inline(Value),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum TaskSpec {
    Locomotion {
        #[serde(default = "default_speed")]
        target_speed: f64,
    },
    Imitation {
        /// Clip asset name or file path; defaults to `<character>_gait`.
        #[serde(default)]
        clip: Option<String>,
        #[serde(default)]
        weights: ImitationWeights,
    },
}

fn default_speed() -> f64 {
    DEFAULT_TARGET_SPEED
}

fn default_sim_hz() -> u32 {
    DEFAULT_SIM_HZ
}

fn default_control_hz() -> u32 {
    DEFAULT_CONTROL_HZ
}

fn default_max_steps() -> u32 {
    DEFAULT_MAX_EPISODE_STEPS
}

fn default_true() -> bool {
    true
}

/// Everything needed to build an [`crate::env::Env`]; loadable from JSON.
///
/// ```
/// use terra::env::EnvConfig;
/// let cfg = EnvConfig::from_json(r#"{
///     "name": "my-env", "character": "hopper4", "actuation": "PD",
///     "terrain": "steps", "task": {"type": "locomotion", "target_speed": 0.8}
/// }"#).unwrap();
/// assert_eq!(cfg.substeps(), 100);
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvConfig {
    pub name: String,
    /// Built-in character name or path to a character file.
    pub character: String,
    #[serde(with = "mode_serde")]
    pub actuation: ActuationMode,
    pub terrain: TerrainSpec,
    pub task: TaskSpec,
    #[serde(default = "default_sim_hz")]
    pub sim_hz: u32,
    #[serde(default = "default_control_hz")]
    pub control_hz: u32,
    #[serde(default = "default_max_steps")]
    pub max_episode_steps: u32,
    /// Uniform joint-angle jitter at reset.
    #[serde(default = "default_true")]
    pub jitter: bool,
}

mod mode_serde {
    use super::ActuationMode;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &ActuationMode, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(m.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ActuationMode, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Runtime task with its clip resolved.
#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Locomotion { target_speed: f64 },
    Imitation { clip: ReferenceClip, weights: ImitationWeights },
}

impl EnvConfig {
    pub fn from_json(text: &str) -> Result<Self, EnvError> {
        let cfg: EnvConfig = serde_json::from_str(text).map_err(|e| EnvError::InvalidConfig {
            field: "document".into(),
            reason: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, EnvError> {
        let text = std::fs::read_to_string(path).map_err(|e| EnvError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn substeps(&self) -> u32 {
        self.sim_hz / self.control_hz
    }

    /// Checks the numeric fields; sources are checked by [`EnvConfig::resolve`].
    pub fn validate(&self) -> Result<(), EnvError> {
        let bad = |field: &str, reason: String| {
            Err(EnvError::InvalidConfig {
                field: field.into(),
                reason,
            })
        };
        if self.sim_hz == 0 {
            return bad("sim_hz", "must be positive".into());
        }
        if self.control_hz == 0 || self.control_hz > self.sim_hz {
            return bad("control_hz", format!("must be in 1..={}", self.sim_hz));
        }
        if !self.sim_hz.is_multiple_of(self.control_hz) {
            return bad(
                "control_hz",
                format!("sim_hz {} is not divisible by control_hz {}", self.sim_hz, self.control_hz),
            );
        }
        if self.max_episode_steps == 0 {
            return bad("max_episode_steps", "must be positive".into());
        }
        match &self.task {
            TaskSpec::Locomotion { target_speed } => {
                if !(*target_speed > 0.0 && target_speed.is_finite()) {
                    return bad("task.target_speed", "must be positive".into());
                }
            }
            TaskSpec::Imitation { weights, .. } => {
                if !weights.is_valid() {
                    return bad("task.weights", "must be non-negative and sum to 1".into());
                }
            }
        }
        Ok(())
    }

    pub fn load_character(&self) -> Result<CharacterModel, EnvError> {
        if let Ok(b) = self.character.parse::<Builtin>() {
            return Ok(try_builtin_character(b)?);
        }
        let path = Path::new(&self.character);
        if !path.exists() {
            return Err(EnvError::InvalidConfig {
                field: "character".into(),
                reason: format!("{:?} is neither a built-in character nor a file", self.character),
            });
        }
        let text = std::fs::read_to_string(path).map_err(|e| EnvError::Io {
            path: self.character.clone(),
            reason: e.to_string(),
        })?;
        Ok(crate::character::load_character(&text)?)
    }

    pub fn load_terrain(&self) -> Result<TerrainParams, EnvError> {
        Ok(match &self.terrain {
            TerrainSpec::Preset(name) => preset(name)?,
            TerrainSpec::Inline(doc) => params_from_value(doc)?,
        })
    }

    pub fn load_task(&self, model: &CharacterModel) -> Result<Task, EnvError> {
        match &self.task {
            TaskSpec::Locomotion { target_speed } => Ok(Task::Locomotion {
                target_speed: *target_speed,
            }),
            TaskSpec::Imitation { clip, weights } => {
                let name = clip.clone().unwrap_or_else(|| format!("{}_gait", model.name));
                let clip = if Path::new(&name).is_file() {
                    let text = std::fs::read_to_string(&name).map_err(|e| EnvError::Io {
                        path: name.clone(),
                        reason: e.to_string(),
                    })?;
                    ReferenceClip::parse(&text)?
                } else {
                    ReferenceClip::builtin(&name)?
                };
                if clip.num_joints() != model.num_joints() {
                    return Err(EnvError::InvalidConfig {
                        field: "task.clip".into(),
                        reason: format!(
                            "clip has {} joint angles, character {} has {} joints",
                            clip.num_joints(),
                            model.name,
                            model.num_joints()
                        ),
                    });
                }
                Ok(Task::Imitation {
                    clip,
                    weights: *weights,
                })
            }
        }
    }
}
