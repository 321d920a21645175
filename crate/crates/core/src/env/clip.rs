use serde::{Deserialize, Serialize};

use super::EnvError;
use crate::assets::{self, AssetKind};

pub const CLIP_FORMAT: &str = "terra-clip";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Keyframe {
    pub phase: f64,
    pub joint_angles: Vec<f64>,
    /// Root height above the local ground.
    pub root_height: f64,
    pub root_speed: f64,
}

/// A cyclic reference motion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceClip {
    pub format: String,
    pub version: u32,
    pub character: String,
    /// Cycle length in seconds.
    pub duration: f64,
    pub keyframes: Vec<Keyframe>,
}

/// Reference values at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub joint_angles: Vec<f64>,
    pub root_height: f64,
    pub root_speed: f64,
}

impl ReferenceClip {
    pub fn parse(text: &str) -> Result<Self, EnvError> {
        let clip: ReferenceClip = serde_json::from_str(text).map_err(|e| EnvError::Clip(e.to_string()))?;
        clip.validate()?;
        Ok(clip)
    }

    /// A shipped clip by name (`biped7_gait`, ...).
    pub fn builtin(name: &str) -> Result<Self, EnvError> {
        let text = assets::load_asset(AssetKind::Clip, name)
            .ok_or_else(|| EnvError::Clip(format!("unknown clip {name:?}")))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        let bad = |m: String| Err(EnvError::Clip(m));
        if self.format != CLIP_FORMAT || self.version != 1 {
            return bad(format!("unsupported clip format {:?} version {}", self.format, self.version));
        }
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return bad("duration must be positive".into());
        }
        let Some(first) = self.keyframes.first() else {
            return bad("clip has no keyframes".into());
        };
        if first.phase != 0.0 {
            return bad("first keyframe must have phase 0".into());
        }
        let dim = first.joint_angles.len();
        for w in self.keyframes.windows(2) {
            if !(w[1].phase > w[0].phase) {
                return bad("keyframe phases must increase strictly".into());
            }
        }
        for k in &self.keyframes {
            if !(0.0..1.0).contains(&k.phase) {
                return bad(format!("phase {} outside [0, 1)", k.phase));
            }
            if k.joint_angles.len() != dim {
                return bad("keyframes disagree on the joint count".into());
            }
        }
        Ok(())
    }

    pub fn num_joints(&self) -> usize {
        self.keyframes[0].joint_angles.len()
    }
}

/// Linear interpolation of the clip at time `t`, wrapping the last keyframe
/// back to the first.
pub fn sample_reference(clip: &ReferenceClip, t: f64) -> Reference {
    let phase = t.rem_euclid(clip.duration) / clip.duration;
    let k = &clip.keyframes;
    let i = k.partition_point(|f| f.phase <= phase).saturating_sub(1);
    let a = &k[i];
    let (b, end) = match k.get(i + 1) {
        Some(b) => (b, b.phase),
        None => (&k[0], 1.0),
    };
    let u = if end > a.phase { (phase - a.phase) / (end - a.phase) } else { 0.0 };
    let lerp = |x: f64, y: f64| if u == 0.0 { x } else { x + (y - x) * u };
    Reference {
        joint_angles: a
            .joint_angles
            .iter()
            .zip(&b.joint_angles)
            .map(|(x, y)| lerp(*x, *y))
            .collect(),
        root_height: lerp(a.root_height, b.root_height),
        root_speed: lerp(a.root_speed, b.root_speed),
    }
}
