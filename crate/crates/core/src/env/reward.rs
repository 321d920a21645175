use serde::{Deserialize, Serialize};

use super::clip::Reference;
use crate::character::CharacterModel;
use crate::physics2d::SimState;

/// `exp(-2 (v - v*)^2)` on the root's forward velocity.
pub fn locomotion_reward(model: &CharacterModel, state: &SimState, target_speed: f64) -> f64 {
    speed_reward(state.bodies[model.root_link].linear_velocity.x, target_speed)
}

#[inline]
pub fn speed_reward(v: f64, target_speed: f64) -> f64 {
    (-2.0 * (v - target_speed).powi(2)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImitationWeights {
    pub pose: f64,
    pub velocity: f64,
    pub root: f64,
}

impl Default for ImitationWeights {
    fn default() -> Self {
        Self {
            pose: 0.65,
            velocity: 0.1,
            root: 0.25,
        }
    }
}

impl ImitationWeights {
    pub fn is_valid(&self) -> bool {
        let w = [self.pose, self.velocity, self.root];
        w.iter().all(|x| *x >= 0.0 && x.is_finite()) && (w.iter().sum::<f64>() - 1.0).abs() < 1e-9
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImitationTerms {
    pub pose: f64,
    pub velocity: f64,
    pub root: f64,
    pub total: f64,
}

/// Weighted pose, root-speed and root-height tracking terms. `ground` is the
/// terrain height under the root.
pub fn imitation_reward(
    model: &CharacterModel,
    state: &SimState,
    ground: f64,
    reference: &Reference,
    weights: &ImitationWeights,
) -> ImitationTerms {
    let pose_err: f64 = model
        .joints()
        .iter()
        .zip(&reference.joint_angles)
        .map(|(j, r)| {
            let q = state.bodies[j.child_link].angle - state.bodies[j.parent_link].angle;
            (q - r).powi(2)
        })
        .sum();
    let root = &state.bodies[model.root_link];
    let pose = (-2.0 * pose_err).exp();
    let velocity = (-0.1 * (root.linear_velocity.x - reference.root_speed).powi(2)).exp();
    let height = (-10.0 * (root.position.y - ground - reference.root_height).powi(2)).exp();
    let total = weights.pose * pose + weights.velocity * velocity + weights.root * height;
    ImitationTerms {
        pose,
        velocity,
        root: height,
        total: total.min(1.0),
    }
}
