use std::fmt;
use std::str::FromStr;

use super::{CharacterError, CharacterModel};
use crate::physics2d::SimState;

/// Velocity-mode action bound, rad/s.
pub const VELOCITY_LIMIT: f64 = 10.0;
pub const MUSCLE_ACTIVATION_TIME: f64 = 0.015;
pub const MUSCLE_MAX_VELOCITY: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActuationMode {
    Torque,
    Velocity,
    PositionPD,
    Muscle,
}

impl ActuationMode {
    pub const ALL: [ActuationMode; 4] = [
        ActuationMode::Torque,
        ActuationMode::Velocity,
        ActuationMode::PositionPD,
        ActuationMode::Muscle,
    ];

    /// Token used in environment names.
    pub fn name(self) -> &'static str {
        match self {
            ActuationMode::Torque => "Torque",
            ActuationMode::Velocity => "Velocity",
            ActuationMode::PositionPD => "PD",
            ActuationMode::Muscle => "Muscle",
        }
    }

    /// Action dimensions per joint.
    pub fn width(self) -> usize {
        if self == ActuationMode::Muscle {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for ActuationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ActuationMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "torque" => Ok(ActuationMode::Torque),
            "velocity" => Ok(ActuationMode::Velocity),
            "pd" | "positionpd" | "position-pd" => Ok(ActuationMode::PositionPD),
            "muscle" => Ok(ActuationMode::Muscle),
            _ => Err(format!("unknown actuation mode {s:?}")),
        }
    }
}

/// Per-dimension action bounds.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ActionSpace {
    pub minimum: Vec<f64>,
    pub maximum: Vec<f64>,
}

impl ActionSpace {
    pub fn dim(&self) -> usize {
        self.minimum.len()
    }

    pub fn contains(&self, action: &[f64]) -> bool {
        action.len() == self.dim()
            && action
                .iter()
                .zip(self.minimum.iter().zip(&self.maximum))
                .all(|(a, (lo, hi))| (lo..=hi).contains(&a))
    }

    pub fn clamp(&self, action: &mut [f64]) {
        for (a, (lo, hi)) in action.iter_mut().zip(self.minimum.iter().zip(&self.maximum)) {
            *a = a.clamp(*lo, *hi);
        }
    }
}

pub fn action_space(model: &CharacterModel, mode: ActuationMode) -> ActionSpace {
    let joints = model.joints();
    let (minimum, maximum) = match mode {
        ActuationMode::Torque => joints.iter().map(|j| (-j.torque_limit, j.torque_limit)).unzip(),
        ActuationMode::Velocity => joints.iter().map(|_| (-VELOCITY_LIMIT, VELOCITY_LIMIT)).unzip(),
        ActuationMode::PositionPD => joints.iter().map(|j| (j.angle_limits[0], j.angle_limits[1])).unzip(),
        ActuationMode::Muscle => (vec![0.0; 2 * joints.len()], vec![1.0; 2 * joints.len()]),
    };
    ActionSpace { minimum, maximum }
}

/// Antagonistic torque-muscle pair driving one joint.
///
/// The `plus` muscle pushes the joint angle up, `minus` pulls it down;
/// activations follow `da/dt = (u - a) / activation_time`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuscleUnit {
    pub joint: usize,
    pub activation_plus: f64,
    pub activation_minus: f64,
    pub tau_max_plus: f64,
    pub tau_max_minus: f64,
    pub activation_time: f64,
    pub optimal_angle: f64,
    pub angle_width: f64,
    pub max_velocity: f64,
}

/// Force-velocity ramp: 1 at rest, 0 at `max_velocity` shortening, capped at
/// 1.5 when lengthening.
#[inline]
pub fn force_velocity(omega: f64, max_velocity: f64) -> f64 {
    (1.0 - omega / max_velocity).clamp(0.0, 1.5)
}

impl MuscleUnit {
    /// One unit per joint, at zero activation. Unset parameters default to
    /// `tau_max = torque_limit`, `optimal_angle` = middle of the limits,
    /// `angle_width = max(half the range, 0.5)`, 15 ms activation and
    /// 10 rad/s maximum velocity.
    pub fn for_model(model: &CharacterModel) -> Vec<MuscleUnit> {
        model
            .joints()
            .iter()
            .zip(&model.muscles)
            .enumerate()
            .map(|(i, (j, m))| {
                let [lo, hi] = j.angle_limits;
                MuscleUnit {
                    joint: i,
                    activation_plus: 0.0,
                    activation_minus: 0.0,
                    tau_max_plus: m.tau_max_plus.unwrap_or(j.torque_limit),
                    tau_max_minus: m.tau_max_minus.unwrap_or(j.torque_limit),
                    activation_time: m.activation_time.unwrap_or(MUSCLE_ACTIVATION_TIME),
                    optimal_angle: m.optimal_angle.unwrap_or(0.5 * (lo + hi)),
                    angle_width: m.angle_width.unwrap_or((0.5 * (hi - lo)).max(0.5)),
                    max_velocity: m.max_velocity.unwrap_or(MUSCLE_MAX_VELOCITY),
                }
            })
            .collect()
    }

    pub fn reset(&mut self) {
        self.activation_plus = 0.0;
        self.activation_minus = 0.0;
    }

    /// Advances both activations by `dt` with the exact solution of the
    /// first-order ODE under constant excitation.
    pub fn step_activation(&mut self, u_plus: f64, u_minus: f64, dt: f64) {
        let decay = (-dt / self.activation_time).exp();
        let (up, um) = (u_plus.clamp(0.0, 1.0), u_minus.clamp(0.0, 1.0));
        self.activation_plus = (up + (self.activation_plus - up) * decay).clamp(0.0, 1.0);
        self.activation_minus = (um + (self.activation_minus - um) * decay).clamp(0.0, 1.0);
    }

    #[inline]
    pub fn force_length(&self, theta: f64) -> f64 {
        let z = (theta - self.optimal_angle) / self.angle_width;
        (-z * z).exp()
    }

    /// Net joint torque before the joint's torque limit is applied.
    pub fn torque(&self, theta: f64, omega: f64) -> f64 {
        let fl = self.force_length(theta);
        self.activation_plus * self.tau_max_plus * fl * force_velocity(omega, self.max_velocity)
            - self.activation_minus * self.tau_max_minus * fl * force_velocity(-omega, self.max_velocity)
    }
}

/// Converts an action into clamped joint torques.
///
/// Actions are clamped to the mode's [`ActionSpace`]. Muscle actions are
/// interleaved `[u+_0, u-_0, u+_1, u-_1, ...]`; `muscles` is advanced by `dt`.
pub fn compute_torques(
    model: &CharacterModel,
    mode: ActuationMode,
    action: &[f64],
    state: &SimState,
    muscles: &mut [MuscleUnit],
    dt: f64,
) -> Result<Vec<f64>, CharacterError> {
    let mut out = vec![0.0; model.num_joints()];
    compute_torques_into(model, mode, action, state, muscles, dt, &mut out)?;
    Ok(out)
}

/// [`compute_torques`] writing into a caller buffer of one entry per joint.
#[allow(clippy::too_many_arguments)]
pub fn compute_torques_into(
    model: &CharacterModel,
    mode: ActuationMode,
    action: &[f64],
    state: &SimState,
    muscles: &mut [MuscleUnit],
    dt: f64,
    out: &mut [f64],
) -> Result<(), CharacterError> {
    let joints = model.joints();
    let expected = joints.len() * mode.width();
    if action.len() != expected {
        return Err(CharacterError::DimensionMismatch {
            expected,
            got: action.len(),
        });
    }
    if out.len() != joints.len() {
        return Err(CharacterError::DimensionMismatch {
            expected: joints.len(),
            got: out.len(),
        });
    }
    if mode == ActuationMode::Muscle && muscles.len() != joints.len() {
        return Err(CharacterError::DimensionMismatch {
            expected: joints.len(),
            got: muscles.len(),
        });
    }
    let b = &state.bodies;
    for (i, j) in joints.iter().enumerate() {
        let (p, c) = (&b[j.parent_link], &b[j.child_link]);
        let theta = c.angle - p.angle;
        let omega = c.angular_velocity - p.angular_velocity;
        let raw = match mode {
            ActuationMode::Torque => action[i],
            ActuationMode::Velocity => {
                let target = action[i].clamp(-VELOCITY_LIMIT, VELOCITY_LIMIT);
                j.kd * (target - omega)
            }
            ActuationMode::PositionPD => {
                let target = j.clamp_angle(action[i]);
                j.kp * (target - theta) - j.kd * omega
            }
            ActuationMode::Muscle => {
                let m = &mut muscles[i];
                m.step_activation(action[2 * i], action[2 * i + 1], dt);
                m.torque(theta, omega)
            }
        };
        // NaN actions propagate as NaN and are rejected by the physics step
        out[i] = raw.clamp(-j.torque_limit, j.torque_limit);
    }
    Ok(())
}
