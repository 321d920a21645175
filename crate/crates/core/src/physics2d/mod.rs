//! Planar rigid-body dynamics for articulated characters on heightfields.

mod kinematics;
pub mod rigs;
mod solver;
mod types;

pub use kinematics::{
    anchor_error, angular_momentum, center_of_mass, forward_kinematics, joint_angles,
    joint_velocities, linear_momentum, total_energy,
};
pub use solver::{integrate_step, StepOutput, StepWorkspace};
pub use types::{
    box_contact_points, rotate, BodyState, ContactEvent, LinkBody, Mechanism, PhysicsConfig,
    RevoluteJoint, SimState, SolverCache, Vec2, DEFAULT_DT, DEFAULT_SIM_HZ,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PhysicsError {
    #[error("link {link}: {reason}")]
    InvalidLink { link: String, reason: String },
    #[error("joint {joint}: {reason}")]
    InvalidJoint { joint: String, reason: String },
    #[error("invalid topology: {0}")]
    Topology(String),
    #[error("expected {expected} joint torques, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state has {got} bodies, mechanism has {expected} links")]
    StateMismatch { expected: usize, got: usize },
    #[error("timestep must be positive and finite, got {0}")]
    InvalidTimestep(f64),
    #[error("state or torques contain non-finite values")]
    NonFiniteState,
}
