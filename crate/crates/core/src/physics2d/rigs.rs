//! Reference set-ups with closed-form or conserved-quantity answers.

use super::kinematics::{anchor_error, forward_kinematics, total_energy};
use super::solver::StepWorkspace;
use super::types::{BodyState, LinkBody, Mechanism, PhysicsConfig, RevoluteJoint, SimState, Vec2, DEFAULT_DT};
use crate::terrain::TerrainProfile;

/// One 0.2 m box of 2 kg.
pub fn single_box() -> Mechanism {
    Mechanism::new(vec![LinkBody::boxed(0, "box", 2.0, Vec2::new(0.1, 0.1))], vec![]).expect("valid rig")
}

/// Two 1 m, 1 kg rods hanging from a fixed pivot at the origin, no limits.
pub fn double_pendulum() -> Mechanism {
    let rod = Vec2::new(0.5, 0.02);
    let free = [f64::NEG_INFINITY, f64::INFINITY];
    let pin = |name: &str, p: usize, c: usize, anchor: Vec2| RevoluteJoint {
        name: name.into(),
        parent_link: p,
        child_link: c,
        anchor_parent: anchor,
        anchor_child: Vec2::new(-0.5, 0.0),
        angle_limits: free,
        torque_limit: 1.0,
        kp: 0.0,
        kd: 0.0,
    };
    Mechanism::new(
        vec![
            LinkBody::boxed(0, "base", 1.0, Vec2::new(0.05, 0.05)).fixed(),
            LinkBody::boxed(1, "upper", 1.0, rod),
            LinkBody::boxed(2, "lower", 1.0, rod),
        ],
        vec![
            pin("shoulder", 0, 1, Vec2::zeros()),
            pin("elbow", 1, 2, Vec2::new(0.5, 0.0)),
        ],
    )
    .expect("valid rig")
}

fn run(mech: &Mechanism, state: &mut SimState, terrain: Option<&TerrainProfile>, steps: usize, mut each: impl FnMut(&SimState)) {
    let cfg = PhysicsConfig::default();
    let torques = vec![0.0; mech.joints().len()];
    let mut ws = StepWorkspace::default();
    let mut events = Vec::new();
    for _ in 0..steps {
        events.clear();
        ws.step(mech, state, &torques, terrain, DEFAULT_DT, &cfg, &mut events)
            .expect("rig inputs are valid");
        each(state);
    }
}

/// Height of a box dropped from rest at `y0` after `seconds`.
pub fn free_fall_height(y0: f64, seconds: f64) -> f64 {
    let mech = single_box();
    let mut s = SimState::new(vec![BodyState::at_rest(Vec2::new(0.0, y0), 0.0)]);
    run(&mech, &mut s, None, (seconds / DEFAULT_DT).round() as usize, |_| {});
    s.bodies[0].position.y
}

/// Largest `|E(t) - E(0)| / |E(0)|` of the passive double pendulum released
/// from joint angles `(-0.3, 0.5)`.
pub fn pendulum_energy_drift(seconds: f64) -> f64 {
    let mech = double_pendulum();
    let mut s = SimState::new(forward_kinematics(&mech, Vec2::zeros(), 0.0, &[-0.3, 0.5]));
    let g = PhysicsConfig::default().gravity;
    let e0 = total_energy(&mech, &s, g);
    let mut worst: f64 = 0.0;
    run(&mech, &mut s, None, (seconds / DEFAULT_DT).round() as usize, |s| {
        worst = worst.max((total_energy(&mech, s, g) - e0).abs());
    });
    worst / e0.abs()
}

/// Penetration depth and speed of a box released just above flat ground.
pub fn resting_box(seconds: f64) -> (f64, f64) {
    let mech = single_box();
    let ground = TerrainProfile::flat(-10.0, 10.0, 0.0);
    let mut s = SimState::new(vec![BodyState::at_rest(Vec2::new(0.0, 0.1), 0.0)]);
    run(&mech, &mut s, Some(&ground), (seconds / DEFAULT_DT).round() as usize, |_| {});
    let b = s.bodies[0];
    let lowest = mech.links()[0]
        .contact_points
        .iter()
        .map(|p| b.world_point(*p).y)
        .fold(f64::INFINITY, f64::min);
    ((-lowest).max(0.0), b.linear_velocity.norm())
}

/// Worst anchor separation while `mech` starts at `state` and moves under
/// zero torques on flat ground.
pub fn passive_anchor_drift(mech: &Mechanism, mut state: SimState, seconds: f64) -> f64 {
    let ground = TerrainProfile::flat(-50.0, 50.0, 0.0);
    let mut worst: f64 = 0.0;
    run(mech, &mut state, Some(&ground), (seconds / DEFAULT_DT).round() as usize, |s| {
        worst = worst.max(anchor_error(mech, s));
    });
    worst
}
