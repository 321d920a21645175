use super::types::{rotate, BodyState, Mechanism, SimState, Vec2};

/// Places every link from the root pose and one angle per joint (in joint
/// order). All velocities are zero.
///
/// # Panics
/// If `joint_angles.len()` differs from the joint count.
pub fn forward_kinematics(
    mech: &Mechanism,
    root_position: Vec2,
    root_angle: f64,
    joint_angles: &[f64],
) -> Vec<BodyState> {
    assert_eq!(joint_angles.len(), mech.joints().len(), "one angle per joint");
    let mut bodies = vec![BodyState::at_rest(Vec2::zeros(), 0.0); mech.links().len()];
    bodies[mech.root()] = BodyState::at_rest(root_position, root_angle);
    for &j in mech.joint_order() {
        let joint = &mech.joints()[j];
        let parent = bodies[joint.parent_link];
        let anchor = parent.world_point(joint.anchor_parent);
        let angle = parent.angle + joint_angles[j];
        let position = anchor - rotate(angle, joint.anchor_child);
        bodies[joint.child_link] = BodyState::at_rest(position, angle);
    }
    bodies
}

/// Joint angles, `angle(child) - angle(parent)`, in joint order.
pub fn joint_angles(mech: &Mechanism, state: &SimState) -> Vec<f64> {
    mech.joints()
        .iter()
        .map(|j| state.bodies[j.child_link].angle - state.bodies[j.parent_link].angle)
        .collect()
}

pub fn joint_velocities(mech: &Mechanism, state: &SimState) -> Vec<f64> {
    mech.joints()
        .iter()
        .map(|j| {
            state.bodies[j.child_link].angular_velocity - state.bodies[j.parent_link].angular_velocity
        })
        .collect()
}

/// Largest distance between the two world-frame anchors of any joint.
pub fn anchor_error(mech: &Mechanism, state: &SimState) -> f64 {
    mech.joints()
        .iter()
        .map(|j| {
            let a = state.bodies[j.parent_link].world_point(j.anchor_parent);
            let b = state.bodies[j.child_link].world_point(j.anchor_child);
            (a - b).norm()
        })
        .fold(0.0, f64::max)
}

/// Kinetic plus gravitational potential energy (zero at `y = 0`).
pub fn total_energy(mech: &Mechanism, state: &SimState, gravity: f64) -> f64 {
    mech.links()
        .iter()
        .zip(&state.bodies)
        .filter(|(l, _)| !l.fixed)
        .map(|(l, b)| {
            0.5 * l.mass * b.linear_velocity.norm_squared()
                + 0.5 * l.inertia * b.angular_velocity.powi(2)
                + l.mass * gravity * b.position.y
        })
        .sum()
}

/// Total linear momentum of the moving links.
pub fn linear_momentum(mech: &Mechanism, state: &SimState) -> Vec2 {
    mech.links()
        .iter()
        .zip(&state.bodies)
        .filter(|(l, _)| !l.fixed)
        .map(|(l, b)| b.linear_velocity * l.mass)
        .sum()
}

/// Angular momentum about the world origin.
pub fn angular_momentum(mech: &Mechanism, state: &SimState) -> f64 {
    mech.links()
        .iter()
        .zip(&state.bodies)
        .filter(|(l, _)| !l.fixed)
        .map(|(l, b)| {
            let p = b.position;
            let v = b.linear_velocity;
            l.inertia * b.angular_velocity + l.mass * (p.x * v.y - p.y * v.x)
        })
        .sum()
}

pub fn center_of_mass(mech: &Mechanism, state: &SimState) -> Vec2 {
    let m = mech.total_mass();
    mech.links()
        .iter()
        .zip(&state.bodies)
        .map(|(l, b)| b.position * l.mass)
        .sum::<Vec2>()
        / m
}
