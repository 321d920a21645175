//! One biped, four ways to drive its joints.

use terra::character::{action_space, builtin_character, compute_torques, ActuationMode, Builtin, MuscleUnit};
use terra::physics2d::{forward_kinematics, SimState, Vec2, DEFAULT_DT};

fn main() {
    let biped = builtin_character(Builtin::Biped7);
    let state = SimState::new(forward_kinematics(&biped.mechanism, Vec2::new(0.0, 1.0), 0.0, &biped.stance));
    let limits: Vec<f64> = biped.joints().iter().map(|j| j.torque_limit).collect();
    println!("torque limits {limits:?}");

    for mode in ActuationMode::ALL {
        let space = action_space(&biped, mode);
        // ask for twice the allowed range; everything is clamped anyway.
        // muscle actions interleave (plus, minus) per joint: excite only `plus`
        let action: Vec<f64> = match mode {
            ActuationMode::Muscle => (0..space.dim()).map(|i| if i % 2 == 0 { 2.0 } else { 0.0 }).collect(),
            _ => space.maximum.iter().map(|m| 2.0 * m).collect(),
        };
        let mut muscles = MuscleUnit::for_model(&biped);
        let mut tau = Vec::new();
        for _ in 0..30 {
            tau = compute_torques(&biped, mode, &action, &state, &mut muscles, DEFAULT_DT).unwrap();
        }
        let shown: Vec<String> = tau.iter().map(|t| format!("{t:7.2}")).collect();
        println!("{:<8} dim {:2}  torques [{}]", mode.name(), space.dim(), shown.join(" "));
    }
}
