//! Swings an undamped double pendulum and tracks its total energy.

use terra::physics2d::{
    forward_kinematics, rigs, total_energy, PhysicsConfig, SimState, StepWorkspace, Vec2, DEFAULT_DT,
};

fn main() {
    let mech = rigs::double_pendulum();
    let cfg = PhysicsConfig::default();
    let mut state = SimState::new(forward_kinematics(&mech, Vec2::zeros(), 0.0, &[-0.3, 0.5]));
    let e0 = total_energy(&mech, &state, cfg.gravity);
    let mut ws = StepWorkspace::default();
    let mut contacts = Vec::new();
    let no_torque = vec![0.0; mech.joints().len()];
    for second in 1..=10 {
        for _ in 0..3000 {
            ws.step(&mech, &mut state, &no_torque, None, DEFAULT_DT, &cfg, &mut contacts).unwrap();
        }
        let e = total_energy(&mech, &state, cfg.gravity);
        println!("{second:2} s  E = {e:+.6} J  relative drift {:.2e}", (e - e0).abs() / e0.abs());
    }
}
