//! Scores poses against the biped's reference gait.

use terra::character::{builtin_character, Builtin};
use terra::env::{imitation_reward, sample_reference, ImitationWeights, ReferenceClip};
use terra::physics2d::{forward_kinematics, SimState, Vec2};

fn main() {
    let biped = builtin_character(Builtin::Biped7);
    let clip = ReferenceClip::builtin("biped7_gait").unwrap();
    let weights = ImitationWeights::default();
    let ground = 0.0;

    for t in [0.0, 0.2, 0.4] {
        let reference = sample_reference(&clip, t);
        for offset in [0.0, 0.1, 0.3, 1.0] {
            let angles: Vec<f64> = reference.joint_angles.iter().map(|q| q + offset).collect();
            let mut s = SimState::new(forward_kinematics(
                &biped.mechanism,
                Vec2::new(0.0, ground + reference.root_height),
                0.0,
                &angles,
            ));
            s.bodies[biped.root_link].linear_velocity.x = reference.root_speed;
            let r = imitation_reward(&biped, &s, ground, &reference, &weights);
            println!("t {t:.1}  joint offset {offset:.1}  pose {:.4}  total {:.4}", r.pose, r.total);
        }
    }
}
