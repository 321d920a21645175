//! Splits an observation into its terrain window and agent features.
//!
//! The terrain part is laid out first so a network can route it through a
//! convolutional head and the rest through dense layers.

use terra::env::make_env;
use terra::physics2d::{forward_kinematics, SimState};

fn main() {
    let mut env = make_env("Torque_Biped2D_Walk-Steps-v0").unwrap();
    env.set_random_seed(5);
    let obs = env.reset();
    println!("split at {}: terrain {} values, agent {} values", obs.terrain_len, obs.terrain().len(), obs.agent().len());
    let heights: Vec<String> = obs.terrain().iter().step_by(5).map(|h| format!("{h:+.2}")).collect();
    println!("terrain relative to the root (every 5th): {}", heights.join(" "));

    // bend every joint: the terrain window stays put
    let model = env.model().clone();
    let root = env.state().bodies[model.root_link];
    let bent: Vec<f64> = model.joints().iter().map(|j| 0.5 * j.angle_limits[1]).collect();
    env.set_state(SimState::new(forward_kinematics(&model.mechanism, root.position, root.angle, &bent)));
    let posed = env.observe();
    println!("terrain slice unchanged after posing: {}", posed.terrain() == obs.terrain());

    // new terrain: the agent features stay put
    env.regenerate_terrain(42);
    let moved = env.observe();
    println!("agent slice unchanged after reseeding terrain: {}", moved.agent() == posed.agent());

    let (lo, hi) = env.observation_space();
    println!("bounds of first terrain cell [{}, {}], of root height [{}, {}]", lo[0], hi[0], lo[obs.terrain_len + 1], hi[obs.terrain_len + 1]);
}
