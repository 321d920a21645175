//! Builds an env from JSON instead of the catalog: inline terrain, a slower
//! control rate and a faster target speed.

use terra::env::{make_env_from_config, EnvConfig};

const CONFIG: &str = r#"{
    "name": "custom-hopper",
    "character": "hopper4",
    "actuation": "Velocity",
    "terrain": {
        "Type": "gaps",
        "Params": [{
            "GapSpacingMin": 2, "GapSpacingMax": 3,
            "GapWMin": 0.2, "GapWMax": 0.3,
            "GapHMin": -1, "GapHMax": -1
        }]
    },
    "task": {"type": "locomotion", "target_speed": 1.5},
    "sim_hz": 3000,
    "control_hz": 20,
    "max_episode_steps": 200,
    "jitter": true
}"#;

fn main() {
    let config = EnvConfig::from_json(CONFIG).unwrap_or_else(|e| panic!("{e}"));
    let mut env = make_env_from_config(config).unwrap_or_else(|e| panic!("{e}"));
    env.set_random_seed(3);
    env.reset();
    println!("{}: obs {} act {} substeps/step {}", env.name(), env.obs_dim(), env.act_dim(), env.config().substeps());
    let gaps = env.terrain().features().iter().filter(|f| f.kind.name() == "gap").count();
    println!("{gaps} gaps generated");

    let zero = vec![0.0; env.act_dim()];
    let mut steps = 0;
    while !env.step(&zero).unwrap().done {
        steps += 1;
    }
    println!("standing still lasted {steps} steps");
    println!("{}", env.config().to_json());
}
