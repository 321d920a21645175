//! The classic driving loop: make, seed, reset, step with random actions.

use terra::env::make_env;
use terra::rng::SimRng;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "PD_Biped2D_Walk-Mixed-v0".into());
    let mut env = make_env(&name).unwrap_or_else(|e| panic!("{e}"));
    env.set_random_seed(1234);
    let space = env.action_space().clone();
    let mut rng = SimRng::new(99);

    let mut obs = env.reset();
    let (mut ret, mut episode) = (0.0, 0);
    for t in 0..300 {
        let action: Vec<f64> = space.minimum.iter().zip(&space.maximum).map(|(lo, hi)| rng.uniform(*lo, *hi)).collect();
        let r = env.step(&action).unwrap();
        ret += r.reward;
        if r.done {
            println!("episode {episode} ended at step {t}: return {ret:.3}, root_x {:.2}", r.info["root_x"]);
            episode += 1;
            ret = 0.0;
            obs = env.reset();
        } else {
            obs = r.observation;
        }
    }
    println!("obs_dim {} (terrain {} + agent {})", obs.data.len(), obs.terrain().len(), obs.agent().len());
}
