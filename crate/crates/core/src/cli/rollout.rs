use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use super::trajectory::{build_version, write_line, TrajectoryHeader, TrajectoryRecord, TRAJECTORY_FORMAT, TRAJECTORY_VERSION};
use super::CliError;
use crate::character::ActuationMode;
use crate::env::{make_env, Env};
use crate::rng::SimRng;

/// Offset between the env seed and the random policy's seed.
const POLICY_SEED_XOR: u64 = 0x5_EED0_FA11_C0DE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Policy {
    /// Uniform in the action space.
    Random,
    /// Neutral action: zeros, or the current pose under PD.
    Zero,
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Policy::Random => "random",
            Policy::Zero => "zero",
        })
    }
}

impl FromStr for Policy {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(Policy::Random),
            "zero" => Ok(Policy::Zero),
            _ => Err(CliError::Input(format!("unknown policy {s:?}"))),
        }
    }
}

/// Action source for rollouts, deterministic given its seed.
#[derive(Debug, Clone)]
pub struct PolicyDriver {
    policy: Policy,
    rng: SimRng,
}

impl PolicyDriver {
    pub fn new(policy: Policy, seed: u64) -> Self {
        Self {
            policy,
            rng: SimRng::new(seed ^ POLICY_SEED_XOR),
        }
    }

    pub fn act(&mut self, env: &Env) -> Vec<f64> {
        let space = env.action_space();
        match self.policy {
            Policy::Random => space
                .minimum
                .iter()
                .zip(&space.maximum)
                .map(|(lo, hi)| self.rng.uniform(*lo, *hi))
                .collect(),
            Policy::Zero => match env.actuation() {
                ActuationMode::PositionPD => env.model().joint_angles(env.state()),
                _ => vec![0.0; space.dim()],
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RolloutSummary {
    pub steps: u64,
    pub episodes: u64,
    pub total_reward: f64,
    pub steps_per_second: f64,
}

/// Runs `steps` control steps (resetting after every finished episode) and
/// streams the trajectory to `out`.
pub fn run_rollout(
    env_name: &str,
    seed: u64,
    steps: u64,
    policy: Policy,
    out: &mut impl Write,
) -> Result<RolloutSummary, CliError> {
    let mut env = make_env(env_name).map_err(|e| CliError::Input(e.to_string()))?;
    let header = TrajectoryHeader {
        format: TRAJECTORY_FORMAT.into(),
        version: TRAJECTORY_VERSION,
        env: env_name.into(),
        seed,
        policy: policy.to_string(),
        steps,
        build: build_version(),
    };
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    write_line(out, &header).map_err(io)?;
    env.set_random_seed(seed);
    let mut driver = PolicyDriver::new(policy, seed);
    let start = Instant::now();
    let mut total_reward = 0.0;
    let mut episodes = 0;
    let mut episode_step = 0;
    let mut obs = None;
    for _ in 0..steps {
        let observation = match obs.take() {
            Some(o) => o,
            None => {
                episodes += 1;
                episode_step = 0;
                env.reset().data
            }
        };
        let action = driver.act(&env);
        let r = env.step(&action).map_err(|e| CliError::Input(e.to_string()))?;
        total_reward += r.reward;
        let done = r.done;
        write_line(
            out,
            &TrajectoryRecord {
                episode: episodes - 1,
                step: episode_step,
                observation,
                action,
                reward: r.reward,
                done,
                info: r.info,
            },
        )
        .map_err(io)?;
        episode_step += 1;
        if !done {
            obs = Some(r.observation.data);
        }
    }
    out.flush().map_err(io)?;
    let secs = start.elapsed().as_secs_f64();
    Ok(RolloutSummary {
        steps,
        episodes,
        total_reward,
        steps_per_second: if secs > 0.0 { steps as f64 / secs } else { 0.0 },
    })
}
