use std::collections::BTreeMap;

use super::clip::sample_reference;
use super::config::{EnvConfig, Task};
use super::reward::{imitation_reward, locomotion_reward};
use super::EnvError;
use crate::character::{
    action_space, agent_features_into, compute_torques_into, feature_dim, ActionSpace,
    ActuationMode, CharacterModel, MuscleUnit,
};
use crate::physics2d::{
    forward_kinematics, ContactEvent, PhysicsConfig, SimState, StepWorkspace, Vec2,
};
use crate::rng::SimRng;
use crate::terrain::{
    generate_terrain, sample_terrain_window_into, TerrainParams, TerrainProfile, WINDOW_CLAMP,
};

/// Terrain samples in the observation.
pub const TERRAIN_SAMPLES: usize = 50;
/// Horizontal distance between terrain samples, m.
pub const TERRAIN_SPACING: f64 = 0.1;
pub const TERRAIN_X_START: f64 = -10.0;
pub const TERRAIN_X_END: f64 = 150.0;
pub const SPAWN_X: f64 = -2.0;
pub const JITTER: f64 = 0.05;
/// Falling below this fraction of the spawn height ends the episode.
pub const FALL_HEIGHT_FRACTION: f64 = 0.3;

/// Root height above the ground, before widening by the terrain's reach.
pub const ROOT_HEIGHT_BOUNDS: [f64; 2] = [0.0, 10.0];
/// Slack below the lowest ground for a root pressed into the surface.
pub const ROOT_SINK: f64 = 0.5;
pub const REL_POSITION_BOUND: f64 = 5.0;
pub const VELOCITY_BOUND: f64 = 50.0;

/// `data[..terrain_len]` is the terrain window, the rest the agent features.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub data: Vec<f64>,
    pub terrain_len: usize,
}

impl Observation {
    pub fn terrain(&self) -> &[f64] {
        &self.data[..self.terrain_len]
    }

    pub fn agent(&self) -> &[f64] {
        &self.data[self.terrain_len..]
    }
}

pub type Info = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub observation: Observation,
    pub reward: f64,
    pub done: bool,
    pub info: Info,
}

/// One seeded episodic environment.
#[derive(Debug, Clone)]
pub struct Env {
    config: EnvConfig,
    model: CharacterModel,
    params: TerrainParams,
    task: Task,
    physics: PhysicsConfig,
    dt: f64,
    substeps: u32,
    action_space: ActionSpace,
    rng: SimRng,
    terrain: TerrainProfile,
    state: SimState,
    muscles: Vec<MuscleUnit>,
    workspace: StepWorkspace,
    events: Vec<ContactEvent>,
    torques: Vec<f64>,
    action: Vec<f64>,
    steps: u32,
    started: bool,
    done: bool,
}

impl Env {
    /// Builds an environment seeded with 0; call [`Env::reset`] before stepping.
    pub fn new(config: EnvConfig) -> Result<Self, EnvError> {
        config.validate()?;
        let model = config.load_character()?;
        let params = config.load_terrain()?;
        let task = config.load_task(&model)?;
        let dt = 1.0 / config.sim_hz as f64;
        let substeps = config.substeps();
        let action_space = action_space(&model, config.actuation);
        let muscles = MuscleUnit::for_model(&model);
        let state = SimState::new(forward_kinematics(
            &model.mechanism,
            Vec2::new(SPAWN_X, model.spawn_root_height),
            0.0,
            &model.stance,
        ));
        Ok(Self {
            torques: vec![0.0; model.num_joints()],
            action: vec![0.0; action_space.dim()],
            config,
            model,
            terrain: TerrainProfile::flat(TERRAIN_X_START, TERRAIN_X_END, 0.0),
            params,
            task,
            physics: PhysicsConfig::default(),
            dt,
            substeps,
            action_space,
            rng: SimRng::new(0),
            state,
            muscles,
            workspace: StepWorkspace::default(),
            events: Vec::new(),
            steps: 0,
            started: false,
            done: false,
        })
    }

    pub fn config(&self) -> &EnvConfig {
        &self.config
    }

    pub fn name(&self) -> &str {
        &self.config.name
    }

    pub fn model(&self) -> &CharacterModel {
        &self.model
    }

    pub fn task(&self) -> &Task {
        &self.task
    }

    pub fn terrain(&self) -> &TerrainProfile {
        &self.terrain
    }

    pub fn state(&self) -> &SimState {
        &self.state
    }

    pub fn actuation(&self) -> ActuationMode {
        self.config.actuation
    }

    pub fn elapsed_steps(&self) -> u32 {
        self.steps
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn control_dt(&self) -> f64 {
        self.dt * self.substeps as f64
    }

    pub fn terrain_len(&self) -> usize {
        TERRAIN_SAMPLES
    }

    pub fn obs_dim(&self) -> usize {
        TERRAIN_SAMPLES + feature_dim(&self.model)
    }

    pub fn act_dim(&self) -> usize {
        self.action_space.dim()
    }

    pub fn action_space(&self) -> &ActionSpace {
        &self.action_space
    }

    /// Per-dimension observation bounds `(minimum, maximum)`.
    ///
    /// The root-height entry is the root's world height, so its range follows
    /// from how far this env's terrain parameters can move the ground.
    pub fn observation_space(&self) -> (Vec<f64>, Vec<f64>) {
        let ground = self.params.height_range(TERRAIN_X_START, TERRAIN_X_END);
        let root = [ground.min + ROOT_HEIGHT_BOUNDS[0] - ROOT_SINK, ground.max + ROOT_HEIGHT_BOUNDS[1]];
        observation_bounds(self.model.num_links(), root)
    }

    /// Reseeds the generator; takes effect at the next reset.
    pub fn set_random_seed(&mut self, seed: u64) {
        self.rng = SimRng::new(seed);
    }

    /// Starts a new episode.
    ///
    /// Draw order: one `u64` terrain seed, then one jitter value per joint
    /// in joint order (only when jitter is enabled).
    pub fn reset(&mut self) -> Observation {
        let terrain_seed = self.rng.next_u64();
        self.terrain = generate_terrain(&self.params, terrain_seed, TERRAIN_X_START, TERRAIN_X_END);
        let mut pose = match &self.task {
            Task::Locomotion { .. } => self.model.stance.clone(),
            Task::Imitation { clip, .. } => clip.keyframes[0].joint_angles.clone(),
        };
        if self.config.jitter {
            for (q, j) in pose.iter_mut().zip(self.model.joints()) {
                *q = j.clamp_angle(*q + self.rng.uniform(-JITTER, JITTER));
            }
        }
        let ground = self.terrain.height_at(SPAWN_X);
        let root = Vec2::new(SPAWN_X, ground + self.model.spawn_root_height);
        let mut state = SimState::new(forward_kinematics(&self.model.mechanism, root, 0.0, &pose));
        let lift = self.penetration(&state);
        if lift > 0.0 {
            state.translate(Vec2::new(0.0, lift));
        }
        self.state = state;
        for m in &mut self.muscles {
            m.reset();
        }
        self.steps = 0;
        self.started = true;
        self.done = false;
        self.observe()
    }

    /// Deepest contact point below the terrain surface (0 when clear).
    fn penetration(&self, state: &SimState) -> f64 {
        let mut worst: f64 = 0.0;
        for (link, body) in self.model.links().iter().zip(&state.bodies) {
            for p in &link.contact_points {
                let w = body.world_point(*p);
                worst = worst.max(self.terrain.height_at(w.x) - w.y);
            }
        }
        worst
    }

    pub fn observe(&self) -> Observation {
        let mut data = vec![0.0; self.obs_dim()];
        self.observe_into(&mut data);
        Observation {
            data,
            terrain_len: TERRAIN_SAMPLES,
        }
    }

    /// Writes the current observation into a buffer of length [`Env::obs_dim`].
    pub fn observe_into(&self, out: &mut [f64]) {
        let root = self.state.bodies[self.model.root_link].position;
        let (terrain, agent) = out.split_at_mut(TERRAIN_SAMPLES);
        sample_terrain_window_into(&self.terrain, root.x, root.y, TERRAIN_SPACING, terrain);
        agent_features_into(&self.model, &self.state, agent);
    }

    /// Ground height under the root.
    pub fn ground_under_root(&self) -> f64 {
        self.terrain.height_at(self.state.bodies[self.model.root_link].position.x)
    }

    /// Applies one control action for `sim_hz / control_hz` substeps.
    pub fn step(&mut self, action: &[f64]) -> Result<StepResult, EnvError> {
        if !self.started {
            return Err(EnvError::NotReset);
        }
        if self.done {
            return Err(EnvError::EpisodeDone);
        }
        if action.len() != self.action_space.dim() {
            return Err(EnvError::DimensionMismatch {
                expected: self.action_space.dim(),
                got: action.len(),
            });
        }
        if action.iter().any(|a| !a.is_finite()) {
            return Err(EnvError::NonFiniteAction);
        }
        self.action.copy_from_slice(action);
        self.action_space.clamp(&mut self.action);

        let snapshot = self.state.clone();
        let mut fall_contact = false;
        let mut foot_contact = false;
        let mut diverged = false;
        for _ in 0..self.substeps {
            compute_torques_into(
                &self.model,
                self.config.actuation,
                &self.action,
                &self.state,
                &mut self.muscles,
                self.dt,
                &mut self.torques,
            )?;
            self.events.clear();
            let stepped = self.workspace.step(
                &self.model.mechanism,
                &mut self.state,
                &self.torques,
                Some(&self.terrain),
                self.dt,
                &self.physics,
                &mut self.events,
            );
            if stepped.is_err() || self.state.diverged {
                diverged = true;
                break;
            }
            for e in &self.events {
                if self.model.is_fall_link(e.link) {
                    fall_contact = true;
                } else if self.model.foot_links.binary_search(&e.link).is_ok() {
                    foot_contact = true;
                }
            }
        }
        if diverged {
            // report the last finite state
            self.state = snapshot;
            self.state.diverged = true;
        }
        self.steps += 1;

        let root = self.state.bodies[self.model.root_link];
        let ground = self.ground_under_root();
        let height = root.position.y - ground;
        let mut info = Info::new();
        let reward = if diverged {
            0.0
        } else {
            match &self.task {
                Task::Locomotion { target_speed } => {
                    let r = locomotion_reward(&self.model, &self.state, *target_speed);
                    info.insert("reward_speed".into(), r);
                    r
                }
                Task::Imitation { clip, weights } => {
                    let t = self.steps as f64 * self.control_dt();
                    let reference = sample_reference(clip, t);
                    let terms = imitation_reward(&self.model, &self.state, ground, &reference, weights);
                    info.insert("reward_pose".into(), terms.pose);
                    info.insert("reward_velocity".into(), terms.velocity);
                    info.insert("reward_root".into(), terms.root);
                    terms.total
                }
            }
        };
        let fell = fall_contact || height < FALL_HEIGHT_FRACTION * self.model.spawn_root_height;
        let timeout = self.steps >= self.config.max_episode_steps;
        self.done = fell || diverged || timeout;

        let flag = |b: bool| if b { 1.0 } else { 0.0 };
        info.insert("root_x".into(), root.position.x);
        info.insert("root_y".into(), root.position.y);
        info.insert("root_height".into(), height);
        info.insert("root_vx".into(), root.linear_velocity.x);
        info.insert("fall_contact".into(), flag(fall_contact));
        info.insert("foot_contact".into(), flag(foot_contact));
        info.insert("fell".into(), flag(fell));
        info.insert("diverged".into(), flag(diverged));
        info.insert("timeout".into(), flag(timeout));
        info.insert("time".into(), self.state.time);

        Ok(StepResult {
            observation: self.observe(),
            reward,
            done: self.done,
            info,
        })
    }

    /// Replaces the character state (tests and tooling). Clears warm-start data.
    pub fn set_state(&mut self, mut state: SimState) {
        state.clear_cache();
        self.state = state;
    }

    /// Regenerates the terrain from an explicit seed without touching the character.
    pub fn regenerate_terrain(&mut self, seed: u64) {
        self.terrain = generate_terrain(&self.params, seed, TERRAIN_X_START, TERRAIN_X_END);
    }
}

/// Observation bounds for a character with `links` links whose root-height
/// entry ranges over `root_height`.
pub fn observation_bounds(links: usize, root_height: [f64; 2]) -> (Vec<f64>, Vec<f64>) {
    let mut lo = vec![-WINDOW_CLAMP; TERRAIN_SAMPLES];
    let mut hi = vec![WINDOW_CLAMP; TERRAIN_SAMPLES];
    lo.push(root_height[0]);
    hi.push(root_height[1]);
    for _ in 0..links {
        lo.extend([-REL_POSITION_BOUND, -REL_POSITION_BOUND, -VELOCITY_BOUND, -VELOCITY_BOUND]);
        hi.extend([REL_POSITION_BOUND, REL_POSITION_BOUND, VELOCITY_BOUND, VELOCITY_BOUND]);
    }
    (lo, hi)
}
