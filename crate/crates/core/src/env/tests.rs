use super::*;
use crate::character::{builtin_character, Builtin};
use crate::physics2d::{forward_kinematics, SimState, Vec2};
use crate::rng::SimRng;

fn random_action(env: &Env, rng: &mut SimRng) -> Vec<f64> {
    let s = env.action_space();
    s.minimum.iter().zip(&s.maximum).map(|(lo, hi)| rng.uniform(*lo, *hi)).collect()
}

fn config(name: &str) -> EnvConfig {
    find_env(name).unwrap().config
}

#[test]
fn catalog_shape() {
    let all = list_envs();
    assert!(all.len() >= 89);
    assert_eq!(all.len(), 140);
    let mut names: Vec<_> = all.iter().map(|e| e.name.as_str()).collect();
    assert!(names.contains(&"PD_Biped2D_Walk-Mixed-v0"));
    names.sort();
    names.dedup();
    assert_eq!(names.len(), all.len());
    for e in &all {
        let links = builtin_character(e.config.character.parse::<Builtin>().unwrap()).num_links();
        assert_eq!(e.obs_dim, TERRAIN_SAMPLES + 1 + 4 * links);
    }
}

#[test]
fn spaces_match_catalog() {
    for name in ["PD_Biped2D_Walk-Mixed-v0", "Muscle_Dog2D_Imitate-Steps-v0", "Torque_Hopper2D_Walk-Gaps-v0"] {
        let e = find_env(name).unwrap();
        let env = make_env(name).unwrap();
        assert_eq!(env.obs_dim(), e.obs_dim);
        assert_eq!(env.act_dim(), e.act_dim);
        let (lo, hi) = env.observation_space();
        assert_eq!(lo.len(), env.obs_dim());
        assert!(hi[..TERRAIN_SAMPLES].iter().all(|&x| x == 5.0));
    }
}

#[test]
fn unknown_name_lists_nearest() {
    match make_env("PD_Biped2D_Walk-Mixd-v0") {
        Err(EnvError::UnknownEnv { nearest, .. }) => {
            assert_eq!(nearest[0], "PD_Biped2D_Walk-Mixed-v0");
            assert_eq!(nearest.len(), 3);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn control_rate_validation() {
    let mut c = config("PD_Biped2D_Walk-Flat-v0");
    c.control_hz = 25;
    assert_eq!(c.substeps(), 120);
    assert!(Env::new(c.clone()).is_ok());
    c.control_hz = 7;
    assert!(matches!(Env::new(c.clone()), Err(EnvError::InvalidConfig { field, .. }) if field == "control_hz"));
    c.control_hz = 30;
    c.max_episode_steps = 0;
    assert!(matches!(Env::new(c), Err(EnvError::InvalidConfig { field, .. }) if field == "max_episode_steps"));
}

#[test]
fn config_json_round_trip_and_inline_terrain() {
    let c = config("Velocity_Raptor2D_Imitate-Flat-v0");
    let back = EnvConfig::from_json(&c.to_json()).unwrap();
    assert_eq!(back, c);
    let text = r#"{
        "name": "custom", "character": "biped7", "actuation": "Torque",
        "terrain": {"Type": "var2d_gaps", "Params": [{
            "GapSpacingMin": 1.0, "GapSpacingMax": 2.0, "GapWMin": 0.2, "GapWMax": 0.3,
            "GapHMin": -1.0, "GapHMax": -1.0}]},
        "task": {"type": "locomotion"}, "jitter": false
    }"#;
    let mut env = Env::new(EnvConfig::from_json(text).unwrap()).unwrap();
    env.reset();
    assert!(env.terrain().features().iter().any(|f| f.kind == crate::terrain::FeatureKind::Gap));
    let bad = text.replace("\"Torque\"", "\"Psychic\"");
    assert!(EnvConfig::from_json(&bad).is_err());
}

#[test]
fn seeding_contract() {
    let mut env = make_env("PD_Biped2D_Walk-Mixed-v0").unwrap();
    env.set_random_seed(1234);
    let a = env.reset();
    env.set_random_seed(1234);
    let b = env.reset();
    assert_eq!(a, b);

    for pair in 0..10u64 {
        env.set_random_seed(2 * pair);
        env.reset();
        let va = env.terrain().vertices().to_vec();
        env.set_random_seed(2 * pair + 1);
        env.reset();
        assert_ne!(va, env.terrain().vertices());
    }

    // reseeding mid-episode leaves the running episode alone
    env.set_random_seed(7);
    env.reset();
    let zero = vec![0.0; env.act_dim()];
    let mut twin = env.clone();
    twin.set_random_seed(99);
    let r1 = env.step(&zero).unwrap();
    let r2 = twin.step(&zero).unwrap();
    assert_eq!(r1, r2);
    env.set_random_seed(99);
    assert_eq!(env.reset(), twin.reset());
}

#[test]
fn flat_spawn_without_jitter() {
    let mut c = config("PD_Biped2D_Walk-Flat-v0");
    c.jitter = false;
    let mut env = Env::new(c).unwrap();
    let obs = env.reset();
    let spawn = env.model().spawn_root_height;
    assert_eq!(obs.agent()[0], spawn);
    let t0 = obs.terrain()[0];
    assert!(obs.terrain().iter().all(|&x| x == t0));
    assert_eq!(t0, -spawn);
}

#[test]
fn one_step_is_one_control_period() {
    let mut env = make_env("Torque_Biped2D_Walk-Flat-v0").unwrap();
    env.reset();
    let r = env.step(&vec![0.0; env.act_dim()]).unwrap();
    assert!((r.info["time"] - 1.0 / 30.0).abs() < 1e-12);
}

#[test]
fn passive_biped_falls() {
    let mut env = make_env("Torque_Biped2D_Walk-Flat-v0").unwrap();
    env.reset();
    let zero = vec![0.0; env.act_dim()];
    let mut fell_at = None;
    for k in 0..100 {
        if env.step(&zero).unwrap().done {
            fell_at = Some(k);
            break;
        }
    }
    assert!(fell_at.is_some());
    assert!(matches!(env.step(&zero), Err(EnvError::EpisodeDone)));
}

#[test]
fn out_of_bounds_action_equals_clamped() {
    let mut a = make_env("Velocity_Dog2D_Walk-Slopes-v0").unwrap();
    a.reset();
    let mut b = a.clone();
    let big: Vec<f64> = (0..a.act_dim()).map(|i| if i % 2 == 0 { 1e3 } else { -1e3 }).collect();
    let mut clamped = big.clone();
    a.action_space().clamp(&mut clamped);
    assert_eq!(a.step(&big).unwrap(), b.step(&clamped).unwrap());
}

#[test]
fn step_errors() {
    let mut env = make_env("PD_Hopper2D_Walk-Flat-v0").unwrap();
    assert!(matches!(env.step(&[0.0; 3]), Err(EnvError::NotReset)));
    env.reset();
    assert!(matches!(env.step(&[0.0; 2]), Err(EnvError::DimensionMismatch { expected: 3, got: 2 })));
    assert!(matches!(env.step(&[0.0, f64::NAN, 0.0]), Err(EnvError::NonFiniteAction)));
}

#[test]
fn locomotion_reward_values() {
    assert_eq!(speed_reward(1.3, 1.3), 1.0);
    assert!((speed_reward(0.0, 1.0) - (-2.0f64).exp()).abs() < 1e-12);
    let mut prev = 1.0;
    for k in 1..50 {
        let r = speed_reward(1.0 + 0.1 * k as f64, 1.0);
        assert!(r < prev);
        prev = r;
    }
}

#[test]
fn reference_sampling() {
    let clip = ReferenceClip::builtin("biped7_gait").unwrap();
    let k = &clip.keyframes;
    let r0 = sample_reference(&clip, 0.0);
    assert_eq!(r0.joint_angles, k[0].joint_angles);
    assert_eq!(sample_reference(&clip, clip.duration), r0);
    let t = 0.5 * (k[3].phase + k[4].phase) * clip.duration;
    let mid = sample_reference(&clip, t);
    for ((m, a), b) in mid.joint_angles.iter().zip(&k[3].joint_angles).zip(&k[4].joint_angles) {
        assert!((m - 0.5 * (a + b)).abs() < 1e-12);
    }
    // last keyframe wraps to the first
    let t = 0.5 * (k[k.len() - 1].phase + 1.0) * clip.duration;
    let wrap = sample_reference(&clip, t);
    let expect = 0.5 * (k[k.len() - 1].root_height + k[0].root_height);
    assert!((wrap.root_height - expect).abs() < 1e-12);
}

fn matching_state(model: &crate::character::CharacterModel, r: &Reference, ground: f64) -> SimState {
    let mut s = SimState::new(forward_kinematics(
        &model.mechanism,
        Vec2::new(0.0, ground + r.root_height),
        0.0,
        &r.joint_angles,
    ));
    s.bodies[model.root_link].linear_velocity.x = r.root_speed;
    s
}

#[test]
fn imitation_reward_values() {
    let model = builtin_character(Builtin::Biped7);
    let clip = ReferenceClip::builtin("biped7_gait").unwrap();
    let w = ImitationWeights::default();
    let r = sample_reference(&clip, 0.37);
    let s = matching_state(&model, &r, 0.4);
    assert_eq!(imitation_reward(&model, &s, 0.4, &r, &w).total, 1.0);

    let mut off = r.clone();
    off.joint_angles[2] += 1.0;
    let t = imitation_reward(&model, &s, 0.4, &off, &w);
    assert!((t.pose - (-2.0f64).exp()).abs() < 1e-12);
    let only_pose = ImitationWeights { pose: 1.0, velocity: 0.0, root: 0.0 };
    assert!((imitation_reward(&model, &s, 0.4, &off, &only_pose).total - (-2.0f64).exp()).abs() < 1e-12);
}

#[test]
fn layout_independence() {
    let mut env = make_env("PD_Biped2D_Walk-SlopesMixed-v0").unwrap();
    env.set_random_seed(3);
    let obs = env.reset();
    let model = env.model().clone();
    let root = env.state().bodies[model.root_link];
    let mut rng = SimRng::new(11);
    let angles: Vec<f64> = model.joints().iter().map(|j| rng.uniform(j.angle_limits[0], j.angle_limits[1])).collect();
    env.set_state(SimState::new(forward_kinematics(&model.mechanism, root.position, root.angle, &angles)));
    let posed = env.observe();
    assert_eq!(posed.terrain(), obs.terrain());
    assert_ne!(posed.agent(), obs.agent());

    env.regenerate_terrain(987654);
    let reseeded = env.observe();
    assert_eq!(reseeded.agent(), posed.agent());
    assert_eq!(
        reseeded.agent(),
        crate::character::agent_features(&model, env.state()).as_slice()
    );
}

#[test]
fn random_rollout_stays_in_bounds() {
    for name in ["PD_Biped2D_Walk-Mixed-v0", "Torque_Raptor2D_Walk-Gaps-v0"] {
        let mut env = make_env(name).unwrap();
        env.set_random_seed(5);
        let (lo, hi) = env.observation_space();
        let mut rng = SimRng::new(6);
        let mut obs = env.reset();
        let mut len = 0;
        for _ in 0..300 {
            for (i, x) in obs.data.iter().enumerate() {
                assert!(lo[i] <= *x && *x <= hi[i], "{name} dim {i} = {x}");
            }
            let r = env.step(&random_action(&env, &mut rng)).unwrap();
            assert!((0.0..=1.0).contains(&r.reward));
            len += 1;
            assert!(len <= env.config().max_episode_steps);
            obs = if r.done {
                len = 0;
                env.reset()
            } else {
                r.observation
            };
        }
    }
}

#[test]
fn far_up_an_incline_stays_in_bounds() {
    let mut env = make_env("PD_Biped2D_Walk-Incline-v0").unwrap();
    env.set_random_seed(2);
    env.reset();
    let model = env.model().clone();
    let x = 140.0;
    let ground = env.terrain().height_at(x);
    assert!(ground > 10.0, "incline only reached {ground}");
    env.set_state(SimState::new(forward_kinematics(
        &model.mechanism,
        Vec2::new(x, ground + model.spawn_root_height),
        0.0,
        &model.stance,
    )));
    let (lo, hi) = env.observation_space();
    for (i, v) in env.observe().data.iter().enumerate() {
        assert!(lo[i] <= *v && *v <= hi[i], "dim {i} = {v} outside [{}, {}]", lo[i], hi[i]);
    }
}
