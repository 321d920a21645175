use std::fs;
use std::path::Path;

use terra::cli::{cmd_list, cmd_validate, main_with_args, read_trajectory, Scope, EXIT_INPUT, EXIT_IO, EXIT_OK, EXIT_VALIDATION};

const BIPED_FLAT: &str = "PD_Biped2D_Walk-Flat-v0";

fn terra(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("terra").chain(args.iter().copied()))
}

fn rollout(env: &str, seed: u64, steps: u64, policy: &str, out: &Path) -> i32 {
    terra(&[
        "rollout", "--env", env, "--seed", &seed.to_string(), "--steps", &steps.to_string(),
        "--policy", policy, "--out", out.to_str().unwrap(),
    ])
}

#[test]
fn list_filters() {
    let mut all = Vec::new();
    assert!(cmd_list(None, false, &mut all).unwrap() >= 89);
    let mut dogs = Vec::new();
    let n = cmd_list(Some("Dog"), false, &mut dogs).unwrap();
    let text = String::from_utf8(dogs).unwrap();
    assert!(n > 0);
    assert_eq!(text.lines().count(), n);
    assert!(text.lines().all(|l| l.split_whitespace().next().unwrap().contains("Dog2D")));
    let mut none = Vec::new();
    assert_eq!(cmd_list(Some("Octopus"), false, &mut none).unwrap(), 0);
    assert!(none.is_empty());
    assert_eq!(terra(&["list", "Octopus"]), EXIT_OK);

    let mut json = Vec::new();
    let n = cmd_list(Some("Hopper"), true, &mut json).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
    assert_eq!(v.as_array().unwrap().len(), n);
}

#[test]
fn rollout_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    assert_eq!(rollout("Torque_Raptor2D_Walk-Steps-v0", 9, 120, "random", &a), EXIT_OK);
    assert_eq!(rollout("Torque_Raptor2D_Walk-Steps-v0", 9, 120, "random", &b), EXIT_OK);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let c = dir.path().join("c.jsonl");
    assert_eq!(rollout("Torque_Raptor2D_Walk-Steps-v0", 10, 120, "random", &c), EXIT_OK);
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn rollout_records_are_contiguous() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.jsonl");
    assert_eq!(rollout(BIPED_FLAT, 1, 400, "zero", &path), EXIT_OK);
    let (header, records) = read_trajectory(fs::read(&path).unwrap().as_slice()).unwrap();
    assert_eq!((header.env.as_str(), header.seed, header.steps), (BIPED_FLAT, 1, 400));
    assert_eq!(records.len(), 400);
    // a passive biped falls, so at least one episode ends
    assert!(records.iter().any(|r| r.done));
    for w in records.windows(2) {
        if w[0].done {
            assert_eq!((w[1].episode, w[1].step), (w[0].episode + 1, 0));
        } else {
            assert_eq!((w[1].episode, w[1].step), (w[0].episode, w[0].step + 1));
        }
    }

    let empty = dir.path().join("empty.jsonl");
    assert_eq!(rollout(BIPED_FLAT, 1, 0, "random", &empty), EXIT_OK);
    assert_eq!(fs::read_to_string(&empty).unwrap().lines().count(), 1);
}

#[test]
fn rollout_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(rollout("Torque_Biped2D_Walk-Moon-v0", 0, 5, "random", &dir.path().join("x")), EXIT_INPUT);
    assert_eq!(rollout(BIPED_FLAT, 0, 5, "random", &dir.path().join("missing/dir/x.jsonl")), EXIT_IO);
    assert_eq!(terra(&["rollout", "--env", BIPED_FLAT]), EXIT_INPUT);
    assert_eq!(terra(&["frobnicate"]), EXIT_INPUT);
}

#[test]
fn terrain_csv() {
    let dir = tempfile::tempdir().unwrap();
    let flat = dir.path().join("flat.csv");
    assert_eq!(terra(&["terrain", "--params", "flat", "--out", flat.to_str().unwrap()]), EXIT_OK);
    let text = fs::read_to_string(&flat).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("vertex,")).count(), 2);

    let (a, b, svg) = (dir.path().join("a.csv"), dir.path().join("b.csv"), dir.path().join("a.svg"));
    for out in [&a, &b] {
        let code = terra(&[
            "terrain", "--params", "slopes-mixed", "--seed", "77", "--out", out.to_str().unwrap(),
            "--svg", svg.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(fs::read_to_string(&svg).unwrap().contains("<polyline"));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"Type": "gaps", "Params": [{"GapWMin": 0.5, "GapWMax": 0.3}]}"#).unwrap();
    let code = terra(&["terrain", "--params", bad.to_str().unwrap(), "--out", a.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn validate_reports_corrupted_preset() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/assets/terrain/slopes-mixed.json")).unwrap();
    let corrupted = text.replace("\"WallHMin\": 0.25", "\"WallHMin\": 0.9");
    assert_ne!(text, corrupted);
    let path = dir.path().join("slopes-mixed.json");
    fs::write(&path, corrupted).unwrap();
    let p = path.to_str().unwrap();

    let mut out = Vec::new();
    assert!(!cmd_validate(&Scope::parse(p), &mut out).unwrap());
    let report = String::from_utf8(out).unwrap();
    assert!(report.contains("WallH"), "{report}");
    assert_eq!(terra(&["validate", p]), EXIT_VALIDATION);
}

#[test]
fn validate_single_env_and_good_file() {
    let mut out = Vec::new();
    assert!(cmd_validate(&Scope::Env(BIPED_FLAT.into()), &mut out).unwrap());
    let lines: Vec<serde_json::Value> =
        String::from_utf8(out).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(lines.len() >= 4);
    assert!(lines.iter().all(|l| l["ok"] == true));
    let good = concat!(env!("CARGO_MANIFEST_DIR"), "/assets/terrain/slopes-mixed.json");
    assert_eq!(terra(&["validate", good]), EXIT_OK);
    assert_eq!(terra(&["validate", "Torque_Biped2D_Walk-Moon-v0"]), EXIT_INPUT);
}

#[test]
fn render_frames() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("t.jsonl");
    let env = "Torque_Biped2D_Walk-Mixed-v0";
    assert_eq!(rollout(env, 3, 100, "random", &traj), EXIT_OK);
    let t = traj.to_str().unwrap();
    let render = |out: &Path| terra(&["render", "--traj", t, "--env", env, "--out-dir", out.to_str().unwrap(), "--every", "10"]);

    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(render(&a), EXIT_OK);
    assert_eq!(render(&b), EXIT_OK);
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 10);
    for n in &names {
        assert_eq!(fs::read(a.join(n)).unwrap(), fs::read(b.join(n)).unwrap());
    }
    let first = fs::read_to_string(a.join("frame_00000.svg")).unwrap();
    assert!(first.contains("step 0"));

    let other = terra(&["render", "--traj", t, "--env", BIPED_FLAT, "--out-dir", a.to_str().unwrap()]);
    assert_eq!(other, EXIT_INPUT);

    // a tampered reward no longer replays
    let text = fs::read_to_string(&traj).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut rec: serde_json::Value = serde_json::from_str(&lines[5]).unwrap();
    rec["reward"] = serde_json::json!(rec["reward"].as_f64().unwrap() + 1e-9);
    lines[5] = rec.to_string();
    fs::write(&traj, lines.join("\n")).unwrap();
    assert_eq!(render(&dir.path().join("c")), EXIT_INPUT);
}
