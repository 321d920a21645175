use std::fs;
use std::io::BufReader;
use std::path::Path;

use super::svg::frame_svg;
use super::trajectory::read_trajectory;
use super::CliError;
use crate::env::make_env;

/// Replays a trajectory, checking every record against the live env, and
/// writes `frame_NNNNN.svg` for every `every`-th record (state before its action).
/// Returns the number of frames written.
pub fn cmd_render(traj: &Path, env_name: &str, out_dir: &Path, every: u64) -> Result<usize, CliError> {
    if every == 0 {
        return Err(CliError::Input("--every must be positive".into()));
    }
    let file = fs::File::open(traj).map_err(|e| CliError::Io(format!("{}: {e}", traj.display())))?;
    let (header, records) = read_trajectory(BufReader::new(file))?;
    if header.env != env_name {
        return Err(CliError::Input(format!(
            "trajectory was recorded on {:?}, not {env_name:?}",
            header.env
        )));
    }
    let mut env = make_env(env_name).map_err(|e| CliError::Input(e.to_string()))?;
    env.set_random_seed(header.seed);
    fs::create_dir_all(out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;

    let mismatch = |i: usize, what: &str| CliError::Input(format!("record {i}: {what} differs from replay"));
    let mut frames = 0;
    for (i, rec) in records.iter().enumerate() {
        let obs = if rec.step == 0 { env.reset() } else { env.observe() };
        if obs.data != rec.observation {
            return Err(mismatch(i, "observation"));
        }
        if (i as u64).is_multiple_of(every) {
            let label = format!("{env_name} seed {} episode {} step {}", header.seed, rec.episode, rec.step);
            let svg = frame_svg(env.model(), env.state(), env.terrain(), &label);
            let path = out_dir.join(format!("frame_{i:05}.svg"));
            fs::write(&path, svg).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            frames += 1;
        }
        let r = env.step(&rec.action).map_err(|e| CliError::Input(format!("record {i}: {e}")))?;
        if r.reward.to_bits() != rec.reward.to_bits() {
            return Err(mismatch(i, "reward"));
        }
        if r.done != rec.done {
            return Err(mismatch(i, "done flag"));
        }
    }
    Ok(frames)
}
