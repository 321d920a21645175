use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::env::Info;

pub const TRAJECTORY_FORMAT: &str = "terra-trajectory";
pub const TRAJECTORY_VERSION: u32 = 1;

/// First line of a trajectory file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryHeader {
    pub format: String,
    pub version: u32,
    pub env: String,
    pub seed: u64,
    pub policy: String,
    pub steps: u64,
    pub build: String,
}

/// One control step: the observation the action was chosen from, the action
/// and what the env returned. `step` restarts at 0 for every episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryRecord {
    pub episode: u64,
    pub step: u64,
    pub observation: Vec<f64>,
    pub action: Vec<f64>,
    pub reward: f64,
    pub done: bool,
    pub info: Info,
}

pub fn build_version() -> String {
    format!("terra {}", crate::VERSION)
}

pub fn write_line<T: Serialize>(out: &mut impl Write, value: &T) -> std::io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")
}

pub fn read_trajectory(
    input: impl BufRead,
) -> Result<(TrajectoryHeader, Vec<TrajectoryRecord>), CliError> {
    let mut lines = input.lines();
    let first = lines
        .next()
        .ok_or_else(|| CliError::Input("trajectory file is empty".into()))?
        .map_err(|e| CliError::Io(e.to_string()))?;
    let header: TrajectoryHeader = serde_json::from_str(&first)
        .map_err(|e| CliError::Input(format!("bad trajectory header: {e}")))?;
    if header.format != TRAJECTORY_FORMAT || header.version != TRAJECTORY_VERSION {
        return Err(CliError::Input(format!(
            "unsupported trajectory format {:?} version {}",
            header.format, header.version
        )));
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| CliError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let r: TrajectoryRecord = serde_json::from_str(&line)
            .map_err(|e| CliError::Input(format!("bad trajectory record on line {}: {e}", i + 2)))?;
        records.push(r);
    }
    Ok((header, records))
}
