use std::io::Write;
use std::path::Path;

use super::svg::terrain_svg;
use super::CliError;
use crate::terrain::{generate_terrain, parse_terrain_params, preset, TerrainParams, TerrainProfile};

/// A terrain file path, or a preset name when no such file exists.
pub fn load_params(source: &str) -> Result<TerrainParams, CliError> {
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{source}: {e}")))?;
        parse_terrain_params(&text).map_err(|e| CliError::Input(format!("{source}: {e}")))
    } else {
        preset(source).map_err(|e| CliError::Input(e.to_string()))
    }
}

/// CSV with vertex rows (`vertex,x,y,,,`) followed by one row per feature
/// annotation (`feature,start_x,,kind,width,magnitude`).
pub fn profile_csv(profile: &TerrainProfile, out: impl Write) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["record", "x", "y", "kind", "width", "magnitude"])?;
    for v in profile.vertices() {
        w.write_record(["vertex", &v.x.to_string(), &v.y.to_string(), "", "", ""])?;
    }
    for f in profile.features() {
        w.write_record([
            "feature",
            &f.start_x.to_string(),
            "",
            f.kind.name(),
            &f.width.to_string(),
            &f.magnitude.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_terrain(
    source: &str,
    seed: u64,
    x_start: f64,
    length: f64,
    out: &Path,
    svg: Option<&Path>,
) -> Result<TerrainProfile, CliError> {
    if !(length > 0.0 && length.is_finite() && x_start.is_finite()) {
        return Err(CliError::Input("--length must be positive".into()));
    }
    let params = load_params(source)?;
    let profile = generate_terrain(&params, seed, x_start, x_start + length);
    let io = |p: &Path, e: &dyn std::fmt::Display| CliError::Io(format!("{}: {e}", p.display()));
    let file = std::fs::File::create(out).map_err(|e| io(out, &e))?;
    profile_csv(&profile, std::io::BufWriter::new(file)).map_err(|e| io(out, &e))?;
    if let Some(svg) = svg {
        std::fs::write(svg, terrain_svg(&profile)).map_err(|e| io(svg, &e))?;
    }
    Ok(profile)
}
