//! Terrain parameter files, seeded heightfield generation and queries.

mod generate;
mod params;
mod profile;
mod stats;

pub use generate::{generate_terrain, APRON_LENGTH, RISER_RUN, SLOPE_SEGMENT};
pub use params::{
    params_from_value, parse_terrain_params, Bounds, GapGroup, ObstacleKind, SlopeGroup,
    StepGroup, TerrainParams, TerrainType, WallGroup, FIELD_NAMES,
};
pub use profile::{
    sample_terrain_window, sample_terrain_window_into, FeatureAnnotation, FeatureKind,
    SurfaceProbe, TerrainProfile, Vertex, WINDOW_CLAMP,
};
pub use stats::{batch_stats, check_compliance, terrain_stats, KindStats, Summary, TerrainStats, Violation};

use crate::assets::{self, AssetKind};

#[derive(Debug, thiserror::Error)]
pub enum TerrainError {
    #[error("malformed terrain document: {0}")]
    Malformed(String),
    #[error("unknown terrain type {0:?}")]
    UnknownType(String),
    #[error("unknown terrain parameter {0:?}")]
    UnknownField(String),
    #[error("\"Params\" must hold one object, found {0}")]
    ParamsCount(usize),
    #[error("terrain parameter {field}: {field}Min ({min}) > {field}Max ({max})")]
    InvertedBounds {
        field: &'static str,
        min: f64,
        max: f64,
    },
    #[error("terrain parameter {field}: {reason}")]
    InvalidValue {
        field: &'static str,
        reason: &'static str,
    },
    #[error("terrain parameter group {group} is incomplete: missing {missing}")]
    IncompleteGroup {
        group: &'static str,
        missing: &'static str,
    },
    #[error("terrain type {ty} requires the {group} parameters")]
    MissingGroup { ty: TerrainType, group: &'static str },
    #[error("invalid terrain profile: {0}")]
    Profile(String),
    #[error("unknown terrain preset {0:?}")]
    UnknownPreset(String),
}

/// Loads a shipped terrain preset by name (`flat`, `slopes-mixed`, ...).
pub fn preset(name: &str) -> Result<TerrainParams, TerrainError> {
    let text = assets::load_asset(AssetKind::Terrain, name)
        .ok_or_else(|| TerrainError::UnknownPreset(name.to_string()))?;
    parse_terrain_params(&text)
}

pub fn preset_names() -> Vec<&'static str> {
    assets::asset_names(AssetKind::Terrain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_parses_to_its_type() {
        for name in preset_names() {
            let p = preset(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(p.terrain_type.name(), name);
        }
    }
}
