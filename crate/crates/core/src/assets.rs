//! Shipped asset files (terrain presets, characters, reference clips).
//!
//! The files are compiled into the crate. Setting `TERRA_ASSET_DIR` makes every
//! lookup read `<dir>/<kind>/<name>.json` from disk instead, falling back to the
//! embedded copy only when the override directory lacks the file.

use std::path::PathBuf;

pub const ASSET_DIR_VAR: &str = "TERRA_ASSET_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssetKind {
    Terrain,
    Character,
    Clip,
}

impl AssetKind {
    fn dir(self) -> &'static str {
        match self {
            AssetKind::Terrain => "terrain",
            AssetKind::Character => "characters",
            AssetKind::Clip => "clips",
        }
    }
}

macro_rules! embedded {
    ($($dir:literal / $name:literal),* $(,)?) => {
        &[$(($dir, $name, include_str!(concat!("../assets/", $dir, "/", $name, ".json")))),*]
    };
}

static EMBEDDED: &[(&str, &str, &str)] = embedded![
    "terrain" / "flat",
    "terrain" / "incline",
    "terrain" / "steps",
    "terrain" / "slopes",
    "terrain" / "gaps",
    "terrain" / "walls",
    "terrain" / "mixed",
    "terrain" / "slopes-mixed",
    "terrain" / "narrow-gaps",
    "terrain" / "tight-gaps",
    "terrain" / "slopes-gaps",
    "terrain" / "slopes-steps",
    "terrain" / "slopes-walls",
    "terrain" / "cliffs",
    "characters" / "biped7",
    "characters" / "raptor19",
    "characters" / "dog21",
    "characters" / "hopper4",
    "clips" / "biped7_gait",
    "clips" / "raptor19_gait",
    "clips" / "dog21_gait",
    "clips" / "hopper4_gait",
];

/// Names of the embedded assets of one kind, in shipping order.
pub fn asset_names(kind: AssetKind) -> Vec<&'static str> {
    EMBEDDED
        .iter()
        .filter(|(d, _, _)| *d == kind.dir())
        .map(|(_, n, _)| *n)
        .collect()
}

pub fn override_dir() -> Option<PathBuf> {
    std::env::var_os(ASSET_DIR_VAR)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

/// Text of an asset, honoring `TERRA_ASSET_DIR`.
pub fn load_asset(kind: AssetKind, name: &str) -> Option<String> {
    if let Some(dir) = override_dir() {
        let path = dir.join(kind.dir()).join(format!("{name}.json"));
        if let Ok(text) = std::fs::read_to_string(path) {
            return Some(text);
        }
    }
    EMBEDDED
        .iter()
        .find(|(d, n, _)| *d == kind.dir() && *n == name)
        .map(|(_, _, t)| (*t).to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_embedded() {
        assert_eq!(asset_names(AssetKind::Terrain).len(), 14);
        assert_eq!(asset_names(AssetKind::Character).len(), 4);
        assert!(load_asset(AssetKind::Character, "biped7").is_some());
        assert!(load_asset(AssetKind::Terrain, "nope").is_none());
    }
}
