//! Character files, the shipped morphologies and joint actuation.

mod actuation;
mod features;
mod load;

pub use actuation::{
    action_space, compute_torques, compute_torques_into, force_velocity, ActionSpace,
    ActuationMode, MuscleUnit, MUSCLE_ACTIVATION_TIME, MUSCLE_MAX_VELOCITY, VELOCITY_LIMIT,
};
pub use features::{agent_features, agent_features_into, feature_dim};
pub use load::{load_character, MuscleSpec, CHARACTER_FORMAT, CHARACTER_VERSION};

use std::fmt;
use std::str::FromStr;

use crate::assets::{self, AssetKind};
use crate::physics2d::{LinkBody, Mechanism, PhysicsError, RevoluteJoint, SimState};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CharacterError {
    #[error("malformed character document: {0}")]
    Malformed(String),
    #[error("unsupported character format {format:?} version {version}")]
    Format { format: String, version: u32 },
    #[error("duplicate link or joint name {0:?}")]
    DuplicateName(String),
    #[error("unknown link {link:?} referenced by {by}")]
    UnknownLink { link: String, by: String },
    #[error("link {link}: mass must be positive, got {mass}")]
    NonPositiveMass { link: String, mass: f64 },
    #[error("link {link}: half extents must be positive")]
    NonPositiveExtent { link: String },
    #[error("joint {joint}: limit inversion ({lo} > {hi})")]
    LimitInversion { joint: String, lo: f64, hi: f64 },
    #[error("joint {joint}: {reason}")]
    InvalidJoint { joint: String, reason: String },
    #[error("topology error: {0}")]
    Topology(String),
    #[error("declared root {declared:?} is not the root of the joint tree ({actual:?})")]
    MissingRoot { declared: String, actual: String },
    #[error("link {0:?} is both a foot link and a fall link")]
    FootFallOverlap(String),
    #[error("character {name} must have {expected} links, found {found}")]
    LinkCount {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown built-in character {0:?}")]
    UnknownBuiltin(String),
    #[error("expected action of dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl From<PhysicsError> for CharacterError {
    fn from(e: PhysicsError) -> Self {
        match e {
            PhysicsError::Topology(s) => CharacterError::Topology(s),
            PhysicsError::InvalidJoint { joint, reason } => CharacterError::InvalidJoint { joint, reason },
            other => CharacterError::Malformed(other.to_string()),
        }
    }
}

/// The four shipped morphologies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    Biped7,
    Raptor19,
    Dog21,
    Hopper4,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [Builtin::Biped7, Builtin::Raptor19, Builtin::Dog21, Builtin::Hopper4];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Biped7 => "biped7",
            Builtin::Raptor19 => "raptor19",
            Builtin::Dog21 => "dog21",
            Builtin::Hopper4 => "hopper4",
        }
    }

    pub fn link_count(self) -> usize {
        match self {
            Builtin::Biped7 => 7,
            Builtin::Raptor19 => 19,
            Builtin::Dog21 => 21,
            Builtin::Hopper4 => 4,
        }
    }

    /// Morphology token used in environment names.
    pub fn env_token(self) -> &'static str {
        match self {
            Builtin::Biped7 => "Biped2D",
            Builtin::Raptor19 => "Raptor2D",
            Builtin::Dog21 => "Dog2D",
            Builtin::Hopper4 => "Hopper2D",
        }
    }

    pub fn from_env_token(token: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.env_token() == token)
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = CharacterError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| CharacterError::UnknownBuiltin(s.to_string()))
    }
}

/// A validated articulated character.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterModel {
    pub name: String,
    pub mechanism: Mechanism,
    pub root_link: usize,
    /// Sorted link ids.
    pub foot_links: Vec<usize>,
    /// Sorted link ids; terrain contact by any of these ends an episode.
    pub fall_links: Vec<usize>,
    /// Root height above the ground in the stance pose.
    pub spawn_root_height: f64,
    /// Nominal joint angles used at spawn.
    pub stance: Vec<f64>,
    pub muscles: Vec<MuscleSpec>,
    fall_mask: Vec<bool>,
}

impl CharacterModel {
    pub fn links(&self) -> &[LinkBody] {
        self.mechanism.links()
    }

    pub fn joints(&self) -> &[RevoluteJoint] {
        self.mechanism.joints()
    }

    pub fn num_links(&self) -> usize {
        self.mechanism.links().len()
    }

    pub fn num_joints(&self) -> usize {
        self.mechanism.joints().len()
    }

    #[inline]
    pub fn is_fall_link(&self, link: usize) -> bool {
        self.fall_mask[link]
    }

    pub fn link_index(&self, name: &str) -> Option<usize> {
        self.mechanism.link_index(name)
    }

    /// Joint angles of `state`, in joint order.
    pub fn joint_angles(&self, state: &SimState) -> Vec<f64> {
        crate::physics2d::joint_angles(&self.mechanism, state)
    }
}

/// Loads one of the shipped characters (honouring the asset override directory).
pub fn builtin_character(which: Builtin) -> CharacterModel {
    let text = assets::load_asset(AssetKind::Character, which.name())
        .expect("built-in character asset exists");
    load_character(&text).unwrap_or_else(|e| panic!("built-in character {which} is invalid: {e}"))
}

/// Like [`builtin_character`] but reports a broken override file instead of panicking.
pub fn try_builtin_character(which: Builtin) -> Result<CharacterModel, CharacterError> {
    let text = assets::load_asset(AssetKind::Character, which.name())
        .ok_or_else(|| CharacterError::UnknownBuiltin(which.name().to_string()))?;
    load_character(&text)
}
