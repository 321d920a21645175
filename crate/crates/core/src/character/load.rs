use std::collections::{BTreeSet, HashMap};

use serde::Deserialize;

use super::{Builtin, CharacterError, CharacterModel};
use crate::physics2d::{LinkBody, Mechanism, RevoluteJoint, Vec2};

pub const CHARACTER_FORMAT: &str = "terra-character";
pub const CHARACTER_VERSION: u32 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    format: String,
    version: u32,
    name: String,
    root: String,
    spawn_root_height: f64,
    #[serde(default)]
    foot_links: Vec<String>,
    #[serde(default)]
    fall_links: Vec<String>,
    links: Vec<LinkDoc>,
    joints: Vec<JointDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkDoc {
    name: String,
    mass: f64,
    half_extents: [f64; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JointDoc {
    name: String,
    parent: String,
    child: String,
    anchor_parent: [f64; 2],
    anchor_child: [f64; 2],
    limits: [f64; 2],
    kp: f64,
    kd: f64,
    torque_limit: f64,
    #[serde(default)]
    stance: f64,
    #[serde(default)]
    muscle: Option<MuscleSpec>,
}

/// Per-joint muscle parameters; absent fields take the defaults listed on
/// [`crate::character::MuscleUnit::for_model`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MuscleSpec {
    pub tau_max_plus: Option<f64>,
    pub tau_max_minus: Option<f64>,
    pub activation_time: Option<f64>,
    pub optimal_angle: Option<f64>,
    pub angle_width: Option<f64>,
    pub max_velocity: Option<f64>,
}

/// Parses and validates a character document.
///
/// ```
/// let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/assets/characters/biped7.json")).unwrap();
/// let biped = terra::character::load_character(&text).unwrap();
/// assert_eq!(biped.num_links(), 7);
/// ```
pub fn load_character(text: &str) -> Result<CharacterModel, CharacterError> {
    let doc: Doc = serde_json::from_str(text).map_err(|e| CharacterError::Malformed(e.to_string()))?;
    if doc.format != CHARACTER_FORMAT || doc.version != CHARACTER_VERSION {
        return Err(CharacterError::Format {
            format: doc.format,
            version: doc.version,
        });
    }

    let mut index = HashMap::new();
    let mut links = Vec::with_capacity(doc.links.len());
    for (i, l) in doc.links.iter().enumerate() {
        if index.insert(l.name.as_str(), i).is_some() {
            return Err(CharacterError::DuplicateName(l.name.clone()));
        }
        if !(l.mass > 0.0 && l.mass.is_finite()) {
            return Err(CharacterError::NonPositiveMass {
                link: l.name.clone(),
                mass: l.mass,
            });
        }
        let [hx, hy] = l.half_extents;
        if !(hx > 0.0 && hy > 0.0 && hx.is_finite() && hy.is_finite()) {
            return Err(CharacterError::NonPositiveExtent { link: l.name.clone() });
        }
        let body = LinkBody::boxed(i, l.name.clone(), l.mass, Vec2::new(hx, hy));
        links.push(body);
    }
    let lookup = |name: &str, by: &str| {
        index.get(name).copied().ok_or_else(|| CharacterError::UnknownLink {
            link: name.to_string(),
            by: by.to_string(),
        })
    };

    let mut joint_names = BTreeSet::new();
    let mut joints = Vec::with_capacity(doc.joints.len());
    let mut stance = Vec::with_capacity(doc.joints.len());
    let mut muscles = Vec::with_capacity(doc.joints.len());
    for j in &doc.joints {
        if !joint_names.insert(j.name.as_str()) {
            return Err(CharacterError::DuplicateName(j.name.clone()));
        }
        let by = format!("joint {}", j.name);
        let parent = lookup(&j.parent, &by)?;
        let child = lookup(&j.child, &by)?;
        if parent == child {
            return Err(CharacterError::Topology(format!(
                "joint {} connects link {} to itself",
                j.name, j.parent
            )));
        }
        let [lo, hi] = j.limits;
        if lo > hi || lo.is_nan() || hi.is_nan() {
            return Err(CharacterError::LimitInversion {
                joint: j.name.clone(),
                lo,
                hi,
            });
        }
        if !(lo..=hi).contains(&j.stance) {
            return Err(CharacterError::InvalidJoint {
                joint: j.name.clone(),
                reason: format!("stance angle {} outside limits", j.stance),
            });
        }
        joints.push(RevoluteJoint {
            name: j.name.clone(),
            parent_link: parent,
            child_link: child,
            anchor_parent: Vec2::new(j.anchor_parent[0], j.anchor_parent[1]),
            anchor_child: Vec2::new(j.anchor_child[0], j.anchor_child[1]),
            angle_limits: j.limits,
            torque_limit: j.torque_limit,
            kp: j.kp,
            kd: j.kd,
        });
        stance.push(j.stance);
        muscles.push(j.muscle.unwrap_or_default());
    }

    let root_decl = lookup(&doc.root, "root")?;
    let mechanism = Mechanism::new(links, joints)?;
    if mechanism.root() != root_decl {
        return Err(CharacterError::MissingRoot {
            declared: doc.root,
            actual: mechanism.links()[mechanism.root()].name.clone(),
        });
    }

    let ids = |names: &[String], by: &str| -> Result<Vec<usize>, CharacterError> {
        let mut out: Vec<usize> = names.iter().map(|n| lookup(n, by)).collect::<Result<_, _>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    };
    let foot_links = ids(&doc.foot_links, "foot_links")?;
    let fall_links = ids(&doc.fall_links, "fall_links")?;
    if let Some(&l) = foot_links.iter().find(|l| fall_links.contains(l)) {
        return Err(CharacterError::FootFallOverlap(mechanism.links()[l].name.clone()));
    }
    if let Ok(b) = doc.name.parse::<Builtin>() {
        if mechanism.links().len() != b.link_count() {
            return Err(CharacterError::LinkCount {
                name: doc.name,
                expected: b.link_count(),
                found: mechanism.links().len(),
            });
        }
    }
    if !(doc.spawn_root_height > 0.0 && doc.spawn_root_height.is_finite()) {
        return Err(CharacterError::Malformed("spawn_root_height must be positive".into()));
    }

    let mut fall_mask = vec![false; mechanism.links().len()];
    for &l in &fall_links {
        fall_mask[l] = true;
    }
    Ok(CharacterModel {
        name: doc.name,
        root_link: root_decl,
        mechanism,
        foot_links,
        fall_links,
        spawn_root_height: doc.spawn_root_height,
        stance,
        muscles,
        fall_mask,
    })
}
