use nalgebra::Vector2;

use super::PhysicsError;

pub type Vec2 = Vector2<f64>;

/// Rotates a body-frame vector into world axes.
#[inline]
pub fn rotate(angle: f64, v: Vec2) -> Vec2 {
    let (s, c) = angle.sin_cos();
    Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

#[inline]
pub(crate) fn rotate_sc(s: f64, c: f64, v: Vec2) -> Vec2 {
    Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

/// 2D cross product `a × b` (z component).
#[inline]
pub(crate) fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// `w × r` for a scalar angular velocity.
#[inline]
pub(crate) fn cross_sv(w: f64, r: Vec2) -> Vec2 {
    Vec2::new(-w * r.y, w * r.x)
}

/// A rigid link with a box collision proxy.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkBody {
    pub id: usize,
    pub name: String,
    pub mass: f64,
    /// About the centre of mass.
    pub inertia: f64,
    pub half_extents: Vec2,
    /// Body-frame points tested against the terrain.
    pub contact_points: Vec<Vec2>,
    /// Fixed links never move (test rigs and pinned bases).
    pub fixed: bool,
}

impl LinkBody {
    /// Uniform box with corner and edge-midpoint contact points.
    pub fn boxed(id: usize, name: impl Into<String>, mass: f64, half_extents: Vec2) -> Self {
        let inertia = mass * (4.0 * half_extents.x.powi(2) + 4.0 * half_extents.y.powi(2)) / 12.0;
        Self {
            id,
            name: name.into(),
            mass,
            inertia,
            half_extents,
            contact_points: box_contact_points(half_extents),
            fixed: false,
        }
    }

    pub fn fixed(mut self) -> Self {
        self.fixed = true;
        self
    }

    #[inline]
    pub fn inv_mass(&self) -> f64 {
        if self.fixed {
            0.0
        } else {
            1.0 / self.mass
        }
    }

    #[inline]
    pub fn inv_inertia(&self) -> f64 {
        if self.fixed {
            0.0
        } else {
            1.0 / self.inertia
        }
    }

    pub fn validate(&self) -> Result<(), PhysicsError> {
        let bad = |what: &str| PhysicsError::InvalidLink {
            link: self.name.clone(),
            reason: what.to_string(),
        };
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(bad("mass must be positive"));
        }
        if !(self.inertia > 0.0 && self.inertia.is_finite()) {
            return Err(bad("inertia must be positive"));
        }
        if !(self.half_extents.x > 0.0 && self.half_extents.y > 0.0) {
            return Err(bad("half extents must be positive"));
        }
        if self.contact_points.is_empty() {
            return Err(bad("at least one contact point required"));
        }
        let tol = 1e-12;
        if self.contact_points.iter().any(|p| {
            p.x.abs() > self.half_extents.x + tol || p.y.abs() > self.half_extents.y + tol
        }) {
            return Err(bad("contact points must lie within the box"));
        }
        Ok(())
    }
}

/// Corners and edge midpoints of a box.
pub fn box_contact_points(h: Vec2) -> Vec<Vec2> {
    vec![
        Vec2::new(-h.x, -h.y),
        Vec2::new(0.0, -h.y),
        Vec2::new(h.x, -h.y),
        Vec2::new(h.x, 0.0),
        Vec2::new(h.x, h.y),
        Vec2::new(0.0, h.y),
        Vec2::new(-h.x, h.y),
        Vec2::new(-h.x, 0.0),
    ]
}

/// Pin joint between two links. The joint angle is `angle(child) - angle(parent)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RevoluteJoint {
    pub name: String,
    pub parent_link: usize,
    pub child_link: usize,
    pub anchor_parent: Vec2,
    pub anchor_child: Vec2,
    /// `[min, max]` joint angle in radians.
    pub angle_limits: [f64; 2],
    pub torque_limit: f64,
    pub kp: f64,
    pub kd: f64,
}

impl RevoluteJoint {
    pub fn validate(&self) -> Result<(), PhysicsError> {
        let bad = |what: &str| PhysicsError::InvalidJoint {
            joint: self.name.clone(),
            reason: what.to_string(),
        };
        if self.parent_link == self.child_link {
            return Err(PhysicsError::Topology(format!(
                "joint {} connects link {} to itself",
                self.name, self.parent_link
            )));
        }
        if !(self.angle_limits[0] <= self.angle_limits[1]) {
            return Err(bad("angle limit min exceeds max"));
        }
        if !(self.torque_limit > 0.0) {
            return Err(bad("torque limit must be positive"));
        }
        if !(self.kp >= 0.0) || !(self.kd >= 0.0) {
            return Err(bad("gains must be non-negative"));
        }
        Ok(())
    }

    pub fn clamp_angle(&self, a: f64) -> f64 {
        a.clamp(self.angle_limits[0], self.angle_limits[1])
    }
}

/// Links joined into a tree by revolute joints.
#[derive(Debug, Clone, PartialEq)]
pub struct Mechanism {
    links: Vec<LinkBody>,
    joints: Vec<RevoluteJoint>,
    root: usize,
    /// Joint indices ordered so that every parent is placed before its child.
    order: Vec<usize>,
}

impl Mechanism {
    pub fn new(links: Vec<LinkBody>, joints: Vec<RevoluteJoint>) -> Result<Self, PhysicsError> {
        if links.is_empty() {
            return Err(PhysicsError::Topology("no links".into()));
        }
        for (i, l) in links.iter().enumerate() {
            if l.id != i {
                return Err(PhysicsError::Topology(format!(
                    "link {} has id {} at index {i}",
                    l.name, l.id
                )));
            }
            l.validate()?;
        }
        let n = links.len();
        let mut parent_joint: Vec<Option<usize>> = vec![None; n];
        for (j, joint) in joints.iter().enumerate() {
            joint.validate()?;
            if joint.parent_link >= n || joint.child_link >= n {
                return Err(PhysicsError::Topology(format!(
                    "joint {} references a missing link",
                    joint.name
                )));
            }
            if parent_joint[joint.child_link].replace(j).is_some() {
                return Err(PhysicsError::Topology(format!(
                    "link {} has more than one parent joint",
                    links[joint.child_link].name
                )));
            }
        }
        let roots: Vec<usize> = (0..n).filter(|&i| parent_joint[i].is_none()).collect();
        let root = match roots.as_slice() {
            [r] => *r,
            [] => return Err(PhysicsError::Topology("joint graph has a cycle (no root)".into())),
            _ => {
                return Err(PhysicsError::Topology(format!(
                    "joint graph is not connected ({} roots)",
                    roots.len()
                )))
            }
        };
        // breadth-first from the root; anything unreached sits on a cycle
        let mut order = Vec::with_capacity(joints.len());
        let mut placed = vec![false; n];
        placed[root] = true;
        let mut frontier = vec![root];
        while let Some(link) = frontier.pop() {
            let mut children: Vec<usize> = joints
                .iter()
                .enumerate()
                .filter(|(_, j)| j.parent_link == link)
                .map(|(i, _)| i)
                .collect();
            children.sort_unstable();
            for j in children {
                let c = joints[j].child_link;
                if !placed[c] {
                    placed[c] = true;
                    order.push(j);
                    frontier.push(c);
                }
            }
        }
        if order.len() != joints.len() {
            return Err(PhysicsError::Topology("joint graph has a cycle".into()));
        }
        Ok(Self {
            links,
            joints,
            root,
            order,
        })
    }

    pub fn links(&self) -> &[LinkBody] {
        &self.links
    }

    pub fn joints(&self) -> &[RevoluteJoint] {
        &self.joints
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn joint_order(&self) -> &[usize] {
        &self.order
    }

    pub fn link_index(&self, name: &str) -> Option<usize> {
        self.links.iter().position(|l| l.name == name)
    }

    pub fn total_mass(&self) -> f64 {
        self.links.iter().map(|l| l.mass).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyState {
    /// Centre of mass, world frame.
    pub position: Vec2,
    pub angle: f64,
    pub linear_velocity: Vec2,
    pub angular_velocity: f64,
}

impl BodyState {
    pub fn at_rest(position: Vec2, angle: f64) -> Self {
        Self {
            position,
            angle,
            linear_velocity: Vec2::zeros(),
            angular_velocity: 0.0,
        }
    }

    /// World position of a body-frame point.
    #[inline]
    pub fn world_point(&self, local: Vec2) -> Vec2 {
        self.position + rotate(self.angle, local)
    }

    fn is_finite(&self) -> bool {
        self.position.x.is_finite()
            && self.position.y.is_finite()
            && self.angle.is_finite()
            && self.linear_velocity.x.is_finite()
            && self.linear_velocity.y.is_finite()
            && self.angular_velocity.is_finite()
    }
}

/// Accumulated impulses carried between steps to warm-start the solver.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverCache {
    /// Per joint: point impulse (x, y), lower-limit and upper-limit impulses.
    pub(crate) joint: Vec<[f64; 4]>,
    pub(crate) contacts: Vec<CachedContact>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CachedContact {
    pub link: u32,
    pub point: u32,
    pub normal: f64,
    pub tangent: f64,
}

/// Dynamic state of every link of one mechanism.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub bodies: Vec<BodyState>,
    pub time: f64,
    /// Set once a step produced a non-finite value.
    pub diverged: bool,
    pub(crate) cache: SolverCache,
}

impl SimState {
    pub fn new(bodies: Vec<BodyState>) -> Self {
        Self {
            bodies,
            time: 0.0,
            diverged: false,
            cache: SolverCache::default(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.time.is_finite() && self.bodies.iter().all(BodyState::is_finite)
    }

    /// Drops warm-start data (after teleporting bodies, for instance).
    pub fn clear_cache(&mut self) {
        self.cache = SolverCache::default();
    }

    /// Rigidly translates every body.
    pub fn translate(&mut self, delta: Vec2) {
        for b in &mut self.bodies {
            b.position += delta;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactEvent {
    pub link: usize,
    pub point: Vec2,
    pub normal_impulse: f64,
    pub tangent_impulse: f64,
}

/// Solver and world constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicsConfig {
    pub gravity: f64,
    pub friction: f64,
    pub velocity_iterations: usize,
    pub baumgarte: f64,
    /// Penetration tolerated before positional correction kicks in.
    pub slop: f64,
    /// Points closer than this to the surface become speculative contacts.
    pub contact_margin: f64,
    /// Upper bound on the Baumgarte bias velocity.
    pub max_correction_velocity: f64,
}

impl Default for PhysicsConfig {
    fn default() -> Self {
        Self {
            gravity: 9.8,
            friction: 0.9,
            velocity_iterations: 10,
            baumgarte: 0.2,
            slop: 5e-4,
            contact_margin: 0.02,
            max_correction_velocity: 1.0,
        }
    }
}

impl PhysicsConfig {
    pub fn zero_gravity() -> Self {
        Self {
            gravity: 0.0,
            ..Self::default()
        }
    }
}

pub const DEFAULT_SIM_HZ: u32 = 3000;
pub const DEFAULT_DT: f64 = 1.0 / DEFAULT_SIM_HZ as f64;
