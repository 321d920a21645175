//! Sequential-impulse step.
//!
//! Order within one step of length `dt`:
//! gravity and clamped joint torques update velocities; joint point
//! constraints, joint limits and terrain contacts are prepared from the
//! current poses and warm-started with last step's impulses; a fixed number
//! of Gauss-Seidel velocity iterations follows (limits, joints, then per
//! contact friction before normal); positions advance with the end-of-step
//! velocities (semi-implicit Euler). Links not pressed against the terrain
//! also get the `g dt^2 / 2` correction that makes ballistic flight exact;
//! skipping it under contact keeps resting bodies from creeping on slopes.

use super::types::{
    cross, cross_sv, rotate_sc, CachedContact, ContactEvent, Mechanism, PhysicsConfig, SimState,
    Vec2,
};
use super::PhysicsError;
use crate::terrain::TerrainProfile;

#[derive(Debug, Clone, Copy)]
struct Vel {
    v: Vec2,
    w: f64,
}

#[derive(Debug, Clone, Copy)]
struct JointRow {
    a: usize,
    b: usize,
    ma: f64,
    ia: f64,
    mb: f64,
    ib: f64,
    ra: Vec2,
    rb: Vec2,
    /// Inverse of the 2x2 effective mass matrix, row-major.
    k_inv: [f64; 4],
    bias: Vec2,
    impulse: Vec2,
    axial_mass: f64,
    lower_bias: f64,
    upper_bias: f64,
    lower: f64,
    upper: f64,
    has_limits: bool,
}

#[derive(Debug, Clone, Copy)]
struct ContactRow {
    link: usize,
    point_index: usize,
    world: Vec2,
    r: Vec2,
    inv_mass: f64,
    inv_inertia: f64,
    normal: Vec2,
    tangent: Vec2,
    normal_mass: f64,
    tangent_mass: f64,
    bias: f64,
    normal_impulse: f64,
    tangent_impulse: f64,
}

/// Output of [`integrate_step`].
#[derive(Debug, Clone)]
pub struct StepOutput {
    pub state: SimState,
    pub contacts: Vec<ContactEvent>,
    /// Torques actually applied, after clamping.
    pub applied_torques: Vec<f64>,
}

/// Reusable scratch buffers; stepping through a workspace avoids per-step
/// allocation but is otherwise identical to [`integrate_step`].
#[derive(Debug, Default, Clone)]
pub struct StepWorkspace {
    vel: Vec<Vel>,
    trig: Vec<(f64, f64)>,
    touching: Vec<bool>,
    joints: Vec<JointRow>,
    contacts: Vec<ContactRow>,
    applied: Vec<f64>,
}

/// Advances `state` by `dt`. Pure: identical inputs give bit-identical outputs.
pub fn integrate_step(
    mechanism: &Mechanism,
    state: &SimState,
    joint_torques: &[f64],
    terrain: Option<&TerrainProfile>,
    dt: f64,
    config: &PhysicsConfig,
) -> Result<StepOutput, PhysicsError> {
    let mut ws = StepWorkspace::default();
    let mut next = state.clone();
    let mut contacts = Vec::new();
    ws.step(mechanism, &mut next, joint_torques, terrain, dt, config, &mut contacts)?;
    Ok(StepOutput {
        state: next,
        contacts,
        applied_torques: ws.applied.clone(),
    })
}

impl StepWorkspace {
    pub fn applied_torques(&self) -> &[f64] {
        &self.applied
    }

    /// In-place step; contact events are appended to `events`.
    #[allow(clippy::too_many_arguments)]
    pub fn step(
        &mut self,
        mech: &Mechanism,
        state: &mut SimState,
        joint_torques: &[f64],
        terrain: Option<&TerrainProfile>,
        dt: f64,
        cfg: &PhysicsConfig,
        events: &mut Vec<ContactEvent>,
    ) -> Result<(), PhysicsError> {
        let links = mech.links();
        let joints = mech.joints();
        if joint_torques.len() != joints.len() {
            return Err(PhysicsError::DimensionMismatch {
                expected: joints.len(),
                got: joint_torques.len(),
            });
        }
        if state.bodies.len() != links.len() {
            return Err(PhysicsError::StateMismatch {
                expected: links.len(),
                got: state.bodies.len(),
            });
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(PhysicsError::InvalidTimestep(dt));
        }
        if state.diverged || !state.is_finite() || joint_torques.iter().any(|t| !t.is_finite()) {
            return Err(PhysicsError::NonFiniteState);
        }
        let inv_dt = 1.0 / dt;

        self.vel.clear();
        self.vel.extend(state.bodies.iter().map(|b| Vel {
            v: b.linear_velocity,
            w: b.angular_velocity,
        }));
        self.trig.clear();
        self.trig
            .extend(state.bodies.iter().map(|b| b.angle.sin_cos()));

        for (link, vel) in links.iter().zip(self.vel.iter_mut()) {
            if !link.fixed {
                vel.v.y -= cfg.gravity * dt;
            }
        }

        self.applied.clear();
        for (joint, &tau) in joints.iter().zip(joint_torques) {
            let applied = tau.clamp(-joint.torque_limit, joint.torque_limit);
            assert!(applied.abs() <= joint.torque_limit);
            self.applied.push(applied);
            let (p, c) = (joint.parent_link, joint.child_link);
            self.vel[c].w += applied * links[c].inv_inertia() * dt;
            self.vel[p].w -= applied * links[p].inv_inertia() * dt;
        }

        self.prepare_joints(mech, state, cfg, inv_dt);
        self.prepare_contacts(mech, state, terrain, cfg, inv_dt);

        self.warm_start();
        for _ in 0..cfg.velocity_iterations {
            self.solve_joints();
            self.solve_contacts(cfg.friction);
        }
        self.project_friction(cfg.friction);

        let half_g_dt2 = 0.5 * cfg.gravity * dt * dt;
        self.touching.clear();
        self.touching.resize(links.len(), false);
        for c in &self.contacts {
            if c.normal_impulse > 0.0 {
                self.touching[c.link] = true;
            }
        }
        for (i, body) in state.bodies.iter_mut().enumerate() {
            if links[i].fixed {
                continue;
            }
            let v1 = self.vel[i];
            body.position += v1.v * dt;
            if !self.touching[i] {
                body.position.y += half_g_dt2;
            }
            body.angle += v1.w * dt;
            body.linear_velocity = v1.v;
            body.angular_velocity = v1.w;
        }
        state.time += dt;

        state.cache.joint.clear();
        state
            .cache
            .joint
            .extend(self.joints.iter().map(|j| [j.impulse.x, j.impulse.y, j.lower, j.upper]));
        state.cache.contacts.clear();
        for c in &self.contacts {
            state.cache.contacts.push(CachedContact {
                link: c.link as u32,
                point: c.point_index as u32,
                normal: c.normal_impulse,
                tangent: c.tangent_impulse,
            });
            if c.normal_impulse > 0.0 {
                events.push(ContactEvent {
                    link: c.link,
                    point: c.world,
                    normal_impulse: c.normal_impulse,
                    tangent_impulse: c.tangent_impulse,
                });
            }
        }

        if !state.is_finite() {
            state.diverged = true;
        }
        Ok(())
    }

    fn prepare_joints(&mut self, mech: &Mechanism, state: &SimState, cfg: &PhysicsConfig, inv_dt: f64) {
        let links = mech.links();
        self.joints.clear();
        for (j, joint) in mech.joints().iter().enumerate() {
            let (a, b) = (joint.parent_link, joint.child_link);
            let (sa, ca) = self.trig[a];
            let (sb, cb) = self.trig[b];
            let ra = rotate_sc(sa, ca, joint.anchor_parent);
            let rb = rotate_sc(sb, cb, joint.anchor_child);
            let (ma, ia) = (links[a].inv_mass(), links[a].inv_inertia());
            let (mb, ib) = (links[b].inv_mass(), links[b].inv_inertia());
            let k11 = ma + mb + ia * ra.y * ra.y + ib * rb.y * rb.y;
            let k12 = -ia * ra.x * ra.y - ib * rb.x * rb.y;
            let k22 = ma + mb + ia * ra.x * ra.x + ib * rb.x * rb.x;
            let det = k11 * k22 - k12 * k12;
            let k_inv = if det.abs() > 0.0 {
                let d = 1.0 / det;
                [k22 * d, -k12 * d, -k12 * d, k11 * d]
            } else {
                [0.0; 4]
            };
            let error = (state.bodies[b].position + rb) - (state.bodies[a].position + ra);
            let mut bias = error * (cfg.baumgarte * inv_dt);
            let bias_len = bias.norm();
            if bias_len > cfg.max_correction_velocity {
                bias *= cfg.max_correction_velocity / bias_len;
            }

            let rel = state.bodies[b].angle - state.bodies[a].angle;
            let [lo, hi] = joint.angle_limits;
            let has_limits = lo.is_finite() || hi.is_finite();
            let limit_bias = |c: f64| {
                if c > 0.0 {
                    c * inv_dt
                } else {
                    (c * cfg.baumgarte * inv_dt).max(-cfg.max_correction_velocity)
                }
            };
            let axial = ia + ib;
            let cached = state.cache.joint.get(j).copied().unwrap_or([0.0; 4]);
            self.joints.push(JointRow {
                a,
                b,
                ma,
                ia,
                mb,
                ib,
                ra,
                rb,
                k_inv,
                bias,
                impulse: Vec2::new(cached[0], cached[1]),
                axial_mass: if axial > 0.0 { 1.0 / axial } else { 0.0 },
                lower_bias: limit_bias(rel - lo),
                upper_bias: limit_bias(hi - rel),
                lower: cached[2],
                upper: cached[3],
                has_limits,
            });
        }
    }

    fn prepare_contacts(
        &mut self,
        mech: &Mechanism,
        state: &SimState,
        terrain: Option<&TerrainProfile>,
        cfg: &PhysicsConfig,
        inv_dt: f64,
    ) {
        self.contacts.clear();
        let Some(terrain) = terrain else {
            return;
        };
        let cache = &state.cache.contacts;
        let mut cursor = 0usize;
        for (li, link) in mech.links().iter().enumerate() {
            if link.fixed {
                continue;
            }
            let body = &state.bodies[li];
            let (s, c) = self.trig[li];
            let (m, i) = (link.inv_mass(), link.inv_inertia());
            for (pi, local) in link.contact_points.iter().enumerate() {
                let r = rotate_sc(s, c, *local);
                let world = body.position + r;
                let Some(probe) = terrain.probe(world, cfg.contact_margin) else {
                    continue;
                };
                let n = probe.normal;
                let t = Vec2::new(n.y, -n.x);
                let rn = cross(r, n);
                let rt = cross(r, t);
                let bias = if probe.depth < 0.0 {
                    -probe.depth * inv_dt
                } else if probe.depth > cfg.slop {
                    -((probe.depth - cfg.slop) * cfg.baumgarte * inv_dt).min(cfg.max_correction_velocity)
                } else {
                    0.0
                };
                // cache entries are sorted by (link, point), as are new rows
                let key = (li as u32, pi as u32);
                while cursor < cache.len() && (cache[cursor].link, cache[cursor].point) < key {
                    cursor += 1;
                }
                let (normal_impulse, tangent_impulse) = match cache.get(cursor) {
                    Some(cc) if (cc.link, cc.point) == key => (cc.normal, cc.tangent),
                    _ => (0.0, 0.0),
                };
                self.contacts.push(ContactRow {
                    link: li,
                    point_index: pi,
                    world,
                    r,
                    inv_mass: m,
                    inv_inertia: i,
                    normal: n,
                    tangent: t,
                    normal_mass: 1.0 / (m + i * rn * rn),
                    tangent_mass: 1.0 / (m + i * rt * rt),
                    bias,
                    normal_impulse,
                    tangent_impulse: tangent_impulse
                        .clamp(-cfg.friction * normal_impulse, cfg.friction * normal_impulse),
                });
            }
        }
    }

    fn warm_start(&mut self) {
        for j in &self.joints {
            let p = j.impulse;
            let axial = j.lower - j.upper;
            let va = &mut self.vel[j.a];
            va.v -= p * j.ma;
            va.w -= j.ia * (cross(j.ra, p) + axial);
            let vb = &mut self.vel[j.b];
            vb.v += p * j.mb;
            vb.w += j.ib * (cross(j.rb, p) + axial);
        }
        for c in &self.contacts {
            let p = c.normal * c.normal_impulse + c.tangent * c.tangent_impulse;
            apply_contact(&mut self.vel[c.link], c, p);
        }
    }

    fn solve_joints(&mut self) {
        for j in self.joints.iter_mut() {
            if j.has_limits && j.axial_mass > 0.0 {
                // lower: C = rel - lo >= 0
                let cdot = self.vel[j.b].w - self.vel[j.a].w;
                let lambda = -j.axial_mass * (cdot + j.lower_bias);
                let old = j.lower;
                j.lower = (old + lambda).max(0.0);
                let d = j.lower - old;
                self.vel[j.a].w -= j.ia * d;
                self.vel[j.b].w += j.ib * d;

                // upper: C = hi - rel >= 0
                let cdot = self.vel[j.a].w - self.vel[j.b].w;
                let lambda = -j.axial_mass * (cdot + j.upper_bias);
                let old = j.upper;
                j.upper = (old + lambda).max(0.0);
                let d = j.upper - old;
                self.vel[j.a].w += j.ia * d;
                self.vel[j.b].w -= j.ib * d;
            }

            let (va, vb) = (self.vel[j.a], self.vel[j.b]);
            let cdot = vb.v + cross_sv(vb.w, j.rb) - va.v - cross_sv(va.w, j.ra) + j.bias;
            let p = -Vec2::new(
                j.k_inv[0] * cdot.x + j.k_inv[1] * cdot.y,
                j.k_inv[2] * cdot.x + j.k_inv[3] * cdot.y,
            );
            j.impulse += p;
            let va = &mut self.vel[j.a];
            va.v -= p * j.ma;
            va.w -= j.ia * cross(j.ra, p);
            let vb = &mut self.vel[j.b];
            vb.v += p * j.mb;
            vb.w += j.ib * cross(j.rb, p);
        }
    }

    fn solve_contacts(&mut self, friction: f64) {
        for c in self.contacts.iter_mut() {
            let vel = &mut self.vel[c.link];

            let vp = vel.v + cross_sv(vel.w, c.r);
            let vt = vp.dot(&c.tangent);
            let bound = friction * c.normal_impulse;
            let old = c.tangent_impulse;
            c.tangent_impulse = (old - c.tangent_mass * vt).clamp(-bound, bound);
            let dt_imp = c.tangent_impulse - old;
            apply_contact(vel, c, c.tangent * dt_imp);

            let vp = vel.v + cross_sv(vel.w, c.r);
            let vn = vp.dot(&c.normal);
            let old = c.normal_impulse;
            c.normal_impulse = (old - c.normal_mass * (vn + c.bias)).max(0.0);
            let dn = c.normal_impulse - old;
            apply_contact(vel, c, c.normal * dn);
        }
    }

    /// The normal solve can shrink an impulse after friction was clamped to
    /// it; pull any such tangent impulse back onto the cone.
    fn project_friction(&mut self, friction: f64) {
        for c in self.contacts.iter_mut() {
            let bound = friction * c.normal_impulse;
            let clamped = c.tangent_impulse.clamp(-bound, bound);
            if clamped != c.tangent_impulse {
                let d = clamped - c.tangent_impulse;
                c.tangent_impulse = clamped;
                apply_contact(&mut self.vel[c.link], c, c.tangent * d);
            }
        }
    }
}

#[inline]
fn apply_contact(vel: &mut Vel, c: &ContactRow, p: Vec2) {
    vel.v += p * c.inv_mass;
    vel.w += c.inv_inertia * cross(c.r, p);
}
