//! Seeded terrain generation.
//!
//! Layout: a flat apron at height 0 runs from `x_start` to
//! `max(0, x_start + 5)`; the remaining length is filled by repeating
//!
//! 1. pick the obstacle kind (index draw, only when several are enabled),
//! 2. draw the spacing from that kind's `[SpacingMin, SpacingMax]`,
//! 3. emit that much ground (flat, or 0.5 m sloped segments, each segment
//!    drawing one slope perturbation in `±SlopeDeltaRange` that is clamped
//!    to `[SlopeDeltaMin, SlopeDeltaMax]`),
//! 4. draw the obstacle dimensions (gaps and walls: width, then depth/height;
//!    steps: level change, alternating up (`StepH0`) and down (`StepH1`)
//!    starting with up) and emit it if it fits before `x_end`.
//!
//! The random stream is [`SimRng`] seeded with `seed`; the numbered order
//! above is the complete draw order, so profiles are bit-reproducible.

use super::params::{ObstacleKind, TerrainParams, TerrainType};
use super::profile::{FeatureAnnotation, FeatureKind, TerrainProfile, Vertex};
use crate::rng::SimRng;

/// Minimum flat run before the first obstacle.
pub const APRON_LENGTH: f64 = 5.0;
/// Horizontal resolution of sloped ground.
pub const SLOPE_SEGMENT: f64 = 0.5;
/// Horizontal run of the near-vertical faces of gaps, walls and steps.
pub const RISER_RUN: f64 = 0.005;

const EPS: f64 = 1e-9;

struct Builder {
    vertices: Vec<Vertex>,
    features: Vec<FeatureAnnotation>,
    x: f64,
    level: f64,
    slope: f64,
}

impl Builder {
    fn push(&mut self, x: f64, y: f64) {
        self.vertices.push(Vertex { x, y });
        self.x = x;
    }

    fn annotate(&mut self, kind: FeatureKind, start_x: f64, width: f64, magnitude: f64) {
        self.features.push(FeatureAnnotation {
            kind,
            start_x,
            width,
            magnitude,
        });
    }

    fn flat_ground(&mut self, length: f64) {
        let start = self.x;
        let end = start + length;
        self.push(end, self.level);
        self.annotate(FeatureKind::Flat, start, length, 0.0);
    }

    fn sloped_ground(&mut self, length: f64, params: &TerrainParams, rng: &mut SimRng) {
        let slope = params.slope.expect("slope group");
        let delta = slope.delta_range.unwrap_or(0.0);
        let end = self.x + length;
        while end - self.x > EPS {
            let start = self.x;
            let seg = SLOPE_SEGMENT.min(end - start);
            let perturbed = self.slope + rng.uniform(-delta, delta);
            self.slope = perturbed.clamp(slope.bounds.min, slope.bounds.max);
            self.level += self.slope * seg;
            let x = if end - (start + seg) <= EPS { end } else { start + seg };
            self.push(x, self.level);
            self.annotate(FeatureKind::SlopeChange, start, x - start, self.slope);
        }
    }

    fn ground(&mut self, length: f64, params: &TerrainParams, rng: &mut SimRng) {
        if length <= EPS {
            return;
        }
        if params.terrain_type.slope_walk() {
            self.sloped_ground(length, params, rng);
        } else {
            self.flat_ground(length);
        }
    }

    /// Gap or wall: a horizontal plateau offset by `offset` with steep faces.
    fn plateau(&mut self, kind: FeatureKind, width: f64, offset: f64) {
        let start = self.x;
        let run = RISER_RUN.min(width / 4.0);
        let y = self.level + offset;
        self.push(start + run, y);
        self.push(start + width - run, y);
        self.push(start + width, self.level);
        self.annotate(kind, start, width, offset);
    }

    fn step(&mut self, delta: f64) {
        let start = self.x;
        self.level += delta;
        self.push(start + RISER_RUN, self.level);
        self.annotate(FeatureKind::Step, start, RISER_RUN, delta);
    }
}

/// Generates the terrain profile over `[x_start, x_end]`.
///
/// # Panics
/// If `x_start >= x_end`.
pub fn generate_terrain(params: &TerrainParams, seed: u64, x_start: f64, x_end: f64) -> TerrainProfile {
    assert!(x_start < x_end, "x_start must be below x_end");
    if params.terrain_type == TerrainType::Flat {
        return TerrainProfile::flat(x_start, x_end, 0.0);
    }
    let mut rng = SimRng::new(seed);
    let mut b = Builder {
        vertices: vec![Vertex { x: x_start, y: 0.0 }],
        features: Vec::new(),
        x: x_start,
        level: 0.0,
        slope: 0.0,
    };
    let apron_end = (x_start + APRON_LENGTH).max(0.0).min(x_end);
    b.flat_ground(apron_end - x_start);

    if params.terrain_type == TerrainType::Incline {
        let slope = params.slope.expect("incline requires slope bounds");
        let grade = rng.uniform(slope.bounds.min, slope.bounds.max);
        let start = b.x;
        while x_end - b.x > EPS {
            let seg = SLOPE_SEGMENT.min(x_end - b.x);
            b.level += grade * seg;
            let x = if x_end - (b.x + seg) <= EPS { x_end } else { b.x + seg };
            b.push(x, b.level);
        }
        if b.x > start {
            b.annotate(FeatureKind::SlopeChange, start, b.x - start, grade);
        }
        return finish(b);
    }

    let kinds = params.obstacle_kinds();
    if kinds.is_empty() {
        let rest = x_end - b.x;
        b.ground(rest, params, &mut rng);
        return finish(b);
    }

    let mut step_up = true;
    while x_end - b.x > EPS {
        let kind = if kinds.len() > 1 {
            kinds[rng.index(kinds.len())]
        } else {
            kinds[0]
        };
        let spacing = params.spacing(kind);
        let run = rng.uniform(spacing.min, spacing.max);
        if b.x + run >= x_end {
            let rest = x_end - b.x;
            b.ground(rest, params, &mut rng);
            break;
        }
        b.ground(run, params, &mut rng);
        match kind {
            ObstacleKind::Gap => {
                let g = params.gaps.unwrap();
                let width = rng.uniform(g.width.min, g.width.max);
                let depth = rng.uniform(g.depth.min, g.depth.max);
                if b.x + width >= x_end {
                    break;
                }
                b.plateau(FeatureKind::Gap, width, depth);
            }
            ObstacleKind::Wall => {
                let w = params.walls.unwrap();
                let width = rng.uniform(w.width.min, w.width.max);
                let height = rng.uniform(w.height.min, w.height.max);
                if b.x + width >= x_end {
                    break;
                }
                b.plateau(FeatureKind::Wall, width, height);
            }
            ObstacleKind::Step => {
                let s = params.steps.unwrap();
                let range = if step_up { s.rise } else { s.drop };
                let delta = rng.uniform(range.min, range.max);
                if b.x + RISER_RUN >= x_end {
                    break;
                }
                step_up = !step_up;
                b.step(delta);
            }
        }
    }
    finish_to(b, x_end)
}

fn finish_to(mut b: Builder, x_end: f64) -> TerrainProfile {
    if x_end - b.x > EPS {
        let start = b.x;
        let level = b.level;
        b.push(x_end, level);
        b.annotate(FeatureKind::Flat, start, x_end - start, 0.0);
    }
    finish(b)
}

fn finish(b: Builder) -> TerrainProfile {
    TerrainProfile::new(b.vertices, b.features).expect("generator emits a valid profile")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terrain::{parse_terrain_params, FeatureKind};

    fn slopes_mixed() -> TerrainParams {
        parse_terrain_params(include_str!("../../assets/terrain/slopes-mixed.json")).unwrap()
    }

    #[test]
    fn flat_two_vertices() {
        let p = generate_terrain(&TerrainParams::flat(), 42, -10.0, 100.0);
        assert_eq!(p.vertices().len(), 2);
        assert!(p.vertices().iter().all(|v| v.y == 0.0));
        assert_eq!(p.features().len(), 1);
        assert_eq!(p.features()[0].kind, FeatureKind::Flat);
    }

    #[test]
    fn surface_stays_within_height_range() {
        for name in crate::terrain::preset_names() {
            let params = crate::terrain::preset(name).unwrap();
            let range = params.height_range(-10.0, 150.0);
            for seed in 0..40 {
                let p = generate_terrain(&params, seed, -10.0, 150.0);
                for v in p.vertices() {
                    assert!(range.contains(v.y), "{name} seed {seed}: y {} outside {range:?}", v.y);
                }
            }
        }
    }

    #[test]
    fn deterministic() {
        let a = generate_terrain(&slopes_mixed(), 1234, -10.0, 100.0);
        let b = generate_terrain(&slopes_mixed(), 1234, -10.0, 100.0);
        assert_eq!(a, b);
        let c = generate_terrain(&slopes_mixed(), 1235, -10.0, 100.0);
        assert_ne!(a.vertices(), c.vertices());
    }

    #[test]
    fn slopes_mixed_bounds_seed_1234() {
        let p = generate_terrain(&slopes_mixed(), 1234, -10.0, 200.0);
        let mut saw_gap = false;
        for f in p.features() {
            match f.kind {
                FeatureKind::Gap => {
                    saw_gap = true;
                    assert!((0.3..=0.5).contains(&f.width));
                    assert_eq!(f.magnitude, -2.0);
                }
                FeatureKind::Wall => assert!((0.25..=0.4).contains(&f.magnitude)),
                FeatureKind::SlopeChange => assert!((-0.5..=0.5).contains(&f.magnitude)),
                _ => {}
            }
        }
        assert!(saw_gap);
    }

    #[test]
    fn apron_is_flat_and_spans_five_metres() {
        for seed in 0..50 {
            let p = generate_terrain(&slopes_mixed(), seed, -10.0, 60.0);
            let first = p.features()[0];
            assert_eq!(first.kind, FeatureKind::Flat);
            assert!(first.width >= APRON_LENGTH);
            for i in 0..=100 {
                assert_eq!(p.height_at(-10.0 + 0.1 * i as f64), 0.0);
            }
        }
        let p = generate_terrain(&slopes_mixed(), 3, 0.0, 30.0);
        assert!(p.features()[0].width >= APRON_LENGTH);
    }

    #[test]
    fn ends_exactly_at_x_end() {
        for seed in 0..20 {
            for t in [
                TerrainType::Incline,
                TerrainType::Slopes,
                TerrainType::Steps,
                TerrainType::Gaps,
            ] {
                let params = crate::terrain::preset(t.name()).unwrap();
                let p = generate_terrain(&params, seed, -10.0, 37.3);
                assert_eq!(p.x_range(), (-10.0, 37.3));
            }
        }
    }

    #[test]
    fn steps_alternate_up_first() {
        let params = crate::terrain::preset("steps").unwrap();
        let p = generate_terrain(&params, 9, -10.0, 100.0);
        let steps: Vec<_> = p.features().iter().filter(|f| f.kind == FeatureKind::Step).collect();
        assert!(steps.len() > 4);
        for (i, s) in steps.iter().enumerate() {
            if i % 2 == 0 {
                assert!(s.magnitude > 0.0);
            } else {
                assert!(s.magnitude < 0.0);
            }
        }
    }

    #[test]
    fn height_matches_scan_on_generated_profile() {
        let p = generate_terrain(&slopes_mixed(), 77, -10.0, 120.0);
        let v = p.vertices();
        let mut rng = SimRng::new(5);
        for _ in 0..1000 {
            let x = rng.uniform(-15.0, 125.0);
            let scan = if x <= v[0].x {
                v[0].y
            } else if x >= v[v.len() - 1].x {
                v[v.len() - 1].y
            } else {
                let w = v.windows(2).find(|w| x >= w[0].x && x < w[1].x).unwrap();
                w[0].y + (w[1].y - w[0].y) * (x - w[0].x) / (w[1].x - w[0].x)
            };
            assert_eq!(p.height_at(x).to_bits(), scan.to_bits());
        }
    }
}
