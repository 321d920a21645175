use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use super::TerrainError;

/// Clamp range of egocentric terrain samples, in metres.
pub const WINDOW_CLAMP: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureKind {
    Gap,
    Wall,
    Step,
    SlopeChange,
    Flat,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 5] = [
        FeatureKind::Gap,
        FeatureKind::Wall,
        FeatureKind::Step,
        FeatureKind::SlopeChange,
        FeatureKind::Flat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FeatureKind::Gap => "gap",
            FeatureKind::Wall => "wall",
            FeatureKind::Step => "step",
            FeatureKind::SlopeChange => "slope-change",
            FeatureKind::Flat => "flat",
        }
    }
}

/// Generator metadata for one stretch of the profile.
///
/// `magnitude` is the gap depth, wall height, step level change or new
/// ground slope; flat stretches carry 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureAnnotation {
    pub kind: FeatureKind,
    pub start_x: f64,
    pub width: f64,
    pub magnitude: f64,
}

impl FeatureAnnotation {
    pub fn end_x(&self) -> f64 {
        self.start_x + self.width
    }
}

/// Result of probing a point against the terrain surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceProbe {
    /// Penetration depth along `normal`; negative means separated by that much.
    pub depth: f64,
    /// Unit outward surface normal.
    pub normal: Vector2<f64>,
}

/// Piecewise-linear heightfield with feature annotations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerrainProfile {
    vertices: Vec<Vertex>,
    features: Vec<FeatureAnnotation>,
}

impl TerrainProfile {
    pub fn new(
        vertices: Vec<Vertex>,
        features: Vec<FeatureAnnotation>,
    ) -> Result<Self, TerrainError> {
        if vertices.len() < 2 {
            return Err(TerrainError::Profile("at least two vertices required".into()));
        }
        if let Some(w) = vertices.windows(2).position(|w| !(w[1].x > w[0].x)) {
            return Err(TerrainError::Profile(format!(
                "vertex x must increase strictly (index {})",
                w + 1
            )));
        }
        if vertices.iter().any(|v| !v.x.is_finite() || !v.y.is_finite()) {
            return Err(TerrainError::Profile("non-finite vertex".into()));
        }
        for pair in features.windows(2) {
            if pair[1].start_x < pair[0].start_x {
                return Err(TerrainError::Profile("features out of order".into()));
            }
            if pair[1].start_x < pair[0].end_x() - 1e-9 {
                return Err(TerrainError::Profile("features overlap".into()));
            }
        }
        if features.iter().any(|f| f.width < 0.0) {
            return Err(TerrainError::Profile("negative feature width".into()));
        }
        Ok(Self { vertices, features })
    }

    pub fn flat(x_start: f64, x_end: f64, height: f64) -> Self {
        Self {
            vertices: vec![Vertex { x: x_start, y: height }, Vertex { x: x_end, y: height }],
            features: vec![FeatureAnnotation {
                kind: FeatureKind::Flat,
                start_x: x_start,
                width: x_end - x_start,
                magnitude: 0.0,
            }],
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn features(&self) -> &[FeatureAnnotation] {
        &self.features
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.vertices[0].x, self.vertices[self.vertices.len() - 1].x)
    }

    /// Index `i` of the segment `[v[i], v[i+1]]` containing `x`, clamped to the ends.
    #[inline]
    fn segment_index(&self, x: f64) -> usize {
        let upper = self.vertices.partition_point(|v| v.x <= x);
        upper.clamp(1, self.vertices.len() - 1) - 1
    }

    /// Height by linear interpolation; clamps to endpoint heights outside the range.
    #[inline]
    pub fn height_at(&self, x: f64) -> f64 {
        let first = self.vertices[0];
        let last = self.vertices[self.vertices.len() - 1];
        if x <= first.x {
            return first.y;
        }
        if x >= last.x {
            return last.y;
        }
        let i = self.segment_index(x);
        lerp_segment(self.vertices[i], self.vertices[i + 1], x)
    }

    /// Unit upward normal of the surface at `x`.
    pub fn normal_at(&self, x: f64) -> Vector2<f64> {
        let (x0, x1) = self.x_range();
        if x <= x0 || x >= x1 {
            return Vector2::new(0.0, 1.0);
        }
        let i = self.segment_index(x);
        segment_normal(self.vertices[i], self.vertices[i + 1])
    }

    /// Contact query for a world point.
    ///
    /// Points more than `margin` above the surface return `None`. Points above
    /// but within `margin` report a negative depth along the local segment
    /// normal. Points below the surface report the distance to the closest
    /// point of the polyline, so a foot pushed into a wall face is resolved
    /// sideways rather than lifted onto the wall.
    pub fn probe(&self, p: Vector2<f64>, margin: f64) -> Option<SurfaceProbe> {
        let h = self.height_at(p.x);
        let above = p.y - h;
        if above > margin {
            return None;
        }
        let (x0, x1) = self.x_range();
        if p.x <= x0 || p.x >= x1 {
            return Some(SurfaceProbe {
                depth: -above,
                normal: Vector2::new(0.0, 1.0),
            });
        }
        let i = self.segment_index(p.x);
        if above >= 0.0 {
            let a = self.vertices[i];
            let n = segment_normal(a, self.vertices[i + 1]);
            let dist = (p.x - a.x) * n.x + (p.y - a.y) * n.y;
            return Some(SurfaceProbe {
                depth: -dist.max(0.0),
                normal: n,
            });
        }

        // Inside: the vertical depth bounds the distance to the surface, so
        // only segments overlapping [x - d, x + d] can be closer.
        let d = -above;
        let lo = p.x - d;
        let hi = p.x + d;
        let first = self.vertices.partition_point(|v| v.x < lo).saturating_sub(1);
        let last = self.vertices.partition_point(|v| v.x <= hi).min(self.vertices.len() - 1);
        let mut best = d * d;
        let mut best_point = Vector2::new(p.x, h);
        let mut best_seg = i;
        for s in first..last {
            let a = self.vertices[s];
            let b = self.vertices[s + 1];
            let c = closest_on_segment(a, b, p);
            let dist2 = (c - p).norm_squared();
            if dist2 < best {
                best = dist2;
                best_point = c;
                best_seg = s;
            }
        }
        let dist = best.sqrt();
        let normal = if dist > 1e-12 {
            (best_point - p) / dist
        } else {
            segment_normal(self.vertices[best_seg], self.vertices[best_seg + 1])
        };
        Some(SurfaceProbe { depth: dist, normal })
    }
}

#[inline]
fn lerp_segment(a: Vertex, b: Vertex, x: f64) -> f64 {
    a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)
}

#[inline]
fn segment_normal(a: Vertex, b: Vertex) -> Vector2<f64> {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len = (dx * dx + dy * dy).sqrt();
    Vector2::new(-dy / len, dx / len)
}

#[inline]
fn closest_on_segment(a: Vertex, b: Vertex, p: Vector2<f64>) -> Vector2<f64> {
    let ab = Vector2::new(b.x - a.x, b.y - a.y);
    let ap = Vector2::new(p.x - a.x, p.y - a.y);
    let t = (ap.dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0);
    Vector2::new(a.x + ab.x * t, a.y + ab.y * t)
}

/// `n` egocentric height samples ahead of the root, `spacing` apart, each
/// `height_at(root_x + i * spacing) - root_y` clamped to `[-5, 5]`.
pub fn sample_terrain_window(
    profile: &TerrainProfile,
    root_x: f64,
    root_y: f64,
    n: usize,
    spacing: f64,
) -> Vec<f64> {
    let mut out = vec![0.0; n];
    sample_terrain_window_into(profile, root_x, root_y, spacing, &mut out);
    out
}

pub fn sample_terrain_window_into(
    profile: &TerrainProfile,
    root_x: f64,
    root_y: f64,
    spacing: f64,
    out: &mut [f64],
) {
    for (i, slot) in out.iter_mut().enumerate() {
        let h = profile.height_at(root_x + i as f64 * spacing) - root_y;
        *slot = h.clamp(-WINDOW_CLAMP, WINDOW_CLAMP);
    }
}
