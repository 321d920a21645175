use std::fmt::Write;

use crate::character::CharacterModel;
use crate::physics2d::{SimState, Vec2};
use crate::terrain::{FeatureKind, TerrainProfile};

fn polyline(profile: &TerrainProfile, x0: f64, x1: f64) -> String {
    let v = profile.vertices();
    let mut pts = String::new();
    let mut push = |x: f64, y: f64| {
        let _ = write!(pts, "{x:.4},{y:.4} ");
    };
    push(x0, profile.height_at(x0));
    for p in v.iter().filter(|p| p.x > x0 && p.x < x1) {
        push(p.x, p.y);
    }
    push(x1, profile.height_at(x1));
    pts.trim_end().to_string()
}

fn open(out: &mut String, x0: f64, y0: f64, w: f64, h: f64, px_per_m: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="{x0:.4} {:.4} {w:.4} {h:.4}">"#,
        w * px_per_m,
        h * px_per_m,
        -(y0 + h),
    );
    let _ = writeln!(out, r#"<rect x="{x0:.4}" y="{:.4}" width="{w:.4}" height="{h:.4}" fill="white"/>"#, -(y0 + h));
    out.push_str("<g transform=\"scale(1,-1)\">\n");
}

fn marker_colour(kind: FeatureKind) -> Option<&'static str> {
    match kind {
        FeatureKind::Gap => Some("crimson"),
        FeatureKind::Wall => Some("darkorange"),
        FeatureKind::Step => Some("seagreen"),
        FeatureKind::SlopeChange | FeatureKind::Flat => None,
    }
}

/// The whole height profile with a marker under each gap, wall and step.
pub fn terrain_svg(profile: &TerrainProfile) -> String {
    let (x0, x1) = profile.x_range();
    let (lo, hi) = profile
        .vertices()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v.y), hi.max(v.y)));
    let (y0, h) = (lo - 1.0, (hi - lo) + 2.0);
    let mut out = String::new();
    open(&mut out, x0, y0, x1 - x0, h, 20.0);
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="black" stroke-width="0.05"/>"#,
        polyline(profile, x0, x1)
    );
    for f in profile.features() {
        if let Some(c) = marker_colour(f.kind) {
            let _ = writeln!(
                out,
                r#"<rect class="{}" x="{:.4}" y="{:.4}" width="{:.4}" height="0.15" fill="{c}"/>"#,
                f.kind.name(),
                f.start_x,
                y0 + 0.1,
                f.width.max(0.05)
            );
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// A 6 m wide frame centred on the root: terrain polyline and link boxes.
pub fn frame_svg(model: &CharacterModel, state: &SimState, terrain: &TerrainProfile, label: &str) -> String {
    let root = state.bodies[model.root_link].position;
    let ground = terrain.height_at(root.x);
    let (x0, w) = (root.x - 3.0, 6.0);
    let (y0, h) = (ground - 1.5, 4.0);
    let mut out = String::new();
    open(&mut out, x0, y0, w, h, 120.0);
    let mut ground_poly = polyline(terrain, x0, x0 + w);
    let _ = write!(ground_poly, " {:.4},{:.4} {x0:.4},{:.4}", x0 + w, y0, y0);
    let _ = writeln!(out, r#"<polygon points="{ground_poly}" fill="tan" stroke="saddlebrown" stroke-width="0.01"/>"#);
    for (link, body) in model.links().iter().zip(&state.bodies) {
        let hx = link.half_extents;
        let corners = [
            Vec2::new(-hx.x, -hx.y),
            Vec2::new(hx.x, -hx.y),
            Vec2::new(hx.x, hx.y),
            Vec2::new(-hx.x, hx.y),
        ];
        let mut pts = String::new();
        for c in corners {
            let p = body.world_point(c);
            let _ = write!(pts, "{:.4},{:.4} ", p.x, p.y);
        }
        let fill = if model.is_fall_link(link.id) { "steelblue" } else { "lightsteelblue" };
        let _ = writeln!(
            out,
            r#"<polygon class="link" points="{}" fill="{fill}" stroke="navy" stroke-width="0.008"/>"#,
            pts.trim_end()
        );
    }
    out.push_str("</g>\n");
    let _ = writeln!(
        out,
        r#"<text x="{:.4}" y="{:.4}" font-size="0.15" font-family="monospace">{label}</text>"#,
        x0 + 0.1,
        -(y0 + h) + 0.2
    );
    out.push_str("</svg>\n");
    out
}
