use std::collections::BTreeMap;

use serde::Serialize;

use super::params::{Bounds, TerrainParams};
use super::profile::{FeatureKind, TerrainProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KindStats {
    pub count: usize,
    /// `None` when `count == 0`.
    pub width: Option<Summary>,
    pub magnitude: Option<Summary>,
}

/// Per-kind aggregates of a profile's (or a batch of profiles') annotations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TerrainStats {
    pub kinds: BTreeMap<FeatureKind, KindStats>,
}

#[derive(Default, Clone, Copy)]
struct Acc {
    count: usize,
    w_sum: f64,
    w_min: f64,
    w_max: f64,
    m_sum: f64,
    m_min: f64,
    m_max: f64,
}

impl Acc {
    fn add(&mut self, w: f64, m: f64) {
        if self.count == 0 {
            self.w_min = w;
            self.w_max = w;
            self.m_min = m;
            self.m_max = m;
        } else {
            self.w_min = self.w_min.min(w);
            self.w_max = self.w_max.max(w);
            self.m_min = self.m_min.min(m);
            self.m_max = self.m_max.max(m);
        }
        self.count += 1;
        self.w_sum += w;
        self.m_sum += m;
    }

    fn finish(&self) -> KindStats {
        if self.count == 0 {
            return KindStats {
                count: 0,
                width: None,
                magnitude: None,
            };
        }
        let n = self.count as f64;
        KindStats {
            count: self.count,
            width: Some(Summary {
                min: self.w_min,
                mean: self.w_sum / n,
                max: self.w_max,
            }),
            magnitude: Some(Summary {
                min: self.m_min,
                mean: self.m_sum / n,
                max: self.m_max,
            }),
        }
    }
}

pub fn terrain_stats(profile: &TerrainProfile) -> TerrainStats {
    batch_stats(std::iter::once(profile))
}

pub fn batch_stats<'a>(profiles: impl IntoIterator<Item = &'a TerrainProfile>) -> TerrainStats {
    let mut acc: BTreeMap<FeatureKind, Acc> =
        FeatureKind::ALL.iter().map(|k| (*k, Acc::default())).collect();
    for p in profiles {
        for f in p.features() {
            acc.get_mut(&f.kind).unwrap().add(f.width, f.magnitude);
        }
    }
    TerrainStats {
        kinds: acc.into_iter().map(|(k, a)| (k, a.finish())).collect(),
    }
}

impl TerrainStats {
    pub fn count(&self, kind: FeatureKind) -> usize {
        self.kinds.get(&kind).map_or(0, |s| s.count)
    }

    pub fn get(&self, kind: FeatureKind) -> &KindStats {
        &self.kinds[&kind]
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "kind",
            "count",
            "width_min",
            "width_mean",
            "width_max",
            "magnitude_min",
            "magnitude_mean",
            "magnitude_max",
        ])?;
        for (kind, s) in &self.kinds {
            let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            w.write_record([
                kind.name().to_string(),
                s.count.to_string(),
                cell(s.width.map(|x| x.min)),
                cell(s.width.map(|x| x.mean)),
                cell(s.width.map(|x| x.max)),
                cell(s.magnitude.map(|x| x.min)),
                cell(s.magnitude.map(|x| x.mean)),
                cell(s.magnitude.map(|x| x.max)),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// One annotation (or profile property) outside its generating parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub what: String,
    pub x: f64,
    pub value: f64,
}

/// Checks every generated annotation against the ranges that produced it,
/// plus the structural profile invariants (apron, ordering, overlap).
pub fn check_compliance(params: &TerrainParams, profile: &TerrainProfile) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut bad = |what: &str, x: f64, value: f64| {
        out.push(Violation {
            what: what.to_string(),
            x,
            value,
        })
    };
    let within = |b: Bounds, v: f64| b.contains(v);

    let v = profile.vertices();
    for w in v.windows(2) {
        if !(w[1].x > w[0].x) {
            bad("vertex x not increasing", w[1].x, w[1].x - w[0].x);
        }
    }
    for w in profile.features().windows(2) {
        if w[1].start_x < w[0].end_x() - 1e-9 {
            bad("overlapping annotations", w[1].start_x, w[0].end_x() - w[1].start_x);
        }
    }
    let (x0, _) = profile.x_range();
    for vert in v.iter().take_while(|p| p.x <= 0.0) {
        if vert.y != 0.0 {
            bad("apron not flat", vert.x, vert.y);
        }
    }
    if x0 < 0.0 && profile.height_at(0.0) != 0.0 {
        bad("apron not flat", 0.0, profile.height_at(0.0));
    }

    for f in profile.features() {
        match f.kind {
            FeatureKind::Gap => match &params.gaps {
                Some(g) => {
                    if !within(g.width, f.width) {
                        bad("gap width", f.start_x, f.width);
                    }
                    if !within(g.depth, f.magnitude) {
                        bad("gap depth", f.start_x, f.magnitude);
                    }
                }
                None => bad("unexpected gap", f.start_x, f.magnitude),
            },
            FeatureKind::Wall => match &params.walls {
                Some(w) => {
                    if !within(w.width, f.width) {
                        bad("wall width", f.start_x, f.width);
                    }
                    if !within(w.height, f.magnitude) {
                        bad("wall height", f.start_x, f.magnitude);
                    }
                }
                None => bad("unexpected wall", f.start_x, f.magnitude),
            },
            FeatureKind::Step => match &params.steps {
                Some(s) => {
                    if !within(s.rise, f.magnitude) && !within(s.drop, f.magnitude) {
                        bad("step height", f.start_x, f.magnitude);
                    }
                }
                None => bad("unexpected step", f.start_x, f.magnitude),
            },
            FeatureKind::SlopeChange => match &params.slope {
                Some(s) => {
                    if !within(s.bounds, f.magnitude) {
                        bad("slope", f.start_x, f.magnitude);
                    }
                }
                None => bad("unexpected slope", f.start_x, f.magnitude),
            },
            FeatureKind::Flat => {}
        }
    }
    out
}
