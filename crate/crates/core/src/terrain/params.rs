use serde_json::{Map, Value};

use super::generate::RISER_RUN;
use super::TerrainError;

/// Closed interval `[min, max]` read from a `<Name>Min` / `<Name>Max` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min: f64,
    pub max: f64,
}

impl Bounds {
    pub fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }

    pub fn span(&self) -> f64 {
        self.max - self.min
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapGroup {
    pub spacing: Bounds,
    pub width: Bounds,
    /// Gap floor relative to the surrounding ground (non-positive).
    pub depth: Bounds,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallGroup {
    pub spacing: Bounds,
    pub width: Bounds,
    pub height: Bounds,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepGroup {
    pub spacing: Bounds,
    /// `StepH0`: level change of upward steps.
    pub rise: Bounds,
    /// `StepH1`: level change of downward steps.
    pub drop: Bounds,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeGroup {
    /// `SlopeDeltaRange`: per-segment slope perturbation half-width.
    pub delta_range: Option<f64>,
    /// `SlopeDeltaMin` / `SlopeDeltaMax`: clamp bounds on the ground slope.
    pub bounds: Bounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TerrainType {
    Flat,
    Gaps,
    Walls,
    Steps,
    Slopes,
    Mixed,
    SlopesMixed,
    NarrowGaps,
    TightGaps,
    SlopesGaps,
    SlopesSteps,
    SlopesWalls,
    Incline,
    Cliffs,
}

impl TerrainType {
    pub const ALL: [TerrainType; 14] = [
        TerrainType::Flat,
        TerrainType::Gaps,
        TerrainType::Walls,
        TerrainType::Steps,
        TerrainType::Slopes,
        TerrainType::Mixed,
        TerrainType::SlopesMixed,
        TerrainType::NarrowGaps,
        TerrainType::TightGaps,
        TerrainType::SlopesGaps,
        TerrainType::SlopesSteps,
        TerrainType::SlopesWalls,
        TerrainType::Incline,
        TerrainType::Cliffs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TerrainType::Flat => "flat",
            TerrainType::Gaps => "gaps",
            TerrainType::Walls => "walls",
            TerrainType::Steps => "steps",
            TerrainType::Slopes => "slopes",
            TerrainType::Mixed => "mixed",
            TerrainType::SlopesMixed => "slopes-mixed",
            TerrainType::NarrowGaps => "narrow-gaps",
            TerrainType::TightGaps => "tight-gaps",
            TerrainType::SlopesGaps => "slopes-gaps",
            TerrainType::SlopesSteps => "slopes-steps",
            TerrainType::SlopesWalls => "slopes-walls",
            TerrainType::Incline => "incline",
            TerrainType::Cliffs => "cliffs",
        }
    }

    /// Accepts canonical names (`slopes-mixed`) as well as the
    /// `var2d_slopes_mixed` spelling used by original terrain files.
    pub fn parse(tag: &str) -> Option<Self> {
        let lower = tag.trim().to_ascii_lowercase();
        let stripped = lower.strip_prefix("var2d_").unwrap_or(&lower);
        let normalized = stripped.replace('_', "-");
        Self::ALL.into_iter().find(|t| t.name() == normalized)
    }

    /// Ground between features follows a slope random walk.
    pub fn slope_walk(self) -> bool {
        matches!(
            self,
            TerrainType::Slopes
                | TerrainType::SlopesMixed
                | TerrainType::SlopesGaps
                | TerrainType::SlopesSteps
                | TerrainType::SlopesWalls
        )
    }
}

impl std::fmt::Display for TerrainType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Parsed and validated terrain parameter file.
#[derive(Debug, Clone, PartialEq)]
pub struct TerrainParams {
    pub terrain_type: TerrainType,
    pub gaps: Option<GapGroup>,
    pub walls: Option<WallGroup>,
    pub steps: Option<StepGroup>,
    pub slope: Option<SlopeGroup>,
}

/// Field names exactly as they appear in terrain files.
pub const FIELD_NAMES: [&str; 21] = [
    "GapSpacingMin",
    "GapSpacingMax",
    "GapWMin",
    "GapWMax",
    "GapHMin",
    "GapHMax",
    "WallSpacingMin",
    "WallSpacingMax",
    "WallWMin",
    "WallWMax",
    "WallHMin",
    "WallHMax",
    "StepSpacingMin",
    "StepSpacingMax",
    "StepH0Min",
    "StepH0Max",
    "StepH1Min",
    "StepH1Max",
    "SlopeDeltaRange",
    "SlopeDeltaMin",
    "SlopeDeltaMax",
];

/// The obstacle kinds a terrain can place between stretches of ground.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstacleKind {
    Gap,
    Wall,
    Step,
}

impl TerrainParams {
    pub fn flat() -> Self {
        Self {
            terrain_type: TerrainType::Flat,
            gaps: None,
            walls: None,
            steps: None,
            slope: None,
        }
    }

    /// Obstacle kinds drawn by the generator, in draw-index order.
    pub fn obstacle_kinds(&self) -> Vec<ObstacleKind> {
        use TerrainType::*;
        let mut kinds = Vec::new();
        let gaps = matches!(
            self.terrain_type,
            Gaps | NarrowGaps | TightGaps | SlopesGaps | Mixed | SlopesMixed
        );
        let walls = matches!(self.terrain_type, Walls | SlopesWalls | Mixed | SlopesMixed);
        let steps = matches!(
            self.terrain_type,
            Steps | Cliffs | SlopesSteps | Mixed | SlopesMixed
        );
        if gaps && self.gaps.is_some() {
            kinds.push(ObstacleKind::Gap);
        }
        if walls && self.walls.is_some() {
            kinds.push(ObstacleKind::Wall);
        }
        if steps && self.steps.is_some() {
            kinds.push(ObstacleKind::Step);
        }
        kinds
    }

    /// Range the ground surface of any generated profile over
    /// `[x_start, x_end]` stays within, whatever the seed.
    pub fn height_range(&self, x_start: f64, x_end: f64) -> Bounds {
        let length = (x_end - x_start).max(0.0);
        let (mut lo, mut hi) = (0.0f64, 0.0f64);
        if let Some(s) = &self.slope {
            if self.terrain_type.slope_walk() || self.terrain_type == TerrainType::Incline {
                lo += s.bounds.min.min(0.0) * length;
                hi += s.bounds.max.max(0.0) * length;
            }
        }
        let kinds = self.obstacle_kinds();
        if let (true, Some(st)) = (kinds.contains(&ObstacleKind::Step), &self.steps) {
            let n = (length / (st.spacing.min + RISER_RUN)).floor() + 1.0;
            let (ups, downs) = ((n / 2.0).ceil(), (n / 2.0).floor());
            lo += ups * st.rise.min.min(0.0) + downs * st.drop.min.min(0.0);
            hi += ups * st.rise.max.max(0.0) + downs * st.drop.max.max(0.0);
        }
        if let (true, Some(g)) = (kinds.contains(&ObstacleKind::Gap), &self.gaps) {
            lo += g.depth.min.min(0.0);
        }
        if let (true, Some(w)) = (kinds.contains(&ObstacleKind::Wall), &self.walls) {
            hi += w.height.max.max(0.0);
        }
        Bounds::new(lo, hi)
    }

    pub fn spacing(&self, kind: ObstacleKind) -> Bounds {
        match kind {
            ObstacleKind::Gap => self.gaps.expect("gap group").spacing,
            ObstacleKind::Wall => self.walls.expect("wall group").spacing,
            ObstacleKind::Step => self.steps.expect("step group").spacing,
        }
    }

    /// Serializes back into the terrain-file document shape.
    pub fn to_document(&self) -> Value {
        let mut fields = Map::new();
        let mut put = |name: &str, v: f64| {
            fields.insert(name.to_string(), number(v));
        };
        if let Some(g) = &self.gaps {
            put("GapSpacingMin", g.spacing.min);
            put("GapSpacingMax", g.spacing.max);
            put("GapWMin", g.width.min);
            put("GapWMax", g.width.max);
            put("GapHMin", g.depth.min);
            put("GapHMax", g.depth.max);
        }
        if let Some(w) = &self.walls {
            put("WallSpacingMin", w.spacing.min);
            put("WallSpacingMax", w.spacing.max);
            put("WallWMin", w.width.min);
            put("WallWMax", w.width.max);
            put("WallHMin", w.height.min);
            put("WallHMax", w.height.max);
        }
        if let Some(s) = &self.steps {
            put("StepSpacingMin", s.spacing.min);
            put("StepSpacingMax", s.spacing.max);
            put("StepH0Min", s.rise.min);
            put("StepH0Max", s.rise.max);
            put("StepH1Min", s.drop.min);
            put("StepH1Max", s.drop.max);
        }
        if let Some(s) = &self.slope {
            if let Some(r) = s.delta_range {
                put("SlopeDeltaRange", r);
            }
            put("SlopeDeltaMin", s.bounds.min);
            put("SlopeDeltaMax", s.bounds.max);
        }
        let mut doc = Map::new();
        doc.insert("Type".into(), Value::String(self.terrain_type.name().into()));
        doc.insert("Params".into(), Value::Array(vec![Value::Object(fields)]));
        Value::Object(doc)
    }

    pub fn validate(&self) -> Result<(), TerrainError> {
        fn ordered(field: &'static str, b: Bounds) -> Result<(), TerrainError> {
            if b.min > b.max {
                return Err(TerrainError::InvertedBounds {
                    field,
                    min: b.min,
                    max: b.max,
                });
            }
            Ok(())
        }
        fn require(ok: bool, field: &'static str, reason: &'static str) -> Result<(), TerrainError> {
            if ok {
                Ok(())
            } else {
                Err(TerrainError::InvalidValue { field, reason })
            }
        }
        if let Some(g) = &self.gaps {
            ordered("GapSpacing", g.spacing)?;
            ordered("GapW", g.width)?;
            ordered("GapH", g.depth)?;
            require(g.spacing.min > 0.0, "GapSpacingMin", "must be positive")?;
            require(g.width.min > 0.0, "GapWMin", "must be positive")?;
            require(g.depth.max <= 0.0, "GapHMax", "gap depths must be <= 0")?;
        }
        if let Some(w) = &self.walls {
            ordered("WallSpacing", w.spacing)?;
            ordered("WallW", w.width)?;
            ordered("WallH", w.height)?;
            require(w.spacing.min > 0.0, "WallSpacingMin", "must be positive")?;
            require(w.width.min > 0.0, "WallWMin", "must be positive")?;
            require(w.height.min >= 0.0, "WallHMin", "wall heights must be >= 0")?;
        }
        if let Some(s) = &self.steps {
            ordered("StepSpacing", s.spacing)?;
            ordered("StepH0", s.rise)?;
            ordered("StepH1", s.drop)?;
            require(s.spacing.min > 0.0, "StepSpacingMin", "must be positive")?;
        }
        if let Some(s) = &self.slope {
            ordered("SlopeDelta", s.bounds)?;
            if let Some(r) = s.delta_range {
                require(r >= 0.0, "SlopeDeltaRange", "must be >= 0")?;
            }
        }
        self.check_required_groups()
    }

    fn check_required_groups(&self) -> Result<(), TerrainError> {
        use TerrainType::*;
        let ty = self.terrain_type;
        let missing = |group: &'static str| TerrainError::MissingGroup { ty, group };
        let need_walk = || match self.slope {
            Some(SlopeGroup {
                delta_range: Some(_),
                ..
            }) => Ok(()),
            Some(_) => Err(TerrainError::IncompleteGroup {
                group: "SlopeDelta",
                missing: "SlopeDeltaRange",
            }),
            None => Err(missing("SlopeDelta")),
        };
        match ty {
            Flat => {}
            Gaps | NarrowGaps | TightGaps => {
                self.gaps.ok_or(missing("Gap"))?;
            }
            Walls => {
                self.walls.ok_or(missing("Wall"))?;
            }
            Steps | Cliffs => {
                self.steps.ok_or(missing("Step"))?;
            }
            Slopes => need_walk()?,
            Incline => {
                self.slope.ok_or(missing("SlopeDelta"))?;
            }
            Mixed => {
                if self.obstacle_kinds().is_empty() {
                    return Err(missing("Gap, Wall or Step"));
                }
            }
            SlopesMixed => {
                if self.obstacle_kinds().is_empty() {
                    return Err(missing("Gap, Wall or Step"));
                }
                need_walk()?;
            }
            SlopesGaps => {
                self.gaps.ok_or(missing("Gap"))?;
                need_walk()?;
            }
            SlopesSteps => {
                self.steps.ok_or(missing("Step"))?;
                need_walk()?;
            }
            SlopesWalls => {
                self.walls.ok_or(missing("Wall"))?;
                need_walk()?;
            }
        }
        Ok(())
    }
}

fn number(v: f64) -> Value {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        Value::from(v as i64)
    } else {
        Value::from(v)
    }
}

/// Parses a terrain parameter document (`{"Type": ..., "Params": [{...}]}`).
pub fn parse_terrain_params(text: &str) -> Result<TerrainParams, TerrainError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| TerrainError::Malformed(e.to_string()))?;
    params_from_value(&doc)
}

pub fn params_from_value(doc: &Value) -> Result<TerrainParams, TerrainError> {
    let obj = doc
        .as_object()
        .ok_or_else(|| TerrainError::Malformed("document must be an object".into()))?;
    for key in obj.keys() {
        if key != "Type" && key != "Params" {
            return Err(TerrainError::UnknownField(key.clone()));
        }
    }
    let tag = obj
        .get("Type")
        .and_then(Value::as_str)
        .ok_or_else(|| TerrainError::Malformed("missing string field \"Type\"".into()))?;
    let terrain_type =
        TerrainType::parse(tag).ok_or_else(|| TerrainError::UnknownType(tag.to_string()))?;

    let empty = Map::new();
    let fields = match obj.get("Params") {
        None => &empty,
        Some(Value::Array(items)) => match items.as_slice() {
            [] => &empty,
            [Value::Object(m)] => m,
            [_] => return Err(TerrainError::Malformed("Params entry must be an object".into())),
            many => return Err(TerrainError::ParamsCount(many.len())),
        },
        Some(_) => return Err(TerrainError::Malformed("\"Params\" must be an array".into())),
    };

    let mut values: [Option<f64>; 21] = [None; 21];
    for (key, value) in fields {
        let idx = FIELD_NAMES
            .iter()
            .position(|f| f == key)
            .ok_or_else(|| TerrainError::UnknownField(key.clone()))?;
        let field = FIELD_NAMES[idx];
        let v = value.as_f64().ok_or(TerrainError::InvalidValue {
            field,
            reason: "must be a number",
        })?;
        if !v.is_finite() {
            return Err(TerrainError::InvalidValue {
                field,
                reason: "must be finite",
            });
        }
        values[idx] = Some(v);
    }

    let get = |name: &str| values[FIELD_NAMES.iter().position(|f| *f == name).unwrap()];
    let group = |group: &'static str, names: &[&'static str]| -> Result<Option<Vec<f64>>, TerrainError> {
        let vals: Vec<Option<f64>> = names.iter().map(|n| get(n)).collect();
        if vals.iter().all(Option::is_none) {
            return Ok(None);
        }
        if let Some(i) = vals.iter().position(Option::is_none) {
            return Err(TerrainError::IncompleteGroup {
                group,
                missing: names[i],
            });
        }
        Ok(Some(vals.into_iter().map(Option::unwrap).collect()))
    };

    let gaps = group(
        "Gap",
        &["GapSpacingMin", "GapSpacingMax", "GapWMin", "GapWMax", "GapHMin", "GapHMax"],
    )?
    .map(|v| GapGroup {
        spacing: Bounds::new(v[0], v[1]),
        width: Bounds::new(v[2], v[3]),
        depth: Bounds::new(v[4], v[5]),
    });
    let walls = group(
        "Wall",
        &["WallSpacingMin", "WallSpacingMax", "WallWMin", "WallWMax", "WallHMin", "WallHMax"],
    )?
    .map(|v| WallGroup {
        spacing: Bounds::new(v[0], v[1]),
        width: Bounds::new(v[2], v[3]),
        height: Bounds::new(v[4], v[5]),
    });
    let steps = group(
        "Step",
        &["StepSpacingMin", "StepSpacingMax", "StepH0Min", "StepH0Max", "StepH1Min", "StepH1Max"],
    )?
    .map(|v| StepGroup {
        spacing: Bounds::new(v[0], v[1]),
        rise: Bounds::new(v[2], v[3]),
        drop: Bounds::new(v[4], v[5]),
    });
    let slope = match group("SlopeDelta", &["SlopeDeltaMin", "SlopeDeltaMax"])? {
        Some(v) => Some(SlopeGroup {
            delta_range: get("SlopeDeltaRange"),
            bounds: Bounds::new(v[0], v[1]),
        }),
        None if get("SlopeDeltaRange").is_some() => {
            return Err(TerrainError::IncompleteGroup {
                group: "SlopeDelta",
                missing: "SlopeDeltaMin",
            })
        }
        None => None,
    };

    let params = TerrainParams {
        terrain_type,
        gaps,
        walls,
        steps,
        slope,
    };
    params.validate()?;
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SLOPES_MIXED: &str = include_str!("../../assets/terrain/slopes-mixed.json");

    #[test]
    fn reference_file_fields() {
        let p = parse_terrain_params(SLOPES_MIXED).unwrap();
        assert_eq!(p.terrain_type, TerrainType::SlopesMixed);
        let g = p.gaps.unwrap();
        assert_eq!(g.width, Bounds::new(0.3, 0.5));
        assert_eq!(g.depth, Bounds::new(-2.0, -2.0));
        assert_eq!(g.spacing, Bounds::new(3.0, 4.0));
        assert_eq!(p.walls.unwrap().height.max, 0.4);
        assert_eq!(p.walls.unwrap().width, Bounds::new(0.2, 0.2));
        assert_eq!(p.steps.unwrap().rise, Bounds::new(0.1, 0.3));
        assert_eq!(p.steps.unwrap().drop, Bounds::new(-0.3, -0.1));
        let s = p.slope.unwrap();
        assert_eq!(s.delta_range, Some(0.05));
        assert_eq!(s.bounds, Bounds::new(-0.5, 0.5));
        assert_eq!(
            p.obstacle_kinds(),
            vec![ObstacleKind::Gap, ObstacleKind::Wall, ObstacleKind::Step]
        );
    }

    #[test]
    fn flat_without_fields() {
        let p = parse_terrain_params(r#"{"Type": "flat", "Params": [{}]}"#).unwrap();
        assert_eq!(p, TerrainParams::flat());
        let p = parse_terrain_params(r#"{"Type": "flat"}"#).unwrap();
        assert_eq!(p, TerrainParams::flat());
    }

    #[test]
    fn inverted_bounds_name_the_field() {
        let text = r#"{"Type": "gaps", "Params": [{"GapSpacingMin": 3, "GapSpacingMax": 4,
            "GapWMin": 0.5, "GapWMax": 0.3, "GapHMin": -2, "GapHMax": -2}]}"#;
        let err = parse_terrain_params(text).unwrap_err();
        assert!(matches!(err, TerrainError::InvertedBounds { field: "GapW", .. }));
        assert!(err.to_string().contains("GapW"));
    }

    #[test]
    fn unknown_field_rejected() {
        let text = r#"{"Type": "flat", "Params": [{"GapDepth": 1}]}"#;
        match parse_terrain_params(text) {
            Err(TerrainError::UnknownField(f)) => assert_eq!(f, "GapDepth"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_type_rejected() {
        let err = parse_terrain_params(r#"{"Type": "lava", "Params": [{}]}"#).unwrap_err();
        assert!(matches!(err, TerrainError::UnknownType(_)));
    }

    #[test]
    fn malformed_rejected() {
        assert!(matches!(
            parse_terrain_params("{\"Type\": "),
            Err(TerrainError::Malformed(_))
        ));
        assert!(matches!(
            parse_terrain_params(r#"{"Params": []}"#),
            Err(TerrainError::Malformed(_))
        ));
    }

    #[test]
    fn partial_group_names_missing_field() {
        let text = r#"{"Type": "walls", "Params": [{"WallSpacingMin": 3, "WallSpacingMax": 4,
            "WallWMin": 0.2, "WallWMax": 0.2, "WallHMin": 0.25}]}"#;
        match parse_terrain_params(text) {
            Err(TerrainError::IncompleteGroup { missing, .. }) => assert_eq!(missing, "WallHMax"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn required_group_missing() {
        let err = parse_terrain_params(r#"{"Type": "gaps", "Params": [{}]}"#).unwrap_err();
        assert!(matches!(err, TerrainError::MissingGroup { group: "Gap", .. }));
    }

    #[test]
    fn positive_gap_depth_rejected() {
        let text = r#"{"Type": "gaps", "Params": [{"GapSpacingMin": 3, "GapSpacingMax": 4,
            "GapWMin": 0.3, "GapWMax": 0.5, "GapHMin": -1, "GapHMax": 0.5}]}"#;
        assert!(matches!(
            parse_terrain_params(text),
            Err(TerrainError::InvalidValue { field: "GapHMax", .. })
        ));
    }

    #[test]
    fn type_spellings() {
        assert_eq!(TerrainType::parse("var2d_slopes_mixed"), Some(TerrainType::SlopesMixed));
        assert_eq!(TerrainType::parse("narrow-gaps"), Some(TerrainType::NarrowGaps));
        assert_eq!(TerrainType::parse("var2d_gaps"), Some(TerrainType::Gaps));
        assert_eq!(TerrainType::parse("Cliffs"), Some(TerrainType::Cliffs));
    }

    #[test]
    fn document_round_trip() {
        let p = parse_terrain_params(SLOPES_MIXED).unwrap();
        let back = params_from_value(&p.to_document()).unwrap();
        assert_eq!(p, back);
    }
}
