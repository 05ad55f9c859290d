//! Almost Dedekind models: a closed subspace of a tree space, read as
//! `Max(D)` with the inverse topology, with residue data at every point.
//!
//! ```json
//! {
//!   "depth": 1,
//!   "labels": {"W_inf": []},
//!   "level_labels": ["W_inf", "Z_{i}"],
//!   "rules": [
//!     {"select": "all", "residue_char": 2, "residue_size": "inf", "localization_ok": true},
//!     {"select": {"point": []}, "residue_size": 2, "localization_ok": false}
//!   ]
//! }
//! ```
//!
//! Each field of a point's metadata comes from the most specific rule that
//! sets it: `point`, then the longest `cone`, then `level`, then `all`; later
//! rules win ties.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::is_prime;
use crate::spectra::pointset::{Point, PointSet, SetExpr};

/// Largest depth accepted by default.
pub const DEFAULT_DEPTH_CAP: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ResidueSize {
    Finite(u64),
    Infinite,
}

impl fmt::Display for ResidueSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueSize::Finite(q) => write!(f, "{q}"),
            ResidueSize::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for ResidueSize {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ResidueSize::Finite(q) => s.serialize_u64(*q),
            ResidueSize::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ResidueSize {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(q) => Ok(ResidueSize::Finite(q)),
            Raw::Text(t) if t == "inf" => Ok(ResidueSize::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "residue_size must be a number or \"inf\", got {t:?}"
            ))),
        }
    }
}

/// Local data at one point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DvrMeta {
    pub residue_char: Option<u64>,
    pub residue_size: ResidueSize,
    pub localization_ok: Option<bool>,
}

/// `Int(D_M) = D_M[X]` for a DVR `D_M` exactly when its residue field is
/// infinite.
pub fn int_trivial_point(meta: &DvrMeta) -> bool {
    meta.residue_size == ResidueSize::Infinite
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Selector {
    All,
    Level(u32),
    Cone(Point),
    Point(Point),
}

impl Selector {
    fn set(&self, depth: u32) -> Result<PointSet> {
        match self {
            Selector::All => Ok(PointSet::full(depth)),
            Selector::Level(l) => PointSet::level(depth, *l),
            Selector::Cone(p) => PointSet::cone(depth, p),
            Selector::Point(p) => PointSet::point(depth, p),
        }
    }

    fn precedence(&self) -> (u8, usize) {
        match self {
            Selector::All => (0, 0),
            Selector::Level(_) => (1, 0),
            Selector::Cone(p) => (2, p.len()),
            Selector::Point(_) => (3, 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rule {
    pub select: Selector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_char: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_size: Option<ResidueSize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub localization_ok: Option<bool>,
}

/// The file format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub depth: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SetExpr>,
    #[serde(default)]
    pub labels: BTreeMap<String, Point>,
    /// Per-level name templates; `{i}` is replaced by the last index.
    #[serde(default)]
    pub level_labels: Vec<String>,
    pub rules: Vec<Rule>,
}

/// For each value a field takes, the set of points where it takes it.
type FieldMap<T> = Vec<(T, PointSet)>;

/// A loaded model with its metadata resolved into point sets.
#[derive(Debug, Clone)]
pub struct AlmDedModel {
    spec: ModelSpec,
    space: PointSet,
    chars: FieldMap<u64>,
    sizes: FieldMap<ResidueSize>,
    flags: FieldMap<bool>,
}

fn resolve<T: Clone + PartialEq>(
    depth: u32,
    space: &PointSet,
    rules: &[(usize, &Rule)],
    field: impl Fn(&Rule) -> Option<T>,
) -> Result<FieldMap<T>> {
    let mut remaining = space.clone();
    let mut out: FieldMap<T> = Vec::new();
    for (_, rule) in rules {
        let Some(value) = field(rule) else { continue };
        let sel = rule.select.set(depth)?;
        let hit = sel.intersection(&remaining);
        remaining = remaining.minus(&sel);
        if hit.is_empty() {
            continue;
        }
        match out.iter_mut().find(|(v, _)| *v == value) {
            Some((_, s)) => *s = s.union(&hit),
            None => out.push((value, hit)),
        }
    }
    Ok(out)
}

impl AlmDedModel {
    pub fn new(spec: ModelSpec) -> Result<Self> {
        AlmDedModel::with_cap(spec, DEFAULT_DEPTH_CAP)
    }

    pub fn with_cap(spec: ModelSpec, cap: u32) -> Result<Self> {
        let depth = spec.depth;
        if depth > cap {
            return Err(Error::Model(format!("depth {depth} exceeds the cap {cap}")));
        }
        let space = match &spec.space {
            Some(e) => e.eval(depth)?,
            None => PointSet::full(depth),
        };
        if space.is_empty() {
            return Err(Error::Model("the space is empty".into()));
        }
        if !space.is_closed() {
            return Err(Error::Model(format!(
                "the space {space} is not closed (closure {})",
                space.closure()
            )));
        }
        for (name, p) in &spec.labels {
            if !space.contains(p) {
                return Err(Error::Model(format!(
                    "label {name} names {p}, outside the space"
                )));
            }
        }
        for rule in &spec.rules {
            if let Some(p) = rule.residue_char {
                if !is_prime(p) {
                    return Err(Error::Model(format!("residue_char {p} is not prime")));
                }
            }
            if rule.residue_size == Some(ResidueSize::Finite(0))
                || rule.residue_size == Some(ResidueSize::Finite(1))
            {
                return Err(Error::Model(
                    "a residue field has at least 2 elements".into(),
                ));
            }
        }
        // most specific first, later rules first among equals
        let mut ordered: Vec<(usize, &Rule)> = spec.rules.iter().enumerate().collect();
        ordered.sort_by(|(i, a), (j, b)| {
            b.select
                .precedence()
                .cmp(&a.select.precedence())
                .then(j.cmp(i))
        });
        let chars = resolve(depth, &space, &ordered, |r| r.residue_char)?;
        let sizes = resolve(depth, &space, &ordered, |r| r.residue_size)?;
        let flags = resolve(depth, &space, &ordered, |r| r.localization_ok)?;

        let sized = sizes
            .iter()
            .fold(PointSet::empty(depth), |acc, (_, s)| acc.union(s));
        if let Some(p) = space.minus(&sized).first_point() {
            return Err(Error::Model(format!("no residue_size given at {p}")));
        }
        for (q, qs) in &sizes {
            let ResidueSize::Finite(q) = *q else { continue };
            let charted = chars
                .iter()
                .fold(PointSet::empty(depth), |acc, (_, s)| acc.union(s));
            if let Some(p) = qs.minus(&charted).first_point() {
                return Err(Error::Model(format!(
                    "finite residue field at {p} without residue_char"
                )));
            }
            for (c, cs) in &chars {
                if let Some(p) = qs.intersection(cs).first_point() {
                    if !is_power_of(q, *c) {
                        return Err(Error::Model(format!(
                            "residue_size {q} at {p} is not a power of residue_char {c}"
                        )));
                    }
                }
            }
        }
        Ok(AlmDedModel {
            spec,
            space,
            chars,
            sizes,
            flags,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ModelSpec =
            serde_json::from_str(text).map_err(|e| Error::Model(format!("invalid model: {e}")))?;
        AlmDedModel::new(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Model(format!("cannot read {}: {e}", path.display())))?;
        AlmDedModel::from_json(&text)
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn depth(&self) -> u32 {
        self.spec.depth
    }

    pub fn space(&self) -> &PointSet {
        &self.space
    }

    fn lookup<T: Clone>(map: &FieldMap<T>, p: &Point) -> Option<T> {
        map.iter()
            .find(|(_, s)| s.contains(p))
            .map(|(v, _)| v.clone())
    }

    pub fn meta(&self, p: &Point) -> Result<DvrMeta> {
        if !self.space.contains(p) {
            return Err(Error::Model(format!("{p} is not a point of the model")));
        }
        Ok(DvrMeta {
            residue_char: AlmDedModel::lookup(&self.chars, p),
            residue_size: AlmDedModel::lookup(&self.sizes, p)
                .ok_or_else(|| Error::Model(format!("no residue_size given at {p}")))?,
            localization_ok: AlmDedModel::lookup(&self.flags, p),
        })
    }

    /// Points with infinite residue field.
    pub fn int_trivial(&self) -> PointSet {
        self.field_set(&self.sizes, |v| *v == ResidueSize::Infinite)
    }

    /// Points with finite residue field.
    pub fn finite_residue(&self) -> PointSet {
        self.space.minus(&self.int_trivial())
    }

    /// Points whose `localization_ok` flag equals `value`.
    pub fn flagged(&self, value: bool) -> PointSet {
        self.field_set(&self.flags, |v| *v == value)
    }

    fn field_set<T>(&self, map: &FieldMap<T>, pred: impl Fn(&T) -> bool) -> PointSet {
        map.iter()
            .filter(|(v, _)| pred(v))
            .fold(PointSet::empty(self.depth()), |acc, (_, s)| acc.union(s))
    }

    /// The name of a point: an explicit label, a level template, or its path.
    pub fn label(&self, p: &Point) -> String {
        if let Some((name, _)) = self.spec.labels.iter().find(|(_, q)| *q == p) {
            return name.clone();
        }
        if let Some(t) = self.spec.level_labels.get(p.len()) {
            let last = p.0.last().map_or_else(String::new, u64::to_string);
            return t.replace("{i}", &last);
        }
        p.to_string()
    }

    /// Resolves a label or a path such as `/0/3` or `root`.
    pub fn find_point(&self, name: &str) -> Result<Point> {
        if let Some(p) = self.spec.labels.get(name) {
            return Ok(p.clone());
        }
        let p = if name == "root" || name == "/" {
            Point::root()
        } else {
            let digits: std::result::Result<Vec<u64>, _> = name
                .strip_prefix('/')
                .ok_or_else(|| Error::parse(name, "expected a label or a path like /0/3"))?
                .split('/')
                .map(str::parse)
                .collect();
            Point(digits.map_err(|_| Error::parse(name, "path components must be naturals"))?)
        };
        if !self.space.contains(&p) {
            return Err(Error::Model(format!("{p} is not a point of the model")));
        }
        Ok(p)
    }
}

fn is_power_of(q: u64, p: u64) -> bool {
    let mut q = q;
    while q.is_multiple_of(p) {
        q /= p;
    }
    q == 1
}

/// The model of the weak Jaffard example: leaves `Z_i` with infinite residue
/// fields accumulating at a root `W_inf` whose residue field has `p`
/// elements. Localization holds at the leaves and fails at the root.
pub fn build_example_weakjaff(p: u64) -> Result<AlmDedModel> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    AlmDedModel::new(ModelSpec {
        depth: 1,
        space: None,
        labels: BTreeMap::from([("W_inf".to_string(), Point::root())]),
        level_labels: vec!["W_inf".into(), "Z_{i}".into()],
        rules: vec![
            Rule {
                select: Selector::Level(1),
                residue_char: Some(p),
                residue_size: Some(ResidueSize::Infinite),
                localization_ok: Some(true),
            },
            Rule {
                select: Selector::Point(Point::root()),
                residue_char: Some(p),
                residue_size: Some(ResidueSize::Finite(p)),
                localization_ok: Some(false),
            },
        ],
    })
}

/// The full tree space of depth `k` with residue field `F_p` everywhere.
pub fn full_model(depth: u32, p: u64, localization_ok: Option<bool>) -> Result<AlmDedModel> {
    AlmDedModel::new(ModelSpec {
        depth,
        space: None,
        labels: BTreeMap::new(),
        level_labels: Vec::new(),
        rules: vec![Rule {
            select: Selector::All,
            residue_char: Some(p),
            residue_size: Some(ResidueSize::Finite(p)),
            localization_ok,
        }],
    })
}
