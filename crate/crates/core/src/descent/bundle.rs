use std::sync::Arc;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::sset::{
    builtin, map_from_value, map_to_value, nerve_of_map, product, projection, sset_from_value, sset_to_value, FiniteSimplicialSet,
    FormalSimplex, SimplicialMap, SimplicialObject,
};

/// A space over a base together with how it was described.
#[derive(Clone, Debug)]
pub enum Bundle {
    /// `base × fiber -> base`.
    Trivial { base: Arc<FiniteSimplicialSet>, fiber: Arc<FiniteSimplicialSet>, fiber_label: String },
    /// A zero-dimensional base with one fiber per vertex, in vertex order.
    Discrete { base: Arc<FiniteSimplicialSet>, fibers: Vec<Arc<FiniteSimplicialSet>>, fiber_labels: Vec<String> },
    /// An arbitrary levelwise surjective map.
    Map(SimplicialMap),
}

fn entry(v: &Value, at: &str) -> Result<(Arc<FiniteSimplicialSet>, String)> {
    let s = sset_from_value(v).map_err(|e| Error::InvalidInput(format!("{at}: {e}")))?;
    let label = v.as_str().map_or_else(|| at.to_string(), str::to_string);
    Ok((Arc::new(s), label))
}

fn entry_value(s: &FiniteSimplicialSet, label: &str) -> Value {
    match builtin(label) {
        Ok(b) if sset_to_value(&b) == sset_to_value(s) => Value::from(label),
        _ => sset_to_value(s),
    }
}

impl Bundle {
    pub fn trivial(base: Arc<FiniteSimplicialSet>, fiber: Arc<FiniteSimplicialSet>, fiber_label: impl Into<String>) -> Self {
        Self::Trivial { base, fiber, fiber_label: fiber_label.into() }
    }

    pub fn discrete(base: Arc<FiniteSimplicialSet>, fibers: Vec<Arc<FiniteSimplicialSet>>, fiber_labels: Vec<String>) -> Result<Self> {
        if base.dim() != 0 {
            return Err(Error::InvalidInput(format!("a discrete base must be zero-dimensional, got dimension {}", base.dim())));
        }
        if fibers.len() != base.count(0) || fiber_labels.len() != fibers.len() {
            return Err(Error::InvalidInput(format!("{} vertices but {} fibers", base.count(0), fibers.len())));
        }
        Ok(Self::Discrete { base, fibers, fiber_labels })
    }

    /// `{"base": e, "fiber": e}`, `{"base": e, "fibers": {vertex: e}}`, or a map object.
    pub fn from_value(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::InvalidInput("bundle must be a JSON object".into()))?;
        if obj.contains_key("images") {
            return Ok(Self::Map(map_from_value(v)?));
        }
        let (base, _) = entry(obj.get("base").ok_or_else(|| Error::InvalidInput("bundle: missing `base`".into()))?, "base")?;
        match (obj.get("fiber"), obj.get("fibers")) {
            (Some(f), None) => {
                let (fiber, label) = entry(f, "fiber")?;
                Ok(Self::trivial(base, fiber, label))
            }
            (None, Some(Value::Object(fs))) => {
                let mut fibers = Vec::new();
                let mut labels = Vec::new();
                for name in base.names(0) {
                    let at = format!("fibers.{name}");
                    let f = fs.get(name).ok_or_else(|| Error::InvalidInput(format!("{at}: no fiber for vertex `{name}`")))?;
                    let (fiber, label) = entry(f, &at)?;
                    fibers.push(fiber);
                    labels.push(label);
                }
                if let Some(extra) = fs.keys().find(|k| !base.names(0).contains(k)) {
                    return Err(Error::InvalidInput(format!("fibers.{extra}: not a vertex of the base")));
                }
                Self::discrete(base, fibers, labels)
            }
            (None, Some(_)) => Err(Error::InvalidInput("bundle: `fibers` must be an object keyed by vertex".into())),
            _ => Err(Error::InvalidInput("bundle: give exactly one of `fiber` and `fibers`".into())),
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            Self::Trivial { base, fiber, fiber_label } => {
                let mut m = Map::new();
                m.insert("base".into(), sset_to_value(base));
                m.insert("fiber".into(), entry_value(fiber, fiber_label));
                Value::Object(m)
            }
            Self::Discrete { base, fibers, fiber_labels } => {
                let mut fs = Map::new();
                for ((name, f), label) in base.names(0).iter().zip(fibers).zip(fiber_labels) {
                    fs.insert(name.clone(), entry_value(f, label));
                }
                let mut m = Map::new();
                m.insert("base".into(), sset_to_value(base));
                m.insert("fibers".into(), Value::Object(fs));
                Value::Object(m)
            }
            Self::Map(f) => map_to_value(f),
        }
    }

    pub fn shape(&self) -> &'static str {
        match self {
            Self::Trivial { .. } => "trivial bundle",
            Self::Discrete { .. } => "discrete base",
            Self::Map(_) => "general map",
        }
    }

    pub fn base(&self) -> Arc<FiniteSimplicialSet> {
        match self {
            Self::Trivial { base, .. } | Self::Discrete { base, .. } => base.clone(),
            Self::Map(f) => f.target.clone(),
        }
    }

    /// Fibers with their labels; empty for a general map.
    pub fn fibers(&self) -> Vec<(String, Arc<FiniteSimplicialSet>)> {
        match self {
            Self::Trivial { fiber, fiber_label, .. } => vec![(fiber_label.clone(), fiber.clone())],
            Self::Discrete { fibers, fiber_labels, .. } => fiber_labels.iter().cloned().zip(fibers.iter().cloned()).collect(),
            Self::Map(_) => Vec::new(),
        }
    }

    /// The projection to the base, with the total space built through dimension `d`.
    pub fn map(&self, d: usize) -> Result<SimplicialMap> {
        match self {
            Self::Trivial { base, fiber, .. } => Ok(projection(&product(base, fiber, d)?, 0)),
            Self::Discrete { base, fibers, .. } => {
                let total = Arc::new(disjoint_union(fibers, base.names(0))?);
                let images = (0..=total.dim())
                    .map(|n| {
                        let mask = if n == 0 { 0 } else { (1u64 << n) - 1 };
                        fibers
                            .iter()
                            .enumerate()
                            .flat_map(|(y, f)| std::iter::repeat(y).take(if n <= f.dim() { f.count(n) } else { 0 }))
                            .take(total.count(n))
                            .map(|y| FormalSimplex { cell_dim: 0, cell: y, degens: mask })
                            .collect()
                    })
                    .collect();
                SimplicialMap::new(total, base.clone(), images)
            }
            Self::Map(f) => Ok(f.clone()),
        }
    }

    /// The nerve `X_0 .. X_P`, each level through dimension `d`.
    pub fn nerve(&self, p_max: usize, d: usize) -> Result<SimplicialObject> {
        nerve_of_map(&self.map(d)?, p_max, d)
    }
}

/// `⊔ parts` with cells named `tag:cell`. Incomplete parts cap the certified dimension.
pub fn disjoint_union(parts: &[Arc<FiniteSimplicialSet>], tags: &[String]) -> Result<FiniteSimplicialSet> {
    let dim = parts.iter().map(|p| p.dim()).max().unwrap_or(0);
    let mut names = vec![Vec::new(); dim + 1];
    let mut faces = vec![Vec::new(); dim + 1];
    let mut offset = vec![0usize; dim + 1];
    for (part, tag) in parts.iter().zip(tags) {
        for n in 0..=part.dim() {
            for c in 0..part.count(n) {
                names[n].push(format!("{tag}:{}", part.name(n, c)));
                let fs = part
                    .cell_faces(n, c)
                    .iter()
                    .map(|f| FormalSimplex { cell: f.cell + offset[f.cell_dim], ..*f })
                    .collect();
                faces[n].push(fs);
            }
        }
        for n in 0..=part.dim() {
            offset[n] += part.count(n);
        }
    }
    let complete = parts.iter().all(|p| p.is_complete());
    let union = FiniteSimplicialSet::new(names, faces, complete)?;
    match parts.iter().filter(|p| !p.is_complete()).map(|p| p.dim()).min() {
        Some(cap) if cap < dim => Ok(union.truncate(cap)),
        _ => Ok(union),
    }
}
