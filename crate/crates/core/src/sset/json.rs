use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{builtin, FiniteSimplicialSet, FormalSimplex, SimplicialMap};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FaceJson {
    cell: String,
    #[serde(default)]
    degens: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellJson {
    id: String,
    dim: usize,
    #[serde(default)]
    faces: Vec<FaceJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SsetJson {
    dim: usize,
    cells: Vec<CellJson>,
    #[serde(default = "yes", skip_serializing_if = "Clone::clone")]
    complete: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ImageJson {
    cell: String,
    image: FaceJson,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapJson {
    source: Value,
    target: Value,
    images: Vec<ImageJson>,
}

fn invalid(msg: String) -> Error {
    Error::InvalidInput(msg)
}

fn formal(s_names: &HashMap<&str, (usize, usize)>, f: &FaceJson, at: &str) -> Result<FormalSimplex> {
    let &(d, c) = s_names.get(f.cell.as_str()).ok_or_else(|| invalid(format!("{at}: unknown cell `{}`", f.cell)))?;
    FormalSimplex::from_degens(d, c, &f.degens).ok_or_else(|| invalid(format!("{at}: degeneracy list {:?} must be strictly decreasing and in range", f.degens)))
}

/// Parses the simplicial-set schema, or a builtin name given as a string.
pub fn sset_from_value(v: &Value) -> Result<FiniteSimplicialSet> {
    if let Value::String(name) = v {
        return builtin(name);
    }
    let j: SsetJson = serde_json::from_value(v.clone()).map_err(|e| invalid(format!("simplicial set: {e}")))?;
    let mut names: Vec<Vec<String>> = vec![Vec::new(); j.dim + 1];
    let mut lookup: HashMap<&str, (usize, usize)> = HashMap::new();
    for (k, c) in j.cells.iter().enumerate() {
        if c.dim > j.dim {
            return Err(invalid(format!("cells[{k}] (`{}`): dimension {} exceeds dim {}", c.id, c.dim, j.dim)));
        }
        if lookup.insert(c.id.as_str(), (c.dim, names[c.dim].len())).is_some() {
            return Err(invalid(format!("cells[{k}]: duplicate id `{}`", c.id)));
        }
        names[c.dim].push(c.id.clone());
    }
    let mut faces: Vec<Vec<Vec<FormalSimplex>>> = names.iter().map(|ns| vec![Vec::new(); ns.len()]).collect();
    for (k, c) in j.cells.iter().enumerate() {
        let at = format!("cells[{k}] (`{}`)", c.id);
        let expected = if c.dim == 0 { 0 } else { c.dim + 1 };
        if c.faces.len() != expected {
            return Err(invalid(format!("{at}: expected {expected} faces, got {}", c.faces.len())));
        }
        let (_, idx) = lookup[c.id.as_str()];
        let mut list = Vec::with_capacity(expected);
        for (i, f) in c.faces.iter().enumerate() {
            let fs = formal(&lookup, f, &format!("{at}.faces[{i}]"))?;
            if fs.dim() + 1 != c.dim {
                return Err(invalid(format!("{at}.faces[{i}]: `{}` with degeneracies {:?} has dimension {}, expected {}", f.cell, f.degens, fs.dim(), c.dim - 1)));
            }
            list.push(fs);
        }
        faces[c.dim][idx] = list;
    }
    FiniteSimplicialSet::new(names, faces, j.complete)
}

pub fn sset_to_value(s: &FiniteSimplicialSet) -> Value {
    let mut cells = Vec::new();
    for n in 0..=s.dim() {
        for c in 0..s.count(n) {
            let faces = s
                .cell_faces(n, c)
                .iter()
                .map(|f| FaceJson { cell: s.name(f.cell_dim, f.cell).to_string(), degens: f.degen_list() })
                .collect();
            cells.push(CellJson { id: s.name(n, c).to_string(), dim: n, faces });
        }
    }
    serde_json::to_value(SsetJson { dim: s.dim(), cells, complete: s.is_complete() }).expect("serializable")
}

/// Parses `{source, target, images: [{cell, image: {cell, degens}}]}`.
pub fn map_from_value(v: &Value) -> Result<SimplicialMap> {
    let j: MapJson = serde_json::from_value(v.clone()).map_err(|e| invalid(format!("simplicial map: {e}")))?;
    let source = Arc::new(sset_from_value(&j.source)?);
    let target = Arc::new(sset_from_value(&j.target)?);
    let tnames: HashMap<&str, (usize, usize)> =
        (0..=target.dim()).flat_map(|n| target.names(n).iter().enumerate().map(move |(c, x)| (x.as_str(), (n, c)))).collect();
    let mut images: Vec<Vec<Option<FormalSimplex>>> = (0..=source.dim()).map(|n| vec![None; source.count(n)]).collect();
    for (k, im) in j.images.iter().enumerate() {
        let at = format!("images[{k}]");
        let (n, c) = source.find(&im.cell).ok_or_else(|| invalid(format!("{at}: unknown source cell `{}`", im.cell)))?;
        if images[n][c].is_some() {
            return Err(invalid(format!("{at}: cell `{}` mapped twice", im.cell)));
        }
        images[n][c] = Some(formal(&tnames, &im.image, &format!("{at}.image"))?);
    }
    let mut out = Vec::with_capacity(images.len());
    for (n, list) in images.into_iter().enumerate() {
        let mut level = Vec::with_capacity(list.len());
        for (c, im) in list.into_iter().enumerate() {
            level.push(im.ok_or_else(|| invalid(format!("images: source cell `{}` has no image", source.name(n, c))))?);
        }
        out.push(level);
    }
    SimplicialMap::new(source, target, out)
}

pub fn map_to_value(f: &SimplicialMap) -> Value {
    let mut images = Vec::new();
    for n in 0..=f.source.dim() {
        for c in 0..f.source.count(n) {
            let im = &f.images[n][c];
            images.push(serde_json::json!({
                "cell": f.source.name(n, c),
                "image": { "cell": f.target.name(im.cell_dim, im.cell), "degens": im.degen_list() },
            }));
        }
    }
    serde_json::json!({ "source": sset_to_value(&f.source), "target": sset_to_value(&f.target), "images": images })
}

#[cfg(test)]
mod tests {
    use super::super::builtin_names;
    use super::*;

    #[test]
    fn builtins_round_trip() {
        for name in builtin_names() {
            let s = builtin(name).unwrap();
            let v = sset_to_value(&s);
            assert_eq!(sset_from_value(&v).unwrap(), s, "{name}");
        }
    }

    #[test]
    fn located_errors() {
        let v = serde_json::json!({"dim": 1, "cells": [
            {"id": "v", "dim": 0},
            {"id": "e", "dim": 1, "faces": [{"cell": "v", "degens": []}, {"cell": "x", "degens": []}]}
        ]});
        let err = sset_from_value(&v).unwrap_err().to_string();
        assert!(err.contains("cells[1]") && err.contains("faces[1]") && err.contains("`x`"), "{err}");
        let v = serde_json::json!({"dim": 1, "cells": [
            {"id": "v", "dim": 0},
            {"id": "e", "dim": 1, "faces": [{"cell": "v", "degens": [0]}, {"cell": "v"}]}
        ]});
        assert!(sset_from_value(&v).is_err());
        assert!(sset_from_value(&serde_json::json!({"cells": []})).is_err());
    }

    #[test]
    fn map_round_trip() {
        let s = Arc::new(builtin("sphere1").unwrap());
        let f = SimplicialMap::identity(s);
        let g = map_from_value(&map_to_value(&f)).unwrap();
        assert_eq!(g.images, f.images);
    }
}
