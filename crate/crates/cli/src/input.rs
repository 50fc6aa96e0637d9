use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use descent_core::bar::GradedAlgebra;
use descent_core::complexes::{CochainComplex, DoubleComplex};
use descent_core::descent::Bundle;
use descent_core::linalg::{CoefficientRing, IntegerMatrix};
use descent_core::sset::{builtin, builtin_names, sset_from_value, FiniteSimplicialSet};
use descent_core::{Error, Result};
use serde::Deserialize;
use serde_json::Value;

pub const ALGEBRA_NAMES: [&str; 3] = ["ground", "dual-numbers-deg1", "dual-numbers-deg2"];

fn invalid(msg: String) -> Error {
    Error::InvalidInput(msg)
}

fn located(path: &str, e: Error) -> Error {
    match e {
        Error::InvalidInput(m) => invalid(format!("{path}: {m}")),
        Error::DimensionMismatch(m) => Error::DimensionMismatch(format!("{path}: {m}")),
        other => other,
    }
}

pub fn read_json(path: &str) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("{path}: {e}")))
}

/// A builtin name or the path of a simplicial-set JSON file.
pub fn space(arg: &str) -> Result<Arc<FiniteSimplicialSet>> {
    if builtin_names().contains(&arg) {
        return builtin(arg).map(Arc::new);
    }
    if !Path::new(arg).exists() {
        return Err(invalid(format!("`{arg}` is neither a builtin ({}) nor a file", builtin_names().join(", "))));
    }
    let v = read_json(arg)?;
    sset_from_value(&v).map(Arc::new).map_err(|e| located(arg, e))
}

pub fn bundle(file: Option<&str>, fiber: Option<&str>, base: Option<&str>) -> Result<Bundle> {
    match (file, fiber) {
        (Some(path), None) => {
            let v = read_json(path)?;
            Bundle::from_value(&v).map_err(|e| located(path, e))
        }
        (None, Some(fiber)) => Ok(Bundle::trivial(space(base.unwrap_or("point"))?, space(fiber)?, fiber)),
        (Some(_), Some(_)) => Err(invalid("give either --bundle or --fiber/--base, not both".into())),
        (None, None) => Err(invalid("missing input: give --bundle FILE or --fiber SPACE [--base SPACE]".into())),
    }
}

pub fn algebra(arg: &str, field: CoefficientRing) -> Result<GradedAlgebra> {
    match arg {
        "ground" => GradedAlgebra::ground(field),
        "dual-numbers-deg1" => GradedAlgebra::dual_numbers(field, 1),
        "dual-numbers-deg2" => GradedAlgebra::dual_numbers(field, 2),
        path => {
            if !Path::new(path).exists() {
                return Err(invalid(format!("`{path}` is neither a builtin algebra ({}) nor a file", ALGEBRA_NAMES.join(", "))));
            }
            let text = fs::read_to_string(path).map_err(|e| invalid(format!("{path}: {e}")))?;
            GradedAlgebra::from_json(&text).map_err(|e| located(path, e))
        }
    }
}

fn matrix(rows: usize, cols: usize, entries: &[Vec<i64>], at: &str) -> Result<IntegerMatrix> {
    if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch(format!("{at}: expected a {rows}x{cols} matrix")));
    }
    let mut m = IntegerMatrix::zeros(rows, cols);
    for (i, row) in entries.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            m[(i, j)] = x.into();
        }
    }
    Ok(m)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexJson {
    ring: String,
    ranks: Vec<usize>,
    #[serde(default)]
    differentials: Vec<Vec<Vec<i64>>>,
}

/// `{ "ring": R, "ranks": [..], "differentials": [d^0, d^1, ..] }`, each `d^n`
/// a list of `ranks[n+1]` rows of length `ranks[n]`.
pub fn complex(path: &str) -> Result<CochainComplex> {
    let j: ComplexJson = serde_json::from_value(read_json(path)?).map_err(|e| invalid(format!("{path}: {e}")))?;
    let ring = CoefficientRing::parse(&j.ring)?;
    if j.ranks.is_empty() {
        return Err(invalid(format!("{path}: a complex needs at least one degree")));
    }
    if j.differentials.len() + 1 != j.ranks.len() {
        return Err(Error::DimensionMismatch(format!("{path}: {} ranks need {} differentials", j.ranks.len(), j.ranks.len() - 1)));
    }
    let ds = j
        .differentials
        .iter()
        .enumerate()
        .map(|(n, d)| matrix(j.ranks[n + 1], j.ranks[n], d, &format!("{path}: differentials[{n}]")))
        .collect::<Result<Vec<_>>>()?;
    CochainComplex::free(ring, &j.ranks, ds).map_err(|e| located(path, e))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockJson {
    p: usize,
    q: usize,
    matrix: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DoubleJson {
    field: String,
    sizes: Vec<Vec<usize>>,
    #[serde(default)]
    horizontal: Vec<BlockJson>,
    #[serde(default)]
    vertical: Vec<BlockJson>,
}

/// `{ "field": K, "sizes": [[dim C^{0,0}, dim C^{0,1}, ..], ..],
/// "horizontal": [{p, q, matrix}], "vertical": [{p, q, matrix}] }`;
/// omitted blocks are zero.
pub fn double_complex(path: &str) -> Result<DoubleComplex> {
    let j: DoubleJson = serde_json::from_value(read_json(path)?).map_err(|e| invalid(format!("{path}: {e}")))?;
    let field = CoefficientRing::parse(&j.field)?;
    if !field.is_field() {
        return Err(Error::FieldRequired);
    }
    let size = |p: usize, q: usize| j.sizes.get(p).and_then(|c| c.get(q)).copied().unwrap_or(0);
    let mut horizontal = BTreeMap::new();
    for (i, b) in j.horizontal.iter().enumerate() {
        let m = matrix(size(b.p + 1, b.q), size(b.p, b.q), &b.matrix, &format!("{path}: horizontal[{i}]"))?;
        horizontal.insert((b.p, b.q), m);
    }
    let mut vertical = BTreeMap::new();
    for (i, b) in j.vertical.iter().enumerate() {
        let m = matrix(size(b.p, b.q + 1), size(b.p, b.q), &b.matrix, &format!("{path}: vertical[{i}]"))?;
        vertical.insert((b.p, b.q), m);
    }
    DoubleComplex::new(field, j.sizes, horizontal, vertical).map_err(|e| located(path, e))
}
