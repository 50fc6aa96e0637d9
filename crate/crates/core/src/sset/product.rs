use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::simplex::compress;
use super::{FiniteSimplicialSet, FormalSimplex, SimplicialMap};
use crate::error::{Error, Result};

/// A simplicial set whose `n`-cells are tuples of formal `n`-simplices of
/// factor sets with no common degeneracy: products and fiber products.
#[derive(Clone, Debug)]
pub struct TupleSet {
    pub set: Arc<FiniteSimplicialSet>,
    pub factors: Vec<Arc<FiniteSimplicialSet>>,
    /// `components[n][c]`: the factor simplices of cell `c` of dimension `n`.
    pub components: Vec<Vec<Vec<FormalSimplex>>>,
    index: Vec<HashMap<Vec<FormalSimplex>, usize>>,
}

/// Formal `n`-simplices of `s`: every cell of dimension `k <= n` with every
/// repeat set of size `n - k`.
pub(crate) fn formal_simplices(s: &FiniteSimplicialSet, n: usize) -> Vec<FormalSimplex> {
    let mut out = Vec::new();
    for k in 0..=n.min(s.dim()) {
        let r = n - k;
        let masks: Vec<u64> = (0u64..1 << n).filter(|m| m.count_ones() as usize == r).collect();
        for c in 0..s.count(k) {
            for &m in &masks {
                out.push(FormalSimplex { cell_dim: k, cell: c, degens: m });
            }
        }
    }
    out
}

fn simplex_name(s: &FiniteSimplicialSet, y: &FormalSimplex) -> String {
    let mut out = String::new();
    for i in y.degen_list() {
        out.push_str(&format!("s{i}"));
    }
    if !out.is_empty() {
        out.push('.');
    }
    out.push_str(s.name(y.cell_dim, y.cell));
    out
}

impl TupleSet {
    /// Cells of dimension `<= d` whose components share the same key.
    fn build(factors: Vec<Arc<FiniteSimplicialSet>>, keys: &dyn Fn(usize, &FormalSimplex) -> FormalSimplex, d: usize) -> Result<Self> {
        let total: usize = factors.iter().map(|f| f.dim()).sum();
        for f in &factors {
            if !f.is_complete() && d > f.dim() {
                return Err(Error::TruncationExceeded { needed: d, available: f.dim() });
            }
        }
        let complete = factors.iter().all(|f| f.is_complete()) && d >= total;
        let top = d.min(total);
        let mut components: Vec<Vec<Vec<FormalSimplex>>> = Vec::with_capacity(top + 1);
        let mut index: Vec<HashMap<Vec<FormalSimplex>, usize>> = Vec::with_capacity(top + 1);
        let mut names = Vec::with_capacity(top + 1);
        let mut faces = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let grouped: Vec<BTreeMap<FormalSimplex, Vec<FormalSimplex>>> = factors
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    let mut g: BTreeMap<FormalSimplex, Vec<FormalSimplex>> = BTreeMap::new();
                    for y in formal_simplices(f, n) {
                        g.entry(keys(i, &y)).or_default().push(y);
                    }
                    g
                })
                .collect();
            let mut cells = Vec::new();
            for key in grouped[0].keys() {
                let lists: Vec<&Vec<FormalSimplex>> = match grouped.iter().map(|g| g.get(key)).collect::<Option<Vec<_>>>() {
                    Some(l) => l,
                    None => continue,
                };
                let mut cur = Vec::with_capacity(lists.len());
                extend(&lists, u64::MAX, &mut cur, &mut cells);
            }
            let idx: HashMap<Vec<FormalSimplex>, usize> = cells.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
            let mut level_faces = Vec::with_capacity(cells.len());
            for t in &cells {
                if n == 0 {
                    level_faces.push(Vec::new());
                    continue;
                }
                let fs = (0..=n)
                    .map(|j| {
                        let comp: Vec<FormalSimplex> = t.iter().zip(&factors).map(|(y, f)| f.face(y, j)).collect();
                        canonical(&comp, n - 1, &index)
                    })
                    .collect();
                level_faces.push(fs);
            }
            names.push(cells.iter().map(|t| tuple_name(&factors, t)).collect());
            faces.push(level_faces);
            components.push(cells);
            index.push(idx);
        }
        let set = Arc::new(FiniteSimplicialSet::new(names, faces, complete)?);
        Ok(Self { set, factors, components, index })
    }

    /// The cell (possibly degenerate) with the given components.
    pub fn lookup(&self, comps: &[FormalSimplex]) -> FormalSimplex {
        let n = comps[0].dim();
        canonical(comps, n, &self.index)
    }

    /// Map into `target` given componentwise on tuples.
    pub fn map_to(self: &Arc<Self>, target: &Arc<TupleSet>, f: &dyn Fn(&[FormalSimplex]) -> Vec<FormalSimplex>) -> SimplicialMap {
        let images = self.components.iter().map(|level| level.iter().map(|t| target.lookup(&f(t))).collect()).collect();
        SimplicialMap { source: self.set.clone(), target: target.set.clone(), images }
    }
}

/// Depth-first product of the candidate lists, keeping tuples whose common
/// degeneracy set is empty.
fn extend(lists: &[&Vec<FormalSimplex>], common: u64, cur: &mut Vec<FormalSimplex>, out: &mut Vec<Vec<FormalSimplex>>) {
    if cur.len() == lists.len() {
        if common == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for y in lists[cur.len()] {
        cur.push(*y);
        extend(lists, common & y.degens, cur, out);
        cur.pop();
    }
}

fn canonical(comps: &[FormalSimplex], n: usize, index: &[HashMap<Vec<FormalSimplex>, usize>]) -> FormalSimplex {
    let common = comps.iter().fold(u64::MAX, |m, y| m & y.degens);
    let reduced: Vec<FormalSimplex> = comps.iter().map(|y| FormalSimplex { degens: compress(y.degens, common), ..*y }).collect();
    let k = n - common.count_ones() as usize;
    let cell = *index[k].get(&reduced).expect("canonical tuple is a cell");
    FormalSimplex { cell_dim: k, cell, degens: common }
}

fn tuple_name(factors: &[Arc<FiniteSimplicialSet>], t: &[FormalSimplex]) -> String {
    let parts: Vec<String> = t.iter().zip(factors).map(|(y, f)| simplex_name(f, y)).collect();
    format!("({})", parts.join(","))
}

fn point_key(y: &FormalSimplex) -> FormalSimplex {
    let n = y.dim();
    FormalSimplex { cell_dim: 0, cell: 0, degens: if n == 0 { 0 } else { (1u64 << n) - 1 } }
}

/// `S × T` in dimensions `<= d`.
pub fn product(s: &Arc<FiniteSimplicialSet>, t: &Arc<FiniteSimplicialSet>, d: usize) -> Result<TupleSet> {
    TupleSet::build(vec![s.clone(), t.clone()], &|_, y| point_key(y), d)
}

/// `S^k` in dimensions `<= d`.
pub fn product_power(s: &Arc<FiniteSimplicialSet>, k: usize, d: usize) -> Result<TupleSet> {
    TupleSet::build(vec![s.clone(); k], &|_, y| point_key(y), d)
}

/// Fiber product of maps with a common target, in dimensions `<= d`.
pub fn fiber_product(maps: &[&SimplicialMap], d: usize) -> Result<TupleSet> {
    if maps.is_empty() {
        return Err(Error::InvalidInput("fiber product of no maps".into()));
    }
    if maps.iter().any(|m| !Arc::ptr_eq(&m.target, &maps[0].target) && *m.target != *maps[0].target) {
        return Err(Error::InvalidInput("fiber product needs a common target".into()));
    }
    let factors = maps.iter().map(|m| m.source.clone()).collect();
    TupleSet::build(factors, &|i, y| maps[i].apply(y), d)
}

/// Projection of a tuple set onto factor `i`.
pub fn projection(t: &TupleSet, i: usize) -> SimplicialMap {
    let images = t.components.iter().map(|level| level.iter().map(|c| c[i]).collect()).collect();
    SimplicialMap { source: t.set.clone(), target: t.factors[i].clone(), images }
}
