//! Finite simplicial sets presented by nondegenerate cells and formal faces.

mod builtin;
mod cohomology;
mod json;
mod nerve;
mod product;
mod simplex;

pub use builtin::{builtin, builtin_names};
pub use cohomology::{cohomology_with_coeffs, cohomology_with_ring, induced_on_cohomology, pullback_matrix, SpaceCohomology};
pub use json::{map_from_value, map_to_value, sset_from_value, sset_to_value};
pub use nerve::{cech_nerve, nerve_of_map, validate_simplicial_object, SimplicialObject};
pub use product::{fiber_product, product, product_power, projection, TupleSet};
pub use simplex::{FormalSimplex, NamedSimplex};

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::complexes::CochainComplex;
use crate::error::{Error, Result};
use crate::linalg::sparse::SparseCochains;
use crate::linalg::{CoefficientRing, IntegerMatrix};
use simplex::{mask_of, values};

/// Nondegenerate cells in dimensions `0..=dim` with their faces. A set is
/// `complete` when it has no nondegenerate cells above `dim`; otherwise it is a
/// truncation and only cohomology below `dim` is determined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSimplicialSet {
    names: Vec<Vec<String>>,
    faces: Vec<Vec<Vec<FormalSimplex>>>,
    complete: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SsetReport {
    pub violations: Vec<String>,
}

impl SsetReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FiniteSimplicialSet {
    /// Checks face shapes and references; see [`validate_sset`] for identities.
    pub fn new(names: Vec<Vec<String>>, faces: Vec<Vec<Vec<FormalSimplex>>>, complete: bool) -> Result<Self> {
        if names.is_empty() || names.len() != faces.len() {
            return Err(Error::InvalidInput("cell names and faces must cover dimensions 0..=dim".into()));
        }
        for (n, (ns, fs)) in names.iter().zip(&faces).enumerate() {
            if ns.len() != fs.len() {
                return Err(Error::InvalidInput(format!("dimension {n}: {} names for {} cells", ns.len(), fs.len())));
            }
            for (c, list) in fs.iter().enumerate() {
                let at = || format!("cell `{}` (dim {n})", ns[c]);
                let expected = if n == 0 { 0 } else { n + 1 };
                if list.len() != expected {
                    return Err(Error::InvalidInput(format!("{}: expected {expected} faces, got {}", at(), list.len())));
                }
                for (j, f) in list.iter().enumerate() {
                    if f.dim() != n - 1 {
                        return Err(Error::InvalidInput(format!("{}: face {j} has dimension {}, expected {}", at(), f.dim(), n - 1)));
                    }
                    if f.cell_dim >= n || f.cell >= names[f.cell_dim].len() {
                        return Err(Error::InvalidInput(format!("{}: face {j} refers to a missing cell", at())));
                    }
                }
            }
        }
        Ok(Self { names, faces, complete })
    }

    /// Highest dimension with listed cells.
    pub fn dim(&self) -> usize {
        self.names.len() - 1
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Highest degree whose cohomology is determined by the listed cells.
    pub fn cohomology_top(&self) -> Option<usize> {
        if self.complete {
            Some(self.dim())
        } else {
            self.dim().checked_sub(1)
        }
    }

    pub fn count(&self, n: usize) -> usize {
        self.names.get(n).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.names.iter().map(Vec::len).collect()
    }

    pub fn name(&self, n: usize, c: usize) -> &str {
        &self.names[n][c]
    }

    pub fn names(&self, n: usize) -> &[String] {
        &self.names[n]
    }

    /// Faces of a nondegenerate cell.
    pub fn cell_faces(&self, n: usize, c: usize) -> &[FormalSimplex] {
        &self.faces[n][c]
    }

    /// Index of a cell by name, searching all dimensions.
    pub fn find(&self, name: &str) -> Option<(usize, usize)> {
        self.names.iter().enumerate().find_map(|(n, ns)| ns.iter().position(|x| x == name).map(|c| (n, c)))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts().iter().enumerate().map(|(n, &c)| if n % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// `∂_j` of a formal simplex of positive dimension.
    pub fn face(&self, y: &FormalSimplex, j: usize) -> FormalSimplex {
        let n = y.dim();
        assert!(n > 0 && j <= n, "face index out of range");
        let eta = values(y.degens, n);
        let mut phi: Vec<usize> = eta.clone();
        phi.remove(j);
        let repeated = (j < n && eta[j] == eta[j + 1]) || (j > 0 && eta[j - 1] == eta[j]);
        if repeated {
            return FormalSimplex { degens: mask_of(&phi), ..*y };
        }
        let v = eta[j];
        for x in phi.iter_mut() {
            if *x > v {
                *x -= 1;
            }
        }
        let z = self.faces[y.cell_dim][y.cell][v];
        z.pulled_back(mask_of(&phi), n - 1)
    }

    /// Truncation to dimensions `0..=d`.
    pub fn truncate(&self, d: usize) -> Self {
        if d >= self.dim() {
            return self.clone();
        }
        let complete = (d + 1..=self.dim()).all(|n| self.count(n) == 0) && self.complete;
        Self { names: self.names[..=d].to_vec(), faces: self.faces[..=d].to_vec(), complete }
    }

    /// Normalized cochains in degrees `0..=top`, sparse.
    pub fn sparse_cochains(&self, top: usize) -> SparseCochains {
        let top = top.min(self.dim());
        let sizes: Vec<usize> = (0..=top).map(|n| self.count(n)).collect();
        let mut entries = vec![Vec::new(); top];
        for (n, list) in entries.iter_mut().enumerate() {
            for (row, fs) in self.faces[n + 1].iter().enumerate() {
                for (j, f) in fs.iter().enumerate() {
                    if !f.is_degenerate() {
                        list.push((row as u32, f.cell as u32, if j % 2 == 0 { 1 } else { -1 }));
                    }
                }
            }
        }
        SparseCochains { sizes, entries }
    }
}

/// Violated simplicial identities `∂_i ∂_j = ∂_{j-1} ∂_i` (`i < j`) on cells of
/// dimension at least 2.
pub fn validate_sset(s: &FiniteSimplicialSet) -> SsetReport {
    let mut violations = Vec::new();
    for n in 2..=s.dim() {
        for c in 0..s.count(n) {
            let y = FormalSimplex::nondegenerate(n, c);
            for j in 1..=n {
                for i in 0..j {
                    let a = s.face(&s.face(&y, j), i);
                    let b = s.face(&s.face(&y, i), j - 1);
                    if a != b {
                        violations.push(format!("cell `{}`: ∂{i}∂{j} = {} but ∂{}∂{i} = {}", s.name(n, c), a, j - 1, b));
                    }
                }
            }
        }
    }
    SsetReport { violations }
}

/// Normalized cochains with coefficients in `ring`, dense.
pub fn normalized_cochains(s: &FiniteSimplicialSet, ring: CoefficientRing) -> Result<CochainComplex> {
    let sp = s.sparse_cochains(s.dim());
    let ds = sp
        .entries
        .iter()
        .enumerate()
        .map(|(n, list)| {
            let mut m = IntegerMatrix::zeros(sp.sizes[n + 1], sp.sizes[n]);
            for &(r, c, v) in list {
                m[(r as usize, c as usize)] += v;
            }
            m
        })
        .collect();
    CochainComplex::free(ring, &sp.sizes, ds)
}

/// A simplicial map given on nondegenerate cells.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    pub source: Arc<FiniteSimplicialSet>,
    pub target: Arc<FiniteSimplicialSet>,
    /// `images[n][c]`: image of the `c`-th nondegenerate `n`-cell.
    pub images: Vec<Vec<FormalSimplex>>,
}

impl SimplicialMap {
    pub fn new(source: Arc<FiniteSimplicialSet>, target: Arc<FiniteSimplicialSet>, images: Vec<Vec<FormalSimplex>>) -> Result<Self> {
        if images.len() != source.dim() + 1 {
            return Err(Error::InvalidInput("map images must cover every source dimension".into()));
        }
        for (n, list) in images.iter().enumerate() {
            if list.len() != source.count(n) {
                return Err(Error::InvalidInput(format!("dimension {n}: {} images for {} cells", list.len(), source.count(n))));
            }
            for (c, im) in list.iter().enumerate() {
                if im.dim() != n || im.cell_dim > target.dim() || im.cell >= target.count(im.cell_dim) {
                    return Err(Error::InvalidInput(format!("image of `{}` is not an {n}-simplex of the target", source.name(n, c))));
                }
            }
        }
        Ok(Self { source, target, images })
    }

    pub fn identity(s: Arc<FiniteSimplicialSet>) -> Self {
        let images = (0..=s.dim()).map(|n| (0..s.count(n)).map(|c| FormalSimplex::nondegenerate(n, c)).collect()).collect();
        Self { source: s.clone(), target: s, images }
    }

    /// Image of an arbitrary formal simplex of the source.
    pub fn apply(&self, y: &FormalSimplex) -> FormalSimplex {
        self.images[y.cell_dim][y.cell].pulled_back(y.degens, y.dim())
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &SimplicialMap) -> SimplicialMap {
        let images = self.images.iter().map(|l| l.iter().map(|y| g.apply(y)).collect()).collect();
        SimplicialMap { source: self.source.clone(), target: g.target.clone(), images }
    }

    /// Whether every nondegenerate target cell up to `d` is the image of a
    /// nondegenerate source cell; returns the first missed cell otherwise.
    pub fn missed_cell(&self, d: usize) -> Option<(usize, usize)> {
        let mut hit: HashMap<(usize, usize), bool> = HashMap::new();
        for list in &self.images {
            for im in list.iter().filter(|im| !im.is_degenerate()) {
                hit.insert((im.cell_dim, im.cell), true);
            }
        }
        (0..=d.min(self.target.dim())).flat_map(|n| (0..self.target.count(n)).map(move |c| (n, c))).find(|k| !hit.contains_key(k))
    }
}

/// Violations of `f ∂_j = ∂_j f` on nondegenerate cells.
pub fn validate_map(f: &SimplicialMap) -> SsetReport {
    let mut violations = Vec::new();
    for n in 1..=f.source.dim() {
        for c in 0..f.source.count(n) {
            let y = FormalSimplex::nondegenerate(n, c);
            for j in 0..=n {
                let a = f.apply(&f.source.face(&y, j));
                let b = f.target.face(&f.apply(&y), j);
                if a != b {
                    violations.push(format!("cell `{}`: f∂{j} = {a} but ∂{j}f = {b}", f.source.name(n, c)));
                }
            }
        }
    }
    SsetReport { violations }
}
