use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{FiniteSimplicialSet, SimplicialMap};
use crate::complexes::CochainComplex;
use crate::error::{Error, Result};
use crate::linalg::row_basis;
use crate::linalg::sparse::Reduction;
use crate::linalg::{CoefficientRing, FgAbelianGroup, IntegerMatrix, Lattice, Subquotient};

/// Cohomology of a finite simplicial set with coefficients in a ring, computed
/// on a homotopy-equivalent reduction of the normalized cochains. Generators
/// lift to cochains on the original cells.
pub struct SpaceCohomology {
    ring: CoefficientRing,
    top: usize,
    built: usize,
    reduction: Reduction,
    groups: Vec<Subquotient>,
}

impl SpaceCohomology {
    /// Degrees `0..=top`, defaulting to every degree the cells determine.
    pub fn new(s: &FiniteSimplicialSet, ring: CoefficientRing, top: Option<usize>) -> Result<Self> {
        let limit = s.cohomology_top();
        let top = match (top, limit) {
            (Some(t), _) if s.is_complete() => t,
            (Some(t), Some(l)) if t <= l => t,
            (Some(t), _) => return Err(Error::TruncationExceeded { needed: t + 1, available: s.dim() }),
            (None, Some(l)) => l,
            (None, None) => return Err(Error::TruncationExceeded { needed: 1, available: s.dim() }),
        };
        let built = (top + 1).min(s.dim());
        let sparse = s.sparse_cochains(built);
        let domain = ring.domain();
        let reduction = Reduction::compute(domain, &sparse);
        let mut sizes: Vec<usize> = (0..=built).map(|n| reduction.residual_size(n)).collect();
        let mut ds: Vec<IntegerMatrix> = (0..built).map(|n| reduction.residual_differential(n)).collect();
        if built > top {
            // degree `built` only cuts out the cocycles of degree `top`; the row
            // lattice of the last differential does the same with few rows
            ds[top] = row_basis(domain, &ds[top]);
            sizes[built] = ds[top].rows();
        }
        let residual = CochainComplex::free(ring, &sizes, ds)?;
        let mut groups = Vec::with_capacity(top + 1);
        for q in 0..=top {
            if q <= built {
                groups.push(residual.cohomology_subquotient(q)?);
            } else {
                groups.push(Subquotient::new(Lattice::zero(domain, 0), Lattice::zero(domain, 0), ring.drops_torsion())?);
            }
        }
        Ok(Self { ring, top, built, reduction, groups })
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn subquotient(&self, q: usize) -> &Subquotient {
        &self.groups[q]
    }

    pub fn group(&self, q: usize) -> FgAbelianGroup {
        let mut g = self.groups[q].group();
        g.generator_lifts = Some(self.lifts(q));
        g
    }

    pub fn groups(&self) -> Vec<FgAbelianGroup> {
        (0..=self.top).map(|q| self.group(q)).collect()
    }

    pub fn orders(&self, q: usize) -> Vec<BigInt> {
        self.groups[q].orders()
    }

    /// Generator representatives as cochains on the original cells.
    pub fn lifts(&self, q: usize) -> Vec<Vec<BigInt>> {
        if q > self.built {
            return Vec::new();
        }
        self.groups[q].lifts().iter().map(|r| self.reduction.include(q, r)).collect()
    }

    /// Coordinates of the class of a cocycle given on the original cells.
    pub fn coordinates(&self, q: usize, cocycle: &[BigInt]) -> Result<Vec<BigInt>> {
        if self.groups[q].num_generators() == 0 {
            return Ok(Vec::new());
        }
        let r = self.reduction.project(q, cocycle);
        self.groups[q].coordinates(&r).ok_or_else(|| Error::NotWellDefined(format!("cochain of degree {q} is not a cocycle")))
    }
}

/// `f^* g` for a cochain `g` on the `q`-cells of the target.
pub fn pullback_matrix(f: &SimplicialMap, q: usize, g: &[BigInt]) -> Vec<BigInt> {
    if q > f.source.dim() {
        return Vec::new();
    }
    f.images[q]
        .iter()
        .map(|im| if im.is_degenerate() { BigInt::zero() } else { g[im.cell].clone() })
        .collect()
}

/// Matrix of `f^*: H^q(target) -> H^q(source)` on the chosen generators.
pub fn induced_on_cohomology(f: &SimplicialMap, source: &SpaceCohomology, target: &SpaceCohomology, q: usize) -> Result<IntegerMatrix> {
    let rows = source.subquotient(q).num_generators();
    let mut cols = Vec::new();
    for g in target.lifts(q) {
        let pulled = pullback_matrix(f, q, &g);
        cols.push(source.coordinates(q, &pulled)?);
    }
    Ok(IntegerMatrix::from_columns(rows, &cols))
}

/// `H^*(S; ring)` in every determined degree.
pub fn cohomology_with_ring(s: &FiniteSimplicialSet, ring: CoefficientRing) -> Result<Vec<FgAbelianGroup>> {
    let h = SpaceCohomology::new(s, ring, None)?;
    Ok((0..=h.top()).map(|q| h.subquotient(q).group()).collect())
}

/// `H^*(S; A)` for a finitely generated `A`, summand by summand.
pub fn cohomology_with_coeffs(s: &FiniteSimplicialSet, a: &FgAbelianGroup) -> Result<Vec<FgAbelianGroup>> {
    let top = s.cohomology_top().ok_or(Error::TruncationExceeded { needed: 1, available: s.dim() })?;
    let mut out = vec![FgAbelianGroup::zero(); top + 1];
    let mut add = |groups: Vec<FgAbelianGroup>, times: usize| {
        for (o, g) in out.iter_mut().zip(groups) {
            for _ in 0..times {
                *o = o.direct_sum(&g);
            }
        }
    };
    if a.rank > 0 {
        add(cohomology_with_ring(s, CoefficientRing::Integers)?, a.rank);
    }
    for t in &a.torsion {
        let m = t.to_u64().ok_or_else(|| Error::InvalidInput("torsion order too large".into()))?;
        add(cohomology_with_ring(s, CoefficientRing::IntegersMod(m))?, 1);
    }
    for g in &mut out {
        g.generator_lifts = None;
    }
    Ok(out)
}
