use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::CochainComplex;
use crate::error::{Error, Result};
use crate::linalg::sparse::SparseCochains;
use crate::linalg::{CoefficientRing, IntegerMatrix};

/// First-quadrant double complex `C^{p,q}`, `0 <= p <= P`, `0 <= q <= Q`, with
/// commuting differentials `d_h: (p,q) -> (p+1,q)` and `d_v: (p,q) -> (p,q+1)`.
/// Absent maps are zero.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    ring: CoefficientRing,
    sizes: Vec<Vec<usize>>,
    horizontal: BTreeMap<(usize, usize), IntegerMatrix>,
    vertical: BTreeMap<(usize, usize), IntegerMatrix>,
}

pub(crate) fn vanishes(ring: CoefficientRing, m: &IntegerMatrix) -> bool {
    match ring.modulus() {
        Some(md) => {
            let md = BigInt::from(md);
            (0..m.rows()).all(|i| m.row(i).iter().all(|x| (x % &md).is_zero()))
        }
        None => m.is_zero_in(ring.domain()),
    }
}

impl DoubleComplex {
    pub fn new(
        ring: CoefficientRing,
        sizes: Vec<Vec<usize>>,
        horizontal: BTreeMap<(usize, usize), IntegerMatrix>,
        vertical: BTreeMap<(usize, usize), IntegerMatrix>,
    ) -> Result<Self> {
        let qn = sizes.first().map_or(0, Vec::len);
        if sizes.iter().any(|r| r.len() != qn) {
            return Err(Error::DimensionMismatch("double complex sizes must be rectangular".into()));
        }
        let dc = Self { ring, sizes, horizontal, vertical };
        let size = |p: usize, q: usize| dc.size(p, q);
        for (&(p, q), m) in &dc.horizontal {
            if m.cols() != size(p, q) || m.rows() != size(p + 1, q) {
                return Err(Error::DimensionMismatch(format!("d_h at ({p},{q}) has shape {}x{}", m.rows(), m.cols())));
            }
        }
        for (&(p, q), m) in &dc.vertical {
            if m.cols() != size(p, q) || m.rows() != size(p, q + 1) {
                return Err(Error::DimensionMismatch(format!("d_v at ({p},{q}) has shape {}x{}", m.rows(), m.cols())));
            }
        }
        for p in 0..=dc.p_max() {
            for q in 0..=dc.q_max() {
                let hh = dc.horizontal(p + 1, q).mul(&dc.horizontal(p, q));
                let vv = dc.vertical(p, q + 1).mul(&dc.vertical(p, q));
                let comm = dc.vertical(p + 1, q).mul(&dc.horizontal(p, q)).sub(&dc.horizontal(p, q + 1).mul(&dc.vertical(p, q)));
                if !vanishes(ring, &hh) || !vanishes(ring, &vv) || !vanishes(ring, &comm) {
                    return Err(Error::CompositionNonzero { degree: p + q });
                }
            }
        }
        Ok(dc)
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn p_max(&self) -> usize {
        self.sizes.len().saturating_sub(1)
    }

    pub fn q_max(&self) -> usize {
        self.sizes.first().map_or(0, Vec::len).saturating_sub(1)
    }

    pub fn size(&self, p: usize, q: usize) -> usize {
        self.sizes.get(p).and_then(|r| r.get(q)).copied().unwrap_or(0)
    }

    pub fn sizes(&self) -> &[Vec<usize>] {
        &self.sizes
    }

    pub fn horizontal(&self, p: usize, q: usize) -> IntegerMatrix {
        self.horizontal.get(&(p, q)).cloned().unwrap_or_else(|| IntegerMatrix::zeros(self.size(p + 1, q), self.size(p, q)))
    }

    pub fn vertical(&self, p: usize, q: usize) -> IntegerMatrix {
        self.vertical.get(&(p, q)).cloned().unwrap_or_else(|| IntegerMatrix::zeros(self.size(p, q + 1), self.size(p, q)))
    }

    /// Total complex layout: basis of `Tot^n` ordered by column `p` ascending.
    pub fn total_layout(&self) -> TotalComplex {
        let top = self.p_max() + self.q_max();
        let mut sizes = Vec::new();
        let mut blocks = Vec::new();
        let mut columns = Vec::new();
        for n in 0..=top {
            let mut off = 0;
            let mut bl = Vec::new();
            let mut col = Vec::new();
            for p in 0..=self.p_max().min(n) {
                let q = n - p;
                if q > self.q_max() {
                    continue;
                }
                let s = self.size(p, q);
                bl.push((p, off));
                col.extend(std::iter::repeat(p).take(s));
                off += s;
            }
            sizes.push(off);
            blocks.push(bl);
            columns.push(col);
        }
        TotalComplex { sizes, blocks, columns }
    }

    /// `Tot^n = ⊕_{p+q=n} C^{p,q}` with `d = d_h + (-1)^p d_v`.
    pub fn total_complex(&self) -> Result<CochainComplex> {
        let layout = self.total_layout();
        let sparse = self.total_sparse(&layout);
        let mut ds = Vec::new();
        for n in 0..layout.sizes.len().saturating_sub(1) {
            let mut m = IntegerMatrix::zeros(layout.sizes[n + 1], layout.sizes[n]);
            for &(r, c, v) in &sparse.entries[n] {
                m[(r as usize, c as usize)] += BigInt::from(v);
            }
            ds.push(m);
        }
        CochainComplex::free(self.ring, &layout.sizes, ds)
    }

    pub(crate) fn total_sparse(&self, layout: &TotalComplex) -> SparseCochains {
        let mut entries = vec![Vec::new(); layout.sizes.len().saturating_sub(1)];
        let offset = |n: usize, p: usize| layout.blocks[n].iter().find(|b| b.0 == p).map(|b| b.1);
        let push = |list: &mut Vec<(u32, u32, i64)>, m: &IntegerMatrix, ro: usize, co: usize, sign: i64| {
            for i in 0..m.rows() {
                for (j, x) in m.row(i).iter().enumerate() {
                    if !x.is_zero() {
                        let v = x.to_i64().expect("double complex entries must fit in i64") * sign;
                        list.push(((ro + i) as u32, (co + j) as u32, v));
                    }
                }
            }
        };
        for (&(p, q), m) in &self.horizontal {
            let n = p + q;
            if let (Some(co), Some(ro)) = (offset(n, p), offset(n + 1, p + 1)) {
                push(&mut entries[n], m, ro, co, 1);
            }
        }
        for (&(p, q), m) in &self.vertical {
            let n = p + q;
            if let (Some(co), Some(ro)) = (offset(n, p), offset(n + 1, p)) {
                push(&mut entries[n], m, ro, co, if p % 2 == 0 { 1 } else { -1 });
            }
        }
        SparseCochains { sizes: layout.sizes.clone(), entries }
    }
}

/// Block structure of a total complex.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    pub sizes: Vec<usize>,
    /// Per degree: `(p, offset)` of each nonempty or empty block.
    pub blocks: Vec<Vec<(usize, usize)>>,
    /// Per degree: filtration column of each basis element.
    pub columns: Vec<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FgAbelianGroup;

    #[test]
    fn zero_differentials_give_antidiagonal_sums() {
        let sizes = vec![vec![1, 2], vec![3, 4]];
        let dc = DoubleComplex::new(CoefficientRing::Rationals, sizes, BTreeMap::new(), BTreeMap::new()).unwrap();
        let tot = dc.total_complex().unwrap();
        assert_eq!(tot.ambient_ranks(), vec![1, 5, 4]);
        assert!(tot.differentials().iter().all(IntegerMatrix::is_zero));
    }

    #[test]
    fn single_column() {
        let mut v = BTreeMap::new();
        v.insert((0, 0), IntegerMatrix::from_rows(1, &[vec![1]]));
        let dc = DoubleComplex::new(CoefficientRing::Integers, vec![vec![1, 1]], BTreeMap::new(), v).unwrap();
        let tot = dc.total_complex().unwrap();
        assert_eq!(tot.ambient_ranks(), vec![1, 1]);
        assert_eq!(tot.cohomology().unwrap(), vec![FgAbelianGroup::zero(), FgAbelianGroup::zero()]);
    }

    #[test]
    fn anticommuting_input_is_rejected() {
        let one = IntegerMatrix::from_rows(1, &[vec![1]]);
        let mut h = BTreeMap::new();
        let mut v = BTreeMap::new();
        h.insert((0, 0), one.clone());
        h.insert((0, 1), one.neg());
        v.insert((0, 0), one.clone());
        v.insert((1, 0), one);
        let err = DoubleComplex::new(CoefficientRing::Integers, vec![vec![1, 1], vec![1, 1]], h, v).unwrap_err();
        assert!(matches!(err, Error::CompositionNonzero { .. }));
    }
}
