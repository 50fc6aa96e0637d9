use std::collections::BTreeMap;

use serde::Serialize;

use super::{e1_page, e2_page};
use crate::complexes::{ss_pages, DoubleComplex, SpectralSequencePages, TrustedWindow};
use crate::error::{Error, Result};
use crate::linalg::{CoefficientRing, IntegerMatrix};
use crate::sset::{cohomology_with_ring, SimplicialObject};

/// The spectral sequence of `C^q(X_p; K)` against `H^*(Y; K)`.
#[derive(Clone, Debug, Serialize)]
pub struct AbutmentReport {
    pub window: TrustedWindow,
    pub pages: SpectralSequencePages,
    /// `Σ_{p+q=n} dim E_∞^{pq}` for the trusted degrees `n`.
    pub e_infinity_totals: Vec<usize>,
    /// `dim H^n(Y; K)` for the same degrees.
    pub base_cohomology: Vec<usize>,
    /// Trusted cells `(p, q, engine, cosimplicial)` where the two `E_2` disagree.
    pub e2_mismatches: Vec<(usize, usize, usize, usize)>,
    pub e2_cells_compared: usize,
}

impl AbutmentReport {
    pub fn passed(&self) -> bool {
        self.e_infinity_totals == self.base_cohomology && self.e2_mismatches.is_empty()
    }
}

/// Builds the double complex of normalized cochains on the nerve (columns
/// `0..=P`, rows up to the truncation `Q`, cells with `p + q <= total`),
/// runs the page engine and compares its `E_∞` totals with the cohomology of
/// the base, and its `E_2` with the cosimplicial one.
pub fn abutment_check(nerve: &SimplicialObject, field: CoefficientRing, total: usize) -> Result<AbutmentReport> {
    if !field.is_field() {
        return Err(Error::FieldRequired);
    }
    let p_max = nerve.p_max();
    let q_max = nerve.truncation;
    if q_max == 0 || total == 0 {
        return Err(Error::WindowTooSmall("the abutment check needs at least one row and one total degree".into()));
    }
    let in_window = |p: usize, q: usize| p <= p_max && q <= q_max && p + q <= total && q <= nerve.level(p).dim();
    let sizes: Vec<Vec<usize>> =
        (0..=p_max).map(|p| (0..=q_max).map(|q| if in_window(p, q) { nerve.level(p).count(q) } else { 0 }).collect()).collect();
    let mut vertical = BTreeMap::new();
    let mut horizontal = BTreeMap::new();
    for p in 0..=p_max {
        let cochains = nerve.level(p).sparse_cochains(q_max);
        for q in 0..q_max {
            if !in_window(p, q + 1) {
                continue;
            }
            let mut m = IntegerMatrix::zeros(sizes[p][q + 1], sizes[p][q]);
            for &(r, c, v) in &cochains.entries[q] {
                m[(r as usize, c as usize)] += v;
            }
            vertical.insert((p, q), m);
        }
        if p == p_max {
            continue;
        }
        for q in 0..=q_max {
            if !in_window(p + 1, q) {
                continue;
            }
            let mut m = IntegerMatrix::zeros(sizes[p + 1][q], sizes[p][q]);
            for (i, face) in nerve.faces[p + 1].iter().enumerate() {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                for (row, im) in face.images[q].iter().enumerate() {
                    if !im.is_degenerate() {
                        m[(row, im.cell)] += sign;
                    }
                }
            }
            horizontal.insert((p, q), m);
        }
    }
    let dc = DoubleComplex::new(field, sizes, horizontal, vertical)?;
    let window = TrustedWindow::truncated(p_max, q_max, total);
    let pages = ss_pages(&dc, p_max + 2, window)?;

    let trusted: Vec<usize> = (0..=p_max + q_max).filter(|&n| window.trusts_total(n)).collect();
    let e_infinity_totals = trusted.iter().map(|&n| pages.e_infinity.total_dim(n)).collect();
    let base = cohomology_with_ring(&nerve.base, field)?;
    if !nerve.base.is_complete() && trusted.last().is_some_and(|&n| n >= base.len()) {
        return Err(Error::TruncationExceeded { needed: trusted.len(), available: nerve.base.dim() });
    }
    let base_cohomology = trusted.iter().map(|&n| base.get(n).map_or(0, |g| g.rank)).collect();

    let e2 = e2_page(&e1_page(nerve, field, q_max - 1)?)?;
    let engine = pages.page(2).ok_or_else(|| Error::WindowTooSmall("no second page".into()))?;
    let mut e2_mismatches = Vec::new();
    let mut e2_cells_compared = 0;
    for (p, column) in e2.iter().enumerate().take(p_max) {
        for (q, g) in column.iter().enumerate() {
            if window.trusts(2, p, q) {
                e2_cells_compared += 1;
                if engine.dim(p, q) != g.rank {
                    e2_mismatches.push((p, q, engine.dim(p, q), g.rank));
                }
            }
        }
    }
    Ok(AbutmentReport { window, pages, e_infinity_totals, base_cohomology, e2_mismatches, e2_cells_compared })
}
