use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use serde::Serialize;

use super::double::DoubleComplex;
use crate::error::{Error, Result};
use crate::linalg::field::{kernel, rank, Field, FieldMatrix, PrimeField, Rationals};
use crate::linalg::sparse::Reduction;
use crate::linalg::Domain;

/// Where a double complex was cut from a larger one. `None` means the complex
/// genuinely ends in that direction and nothing is lost there.
///
/// The cut complex keeps cells with `p <= columns`, `q <= rows` and
/// `p + q <= total`; it is a quotient of the uncut complex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TrustedWindow {
    pub columns: Option<usize>,
    pub rows: Option<usize>,
    pub total: Option<usize>,
}

impl TrustedWindow {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn truncated(columns: usize, rows: usize, total: usize) -> Self {
        Self { columns: Some(columns), rows: Some(rows), total: Some(total) }
    }

    fn below(bound: Option<usize>, x: usize, margin: usize) -> bool {
        bound.is_none_or(|b| x + margin <= b)
    }

    /// Largest total degree whose cohomology is unaffected by the cut.
    pub fn total_limit(&self) -> Option<usize> {
        let m = [self.columns, self.rows, self.total].into_iter().flatten().min()?;
        Some(m.saturating_sub(1)).filter(|_| m > 0)
    }

    pub fn trusts_total(&self, n: usize) -> bool {
        match [self.columns, self.rows, self.total].into_iter().flatten().min() {
            None => true,
            Some(m) => n < m,
        }
    }

    /// Whether `E_r^{pq}` of the cut complex equals that of the uncut one;
    /// `r = usize::MAX` stands for `E_∞`.
    pub fn trusts(&self, r: usize, p: usize, q: usize) -> bool {
        let e1 = Self::below(self.columns, p, 0) && Self::below(self.rows, q, 1) && Self::below(self.total, p + q, 1);
        match r {
            0 => Self::below(self.columns, p, 0) && Self::below(self.rows, q, 0) && Self::below(self.total, p + q, 0),
            1 => e1,
            2 => e1 && Self::below(self.columns, p, 1),
            _ => self.trusts_total(p + q),
        }
    }
}

/// Dimension table of one page, indexed `[p][q]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageTable {
    /// Page number; `None` for `E_∞`.
    pub r: Option<usize>,
    pub dims: Vec<Vec<usize>>,
    pub trusted: Vec<Vec<bool>>,
    /// Rank of `d_r: (p,q) -> (p+r, q-r+1)`; all zero on `E_∞`.
    pub out_ranks: Vec<Vec<usize>>,
}

impl PageTable {
    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.dims.get(p).and_then(|r| r.get(q)).copied().unwrap_or(0)
    }

    pub fn out_rank(&self, p: usize, q: usize) -> usize {
        self.out_ranks.get(p).and_then(|r| r.get(q)).copied().unwrap_or(0)
    }

    /// Rank of the page differential arriving at `(p,q)`.
    pub fn in_rank(&self, p: usize, q: usize) -> usize {
        match self.r {
            Some(r) if p >= r => self.out_rank(p - r, q + r - 1),
            _ => 0,
        }
    }

    pub fn is_trusted(&self, p: usize, q: usize) -> bool {
        self.trusted.get(p).and_then(|r| r.get(q)).copied().unwrap_or(false)
    }

    /// `Σ_{p+q=n} dim E^{pq}`.
    pub fn total_dim(&self, n: usize) -> usize {
        (0..=n).map(|p| if n - p < self.dims.get(p).map_or(0, Vec::len) { self.dim(p, n - p) } else { 0 }).sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralSequencePages {
    pub p_max: usize,
    pub q_max: usize,
    pub window: TrustedWindow,
    /// Pages `E_1 .. E_{r_max}`.
    pub pages: Vec<PageTable>,
    pub e_infinity: PageTable,
    /// `dim H^n(Tot)` for `n = 0..=P+Q`.
    pub abutment: Vec<usize>,
    pub abutment_trusted: Vec<bool>,
}

impl SpectralSequencePages {
    pub fn page(&self, r: usize) -> Option<&PageTable> {
        r.checked_sub(1).and_then(|i| self.pages.get(i))
    }
}

type Basis<F> = Rc<Vec<Vec<<F as Field>::E>>>;

/// Filtered total complex after cancelling pairs inside single columns, over a field.
struct Filtered<F: Field> {
    f: F,
    /// Column of each residual basis element, per total degree.
    columns: Vec<Vec<usize>>,
    /// `d^n` on the residual basis.
    differentials: Vec<FieldMatrix<F>>,
    /// One past the largest column.
    width: usize,
    cache: RefCell<HashMap<(usize, usize, usize), Basis<F>>>,
}

impl<F: Field> Filtered<F> {
    fn new(f: F, dc: &DoubleComplex) -> Self {
        let domain = dc.ring().domain();
        let layout = dc.total_layout();
        let sparse = dc.total_sparse(&layout);
        let cols = &layout.columns;
        let reduction = Reduction::compute_where(domain, &sparse, &|n, b, a| cols[n][b as usize] == cols[n + 1][a as usize]);
        let top = layout.sizes.len();
        let columns = (0..top).map(|n| reduction.residual_cells(n).into_iter().map(|i| cols[n][i]).collect()).collect();
        let differentials =
            (0..top.saturating_sub(1)).map(|n| FieldMatrix::from_integer(&f, &reduction.residual_differential(n))).collect();
        Self { f, columns, differentials, width: dc.p_max() + 1, cache: RefCell::new(HashMap::new()) }
    }

    fn degrees(&self) -> usize {
        self.columns.len()
    }

    fn size(&self, n: usize) -> usize {
        self.columns[n].len()
    }

    fn clamp(&self, p: isize) -> usize {
        p.clamp(0, self.width as isize) as usize
    }

    /// `{ x in F^p Tot^n : d x in F^t }`; `p <= 0` is the whole space and
    /// `t >= width` forces `d x = 0`.
    fn z(&self, n: usize, p: isize, t: isize) -> Basis<F> {
        let (p, t) = (self.clamp(p), self.clamp(t));
        if let Some(b) = self.cache.borrow().get(&(n, p, t)) {
            return b.clone();
        }
        let src: Vec<usize> = (0..self.size(n)).filter(|&i| self.columns[n][i] >= p).collect();
        let local = if n + 1 >= self.degrees() {
            (0..src.len()).map(|i| (0..src.len()).map(|j| if i == j { self.f.one() } else { self.f.zero() }).collect()).collect()
        } else {
            let rows: Vec<usize> = (0..self.size(n + 1)).filter(|&i| self.columns[n + 1][i] < t).collect();
            kernel(&self.f, &self.differentials[n].select(&rows, &src))
        };
        let basis: Vec<Vec<F::E>> = local
            .into_iter()
            .map(|v: Vec<F::E>| {
                let mut full = vec![self.f.zero(); self.size(n)];
                for (x, &i) in v.into_iter().zip(&src) {
                    full[i] = x;
                }
                full
            })
            .collect();
        let basis = Rc::new(basis);
        self.cache.borrow_mut().insert((n, p, t), basis.clone());
        basis
    }

    /// `d` applied to a basis in degree `n - 1`.
    fn image(&self, n: usize, vs: &[Vec<F::E>]) -> Vec<Vec<F::E>> {
        vs.iter().map(|v| self.differentials[n - 1].apply(&self.f, v)).collect()
    }

    fn span_dim(&self, n: usize, parts: &[&[Vec<F::E>]]) -> usize {
        rank(&self.f, parts.iter().flat_map(|p| p.iter().cloned()).collect(), self.size(n))
    }

    /// `dim Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})`.
    fn page_dim(&self, n: usize, p: isize, r: isize) -> usize {
        let zr = self.z(n, p, p + r);
        let lower = self.z(n, p + 1, p + r);
        let b = if n == 0 { Vec::new() } else { self.image(n, &self.z(n - 1, p - r + 1, p)) };
        zr.len() - self.span_dim(n, &[&lower, &b])
    }

    /// Rank of `d_r` leaving `E_r^{p, n-p}`.
    fn out_rank(&self, n: usize, p: isize, r: isize) -> usize {
        let zr = self.z(n, p, p + r);
        zr.len() - self.span_dim(n, &[&self.z(n, p, p + r + 1), &self.z(n, p + 1, p + r)])
    }

    fn infinity_dim(&self, n: usize, p: isize) -> usize {
        let never = self.width as isize;
        let cycles = self.z(n, p, never);
        let boundaries = if n == 0 { Vec::new() } else { self.image(n, &self.z(n - 1, 0, p)) };
        cycles.len() - self.span_dim(n, &[&self.z(n, p + 1, never), &boundaries])
    }

    fn cohomology_dim(&self, n: usize) -> usize {
        let rank_of = |m: &FieldMatrix<F>| rank(&self.f, m.rows.clone(), m.cols);
        let out = self.differentials.get(n).map_or(0, rank_of);
        let inc = if n > 0 { rank_of(&self.differentials[n - 1]) } else { 0 };
        self.size(n) - out - inc
    }
}

/// Pages `E_1 .. E_{r_max}`, `E_∞` and the abutment of the column filtration of
/// `Tot(dc)`. Cells outside the trusted window of `window` are flagged.
pub fn ss_pages(dc: &DoubleComplex, r_max: usize, window: TrustedWindow) -> Result<SpectralSequencePages> {
    if !dc.ring().is_field() {
        return Err(Error::FieldRequired);
    }
    if r_max == 0 {
        return Err(Error::WindowTooSmall("pages start at r = 1".into()));
    }
    if window.total_limit().is_none() && window != TrustedWindow::exact() {
        return Err(Error::WindowTooSmall("the truncation leaves no trusted total degree".into()));
    }
    Ok(match dc.ring().domain() {
        Domain::Field(p) => pages_over(Filtered::new(PrimeField(p), dc), dc, r_max, window),
        Domain::Integers => pages_over(Filtered::new(Rationals, dc), dc, r_max, window),
    })
}

fn pages_over<F: Field>(f: Filtered<F>, dc: &DoubleComplex, r_max: usize, window: TrustedWindow) -> SpectralSequencePages {
    let (pm, qm) = (dc.p_max(), dc.q_max());
    let table = |r: Option<usize>| {
        let mut dims = vec![vec![0; qm + 1]; pm + 1];
        let mut out_ranks = vec![vec![0; qm + 1]; pm + 1];
        let mut trusted = vec![vec![false; qm + 1]; pm + 1];
        for p in 0..=pm {
            for q in 0..=qm {
                let n = p + q;
                trusted[p][q] = window.trusts(r.unwrap_or(usize::MAX), p, q);
                if n >= f.degrees() {
                    continue;
                }
                match r {
                    Some(r) => {
                        let (pi, ri) = (p as isize, r as isize);
                        dims[p][q] = f.page_dim(n, pi, ri);
                        if p + r <= pm && q + 1 >= r && dims[p][q] > 0 {
                            out_ranks[p][q] = f.out_rank(n, pi, ri);
                        }
                    }
                    None => dims[p][q] = f.infinity_dim(n, p as isize),
                }
            }
        }
        PageTable { r, dims, trusted, out_ranks }
    };
    let pages = (1..=r_max).map(|r| table(Some(r))).collect();
    let e_infinity = table(None);
    let abutment = (0..f.degrees()).map(|n| f.cohomology_dim(n)).collect();
    let abutment_trusted = (0..f.degrees()).map(|n| window.trusts_total(n)).collect();
    SpectralSequencePages { p_max: pm, q_max: qm, window, pages, e_infinity, abutment, abutment_trusted }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use proptest::prelude::*;

    use super::*;
    use crate::linalg::{CoefficientRing, IntegerMatrix};

    fn one() -> IntegerMatrix {
        IntegerMatrix::from_rows(1, &[vec![1]])
    }

    /// `a` at (0,1), `b` at (1,0), `d_h a = d_v b = c` at (1,1), `d_h b = e` at (2,0).
    fn staircase(ring: CoefficientRing) -> DoubleComplex {
        let mut h = BTreeMap::new();
        let mut v = BTreeMap::new();
        h.insert((0, 1), one());
        h.insert((1, 0), one());
        v.insert((1, 0), one());
        DoubleComplex::new(ring, vec![vec![0, 1], vec![1, 1], vec![1, 0]], h, v).unwrap()
    }

    #[test]
    fn zero_differentials_are_degenerate() {
        let sizes = vec![vec![1, 2, 0], vec![3, 0, 1]];
        let dc = DoubleComplex::new(CoefficientRing::Rationals, sizes.clone(), BTreeMap::new(), BTreeMap::new()).unwrap();
        let ss = ss_pages(&dc, 3, TrustedWindow::exact()).unwrap();
        assert_eq!(ss.pages[0].dims, sizes);
        assert_eq!(ss.e_infinity.dims, sizes);
        assert_eq!(ss.abutment, vec![1, 5, 0, 1]);
    }

    #[test]
    fn staircase_has_a_nonzero_d2() {
        for ring in [CoefficientRing::Rationals, CoefficientRing::PrimeField(2)] {
            let ss = ss_pages(&staircase(ring), 3, TrustedWindow::exact()).unwrap();
            assert_eq!(ss.page(1).unwrap().dims, vec![vec![0, 1], vec![0, 0], vec![1, 0]]);
            assert_eq!(ss.page(2).unwrap().dims, vec![vec![0, 1], vec![0, 0], vec![1, 0]]);
            assert_eq!(ss.page(2).unwrap().out_rank(0, 1), 1);
            assert_eq!(ss.page(2).unwrap().in_rank(2, 0), 1);
            assert!(ss.page(3).unwrap().dims.iter().flatten().all(|&d| d == 0));
            assert!(ss.e_infinity.dims.iter().flatten().all(|&d| d == 0));
            assert_eq!(ss.abutment, vec![0, 0, 0, 0]);
        }
    }

    #[test]
    fn integers_are_refused() {
        let err = ss_pages(&staircase(CoefficientRing::Integers), 2, TrustedWindow::exact()).unwrap_err();
        assert!(matches!(err, Error::FieldRequired));
        let err = ss_pages(&staircase(CoefficientRing::Rationals), 0, TrustedWindow::exact()).unwrap_err();
        assert!(matches!(err, Error::WindowTooSmall(_)));
    }

    #[test]
    fn window_flags() {
        let w = TrustedWindow::truncated(3, 3, 3);
        assert!(w.trusts(1, 2, 0) && !w.trusts(1, 3, 0) && !w.trusts(1, 0, 3));
        assert!(w.trusts(2, 2, 0) && !w.trusts(2, 1, 2));
        let wide = TrustedWindow::truncated(3, 3, 9);
        assert!(wide.trusts(1, 3, 2) && !wide.trusts(1, 3, 3) && !wide.trusts(2, 3, 0));
        assert!(w.trusts(usize::MAX, 1, 1) && !w.trusts(usize::MAX, 0, 3));
        assert_eq!(w.total_limit(), Some(2));
        assert!(TrustedWindow::exact().trusts(5, 100, 100));
    }

    /// Random complex over the integers with prescribed dimensions: a direct sum
    /// of one-cell complexes and `x -> u x` pairs, conjugated by a unimodular
    /// change of basis.
    fn random_complex(shape: &[(usize, Vec<(usize, i64)>, Vec<(usize, usize, i64)>)]) -> (Vec<usize>, Vec<IntegerMatrix>, Vec<usize>) {
        let len = shape.len();
        let mut sizes = vec![0usize; len];
        let mut betti = vec![0usize; len];
        let mut pairs = Vec::new();
        for (n, (free, links, _)) in shape.iter().enumerate() {
            sizes[n] += free;
            betti[n] += free;
            for &(mult, _) in links {
                if n + 1 < len {
                    pairs.push((n, sizes[n], sizes[n + 1], mult));
                    sizes[n] += 1;
                    sizes[n + 1] += 1;
                }
            }
        }
        let mut ds: Vec<IntegerMatrix> = (0..len.saturating_sub(1)).map(|n| IntegerMatrix::zeros(sizes[n + 1], sizes[n])).collect();
        for &(n, src, dst, mult) in &pairs {
            ds[n][(dst, src)] = num_bigint::BigInt::from(mult.max(1) as i64);
        }
        // change of basis g_n in each degree: d'_n = g_{n+1} d_n g_n^{-1}
        for (n, (_, _, ops)) in shape.iter().enumerate() {
            for &(i, j, c) in ops {
                if sizes[n] < 2 {
                    break;
                }
                let (i, j) = (i % sizes[n], j % sizes[n]);
                if i == j {
                    continue;
                }
                let c = num_bigint::BigInt::from(c);
                // basis change x_i += c x_j: rows of outgoing gain, columns of incoming lose
                if n < ds.len() {
                    ds[n].add_col_multiple(j, i, &(-c.clone()));
                }
                if n > 0 {
                    ds[n - 1].add_row_multiple(i, j, &c);
                }
            }
        }
        (sizes, ds, betti)
    }

    fn tensor(a: &IntegerMatrix, b: &IntegerMatrix) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                for k in 0..b.rows() {
                    for l in 0..b.cols() {
                        m[(i * b.rows() + k, j * b.cols() + l)] = &a[(i, j)] * &b[(k, l)];
                    }
                }
            }
        }
        m
    }

    type Shape = Vec<(usize, Vec<(usize, i64)>, Vec<(usize, usize, i64)>)>;

    fn shape_strategy() -> impl Strategy<Value = Shape> {
        prop::collection::vec(
            (0usize..2, prop::collection::vec((0usize..1, 1i64..2), 0..2), prop::collection::vec((0usize..4, 0usize..4, -2i64..3), 0..4)),
            1..4,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn tensor_products_degenerate_at_e2(sa in shape_strategy(), sb in shape_strategy(), p in prop::sample::select(vec![0u64, 2, 3])) {
            let ring = if p == 0 { CoefficientRing::Rationals } else { CoefficientRing::PrimeField(p) };
            let (na, da, ba) = random_complex(&sa);
            let (nb, db, bb) = random_complex(&sb);
            let sizes: Vec<Vec<usize>> = na.iter().map(|&x| nb.iter().map(|&y| x * y).collect()).collect();
            let mut h = BTreeMap::new();
            let mut v = BTreeMap::new();
            for (pi, d) in da.iter().enumerate() {
                for (qi, &y) in nb.iter().enumerate() {
                    h.insert((pi, qi), tensor(d, &IntegerMatrix::identity(y)));
                }
            }
            for (pi, &x) in na.iter().enumerate() {
                for (qi, d) in db.iter().enumerate() {
                    v.insert((pi, qi), tensor(&IntegerMatrix::identity(x), d));
                }
            }
            let dc = DoubleComplex::new(ring, sizes.clone(), h, v).unwrap();
            let ss = ss_pages(&dc, 4, TrustedWindow::exact()).unwrap();
            let e1 = &ss.pages[0];
            for pi in 0..na.len() {
                for qi in 0..nb.len() {
                    prop_assert_eq!(e1.dim(pi, qi), na[pi] * bb[qi]);
                    prop_assert_eq!(ss.pages[1].dim(pi, qi), ba[pi] * bb[qi]);
                    prop_assert_eq!(ss.e_infinity.dim(pi, qi), ba[pi] * bb[qi]);
                }
            }
            for n in 0..ss.abutment.len() {
                prop_assert_eq!(ss.abutment[n], ss.e_infinity.total_dim(n));
            }
            // bookkeeping, monotonicity and Euler characteristic on every page
            let euler_tot: i64 = (0..ss.abutment.len())
                .map(|n| (0..=n).filter(|&pi| pi < na.len() && n - pi < nb.len()).map(|pi| sizes[pi][n - pi] as i64).sum::<i64>() * if n % 2 == 0 { 1 } else { -1 })
                .sum();
            for (idx, page) in ss.pages.iter().enumerate() {
                let euler: i64 = (0..ss.abutment.len()).map(|n| page.total_dim(n) as i64 * if n % 2 == 0 { 1 } else { -1 }).sum();
                prop_assert_eq!(euler, euler_tot);
                if let Some(next) = ss.pages.get(idx + 1) {
                    for pi in 0..na.len() {
                        for qi in 0..nb.len() {
                            prop_assert!(next.dim(pi, qi) <= page.dim(pi, qi));
                            prop_assert_eq!(next.dim(pi, qi), page.dim(pi, qi) - page.out_rank(pi, qi) - page.in_rank(pi, qi));
                        }
                    }
                }
            }
        }
    }
}
