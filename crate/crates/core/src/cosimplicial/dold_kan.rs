use std::collections::HashMap;

use serde::Serialize;

use super::{associated_complex, normalization, validate, CosimplicialAbelianGroup};
use crate::complexes::CochainComplex;
use crate::error::{Error, Result};
use crate::linalg::{FgAbelianGroup, IntegerMatrix, Lattice};

/// A monotone surjection `[n] ->> [k]`, stored by its values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surjection {
    pub values: Vec<usize>,
}

impl Surjection {
    pub fn source(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target(&self) -> usize {
        *self.values.last().expect("nonempty")
    }

    /// Positions `j >= 1` with `σ(j) = σ(j-1) + 1`.
    pub fn cuts(&self) -> Vec<usize> {
        (1..self.values.len()).filter(|&j| self.values[j] != self.values[j - 1]).collect()
    }

    fn from_cuts(n: usize, cuts: &[usize]) -> Self {
        let mut values = Vec::with_capacity(n + 1);
        let mut v = 0;
        for j in 0..=n {
            if cuts.contains(&j) {
                v += 1;
            }
            values.push(v);
        }
        Self { values }
    }
}

fn combinations(pool: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for idx in start..pool.len() {
        cur.push(pool[idx]);
        combinations(pool, k, idx + 1, cur, out);
        cur.pop();
    }
}

/// All monotone surjections out of `[n]`: target dimension descending (the
/// identity first), then cut positions in lexicographic order.
pub fn surjections(n: usize) -> Vec<Surjection> {
    let pool: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    for k in (0..=n).rev() {
        let mut cuts = Vec::new();
        combinations(&pool, k, 0, &mut Vec::new(), &mut cuts);
        out.extend(cuts.iter().map(|c| Surjection::from_cuts(n, c)));
    }
    out
}

/// Summand layout of `Γ^n`: the surjections with nonzero `C^k`, and offsets.
struct Layout {
    summands: Vec<Surjection>,
    offsets: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
    size: usize,
}

impl Layout {
    fn new(n: usize, dims: &[usize]) -> Self {
        let summands: Vec<Surjection> = surjections(n).into_iter().filter(|s| s.target() < dims.len() && dims[s.target()] > 0).collect();
        let mut offsets = Vec::with_capacity(summands.len());
        let mut size = 0;
        for s in &summands {
            offsets.push(size);
            size += dims[s.target()];
        }
        let index = summands.iter().enumerate().map(|(i, s)| (s.values.clone(), i)).collect();
        Self { summands, offsets, index, size }
    }
}

/// Matrix of `θ_*: Γ^m -> Γ^n` for a monotone `θ: [m] -> [n]`.
fn operator(theta: &[usize], src: &Layout, dst: &Layout, dims: &[usize], ds: &[IntegerMatrix]) -> IntegerMatrix {
    let mut m = IntegerMatrix::zeros(dst.size, src.size);
    for (t, sigma) in dst.summands.iter().enumerate() {
        let k = sigma.target();
        let phi: Vec<usize> = theta.iter().map(|&j| sigma.values[j]).collect();
        let hits = |v: usize| phi.contains(&v);
        let row0 = dst.offsets[t];
        if (0..=k).all(hits) {
            if let Some(&s) = src.index.get(&phi) {
                let col0 = src.offsets[s];
                for a in 0..dims[k] {
                    m[(row0 + a, col0 + a)] += 1;
                }
            }
        } else if k >= 1 && !hits(0) && (1..=k).all(hits) {
            let tau: Vec<usize> = phi.iter().map(|v| v - 1).collect();
            if let Some(&s) = src.index.get(&tau) {
                let col0 = src.offsets[s];
                let d = &ds[k - 1];
                for a in 0..d.rows() {
                    for b in 0..d.cols() {
                        m[(row0 + a, col0 + b)] += &d[(a, b)];
                    }
                }
            }
        }
    }
    m
}

fn free_data(c: &CochainComplex) -> Result<(Vec<usize>, Vec<IntegerMatrix>)> {
    for (n, t) in c.terms().iter().enumerate() {
        if !t.span.same_as(&Lattice::full(t.span.domain(), t.ambient())) {
            return Err(Error::InvalidInput(format!("degree {n} is not a free module")));
        }
    }
    Ok((c.ambient_ranks(), c.differentials().to_vec()))
}

/// `Γ(C)` on levels `0..=top`.
pub fn dold_kan_gamma_to(c: &CochainComplex, top: usize) -> Result<CosimplicialAbelianGroup> {
    let (dims, ds) = free_data(c)?;
    let layouts: Vec<Layout> = (0..=top).map(|n| Layout::new(n, &dims)).collect();
    let mut cofaces = vec![Vec::new()];
    for n in 1..=top {
        cofaces.push(
            (0..=n)
                .map(|i| {
                    let theta: Vec<usize> = (0..n).map(|j| if j < i { j } else { j + 1 }).collect();
                    operator(&theta, &layouts[n - 1], &layouts[n], &dims, &ds)
                })
                .collect(),
        );
    }
    let codegeneracies = (0..top)
        .map(|n| {
            (0..=n)
                .map(|i| {
                    let theta: Vec<usize> = (0..=n + 1).map(|j| if j <= i { j } else { j - 1 }).collect();
                    operator(&theta, &layouts[n + 1], &layouts[n], &dims, &ds)
                })
                .collect()
        })
        .collect();
    let sizes: Vec<usize> = layouts.iter().map(|l| l.size).collect();
    CosimplicialAbelianGroup::free(c.ring(), &sizes, cofaces, codegeneracies)
}

/// `Γ(C)` on levels `0..=L` where `L` is the top degree of `C`.
pub fn dold_kan_gamma(c: &CochainComplex) -> Result<CosimplicialAbelianGroup> {
    dold_kan_gamma_to(c, c.len().saturating_sub(1))
}

/// Levelwise matrices of `Γ(f)` for a chain map `f: C -> C'` given degreewise.
pub fn gamma_morphism(source: &CochainComplex, target: &CochainComplex, f: &[IntegerMatrix], top: usize) -> Result<Vec<IntegerMatrix>> {
    let (sd, _) = free_data(source)?;
    let (td, _) = free_data(target)?;
    if f.len() != sd.len() || sd.len() != td.len() {
        return Err(Error::DimensionMismatch("chain map needs one matrix per degree".into()));
    }
    for (k, m) in f.iter().enumerate() {
        if m.rows() != td[k] || m.cols() != sd[k] {
            return Err(Error::DimensionMismatch(format!("chain map in degree {k} has the wrong shape")));
        }
    }
    Ok((0..=top)
        .map(|n| {
            let sl = Layout::new(n, &sd);
            let tl = Layout::new(n, &td);
            let mut m = IntegerMatrix::zeros(tl.size, sl.size);
            for (si, s) in sl.summands.iter().enumerate() {
                if let Some(&ti) = tl.index.get(&s.values) {
                    let fk = &f[s.target()];
                    for a in 0..fk.rows() {
                        for b in 0..fk.cols() {
                            m[(tl.offsets[ti] + a, sl.offsets[si] + b)] = fk[(a, b)].clone();
                        }
                    }
                }
            }
            m
        })
        .collect())
}

/// One degree of the round trip `C -> Γ(C) -> N(Γ(C))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoldKanDegree {
    pub n: usize,
    pub complex: FgAbelianGroup,
    pub normalized: FgAbelianGroup,
    /// `N^n` is exactly the summand of the identity surjection.
    pub identity_summand: bool,
    /// The restricted coboundary on that summand is the differential of `C`.
    pub differential_matches: bool,
    pub h_complex: FgAbelianGroup,
    pub h_gamma: FgAbelianGroup,
    pub h_normalized: FgAbelianGroup,
}

impl DoldKanDegree {
    pub fn passed(&self) -> bool {
        self.complex == self.normalized
            && self.identity_summand
            && self.differential_matches
            && self.h_complex == self.h_gamma
            && self.h_gamma == self.h_normalized
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DoldKanReport {
    pub level_sizes: Vec<usize>,
    pub cosimplicial_identities: bool,
    pub degrees: Vec<DoldKanDegree>,
}

impl DoldKanReport {
    pub fn passed(&self) -> bool {
        self.cosimplicial_identities && self.degrees.iter().all(DoldKanDegree::passed)
    }
}

/// Builds `Γ(C)` one level past the top of `C`, so that the cohomology of its
/// associated complex is exact in every degree of `C`, and compares.
pub fn dold_kan_roundtrip(c: &CochainComplex) -> Result<DoldKanReport> {
    let top = c.len().checked_sub(1).ok_or_else(|| Error::InvalidInput("empty complex".into()))?;
    let (dims, _) = free_data(c)?;
    let g = dold_kan_gamma_to(c, top + 1)?;
    let cosimplicial_identities = validate(&g).is_valid();
    let nc = normalization(&g)?;
    let h_c = c.cohomology()?;
    let h_g = associated_complex(&g)?.cohomology()?;
    let h_n = nc.cohomology()?;
    let domain = c.ring().domain();
    let sizes = g.level_sizes();
    let mut degrees = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let first: Vec<usize> = (0..dims[n]).collect();
        let summand = IntegerMatrix::identity(sizes[n]).select_columns(&first);
        let identity_summand = nc.term(n).span.same_as(&Lattice::from_generators(domain, sizes[n], &summand));
        let differential_matches = n == top || {
            let rows: Vec<usize> = (0..dims[n + 1]).collect();
            let restricted = nc.differential(n).select_rows(&rows).select_columns(&first);
            restricted.reduced(domain) == c.differential(n).clone().reduced(domain)
        };
        degrees.push(DoldKanDegree {
            n,
            complex: c.group(n)?,
            normalized: nc.group(n)?,
            identity_summand,
            differential_matches,
            h_complex: h_c[n].clone(),
            h_gamma: h_g[n].clone(),
            h_normalized: h_n[n].clone(),
        });
    }
    Ok(DoldKanReport { level_sizes: sizes, cosimplicial_identities, degrees })
}
