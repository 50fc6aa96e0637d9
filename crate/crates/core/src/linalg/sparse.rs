//! Sparse unit-pivot reduction of large cochain complexes.
//!
//! Each elimination cancels a pair of basis elements joined by a unit entry of
//! the differential, replacing the complex by a homotopy-equivalent smaller
//! one. The log of eliminations gives the projection onto the residual complex
//! and the inclusion back, both cochain maps.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntegerMatrix;
use super::ring::Domain;
use super::smith::inv_mod;

/// A cochain complex with sparse integer differentials.
/// `entries[n]` lists `(row in degree n+1, column in degree n, value)`.
#[derive(Clone, Debug, Default)]
pub struct SparseCochains {
    pub sizes: Vec<usize>,
    pub entries: Vec<Vec<(u32, u32, i64)>>,
}

pub(crate) trait Scalars {
    type E: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn unit_inverse(&self, a: &Self::E) -> Option<Self::E>;
    fn from_bigint(&self, x: &BigInt) -> Self::E;
    fn to_bigint(&self, a: &Self::E) -> BigInt;
}

pub(crate) struct IntegerScalars;

impl Scalars for IntegerScalars {
    type E = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn unit_inverse(&self, a: &BigInt) -> Option<BigInt> {
        a.abs().is_one().then(|| a.clone())
    }
    fn from_bigint(&self, x: &BigInt) -> BigInt {
        x.clone()
    }
    fn to_bigint(&self, a: &BigInt) -> BigInt {
        a.clone()
    }
}

pub(crate) struct ModScalars(pub u64);

impl Scalars for ModScalars {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.0 as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.0 - a
        }
    }
    fn unit_inverse(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| inv_mod(*a, self.0))
    }
    fn from_bigint(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.0)).to_u64().expect("residue fits")
    }
    fn to_bigint(&self, a: &u64) -> BigInt {
        BigInt::from(*a)
    }
}

struct Elimination<E> {
    degree: usize,
    b: u32,
    a: u32,
    inverse: E,
    column: Vec<(u32, E)>,
    row: Vec<(u32, E)>,
}

pub(crate) struct Reducer<S: Scalars> {
    s: S,
    sizes: Vec<usize>,
    alive: Vec<Vec<bool>>,
    rows: Vec<Vec<BTreeMap<u32, S::E>>>,
    cols: Vec<Vec<BTreeMap<u32, S::E>>>,
    log: Vec<Elimination<S::E>>,
}

impl<S: Scalars> Reducer<S> {
    pub(crate) fn new(s: S, complex: &SparseCochains) -> Self {
        let sizes = complex.sizes.clone();
        let ndiff = sizes.len().saturating_sub(1);
        let mut rows: Vec<Vec<BTreeMap<u32, S::E>>> = (0..ndiff).map(|n| vec![BTreeMap::new(); sizes[n + 1]]).collect();
        let mut cols: Vec<Vec<BTreeMap<u32, S::E>>> = (0..ndiff).map(|n| vec![BTreeMap::new(); sizes[n]]).collect();
        for (n, list) in complex.entries.iter().enumerate().take(ndiff) {
            for &(r, c, v) in list {
                let v = s.from_bigint(&BigInt::from(v));
                let cur = rows[n][r as usize].get(&c).cloned().unwrap_or_else(|| s.zero());
                let nv = s.add(&cur, &v);
                if s.is_zero(&nv) {
                    rows[n][r as usize].remove(&c);
                    cols[n][c as usize].remove(&r);
                } else {
                    rows[n][r as usize].insert(c, nv.clone());
                    cols[n][c as usize].insert(r, nv);
                }
            }
        }
        let alive = sizes.iter().map(|&k| vec![true; k]).collect();
        Self { s, sizes, alive, rows, cols, log: Vec::new() }
    }

    fn add_entry(&mut self, n: usize, a: u32, b: u32, delta: &S::E) {
        let cur = self.rows[n][a as usize].get(&b).cloned().unwrap_or_else(|| self.s.zero());
        let nv = self.s.add(&cur, delta);
        if self.s.is_zero(&nv) {
            self.rows[n][a as usize].remove(&b);
            self.cols[n][b as usize].remove(&a);
        } else {
            self.rows[n][a as usize].insert(b, nv.clone());
            self.cols[n][b as usize].insert(a, nv);
        }
    }

    fn eliminate(&mut self, n: usize, b: u32, a: u32) {
        let u = self.rows[n][a as usize][&b].clone();
        let inverse = self.s.unit_inverse(&u).expect("pivot must be a unit");
        let column: Vec<(u32, S::E)> = self.cols[n][b as usize].iter().filter(|(&k, _)| k != a).map(|(&k, v)| (k, v.clone())).collect();
        let row: Vec<(u32, S::E)> = self.rows[n][a as usize].iter().filter(|(&k, _)| k != b).map(|(&k, v)| (k, v.clone())).collect();
        for (a2, x) in &column {
            let f = self.s.neg(&self.s.mul(x, &inverse));
            for (b2, y) in &row {
                let delta = self.s.mul(&f, y);
                self.add_entry(n, *a2, *b2, &delta);
            }
        }
        let row_keys: Vec<u32> = self.rows[n][a as usize].keys().copied().collect();
        for k in row_keys {
            self.cols[n][k as usize].remove(&a);
        }
        self.rows[n][a as usize].clear();
        let col_keys: Vec<u32> = self.cols[n][b as usize].keys().copied().collect();
        for k in col_keys {
            self.rows[n][k as usize].remove(&b);
        }
        self.cols[n][b as usize].clear();
        if n > 0 {
            let keys: Vec<u32> = self.rows[n - 1][b as usize].keys().copied().collect();
            for k in keys {
                self.cols[n - 1][k as usize].remove(&b);
            }
            self.rows[n - 1][b as usize].clear();
        }
        if n + 1 < self.rows.len() {
            let keys: Vec<u32> = self.cols[n + 1][a as usize].keys().copied().collect();
            for k in keys {
                self.rows[n + 1][k as usize].remove(&a);
            }
            self.cols[n + 1][a as usize].clear();
        }
        self.alive[n][b as usize] = false;
        self.alive[n + 1][a as usize] = false;
        self.log.push(Elimination { degree: n, b, a, inverse, column, row });
    }

    /// Only pairs `(degree, b, a)` accepted by `allow` are cancelled.
    pub(crate) fn reduce_where(&mut self, allow: &dyn Fn(usize, u32, u32) -> bool) {
        for n in 0..self.rows.len() {
            loop {
                let mut order: Vec<(usize, u32)> = (0..self.sizes[n])
                    .filter(|&b| self.alive[n][b] && !self.cols[n][b].is_empty())
                    .map(|b| (self.cols[n][b].len(), b as u32))
                    .collect();
                order.sort_unstable();
                let mut progressed = false;
                for (_, b) in order {
                    if !self.alive[n][b as usize] {
                        continue;
                    }
                    let best = self.cols[n][b as usize]
                        .iter()
                        .filter(|(&a, v)| allow(n, b, a) && self.s.unit_inverse(v).is_some())
                        .map(|(&a, _)| (self.rows[n][a as usize].len(), a))
                        .min();
                    if let Some((_, a)) = best {
                        self.eliminate(n, b, a);
                        progressed = true;
                    }
                }
                if !progressed {
                    break;
                }
            }
        }
    }

    pub(crate) fn residual_cells(&self, q: usize) -> Vec<usize> {
        (0..self.sizes[q]).filter(|&i| self.alive[q][i]).collect()
    }

    /// Remaining differential `residual(q) -> residual(q+1)` as a dense matrix.
    pub(crate) fn residual_differential(&self, q: usize) -> IntegerMatrix {
        let src = self.residual_cells(q);
        let dst = self.residual_cells(q + 1);
        let mut m = IntegerMatrix::zeros(dst.len(), src.len());
        if q < self.rows.len() {
            let pos: BTreeMap<usize, usize> = src.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            for (i, &a) in dst.iter().enumerate() {
                for (b, v) in &self.rows[q][a] {
                    m[(i, pos[&(*b as usize)])] = self.s.to_bigint(v);
                }
            }
        }
        m
    }

    /// Projection of a full cochain of degree `q` onto the residual basis.
    pub(crate) fn project(&self, q: usize, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.sizes[q]);
        let mut w: Vec<S::E> = v.iter().map(|x| self.s.from_bigint(x)).collect();
        for e in &self.log {
            if e.degree == q {
                w[e.b as usize] = self.s.zero();
            } else if e.degree + 1 == q {
                let va = w[e.a as usize].clone();
                if !self.s.is_zero(&va) {
                    let f = self.s.neg(&self.s.mul(&va, &e.inverse));
                    for (a2, x) in &e.column {
                        let cur = &w[*a2 as usize];
                        w[*a2 as usize] = self.s.add(cur, &self.s.mul(&f, x));
                    }
                    w[e.a as usize] = self.s.zero();
                }
            }
        }
        self.residual_cells(q).into_iter().map(|i| self.s.to_bigint(&w[i])).collect()
    }

    /// Inclusion of a residual cochain of degree `q` into the full complex.
    pub(crate) fn include(&self, q: usize, r: &[BigInt]) -> Vec<BigInt> {
        let cells = self.residual_cells(q);
        assert_eq!(r.len(), cells.len());
        let mut w: Vec<S::E> = vec![self.s.zero(); self.sizes[q]];
        for (&c, x) in cells.iter().zip(r) {
            w[c] = self.s.from_bigint(x);
        }
        for e in self.log.iter().rev() {
            if e.degree == q {
                let mut acc = self.s.zero();
                for (b2, y) in &e.row {
                    acc = self.s.add(&acc, &self.s.mul(y, &w[*b2 as usize]));
                }
                w[e.b as usize] = self.s.neg(&self.s.mul(&e.inverse, &acc));
            }
        }
        w.iter().map(|x| self.s.to_bigint(x)).collect()
    }
}

/// Reduction over the domain of the coefficient ring.
pub(crate) enum Reduction {
    Integers(Reducer<IntegerScalars>),
    Field(Reducer<ModScalars>),
}

impl Reduction {
    pub(crate) fn compute(domain: Domain, complex: &SparseCochains) -> Self {
        Self::compute_where(domain, complex, &|_, _, _| true)
    }

    pub(crate) fn compute_where(domain: Domain, complex: &SparseCochains, allow: &dyn Fn(usize, u32, u32) -> bool) -> Self {
        match domain {
            Domain::Integers => {
                let mut r = Reducer::new(IntegerScalars, complex);
                r.reduce_where(allow);
                Reduction::Integers(r)
            }
            Domain::Field(p) => {
                let mut r = Reducer::new(ModScalars(p), complex);
                r.reduce_where(allow);
                Reduction::Field(r)
            }
        }
    }

    pub(crate) fn residual_cells(&self, q: usize) -> Vec<usize> {
        match self {
            Reduction::Integers(r) => r.residual_cells(q),
            Reduction::Field(r) => r.residual_cells(q),
        }
    }

    pub(crate) fn residual_size(&self, q: usize) -> usize {
        match self {
            Reduction::Integers(r) => r.residual_cells(q).len(),
            Reduction::Field(r) => r.residual_cells(q).len(),
        }
    }

    pub(crate) fn residual_differential(&self, q: usize) -> IntegerMatrix {
        match self {
            Reduction::Integers(r) => r.residual_differential(q),
            Reduction::Field(r) => r.residual_differential(q),
        }
    }

    pub(crate) fn project(&self, q: usize, v: &[BigInt]) -> Vec<BigInt> {
        match self {
            Reduction::Integers(r) => r.project(q, v),
            Reduction::Field(r) => r.project(q, v),
        }
    }

    pub(crate) fn include(&self, q: usize, v: &[BigInt]) -> Vec<BigInt> {
        match self {
            Reduction::Integers(r) => r.include(q, v),
            Reduction::Field(r) => r.include(q, v),
        }
    }
}
