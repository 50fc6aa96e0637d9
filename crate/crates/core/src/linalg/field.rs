//! Dense vector spaces over `F_p` and `Q`, for computations that only need
//! dimensions and explicit bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::matrix::IntegerMatrix;
use super::smith::inv_mod;

pub(crate) trait Field {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn from_bigint(&self, x: &BigInt) -> Self::E;
}

pub(crate) struct PrimeField(pub u64);

impl Field for PrimeField {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (*a + self.0 - *b) % self.0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.0 as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.0)
    }
    fn from_bigint(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.0)).to_u64().expect("residue fits")
    }
}

pub(crate) struct Rationals;

impl Field for Rationals {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn from_bigint(&self, x: &BigInt) -> BigRational {
        BigRational::from_integer(x.clone())
    }
}

/// Dense matrix over a field, stored by rows.
pub(crate) struct FieldMatrix<F: Field> {
    pub rows: Vec<Vec<F::E>>,
    pub cols: usize,
}

impl<F: Field> Clone for FieldMatrix<F> {
    fn clone(&self) -> Self {
        Self { rows: self.rows.clone(), cols: self.cols }
    }
}

impl<F: Field> FieldMatrix<F> {
    pub fn from_integer(f: &F, m: &IntegerMatrix) -> Self {
        Self { rows: (0..m.rows()).map(|i| m.row(i).iter().map(|x| f.from_bigint(x)).collect()).collect(), cols: m.cols() }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self { rows: rows.iter().map(|&i| cols.iter().map(|&j| self.rows[i][j].clone()).collect()).collect(), cols: cols.len() }
    }

    pub fn apply(&self, f: &F, v: &[F::E]) -> Vec<F::E> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(v).fold(f.zero(), |acc, (a, b)| if f.is_zero(a) || f.is_zero(b) { acc } else { f.add(&acc, &f.mul(a, b)) }))
            .collect()
    }
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub(crate) fn rref<F: Field>(f: &F, mut rows: Vec<Vec<F::E>>, cols: usize) -> (Vec<Vec<F::E>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else { continue };
        rows.swap(r, k);
        let inv = f.inv(&rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                if !f.is_zero(p) {
                    *x = f.sub(x, &f.mul(&factor, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub(crate) fn rank<F: Field>(f: &F, vectors: Vec<Vec<F::E>>, len: usize) -> usize {
    rref(f, vectors, len).0.len()
}

/// Basis of `{ x : m x = 0 }`.
pub(crate) fn kernel<F: Field>(f: &F, m: &FieldMatrix<F>) -> Vec<Vec<F::E>> {
    let (rows, pivots) = rref(f, m.rows.clone(), m.cols);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![f.zero(); m.cols];
            x[free] = f.one();
            for (row, &p) in rows.iter().zip(&pivots) {
                x[p] = f.sub(&f.zero(), &row[free]);
            }
            x
        })
        .collect()
}
