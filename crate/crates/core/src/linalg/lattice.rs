//! Submodules of a free module `D^n` over the working domain, with membership,
//! coordinates, sums, intersections and preimages.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::matrix::IntegerMatrix;
use super::ring::Domain;
use super::smith::{inv_mod, smith_over};

#[derive(Clone, Debug)]
pub struct Lattice {
    domain: Domain,
    ambient: usize,
    /// `ambient x rank`, full column rank.
    basis: IntegerMatrix,
    /// Left transform with `solver * basis = diag(divisors)` on the top block.
    solver: IntegerMatrix,
    divisors: Vec<BigInt>,
}

impl Lattice {
    pub fn from_generators(domain: Domain, ambient: usize, gens: &IntegerMatrix) -> Self {
        assert_eq!(gens.rows(), ambient, "generator rows must match the ambient rank");
        let gens = gens.clone().reduced(domain);
        let s = smith_over(domain, &gens);
        let r = s.rank();
        let keep: Vec<usize> = (0..r).collect();
        let basis = gens.mul(&s.v.select_columns(&keep)).reduced(domain);
        Self { domain, ambient, basis, solver: s.u, divisors: s.divisors }
    }

    pub fn full(domain: Domain, ambient: usize) -> Self {
        Self::from_generators(domain, ambient, &IntegerMatrix::identity(ambient))
    }

    pub fn zero(domain: Domain, ambient: usize) -> Self {
        Self::from_generators(domain, ambient, &IntegerMatrix::zeros(ambient, 0))
    }

    /// `m * D^n`; the zero lattice over a field when `p | m`.
    pub fn multiples(domain: Domain, ambient: usize, m: u64) -> Self {
        Self::from_generators(domain, ambient, &IntegerMatrix::scalar(ambient, &BigInt::from(m)))
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    /// Solves `basis * c = x`; `None` when `x` is not in the lattice.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(x.len(), self.ambient);
        let y: Vec<BigInt> = self.solver.mul_vec(x).into_iter().map(|v| self.domain.reduce(v)).collect();
        let r = self.rank();
        if y[r..].iter().any(|v| !self.domain.is_zero(v)) {
            return None;
        }
        let mut c = Vec::with_capacity(r);
        for (yi, di) in y[..r].iter().zip(&self.divisors) {
            match self.domain {
                Domain::Integers => {
                    let (q, rem) = yi.div_rem(di);
                    if !rem.is_zero() {
                        return None;
                    }
                    c.push(q);
                }
                // divisors are 1 over a field
                Domain::Field(_) => c.push(yi.clone()),
            }
        }
        Some(c)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.coordinates(x).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.columns().iter().all(|c| self.contains(c))
    }

    pub fn same_as(&self, other: &Lattice) -> bool {
        self.rank() == other.rank() && self.contains_lattice(other) && other.contains_lattice(self)
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.ambient, other.ambient);
        Self::from_generators(self.domain, self.ambient, &self.basis.hstack(&other.basis))
    }

    /// Image under `m: D^ambient -> D^rows`.
    pub fn image(&self, m: &IntegerMatrix) -> Lattice {
        assert_eq!(m.cols(), self.ambient);
        Self::from_generators(self.domain, m.rows(), &m.mul(&self.basis))
    }

    /// `{ x in self : m x in target }`.
    pub fn preimage(&self, m: &IntegerMatrix, target: &Lattice) -> Lattice {
        assert_eq!(m.cols(), self.ambient);
        assert_eq!(m.rows(), target.ambient);
        let k = self.rank();
        let system = m.mul(&self.basis).hstack(&target.basis.neg()).reduced(self.domain);
        let kernel = kernel_basis(self.domain, &system);
        let top: Vec<usize> = (0..k).collect();
        let coeffs = kernel.select_rows(&top);
        Self::from_generators(self.domain, self.ambient, &self.basis.mul(&coeffs))
    }

    pub fn intersection(&self, other: &Lattice) -> Lattice {
        self.preimage(&IntegerMatrix::identity(self.ambient), other)
    }
}

/// Columns spanning the kernel of `m` (saturated over the integers).
pub fn kernel_basis(domain: Domain, m: &IntegerMatrix) -> IntegerMatrix {
    let s = smith_over(domain, m);
    let idx: Vec<usize> = (s.rank()..m.cols()).collect();
    s.v.select_columns(&idx).reduced(domain)
}

/// Rows spanning the same submodule as the rows of `m`, in echelon form.
/// Inserts rows one at a time, so only the echelon basis is ever dense.
pub(crate) fn row_basis(domain: Domain, m: &IntegerMatrix) -> IntegerMatrix {
    let cols = m.cols();
    let mut basis: Vec<Option<Vec<BigInt>>> = vec![None; cols];
    for i in 0..m.rows() {
        let mut v: Vec<BigInt> = m.row(i).iter().map(|x| domain.reduce(x.clone())).collect();
        while let Some(c) = v.iter().position(|x| !x.is_zero()) {
            let Some(b) = basis[c].as_mut() else {
                basis[c] = Some(v);
                break;
            };
            match domain {
                Domain::Field(p) => {
                    let lead = u64::try_from(&b[c]).expect("reduced residue");
                    let f = &v[c] * BigInt::from(inv_mod(lead, p));
                    for (x, y) in v.iter_mut().zip(b.iter()) {
                        *x = domain.reduce(&*x - &f * y);
                    }
                }
                Domain::Integers => {
                    if (&v[c]).is_multiple_of(&b[c]) {
                        let f = &v[c] / &b[c];
                        for (x, y) in v.iter_mut().zip(b.iter()) {
                            *x -= &f * y;
                        }
                    } else {
                        let e = b[c].extended_gcd(&v[c]);
                        let (bc, vc) = (&b[c] / &e.gcd, &v[c] / &e.gcd);
                        let new_b: Vec<BigInt> = b.iter().zip(&v).map(|(y, x)| &e.x * y + &e.y * x).collect();
                        let new_v: Vec<BigInt> = b.iter().zip(&v).map(|(y, x)| &bc * x - &vc * y).collect();
                        *b = new_b;
                        v = new_v;
                    }
                }
            }
        }
    }
    let rows: Vec<Vec<BigInt>> = basis.into_iter().flatten().collect();
    let mut out = IntegerMatrix::zeros(rows.len(), cols);
    for (i, r) in rows.into_iter().enumerate() {
        for (j, x) in r.into_iter().enumerate() {
            out[(i, j)] = x;
        }
    }
    out
}
