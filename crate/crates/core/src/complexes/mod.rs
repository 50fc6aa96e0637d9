//! Cochain complexes, double complexes and the spectral-sequence page engine.

mod double;
mod pages;

pub use double::{DoubleComplex, TotalComplex};
pub use pages::{ss_pages, PageTable, SpectralSequencePages, TrustedWindow};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{CoefficientRing, FgAbelianGroup, IntegerMatrix, Lattice, Subquotient};

/// One degree of a cochain complex: the subquotient `span / relations` of a
/// free module. Free terms have the whole module as span.
#[derive(Clone, Debug)]
pub struct Term {
    pub span: Lattice,
    pub relations: Lattice,
}

impl Term {
    pub fn free(ring: CoefficientRing, rank: usize) -> Self {
        let domain = ring.domain();
        let relations = match ring.modulus() {
            Some(m) => Lattice::multiples(domain, rank, m),
            None => Lattice::zero(domain, rank),
        };
        Self { span: Lattice::full(domain, rank), relations }
    }

    /// `Z^k / diag(orders)`; an order of `0` leaves the summand free.
    pub fn presented(ring: CoefficientRing, orders: &[BigInt]) -> Self {
        let domain = ring.domain();
        let k = orders.len();
        let gens = IntegerMatrix::diagonal(k, k, orders);
        Self { span: Lattice::full(domain, k), relations: Lattice::from_generators(domain, k, &gens) }
    }

    pub fn ambient(&self) -> usize {
        self.span.ambient()
    }

    pub fn group(&self, ring: CoefficientRing) -> Result<FgAbelianGroup> {
        Ok(Subquotient::new(self.span.clone(), self.relations.clone(), ring.drops_torsion())?.group())
    }
}

/// Degrees `0..len`, with `differentials[n]` mapping the ambient of degree `n`
/// to that of degree `n + 1`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    ring: CoefficientRing,
    terms: Vec<Term>,
    differentials: Vec<IntegerMatrix>,
}

impl CochainComplex {
    pub fn new(ring: CoefficientRing, terms: Vec<Term>, differentials: Vec<IntegerMatrix>) -> Result<Self> {
        let domain = ring.domain();
        if terms.is_empty() && differentials.is_empty() {
            return Ok(Self { ring, terms, differentials });
        }
        if differentials.len() + 1 != terms.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len().saturating_sub(1),
                differentials.len()
            )));
        }
        let differentials: Vec<IntegerMatrix> = differentials.into_iter().map(|d| d.reduced(domain)).collect();
        for (n, d) in differentials.iter().enumerate() {
            if d.cols() != terms[n].ambient() || d.rows() != terms[n + 1].ambient() {
                return Err(Error::DimensionMismatch(format!(
                    "d^{n} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    terms[n + 1].ambient(),
                    terms[n].ambient()
                )));
            }
            if !terms[n + 1].span.contains_lattice(&terms[n].span.image(d)) {
                return Err(Error::RestrictionEscapes { degree: n });
            }
            if !terms[n + 1].relations.contains_lattice(&terms[n].relations.image(d)) {
                return Err(Error::NotWellDefined(format!("d^{n} does not preserve relations")));
            }
        }
        for n in 0..differentials.len().saturating_sub(1) {
            let dd = differentials[n + 1].mul(&differentials[n]);
            if !terms[n + 2].relations.contains_lattice(&terms[n].span.image(&dd)) {
                return Err(Error::CompositionNonzero { degree: n });
            }
        }
        Ok(Self { ring, terms, differentials })
    }

    /// Complex of free modules of the given ranks.
    pub fn free(ring: CoefficientRing, ranks: &[usize], differentials: Vec<IntegerMatrix>) -> Result<Self> {
        let terms = ranks.iter().map(|&r| Term::free(ring, r)).collect();
        Self::new(ring, terms, differentials)
    }

    pub fn zero(ring: CoefficientRing, len: usize) -> Self {
        let terms: Vec<Term> = (0..len).map(|_| Term::free(ring, 0)).collect();
        let differentials = (1..len).map(|_| IntegerMatrix::zeros(0, 0)).collect();
        Self { ring, terms, differentials }
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, n: usize) -> &Term {
        &self.terms[n]
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn differential(&self, n: usize) -> &IntegerMatrix {
        &self.differentials[n]
    }

    pub fn differentials(&self) -> &[IntegerMatrix] {
        &self.differentials
    }

    pub fn ambient_ranks(&self) -> Vec<usize> {
        self.terms.iter().map(Term::ambient).collect()
    }

    /// The term in degree `n` as an abstract group.
    pub fn group(&self, n: usize) -> Result<FgAbelianGroup> {
        self.terms[n].group(self.ring)
    }

    /// Cohomology in degree `n`. In the top degree the outgoing differential is
    /// taken to be zero, so the result there is `span / (image + relations)`.
    pub fn cohomology_subquotient(&self, n: usize) -> Result<Subquotient> {
        let term = &self.terms[n];
        let cycles = match self.differentials.get(n) {
            Some(d) => term.span.preimage(d, &self.terms[n + 1].relations),
            None => term.span.clone(),
        };
        let boundaries = match n.checked_sub(1) {
            Some(m) => self.terms[m].span.image(&self.differentials[m]).sum(&term.relations),
            None => term.relations.clone(),
        };
        Subquotient::new(cycles, boundaries, self.ring.drops_torsion())
    }

    /// Degreewise cohomology with generator lifts.
    pub fn cohomology(&self) -> Result<Vec<FgAbelianGroup>> {
        (0..self.len()).map(|n| Ok(self.cohomology_subquotient(n)?.group())).collect()
    }
}

/// Degreewise cohomology; see [`CochainComplex::cohomology`].
pub fn cohomology(complex: &CochainComplex) -> Result<Vec<FgAbelianGroup>> {
    complex.cohomology()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(ring: CoefficientRing) -> CochainComplex {
        let d0 = IntegerMatrix::from_rows(3, &[vec![-1, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]]);
        CochainComplex::free(ring, &[3, 3], vec![d0]).unwrap()
    }

    #[test]
    fn circle_cochains() {
        let h = circle(CoefficientRing::Integers).cohomology().unwrap();
        assert_eq!(h, vec![FgAbelianGroup::free(1), FgAbelianGroup::free(1)]);
        let h = circle(CoefficientRing::IntegersMod(4)).cohomology().unwrap();
        assert_eq!(h, vec![FgAbelianGroup::cyclic(4), FgAbelianGroup::cyclic(4)]);
    }

    #[test]
    fn zero_complex() {
        let c = CochainComplex::zero(CoefficientRing::Integers, 3);
        assert!(c.cohomology().unwrap().iter().all(FgAbelianGroup::is_zero));
    }

    #[test]
    fn rejects_nonzero_square() {
        let one = IntegerMatrix::identity(1);
        let err = CochainComplex::free(CoefficientRing::Integers, &[1, 1, 1], vec![one.clone(), one]).unwrap_err();
        assert_eq!(err, Error::CompositionNonzero { degree: 0 });
    }

    #[test]
    fn presented_terms_carry_torsion() {
        let ring = CoefficientRing::Integers;
        let t0 = Term::presented(ring, &[BigInt::from(4)]);
        let t1 = Term::presented(ring, &[BigInt::from(2)]);
        // Z/4 --(1)--> Z/2 is onto with kernel Z/2
        let c = CochainComplex::new(ring, vec![t0, t1], vec![IntegerMatrix::identity(1)]).unwrap();
        let h = c.cohomology().unwrap();
        assert_eq!(h[0], FgAbelianGroup::cyclic(2));
        assert!(h[1].is_zero());
    }
}
