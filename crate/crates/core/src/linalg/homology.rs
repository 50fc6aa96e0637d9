use num_bigint::BigInt;

use super::group::{FgAbelianGroup, Subquotient};
use super::lattice::Lattice;
use super::matrix::IntegerMatrix;
use super::ring::CoefficientRing;
use crate::error::{Error, Result};

/// `ker(d_out) / im(d_in)` for free cochain groups with coefficients in `ring`,
/// as a presented subquotient of the middle group.
pub fn cohomology_subquotient(d_in: &IntegerMatrix, d_out: &IntegerMatrix, ring: CoefficientRing) -> Result<Subquotient> {
    let domain = ring.domain();
    let n = d_in.rows();
    if d_out.cols() != n {
        return Err(Error::DimensionMismatch(format!("d_in has {} rows but d_out has {} columns", n, d_out.cols())));
    }
    let (rel_mid, rel_out) = match ring.modulus() {
        Some(m) => (Lattice::multiples(domain, n, m), Lattice::multiples(domain, d_out.rows(), m)),
        None => (Lattice::zero(domain, n), Lattice::zero(domain, d_out.rows())),
    };
    let composite = d_out.mul(d_in).reduced(domain);
    let vanishes = match ring.modulus() {
        Some(m) => (0..composite.rows()).all(|i| composite.row(i).iter().all(|x| (x % BigInt::from(m)) == BigInt::from(0))),
        None => composite.is_zero_in(domain),
    };
    if !vanishes {
        return Err(Error::CompositionNonzero { degree: 0 });
    }
    let cycles = Lattice::full(domain, n).preimage(d_out, &rel_out);
    let boundaries = Lattice::full(domain, d_in.cols()).image(d_in).sum(&rel_mid);
    Subquotient::new(cycles, boundaries, ring.drops_torsion())
}

/// Cohomology at the middle of `· --d_in--> · --d_out--> ·` with generator lifts.
pub fn cohomology_at(d_in: &IntegerMatrix, d_out: &IntegerMatrix, ring: CoefficientRing) -> Result<FgAbelianGroup> {
    Ok(cohomology_subquotient(d_in, d_out, ring)?.group())
}

/// Cohomology of the complex reduced mod `m`, computed over the integers with
/// `m * identity` adjoined to the relations.
pub fn cohomology_mod_m(d_in: &IntegerMatrix, d_out: &IntegerMatrix, m: u64) -> Result<FgAbelianGroup> {
    if m < 2 {
        return Err(Error::InvalidInput("modulus must be at least 2".into()));
    }
    cohomology_at(d_in, d_out, CoefficientRing::IntegersMod(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    /// Coboundary matrices of the boundary of the 2-simplex: vertices 0,1,2;
    /// edges 01, 02, 12.
    fn circle() -> (IntegerMatrix, IntegerMatrix, IntegerMatrix) {
        let d0 = IntegerMatrix::from_rows(3, &[vec![-1, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]]);
        (IntegerMatrix::zeros(3, 0), d0, IntegerMatrix::zeros(0, 3))
    }

    /// Two vertices v, w; loops a, b at v; edge c from w to v; triangles
    /// U = (a, b, a), L = (b, c, c) as face lists.
    pub(crate) fn rp2() -> (IntegerMatrix, IntegerMatrix) {
        // coboundary C^0 -> C^1: (dz)(e) = z(d0 e) - z(d1 e)
        let d0 = IntegerMatrix::from_rows(2, &[vec![0, 0], vec![0, 0], vec![1, -1]]);
        // C^1 -> C^2: (dz)(T) = z(d0 T) - z(d1 T) + z(d2 T)
        let d1 = IntegerMatrix::from_rows(3, &[vec![2, -1, 0], vec![0, 1, 0]]);
        (d0, d1)
    }

    #[test]
    fn circle_over_integers() {
        let (z, d0, top) = circle();
        assert_eq!(cohomology_at(&z, &d0, CoefficientRing::Integers).unwrap(), FgAbelianGroup::free(1));
        assert_eq!(cohomology_at(&d0, &top, CoefficientRing::Integers).unwrap(), FgAbelianGroup::free(1));
    }

    #[test]
    fn circle_mod_five() {
        let (z, d0, top) = circle();
        assert_eq!(cohomology_mod_m(&z, &d0, 5).unwrap(), FgAbelianGroup::cyclic(5));
        assert_eq!(cohomology_mod_m(&d0, &top, 5).unwrap(), FgAbelianGroup::cyclic(5));
    }

    #[test]
    fn zero_differentials() {
        let g = cohomology_at(&IntegerMatrix::zeros(4, 0), &IntegerMatrix::zeros(0, 4), CoefficientRing::Integers).unwrap();
        assert_eq!(g, FgAbelianGroup::free(4));
        let g = cohomology_mod_m(&IntegerMatrix::zeros(1, 0), &IntegerMatrix::zeros(0, 1), 4).unwrap();
        assert_eq!(g, FgAbelianGroup::cyclic(4));
    }

    #[test]
    fn projective_plane() {
        let (d0, d1) = rp2();
        let z = CoefficientRing::Integers;
        assert_eq!(cohomology_at(&IntegerMatrix::zeros(2, 0), &d0, z).unwrap(), FgAbelianGroup::free(1));
        assert_eq!(cohomology_at(&d0, &d1, z).unwrap(), FgAbelianGroup::zero());
        assert_eq!(cohomology_at(&d1, &IntegerMatrix::zeros(0, 2), z).unwrap(), FgAbelianGroup::cyclic(2));
        for (i, (a, c)) in [
            (IntegerMatrix::zeros(2, 0), d0.clone()),
            (d0.clone(), d1.clone()),
            (d1.clone(), IntegerMatrix::zeros(0, 2)),
        ]
        .into_iter()
        .enumerate()
        {
            assert_eq!(cohomology_mod_m(&a, &c, 2).unwrap(), FgAbelianGroup::cyclic(2), "degree {i}");
            let f2 = cohomology_at(&a, &c, CoefficientRing::PrimeField(2)).unwrap();
            assert_eq!((f2.rank, f2.torsion.len()), (1, 0));
        }
    }

    #[test]
    fn nonzero_composite_is_rejected() {
        let a = IntegerMatrix::from_rows(1, &[vec![1]]);
        assert_eq!(cohomology_at(&a, &a, CoefficientRing::Integers), Err(Error::CompositionNonzero { degree: 0 }));
        let two = IntegerMatrix::from_rows(1, &[vec![2]]);
        assert!(cohomology_mod_m(&two, &IntegerMatrix::from_rows(1, &[vec![1]]), 2).is_ok());
        let _ = b(0);
    }
}
