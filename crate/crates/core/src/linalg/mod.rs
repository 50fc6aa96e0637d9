//! Exact linear algebra over the integers and prime fields.

pub(crate) mod field;
pub mod group;
pub mod homology;
pub mod lattice;
pub mod matrix;
pub mod ring;
pub mod smith;
pub(crate) mod sparse;

pub use group::{induced_map, FgAbelianGroup, Subquotient};
pub use homology::{cohomology_at, cohomology_mod_m, cohomology_subquotient};
pub use lattice::{kernel_basis, Lattice};
pub(crate) use lattice::row_basis;
pub use matrix::IntegerMatrix;
pub use ring::{CoefficientRing, Domain};
pub use smith::{divisors_over, rank_over, smith_normal_form, smith_over, SmithDecomposition};
