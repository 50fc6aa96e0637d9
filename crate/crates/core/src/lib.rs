//! Descent spectral sequences for finite simplicial models with constant
//! coefficients, with checkers for the vanishing line `E_2^{pq} = 0` for
//! `q < pk` and the cosimplicial machinery behind it.

pub mod error;
pub mod bar;
pub mod complexes;
pub mod cosimplicial;
pub mod descent;
pub mod linalg;
pub mod sset;

pub use error::{Error, Result};
