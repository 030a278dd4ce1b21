//! Exact arithmetic in number fields together with the adelic machinery
//! needed to count lattice points of replete ideals and to verify theta
//! (Poisson summation) identities and asymptotic count laws numerically.
//!
//! The crate is organized bottom-up:
//!
//! - [`rat`], [`interval`], [`poly`], [`matrix`], [`roots`]: exact rational
//!   and enclosure arithmetic primitives.
//! - [`field`]: number fields, exact element arithmetic, certified
//!   archimedean embeddings, the different ideal.
//! - [`ideal`]: fractional ideals in Hermite Normal Form, replete ideals,
//!   idele presentations.
//! - [`lattice`]: Minkowski embeddings, exact membership tests, and
//!   lattice-point counting of the sets H0.
//! - [`adelic`]: self-dual volumes, Gaussian test functions, theta sums and
//!   the Poisson-summation check, Minkowski growth and surface area.
//! - [`harness`]: replete-ideal scan families, leading-constant and error
//!   exponent estimation, CSV emission.

pub mod adelic;
pub mod error;
pub mod field;
pub mod harness;
pub mod ideal;
pub mod interval;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod rat;
pub mod roots;

pub use error::{Error, Result};
pub use field::{FieldElement, NumberField};
pub use ideal::{FracIdeal, IdelePresentation, RepleteIdeal};
