//! Cyclic combinatorial 3-manifolds described by difference cycles.
//!
//! The crate covers the cycle algebra ([`cycle`]), expanded complexes and their
//! combinatorics ([`complex`], [`topology`], [`slicing`]), integral invariants
//! ([`invariants`]), infinite series ([`series`]), the neighborly lens-space family
//! ([`lens`]) and an exhaustive classifier with a persistent registry
//! ([`enumerate`]).

pub mod complex;
pub mod cycle;
pub mod enumerate;
pub mod error;
pub mod invariants;
pub mod lens;
pub mod notation;
pub mod series;
pub mod slicing;
pub mod topology;

pub use complex::{FVector, FacetComplex};
pub use cycle::{CyclicComplex, DifferenceCycle};
pub use error::{Error, Result};
