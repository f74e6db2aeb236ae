//! Exact invariants of codimension-one and higher-codimension holomorphic
//! distributions on complex projective space.
//!
//! The crate covers the Chow ring of `P^n` and degree formulas for singular
//! schemes, Bott-formula cohomology tables, splitting and
//! arithmetic-Cohen-Macaulay criteria, long exact sequence chases over
//! Eagon-Northcott complexes, polynomial differential forms, and Hilbert
//! functions of graded ideals.

pub mod chase;
pub mod chow;
pub mod classify;
pub mod cohomology;
pub mod criteria;
pub mod error;
pub mod forms;
pub mod hilbert;

pub use error::{Error, Result};
