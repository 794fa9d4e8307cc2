//! Exact computations in formal double Eisenstein spaces.
//!
//! The crate builds the generator/relation presentations of the formal double
//! Eisenstein space and the formal double zeta space, the maps between them,
//! the `GL2(Z)` action on four-variable series, and the Kronecker realization
//! into quasimodular q-series. Everything is exact over the rationals.

pub mod action;
pub mod cli;
pub mod coeff;
pub mod eisenstein;
pub mod error;
pub mod export;
pub mod formal;
pub mod identities;
pub mod kronecker;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod series;

pub use error::{Error, Result};
pub use formal::{FormalElement, GenId, RelationSystem, Space};
pub use rational::Rational;
pub use series::QSeries;
