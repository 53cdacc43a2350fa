//! High-temperature cluster expansion toolkit for the spin-1
//! Blume-Emery-Griffiths (BEG) model on `Z^d`.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: finite-volume model, exact partition function by enumeration,
//!   the pair potential and its stability minimum.
//! - [`expansion`]: polymer activities from connected-graph sums and the
//!   abstract polymer grand partition function.
//! - [`region`]: the scalar functions behind the all-temperature convergence
//!   criterion and the resulting analyticity region in the `(x, y)` plane.
//! - [`trees`]: bounded-degree labeled trees, lattice embedding weights and
//!   the tree-graph inequality witness.
//! - [`polycube`]: fixed polycube enumeration and the binomial upper bounds.
//!
//! Every enumeration is capped by a [`Budget`]; exceeding it is an
//! [`Error::Budget`], never a silent truncation.

pub mod budget;
pub mod combinatorics;
pub mod error;
pub mod expansion;
pub mod lattice;
pub mod polycube;
pub mod region;
pub mod trees;

pub use budget::Budget;
pub use error::{Error, Result};
pub use lattice::{ModelParams, SiteSet, Spin, SpinConfiguration};
