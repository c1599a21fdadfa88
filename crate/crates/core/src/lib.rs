//! Point-derivatives on truncated noncommutative formal power series.
//!
//! The crate works over the free monoid on a declared alphabet of constants
//! and variables. A [`Series`] is a finitely supported map from words to exact
//! rationals together with a validity order: every coefficient on a word whose
//! variable degree is at most the validity order is exact, everything above it
//! is unknown.
//!
//! On top of the ring arithmetic sit
//!
//! * [`derivation`]: the operator that inserts a series `beta` at every
//!   occurrence of a variable, its Hausdorff (`beta = 1`) special case, second
//!   partials, and two independently written reference algorithms;
//! * [`substitution`]: composition `f(u, v)` and the chain-rule and
//!   mixed-partial residuals;
//! * [`identities`]: seeded generators and the checking suites.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod alphabet;
pub mod derivation;
mod error;
pub mod identities;
pub mod render;
pub mod series;
pub mod substitution;

pub use alphabet::{Context, Symbol, SymbolId, SymbolKind, Word};
pub use derivation::{
    grouped_derivative, hausdorff_derivative, leibniz_oracle_derivative, placeholder_derivative,
    point_derivative, second_partial, DerivativeSpec, Engine,
};
pub use error::{Error, Result};
pub use series::{geometric_inverse, Coeff, Order, Series};
pub use substitution::{
    chain_rule_residual, insertion_partial, mixed_partial_residual, substitute, Assignment,
};
