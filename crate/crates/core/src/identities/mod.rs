//! Seeded random series and the suites that check the derivative's defining
//! identities.
//!
//! Every suite is exact: a check fails as soon as one coefficient differs, and
//! the failure records the first differing word in canonical order.

mod generator;
mod report;
mod suites;

pub use generator::{random_coeff, random_series, GenParams, MAX_CONSTANT_LETTERS};
pub use report::{CheckReport, Failure};
pub use suites::{
    run_axiom_suite, run_chain_rule_suite, run_clairaut_suite, run_uniqueness_suite, Checker,
    Suite, UNIQUENESS_BETAS, UNIQUENESS_WORD_LENGTH,
};
