//! Parsing, printing, JSON interchange and the command-line front end for
//! `pointderiv-core`.

pub mod cli;
pub mod exprio;
