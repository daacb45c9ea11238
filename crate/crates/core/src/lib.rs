//! Verification toolkit for finitely presented mapping class groups.

pub mod presentations;
pub mod prover;
pub mod reps;
pub mod surface;
pub mod words;
