//! Ordinal notations, IKP-style sequent calculi and the ordinal bookkeeping
//! of their analyses.

pub mod analysis;
pub mod calculus;
pub mod cli;
pub mod collapse;
pub mod hierarchy;
pub mod ord;
pub mod syntax;
