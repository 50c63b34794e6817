//! Zermelo-Fraenkel set theory with atoms, executed over a finite pool of
//! atoms and rank-bounded hereditarily finite sets.

pub mod acceptance;
pub mod atoms_perms;
pub mod equivariance;
pub mod hfa;
pub mod lang;
pub mod semantics;
pub mod support;
pub mod tagged;
