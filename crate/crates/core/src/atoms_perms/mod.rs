//! Atoms, permutations of a finite atom pool, and the permutation-group
//! variants used to restrict which permutations act.

mod atom;
mod group;
mod perm;

use thiserror::Error;

pub use atom::{fmt_atom_set, parse_atom_set, Atom, AtomPool, AtomSet};
pub use group::{fix_generators, generated_subgroup, in_group, PermGroupSpec};
pub use perm::{enumerate_perms, Perm, DEFAULT_PERM_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("atom pools must contain at least one atom")]
    EmptyPool,
    #[error("atom {atom} is not in the pool of size {size}")]
    PoolMismatch { atom: Atom, size: u32 },
    #[error("permutations over pools of size {left} and {right} cannot be combined")]
    PoolSizeMismatch { left: u32, right: u32 },
    #[error("`{0}` is not an atom name (expected a0, a1, ...)")]
    BadAtomName(String),
    #[error("`{0}` is not an atom set")]
    BadAtomSet(String),
    #[error("`{0}` is not valid cycle notation")]
    BadCycleNotation(String),
    #[error("not a bijection: {0}")]
    NotABijection(String),
    #[error("refusing to enumerate permutations of {size} atoms: exceeds cap {cap}")]
    EnumerationCap { size: u32, cap: usize },
    #[error("invalid permutation group: {0}")]
    BadGroupSpec(String),
}
