//! Hereditarily finite elements over an atom pool, the pointwise
//! permutation action, and rank-bounded universes.

mod action;
mod element;
mod literal;
mod universe;

use thiserror::Error;

use crate::atoms_perms::{Atom, PermError};

pub use element::{Element, SetNode};
pub use literal::parse_element_prefix;
pub(crate) use universe::build_stages;
pub use universe::{
    generate_universe, Universe, UniverseConfig, DEFAULT_SUBSET_CAP, DEFAULT_UNIVERSE_BUDGET,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HfaError {
    #[error("atom {atom} is not in the pool of size {size}")]
    PoolMismatch { atom: Atom, size: u32 },
    #[error("{op} needs a set, got atom {element}")]
    NotASet { op: &'static str, element: String },
    #[error("{0} is not a Kuratowski pair")]
    NotAPair(String),
    #[error("{op} of a {size}-member set is too large to build")]
    TooLarge { op: &'static str, size: usize },
    #[error("universe budget exceeded at stage {stage}: projected {projected} elements, budget {budget}")]
    BudgetExceeded {
        projected: u128,
        budget: u128,
        stage: u32,
    },
    #[error("bad element literal at offset {offset}: {message}")]
    Literal { offset: usize, message: String },
    #[error(transparent)]
    Perm(#[from] PermError),
}
