use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::PermError;

/// An atom: an opaque urelement identified only by its index in the pool.
///
/// Atoms print as `a0`, `a1`, ... and compare by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(u32);

impl Atom {
    pub const fn new(id: u32) -> Self {
        Atom(id)
    }

    pub const fn id(self) -> u32 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for Atom {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s
            .strip_prefix('a')
            .ok_or_else(|| PermError::BadAtomName(s.to_owned()))?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(PermError::BadAtomName(s.to_owned()));
        }
        // Reject "a01" so that every atom has exactly one spelling.
        if digits.len() > 1 && digits.starts_with('0') {
            return Err(PermError::BadAtomName(s.to_owned()));
        }
        digits
            .parse()
            .map(Atom)
            .map_err(|_| PermError::BadAtomName(s.to_owned()))
    }
}

/// A finite set of atoms, printed as `{a0, a2}`.
pub type AtomSet = BTreeSet<Atom>;

/// Formats an atom set as `{a0, a2}`.
pub fn fmt_atom_set(set: &AtomSet) -> String {
    let inner: Vec<String> = set.iter().map(|a| a.to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

/// Parses `{a0, a2}`, `a0, a2`, or `a0 a2` into an atom set.
pub fn parse_atom_set(src: &str) -> Result<AtomSet, PermError> {
    let trimmed = src.trim();
    let inner = match trimmed.strip_prefix('{') {
        Some(rest) => rest
            .strip_suffix('}')
            .ok_or_else(|| PermError::BadAtomSet(src.to_owned()))?,
        None => trimmed,
    };
    inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

/// The finite pool atoms are drawn from: atoms `a0 .. a(size-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AtomPool {
    size: u32,
}

impl AtomPool {
    pub fn new(size: u32) -> Result<Self, PermError> {
        if size == 0 {
            return Err(PermError::EmptyPool);
        }
        Ok(AtomPool { size })
    }

    pub fn size(self) -> u32 {
        self.size
    }

    pub fn len(self) -> usize {
        self.size as usize
    }

    /// Always false: pools have at least one atom.
    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, a: Atom) -> bool {
        a.0 < self.size
    }

    pub fn atom(self, i: u32) -> Result<Atom, PermError> {
        let a = Atom(i);
        self.check(a)?;
        Ok(a)
    }

    pub fn atoms(self) -> impl Iterator<Item = Atom> + Clone {
        (0..self.size).map(Atom)
    }

    pub fn atom_set(self) -> AtomSet {
        self.atoms().collect()
    }

    /// The same pool with `extra` fresh atoms appended.
    pub fn extended(self, extra: u32) -> AtomPool {
        AtomPool {
            size: self.size + extra,
        }
    }

    pub fn check(self, a: Atom) -> Result<(), PermError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(PermError::PoolMismatch {
                atom: a,
                size: self.size,
            })
        }
    }

    pub fn check_set(self, set: &AtomSet) -> Result<(), PermError> {
        set.iter().try_for_each(|&a| self.check(a))
    }
}

impl fmt::Display for AtomPool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.size)
    }
}
