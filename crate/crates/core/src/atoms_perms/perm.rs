use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use super::{Atom, AtomPool, AtomSet, PermError};

/// Default upper bound on the pool size accepted by [`enumerate_perms`]
/// (6 atoms, 720 permutations).
pub const DEFAULT_PERM_CAP: usize = 6;

/// A bijection on the atoms of a pool.
///
/// Only the atoms that actually move are stored, so two permutations are
/// equal exactly when they move the same atoms to the same places.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    pool: AtomPoolKey,
    moved: BTreeMap<Atom, Atom>,
}

// AtomPool deliberately has no ordering; permutations still need one for
// deterministic dedup, so the size is stored as a plain integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct AtomPoolKey(u32);

impl Perm {
    pub fn identity(pool: AtomPool) -> Self {
        Perm {
            pool: AtomPoolKey(pool.size()),
            moved: BTreeMap::new(),
        }
    }

    /// The swapping `(a b)`; `(a a)` is the identity.
    pub fn swap(pool: AtomPool, a: Atom, b: Atom) -> Result<Self, PermError> {
        pool.check(a)?;
        pool.check(b)?;
        let mut moved = BTreeMap::new();
        if a != b {
            moved.insert(a, b);
            moved.insert(b, a);
        }
        Ok(Perm {
            pool: AtomPoolKey(pool.size()),
            moved,
        })
    }

    /// Builds a permutation from its image list: atom `i` maps to `images[i]`.
    pub fn from_images(pool: AtomPool, images: &[Atom]) -> Result<Self, PermError> {
        if images.len() != pool.len() {
            return Err(PermError::NotABijection(format!(
                "expected {} images, got {}",
                pool.len(),
                images.len()
            )));
        }
        let mut seen = vec![false; pool.len()];
        let mut moved = BTreeMap::new();
        for (i, &img) in images.iter().enumerate() {
            pool.check(img)?;
            if std::mem::replace(&mut seen[img.index()], true) {
                return Err(PermError::NotABijection(format!("{img} is hit twice")));
            }
            let src = Atom::new(i as u32);
            if src != img {
                moved.insert(src, img);
            }
        }
        Ok(Perm {
            pool: AtomPoolKey(pool.size()),
            moved,
        })
    }

    /// Builds a permutation from an explicit map; fixed points may be omitted.
    pub fn from_map(pool: AtomPool, map: BTreeMap<Atom, Atom>) -> Result<Self, PermError> {
        let mut images: Vec<Atom> = pool.atoms().collect();
        for (&k, &v) in &map {
            pool.check(k)?;
            pool.check(v)?;
            images[k.index()] = v;
        }
        Self::from_images(pool, &images)
    }

    pub fn pool(&self) -> AtomPool {
        AtomPool::new(self.pool.0).expect("perm pools are non-empty")
    }

    pub fn is_identity(&self) -> bool {
        self.moved.is_empty()
    }

    /// The moved-atom map, fixed points excluded.
    pub fn moved(&self) -> &BTreeMap<Atom, Atom> {
        &self.moved
    }

    /// `p(a)`, checking that `a` belongs to the pool.
    pub fn apply(&self, a: Atom) -> Result<Atom, PermError> {
        self.pool().check(a)?;
        Ok(self.image(a))
    }

    /// `p(a)` without a pool check; atoms outside the pool are fixed.
    pub fn image(&self, a: Atom) -> Atom {
        self.moved.get(&a).copied().unwrap_or(a)
    }

    /// The atoms moved by this permutation.
    pub fn nontriv(&self) -> AtomSet {
        self.moved.keys().copied().collect()
    }

    fn check_same_pool(&self, other: &Perm) -> Result<(), PermError> {
        if self.pool == other.pool {
            Ok(())
        } else {
            Err(PermError::PoolSizeMismatch {
                left: self.pool.0,
                right: other.pool.0,
            })
        }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        self.check_same_pool(other)?;
        let mut moved = BTreeMap::new();
        for a in self.moved.keys().chain(other.moved.keys()) {
            let img = self.image(other.image(*a));
            if img != *a {
                moved.insert(*a, img);
            }
        }
        Ok(Perm {
            pool: self.pool,
            moved,
        })
    }

    pub fn inverse(&self) -> Perm {
        Perm {
            pool: self.pool,
            moved: self.moved.iter().map(|(&k, &v)| (v, k)).collect(),
        }
    }

    /// Image of an atom set under this permutation.
    pub fn image_set(&self, set: &AtomSet) -> AtomSet {
        set.iter().map(|&a| self.image(a)).collect()
    }

    /// Disjoint cycles of length ≥ 2, each starting at its least atom,
    /// ordered by that atom.
    pub fn cycles(&self) -> Vec<Vec<Atom>> {
        let mut seen = AtomSet::new();
        let mut out = Vec::new();
        for &start in self.moved.keys() {
            if !seen.insert(start) {
                continue;
            }
            let mut cycle = vec![start];
            let mut cur = self.image(start);
            while cur != start {
                seen.insert(cur);
                cycle.push(cur);
                cur = self.image(cur);
            }
            out.push(cycle);
        }
        out
    }

    /// Parses cycle notation such as `(a0 a1)(a2 a3)` or `id`.
    ///
    /// Cycles are composed right to left, so `(a0 a1)(a1 a2)` is the
    /// composition of two swappings.
    pub fn parse(src: &str, pool: AtomPool) -> Result<Perm, PermError> {
        let s = src.trim();
        if s == "id" {
            return Ok(Perm::identity(pool));
        }
        let mut result = Perm::identity(pool);
        let mut rest = s;
        let mut cycles = Vec::new();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| PermError::BadCycleNotation(src.to_owned()))?;
            let close = body
                .find(')')
                .ok_or_else(|| PermError::BadCycleNotation(src.to_owned()))?;
            let atoms: Vec<Atom> = body[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(str::parse)
                .collect::<Result<_, _>>()?;
            if atoms.is_empty() || !atoms.iter().all_unique() {
                return Err(PermError::BadCycleNotation(src.to_owned()));
            }
            cycles.push(atoms);
            rest = body[close + 1..].trim_start();
        }
        if cycles.is_empty() {
            return Err(PermError::BadCycleNotation(src.to_owned()));
        }
        for cycle in cycles.iter().rev() {
            let mut map = BTreeMap::new();
            for (i, &a) in cycle.iter().enumerate() {
                map.insert(a, cycle[(i + 1) % cycle.len()]);
            }
            let c = Perm::from_map(pool, map)?;
            result = c.compose(&result)?;
        }
        Ok(result)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("id");
        }
        for cycle in self.cycles() {
            write!(f, "({})", cycle.iter().join(" "))?;
        }
        Ok(())
    }
}

/// Every permutation of the pool, identity first, in lexicographic order of
/// image lists. Refuses pools larger than `cap`.
pub fn enumerate_perms(pool: AtomPool, cap: usize) -> Result<Vec<Perm>, PermError> {
    if pool.len() > cap {
        return Err(PermError::EnumerationCap {
            size: pool.size(),
            cap,
        });
    }
    pool.atoms()
        .permutations(pool.len())
        .map(|images| Perm::from_images(pool, &images))
        .collect()
}
