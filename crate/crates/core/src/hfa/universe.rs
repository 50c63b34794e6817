use std::collections::{HashMap, HashSet};
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use super::{Element, HfaError};
use crate::atoms_perms::{AtomPool, Perm};

/// Largest member count of the sets admitted at stages above the first.
pub const DEFAULT_SUBSET_CAP: usize = 3;
/// Refuse to build universes with more elements than this.
pub const DEFAULT_UNIVERSE_BUDGET: u128 = 250_000;

/// Parameters of a rank-bounded universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UniverseConfig {
    pub atoms: u32,
    pub rank: u32,
    /// Member-count cap for sets built at stage 2 and above; `None` builds
    /// every subset.
    pub subset_cap: Option<usize>,
    pub budget: u128,
}

impl Default for UniverseConfig {
    fn default() -> Self {
        UniverseConfig {
            atoms: 3,
            rank: 2,
            subset_cap: Some(DEFAULT_SUBSET_CAP),
            budget: DEFAULT_UNIVERSE_BUDGET,
        }
    }
}

impl UniverseConfig {
    pub fn new(atoms: u32, rank: u32) -> Self {
        UniverseConfig {
            atoms,
            rank,
            ..Self::default()
        }
    }

    pub fn with_subset_cap(mut self, cap: Option<usize>) -> Self {
        self.subset_cap = cap;
        self
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    /// Member-count limit for sets built at stage `stage` (≥ 1) from a
    /// previous stage of `prev_len` elements.
    pub fn admitted_size(&self, stage: u32, prev_len: usize) -> usize {
        match self.subset_cap {
            Some(cap) if stage >= 2 => cap.min(prev_len),
            _ => prev_len,
        }
    }
}

impl fmt::Display for UniverseConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "atoms {}, rank {}, subset cap ", self.atoms, self.rank)?;
        match self.subset_cap {
            Some(c) => write!(f, "{c}"),
            None => f.write_str("none"),
        }
    }
}

/// The finite cumulative hierarchy `V_k` over an atom pool:
/// `V_0` is the atoms plus ∅ and `V_{i+1}` adds every admitted subset of
/// `V_i`. This is the range of quantifiers.
#[derive(Clone, Debug)]
pub struct Universe {
    config: UniverseConfig,
    pool: AtomPool,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
}

/// Number of subsets of an `n`-set with at most `k` members, saturating.
pub(crate) fn bounded_subset_count(n: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for j in 0..=k.min(n) {
        total = total.saturating_add(binom);
        binom = binom.saturating_mul((n - j) as u128) / (j as u128 + 1);
    }
    total
}

/// Builds the stage-by-stage closure shared by the native universe and the
/// tagged model. `base` is stage 0 (sorted); `make_set` wraps a canonical
/// member list; `members_len` reports set sizes of existing elements (None
/// for atom-like elements).
pub(crate) fn build_stages<E, F, L>(
    config: &UniverseConfig,
    base: Vec<E>,
    make_set: F,
    members_len: L,
) -> Result<Vec<Vec<E>>, HfaError>
where
    E: Clone + Ord + std::hash::Hash,
    F: Fn(Vec<E>) -> E,
    L: Fn(&E) -> Option<usize>,
{
    let atoms = base.iter().filter(|e| members_len(e).is_none()).count();
    let mut stages = vec![base.clone()];
    let mut cumulative = base;
    for stage in 1..=config.rank {
        let admitted = config.admitted_size(stage, cumulative.len());
        let carried = cumulative
            .iter()
            .filter(|e| matches!(members_len(e), Some(n) if n > admitted))
            .count();
        let projected = (atoms as u128)
            .saturating_add(bounded_subset_count(cumulative.len(), admitted))
            .saturating_add(carried as u128);
        if projected > config.budget {
            return Err(HfaError::BudgetExceeded {
                projected,
                budget: config.budget,
                stage,
            });
        }
        let seen: HashSet<&E> = cumulative.iter().collect();
        let mut fresh = Vec::new();
        for size in 0..=admitted {
            for combo in cumulative.iter().cloned().combinations(size) {
                let s = make_set(combo);
                if !seen.contains(&s) {
                    fresh.push(s);
                }
            }
        }
        fresh.sort();
        let mut next = cumulative.clone();
        next.extend(fresh.iter().cloned());
        next.sort();
        stages.push(fresh);
        cumulative = next;
    }
    Ok(stages)
}

impl Universe {
    pub fn generate(config: UniverseConfig) -> Result<Self, HfaError> {
        let pool = AtomPool::new(config.atoms).map_err(HfaError::from)?;
        let mut base: Vec<Element> = pool.atoms().map(Element::atom).collect();
        base.push(Element::empty());
        base.sort();
        let stages = build_stages(&config, base, Element::from_canonical, |e| {
            e.is_set().then(|| e.members().len())
        })?;
        let mut elements: Vec<Element> = stages.into_iter().flatten().collect();
        elements.sort_by_cached_key(|e| (e.rank(), e.to_string()));
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Ok(Universe {
            config,
            pool,
            elements,
            index,
        })
    }

    pub fn config(&self) -> UniverseConfig {
        self.config
    }

    pub fn pool(&self) -> AtomPool {
        self.pool
    }

    pub fn rank_bound(&self) -> u32 {
        self.config.rank
    }

    pub fn subset_cap(&self) -> Option<usize> {
        self.config.subset_cap
    }

    /// Elements ordered by (rank, printed form).
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.index.contains_key(x)
    }

    pub fn position(&self, x: &Element) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn sets(&self) -> impl Iterator<Item = &Element> {
        self.elements.iter().filter(|e| e.is_set())
    }

    /// Index permutation induced by acting with `p`, or the first element
    /// whose image leaves the universe.
    pub fn permutation_image(&self, p: &Perm) -> Result<Vec<usize>, Element> {
        self.elements
            .iter()
            .map(|x| {
                let px = p.permute(x);
                self.position(&px).ok_or(px)
            })
            .collect()
    }
}

/// `V_k` over `pool` with the default subset cap and budget.
pub fn generate_universe(pool: AtomPool, k: u32) -> Result<Universe, HfaError> {
    Universe::generate(UniverseConfig::new(pool.size(), k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms_perms::enumerate_perms;

    #[test]
    fn stage_sizes() {
        let pool = AtomPool::new(3).unwrap();
        assert_eq!(generate_universe(pool, 0).unwrap().len(), 4);
        assert_eq!(generate_universe(pool, 1).unwrap().len(), 19);
        // 3 atoms + subsets of V_1 with ≤ 3 members + the one 4-member set
        assert_eq!(
            generate_universe(pool, 2).unwrap().len(),
            3 + (1 + 19 + 171 + 969) + 1
        );
        let two = AtomPool::new(2).unwrap();
        let full = Universe::generate(UniverseConfig::new(2, 2).with_subset_cap(None)).unwrap();
        assert_eq!(full.len(), 2 + (1 << 10));
        assert_eq!(generate_universe(two, 1).unwrap().len(), 2 + 8);
    }

    #[test]
    fn subset_count_matches_binomials() {
        assert_eq!(bounded_subset_count(4, 4), 16);
        assert_eq!(bounded_subset_count(19, 3), 1 + 19 + 171 + 969);
        assert_eq!(bounded_subset_count(5, 0), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let err = Universe::generate(UniverseConfig::new(3, 2).with_subset_cap(None)).unwrap_err();
        match err {
            HfaError::BudgetExceeded { projected, .. } => assert_eq!(projected, 3 + (1 << 19)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn contains_atoms_and_empty_and_is_ordered() {
        let u = generate_universe(AtomPool::new(3).unwrap(), 1).unwrap();
        assert!(u.contains(&Element::empty()));
        for a in u.pool().atoms() {
            assert!(u.contains(&Element::atom(a)));
        }
        let keys: Vec<_> = u.elements().iter().map(|e| (e.rank(), e.to_string())).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(u.elements().iter().collect::<HashSet<_>>().len(), u.len());
    }

    #[test]
    fn closed_under_every_permutation() {
        let u = generate_universe(AtomPool::new(3).unwrap(), 2).unwrap();
        for p in enumerate_perms(u.pool(), 6).unwrap() {
            let image = u.permutation_image(&p).expect("closed");
            let distinct: HashSet<_> = image.iter().collect();
            assert_eq!(distinct.len(), u.len());
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_universe(AtomPool::new(3).unwrap(), 2).unwrap();
        let b = generate_universe(AtomPool::new(3).unwrap(), 2).unwrap();
        assert_eq!(a.elements(), b.elements());
    }
}
