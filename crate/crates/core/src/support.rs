//! Supports, least supports, freshness, equivariant elements, and orbits.
//!
//! A set of atoms `K` supports `x` when every permutation fixing `K`
//! pointwise also fixes `x`. The permutations fixing `K` are generated by the
//! swappings outside `K`, so checking those generators is enough.
//!
//! Over a finite pool some supports are artifacts of finiteness: any set
//! missing at most one atom supports everything, and on a 4-atom pool
//! `{a2, a3}` supports `{a0, a1}`. On *adequate* pools (at least two atoms
//! beyond those occurring in `x`) the brute-force scan therefore only keeps
//! supports that survive adding one fresh atom to the pool. Those are exactly
//! the supersets of the least support. Below the adequacy threshold the scan
//! keeps every support and reports when no least one exists.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::atoms_perms::{
    enumerate_perms, fix_generators, fmt_atom_set, in_group, AtomPool, AtomSet, Perm, PermError,
    PermGroupSpec, DEFAULT_PERM_CAP,
};
use crate::hfa::{Element, HfaError};

/// Subset scans refuse pools with more atoms than this.
pub const MAX_SCAN_POOL: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SupportError {
    #[error("{subject} has no least support over {pool} atoms; minimal supports: {minimal}")]
    NoUniqueLeast {
        subject: String,
        pool: u32,
        minimal: String,
    },
    #[error("refusing to scan subsets of a {0}-atom pool (limit {MAX_SCAN_POOL})")]
    ScanTooLarge(usize),
    #[error("set is not closed under the group: {witness} maps to {image}, outside the set")]
    NotClosed { witness: String, image: String },
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Hfa(#[from] HfaError),
}

fn check_inputs(k: &AtomSet, x: &Element, pool: AtomPool) -> Result<(), SupportError> {
    pool.check_set(k)?;
    x.check_pool(pool)?;
    Ok(())
}

/// Does `k` support `x` over `pool`?
pub fn supports(k: &AtomSet, x: &Element, pool: AtomPool) -> Result<bool, SupportError> {
    check_inputs(k, x, pool)?;
    Ok(fix_generators(k, pool)?
        .iter()
        .all(|g| g.permute(x) == *x))
}

/// Pools with at least two atoms beyond those occurring in `x`.
pub fn pool_adequate(x: &Element, pool: AtomPool) -> bool {
    pool.len() >= x.atoms_of().len() + 2
}

/// Support test used by the subset scan: on adequate pools a support must
/// also survive one extra fresh atom.
fn scan_supports(k: &AtomSet, x: &Element, pool: AtomPool, adequate: bool) -> Result<bool, SupportError> {
    if !supports(k, x, pool)? {
        return Ok(false);
    }
    if adequate {
        supports(k, x, pool.extended(1))
    } else {
        Ok(true)
    }
}

fn all_subsets(pool: AtomPool) -> Result<Vec<AtomSet>, SupportError> {
    if pool.len() > MAX_SCAN_POOL {
        return Err(SupportError::ScanTooLarge(pool.len()));
    }
    Ok(pool
        .atoms()
        .powerset()
        .map(|s| s.into_iter().collect())
        .collect())
}

/// Every subset of the pool that the scan accepts as a support of `x`,
/// smallest first.
pub fn supporting_sets(x: &Element, pool: AtomPool) -> Result<Vec<AtomSet>, SupportError> {
    x.check_pool(pool)?;
    let adequate = pool_adequate(x, pool);
    let mut out = Vec::new();
    for k in all_subsets(pool)? {
        if scan_supports(&k, x, pool, adequate)? {
            out.push(k);
        }
    }
    Ok(out)
}

/// The ⊆-minimal supports of `x`, found by scanning every subset of the pool.
pub fn minimal_supports(x: &Element, pool: AtomPool) -> Result<Vec<AtomSet>, SupportError> {
    let all = supporting_sets(x, pool)?;
    Ok(minimal_among(&all))
}

fn minimal_among(sets: &[AtomSet]) -> Vec<AtomSet> {
    sets.iter()
        .filter(|k| !sets.iter().any(|other| other != *k && other.is_subset(k)))
        .cloned()
        .collect()
}

/// Result of a brute-force support scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportReport {
    pub subject: Element,
    pub pool: u32,
    pub minimal_supports: Vec<AtomSet>,
    /// The unique least support, when the minimal supports have a minimum.
    pub least: Option<AtomSet>,
    pub pool_adequate: bool,
}

impl SupportReport {
    pub fn to_text(&self) -> String {
        let minimal = self.minimal_supports.iter().map(fmt_atom_set).join(" ");
        let least = self
            .least
            .as_ref()
            .map(fmt_atom_set)
            .unwrap_or_else(|| "none".to_owned());
        format!(
            "subject: {}\npool: {}\nminimal-supports: {}\nleast: {}\npool-adequate: {}\n",
            self.subject, self.pool, minimal, least, self.pool_adequate
        )
    }
}

pub fn support_report(x: &Element, pool: AtomPool) -> Result<SupportReport, SupportError> {
    let minimal = minimal_supports(x, pool)?;
    let least = match minimal.as_slice() {
        [only] => Some(only.clone()),
        _ => None,
    };
    Ok(SupportReport {
        subject: x.clone(),
        pool: pool.size(),
        minimal_supports: minimal,
        least,
        pool_adequate: pool_adequate(x, pool),
    })
}

/// Least support via swappings with a fresh atom: `a` is in the support iff
/// swapping it with some atom not occurring in `x` changes `x`.
///
/// Needs at least one pool atom outside `atoms_of(x)`; returns `None`
/// otherwise.
pub fn fast_supp(x: &Element, pool: AtomPool) -> Result<Option<AtomSet>, SupportError> {
    x.check_pool(pool)?;
    let occurring = x.atoms_of();
    let outside: Vec<_> = pool.atoms().filter(|a| !occurring.contains(a)).collect();
    if outside.is_empty() {
        return Ok(None);
    }
    let mut out = AtomSet::new();
    for &a in &occurring {
        for &b in &outside {
            if Perm::swap(pool, a, b)?.permute(x) != *x {
                out.insert(a);
                break;
            }
        }
    }
    Ok(Some(out))
}

/// The least support of `x`.
///
/// On adequate pools this is the fast swapping characterization; otherwise
/// it is the brute-force minimum, or an error when minimal supports are
/// incomparable.
pub fn supp(x: &Element, pool: AtomPool) -> Result<AtomSet, SupportError> {
    if pool_adequate(x, pool) {
        if let Some(s) = fast_supp(x, pool)? {
            return Ok(s);
        }
    }
    let report = support_report(x, pool)?;
    report.least.ok_or_else(|| SupportError::NoUniqueLeast {
        subject: x.to_string(),
        pool: pool.size(),
        minimal: report.minimal_supports.iter().map(fmt_atom_set).join(" "),
    })
}

/// `k # x`: some support of `x` (in the scan's sense) is disjoint from `k`.
pub fn fresh(k: &AtomSet, x: &Element, pool: AtomPool) -> Result<bool, SupportError> {
    check_inputs(k, x, pool)?;
    if pool_adequate(x, pool) {
        if let Some(least) = fast_supp(x, pool)? {
            return Ok(least.is_disjoint(k));
        }
    }
    fresh_by_scan(k, x, pool)
}

fn fresh_by_scan(k: &AtomSet, x: &Element, pool: AtomPool) -> Result<bool, SupportError> {
    Ok(minimal_supports(x, pool)?
        .iter()
        .any(|m| m.is_disjoint(k)))
}

/// Supported by the empty set: fixed by every permutation of the pool.
pub fn is_equivariant(x: &Element, pool: AtomPool) -> Result<bool, SupportError> {
    supports(&AtomSet::new(), x, pool)
}

/// The permutations of the pool that belong to `spec`'s group.
pub fn group_members(spec: &PermGroupSpec, pool: AtomPool) -> Result<Vec<Perm>, SupportError> {
    spec.validate(pool)?;
    let mut out = Vec::new();
    for p in enumerate_perms(pool, DEFAULT_PERM_CAP)? {
        if in_group(&p, spec)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// `{ p · x : p in the group }`.
pub fn orbit(x: &Element, spec: &PermGroupSpec, pool: AtomPool) -> Result<BTreeSet<Element>, SupportError> {
    x.check_pool(pool)?;
    Ok(group_members(spec, pool)?
        .iter()
        .map(|p| p.permute(x))
        .collect())
}

/// Partition of `xs` into orbits, each orbit sorted, orbits ordered by their
/// least element. `xs` must be closed under the group.
pub fn orbits(xs: &BTreeSet<Element>, spec: &PermGroupSpec, pool: AtomPool) -> Result<Vec<Vec<Element>>, SupportError> {
    let group = group_members(spec, pool)?;
    for x in xs {
        x.check_pool(pool)?;
        for p in &group {
            let px = p.permute(x);
            if !xs.contains(&px) {
                return Err(SupportError::NotClosed {
                    witness: x.to_string(),
                    image: px.to_string(),
                });
            }
        }
    }
    // representative (orbit minimum) for each element
    let mut classes: BTreeMap<Element, Vec<Element>> = BTreeMap::new();
    for x in xs {
        let rep = group
            .iter()
            .map(|p| p.permute(x))
            .min()
            .expect("group contains the identity");
        classes.entry(rep).or_default().push(x.clone());
    }
    Ok(classes.into_values().collect())
}

pub fn orbit_count(xs: &BTreeSet<Element>, spec: &PermGroupSpec, pool: AtomPool) -> Result<usize, SupportError> {
    Ok(orbits(xs, spec, pool)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms_perms::Atom;

    fn pool(n: u32) -> AtomPool {
        AtomPool::new(n).unwrap()
    }

    fn el(s: &str) -> Element {
        s.parse().unwrap()
    }

    fn set(ids: &[u32]) -> AtomSet {
        ids.iter().map(|&i| Atom::new(i)).collect()
    }

    #[test]
    fn supports_examples() {
        let p = pool(3);
        for x in ["a0", "{a0, {a1}}", "{}"] {
            assert!(supports(&p.atom_set(), &el(x), p).unwrap());
        }
        assert!(supports(&AtomSet::new(), &el("{a0, a1, a2}"), p).unwrap());
        assert!(!supports(&AtomSet::new(), &el("a0"), p).unwrap());
        assert!(supports(&set(&[0]), &el("{a0}"), p).unwrap());
    }

    #[test]
    fn supports_rejects_foreign_atoms() {
        assert!(matches!(
            supports(&set(&[5]), &el("a0"), pool(3)),
            Err(SupportError::Perm(PermError::PoolMismatch { .. }))
        ));
        assert!(supports(&AtomSet::new(), &el("a7"), pool(3)).is_err());
    }

    #[test]
    fn minimal_support_examples() {
        assert_eq!(minimal_supports(&Element::empty(), pool(3)).unwrap(), vec![AtomSet::new()]);
        for n in 3..=5 {
            assert_eq!(minimal_supports(&el("a0"), pool(n)).unwrap(), vec![set(&[0])]);
            assert_eq!(minimal_supports(&el("{a0}"), pool(n)).unwrap(), vec![set(&[0])]);
        }
    }

    #[test]
    fn inadequate_pool_reports_ambiguity() {
        let p = pool(2);
        let report = support_report(&el("{a0}"), p).unwrap();
        assert!(!report.pool_adequate);
        assert_eq!(report.minimal_supports, vec![set(&[0]), set(&[1])]);
        assert_eq!(report.least, None);
        assert!(matches!(
            supp(&el("{a0}"), p),
            Err(SupportError::NoUniqueLeast { .. })
        ));
    }

    #[test]
    fn supp_examples() {
        assert_eq!(supp(&Element::empty(), pool(3)).unwrap(), AtomSet::new());
        let pair = Element::kuratowski_pair(el("a0"), el("a1"));
        assert_eq!(supp(&pair, pool(4)).unwrap(), set(&[0, 1]));
        assert_eq!(supp(&el("{a0, {a1}}"), pool(4)).unwrap(), set(&[0, 1]));
        // equivariant even though every atom occurs
        assert_eq!(supp(&el("{a0, a1, a2}"), pool(3)).unwrap(), AtomSet::new());
    }

    #[test]
    fn symmetric_sets_keep_their_own_support() {
        // {a2, a3} supports {a0, a1} inside the pool but not after adding an atom
        let p = pool(4);
        let x = el("{a0, a1}");
        assert!(supports(&set(&[2, 3]), &x, p).unwrap());
        assert_eq!(minimal_supports(&x, p).unwrap(), vec![set(&[0, 1])]);
        assert_eq!(supp(&x, p).unwrap(), set(&[0, 1]));
    }

    #[test]
    fn fresh_examples() {
        let p = pool(4);
        let pair = Element::kuratowski_pair(el("a0"), el("a1"));
        assert!(fresh(&set(&[2]), &pair, p).unwrap());
        assert!(!fresh(&set(&[0]), &el("a0"), p).unwrap());
        for x in ["a0", "{a0, {a1}}", "{}", "{a0, a1, a2, a3}"] {
            assert!(fresh(&AtomSet::new(), &el(x), p).unwrap());
        }
    }

    #[test]
    fn fresh_fast_path_agrees_with_scan() {
        let p = pool(4);
        let u = crate::hfa::Universe::generate(crate::hfa::UniverseConfig::new(4, 1)).unwrap();
        let subsets: Vec<AtomSet> = p.atoms().powerset().map(|s| s.into_iter().collect()).collect();
        for x in u.elements() {
            for k in &subsets {
                assert_eq!(fresh(k, x, p).unwrap(), fresh_by_scan(k, x, p).unwrap(), "{k:?} # {x}");
            }
        }
    }

    #[test]
    fn equivariance_examples() {
        for n in 2..=4 {
            let p = pool(n);
            assert!(is_equivariant(&Element::empty(), p).unwrap());
            assert!(is_equivariant(&Element::all_atoms(p), p).unwrap());
            for a in p.atoms() {
                assert!(!is_equivariant(&Element::atom(a), p).unwrap());
            }
        }
    }

    #[test]
    fn orbit_examples() {
        let p = pool(3);
        assert_eq!(
            orbit(&Element::empty(), &PermGroupSpec::Full, p).unwrap(),
            [Element::empty()].into_iter().collect()
        );
        assert_eq!(
            orbit(&el("a0"), &PermGroupSpec::Full, p).unwrap(),
            ["a0", "a1", "a2"].iter().map(|s| el(s)).collect()
        );
        for n in 2..=4 {
            let q = pool(n);
            let diag = Element::kuratowski_pair(el("a0"), el("a0"));
            assert_eq!(orbit(&diag, &PermGroupSpec::Full, q).unwrap().len(), n as usize);
        }
        let order = PermGroupSpec::natural_order(p);
        assert_eq!(orbit(&el("a0"), &order, p).unwrap().len(), 1);
    }

    #[test]
    fn orbit_count_examples() {
        let p = pool(3);
        let atoms: BTreeSet<Element> = p.atoms().map(Element::atom).collect();
        assert_eq!(orbit_count(&atoms, &PermGroupSpec::Full, p).unwrap(), 1);
        let pairs: BTreeSet<Element> = p
            .atoms()
            .cartesian_product(p.atoms())
            .map(|(a, b)| Element::kuratowski_pair(a.into(), b.into()))
            .collect();
        assert_eq!(orbit_count(&pairs, &PermGroupSpec::Full, p).unwrap(), 2);
        let subsets: BTreeSet<Element> = Element::all_atoms(p)
            .powerset()
            .unwrap()
            .members()
            .iter()
            .cloned()
            .collect();
        assert_eq!(orbit_count(&subsets, &PermGroupSpec::Full, p).unwrap(), 4);
        let not_closed: BTreeSet<Element> = [el("a0")].into_iter().collect();
        assert!(matches!(
            orbit_count(&not_closed, &PermGroupSpec::Full, p),
            Err(SupportError::NotClosed { .. })
        ));
    }
}
