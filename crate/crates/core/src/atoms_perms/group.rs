use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use super::{fmt_atom_set, parse_atom_set, Atom, AtomPool, AtomSet, Perm, PermError};

/// Which permutations count as "the" permutation group.
///
/// Over an infinite set of atoms these are five genuinely different groups.
/// At desk scale everything is finite, so the finiteness conditions become
/// explicit numeric bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermGroupSpec {
    /// Every bijection on the pool.
    Full,
    /// Permutations moving at most `bound` atoms.
    Finitary { bound: usize },
    /// Permutations preserving a total order, listed least first.
    OrderRespecting { order: Vec<Atom> },
    /// Permutations moving at most `bound` atoms outside `upper`.
    Permissive {
        lower: AtomSet,
        upper: AtomSet,
        bound: usize,
    },
    /// Permutations whose moved atoms all lie inside one stage of a
    /// ⊆-increasing family.
    Shift { family: Vec<AtomSet> },
}

impl PermGroupSpec {
    /// Checks the structural invariants of the spec against a pool.
    pub fn validate(&self, pool: AtomPool) -> Result<(), PermError> {
        match self {
            PermGroupSpec::Full | PermGroupSpec::Finitary { .. } => Ok(()),
            PermGroupSpec::OrderRespecting { order } => {
                let set: AtomSet = order.iter().copied().collect();
                if set.len() != order.len() || set != pool.atom_set() {
                    return Err(PermError::BadGroupSpec(
                        "order must list every pool atom exactly once".into(),
                    ));
                }
                Ok(())
            }
            PermGroupSpec::Permissive { lower, upper, .. } => {
                pool.check_set(lower)?;
                pool.check_set(upper)?;
                let disjoint = lower.is_disjoint(upper);
                let covering = lower.union(upper).copied().collect::<AtomSet>() == pool.atom_set();
                if !(disjoint && covering) {
                    return Err(PermError::BadGroupSpec(
                        "permissive lower and upper sets must partition the pool".into(),
                    ));
                }
                Ok(())
            }
            PermGroupSpec::Shift { family } => {
                for stage in family {
                    pool.check_set(stage)?;
                }
                if family.iter().tuple_windows().any(|(s, t)| !s.is_subset(t)) {
                    return Err(PermError::BadGroupSpec(
                        "shift family must be increasing under inclusion".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// The natural order `a0 < a1 < ...` on a pool.
    pub fn natural_order(pool: AtomPool) -> Self {
        PermGroupSpec::OrderRespecting {
            order: pool.atoms().collect(),
        }
    }

    /// Parses the command-line group syntax:
    /// `full`, `finitary:K`, `order`, `order:a2,a0,a1`,
    /// `permissive:LOWER:K` (upper is the complement of LOWER), and
    /// `shift:S0;S1;...` with each stage a comma-separated atom list.
    pub fn parse(src: &str, pool: AtomPool) -> Result<Self, PermError> {
        let bad = || PermError::BadGroupSpec(format!("cannot parse group `{src}`"));
        let (head, rest) = match src.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (src, None),
        };
        let spec = match (head, rest) {
            ("full", None) => PermGroupSpec::Full,
            ("finitary", Some(k)) => PermGroupSpec::Finitary {
                bound: k.trim().parse().map_err(|_| bad())?,
            },
            ("order", None) => Self::natural_order(pool),
            ("order", Some(list)) => PermGroupSpec::OrderRespecting {
                order: list
                    .split(',')
                    .map(|s| s.trim().parse())
                    .collect::<Result<_, _>>()?,
            },
            ("permissive", Some(r)) => {
                let (lower, k) = r.rsplit_once(':').ok_or_else(bad)?;
                let lower = parse_atom_set(lower)?;
                let upper = pool.atom_set().difference(&lower).copied().collect();
                PermGroupSpec::Permissive {
                    lower,
                    upper,
                    bound: k.trim().parse().map_err(|_| bad())?,
                }
            }
            ("shift", Some(r)) => PermGroupSpec::Shift {
                family: r.split(';').map(parse_atom_set).collect::<Result<_, _>>()?,
            },
            _ => return Err(bad()),
        };
        spec.validate(pool)?;
        Ok(spec)
    }
}

impl fmt::Display for PermGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermGroupSpec::Full => f.write_str("full"),
            PermGroupSpec::Finitary { bound } => write!(f, "finitary:{bound}"),
            PermGroupSpec::OrderRespecting { order } => {
                write!(f, "order:{}", order.iter().join(","))
            }
            PermGroupSpec::Permissive { lower, bound, .. } => {
                write!(f, "permissive:{}:{bound}", lower.iter().join(","))
            }
            PermGroupSpec::Shift { family } => write!(
                f,
                "shift:{}",
                family.iter().map(fmt_atom_set).join(";")
            ),
        }
    }
}

/// Membership of `p` in the group described by `spec`.
pub fn in_group(p: &Perm, spec: &PermGroupSpec) -> Result<bool, PermError> {
    let pool = p.pool();
    spec.validate(pool)?;
    let moved = p.nontriv();
    Ok(match spec {
        PermGroupSpec::Full => true,
        PermGroupSpec::Finitary { bound } => moved.len() <= *bound,
        PermGroupSpec::OrderRespecting { order } => {
            let mut position = vec![0usize; pool.len()];
            for (i, a) in order.iter().enumerate() {
                position[a.index()] = i;
            }
            order.iter().tuple_combinations().all(|(x, y)| {
                // x precedes y; the images must keep that order
                position[p.image(*x).index()] < position[p.image(*y).index()]
            })
        }
        PermGroupSpec::Permissive { upper, bound, .. } => moved.difference(upper).count() <= *bound,
        PermGroupSpec::Shift { family } => family.iter().any(|stage| moved.is_subset(stage)),
    })
}

/// The swappings `(a b)` with `a ≠ b` both outside `fixed`; they generate
/// the subgroup of permutations fixing every atom of `fixed`.
pub fn fix_generators(fixed: &AtomSet, pool: AtomPool) -> Result<Vec<Perm>, PermError> {
    pool.check_set(fixed)?;
    pool.atoms()
        .filter(|a| !fixed.contains(a))
        .tuple_combinations()
        .map(|(a, b)| Perm::swap(pool, a, b))
        .collect()
}

/// Closure of a generating set under composition, identity included.
pub fn generated_subgroup(generators: &[Perm], pool: AtomPool) -> Result<BTreeSet<Perm>, PermError> {
    let mut group = BTreeSet::new();
    let id = Perm::identity(pool);
    let mut frontier = vec![id.clone()];
    group.insert(id);
    while let Some(p) = frontier.pop() {
        for g in generators {
            let q = g.compose(&p)?;
            if group.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    Ok(group)
}

#[cfg(test)]
mod tests {
    use super::super::enumerate_perms;
    use super::*;

    fn pool(n: u32) -> AtomPool {
        AtomPool::new(n).unwrap()
    }

    fn a(i: u32) -> Atom {
        Atom::new(i)
    }

    fn set(ids: &[u32]) -> AtomSet {
        ids.iter().map(|&i| a(i)).collect()
    }

    #[test]
    fn membership_examples() {
        let p = pool(3);
        let order = PermGroupSpec::natural_order(p);
        assert!(in_group(&Perm::identity(p), &order).unwrap());
        let s = Perm::swap(p, a(0), a(1)).unwrap();
        assert!(!in_group(&s, &order).unwrap());
        assert!(in_group(&s, &PermGroupSpec::Finitary { bound: 2 }).unwrap());
        assert!(!in_group(&s, &PermGroupSpec::Finitary { bound: 1 }).unwrap());
        assert!(in_group(&s, &PermGroupSpec::Full).unwrap());
    }

    #[test]
    fn permissive_counts_moves_outside_upper() {
        let p = pool(4);
        let spec = PermGroupSpec::Permissive {
            lower: set(&[0, 1]),
            upper: set(&[2, 3]),
            bound: 0,
        };
        assert!(in_group(&Perm::swap(p, a(2), a(3)).unwrap(), &spec).unwrap());
        assert!(!in_group(&Perm::swap(p, a(1), a(3)).unwrap(), &spec).unwrap());
        let looser = PermGroupSpec::Permissive {
            lower: set(&[0, 1]),
            upper: set(&[2, 3]),
            bound: 1,
        };
        assert!(in_group(&Perm::swap(p, a(1), a(3)).unwrap(), &looser).unwrap());
        let broken = PermGroupSpec::Permissive {
            lower: set(&[0]),
            upper: set(&[2, 3]),
            bound: 1,
        };
        assert!(in_group(&Perm::identity(p), &broken).is_err());
    }

    #[test]
    fn shift_membership_and_validation() {
        let p = pool(4);
        let spec = PermGroupSpec::Shift {
            family: vec![set(&[0]), set(&[0, 1]), set(&[0, 1, 2])],
        };
        assert!(in_group(&Perm::swap(p, a(0), a(2)).unwrap(), &spec).unwrap());
        assert!(!in_group(&Perm::swap(p, a(0), a(3)).unwrap(), &spec).unwrap());
        let bad = PermGroupSpec::Shift {
            family: vec![set(&[0, 1]), set(&[0])],
        };
        assert!(bad.validate(p).is_err());
    }

    #[test]
    fn order_respecting_is_trivial_on_every_order() {
        let p = pool(3);
        let perms = enumerate_perms(p, 6).unwrap();
        for order in p.atoms().permutations(3) {
            let spec = PermGroupSpec::OrderRespecting { order };
            let members: Vec<_> = perms.iter().filter(|q| in_group(q, &spec).unwrap()).collect();
            assert_eq!(members.len(), 1);
            assert!(members[0].is_identity());
        }
    }

    #[test]
    fn fix_generator_examples() {
        let p = pool(3);
        assert!(fix_generators(&p.atom_set(), p).unwrap().is_empty());
        assert_eq!(fix_generators(&AtomSet::new(), p).unwrap().len(), 3);
    }

    #[test]
    fn generated_subgroup_is_exactly_fix() {
        let p = pool(4);
        let perms = enumerate_perms(p, 6).unwrap();
        for fixed in p.atoms().powerset() {
            let fixed: AtomSet = fixed.into_iter().collect();
            let gens = fix_generators(&fixed, p).unwrap();
            let generated = generated_subgroup(&gens, p).unwrap();
            let by_definition: BTreeSet<Perm> = perms
                .iter()
                .filter(|q| fixed.iter().all(|&x| q.image(x) == x))
                .cloned()
                .collect();
            assert_eq!(generated, by_definition, "fixed = {}", fmt_atom_set(&fixed));
        }
    }

    #[test]
    fn group_syntax_round_trips() {
        let p = pool(4);
        for src in ["full", "finitary:2", "order:a0,a1,a2,a3", "permissive:a0,a1:1", "shift:{a0};{a0, a1}"] {
            let spec = PermGroupSpec::parse(src, p).unwrap();
            assert_eq!(PermGroupSpec::parse(&spec.to_string(), p).unwrap(), spec);
        }
        assert_eq!(
            PermGroupSpec::parse("order", p).unwrap(),
            PermGroupSpec::natural_order(p)
        );
        assert!(PermGroupSpec::parse("bogus", p).is_err());
        assert!(PermGroupSpec::parse("order:a0,a1", p).is_err());
    }
}
