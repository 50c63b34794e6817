use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use super::HfaError;
use crate::atoms_perms::{Atom, AtomPool, AtomSet};

/// A hereditarily finite element over a pool of atoms: either an atom or a
/// finite set of elements.
///
/// Set members are kept sorted and duplicate-free, so structural equality is
/// extensional equality of sets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Atom(Atom),
    Set(Arc<SetNode>),
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct SetNode {
    rank: u32,
    members: Vec<Element>,
}

impl Element {
    pub fn atom(a: Atom) -> Self {
        Element::Atom(a)
    }

    pub fn empty() -> Self {
        Element::Set(Arc::new(SetNode {
            rank: 0,
            members: Vec::new(),
        }))
    }

    /// The set of the given members, canonicalized.
    pub fn set<I: IntoIterator<Item = Element>>(members: I) -> Self {
        let mut members: Vec<Element> = members.into_iter().collect();
        members.sort();
        members.dedup();
        Self::from_canonical(members)
    }

    /// Builds a set from members already sorted and duplicate-free.
    pub(crate) fn from_canonical(members: Vec<Element>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let rank = members.iter().map(|m| m.rank() + 1).max().unwrap_or(0);
        Element::Set(Arc::new(SetNode { rank, members }))
    }

    /// The set of every atom in the pool.
    pub fn all_atoms(pool: AtomPool) -> Self {
        Self::from_canonical(pool.atoms().map(Element::Atom).collect())
    }

    /// The unordered pair `{x, y}`.
    pub fn pair(x: Element, y: Element) -> Self {
        Self::set([x, y])
    }

    pub fn singleton(x: Element) -> Self {
        Self::from_canonical(vec![x])
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Element::Atom(_))
    }

    pub fn is_set(&self) -> bool {
        matches!(self, Element::Set(_))
    }

    pub fn as_atom(&self) -> Option<Atom> {
        match self {
            Element::Atom(a) => Some(*a),
            Element::Set(_) => None,
        }
    }

    pub fn is_empty_set(&self) -> bool {
        matches!(self, Element::Set(node) if node.members.is_empty())
    }

    /// Members in canonical order; atoms have none.
    pub fn members(&self) -> &[Element] {
        match self {
            Element::Atom(_) => &[],
            Element::Set(node) => &node.members,
        }
    }

    /// `y ∈ self`. Atoms contain nothing.
    pub fn contains(&self, y: &Element) -> bool {
        self.members().binary_search(y).is_ok()
    }

    /// 0 for atoms and ∅; one more than the largest member rank otherwise.
    pub fn rank(&self) -> u32 {
        match self {
            Element::Atom(_) => 0,
            Element::Set(node) => node.rank,
        }
    }

    /// Every atom occurring hereditarily in the element.
    pub fn atoms_of(&self) -> AtomSet {
        let mut out = AtomSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut AtomSet) {
        match self {
            Element::Atom(a) => {
                out.insert(*a);
            }
            Element::Set(node) => node.members.iter().for_each(|m| m.collect_atoms(out)),
        }
    }

    /// Largest atom index occurring in the element, if any.
    pub fn max_atom(&self) -> Option<Atom> {
        match self {
            Element::Atom(a) => Some(*a),
            Element::Set(node) => node.members.iter().filter_map(Element::max_atom).max(),
        }
    }

    /// Fails when the element mentions an atom outside `pool`.
    pub fn check_pool(&self, pool: AtomPool) -> Result<(), HfaError> {
        match self.max_atom() {
            Some(a) if !pool.contains(a) => Err(HfaError::PoolMismatch {
                atom: a,
                size: pool.size(),
            }),
            _ => Ok(()),
        }
    }

    fn require_set(&self, op: &'static str) -> Result<&[Element], HfaError> {
        match self {
            Element::Atom(a) => Err(HfaError::NotASet {
                op,
                element: Element::Atom(*a).to_string(),
            }),
            Element::Set(node) => Ok(&node.members),
        }
    }

    /// `self ⊆ other` for sets: every member of `self` is a member of `other`.
    pub fn is_subset(&self, other: &Element) -> bool {
        self.members().iter().all(|m| other.contains(m))
    }

    /// The set of all subsets. Errors on atoms.
    pub fn powerset(&self) -> Result<Element, HfaError> {
        let members = self.require_set("powerset")?;
        if members.len() > 20 {
            return Err(HfaError::TooLarge {
                op: "powerset",
                size: members.len(),
            });
        }
        Ok(Element::set(
            members.iter().cloned().powerset().map(Element::from_canonical),
        ))
    }

    /// The nonempty subsets.
    pub fn nonempty_subsets(&self) -> Result<Vec<Element>, HfaError> {
        let members = self.require_set("nonempty powerset")?;
        if members.len() > 20 {
            return Err(HfaError::TooLarge {
                op: "nonempty powerset",
                size: members.len(),
            });
        }
        Ok(members
            .iter()
            .cloned()
            .powerset()
            .filter(|s| !s.is_empty())
            .map(Element::from_canonical)
            .collect())
    }

    /// Union of the members; atom members contribute nothing. Errors on atoms.
    pub fn union(&self) -> Result<Element, HfaError> {
        let members = self.require_set("union")?;
        Ok(Element::set(
            members.iter().flat_map(|m| m.members().iter().cloned()),
        ))
    }

    /// The Kuratowski ordered pair `{{x, y}, {x}}`.
    pub fn kuratowski_pair(x: Element, y: Element) -> Element {
        let single = Element::singleton(x.clone());
        Element::pair(Element::pair(x, y), single)
    }

    /// Inverse of [`Element::kuratowski_pair`].
    pub fn decode_pair(&self) -> Result<(Element, Element), HfaError> {
        let not_pair = || HfaError::NotAPair(self.to_string());
        let members = match self {
            Element::Set(node) => &node.members,
            Element::Atom(_) => return Err(not_pair()),
        };
        match members.as_slice() {
            // {{x}} = (x, x)
            [only] => match only.members() {
                [x] if only.is_set() => Ok((x.clone(), x.clone())),
                _ => Err(not_pair()),
            },
            [p, q] => {
                let (single, double) = match (p.members().len(), q.members().len()) {
                    (1, 2) if p.is_set() && q.is_set() => (p, q),
                    (2, 1) if p.is_set() && q.is_set() => (q, p),
                    _ => return Err(not_pair()),
                };
                let x = &single.members()[0];
                let y = double
                    .members()
                    .iter()
                    .find(|m| *m != x)
                    .ok_or_else(not_pair)?;
                if !double.contains(x) {
                    return Err(not_pair());
                }
                Ok((x.clone(), y.clone()))
            }
            _ => Err(not_pair()),
        }
    }

    /// True when `self` is the graph of a function from `domain` to `codomain`.
    pub fn is_function_set(&self, domain: &Element, codomain: &Element) -> bool {
        self.function_graph(domain, codomain).is_some()
    }

    /// True when `self` is the graph of an injective function from `domain`
    /// to `codomain`.
    pub fn is_injective_function_set(&self, domain: &Element, codomain: &Element) -> bool {
        match self.function_graph(domain, codomain) {
            Some(pairs) => pairs.iter().map(|(_, y)| y).all_unique(),
            None => false,
        }
    }

    fn function_graph(&self, domain: &Element, codomain: &Element) -> Option<Vec<(Element, Element)>> {
        if !(self.is_set() && domain.is_set() && codomain.is_set()) {
            return None;
        }
        let mut pairs = Vec::with_capacity(self.members().len());
        for m in self.members() {
            let (x, y) = m.decode_pair().ok()?;
            if !domain.contains(&x) || !codomain.contains(&y) {
                return None;
            }
            pairs.push((x, y));
        }
        let firsts: Vec<&Element> = pairs.iter().map(|(x, _)| x).collect();
        if !firsts.iter().all_unique() || firsts.len() != domain.members().len() {
            return None;
        }
        Some(pairs)
    }

    /// Looks up `f(x)` in a function-set.
    pub fn apply_function_set(&self, x: &Element) -> Option<Element> {
        self.members()
            .iter()
            .filter_map(|m| m.decode_pair().ok())
            .find(|(k, _)| k == x)
            .map(|(_, v)| v)
    }
}

impl Ord for Element {
    /// Rank first, then atoms before sets, atoms by index, sets
    /// lexicographically by their canonical member lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank()).then_with(|| match (self, other) {
            (Element::Atom(a), Element::Atom(b)) => a.cmp(b),
            (Element::Atom(_), Element::Set(_)) => Ordering::Less,
            (Element::Set(_), Element::Atom(_)) => Ordering::Greater,
            (Element::Set(x), Element::Set(y)) => {
                if Arc::ptr_eq(x, y) {
                    Ordering::Equal
                } else {
                    x.members.cmp(&y.members)
                }
            }
        })
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Atom(a) => write!(f, "{a}"),
            Element::Set(node) => {
                f.write_str("{")?;
                for (i, m) in node.members.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{m}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl From<Atom> for Element {
    fn from(a: Atom) -> Self {
        Element::Atom(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(i: u32) -> Element {
        Element::atom(Atom::new(i))
    }

    fn el(src: &str) -> Element {
        src.parse().unwrap()
    }

    #[test]
    fn canonical_form_dedups_and_sorts() {
        let x = Element::set([at(1), at(0), at(1)]);
        assert_eq!(x.to_string(), "{a0, a1}");
        assert_eq!(x, Element::set([at(0), at(1)]));
        assert_eq!(Element::set(x.members().iter().cloned()), x);
    }

    #[test]
    fn atoms_are_not_the_empty_set() {
        assert_ne!(at(0), Element::empty());
        assert!(!at(0).contains(&at(0)));
        assert!(at(0).members().is_empty());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(at(0).rank(), 0);
        assert_eq!(Element::empty().rank(), 0);
        assert_eq!(Element::singleton(Element::empty()).rank(), 1);
        assert_eq!(Element::kuratowski_pair(at(0), at(1)).rank(), 2);
    }

    #[test]
    fn kuratowski_pair_examples() {
        let x = el("{a0}");
        assert_eq!(
            Element::kuratowski_pair(x.clone(), x.clone()),
            Element::singleton(Element::singleton(x))
        );
        assert_eq!(
            el("{{a0, a1}, {a0}}").decode_pair().unwrap(),
            (at(0), at(1))
        );
        assert_eq!(el("{{a0}}").decode_pair().unwrap(), (at(0), at(0)));
        assert!(matches!(at(0).decode_pair(), Err(HfaError::NotAPair(_))));
        assert!(el("{}").decode_pair().is_err());
        assert!(el("{{a0, a1}, {a2}}").decode_pair().is_err());
        assert!(el("{{a0, a1}}").decode_pair().is_err());
        assert!(el("{a0, {a0}}").decode_pair().is_err());
    }

    #[test]
    fn powerset_examples() {
        assert_eq!(Element::empty().powerset().unwrap(), el("{{}}"));
        assert_eq!(el("{a0, a1}").powerset().unwrap().members().len(), 4);
        assert!(matches!(at(0).powerset(), Err(HfaError::NotASet { .. })));
    }

    #[test]
    fn union_examples() {
        assert_eq!(Element::empty().union().unwrap(), Element::empty());
        assert_eq!(el("{{a0}, {a0, a1}}").union().unwrap(), el("{a0, a1}"));
        assert_eq!(el("{a0, {a1}}").union().unwrap(), el("{a1}"));
        assert!(at(0).union().is_err());
    }

    #[test]
    fn function_set_examples() {
        let empty = Element::empty();
        assert!(empty.is_function_set(&empty, &el("{a0}")));
        let x = el("{a0}");
        let y = el("{a0, a1}");
        let f = Element::set([Element::kuratowski_pair(at(0), at(1))]);
        assert!(f.is_function_set(&x, &y));
        assert_eq!(f.apply_function_set(&at(0)), Some(at(1)));
        let g = Element::set([
            Element::kuratowski_pair(at(0), at(0)),
            Element::kuratowski_pair(at(0), at(1)),
        ]);
        assert!(!g.is_function_set(&x, &y));
        // missing domain point
        assert!(!Element::empty().is_function_set(&x, &y));
    }

    #[test]
    fn injective_function_set_examples() {
        let empty = Element::empty();
        assert!(empty.is_injective_function_set(&empty, &empty));
        let xy = el("{a0, a1}");
        let swap = Element::set([
            Element::kuratowski_pair(at(0), at(1)),
            Element::kuratowski_pair(at(1), at(0)),
        ]);
        assert!(swap.is_injective_function_set(&xy, &xy));
        let collapse = Element::set([
            Element::kuratowski_pair(at(0), at(0)),
            Element::kuratowski_pair(at(1), at(0)),
        ]);
        assert!(collapse.is_function_set(&xy, &xy));
        assert!(!collapse.is_injective_function_set(&xy, &xy));
    }

    #[test]
    fn atoms_of_examples() {
        assert!(Element::empty().atoms_of().is_empty());
        assert_eq!(
            Element::kuratowski_pair(at(0), at(1)).atoms_of(),
            [Atom::new(0), Atom::new(1)].into_iter().collect()
        );
    }

    #[test]
    fn order_is_rank_first() {
        assert!(at(5) < Element::empty());
        assert!(Element::empty() < el("{a0}"));
        assert!(el("{a1}") < el("{{}}") || el("{{}}") < el("{a1}"));
        assert!(el("{a0, a1}") < el("{{a0}}"));
    }
}
