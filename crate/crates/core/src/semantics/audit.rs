//! Instance checking of the ZFA axioms over a finite model.
//!
//! The auditor is generic over [`ZfaModel`] so the native universe and the
//! tagged construction are checked by the same code. Constructed sets that
//! fall outside the carrier are classified: beyond the model's rank or
//! subset-size bound they are frontier escapes and are only counted; within
//! the bound they are a genuine leak and the axiom reports out-of-universe.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::atoms_perms::{enumerate_perms, Perm, DEFAULT_PERM_CAP};
use crate::hfa::{Element, Universe};

/// Reason attached to the axioms that cannot be checked at finite scale.
pub const SKIP_REASON: &str = "requires infinite universe / class function";

/// A finite structure interpreting the language of sets with atoms.
pub trait ZfaModel {
    type Elem: Clone + Ord + fmt::Display;

    /// Every element, in a fixed order. Quantifiers range over this.
    fn carrier(&self) -> &[Self::Elem];
    fn contains(&self, x: &Self::Elem) -> bool;
    /// Within the rank and subset-size bounds the carrier was built with.
    fn admits(&self, x: &Self::Elem) -> bool;
    fn is_atom(&self, x: &Self::Elem) -> bool;
    /// Members of `x`, ascending.
    fn members(&self, x: &Self::Elem) -> Vec<Self::Elem>;
    /// The model's membership relation `y ∈ x`.
    fn is_member(&self, y: &Self::Elem, x: &Self::Elem) -> bool;
    fn rank(&self, x: &Self::Elem) -> u32;
    fn empty(&self) -> Self::Elem;
    /// The set with exactly the given members.
    fn set_of(&self, members: Vec<Self::Elem>) -> Self::Elem;
    fn pair(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn union(&self, x: &Self::Elem) -> Self::Elem;
    /// `None` when the powerset is too large to build at all.
    fn powerset(&self, x: &Self::Elem) -> Option<Self::Elem>;
    fn permutations(&self) -> Vec<Perm>;
    fn permute(&self, p: &Perm, x: &Self::Elem) -> Self::Elem;
    /// Short parameter summary for reports.
    fn describe(&self) -> String;

    fn kuratowski(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let xx = self.pair(x, x);
        let xy = self.pair(x, y);
        self.pair(&xy, &xx)
    }

    /// `y ⊆ x` for sets, via the model's membership.
    fn is_subset(&self, y: &Self::Elem, x: &Self::Elem) -> bool {
        self.members(y).iter().all(|m| self.is_member(m, x))
    }
}

impl ZfaModel for Universe {
    type Elem = Element;

    fn carrier(&self) -> &[Element] {
        self.elements()
    }

    fn contains(&self, x: &Element) -> bool {
        Universe::contains(self, x)
    }

    fn admits(&self, x: &Element) -> bool {
        let rank = x.rank();
        let capped = match self.subset_cap() {
            Some(cap) if rank >= 2 => x.members().len() > cap,
            _ => false,
        };
        rank <= self.rank_bound()
            && !capped
            && x.check_pool(self.pool()).is_ok()
            && x.members().iter().all(|m| Universe::contains(self, m))
    }

    fn is_atom(&self, x: &Element) -> bool {
        x.is_atom()
    }

    fn members(&self, x: &Element) -> Vec<Element> {
        x.members().to_vec()
    }

    fn is_member(&self, y: &Element, x: &Element) -> bool {
        x.contains(y)
    }

    fn rank(&self, x: &Element) -> u32 {
        x.rank()
    }

    fn empty(&self) -> Element {
        Element::empty()
    }

    fn set_of(&self, members: Vec<Element>) -> Element {
        Element::set(members)
    }

    fn pair(&self, x: &Element, y: &Element) -> Element {
        Element::pair(x.clone(), y.clone())
    }

    fn union(&self, x: &Element) -> Element {
        Element::set(x.members().iter().flat_map(|m| m.members().iter().cloned()))
    }

    fn powerset(&self, x: &Element) -> Option<Element> {
        x.powerset().ok()
    }

    fn permutations(&self) -> Vec<Perm> {
        enumerate_perms(self.pool(), DEFAULT_PERM_CAP).unwrap_or_default()
    }

    fn permute(&self, p: &Perm, x: &Element) -> Element {
        p.permute(x)
    }

    fn describe(&self) -> String {
        self.config().to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    AtmEmpty,
    EmptySet,
    Extensionality,
    Comprehension,
    Pair,
    Union,
    Powerset,
    Induction,
    Choice,
    Infinity,
    AtmInf,
    Replacement,
}

impl Axiom {
    pub const ALL: [Axiom; 12] = [
        Axiom::AtmEmpty,
        Axiom::EmptySet,
        Axiom::Extensionality,
        Axiom::Comprehension,
        Axiom::Pair,
        Axiom::Union,
        Axiom::Powerset,
        Axiom::Induction,
        Axiom::Choice,
        Axiom::Infinity,
        Axiom::AtmInf,
        Axiom::Replacement,
    ];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AxiomStatus {
    Holds,
    Fails { witness: String, trace: String },
    Skipped { reason: String },
    OutOfUniverse { witness: String },
}

impl AxiomStatus {
    /// The verdict without its witness, for comparing audits of two models.
    pub fn verdict(&self) -> &'static str {
        match self {
            AxiomStatus::Holds => "holds",
            AxiomStatus::Fails { .. } => "fails",
            AxiomStatus::Skipped { .. } => "skipped",
            AxiomStatus::OutOfUniverse { .. } => "out_of_universe",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    #[serde(flatten)]
    pub status: AxiomStatus,
    pub instances_checked: u64,
    /// Constructions that left the carrier by exceeding its bounds.
    pub frontier_escapes: u64,
}

impl AxiomReport {
    pub fn to_text(&self) -> String {
        let head = format!(
            "{}: {} ({} instances, {} frontier escapes)",
            self.axiom,
            self.status.verdict(),
            self.instances_checked,
            self.frontier_escapes
        );
        match &self.status {
            AxiomStatus::Holds => head,
            AxiomStatus::Fails { witness, trace } => format!("{head}\n  witness: {witness}\n  trace: {trace}"),
            AxiomStatus::Skipped { reason } => format!("{head}\n  reason: {reason}"),
            AxiomStatus::OutOfUniverse { witness } => format!("{head}\n  witness: {witness}"),
        }
    }
}

/// Accumulates one axiom's instances; the first failure or leak wins.
struct Tally {
    axiom: Axiom,
    status: AxiomStatus,
    instances: u64,
    escapes: u64,
}

impl Tally {
    fn new(axiom: Axiom) -> Self {
        Tally {
            axiom,
            status: AxiomStatus::Holds,
            instances: 0,
            escapes: 0,
        }
    }

    fn done(&self) -> bool {
        self.status != AxiomStatus::Holds
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> (String, String)) {
        self.instances += 1;
        if !ok && !self.done() {
            let (witness, trace) = witness();
            self.status = AxiomStatus::Fails { witness, trace };
        }
    }

    /// Records a constructed element; returns whether it is in the carrier.
    fn built<M: ZfaModel>(&mut self, m: &M, x: &M::Elem, what: impl FnOnce() -> String) -> bool {
        if m.contains(x) {
            return true;
        }
        if m.admits(x) {
            if !self.done() {
                self.status = AxiomStatus::OutOfUniverse {
                    witness: format!("{} = {x}", what()),
                };
            }
        } else {
            self.escapes += 1;
        }
        false
    }

    fn report(self) -> AxiomReport {
        AxiomReport {
            axiom: self.axiom,
            status: self.status,
            instances_checked: self.instances,
            frontier_escapes: self.escapes,
        }
    }
}

fn list<E: fmt::Display>(xs: &[E]) -> String {
    format!("[{}]", xs.iter().join(", "))
}

fn sets<M: ZfaModel>(m: &M) -> impl Iterator<Item = &M::Elem> {
    m.carrier().iter().filter(move |x| !m.is_atom(x))
}

fn atm_empty<M: ZfaModel>(m: &M) -> AxiomReport {
    let mut t = Tally::new(Axiom::AtmEmpty);
    for a in m.carrier().iter().filter(|x| m.is_atom(x)) {
        for z in m.carrier() {
            t.check(!m.is_member(z, a), || {
                (format!("{z} in {a}"), format!("{a} is an atom but has member {z}"))
            });
        }
    }
    t.report()
}

fn empty_set<M: ZfaModel>(m: &M) -> AxiomReport {
    let mut t = Tally::new(Axiom::EmptySet);
    let e = m.empty();
    if t.built(m, &e, || "empty".into()) {
        t.check(!m.is_atom(&e), || (format!("{e}"), "the empty set is an atom".into()));
        for z in m.carrier() {
            t.check(!m.is_member(z, &e), || {
                (format!("{z} in {e}"), "the empty set has a member".into())
            });
        }
    }
    t.report()
}

fn extensionality<M: ZfaModel>(m: &M) -> AxiomReport {
    let mut t = Tally::new(Axiom::Extensionality);
    let all: Vec<(&M::Elem, Vec<M::Elem>)> = sets(m).map(|x| (x, m.members(x))).collect();
    for (i, (x, mx)) in all.iter().enumerate() {
        for (y, my) in &all[i + 1..] {
            t.check(mx != my, || {
                (
                    format!("{x} and {y}"),
                    format!("distinct sets with the same members {}", list(mx)),
                )
            });
        }
    }
    t.report()
}

type Predicate<M> = (&'static str, fn(&M, &<M as ZfaModel>::Elem) -> bool);

fn predicates<M: ZfaModel>() -> Vec<Predicate<M>> {
    vec![
        ("false", |_, _| false),
        ("z = z", |_, _| true),
        ("z in Atoms", |m, z| m.is_atom(z)),
        ("~z in Atoms", |m, z| !m.is_atom(z)),
        ("z = empty", |m, z| !m.is_atom(z) && m.members(z).is_empty()),
        ("exists w. w in z", |m, z| !m.members(z).is_empty()),
    ]
}

fn comprehension<M: ZfaModel>(m: &M) -> AxiomReport {
    let mut t = Tally::new(Axiom::Comprehension);
    for x in sets(m) {
        let mx = m.members(x);
        for (name, pred) in predicates::<M>() {
            let kept: Vec<M::Elem> = mx.iter().filter(|z| pred(m, z)).cloned().collect();
            let s = m.set_of(kept.clone());
            if t.built(m, &s, || format!("{{z in {x} | {name}}}")) {
                let got = m.members(&s);
                t.check(got == kept, || {
                    (
                        format!("{{z in {x} | {name}}}"),
                        format!("members {} but expected {}", list(&got), list(&kept)),
                    )
                });
            }
        }
    }
    t.report()
}

fn pair<M: ZfaModel>(m: &M) -> AxiomReport {
    let mut t = Tally::new(Axiom::Pair);
    for x in m.carrier() {
        for y in m.carrier().iter().filter(|y| *y >= x) {
            let p = m.pair(x, y);
            if t.built(m, &p, || format!("{{{x}, {y}}}")) {
                let got = m.members(&p);
                let mut want = vec![x.clone(), y.clone()];
                want.dedup();
                t.check(got == want, || {
                    (format!("{{{x}, {y}}}"), format!("members {}", list(&got)))
                });
            }
        }
    }
    t.report()
}

fn union<M: ZfaModel>(m: &M) -> AxiomReport {
    let mut t = Tally::new(Axiom::Union);
    for x in sets(m) {
        let u = m.union(x);
        if t.built(m, &u, || format!("Union({x})")) {
            let mut want: Vec<M::Elem> = m.members(x).iter().flat_map(|y| m.members(y)).collect();
            want.sort();
            want.dedup();
            let got = m.members(&u);
            t.check(got == want, || {
                (
                    format!("Union({x})"),
                    format!("members {} but members of members are {}", list(&got), list(&want)),
                )
            });
        }
    }
    t.report()
}

fn powerset<M: ZfaModel>(m: &M) -> AxiomReport {
    let mut t = Tally::new(Axiom::Powerset);
    for x in sets(m) {
        let Some(p) = m.powerset(x) else {
            t.escapes += 1;
            continue;
        };
        if t.built(m, &p, || format!("pow({x})")) {
            let want: Vec<M::Elem> = sets(m).filter(|z| m.is_subset(z, x)).cloned().collect();
            let got = m.members(&p);
            t.check(got == want, || {
                (
                    format!("pow({x})"),
                    format!("members {} but the subsets in the model are {}", list(&got), list(&want)),
                )
            });
        }
    }
    t.report()
}

fn induction<M: ZfaModel>(m: &M) -> AxiomReport {
    let mut t = Tally::new(Axiom::Induction);
    for x in m.carrier() {
        for z in m.members(x) {
            t.check(m.rank(&z) < m.rank(x), || {
                (
                    format!("{z} in {x}"),
                    format!("rank {} is not below rank {}", m.rank(&z), m.rank(x)),
                )
            });
        }
    }
    t.report()
}

/// Nonempty subsets of `x`'s members, built with the model's constructor.
fn nonempty_subsets<M: ZfaModel>(m: &M, x: &M::Elem) -> Vec<M::Elem> {
    m.members(x)
        .into_iter()
        .powerset()
        .filter(|s| !s.is_empty())
        .map(|s| m.set_of(s))
        .collect()
}

/// Is `f` a function-set on the nonempty subsets of `x` choosing a member
/// of each? Returns a description of the first defect.
fn choice_defect<M: ZfaModel>(m: &M, f: &M::Elem, x: &M::Elem) -> Option<String> {
    let domain = nonempty_subsets(m, x);
    if m.members(f).len() != domain.len() {
        return Some(format!(
            "{} pairs for {} nonempty subsets",
            m.members(f).len(),
            domain.len()
        ));
    }
    for s in &domain {
        let chosen: Vec<M::Elem> = m
            .members(s)
            .into_iter()
            .filter(|c| m.is_member(&m.kuratowski(s, c), f))
            .collect();
        if chosen.len() != 1 {
            return Some(format!("{s} is paired with {} of its members", chosen.len()));
        }
    }
    None
}

/// Subsets beyond this size make the constructed choice function too large.
const CHOICE_SUBSET_LIMIT: usize = 12;

fn choice<M: ZfaModel>(m: &M) -> AxiomReport {
    let mut t = Tally::new(Axiom::Choice);
    let perms = m.permutations();
    for x in sets(m).filter(|x| !m.members(x).is_empty()) {
        if m.members(x).len() > CHOICE_SUBSET_LIMIT {
            t.escapes += 1;
            continue;
        }
        // choose the least member of every nonempty subset
        let f = m.set_of(
            nonempty_subsets(m, x)
                .iter()
                .map(|s| m.kuratowski(s, &m.members(s)[0]))
                .collect(),
        );
        let defect = choice_defect(m, &f, x);
        t.check(defect.is_none(), || {
            (format!("choice function {f} for {x}"), defect.clone().unwrap_or_default())
        });
        for p in &perms {
            let (pf, px) = (m.permute(p, &f), m.permute(p, x));
            let defect = choice_defect(m, &pf, &px);
            t.check(defect.is_none(), || {
                (
                    format!("{p} applied to the choice function for {x}"),
                    defect.clone().unwrap_or_default(),
                )
            });
        }
    }
    t.report()
}

fn skipped(axiom: Axiom) -> AxiomReport {
    AxiomReport {
        axiom,
        status: AxiomStatus::Skipped {
            reason: SKIP_REASON.into(),
        },
        instances_checked: 0,
        frontier_escapes: 0,
    }
}

/// Checks every axiom on `m`, in the order of [`Axiom::ALL`].
pub fn audit_axioms<M: ZfaModel>(m: &M) -> Vec<AxiomReport> {
    Axiom::ALL
        .iter()
        .map(|&axiom| match axiom {
            Axiom::AtmEmpty => atm_empty(m),
            Axiom::EmptySet => empty_set(m),
            Axiom::Extensionality => extensionality(m),
            Axiom::Comprehension => comprehension(m),
            Axiom::Pair => pair(m),
            Axiom::Union => union(m),
            Axiom::Powerset => powerset(m),
            Axiom::Induction => induction(m),
            Axiom::Choice => choice(m),
            Axiom::Infinity | Axiom::AtmInf | Axiom::Replacement => skipped(axiom),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hfa::UniverseConfig;

    fn audit(atoms: u32, rank: u32) -> Vec<AxiomReport> {
        audit_axioms(&Universe::generate(UniverseConfig::new(atoms, rank)).unwrap())
    }

    fn status(reports: &[AxiomReport], axiom: Axiom) -> &AxiomReport {
        reports.iter().find(|r| r.axiom == axiom).unwrap()
    }

    #[test]
    fn rank_one_audit_holds() {
        let reports = audit(3, 1);
        for r in &reports {
            match r.axiom {
                Axiom::Infinity | Axiom::AtmInf | Axiom::Replacement => {
                    assert_eq!(r.status, AxiomStatus::Skipped { reason: SKIP_REASON.into() })
                }
                _ => assert_eq!(r.status, AxiomStatus::Holds, "{}", r.to_text()),
            }
        }
        // 16 sets in the rank-1 universe
        assert_eq!(status(&reports, Axiom::Extensionality).instances_checked, 16 * 15 / 2);
        assert_eq!(status(&reports, Axiom::AtmEmpty).instances_checked, 3 * 19);
        assert!(status(&reports, Axiom::Powerset).frontier_escapes > 0);
        // every unordered pair is either checked or escapes the rank bound
        assert_eq!(
            status(&reports, Axiom::Pair).instances_checked + status(&reports, Axiom::Pair).frontier_escapes,
            19 * 20 / 2
        );
    }

    #[test]
    fn capped_rank_two_classifies_escapes_as_frontier() {
        let reports = audit(3, 2);
        for r in &reports {
            assert_ne!(r.status.verdict(), "fails", "{}", r.to_text());
            assert_ne!(r.status.verdict(), "out_of_universe", "{}", r.to_text());
        }
    }

    /// A universe with one set removed, so constructions leak inside the bounds.
    struct Holed {
        u: Universe,
        carrier: Vec<Element>,
        hole: Element,
    }

    impl ZfaModel for Holed {
        type Elem = Element;
        fn carrier(&self) -> &[Element] {
            &self.carrier
        }
        fn contains(&self, x: &Element) -> bool {
            *x != self.hole && self.u.contains(x)
        }
        fn admits(&self, x: &Element) -> bool {
            self.u.admits(x)
        }
        fn is_atom(&self, x: &Element) -> bool {
            x.is_atom()
        }
        fn members(&self, x: &Element) -> Vec<Element> {
            x.members().to_vec()
        }
        fn is_member(&self, y: &Element, x: &Element) -> bool {
            x.contains(y)
        }
        fn rank(&self, x: &Element) -> u32 {
            x.rank()
        }
        fn empty(&self) -> Element {
            Element::empty()
        }
        fn set_of(&self, members: Vec<Element>) -> Element {
            Element::set(members)
        }
        fn pair(&self, x: &Element, y: &Element) -> Element {
            self.u.pair(x, y)
        }
        fn union(&self, x: &Element) -> Element {
            // deliberately wrong: returns x itself
            x.clone()
        }
        fn powerset(&self, x: &Element) -> Option<Element> {
            x.powerset().ok()
        }
        fn permutations(&self) -> Vec<Perm> {
            self.u.permutations()
        }
        fn permute(&self, p: &Perm, x: &Element) -> Element {
            p.permute(x)
        }
        fn describe(&self) -> String {
            "holed".into()
        }
    }

    #[test]
    fn defects_are_reported_with_witnesses() {
        let u = Universe::generate(UniverseConfig::new(2, 1)).unwrap();
        let hole: Element = "{a0, a1}".parse().unwrap();
        let carrier = u.elements().iter().filter(|x| **x != hole).cloned().collect();
        let m = Holed { u, carrier, hole };
        let reports = audit_axioms(&m);
        let pair = status(&reports, Axiom::Pair);
        assert_eq!(pair.status.verdict(), "out_of_universe");
        let union = status(&reports, Axiom::Union);
        match &union.status {
            AxiomStatus::Fails { witness, .. } => assert!(witness.starts_with("Union(")),
            other => panic!("{other:?}"),
        }
        assert_eq!(status(&reports, Axiom::AtmEmpty).status, AxiomStatus::Holds);
    }
}
