//! A model of ZFA built inside pure hereditarily finite sets by tagging.
//!
//! An atom is `(n, 0)` for a von Neumann numeral `n`; a set is `(S, 1)` where
//! `S` is a pure set of tagged encodings. Pairs are Kuratowski pairs and the
//! tags are the numerals `0 = ∅` and `1 = {∅}`. Membership of the model is the
//! relation `∈̇`, which only looks inside tag-1 elements.

use std::collections::HashSet;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::atoms_perms::{enumerate_perms, Atom, Perm, DEFAULT_PERM_CAP};
use crate::hfa::{build_stages, Element, HfaError, Universe, UniverseConfig};
use crate::semantics::{audit_axioms, AxiomReport, ZfaModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaggedError {
    #[error("malformed tagged encoding {0}")]
    Malformed(String),
    #[error("{op} produced {result}, which is outside the built stages")]
    OutOfStage { op: &'static str, result: String },
    #[error(transparent)]
    Hfa(#[from] HfaError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Tag {
    Zero,
    One,
}

impl Tag {
    fn numeral(self) -> Element {
        numeral(match self {
            Tag::Zero => 0,
            Tag::One => 1,
        })
    }
}

/// The von Neumann numeral `n = {0, ..., n-1}`.
pub fn numeral(n: u32) -> Element {
    let mut members = Vec::new();
    for _ in 0..n {
        let next = Element::set(members.iter().cloned());
        members.push(next);
    }
    Element::set(members)
}

fn numeral_value(x: &Element) -> Option<u32> {
    let n = x.members().len() as u32;
    (x.is_set() && *x == numeral(n)).then_some(n)
}

/// An element of the tagged model. Equality and order are those of the
/// pure-set encoding.
#[derive(Clone)]
pub struct TaggedElement(Arc<Node>);

struct Node {
    encoding: Element,
    payload: Element,
    tag: Tag,
    /// Decoded members, ascending; empty for tag 0.
    members: Vec<TaggedElement>,
    rank: u32,
    /// Derived from the tag, payload shape and member hashes, so equal
    /// elements hash equally without walking the encoding.
    hash: u64,
}

impl TaggedElement {
    fn from_parts(payload: Element, tag: Tag, members: Vec<TaggedElement>) -> Self {
        let encoding = Element::kuratowski_pair(payload.clone(), tag.numeral());
        let rank = members.iter().map(|m| m.rank() + 1).max().unwrap_or(0);
        let mut h = DefaultHasher::new();
        tag.hash(&mut h);
        payload.members().len().hash(&mut h);
        for m in &members {
            m.0.hash.hash(&mut h);
        }
        TaggedElement(Arc::new(Node {
            encoding,
            payload,
            tag,
            members,
            rank,
            hash: h.finish(),
        }))
    }

    /// `(n, 0)`
    pub fn atom(n: u32) -> Self {
        Self::from_parts(numeral(n), Tag::Zero, Vec::new())
    }

    /// `(S, 1)` where `S` holds the encodings of `members`.
    pub fn set(members: impl IntoIterator<Item = TaggedElement>) -> Self {
        let mut members: Vec<TaggedElement> = members.into_iter().collect();
        members.sort();
        members.dedup();
        let payload = Element::set(members.iter().map(|m| m.encoding().clone()));
        Self::from_parts(payload, Tag::One, members)
    }

    /// Reads a pure-set encoding back, checking every invariant.
    pub fn decode(encoding: &Element) -> Result<Self, TaggedError> {
        let malformed = || TaggedError::Malformed(encoding.to_string());
        let (payload, tag) = encoding.decode_pair().map_err(|_| malformed())?;
        if !payload.atoms_of().is_empty() {
            return Err(malformed());
        }
        match numeral_value(&tag) {
            Some(0) => numeral_value(&payload).map(Self::atom).ok_or_else(malformed),
            Some(1) => {
                let members = payload
                    .members()
                    .iter()
                    .map(Self::decode)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Self::set(members))
            }
            _ => Err(malformed()),
        }
    }

    pub fn encoding(&self) -> &Element {
        &self.0.encoding
    }

    pub fn payload(&self) -> &Element {
        &self.0.payload
    }

    pub fn tag(&self) -> Tag {
        self.0.tag
    }

    pub fn is_atom(&self) -> bool {
        self.0.tag == Tag::Zero
    }

    pub fn members(&self) -> &[TaggedElement] {
        &self.0.members
    }

    pub fn rank(&self) -> u32 {
        self.0.rank
    }

    /// For tag 0, the numeral's value.
    pub fn atom_index(&self) -> Option<u32> {
        match self.tag() {
            Tag::Zero => numeral_value(self.payload()),
            Tag::One => None,
        }
    }

    /// The image of a native element: `a_i ↦ (i, 0)`, `S ↦ ({images}, 1)`.
    pub fn from_native(x: &Element) -> Self {
        match x.as_atom() {
            Some(a) => Self::atom(a.id()),
            None => Self::set(x.members().iter().map(Self::from_native)),
        }
    }

    pub fn permute(&self, p: &Perm) -> Self {
        match self.atom_index() {
            Some(n) => Self::atom(p.image(Atom::new(n)).id()),
            None => Self::set(self.members().iter().map(|m| m.permute(p))),
        }
    }
}

impl PartialEq for TaggedElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash && self.encoding() == other.encoding())
    }
}

impl Eq for TaggedElement {}

impl PartialOrd for TaggedElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TaggedElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.encoding().cmp(other.encoding())
    }
}

impl Hash for TaggedElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash.hash(state)
    }
}

impl fmt::Display for TaggedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.tag() {
            Tag::Zero => 0,
            Tag::One => 1,
        };
        write!(f, "({}, {tag})", self.payload())
    }
}

impl fmt::Debug for TaggedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for TaggedElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `x ∈̇ y`, by cases on the tags.
pub fn dot_in(x: &TaggedElement, y: &TaggedElement) -> bool {
    match (x.tag(), y.tag()) {
        (Tag::One, Tag::Zero) => false,
        (Tag::Zero, Tag::Zero) => false,
        (Tag::Zero, Tag::One) => y.payload().contains(x.encoding()),
        (Tag::One, Tag::One) => y.payload().contains(x.encoding()),
    }
}

/// [`dot_in`] on raw pure-set encodings.
pub fn dot_in_encoded(x: &Element, y: &Element) -> Result<bool, TaggedError> {
    Ok(dot_in(&TaggedElement::decode(x)?, &TaggedElement::decode(y)?))
}

/// The stages `𝔑_0 .. 𝔑_rank` and their union.
#[derive(Clone, Debug)]
pub struct TaggedModel {
    config: UniverseConfig,
    stages: Vec<Vec<TaggedElement>>,
    carrier: Vec<TaggedElement>,
    index: HashSet<TaggedElement>,
}

/// `𝔑_0` holds the tagged numerals below `config.atoms`; `𝔑_{i+1}` holds the
/// admitted tag-1 subsets of everything built so far, capped exactly like the
/// native universe. The carrier is the union of the stages, which also
/// contains `(∅, 1)`.
pub fn build_n(config: UniverseConfig) -> Result<TaggedModel, TaggedError> {
    let atoms: Vec<TaggedElement> = (0..config.atoms).map(TaggedElement::atom).collect();
    let mut base = atoms.clone();
    base.push(TaggedElement::set([]));
    base.sort();
    let fresh = build_stages(&config, base, TaggedElement::set, |e: &TaggedElement| {
        (!e.is_atom()).then(|| e.members().len())
    })?;
    let mut stages = vec![atoms];
    let mut cumulative: Vec<TaggedElement> = Vec::new();
    for (i, new) in fresh.iter().enumerate() {
        let before = cumulative.len();
        cumulative.extend(new.iter().cloned());
        if i == 0 {
            continue;
        }
        let limit = config.admitted_size(i as u32, before);
        let mut stage: Vec<TaggedElement> = cumulative
            .iter()
            .filter(|e| !e.is_atom() && e.members().len() <= limit)
            .cloned()
            .collect();
        stage.sort();
        stages.push(stage);
    }
    cumulative.sort();
    Ok(TaggedModel {
        config,
        stages,
        index: cumulative.iter().cloned().collect(),
        carrier: cumulative,
    })
}

/// Operations of the model, as interpreted inside pure sets.
pub enum NOp<'a> {
    Empty,
    Atoms,
    Pair(&'a TaggedElement, &'a TaggedElement),
    Powerset(&'a TaggedElement),
    Union(&'a TaggedElement),
    Comprehension(&'a TaggedElement, &'a dyn Fn(&TaggedElement) -> bool),
}

impl TaggedModel {
    pub fn config(&self) -> UniverseConfig {
        self.config
    }

    pub fn stages(&self) -> &[Vec<TaggedElement>] {
        &self.stages
    }

    pub fn elements(&self) -> &[TaggedElement] {
        &self.carrier
    }

    pub fn contains(&self, x: &TaggedElement) -> bool {
        self.index.contains(x)
    }

    /// `x ⊆̇ y`: every carrier element `∈̇ x` is `∈̇ y`.
    pub fn dot_subseteq(&self, x: &TaggedElement, y: &TaggedElement) -> bool {
        self.carrier
            .iter()
            .all(|z| !dot_in(z, x) || dot_in(z, y))
    }

    /// [`Self::dot_subseteq`] computed from decoded members only.
    pub fn dot_subseteq_fast(&self, x: &TaggedElement, y: &TaggedElement) -> bool {
        x.members().iter().all(|z| dot_in(z, y))
    }

    /// Builds the result of `op`; errors if it is not in the carrier.
    pub fn n_interpret(&self, op: NOp<'_>) -> Result<TaggedElement, TaggedError> {
        let (name, result) = match op {
            NOp::Empty => ("empty", TaggedElement::set([])),
            NOp::Atoms => ("Atoms", self.atoms_set()),
            NOp::Pair(x, y) => ("pair", TaggedElement::set([x.clone(), y.clone()])),
            NOp::Powerset(y) => ("powerset", self.powerset_of(y)),
            NOp::Union(x) => ("union", self.union_of(x)),
            NOp::Comprehension(x, keep) => (
                "comprehension",
                TaggedElement::set(self.carrier.iter().filter(|z| dot_in(z, x) && keep(z)).cloned()),
            ),
        };
        if self.contains(&result) {
            Ok(result)
        } else {
            Err(TaggedError::OutOfStage {
                op: name,
                result: result.to_string(),
            })
        }
    }

    fn atoms_set(&self) -> TaggedElement {
        TaggedElement::set((0..self.config.atoms).map(TaggedElement::atom))
    }

    /// Tag-1 carrier elements `⊆̇ y`. Tag-0 elements are vacuously `⊆̇`
    /// anything and are left out.
    fn powerset_of(&self, y: &TaggedElement) -> TaggedElement {
        TaggedElement::set(
            self.carrier
                .iter()
                .filter(|z| !z.is_atom() && self.dot_subseteq_fast(z, y))
                .cloned(),
        )
    }

    /// Elements `∈̇` some element `∈̇ x`.
    fn union_of(&self, x: &TaggedElement) -> TaggedElement {
        TaggedElement::set(x.members().iter().flat_map(|w| w.members().iter().cloned()))
    }
}

impl ZfaModel for TaggedModel {
    type Elem = TaggedElement;

    fn carrier(&self) -> &[TaggedElement] {
        &self.carrier
    }

    fn contains(&self, x: &TaggedElement) -> bool {
        TaggedModel::contains(self, x)
    }

    fn admits(&self, x: &TaggedElement) -> bool {
        if let Some(n) = x.atom_index() {
            return n < self.config.atoms;
        }
        let capped = match self.config.subset_cap {
            Some(cap) if x.rank() >= 2 => x.members().len() > cap,
            _ => false,
        };
        x.rank() <= self.config.rank && !capped && x.members().iter().all(|m| self.contains(m))
    }

    fn is_atom(&self, x: &TaggedElement) -> bool {
        x.is_atom()
    }

    fn members(&self, x: &TaggedElement) -> Vec<TaggedElement> {
        x.members().to_vec()
    }

    fn is_member(&self, y: &TaggedElement, x: &TaggedElement) -> bool {
        dot_in(y, x)
    }

    fn rank(&self, x: &TaggedElement) -> u32 {
        x.rank()
    }

    fn empty(&self) -> TaggedElement {
        TaggedElement::set([])
    }

    fn set_of(&self, members: Vec<TaggedElement>) -> TaggedElement {
        TaggedElement::set(members)
    }

    fn pair(&self, x: &TaggedElement, y: &TaggedElement) -> TaggedElement {
        TaggedElement::set([x.clone(), y.clone()])
    }

    fn union(&self, x: &TaggedElement) -> TaggedElement {
        self.union_of(x)
    }

    fn powerset(&self, x: &TaggedElement) -> Option<TaggedElement> {
        Some(self.powerset_of(x))
    }

    fn permutations(&self) -> Vec<Perm> {
        crate::atoms_perms::AtomPool::new(self.config.atoms)
            .and_then(|pool| enumerate_perms(pool, DEFAULT_PERM_CAP))
            .unwrap_or_default()
    }

    fn permute(&self, p: &Perm, x: &TaggedElement) -> TaggedElement {
        x.permute(p)
    }

    fn describe(&self) -> String {
        format!("tagged, {}", self.config)
    }
}

/// Runs the axiom auditor on the tagged model.
pub fn audit_n(model: &TaggedModel) -> Vec<AxiomReport> {
    audit_axioms(model)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub native_elements: usize,
    pub tagged_elements: usize,
    /// The native-to-tagged map is injective and onto the carrier.
    pub bijective: bool,
    pub membership_pairs: u64,
    pub mismatches: u64,
    pub first_mismatch: Option<String>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.mismatches == 0
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "native elements: {}\ntagged elements: {}\nbijective: {}\nmembership pairs: {}\nmismatches: {}",
            self.native_elements, self.tagged_elements, self.bijective, self.membership_pairs, self.mismatches
        );
        if let Some(m) = &self.first_mismatch {
            out.push_str(&format!("\nfirst mismatch: {m}"));
        }
        out
    }
}

/// Checks that `a_i ↦ (i, 0)`, `S ↦ ({images}, 1)` is a membership-preserving
/// bijection from `u` onto the model's carrier.
pub fn iso_check(model: &TaggedModel, u: &Universe) -> IsoReport {
    let images: Vec<TaggedElement> = u.elements().iter().map(TaggedElement::from_native).collect();
    let distinct: HashSet<&TaggedElement> = images.iter().collect();
    let bijective = distinct.len() == images.len()
        && images.len() == model.carrier.len()
        && images.iter().all(|t| model.contains(t));
    let mut first_mismatch = None;
    let mut mismatches = 0;
    let mut pairs = 0;
    for (x, tx) in u.elements().iter().zip(&images) {
        for (y, ty) in u.elements().iter().zip(&images) {
            pairs += 1;
            let native = x.contains(y);
            if native != dot_in(ty, tx) {
                mismatches += 1;
                first_mismatch.get_or_insert_with(|| {
                    format!("{y} in {x} is {native} but its image under dot-membership is {}", !native)
                });
            }
        }
    }
    IsoReport {
        native_elements: u.len(),
        tagged_elements: model.carrier.len(),
        bijective,
        membership_pairs: pairs,
        mismatches,
        first_mismatch,
    }
}
