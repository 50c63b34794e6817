//! Equivariance checking: truth and denotation are invariant under permuting
//! every element constant, and break when only some occurrences are moved.

use serde::Serialize;
use thiserror::Error;

use crate::atoms_perms::{enumerate_perms, Perm, PermError, DEFAULT_PERM_CAP};
use crate::hfa::{Element, Universe};
use crate::lang::{parse_formula, print_formula, print_term, Formula, Term};
use crate::semantics::{denote, satisfies, SemanticsError};

/// Candidate budget for the counterexample searches.
pub const DEFAULT_SEARCH_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivarError {
    #[error("no counterexample within {budget} candidates on a {pool}-atom pool")]
    NotFound { pool: u32, budget: usize },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaCheck {
    pub formula: String,
    pub perm: String,
    pub permuted: String,
    pub original_holds: bool,
    pub permuted_holds: bool,
}

impl FormulaCheck {
    pub fn holds(&self) -> bool {
        self.original_holds == self.permuted_holds
    }
}

/// Compares the truth of `phi` and of its meta-action image under `p`.
pub fn check_formula_equivariance(u: &Universe, p: &Perm, phi: &Formula) -> Result<FormulaCheck, EquivarError> {
    let original = satisfies(u, phi)?;
    check_with_original(u, p, phi, original)
}

fn check_with_original(u: &Universe, p: &Perm, phi: &Formula, original_holds: bool) -> Result<FormulaCheck, EquivarError> {
    let moved = phi.meta_act(p).map_err(SemanticsError::from)?;
    Ok(FormulaCheck {
        formula: print_formula(phi),
        perm: p.to_string(),
        permuted: print_formula(&moved),
        original_holds,
        permuted_holds: satisfies(u, &moved)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermCheck {
    pub term: String,
    pub perm: String,
    /// `p` applied to the denotation of the term.
    pub acted: Element,
    /// The denotation of the permuted term.
    pub denoted: Element,
}

impl TermCheck {
    pub fn holds(&self) -> bool {
        self.acted == self.denoted
    }
}

/// Compares `p · [[s]]` with `[[p · s]]`.
pub fn check_term_equivariance(u: &Universe, p: &Perm, s: &Term) -> Result<TermCheck, EquivarError> {
    let x = denote(s, u)?;
    let moved = s.meta_act(p).map_err(SemanticsError::from)?;
    Ok(TermCheck {
        term: print_term(s),
        perm: p.to_string(),
        acted: p.permute(&x),
        denoted: denote(&moved, u)?,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<FormulaCheck>,
}

impl SuiteReport {
    pub fn total(&self) -> usize {
        self.checks.len()
    }

    pub fn held(&self) -> usize {
        self.checks.iter().filter(|c| c.holds()).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &FormulaCheck> {
        self.checks.iter().filter(|c| !c.holds())
    }

    pub fn summary(&self) -> String {
        format!("{}/{} hold", self.held(), self.total())
    }

    /// One line per (formula, permutation), then the summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let verdict = if c.holds() { "hold" } else { "FAIL" };
            out.push_str(&format!(
                "{verdict} {} {} -> {} | {}\n",
                c.perm, c.original_holds, c.permuted_holds, c.formula
            ));
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }
}

/// Every corpus formula against every permutation of the universe's pool.
pub fn exhaustive_equivar_suite(u: &Universe, corpus: &[Formula]) -> Result<SuiteReport, EquivarError> {
    let perms = enumerate_perms(u.pool(), DEFAULT_PERM_CAP)?;
    let mut checks = Vec::with_capacity(corpus.len() * perms.len());
    for phi in corpus {
        let original = satisfies(u, phi)?;
        for p in &perms {
            checks.push(check_with_original(u, p, phi, original)?);
        }
    }
    Ok(SuiteReport { checks })
}

/// Formulas in a variable `x` and a constant slot `c`.
const SKELETONS: &[&str] = &[
    "x = c",
    "c in x",
    "x in Atoms & ~x = c",
    "exists y. y in x & y = c",
];

/// A closed instance `phi(v, k)` and a permutation `p` such that moving `v`
/// but not the constant `k` changes the truth value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaiveConstantWitness {
    pub skeleton: String,
    pub value: Element,
    pub constant: Element,
    pub perm: String,
    #[serde(skip)]
    p: Perm,
    /// `phi(v, k)`
    pub original: String,
    /// `phi(p·v, k)`
    pub naive: String,
    /// `phi(p·v, p·k)`
    pub repaired: String,
    pub original_holds: bool,
    pub naive_holds: bool,
    pub repaired_holds: bool,
}

fn instance(skeleton: &Formula, v: &Element, k: &Element) -> Formula {
    skeleton.substitute_all(&[("x".into(), v.clone()), ("c".into(), k.clone())])
}

impl NaiveConstantWitness {
    fn build(u: &Universe, skeleton: &Formula, v: &Element, k: &Element, p: &Perm) -> Result<Self, EquivarError> {
        let pv = p.permute(v);
        let original = instance(skeleton, v, k);
        let naive = instance(skeleton, &pv, k);
        let repaired = instance(skeleton, &pv, &p.permute(k));
        Ok(NaiveConstantWitness {
            skeleton: print_formula(skeleton),
            value: v.clone(),
            constant: k.clone(),
            perm: p.to_string(),
            p: p.clone(),
            original_holds: satisfies(u, &original)?,
            naive_holds: satisfies(u, &naive)?,
            repaired_holds: satisfies(u, &repaired)?,
            original: print_formula(&original),
            naive: print_formula(&naive),
            repaired: print_formula(&repaired),
        })
    }

    /// Re-evaluates all three instances; true iff the naive one disagrees
    /// with the original and the repaired one agrees.
    pub fn verify(&self, u: &Universe) -> Result<bool, EquivarError> {
        let skeleton = parse_formula(&self.skeleton).expect("printed skeletons re-parse");
        let again = Self::build(u, &skeleton, &self.value, &self.constant, &self.p)?;
        Ok(again == *self
            && again.original_holds != again.naive_holds
            && again.original_holds == again.repaired_holds)
    }

    pub fn to_text(&self) -> String {
        format!(
            "perm {}\noriginal: {} is {}\nconstant left fixed: {} is {}\nall occurrences permuted: {} is {}",
            self.perm,
            self.original,
            self.original_holds,
            self.naive,
            self.naive_holds,
            self.repaired,
            self.repaired_holds
        )
    }
}

fn search_perms(u: &Universe) -> Result<Vec<Perm>, EquivarError> {
    Ok(enumerate_perms(u.pool(), DEFAULT_PERM_CAP)?
        .into_iter()
        .filter(|p| !p.is_identity())
        .collect())
}

/// Breadth-first over skeletons, then values, constants and permutations.
pub fn find_naive_constant_counterexample(u: &Universe, budget: usize) -> Result<NaiveConstantWitness, EquivarError> {
    let not_found = EquivarError::NotFound {
        pool: u.pool().size(),
        budget,
    };
    if u.pool().size() < 2 {
        return Err(not_found);
    }
    let perms = search_perms(u)?;
    let constants: Vec<Element> = u.pool().atoms().map(Element::atom).collect();
    let mut nodes = 0;
    for src in SKELETONS {
        let skeleton = parse_formula(src).expect("built-in skeletons parse");
        for v in u.elements() {
            for k in &constants {
                for p in &perms {
                    nodes += 1;
                    if nodes > budget {
                        return Err(not_found);
                    }
                    let w = NaiveConstantWitness::build(u, &skeleton, v, k, p)?;
                    if w.original_holds != w.naive_holds {
                        return Ok(w);
                    }
                }
            }
        }
    }
    Err(not_found)
}

/// `x = y` holds, yet permuting only `x` breaks it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialPermuteWitness {
    pub x: Element,
    pub y: Element,
    pub perm: String,
    #[serde(skip)]
    p: Perm,
    /// `x = y`
    pub equal: bool,
    /// `p·x = y`
    pub partial_equal: bool,
    /// `p·x = p·y`
    pub repaired_equal: bool,
}

impl PartialPermuteWitness {
    fn build(u: &Universe, x: &Element, y: &Element, p: &Perm) -> Result<Self, EquivarError> {
        let eq = |s: &Element, t: &Element| {
            satisfies(u, &Formula::eq(Term::Elem(s.clone()), Term::Elem(t.clone())))
        };
        let (px, py) = (p.permute(x), p.permute(y));
        Ok(PartialPermuteWitness {
            x: x.clone(),
            y: y.clone(),
            perm: p.to_string(),
            p: p.clone(),
            equal: eq(x, y)?,
            partial_equal: eq(&px, y)?,
            repaired_equal: eq(&px, &py)?,
        })
    }

    pub fn verify(&self, u: &Universe) -> Result<bool, EquivarError> {
        let again = Self::build(u, &self.x, &self.y, &self.p)?;
        Ok(again == *self && again.equal && !again.partial_equal && again.repaired_equal)
    }

    pub fn to_text(&self) -> String {
        format!(
            "perm {}\n{} = {} is {}\n{}·{} = {} is {}\n{}·{} = {}·{} is {}",
            self.perm,
            self.x,
            self.y,
            self.equal,
            self.perm,
            self.x,
            self.y,
            self.partial_equal,
            self.perm,
            self.x,
            self.perm,
            self.y,
            self.repaired_equal
        )
    }
}

pub fn find_partial_permute_counterexample(u: &Universe, budget: usize) -> Result<PartialPermuteWitness, EquivarError> {
    let not_found = EquivarError::NotFound {
        pool: u.pool().size(),
        budget,
    };
    if u.pool().size() < 2 {
        return Err(not_found);
    }
    let perms = search_perms(u)?;
    let mut nodes = 0;
    for x in u.elements() {
        for p in &perms {
            nodes += 1;
            if nodes > budget {
                return Err(not_found);
            }
            let w = PartialPermuteWitness::build(u, x, x, p)?;
            if w.equal && !w.partial_equal {
                return Ok(w);
            }
        }
    }
    Err(not_found)
}
