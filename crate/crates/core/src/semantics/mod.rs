//! Denotation of terms and satisfaction of formulas over a finite universe,
//! and the axiom auditor.
//!
//! Quantifiers range over the enumerated universe. Every element a term
//! constructs must itself lie in the universe; otherwise evaluation stops with
//! [`SemanticsError::OutOfUniverse`] rather than truncating.

mod audit;

use thiserror::Error;

use crate::hfa::{Element, Universe};
use crate::lang::{print_term, Formula, LangError, Term};

pub use audit::{audit_axioms, Axiom, AxiomReport, AxiomStatus, ZfaModel, SKIP_REASON};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error("`{term}` denotes {element}, which is outside the universe ({config})")]
    OutOfUniverse {
        term: String,
        element: String,
        config: String,
    },
}

/// Bindings of quantified variables, innermost last.
type Env = Vec<(String, Element)>;

struct Evaluator<'u> {
    u: &'u Universe,
}

impl Evaluator<'_> {
    fn lookup<'e>(&self, env: &'e Env, v: &str) -> &'e Element {
        env.iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|(_, x)| x)
            .expect("closedness is checked before evaluation")
    }

    fn escape(&self, t: &Term, element: String) -> SemanticsError {
        SemanticsError::OutOfUniverse {
            term: print_term(t),
            element,
            config: self.u.config().to_string(),
        }
    }

    fn in_universe(&self, t: &Term, x: Element) -> Result<Element, SemanticsError> {
        if self.u.contains(&x) {
            Ok(x)
        } else {
            Err(self.escape(t, x.to_string()))
        }
    }

    fn term(&self, t: &Term, env: &mut Env) -> Result<Element, SemanticsError> {
        let x = match t {
            Term::Var(v) => return Ok(self.lookup(env, v).clone()),
            Term::Elem(x) => x.clone(),
            Term::Empty => Element::empty(),
            Term::Atoms => Element::all_atoms(self.u.pool()),
            Term::Pair(s, r) => Element::pair(self.term(s, env)?, self.term(r, env)?),
            // Atoms have no members, so they behave as ∅ under pow and Union.
            Term::Powerset(s) => {
                let s = self.term(s, env)?;
                if s.is_atom() {
                    Element::singleton(Element::empty())
                } else {
                    match s.powerset() {
                        Ok(p) => p,
                        Err(_) => return Err(self.escape(t, format!("the powerset of {s}"))),
                    }
                }
            }
            Term::Union(s) => {
                let s = self.term(s, env)?;
                Element::set(s.members().iter().flat_map(|m| m.members().iter().cloned()))
            }
            Term::Comprehension {
                binder,
                domain,
                body,
            } => {
                let d = self.term(domain, env)?;
                let mut kept = Vec::new();
                for m in d.members() {
                    env.push((binder.clone(), m.clone()));
                    let keep = self.formula(body, env);
                    env.pop();
                    if keep? {
                        kept.push(m.clone());
                    }
                }
                Element::set(kept)
            }
        };
        self.in_universe(t, x)
    }

    fn formula(&self, phi: &Formula, env: &mut Env) -> Result<bool, SemanticsError> {
        Ok(match phi {
            Formula::Eq(s, t) => self.term(s, env)? == self.term(t, env)?,
            Formula::Mem(s, t) => {
                let s = self.term(s, env)?;
                self.term(t, env)?.contains(&s)
            }
            Formula::Bot => false,
            Formula::And(a, b) => self.formula(a, env)? && self.formula(b, env)?,
            Formula::Implies(a, b) => !self.formula(a, env)? || self.formula(b, env)?,
            Formula::Forall(v, body) => {
                for x in self.u.elements() {
                    env.push((v.clone(), x.clone()));
                    let holds = self.formula(body, env);
                    env.pop();
                    if !holds? {
                        return Ok(false);
                    }
                }
                true
            }
        })
    }
}

fn require_closed(free: std::collections::BTreeSet<String>) -> Result<(), SemanticsError> {
    if free.is_empty() {
        Ok(())
    } else {
        Err(LangError::Open(free.into_iter().collect()).into())
    }
}

/// The element a closed term denotes.
pub fn denote(s: &Term, u: &Universe) -> Result<Element, SemanticsError> {
    require_closed(s.free_vars())?;
    Evaluator { u }.term(s, &mut Vec::new())
}

/// Truth of a closed formula in `u`.
pub fn satisfies(u: &Universe, phi: &Formula) -> Result<bool, SemanticsError> {
    require_closed(phi.free_vars())?;
    Evaluator { u }.formula(phi, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms_perms::{enumerate_perms, AtomPool, DEFAULT_PERM_CAP};
    use crate::hfa::UniverseConfig;
    use crate::lang::{parse_formula, parse_term, parse_term_corpus, TERM_CORPUS};

    fn u(atoms: u32, rank: u32) -> Universe {
        Universe::generate(UniverseConfig::new(atoms, rank)).unwrap()
    }

    fn sat(u: &Universe, s: &str) -> bool {
        satisfies(u, &parse_formula(s).unwrap()).unwrap()
    }

    fn den(u: &Universe, s: &str) -> Element {
        denote(&parse_term(s).unwrap(), u).unwrap()
    }

    #[test]
    fn denotation_examples() {
        let u = u(3, 2);
        assert_eq!(den(&u, "empty"), Element::empty());
        assert_eq!(den(&u, "{ x in Atoms | false }"), Element::empty());
        assert_eq!(den(&u, "pow(#{})"), "{{}}".parse().unwrap());
        assert_eq!(den(&u, "Atoms"), "{a0, a1, a2}".parse().unwrap());
        assert_eq!(den(&u, "Union(#{{a0}, {a1, a2}})"), den(&u, "Atoms"));
        assert_eq!(den(&u, "pow(#a1)"), "{{}}".parse().unwrap());
        assert_eq!(den(&u, "Union(#a1)"), Element::empty());
    }

    #[test]
    fn satisfaction_examples() {
        let u = u(3, 2);
        assert!(sat(&u, "forall x. x = x"));
        assert!(sat(&u, "#a0 in Atoms"));
        assert!(!sat(&u, "exists x. x in #a0"));
        assert!(sat(&u, "forall x. ~x in x"));
        assert!(sat(&u, "#{a0} subset Atoms"));
        assert!(!sat(&u, "Atoms subset #{a0}"));
    }

    #[test]
    fn open_and_escaping_input_is_rejected() {
        let u = u(3, 1);
        assert!(matches!(
            satisfies(&u, &parse_formula("x = x").unwrap()),
            Err(SemanticsError::Lang(LangError::Open(_)))
        ));
        let err = denote(&parse_term("pow(Atoms)").unwrap(), &u).unwrap_err();
        assert!(matches!(err, SemanticsError::OutOfUniverse { .. }), "{err}");
        // quantifying into an escape propagates the error
        assert!(satisfies(&u, &parse_formula("exists x. pow(x) = Atoms").unwrap()).is_err());
        assert!(denote(&parse_term("#a5").unwrap(), &u).is_err());
    }

    #[test]
    fn sugar_agrees_with_direct_clauses() {
        let u = u(3, 1);
        let elems = u.elements();
        let direct_exists = elems.iter().any(|x| elems.iter().any(|y| x.contains(y) && y.is_atom()));
        assert_eq!(sat(&u, "exists x. exists y. y in x & y in Atoms"), direct_exists);
        for x in elems {
            for y in elems {
                let bind = |s: &str| {
                    parse_formula(s)
                        .unwrap()
                        .substitute_all(&[("x".into(), x.clone()), ("y".into(), y.clone())])
                };
                let mem = y.contains(x);
                let eq = x == y;
                let check = |s: &str, want: bool| {
                    assert_eq!(satisfies(&u, &bind(s)).unwrap(), want, "{s} at x={x}, y={y}")
                };
                check("x in y | x = y", mem || eq);
                check("x in y <-> x = y", mem == eq);
                check("~x in y", !mem);
                check("x in y -> x = y", !mem || eq);
                check("x subset y", x.members().iter().all(|m| y.contains(m)));
            }
        }
    }

    #[test]
    fn comprehension_clause_is_bidirectional() {
        let u = u(3, 1);
        let comp = parse_term("{z in y | z in Atoms | z = empty}").unwrap();
        for y in u.elements() {
            let closed = comp.substitute("y", y);
            let s = denote(&closed, &u).unwrap();
            for x in u.elements() {
                let phi = parse_formula("z in Atoms | z = empty").unwrap().substitute("z", x);
                let want = y.contains(x) && satisfies(&u, &phi).unwrap();
                assert_eq!(s.contains(x), want);
            }
        }
    }

    #[test]
    fn denotation_commutes_with_the_meta_action() {
        let u = u(3, 2);
        let perms = enumerate_perms(AtomPool::new(3).unwrap(), DEFAULT_PERM_CAP).unwrap();
        for e in parse_term_corpus(TERM_CORPUS).unwrap() {
            let x = denote(&e.item, &u).unwrap();
            for p in &perms {
                assert_eq!(denote(&e.item.meta_act(p).unwrap(), &u).unwrap(), p.permute(&x));
            }
        }
    }
}
