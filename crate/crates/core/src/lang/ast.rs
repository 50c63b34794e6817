use std::collections::BTreeSet;

use crate::atoms_perms::Perm;
use crate::hfa::Element;

use super::LangError;

/// Terms of the language of sets with atoms, plus element constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    /// `{s, t}`
    Pair(Box<Term>, Box<Term>),
    /// `pow(s)`
    Powerset(Box<Term>),
    /// `Union(s)`
    Union(Box<Term>),
    /// `{x in t | phi}`; `binder` scopes over `body` only.
    Comprehension {
        binder: String,
        domain: Box<Term>,
        body: Box<Formula>,
    },
    /// `empty`
    Empty,
    /// `Atoms`
    Atoms,
    /// `#{...}`: an element used as a constant.
    Elem(Element),
}

/// Formulas. Negation is `phi -> false`; the remaining connectives are
/// concrete-syntax sugar expanded by the parser.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    /// `s = t`
    Eq(Term, Term),
    /// `s in t`
    Mem(Term, Term),
    /// `false`
    Bot,
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn pair(s: Term, t: Term) -> Term {
        Term::Pair(Box::new(s), Box::new(t))
    }

    pub fn powerset(s: Term) -> Term {
        Term::Powerset(Box::new(s))
    }

    pub fn union(s: Term) -> Term {
        Term::Union(Box::new(s))
    }

    pub fn comprehension(binder: impl Into<String>, domain: Term, body: Formula) -> Term {
        Term::Comprehension {
            binder: binder.into(),
            domain: Box::new(domain),
            body: Box::new(body),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            Term::Pair(s, t) => {
                s.collect_free(bound, out);
                t.collect_free(bound, out);
            }
            Term::Powerset(s) | Term::Union(s) => s.collect_free(bound, out),
            Term::Comprehension { binder, domain, body } => {
                domain.collect_free(bound, out);
                bound.push(binder.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Term::Empty | Term::Atoms | Term::Elem(_) => {}
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// No element constants anywhere.
    pub fn is_pure(&self) -> bool {
        match self {
            Term::Elem(_) => false,
            Term::Var(_) | Term::Empty | Term::Atoms => true,
            Term::Pair(s, t) => s.is_pure() && t.is_pure(),
            Term::Powerset(s) | Term::Union(s) => s.is_pure(),
            Term::Comprehension { domain, body, .. } => domain.is_pure() && body.is_pure(),
        }
    }

    /// Replaces free occurrences of `var` by the constant `value`.
    pub fn substitute(&self, var: &str, value: &Element) -> Term {
        match self {
            Term::Var(v) if v == var => Term::Elem(value.clone()),
            Term::Var(_) | Term::Empty | Term::Atoms | Term::Elem(_) => self.clone(),
            Term::Pair(s, t) => Term::pair(s.substitute(var, value), t.substitute(var, value)),
            Term::Powerset(s) => Term::powerset(s.substitute(var, value)),
            Term::Union(s) => Term::union(s.substitute(var, value)),
            Term::Comprehension { binder, domain, body } => Term::Comprehension {
                binder: binder.clone(),
                domain: Box::new(domain.substitute(var, value)),
                body: if binder == var {
                    body.clone()
                } else {
                    Box::new(body.substitute(var, value))
                },
            },
        }
    }

    /// The meta-level action: permutes every element constant.
    /// Only defined on closed terms.
    pub fn meta_act(&self, p: &Perm) -> Result<Term, LangError> {
        let free = self.free_vars();
        if !free.is_empty() {
            return Err(LangError::Open(free.into_iter().collect()));
        }
        Ok(self.map_constants(&|x| p.permute(x)))
    }

    pub(crate) fn map_constants(&self, f: &dyn Fn(&Element) -> Element) -> Term {
        match self {
            Term::Elem(x) => Term::Elem(f(x)),
            Term::Var(_) | Term::Empty | Term::Atoms => self.clone(),
            Term::Pair(s, t) => Term::pair(s.map_constants(f), t.map_constants(f)),
            Term::Powerset(s) => Term::powerset(s.map_constants(f)),
            Term::Union(s) => Term::union(s.map_constants(f)),
            Term::Comprehension { binder, domain, body } => Term::Comprehension {
                binder: binder.clone(),
                domain: Box::new(domain.map_constants(f)),
                body: Box::new(body.map_constants(f)),
            },
        }
    }

}

impl Formula {
    pub fn eq(s: Term, t: Term) -> Formula {
        Formula::Eq(s, t)
    }

    pub fn mem(s: Term, t: Term) -> Formula {
        Formula::Mem(s, t)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(body))
    }

    /// `~a` = `a -> false`
    #[allow(clippy::should_implement_trait)] // a constructor beside `and` and `or`, not an operator
    pub fn not(a: Formula) -> Formula {
        Formula::implies(a, Formula::Bot)
    }

    /// `a | b` = `~a -> b`
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::implies(Formula::not(a), b)
    }

    /// `a <-> b` = `(a -> b) & (b -> a)`
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    /// `exists v. a` = `~forall v. ~a`
    pub fn exists(v: impl Into<String>, body: Formula) -> Formula {
        Formula::not(Formula::forall(v, Formula::not(body)))
    }

    /// `s subset t` = `forall b. b in s -> b in t`, with `b` chosen fresh.
    pub fn subset(s: Term, t: Term) -> Formula {
        let mut taken = s.free_vars();
        taken.extend(t.free_vars());
        let v = fresh_name("b", &taken);
        Formula::forall(
            v.clone(),
            Formula::implies(
                Formula::mem(Term::var(v.clone()), s),
                Formula::mem(Term::var(v), t),
            ),
        )
    }

    /// If this is `a -> false`, returns `a`.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(a, b) if **b == Formula::Bot => Some(a),
            _ => None,
        }
    }

    /// If this is `~forall v. ~a`, returns `(v, a)`.
    pub fn as_exists(&self) -> Option<(&str, &Formula)> {
        match self.as_negation()? {
            Formula::Forall(v, body) => body.as_negation().map(|inner| (v.as_str(), inner)),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(s, t) | Formula::Mem(s, t) => {
                s.collect_free(bound, out);
                t.collect_free(bound, out);
            }
            Formula::Bot => {}
            Formula::And(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_pure(&self) -> bool {
        match self {
            Formula::Eq(s, t) | Formula::Mem(s, t) => s.is_pure() && t.is_pure(),
            Formula::Bot => true,
            Formula::And(a, b) | Formula::Implies(a, b) => a.is_pure() && b.is_pure(),
            Formula::Forall(_, body) => body.is_pure(),
        }
    }

    /// Replaces free occurrences of `var` by the constant `value`. Only
    /// closed values are substituted, so no capture can happen.
    pub fn substitute(&self, var: &str, value: &Element) -> Formula {
        match self {
            Formula::Eq(s, t) => Formula::Eq(s.substitute(var, value), t.substitute(var, value)),
            Formula::Mem(s, t) => Formula::Mem(s.substitute(var, value), t.substitute(var, value)),
            Formula::Bot => Formula::Bot,
            Formula::And(a, b) => Formula::and(a.substitute(var, value), b.substitute(var, value)),
            Formula::Implies(a, b) => {
                Formula::implies(a.substitute(var, value), b.substitute(var, value))
            }
            Formula::Forall(v, _) if v == var => self.clone(),
            Formula::Forall(v, body) => Formula::forall(v.clone(), body.substitute(var, value)),
        }
    }

    /// Simultaneous substitution of several variables.
    pub fn substitute_all(&self, bindings: &[(String, Element)]) -> Formula {
        bindings
            .iter()
            .fold(self.clone(), |phi, (v, x)| phi.substitute(v, x))
    }

    /// The meta-level action: permutes every element constant.
    /// Only defined on closed formulas.
    pub fn meta_act(&self, p: &Perm) -> Result<Formula, LangError> {
        let free = self.free_vars();
        if !free.is_empty() {
            return Err(LangError::Open(free.into_iter().collect()));
        }
        Ok(self.map_constants(&|x| p.permute(x)))
    }

    pub(crate) fn map_constants(&self, f: &dyn Fn(&Element) -> Element) -> Formula {
        match self {
            Formula::Eq(s, t) => Formula::Eq(s.map_constants(f), t.map_constants(f)),
            Formula::Mem(s, t) => Formula::Mem(s.map_constants(f), t.map_constants(f)),
            Formula::Bot => Formula::Bot,
            Formula::And(a, b) => Formula::and(a.map_constants(f), b.map_constants(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_constants(f), b.map_constants(f)),
            Formula::Forall(v, body) => Formula::forall(v.clone(), body.map_constants(f)),
        }
    }

    /// Every element constant, in syntax order.
    pub fn constants(&self) -> Vec<Element> {
        let mut out = Vec::new();
        collect_formula_constants(self, &mut out);
        out
    }

}

fn collect_term_constants(t: &Term, out: &mut Vec<Element>) {
    match t {
        Term::Elem(x) => out.push(x.clone()),
        Term::Var(_) | Term::Empty | Term::Atoms => {}
        Term::Pair(s, u) => {
            collect_term_constants(s, out);
            collect_term_constants(u, out);
        }
        Term::Powerset(s) | Term::Union(s) => collect_term_constants(s, out),
        Term::Comprehension { domain, body, .. } => {
            collect_term_constants(domain, out);
            collect_formula_constants(body, out);
        }
    }
}

fn collect_formula_constants(phi: &Formula, out: &mut Vec<Element>) {
    match phi {
        Formula::Eq(s, t) | Formula::Mem(s, t) => {
            collect_term_constants(s, out);
            collect_term_constants(t, out);
        }
        Formula::Bot => {}
        Formula::And(a, b) | Formula::Implies(a, b) => {
            collect_formula_constants(a, out);
            collect_formula_constants(b, out);
        }
        Formula::Forall(_, body) => collect_formula_constants(body, out),
    }
}

/// `base`, then `base0`, `base1`, ... until one is not in `taken`.
pub(crate) fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_owned();
    }
    (0..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded supply of names")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms_perms::{enumerate_perms, Atom, AtomPool, DEFAULT_PERM_CAP};
    use crate::hfa::generate_universe;
    use crate::lang::{parse_formula, parse_formula_corpus, parse_term, PURE_CORPUS};

    fn names(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn free_variables() {
        let fv = |s| parse_formula(s).unwrap().free_vars();
        assert_eq!(fv("forall a. a = b"), names(&["b"]));
        assert_eq!(fv("false"), names(&[]));
        assert_eq!(
            parse_term("{x in t | x in y}").unwrap().free_vars(),
            names(&["t", "y"])
        );
        assert_eq!(parse_term("{x in x | x in y}").unwrap().free_vars(), names(&["x", "y"]));
        assert_eq!(fv("exists z. z in x & y subset z"), names(&["x", "y"]));
    }

    #[test]
    fn substitution() {
        let x: Element = "{a0}".parse().unwrap();
        let phi = parse_formula("v = v").unwrap();
        assert_eq!(
            phi.substitute("v", &x),
            Formula::eq(Term::Elem(x.clone()), Term::Elem(x.clone()))
        );
        let bound = parse_formula("forall v. v in w").unwrap();
        assert_eq!(bound.substitute("v", &x), bound);
        let comp = parse_term("{v in w | v = u}").unwrap();
        assert_eq!(comp.substitute("v", &x), comp);
        for e in parse_formula_corpus(PURE_CORPUS).unwrap() {
            for v in e.item.free_vars() {
                let mut expect = e.item.free_vars();
                expect.remove(&v);
                assert_eq!(e.item.substitute(&v, &x).free_vars(), expect);
            }
        }
    }

    #[test]
    fn meta_action_on_closed_syntax() {
        let pool = AtomPool::new(3).unwrap();
        let p = Perm::swap(pool, Atom::new(0), Atom::new(1)).unwrap();
        assert_eq!(Formula::Bot.meta_act(&p).unwrap(), Formula::Bot);
        assert_eq!(
            parse_formula("#{a0, {a2}} in Atoms").unwrap().meta_act(&p).unwrap(),
            parse_formula("#{a1, {a2}} in Atoms").unwrap()
        );
        assert_eq!(
            parse_formula("x = #a0").unwrap().meta_act(&p),
            Err(LangError::Open(vec!["x".into()]))
        );
        assert!(parse_term("{x in y | false}").unwrap().meta_act(&p).is_err());
    }

    #[test]
    fn meta_action_is_a_group_action() {
        let pool = AtomPool::new(3).unwrap();
        let perms = enumerate_perms(pool, DEFAULT_PERM_CAP).unwrap();
        let phi = parse_formula("#a0 in #{a0, a1} & forall x. x = {#a2, #{a0}}").unwrap();
        for p in &perms {
            assert_eq!(phi.meta_act(&Perm::identity(pool)).unwrap(), phi);
            for q in &perms {
                let pq = p.compose(q).unwrap();
                assert_eq!(
                    phi.meta_act(q).unwrap().meta_act(p).unwrap(),
                    phi.meta_act(&pq).unwrap()
                );
            }
        }
    }

    #[test]
    fn substituting_permuted_values_equals_meta_action() {
        let pool = AtomPool::new(3).unwrap();
        let u = generate_universe(pool, 1).unwrap();
        let perms = enumerate_perms(pool, DEFAULT_PERM_CAP).unwrap();
        let corpus = parse_formula_corpus(PURE_CORPUS).unwrap();
        let mut checked = 0;
        for e in &corpus {
            let vars: Vec<String> = e.item.free_vars().into_iter().collect();
            let mut closings = vec![Vec::new()];
            for v in &vars {
                closings = closings
                    .into_iter()
                    .flat_map(|c: Vec<(String, Element)>| {
                        u.elements().iter().map(move |x| {
                            let mut c = c.clone();
                            c.push((v.clone(), x.clone()));
                            c
                        })
                    })
                    .collect();
            }
            for c in &closings {
                let closed = e.item.substitute_all(c);
                for p in &perms {
                    let moved: Vec<_> = c.iter().map(|(v, x)| (v.clone(), p.permute(x))).collect();
                    assert_eq!(closed.meta_act(p).unwrap(), e.item.substitute_all(&moved));
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }
}
