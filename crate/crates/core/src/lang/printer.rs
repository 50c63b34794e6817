//! Printing in the ASCII grammar. Output re-parses to the same tree: negations,
//! disjunctions and existentials are recovered from their encodings, and
//! everything else prints in core form with minimal parentheses.

use super::{Formula, Term};

// Binding strength of a printed form; a form is parenthesized when printed in
// a context stronger than its own level.
const QUANT: u8 = 0;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const NOT: u8 = 5;
const ATOMIC: u8 = 6;

pub fn print_formula(phi: &Formula) -> String {
    let mut out = String::new();
    formula(phi, QUANT, &mut out);
    out
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    term(t, &mut out);
    out
}

/// `a | b` is encoded as `~a -> b`; `b` must not itself be `false`, else the
/// whole thing is the negation `~~a`.
fn as_or(phi: &Formula) -> Option<(&Formula, &Formula)> {
    match phi {
        Formula::Implies(a, b) if **b != Formula::Bot => a.as_negation().map(|a| (a, &**b)),
        _ => None,
    }
}

fn level(phi: &Formula) -> u8 {
    if phi.as_exists().is_some() {
        return QUANT;
    }
    if phi.as_negation().is_some() {
        return NOT;
    }
    if as_or(phi).is_some() {
        return OR;
    }
    match phi {
        Formula::Eq(..) | Formula::Mem(..) | Formula::Bot => ATOMIC,
        Formula::And(..) => AND,
        Formula::Implies(..) => IMPLIES,
        Formula::Forall(..) => QUANT,
    }
}

fn formula(phi: &Formula, ctx: u8, out: &mut String) {
    let lvl = level(phi);
    // Quantifier bodies extend as far right as possible, so a quantifier is
    // bracketed anywhere but the outermost position.
    let wrap = lvl < ctx || (lvl == QUANT && ctx > QUANT);
    if wrap {
        out.push('(');
    }
    body(phi, out);
    if wrap {
        out.push(')');
    }
}

fn body(phi: &Formula, out: &mut String) {
    if let Some((v, inner)) = phi.as_exists() {
        out.push_str("exists ");
        out.push_str(v);
        out.push_str(". ");
        formula(inner, QUANT, out);
        return;
    }
    if let Some(a) = phi.as_negation() {
        out.push('~');
        formula(a, NOT, out);
        return;
    }
    if let Some((a, b)) = as_or(phi) {
        formula(a, OR, out);
        out.push_str(" | ");
        formula(b, AND, out);
        return;
    }
    match phi {
        Formula::Eq(s, t) | Formula::Mem(s, t) => {
            term(s, out);
            out.push_str(if matches!(phi, Formula::Eq(..)) { " = " } else { " in " });
            term(t, out);
        }
        Formula::Bot => out.push_str("false"),
        Formula::And(a, b) => {
            formula(a, AND, out);
            out.push_str(" & ");
            formula(b, NOT, out);
        }
        Formula::Implies(a, b) => {
            formula(a, OR, out);
            out.push_str(" -> ");
            formula(b, IMPLIES, out);
        }
        Formula::Forall(v, inner) => {
            out.push_str("forall ");
            out.push_str(v);
            out.push_str(". ");
            formula(inner, QUANT, out);
        }
    }
}

fn term(t: &Term, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Pair(s, u) => {
            out.push('{');
            term(s, out);
            out.push_str(", ");
            term(u, out);
            out.push('}');
        }
        Term::Powerset(s) | Term::Union(s) => {
            out.push_str(if matches!(t, Term::Powerset(_)) { "pow(" } else { "Union(" });
            term(s, out);
            out.push(')');
        }
        Term::Comprehension {
            binder,
            domain,
            body,
        } => {
            out.push('{');
            out.push_str(binder);
            out.push_str(" in ");
            term(domain, out);
            out.push_str(" | ");
            formula(body, QUANT, out);
            out.push('}');
        }
        Term::Empty => out.push_str("empty"),
        Term::Atoms => out.push_str("Atoms"),
        Term::Elem(x) => {
            out.push('#');
            out.push_str(&x.to_string());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hfa::Element;
    use crate::lang::{parse_formula, parse_term};
    use proptest::prelude::*;

    #[test]
    fn prints_examples() {
        assert_eq!(print_formula(&Formula::Bot), "false");
        assert_eq!(
            print_formula(&Formula::forall("x", Formula::eq(Term::var("x"), Term::var("x")))),
            "forall x. x = x"
        );
        let p = |s: &str| print_formula(&parse_formula(s).unwrap());
        assert_eq!(p("a in Atoms & ~(a = empty)"), "a in Atoms & ~a = empty");
        assert_eq!(p("exists x. x in #a0"), "exists x. x in #a0");
        assert_eq!(p("(x = x -> y = y) -> false"), "~(x = x -> y = y)");
        assert_eq!(p("x = y | y = z | z = x"), "x = y | y = z | z = x");
        assert_eq!(p("x = y | (y = z | z = x)"), "x = y | (y = z | z = x)");
        assert_eq!(p("(forall x. x = x) & false"), "(forall x. x = x) & false");
        assert_eq!(
            print_term(&parse_term("{x in pow(#{a0}) | x = empty}").unwrap()),
            "{x in pow(#{a0}) | x = empty}"
        );
    }

    const NAMES: &[&str] = &["x", "y", "z", "b", "x'", "v_1"];

    fn arb_name() -> impl Strategy<Value = String> {
        prop::sample::select(NAMES).prop_map(str::to_owned)
    }

    fn arb_const() -> impl Strategy<Value = Element> {
        let leaf = prop_oneof![
            (0u32..3).prop_map(|i| Element::atom(crate::atoms_perms::Atom::new(i))),
            Just(Element::empty()),
        ];
        leaf.prop_recursive(2, 6, 3, |inner| {
            prop::collection::vec(inner, 0..3).prop_map(Element::set)
        })
    }

    /// Formulas of depth at most `depth`, with terms nested inside.
    fn arb_formula(depth: u32) -> BoxedStrategy<Formula> {
        let term_leaf = prop_oneof![
            arb_name().prop_map(Term::Var),
            Just(Term::Empty),
            Just(Term::Atoms),
            arb_const().prop_map(Term::Elem),
        ];
        let atomic = (term_leaf.clone(), term_leaf.clone(), any::<bool>()).prop_map(|(s, t, eq)| {
            if eq {
                Formula::eq(s, t)
            } else {
                Formula::mem(s, t)
            }
        });
        if depth <= 1 {
            return prop_oneof![Just(Formula::Bot), atomic].boxed();
        }
        let sub = arb_formula(depth - 1);
        let term = prop_oneof![
            term_leaf,
            (arb_name(), arb_name()).prop_map(|(a, b)| Term::pair(Term::Var(a), Term::Var(b))),
            arb_name().prop_map(|a| Term::powerset(Term::Var(a))),
            arb_name().prop_map(|a| Term::union(Term::Var(a))),
            (arb_name(), arb_const(), arb_formula(depth - 2)).prop_map(|(v, c, body)| {
                Term::comprehension(v, Term::Elem(c), body)
            }),
        ];
        prop_oneof![
            Just(Formula::Bot),
            (term.clone(), term).prop_map(|(s, t)| Formula::mem(s, t)),
            (sub.clone(), sub.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (sub.clone(), sub.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            sub.clone().prop_map(Formula::not),
            (sub.clone(), sub.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (arb_name(), sub.clone()).prop_map(|(v, a)| Formula::exists(v, a)),
            (arb_name(), sub).prop_map(|(v, a)| Formula::forall(v, a)),
        ]
        .boxed()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn print_parse_round_trip(phi in arb_formula(5)) {
            let printed = print_formula(&phi);
            let back = parse_formula(&printed);
            prop_assert_eq!(back.as_ref(), Ok(&phi), "printed as {}", printed);
        }
    }
}
