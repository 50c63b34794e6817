//! The fifteen acceptance criteria as runnable checks.
//!
//! Each check is deterministic: sampling uses a fixed-seed ChaCha stream, so
//! a criterion reports the same detail line on every run. Wall-clock limits
//! are enforced but never printed, keeping reports byte-identical.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::atoms_perms::{enumerate_perms, in_group, Atom, AtomPool, AtomSet, Perm, PermGroupSpec, DEFAULT_PERM_CAP};
use crate::equivariance::{
    check_term_equivariance, exhaustive_equivar_suite, find_naive_constant_counterexample,
    find_partial_permute_counterexample, DEFAULT_SEARCH_BUDGET,
};
use crate::hfa::{Element, Universe, UniverseConfig};
use crate::lang::{
    parse_formula, parse_formula_corpus, parse_term, parse_term_corpus, print_formula, print_term, Formula, Term,
    FORMULA_CORPUS, PURE_CORPUS, TERM_CORPUS,
};
use crate::semantics::{audit_axioms, Axiom, AxiomStatus, SKIP_REASON};
use crate::support::{fast_supp, fresh, minimal_supports, supp, supporting_sets, supports, is_equivariant, orbit_count};
use crate::tagged::{audit_n, build_n, iso_check};

pub const SAMPLE_SEED: u64 = 0x5EED_0001;

/// Outcome of one criterion.
#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Outcome {
    pub fn to_text(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{verdict} {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

type Check = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

const CRITERIA: [Criterion; 15] = [
    Criterion { id: 1, name: "group action laws", limit: Some(Duration::from_secs(10)), run: group_action_laws },
    Criterion { id: 2, name: "action is a bijection", limit: None, run: action_is_bijection },
    Criterion { id: 3, name: "base equivariance", limit: None, run: base_equivariance },
    Criterion { id: 4, name: "pair, powerset and injection transport", limit: None, run: transport },
    Criterion { id: 5, name: "corpus equivariance", limit: Some(Duration::from_secs(60)), run: corpus_equivariance },
    Criterion { id: 6, name: "meta-action versus substitution", limit: None, run: meta_action_substitution },
    Criterion { id: 7, name: "least support oracle", limit: None, run: support_oracle },
    Criterion { id: 8, name: "support transport", limit: None, run: support_transport },
    Criterion { id: 9, name: "equivariant elements", limit: None, run: equivariant_elements },
    Criterion { id: 10, name: "orbit counts", limit: None, run: orbit_counts },
    Criterion { id: 11, name: "axiom audit", limit: None, run: axiom_audit },
    Criterion { id: 12, name: "tagged model", limit: Some(Duration::from_secs(30)), run: tagged_model },
    Criterion { id: 13, name: "misuse counterexamples", limit: None, run: counterexamples },
    Criterion { id: 14, name: "parser round trip", limit: None, run: parser_round_trip },
    Criterion { id: 15, name: "order-respecting group is trivial", limit: None, run: order_respecting },
];

pub fn criterion_ids() -> impl Iterator<Item = u32> {
    CRITERIA.iter().map(|c| c.id)
}

/// Runs one criterion; `None` for an unknown id.
pub fn run_criterion(id: u32) -> Option<Outcome> {
    let c = CRITERIA.iter().find(|c| c.id == id)?;
    let start = Instant::now();
    let result = (c.run)();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(limit) = c.limit {
        if elapsed > limit {
            passed = false;
            detail.push_str(&format!("; exceeded the {}s limit", limit.as_secs()));
        }
    }
    Some(Outcome { id: c.id, name: c.name, passed, detail, elapsed })
}

pub fn run_all() -> Vec<Outcome> {
    criterion_ids().filter_map(run_criterion).collect()
}

fn err(e: impl Display) -> String {
    e.to_string()
}

fn pool(n: u32) -> Result<AtomPool, String> {
    AtomPool::new(n).map_err(err)
}

fn universe(atoms: u32, rank: u32) -> Result<Universe, String> {
    Universe::generate(UniverseConfig::new(atoms, rank)).map_err(err)
}

fn perms(p: AtomPool) -> Result<Vec<Perm>, String> {
    enumerate_perms(p, DEFAULT_PERM_CAP).map_err(err)
}

fn ensure(ok: bool, failure: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(failure())
    }
}

fn sample<'a>(xs: &'a [Element], n: usize, rng: &mut ChaCha8Rng) -> Vec<&'a Element> {
    xs.choose_multiple(rng, n).collect()
}

fn group_action_laws() -> Check {
    let u = universe(4, 2)?;
    let ps = perms(u.pool())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let xs = sample(u.elements(), 100, &mut rng);
    let id = Perm::identity(u.pool());
    let mut instances = 0;
    for x in &xs {
        instances += 1;
        ensure(id.act(x).map_err(err)? == **x, || format!("id moves {x}"))?;
        for p in &ps {
            let px = p.act(x).map_err(err)?;
            for q in &ps {
                instances += 1;
                let lhs = p.act(&q.act(x).map_err(err)?).map_err(err)?;
                let pq = p.compose(q).map_err(err)?;
                ensure(lhs == pq.act(x).map_err(err)?, || format!("{p} after {q} disagrees with their composite on {x}"))?;
            }
            ensure(p.inverse().act(&px).map_err(err)? == **x, || format!("{p} is not undone by its inverse on {x}"))?;
        }
    }
    Ok(format!("{instances}/{instances} instances over {} perms and {} sampled elements", ps.len(), xs.len()))
}

fn action_is_bijection() -> Check {
    let u = universe(3, 1)?;
    let ps = perms(u.pool())?;
    for p in &ps {
        let mut image = u.permutation_image(p).map_err(|x| format!("{p} maps an element to {x}, outside the universe"))?;
        image.sort_unstable();
        ensure(image.iter().copied().eq(0..u.len()), || format!("{p} is not a bijection"))?;
    }
    Ok(format!("{} perms permute all {} elements", ps.len(), u.len()))
}

fn base_equivariance() -> Check {
    let u = universe(3, 1)?;
    let ps = perms(u.pool())?;
    let mut instances = 0;
    for x in u.elements() {
        for y in u.elements() {
            for p in &ps {
                instances += 1;
                let (px, py) = (p.permute(x), p.permute(y));
                ensure(y.contains(x) == py.contains(&px), || format!("membership {x} in {y} under {p}"))?;
                ensure((x == y) == (px == py), || format!("equality {x} = {y} under {p}"))?;
                ensure(x.is_subset(y) == px.is_subset(&py), || format!("inclusion {x} subset {y} under {p}"))?;
            }
        }
    }
    Ok(format!("{instances}/{instances} instances"))
}

/// Every function from `x` to `y`, as a set of Kuratowski pairs.
fn function_sets(x: &Element, y: &Element) -> Vec<Element> {
    if x.members().is_empty() {
        return vec![Element::empty()];
    }
    x.members()
        .iter()
        .map(|_| y.members().iter())
        .multi_cartesian_product()
        .map(|values| {
            Element::set(
                x.members()
                    .iter()
                    .zip(values)
                    .map(|(a, b)| Element::kuratowski_pair(a.clone(), b.clone())),
            )
        })
        .collect()
}

fn transport() -> Check {
    let u = universe(3, 1)?;
    let ps = perms(u.pool())?;
    let (mut pairs, mut powersets, mut functions) = (0, 0, 0);
    for p in &ps {
        for x in u.elements() {
            for y in u.elements() {
                pairs += 1;
                let lhs = p.permute(&Element::kuratowski_pair(x.clone(), y.clone()));
                ensure(lhs == Element::kuratowski_pair(p.permute(x), p.permute(y)), || {
                    format!("pair ({x}, {y}) under {p}")
                })?;
            }
            if x.is_set() {
                powersets += 1;
                let lhs = p.permute(&x.powerset().map_err(err)?);
                ensure(lhs == p.permute(x).powerset().map_err(err)?, || format!("powerset of {x} under {p}"))?;
            }
        }
        for x in u.sets() {
            for y in u.sets() {
                let (px, py) = (p.permute(x), p.permute(y));
                for f in function_sets(x, y) {
                    functions += 1;
                    let pf = p.permute(&f);
                    ensure(
                        f.is_injective_function_set(x, y) == pf.is_injective_function_set(&px, &py),
                        || format!("injectivity of {f} from {x} to {y} under {p}"),
                    )?;
                }
            }
        }
    }
    Ok(format!("{pairs} pairs, {powersets} powersets, {functions} function-sets; zero failures"))
}

fn corpus_equivariance() -> Check {
    let u = Universe::generate(UniverseConfig::default()).map_err(err)?;
    let corpus: Vec<Formula> = parse_formula_corpus(FORMULA_CORPUS).map_err(err)?.into_iter().map(|e| e.item).collect();
    ensure(corpus.len() >= 30, || format!("only {} corpus formulas", corpus.len()))?;
    let report = exhaustive_equivar_suite(&u, &corpus).map_err(err)?;
    ensure(report.total() >= 180 && report.held() == report.total(), || {
        format!("formulas {}", report.summary())
    })?;
    let mut term_checks = 0;
    for e in parse_term_corpus(TERM_CORPUS).map_err(err)? {
        for p in &perms(u.pool())? {
            term_checks += 1;
            let c = check_term_equivariance(&u, p, &e.item).map_err(err)?;
            ensure(c.holds(), || format!("term {} under {p}", e.source))?;
        }
    }
    Ok(format!("formulas {}; terms {term_checks}/{term_checks} hold", report.summary()))
}

fn meta_action_substitution() -> Check {
    let u = universe(3, 1)?;
    let ps = perms(u.pool())?;
    let corpus = parse_formula_corpus(PURE_CORPUS).map_err(err)?;
    ensure(corpus.len() >= 10, || format!("only {} pure formulas", corpus.len()))?;
    let mut instances = 0;
    for e in &corpus {
        let vars: Vec<String> = e.item.free_vars().into_iter().collect();
        ensure((1..=2).contains(&vars.len()), || format!("{} has {} free variables", e.source, vars.len()))?;
        for values in vars.iter().map(|_| u.elements().iter()).multi_cartesian_product() {
            let bind = |vals: Vec<Element>| -> Vec<(String, Element)> { vars.iter().cloned().zip(vals).collect() };
            let closed = e.item.substitute_all(&bind(values.iter().map(|v| (*v).clone()).collect()));
            for p in &ps {
                instances += 1;
                let acted = closed.meta_act(p).map_err(err)?;
                let moved = e.item.substitute_all(&bind(values.iter().map(|v| p.permute(v)).collect()));
                ensure(acted == moved, || format!("{} under {p}", print_formula(&closed)))?;
            }
        }
    }
    Ok(format!("{instances}/{instances} instances over {} formulas", corpus.len()))
}

/// 200 elements of the 4-atom universe mentioning at most two atoms.
fn support_sample() -> Result<(AtomPool, Vec<Element>), String> {
    let u = universe(4, 2)?;
    let small: Vec<Element> = u.elements().iter().filter(|x| x.atoms_of().len() <= 2).cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let xs = sample(&small, 200, &mut rng).into_iter().cloned().collect();
    Ok((u.pool(), xs))
}

fn support_oracle() -> Check {
    let (pool, xs) = support_sample()?;
    let mut pairs = 0;
    for x in &xs {
        let fast = fast_supp(x, pool).map_err(err)?.ok_or_else(|| format!("no fast support for {x}"))?;
        let minimal = minimal_supports(x, pool).map_err(err)?;
        ensure(minimal == [fast.clone()], || format!("{x}: fast support differs from the scan minimum"))?;
        let all = supporting_sets(x, pool).map_err(err)?;
        ensure(all.iter().all(|k| fast.is_subset(k)), || format!("{x}: scan minimum is not least"))?;
        for (c, d) in all.iter().tuple_combinations() {
            pairs += 1;
            let meet: AtomSet = c.intersection(d).copied().collect();
            ensure(supports(&meet, x, pool).map_err(err)?, || format!("{x}: intersection of two supports fails"))?;
        }
    }
    Ok(format!("{n}/{n} samples agree; intersection holds on {pairs} pairs", n = xs.len()))
}

fn support_transport() -> Check {
    let (pool, xs) = support_sample()?;
    let ps = perms(pool)?;
    let subsets: Vec<AtomSet> = pool.atoms().powerset().map(|s| s.into_iter().collect()).collect();
    let mut instances = 0;
    for x in &xs {
        let sx = supp(x, pool).map_err(err)?;
        for p in &ps {
            let px = p.permute(x);
            ensure(p.image_set(&sx) == supp(&px, pool).map_err(err)?, || format!("supp of {x} under {p}"))?;
            for k in &subsets {
                instances += 1;
                let pk = p.image_set(k);
                let same = supports(k, x, pool).map_err(err)? == supports(&pk, &px, pool).map_err(err)?
                    && fresh(k, x, pool).map_err(err)? == fresh(&pk, &px, pool).map_err(err)?;
                ensure(same, || format!("supports or fresh for {x} under {p}"))?;
            }
        }
    }
    Ok(format!("{instances}/{instances} instances over {} perms", ps.len()))
}

fn equivariant_elements() -> Check {
    for n in 2..=6 {
        let pool = pool(n)?;
        ensure(is_equivariant(&Element::all_atoms(pool), pool).map_err(err)?, || {
            format!("the atom set is not equivariant on {n} atoms")
        })?;
        for a in pool.atoms() {
            ensure(!is_equivariant(&Element::atom(a), pool).map_err(err)?, || format!("{a} is equivariant"))?;
        }
    }
    Ok("pools 2 to 6 exact".into())
}

fn orbit_counts() -> Check {
    let pool = pool(3)?;
    let atoms: BTreeSet<Element> = pool.atoms().map(Element::atom).collect();
    let pairs: BTreeSet<Element> = atoms
        .iter()
        .cartesian_product(&atoms)
        .map(|(a, b)| Element::kuratowski_pair(a.clone(), b.clone()))
        .collect();
    let subsets: BTreeSet<Element> = Element::all_atoms(pool).powerset().map_err(err)?.members().iter().cloned().collect();
    let count = |xs: &BTreeSet<Element>| orbit_count(xs, &PermGroupSpec::Full, pool).map_err(err);
    let got = [count(&atoms)?, count(&pairs)?, count(&subsets)?];
    ensure(got == [1, 2, 4], || format!("atoms, pairs, subsets gave {got:?}"))?;
    Ok("atoms 1, atom pairs 2, subsets of the atoms 4".into())
}

const AUDIT_HOLDS: [Axiom; 9] = [
    Axiom::AtmEmpty,
    Axiom::EmptySet,
    Axiom::Extensionality,
    Axiom::Pair,
    Axiom::Union,
    Axiom::Powerset,
    Axiom::Comprehension,
    Axiom::Induction,
    Axiom::Choice,
];

fn axiom_audit() -> Check {
    let reports = audit_axioms(&universe(3, 1)?);
    for r in &reports {
        let ok = match &r.status {
            AxiomStatus::Holds => AUDIT_HOLDS.contains(&r.axiom),
            AxiomStatus::Skipped { reason } => !AUDIT_HOLDS.contains(&r.axiom) && reason == SKIP_REASON,
            _ => false,
        };
        ensure(ok, || r.to_text())?;
    }
    ensure(reports.len() == Axiom::ALL.len(), || "missing axiom reports".into())?;
    Ok(format!("{} hold, {} skipped", AUDIT_HOLDS.len(), reports.len() - AUDIT_HOLDS.len()))
}

fn tagged_model() -> Check {
    let config = UniverseConfig::new(3, 1);
    let model = build_n(config).map_err(err)?;
    let u = Universe::generate(config).map_err(err)?;
    let native = audit_axioms(&u);
    let tagged = audit_n(&model);
    for (a, b) in native.iter().zip(&tagged) {
        ensure(a.axiom == b.axiom && a.status.verdict() == b.status.verdict(), || {
            format!("{} versus {}", a.to_text(), b.to_text())
        })?;
    }
    ensure(native.len() == tagged.len(), || "report counts differ".into())?;
    let mut pairs = 0;
    for config in [config, UniverseConfig::default()] {
        let model = build_n(config).map_err(err)?;
        let u = Universe::generate(config).map_err(err)?;
        let iso = iso_check(&model, &u);
        ensure(iso.passed(), || format!("{config}: {}", iso.to_text().replace('\n', "; ")))?;
        pairs += iso.membership_pairs;
    }
    Ok(format!("{}/{} verdicts match; zero mismatches over {pairs} membership pairs", native.len(), native.len()))
}

fn counterexamples() -> Check {
    for n in 2..=4 {
        let u = universe(n, 1)?;
        let naive = find_naive_constant_counterexample(&u, DEFAULT_SEARCH_BUDGET).map_err(err)?;
        ensure(naive.verify(&u).map_err(err)?, || format!("naive-constant witness on {n} atoms does not verify"))?;
        let partial = find_partial_permute_counterexample(&u, DEFAULT_SEARCH_BUDGET).map_err(err)?;
        ensure(partial.verify(&u).map_err(err)?, || format!("partial-permute witness on {n} atoms does not verify"))?;
    }
    Ok("both witnesses verified and repaired on pools 2 to 4".into())
}

const NAMES: [&str; 6] = ["x", "y", "z", "b", "x'", "v_1"];

fn random_name(rng: &mut ChaCha8Rng) -> String {
    NAMES.choose(rng).expect("nonempty").to_string()
}

fn random_element(rng: &mut ChaCha8Rng, depth: u32) -> Element {
    if depth == 0 || rng.gen_bool(0.5) {
        return match rng.gen_range(0..4) {
            3 => Element::empty(),
            i => Element::atom(Atom::new(i)),
        };
    }
    let n = rng.gen_range(0..3);
    Element::set((0..n).map(|_| random_element(rng, depth - 1)))
}

fn random_leaf(rng: &mut ChaCha8Rng) -> Term {
    match rng.gen_range(0..4) {
        0 => Term::Var(random_name(rng)),
        1 => Term::Empty,
        2 => Term::Atoms,
        _ => Term::Elem(random_element(rng, 2)),
    }
}

fn random_term(rng: &mut ChaCha8Rng, depth: u32) -> Term {
    if depth < 2 {
        return random_leaf(rng);
    }
    match rng.gen_range(0..5) {
        0 => random_leaf(rng),
        1 => Term::pair(random_term(rng, depth - 1), random_term(rng, depth - 1)),
        2 => Term::powerset(random_term(rng, depth - 1)),
        3 => Term::union(random_term(rng, depth - 1)),
        _ => Term::comprehension(random_name(rng), random_term(rng, depth - 1), random_formula(rng, depth - 1)),
    }
}

/// A formula whose syntax tree is at most `depth` deep.
pub fn random_formula(rng: &mut ChaCha8Rng, depth: u32) -> Formula {
    if depth <= 1 {
        return match rng.gen_range(0..3) {
            0 => Formula::Bot,
            1 => Formula::eq(random_leaf(rng), random_leaf(rng)),
            _ => Formula::mem(random_leaf(rng), random_leaf(rng)),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..9) {
        0 => Formula::Bot,
        1 => Formula::eq(random_term(rng, d), random_term(rng, d)),
        2 => Formula::mem(random_term(rng, d), random_term(rng, d)),
        3 => Formula::and(random_formula(rng, d), random_formula(rng, d)),
        4 => Formula::implies(random_formula(rng, d), random_formula(rng, d)),
        5 => Formula::not(random_formula(rng, d)),
        6 => Formula::or(random_formula(rng, d), random_formula(rng, d)),
        7 => Formula::exists(random_name(rng), random_formula(rng, d)),
        _ => Formula::forall(random_name(rng), random_formula(rng, d)),
    }
}

fn parser_round_trip() -> Check {
    let mut count = 0;
    for src in [FORMULA_CORPUS, PURE_CORPUS] {
        for e in parse_formula_corpus(src).map_err(err)? {
            count += 1;
            let printed = print_formula(&e.item);
            ensure(parse_formula(&printed).as_ref() == Ok(&e.item), || format!("line {}: {printed}", e.line))?;
        }
    }
    for e in parse_term_corpus(TERM_CORPUS).map_err(err)? {
        count += 1;
        let printed = print_term(&e.item);
        ensure(parse_term(&printed).as_ref() == Ok(&e.item), || format!("line {}: {printed}", e.line))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    for _ in 0..500 {
        let phi = random_formula(&mut rng, 5);
        let printed = print_formula(&phi);
        ensure(parse_formula(&printed).as_ref() == Ok(&phi), || format!("random formula {printed}"))?;
    }
    Ok(format!("{count} corpus entries and 500 random formulas"))
}

fn order_respecting() -> Check {
    let pool = pool(3)?;
    let ps = perms(pool)?;
    let mut orders = 0;
    for order in pool.atoms().permutations(pool.len()) {
        orders += 1;
        let spec = PermGroupSpec::OrderRespecting { order };
        for p in &ps {
            let member = in_group(p, &spec).map_err(err)?;
            ensure(member == p.is_identity(), || format!("{p} under order {spec:?}"))?;
        }
    }
    Ok(format!("only id respects each of the {orders} orders"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_text_is_one_line() {
        let o = Outcome { id: 9, name: "n", passed: true, detail: "d".into(), elapsed: Duration::ZERO };
        assert_eq!(o.to_text(), "PASS  9 n: d");
    }

    #[test]
    fn random_formulas_are_reproducible() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..20).map(|_| print_formula(&random_formula(&mut rng, 5))).collect::<Vec<_>>()
        };
        assert_eq!(draw(7), draw(7));
        assert_ne!(draw(7), draw(8));
    }

    #[test]
    fn unknown_criterion_is_none() {
        assert!(run_criterion(0).is_none());
        assert_eq!(criterion_ids().count(), 15);
    }
}
