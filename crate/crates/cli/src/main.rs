//! `ezfa`: batch front end for the ezfa library.
//!
//! Exit codes: 0 success or check holds, 1 a check failed, 2 usage or input
//! error.

use std::fmt::Display;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ezfa::acceptance::{criterion_ids, run_criterion};
use ezfa::atoms_perms::{parse_atom_set, AtomPool, PermGroupSpec};
use ezfa::equivariance::{
    check_term_equivariance, exhaustive_equivar_suite, find_naive_constant_counterexample,
    find_partial_permute_counterexample, DEFAULT_SEARCH_BUDGET,
};
use ezfa::hfa::{Element, Universe, UniverseConfig, DEFAULT_UNIVERSE_BUDGET};
use ezfa::lang::{
    parse_formula, parse_formula_corpus, parse_term, parse_term_corpus, print_term, FORMULA_CORPUS,
};
use ezfa::semantics::{audit_axioms, denote, satisfies, AxiomReport, AxiomStatus, SemanticsError};
use ezfa::support::{fresh, orbit, supp, support_report, SupportError};
use ezfa::tagged::{audit_n, build_n, iso_check};

#[derive(Parser, Debug)]
#[command(name = "ezfa", version, about = "Equivariant ZFA over finite atom pools")]
struct Cli {
    /// Number of atoms in the pool.
    #[arg(long, global = true, default_value_t = 3)]
    atoms: u32,
    /// Rank bound of the universe.
    #[arg(long, global = true, default_value_t = 2)]
    rank: u32,
    /// Member cap for sets above rank 1, or `none`.
    #[arg(long, global = true, default_value = "3", value_parser = parse_cap)]
    subset_cap: Cap,
    /// Permutation group: full, finitary:K, order, order:LIST,
    /// permissive:LOWER:K, shift:S0;S1;...
    #[arg(long, global = true, default_value = "full")]
    group: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug)]
struct Cap(Option<usize>);

fn parse_cap(s: &str) -> Result<Cap, String> {
    if s == "none" {
        return Ok(Cap(None));
    }
    s.parse().map(|c| Cap(Some(c))).map_err(|_| format!("expected a number or `none`, got `{s}`"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Denote a closed term.
    Eval { term: String },
    /// Decide a closed formula; exits 1 when it is false.
    Sat { formula: String },
    /// Least support of an element.
    Supp { element: String },
    /// Is the atom set fresh for the element? Exits 1 when not.
    Fresh {
        #[arg(value_name = "ATOMS")]
        set: String,
        element: String,
    },
    /// Orbit of an element under the selected group.
    Orbit { element: String },
    /// Check every corpus formula against every permutation.
    Equivar {
        /// Formula corpus file; the shipped corpus when omitted.
        #[arg(long)]
        corpus: Option<String>,
        /// Also check a term corpus file.
        #[arg(long)]
        terms: Option<String>,
    },
    /// Audit the ZFA axioms on the universe.
    Axioms,
    /// Build the tagged model and compare it with the universe.
    Tagged {
        /// Also audit the axioms and compare verdicts with the universe.
        #[arg(long)]
        audit: bool,
    },
    /// Search for the misuse patterns that break equivariance.
    Counterexample {
        #[arg(value_enum)]
        kind: Search,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: usize,
    },
    /// Run the acceptance criteria at their own fixed parameters; the global
    /// universe flags do not apply.
    Acceptance {
        /// Criterion number, 1 to 15; all of them when omitted.
        id: Option<u32>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Search {
    NaiveConst,
    PartialPermute,
}

/// An error and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

fn input(e: impl Display) -> Failure {
    Failure {
        code: 2,
        message: e.to_string(),
    }
}

fn failed(e: impl Display) -> Failure {
    Failure {
        code: 1,
        message: e.to_string(),
    }
}

fn semantic(e: SemanticsError) -> Failure {
    match e {
        SemanticsError::Lang(_) => input(e),
        SemanticsError::OutOfUniverse { .. } => failed(e),
    }
}

fn support(e: SupportError) -> Failure {
    match e {
        SupportError::NoUniqueLeast { .. } | SupportError::NotClosed { .. } => failed(e),
        _ => input(e),
    }
}

/// Output of a command: a text rendering, a structured one, and whether the
/// check it performed held.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

impl Cli {
    fn config(&self) -> UniverseConfig {
        UniverseConfig::new(self.atoms, self.rank)
            .with_subset_cap(self.subset_cap.0)
            .with_budget(DEFAULT_UNIVERSE_BUDGET)
    }

    fn pool(&self) -> Result<AtomPool, Failure> {
        AtomPool::new(self.atoms).map_err(input)
    }

    fn universe(&self) -> Result<Universe, Failure> {
        Universe::generate(self.config()).map_err(input)
    }

    fn element(&self, src: &str) -> Result<Element, Failure> {
        let x: Element = src.trim().trim_start_matches('#').parse().map_err(input)?;
        x.check_pool(self.pool()?).map_err(input)?;
        Ok(x)
    }
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input(format!("cannot read {path}: {e}")))
}

fn axiom_lines(reports: &[AxiomReport]) -> String {
    reports.iter().map(AxiomReport::to_text).collect::<Vec<_>>().join("\n")
}

fn audit_ok(reports: &[AxiomReport]) -> bool {
    reports
        .iter()
        .all(|r| matches!(r.status, AxiomStatus::Holds | AxiomStatus::Skipped { .. }))
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Eval { term } => {
            let t = parse_term(term).map_err(input)?;
            let x = denote(&t, &cli.universe()?).map_err(semantic)?;
            Ok(Report {
                text: x.to_string(),
                json: json!({ "term": print_term(&t), "value": x }),
                ok: true,
            })
        }
        Command::Sat { formula } => {
            let phi = parse_formula(formula).map_err(input)?;
            let holds = satisfies(&cli.universe()?, &phi).map_err(semantic)?;
            Ok(Report {
                text: holds.to_string(),
                json: json!({ "formula": formula, "holds": holds, "universe": cli.config() }),
                ok: holds,
            })
        }
        Command::Supp { element } => {
            let x = cli.element(element)?;
            let pool = cli.pool()?;
            let report = support_report(&x, pool).map_err(support)?;
            match supp(&x, pool) {
                Ok(k) => Ok(Report {
                    text: ezfa::atoms_perms::fmt_atom_set(&k),
                    json: json!(report),
                    ok: true,
                }),
                Err(e @ SupportError::NoUniqueLeast { .. }) => Ok(Report {
                    text: format!("{e}\n{}", report.to_text().trim_end()),
                    json: json!(report),
                    ok: false,
                }),
                Err(e) => Err(support(e)),
            }
        }
        Command::Fresh { set, element } => {
            let k = parse_atom_set(set).map_err(input)?;
            let x = cli.element(element)?;
            let is_fresh = fresh(&k, &x, cli.pool()?).map_err(support)?;
            Ok(Report {
                text: is_fresh.to_string(),
                json: json!({ "atoms": ezfa::atoms_perms::fmt_atom_set(&k), "element": x, "fresh": is_fresh }),
                ok: is_fresh,
            })
        }
        Command::Orbit { element } => {
            let x = cli.element(element)?;
            let pool = cli.pool()?;
            let spec = PermGroupSpec::parse(&cli.group, pool).map_err(input)?;
            let o = orbit(&x, &spec, pool).map_err(support)?;
            let lines: Vec<String> = o.iter().map(Element::to_string).collect();
            Ok(Report {
                text: lines.join("\n"),
                json: json!({ "element": x, "group": spec.to_string(), "orbit": lines }),
                ok: true,
            })
        }
        Command::Equivar { corpus, terms } => {
            let src = match corpus {
                Some(path) => read(path)?,
                None => FORMULA_CORPUS.to_owned(),
            };
            let formulas: Vec<_> = parse_formula_corpus(&src)
                .map_err(input)?
                .into_iter()
                .map(|e| e.item)
                .collect();
            let u = cli.universe()?;
            let report = exhaustive_equivar_suite(&u, &formulas).map_err(failed)?;
            let mut text = report.to_text().trim_end().to_owned();
            let mut ok = report.held() == report.total();
            let mut term_checks = Vec::new();
            if let Some(path) = terms {
                let perms = ezfa::atoms_perms::enumerate_perms(u.pool(), ezfa::atoms_perms::DEFAULT_PERM_CAP)
                    .map_err(input)?;
                for e in parse_term_corpus(&read(path)?).map_err(input)? {
                    for p in &perms {
                        term_checks.push(check_term_equivariance(&u, p, &e.item).map_err(failed)?);
                    }
                }
                let held = term_checks.iter().filter(|c| c.holds()).count();
                for c in &term_checks {
                    let verdict = if c.holds() { "hold" } else { "FAIL" };
                    text.push_str(&format!("\n{verdict} {} | {}", c.perm, c.term));
                }
                text.push_str(&format!("\n{held}/{} terms hold", term_checks.len()));
                ok &= held == term_checks.len();
            }
            Ok(Report {
                text,
                json: json!({
                    "universe": cli.config(),
                    "checks": report.checks,
                    "held": report.held(),
                    "total": report.total(),
                    "term_checks": term_checks,
                }),
                ok,
            })
        }
        Command::Axioms => {
            let reports = audit_axioms(&cli.universe()?);
            Ok(Report {
                text: format!("universe: {}\n{}", cli.config(), axiom_lines(&reports)),
                json: json!({ "universe": cli.config(), "axioms": reports }),
                ok: audit_ok(&reports),
            })
        }
        Command::Tagged { audit } => {
            let config = cli.config();
            let model = build_n(config).map_err(input)?;
            let iso = iso_check(&model, &cli.universe()?);
            let sizes: Vec<usize> = model.stages().iter().map(Vec::len).collect();
            let mut text = format!(
                "tagged model: {config}\nstage sizes: {}\ncarrier: {}\n{}",
                sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(" "),
                model.elements().len(),
                iso.to_text()
            );
            let mut ok = iso.passed();
            let mut json = json!({ "universe": config, "stage_sizes": sizes, "iso": iso });
            if *audit {
                let tagged = audit_n(&model);
                let native = audit_axioms(&cli.universe()?);
                let matching = tagged
                    .iter()
                    .zip(&native)
                    .filter(|(t, n)| t.status.verdict() == n.status.verdict())
                    .count();
                text.push_str(&format!(
                    "\n{}\nverdicts matching the universe: {matching}/{}",
                    axiom_lines(&tagged),
                    tagged.len()
                ));
                ok &= matching == tagged.len() && audit_ok(&tagged);
                json["axioms"] = json!(tagged);
                json["matching_verdicts"] = json!(matching);
            }
            Ok(Report { text, json, ok })
        }
        Command::Counterexample { kind, budget } => {
            let u = cli.universe()?;
            match kind {
                Search::NaiveConst => {
                    let w = find_naive_constant_counterexample(&u, *budget).map_err(failed)?;
                    let verified = w.verify(&u).map_err(failed)?;
                    Ok(Report {
                        text: format!("{}\nverified: {verified}", w.to_text()),
                        json: json!({ "witness": w, "verified": verified }),
                        ok: verified,
                    })
                }
                Search::PartialPermute => {
                    let w = find_partial_permute_counterexample(&u, *budget).map_err(failed)?;
                    let verified = w.verify(&u).map_err(failed)?;
                    Ok(Report {
                        text: format!("{}\nverified: {verified}", w.to_text()),
                        json: json!({ "witness": w, "verified": verified }),
                        ok: verified,
                    })
                }
            }
        }
        Command::Acceptance { id } => {
            let ids: Vec<u32> = match id {
                Some(id) => vec![*id],
                None => criterion_ids().collect(),
            };
            let mut outcomes = Vec::new();
            for id in ids {
                outcomes.push(run_criterion(id).ok_or_else(|| input(format!("no acceptance criterion {id}")))?);
            }
            Ok(Report {
                text: outcomes.iter().map(|o| o.to_text()).collect::<Vec<_>>().join("\n"),
                json: json!({ "criteria": outcomes }),
                ok: outcomes.iter().all(|o| o.passed),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let out = match cli.format {
                Format::Text => report.text,
                Format::Json => serde_json::to_string_pretty(&report.json).expect("reports serialize"),
            };
            // a closed stdout (e.g. piped into `head`) is not an error
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            ExitCode::from(if report.ok { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
