//! Self-checks against the oracles: solver versus brute force, aggregate
//! rewrites versus the plain translation under here-and-there equivalence.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ast::*;
use crate::formula::{stable_models, strongly_equivalent, Formula, SolveConfig};
use crate::grounder::aggregate::{subset_formula, subset_formula_shaped, GroundAggregate, Shape};
use crate::grounder::{GroundConfig, Grounder, Universe};
use crate::oracle;
use crate::simplify::{self, Profile};

/// Tally of one named check.
#[derive(Debug, Clone, Default)]
pub struct Tally {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Tally {
    fn new(name: &str) -> Tally {
        Tally {
            name: name.to_string(),
            ..Tally::default()
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for Tally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} cases", self.name, self.cases)?;
        if !self.passed() {
            write!(
                f,
                ", {} failures; first: {}",
                self.failures.len(),
                self.failures[0]
            )?;
        }
        write!(f, ")")
    }
}

/// Solver against the brute-force oracle on random theories.
pub fn solver_vs_brute_force(seed: u64, theories: usize, max_atoms: usize) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new("stable models agree with brute force");
    for _ in 0..theories {
        let theory = oracle::random_theory(&mut rng, max_atoms);
        let expected = oracle::brute_stable_models(&theory).expect("small signature");
        let got = stable_models(theory.clone(), &SolveConfig::default());
        let ok = matches!(&got, Ok(o) if o.models == expected && o.complete);
        t.record(ok, || format!("{theory:?}"));
    }
    t
}

/// Results of the aggregate rewrite checks, one tally per rewrite.
#[derive(Debug, Clone)]
pub struct RewriteReport {
    pub atoms: usize,
    pub equality: Tally,
    pub at_least: Tally,
    pub at_most: Tally,
    pub monotone: Tally,
    pub antimonotone: Tally,
    pub fast_table: Tally,
    pub pipeline: Tally,
}

impl RewriteReport {
    pub fn tallies(&self) -> [&Tally; 7] {
        [
            &self.equality,
            &self.at_least,
            &self.at_most,
            &self.monotone,
            &self.antimonotone,
            &self.fast_table,
            &self.pipeline,
        ]
    }

    pub fn passed(&self) -> bool {
        self.tallies().iter().all(|t| t.passed())
    }
}

fn small_universe() -> Universe {
    Universe::new([PrecomputedTerm::num(1), PrecomputedTerm::num(2)])
}

fn se(f: &Formula, g: &Formula) -> bool {
    strongly_equivalent(f, g).unwrap_or(false)
}

fn with_bound(e: &AggregateAtom, function: AggregateFunction, rel: Rel, m: i64) -> AggregateAtom {
    AggregateAtom {
        function,
        elements: e.elements.clone(),
        left: None,
        right: Some((rel, Term::num(m))),
    }
}

/// Every rewrite checked against the plain translation on `count` random
/// closed aggregate atoms with at most four index entries.
pub fn aggregate_rewrites(seed: u64, count: usize) -> RewriteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let universe = small_universe();
    let cfg = GroundConfig::default();
    let g = Grounder::new(&universe, &cfg);
    let budget = cfg.agg_budget;
    let mut r = RewriteReport {
        atoms: 0,
        equality: Tally::new("equality split"),
        at_least: Tally::new("count >= m expansion"),
        at_most: Tally::new("count <= m expansion"),
        monotone: Tally::new("antecedent drop (upward closed)"),
        antimonotone: Tally::new("consequent collapse (downward closed)"),
        fast_table: Tally::new("name/relation table agrees with subset check"),
        pipeline: Tally::new("simplifying translation"),
    };
    let ground = |e: &AggregateAtom| -> GroundAggregate { g.ground_aggregate(e).expect("closed") };
    for _ in 0..count {
        let e = oracle::random_aggregate(&mut rng, 4, false);
        let agg = ground(&e);
        assert!(agg.entries.len() <= 4);
        r.atoms += 1;
        let full = subset_formula(&agg, budget).expect("within budget");

        let eq = with_bound(&e, e.function, Rel::Eq, rng.gen_range(-1..=3));
        if let Ok((le, ge)) = simplify::eliminate_equality(&eq) {
            let whole = subset_formula(&ground(&eq), budget).unwrap();
            let split = Formula::and([
                subset_formula(&ground(&le), budget).unwrap(),
                subset_formula(&ground(&ge), budget).unwrap(),
            ]);
            r.equality.record(se(&whole, &split), || eq.to_string());
        }

        for m in 0..=4 {
            let c = ground(&with_bound(&e, AggregateFunction::Count, Rel::Ge, m));
            let plain = subset_formula(&c, budget).unwrap();
            let expanded = simplify::expand_count_geq(&c, budget).unwrap();
            let literal = simplify::count_geq_unchecked(&c, m as usize);
            r.at_least
                .record(se(&plain, &expanded) && se(&plain, &literal), || {
                    c.label.clone()
                });
        }
        for m in -1..=3 {
            let c = ground(&with_bound(&e, AggregateFunction::Count, Rel::Le, m));
            let plain = subset_formula(&c, budget).unwrap();
            let expanded = simplify::expand_count_leq(&c, budget).unwrap();
            let ok = se(&plain, &expanded)
                && (m < 0 || se(&plain, &simplify::count_leq_unchecked(&c, m as usize)));
            r.at_most.record(ok, || c.label.clone());
        }

        let exact = simplify::classify_exhaustive(&agg, budget).unwrap();
        if exact.upward {
            let short = subset_formula_shaped(&agg, Shape::NoAntecedent, budget).unwrap();
            r.monotone.record(se(&full, &short), || agg.label.clone());
        }
        if exact.downward {
            let short = subset_formula_shaped(&agg, Shape::NoConsequent, budget).unwrap();
            r.antimonotone
                .record(se(&full, &short), || agg.label.clone());
        }
        if let [guard] = agg.guards.as_slice() {
            if let Some(fast) = simplify::fast_profile(agg.function, guard.rel) {
                let ok = (!fast.upward || exact.upward) && (!fast.downward || exact.downward);
                r.fast_table.record(ok, || agg.label.clone());
            }
        }
        let translated = simplify::translate(&agg, budget).unwrap();
        r.pipeline
            .record(se(&full, &translated), || agg.label.clone());
    }
    r
}

/// One row of the name/relation table.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub function: AggregateFunction,
    pub rel: Rel,
    pub semantic: Option<Profile>,
    pub stated: Option<Profile>,
}

impl TableRow {
    pub fn disagrees(&self) -> bool {
        self.semantic != self.stated
    }
}

pub fn table_rows() -> Vec<TableRow> {
    let mut rows = Vec::new();
    for function in AggregateFunction::ALL {
        for rel in [Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge] {
            rows.push(TableRow {
                function,
                rel,
                semantic: simplify::fast_profile(function, rel),
                stated: simplify::stated_profile(function, rel),
            });
        }
    }
    rows
}

fn describe(p: Option<Profile>) -> &'static str {
    match p {
        Some(p) if p.upward => "upward",
        Some(p) if p.downward => "downward",
        _ => "none",
    }
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{{...}} {} s: closure {}, stated table {}{}",
            self.function,
            self.rel,
            describe(self.semantic),
            describe(self.stated),
            if self.disagrees() {
                "  <- disagree"
            } else {
                ""
            }
        )
    }
}

/// Both interval counterexamples: the plain translation is reproduced and
/// the inapplicable rewrite is refused.
pub fn interval_counterexamples() -> Tally {
    let mut t = Tally::new("interval counterexamples reproduced and refused");
    let universe = small_universe();
    let cfg = GroundConfig {
        simplify: false,
        ..GroundConfig::default()
    };
    let g = Grounder::new(&universe, &cfg);
    let p = Formula::atom(crate::formula::GroundAtom::prop("p"));
    let parse = |s: &str| match crate::parser::parse_literal(s) {
        Ok(Literal::Aggregate(a)) => a.atom,
        other => panic!("{other:?}"),
    };

    let eq = parse("#count{ a : p } = (0..1)*2");
    let tau = g.tau_aggregate(&eq).unwrap();
    t.record(tau == Formula::not(p.clone()), || format!("τE = {tau}"));
    let (le, ge) = (
        with_bound(&eq, AggregateFunction::Count, Rel::Le, 0),
        with_bound(&eq, AggregateFunction::Count, Rel::Ge, 0),
    );
    // the relaxed atoms keep the interval bound
    let relax = |a: AggregateAtom| AggregateAtom {
        right: eq
            .right
            .as_ref()
            .map(|(_, s)| (a.right.unwrap().0, s.clone())),
        ..a
    };
    let (tle, tge) = (
        g.tau_aggregate(&relax(le)).unwrap(),
        g.tau_aggregate(&relax(ge)).unwrap(),
    );
    t.record(tle.is_top() && tge.is_top(), || format!("{tle}, {tge}"));
    t.record(simplify::eliminate_equality(&eq).is_err(), || {
        "equality split accepted".into()
    });

    let geq = parse("#count{ 1..2 : p } >= 1");
    let tau = g.tau_aggregate(&geq).unwrap();
    t.record(tau == p, || format!("τE = {tau}"));
    let agg = g.ground_aggregate(&geq).unwrap();
    let literal = simplify::count_geq_unchecked(&agg, 1);
    t.record(literal.is_bottom(), || format!("expansion = {literal}"));
    t.record(simplify::expand_count_geq(&agg, 16).is_err(), || {
        "expansion accepted".into()
    });
    t
}

/// n-queens through the whole pipeline against the backtracking counter.
pub fn queens(n: i64) -> Tally {
    let mut t = Tally::new(&format!("n-queens at n = {n}"));
    let expected = oracle::count_queens(n as usize) as usize;
    let got = crate::pipeline::answer_sets_with_n(oracle::QUEENS, n, &Default::default());
    match got {
        Ok(a) => t.record(a.models.len() == expected && a.complete, || {
            format!("{} models, expected {expected}", a.models.len())
        }),
        Err(e) => t.record(false, || e.to_string()),
    }
    t
}

/// Everything `--mode check` runs.
pub fn run_all(seed: u64) -> Vec<Tally> {
    let mut out = vec![solver_vs_brute_force(seed, 500, 10)];
    out.extend(aggregate_rewrites(seed, 200).tallies().into_iter().cloned());
    out.push(interval_counterexamples());
    out.push(queens(4));
    out
}
