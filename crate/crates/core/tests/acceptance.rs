//! One line per acceptance criterion. Runs without the test harness so the
//! lines are printed even when everything passes.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use agref::ast::*;
use agref::check;
use agref::desugar::expand_program;
use agref::formula::{Formula, GroundAtom, Interpretation};
use agref::grounder::{ground_program, GroundConfig, Grounder, Universe};
use agref::oracle;
use agref::parser::{parse_literal, parse_program_with, parse_term, Constants};
use agref::pipeline::{self, Config};
use agref::termeval::eval_term;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(limit: Duration, start: Instant) -> Outcome {
    let spent = start.elapsed();
    ensure(spent < limit, || format!("took {spent:?}, limit {limit:?}"))
}

fn atom(name: &str, args: &[i64]) -> Formula {
    Formula::atom(GroundAtom::new(
        Symbol::constant(name),
        args.iter().map(|&n| PrecomputedTerm::num(n)).collect(),
    ))
}

fn nums(values: &[i64]) -> BTreeSet<PrecomputedTerm> {
    values.iter().map(|&n| PrecomputedTerm::num(n)).collect()
}

fn basic(src: &str) -> BasicLiteral {
    match parse_literal(src) {
        Ok(Literal::Conditional(ConditionalLiteral {
            head: ConditionalHead::Literal(l),
            condition,
        })) if condition.is_empty() => l,
        other => panic!("{src}: {other:?}"),
    }
}

fn consts(n: i64) -> Constants {
    [("n".to_string(), n.into())].into_iter().collect()
}

fn micro_examples() -> Outcome {
    let start = Instant::now();
    let universe = Universe::new(
        (0..=3)
            .map(PrecomputedTerm::num)
            .chain([PrecomputedTerm::Inf, PrecomputedTerm::Sup]),
    );
    let cfg = GroundConfig::default();
    let g = Grounder::new(&universe, &cfg);

    let got = g.tau_or(&basic("p(2..4)")).map_err(|e| e.to_string())?;
    let want = Formula::or([atom("p", &[2]), atom("p", &[3]), atom("p", &[4])]);
    ensure(got == want, || format!("τ∨ p(2..4) = {got}"))?;

    let got = g.tau_or(&basic("2 = 2..4")).map_err(|e| e.to_string())?;
    ensure(got.is_top(), || format!("τ∨ (2 = 2..4) = {got}"))?;

    for src in ["1..0", "1/0", "1+a"] {
        let set = eval_term(&parse_term(src).unwrap()).map_err(|e| e.to_string())?;
        ensure(set.is_empty(), || format!("[{src}] = {set:?}"))?;
    }
    let set = eval_term(&parse_term("(1..3)*2").unwrap()).map_err(|e| e.to_string())?;
    ensure(set == nums(&[2, 4, 6]), || format!("[(1..3)*2] = {set:?}"))?;

    let program = parse_program_with("{ q(1..n,1..n) }.", &consts(2)).unwrap();
    let core = expand_program(&program).map_err(|e| e.to_string())?;
    let got = ground_program(&core, &cfg)
        .map_err(|e| e.to_string())?
        .formulas;
    let choice = |x, y| {
        let q = atom("q", &[x, y]);
        Formula::raw_or([q.clone(), Formula::raw_not(q)])
    };
    let want =
        Formula::raw_and([choice(1, 1), choice(1, 2), choice(2, 1), choice(2, 2)]).canonical();
    let got = Formula::and(got).canonical();
    ensure(got == want, || format!("τ R1 at n = 2 is {got}"))?;

    let lit = parse_literal("#count{ p(X) : p(X) } > 0").unwrap();
    let got = g.tau_literal(&lit).map_err(|e| e.to_string())?.canonical();
    let disjunction = universe
        .terms()
        .iter()
        .map(|t| Formula::atom(GroundAtom::new(Symbol::constant("p"), vec![t.clone()])));
    let want = Formula::raw_implies(Formula::top(), Formula::raw_or(disjunction)).canonical();
    ensure(got == want, || format!("τ count{{p(X):p(X)}} > 0 = {got}"))?;

    within(Duration::from_secs(1), start)
}

fn models(src: &str) -> Result<Vec<Interpretation>, String> {
    let answer = pipeline::answer_sets(src, &Config::default()).map_err(|e| e.to_string())?;
    ensure(answer.complete, || "search incomplete".into())?;
    Ok(answer.models)
}

fn spot_checks() -> Outcome {
    let start = Instant::now();
    let got = models("p :- not not p.")?;
    let p: Interpretation = [GroundAtom::prop("p")].into();
    ensure(got == vec![Interpretation::new(), p], || format!("{got:?}"))?;

    let disjunctive = models("q(1..2,1..2) ; not q(1..2,1..2).")?;
    ensure(disjunctive.len() == 2, || {
        format!("{} models for the disjunction", disjunctive.len())
    })?;
    let choice = models("{ q(1..2,1..2) }.")?;
    ensure(choice.len() == 16, || {
        format!("{} models for the choice rule", choice.len())
    })?;
    within(Duration::from_secs(5), start)
}

fn queens() -> Outcome {
    for n in [4, 5] {
        let start = Instant::now();
        let expected = oracle::count_queens(n as usize) as usize;
        let answer = pipeline::answer_sets_with_n(oracle::QUEENS, n, &Config::default())
            .map_err(|e| e.to_string())?;
        ensure(answer.complete && answer.models.len() == expected, || {
            format!(
                "n = {n}: {} models, oracle says {expected}",
                answer.models.len()
            )
        })?;
        within(Duration::from_secs(120), start)?;
    }
    Ok(())
}

fn rewrite_suites() -> Outcome {
    let report = check::aggregate_rewrites(2024, 200);
    ensure(report.atoms >= 200, || {
        format!("only {} atoms", report.atoms)
    })?;
    for t in report.tallies() {
        ensure(t.passed() && t.cases > 0, || t.to_string())?;
    }
    let t = check::interval_counterexamples();
    ensure(t.passed(), || t.to_string())
}

fn oracle_equivalence() -> Outcome {
    let t = check::solver_vs_brute_force(2024, 500, 10);
    ensure(t.passed() && t.cases == 500, || t.to_string())
}

fn desugaring_golden() -> Outcome {
    let src = ":- D = 1..n*2-1, 2 { q(X,Y) : d2(X,Y,D) }.";
    let program = parse_program_with(src, &Constants::new()).map_err(|e| e.to_string())?;
    let core = expand_program(&program).map_err(|e| e.to_string())?;
    let got = core.to_string();
    let want = ":- D = 1..n*2-1, 2 <= #count{ 0,q(X,Y) : q(X,Y), d2(X,Y,D) }.";
    ensure(got.trim() == want, || format!("printed {got:?}"))
}

fn pooling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let facts = oracle::random_facts(&mut rng);
        let pooled = models(&format!("{facts}\np(X;Y) :- q(X,Y)."))?;
        let split = models(&format!("{facts}\np(X) :- q(X,Y).\np(Y) :- q(X,Y)."))?;
        ensure(pooled == split, || {
            format!("facts {facts:?}: {pooled:?} vs {split:?}")
        })?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("micro-examples of the translation", micro_examples),
        ("stable-model spot checks", spot_checks),
        ("n-queens at n = 4 and n = 5", queens),
        (
            "aggregate rewrite suites and interval counterexamples",
            rewrite_suites,
        ),
        (
            "solver agrees with brute force on 500 theories",
            oracle_equivalence,
        ),
        ("counting expression desugaring", desugaring_golden),
        ("pooling equals the two-rule program", pooling),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(()) => println!("PASS criterion {}: {name} ({:.2?})", k + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
