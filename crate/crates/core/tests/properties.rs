use std::cmp::Ordering;
use std::collections::BTreeSet;

use agref::ast::*;
use agref::formula::{
    ht_satisfies, reduct, satisfies, stable_models, strongly_equivalent, Formula, GroundAtom,
    Interpretation, SolveConfig,
};
use agref::grounder::{GroundConfig, Grounder, Universe};
use agref::oracle;
use agref::parser::parse_term;
use agref::termeval::{agg_finite, eval_term, TupleSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn symbol() -> impl Strategy<Value = Symbol> {
    (
        prop::sample::select(vec!["a", "b", "f", "g"]),
        any::<bool>(),
    )
        .prop_map(|(n, neg)| {
            if neg {
                Symbol::negated(n)
            } else {
                Symbol::constant(n)
            }
        })
}

fn precomputed() -> impl Strategy<Value = PrecomputedTerm> {
    let leaf = prop_oneof![
        Just(PrecomputedTerm::Inf),
        Just(PrecomputedTerm::Sup),
        (-3i64..4).prop_map(PrecomputedTerm::num),
        symbol().prop_map(PrecomputedTerm::Symbol),
    ];
    leaf.prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            (symbol(), prop::collection::vec(inner.clone(), 1..3))
                .prop_map(|(f, args)| PrecomputedTerm::Function(f, args)),
            prop::collection::vec(inner, 0..3).prop_map(PrecomputedTerm::Tuple),
        ]
    })
}

/// Ground terms; `intervals` allows `..`.
fn ground_term(intervals: bool) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (-3i64..4).prop_map(Term::num),
        Just(Term::constant("a")),
        Just(Term::Inf),
        Just(Term::Sup),
    ];
    leaf.prop_recursive(3, 12, 2, move |inner| {
        let mut ops = vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div];
        if intervals {
            ops.push(BinOp::Interval);
        }
        prop_oneof![
            (prop::sample::select(ops), inner.clone(), inner.clone())
                .prop_map(|(op, l, r)| Term::binop(op, l, r)),
            prop::collection::vec(inner.clone(), 1..3)
                .prop_map(|args| Term::function(Symbol::constant("f"), args)),
            prop::collection::vec(inner, 0..3).prop_map(Term::Tuple),
        ]
    })
}

fn term_with_vars() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (-3i64..4).prop_map(Term::num),
        Just(Term::constant("a")),
        Just(Term::var("X")),
        Just(Term::var("Y")),
        Just(Term::Sup),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (
                prop::sample::select(vec![
                    BinOp::Add,
                    BinOp::Sub,
                    BinOp::Mul,
                    BinOp::Div,
                    BinOp::Interval
                ]),
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, l, r)| Term::binop(op, l, r)),
            inner.clone().prop_map(Term::negate),
            prop::collection::vec(inner.clone(), 1..3)
                .prop_map(|args| Term::function(Symbol::constant("g"), args)),
            prop::collection::vec(inner, 0..3).prop_map(Term::Tuple),
        ]
    })
}

fn interpretation(atoms: &[GroundAtom], mask: u32) -> Interpretation {
    atoms
        .iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .map(|(_, a)| a.clone())
        .collect()
}

proptest! {
    #[test]
    fn term_order_is_total(a in precomputed(), b in precomputed(), c in precomputed()) {
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        prop_assert_eq!(a.cmp(&b) == Ordering::Equal, a == b);
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
        prop_assert!(PrecomputedTerm::Inf <= a && a <= PrecomputedTerm::Sup);
    }

    #[test]
    fn numerals_follow_integers(x in any::<i64>(), y in any::<i64>()) {
        prop_assert_eq!(PrecomputedTerm::num(x).cmp(&PrecomputedTerm::num(y)), x.cmp(&y));
    }

    #[test]
    fn interval_free_terms_denote_at_most_one_value(t in ground_term(false)) {
        prop_assert!(is_interval_free(&t));
        let set = eval_term(&t).unwrap();
        prop_assert!(set.len() <= 1, "{} = {:?}", t, set);
    }

    #[test]
    fn arithmetic_over_numerals_gives_numerals(
        ops in prop::collection::vec((prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Interval]), -3i64..4), 0..4),
        start in -3i64..4,
    ) {
        let t = ops.into_iter().fold(Term::num(start), |acc, (op, n)| Term::binop(op, acc, Term::num(n)));
        for v in eval_term(&t).unwrap() {
            prop_assert!(v.as_numeral().is_some(), "{} contains {}", t, v);
        }
    }

    #[test]
    fn count_is_cardinality(tuples in prop::collection::btree_set(prop::collection::vec(precomputed(), 0..3), 0..6)) {
        let set: TupleSet = tuples;
        prop_assert_eq!(agg_finite(AggregateFunction::Count, &set), PrecomputedTerm::num(set.len() as i64));
    }

    #[test]
    fn printing_and_parsing_terms_is_a_fixpoint(t in term_with_vars()) {
        let printed = t.to_string();
        let reparsed = parse_term(&printed).unwrap();
        prop_assert_eq!(reparsed.to_string(), printed);
        prop_assert_eq!(eval_or_none(&reparsed), eval_or_none(&t));
    }

    #[test]
    fn satisfaction_survives_the_reduct(seed in any::<u64>(), mask in any::<u32>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let atoms = oracle::prop_atoms(4);
        let f = oracle::random_formula(&mut rng, &atoms, 4);
        let i = interpretation(&atoms, mask);
        prop_assert_eq!(satisfies(&i, &f), satisfies(&i, &reduct(&f, &i)));
        // ⟨I, I⟩ is the classical case
        prop_assert_eq!(ht_satisfies(&i, &i, &f), satisfies(&i, &f));
    }

    #[test]
    fn stable_models_are_models(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theory = oracle::random_theory(&mut rng, 6);
        let outcome = stable_models(theory.clone(), &SolveConfig::default()).unwrap();
        for m in &outcome.models {
            prop_assert!(theory.iter().all(|f| satisfies(m, f)));
        }
        prop_assert_eq!(Some(outcome.models), oracle::brute_stable_models(&theory));
    }

    #[test]
    fn strong_equivalence_holds_in_every_context(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let atoms = oracle::prop_atoms(3);
        let f = oracle::random_formula(&mut rng, &atoms, 3);
        let g = oracle::random_formula(&mut rng, &atoms, 3);
        let context: Vec<Formula> = (0..3).map(|_| oracle::random_rule_formula(&mut rng, &atoms)).collect();
        let with = |h: &Formula| {
            let mut t = context.clone();
            t.push(h.clone());
            oracle::brute_stable_models(&t).unwrap()
        };
        prop_assert!(strongly_equivalent(&f, &f.canonical()).unwrap());
        prop_assert_eq!(with(&f), with(&f.canonical()));
        if strongly_equivalent(&f, &g).unwrap() {
            prop_assert_eq!(with(&f), with(&g));
        }
    }

    #[test]
    fn aggregate_translation_matches_direct_evaluation(seed in any::<u64>(), mask in any::<u32>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = oracle::random_aggregate(&mut rng, 4, false);
        let universe = Universe::new([PrecomputedTerm::num(1), PrecomputedTerm::num(2)]);
        for simplify in [false, true] {
            let cfg = GroundConfig { simplify, ..GroundConfig::default() };
            let g = Grounder::new(&universe, &cfg);
            let agg = g.ground_aggregate(&e).unwrap();
            let tau = g.tau_aggregate(&e).unwrap();
            let mut atoms = BTreeSet::new();
            for entry in &agg.entries {
                entry.condition.collect_atoms(&mut atoms);
            }
            let atoms: Vec<GroundAtom> = atoms.into_iter().collect();
            let i = interpretation(&atoms, mask);
            let delta = agg
                .entries
                .iter()
                .enumerate()
                .filter(|(_, entry)| satisfies(&i, &entry.condition))
                .fold(0u64, |m, (k, _)| m | 1 << k);
            prop_assert_eq!(satisfies(&i, &tau), agg.justifies(delta), "{} under {:?}", e, i);
        }
    }

    #[test]
    fn both_readings_agree_on_plain_atoms(args in prop::collection::vec(precomputed(), 0..3)) {
        let universe = Universe::new([PrecomputedTerm::num(0)]);
        let cfg = GroundConfig::default();
        let g = Grounder::new(&universe, &cfg);
        let atom = Atom::new("p", args.iter().map(Term::from).collect());
        let lit = BasicLiteral::Symbolic(SymbolicLiteral::positive(atom));
        let expected = Formula::atom(GroundAtom::new(Symbol::constant("p"), args));
        prop_assert_eq!(g.tau_and(&lit).unwrap(), expected.clone());
        prop_assert_eq!(g.tau_or(&lit).unwrap(), expected);
    }
}

fn eval_or_none(t: &Term) -> Option<BTreeSet<PrecomputedTerm>> {
    if t.is_ground() {
        eval_term(t).ok()
    } else {
        None
    }
}
