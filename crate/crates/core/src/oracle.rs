//! Reference computations that share no code with the solver: stable models
//! straight from the definition, an n-queens counter, and seeded random
//! generators for differential tests.

use std::collections::BTreeSet;

use rand::Rng;

use crate::ast::*;
use crate::formula::{
    atom_index, reduct, satisfies, Compiled, Formula, GroundAtom, Interpretation,
};

/// Largest signature the brute-force oracle accepts.
pub const MAX_BRUTE_ATOMS: usize = 20;

/// Stable models by enumerating every `I ⊆ σ` that satisfies all formulas and
/// checking that no proper subset of `I` satisfies the reducts.
pub fn brute_stable_models(formulas: &[Formula]) -> Option<Vec<Interpretation>> {
    let index = atom_index(formulas);
    let atoms: Vec<GroundAtom> = index.keys().cloned().collect();
    let n = atoms.len();
    if n > MAX_BRUTE_ATOMS {
        return None;
    }
    let to_set = |mask: u64| -> Interpretation {
        (0..n)
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| atoms[k].clone())
            .collect()
    };
    let mut out = Vec::new();
    for mask in 0..1u64 << n {
        let i = to_set(mask);
        if !formulas.iter().all(|f| satisfies(&i, f)) {
            continue;
        }
        let reducts: Vec<Compiled> = formulas
            .iter()
            .map(|f| Compiled::new(&reduct(f, &i), &index))
            .collect();
        // proper submasks of `mask`
        let mut sub = mask;
        let mut minimal = true;
        while sub != 0 {
            sub = (sub - 1) & mask;
            if reducts.iter().all(|r| r.eval(sub)) {
                minimal = false;
                break;
            }
        }
        if minimal {
            out.push(i);
        }
    }
    out.sort();
    Some(out)
}

/// Whether the model contains an atom together with its strong negation.
pub fn is_consistent(model: &Interpretation) -> bool {
    model
        .iter()
        .all(|a| !a.predicate.negated || !model.contains(&a.complement()))
}

/// Number of ways to place `n` non-attacking queens on an `n × n` board.
pub fn count_queens(n: usize) -> u64 {
    fn place(row: usize, n: usize, cols: &mut Vec<usize>) -> u64 {
        if row == n {
            return 1;
        }
        let mut total = 0;
        for c in 0..n {
            let safe = cols
                .iter()
                .enumerate()
                .all(|(r, &q)| q != c && row - r != c.abs_diff(q));
            if safe {
                cols.push(c);
                total += place(row + 1, n, cols);
                cols.pop();
            }
        }
        total
    }
    place(0, n, &mut Vec::new())
}

pub const QUEENS: &str = "\
{ q(1..n,1..n) }.
:- X = 1..n, not #count{ Y : q(X,Y) } = 1.
:- Y = 1..n, not #count{ X : q(X,Y) } = 1.
d1(X,Y,X-Y+n) :- X = 1..n, Y = 1..n.
d2(X,Y,X+Y-1) :- X = 1..n, Y = 1..n.
:- D = 1..n*2-1, 2 { q(X,Y) : d1(X,Y,D) }.
:- D = 1..n*2-1, 2 { q(X,Y) : d2(X,Y,D) }.
";

/// Propositional atoms `p0`, `p1`, ...
pub fn prop_atoms(n: usize) -> Vec<GroundAtom> {
    (0..n).map(|k| GroundAtom::prop(&format!("p{k}"))).collect()
}

/// A random formula over `atoms` built with the non-folding constructors.
pub fn random_formula(rng: &mut impl Rng, atoms: &[GroundAtom], depth: u32) -> Formula {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..12) {
            0 => Formula::top(),
            1 => Formula::bottom(),
            _ => Formula::atom(atoms[rng.gen_range(0..atoms.len())].clone()),
        };
    }
    fn children(rng: &mut impl Rng, atoms: &[GroundAtom], depth: u32) -> Vec<Formula> {
        let k = rng.gen_range(1..=3);
        (0..k)
            .map(|_| random_formula(rng, atoms, depth - 1))
            .collect()
    }
    match rng.gen_range(0..4) {
        0 => Formula::raw_and(children(rng, atoms, depth)),
        1 => Formula::raw_or(children(rng, atoms, depth)),
        2 => Formula::raw_not(random_formula(rng, atoms, depth - 1)),
        _ => Formula::raw_implies(
            random_formula(rng, atoms, depth - 1),
            random_formula(rng, atoms, depth - 1),
        ),
    }
}

/// A random rule-shaped formula `body -> head`, the shape programs produce.
pub fn random_rule_formula<R: Rng>(rng: &mut R, atoms: &[GroundAtom]) -> Formula {
    let pick = |rng: &mut R| Formula::atom(atoms[rng.gen_range(0..atoms.len())].clone());
    let mut body = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let a = pick(rng);
        body.push(match rng.gen_range(0..4) {
            0 => Formula::raw_not(a),
            1 => Formula::raw_not(Formula::raw_not(a)),
            _ => a,
        });
    }
    let head = match rng.gen_range(0..5) {
        0 => Formula::bottom(),
        1 => {
            let a = pick(rng);
            Formula::raw_or([a.clone(), Formula::raw_not(a)])
        }
        2 => Formula::raw_or([pick(rng), pick(rng)]),
        _ => pick(rng),
    };
    Formula::raw_implies(Formula::raw_and(body), head)
}

/// A random formula set over at most `max_atoms` atoms, mixing rule-shaped
/// and arbitrary formulas.
pub fn random_theory(rng: &mut impl Rng, max_atoms: usize) -> Vec<Formula> {
    let atoms = prop_atoms(rng.gen_range(1..=max_atoms));
    let k = rng.gen_range(1..=6);
    (0..k)
        .map(|_| {
            if rng.gen_bool(0.5) {
                random_rule_formula(rng, &atoms)
            } else {
                random_formula(rng, &atoms, 3)
            }
        })
        .collect()
}

/// Random facts `q(a,b)` over `{1, 2, 3, a}` as program text.
pub fn random_facts(rng: &mut impl Rng) -> String {
    const VALUES: [&str; 4] = ["1", "2", "3", "a"];
    let mut facts = BTreeSet::new();
    for _ in 0..rng.gen_range(0..6) {
        let x = VALUES[rng.gen_range(0..4)];
        let y = VALUES[rng.gen_range(0..4)];
        facts.insert(format!("q({x},{y})."));
    }
    facts.into_iter().collect::<Vec<_>>().join("\n")
}

fn random_value(rng: &mut impl Rng, var: Option<&str>) -> Term {
    match (rng.gen_range(0..6), var) {
        (0, _) => Term::constant("a"),
        (1, Some(v)) | (2, Some(v)) => Term::var(v),
        _ => Term::num(rng.gen_range(-1..=3)),
    }
}

/// A closed aggregate atom with at most `max_entries` index entries over the
/// universe `{1, 2}`: elements are ground or have one variable `X`, element
/// terms are interval-free unless `intervals` is set, and every bound is an
/// interval-free numeral.
pub fn random_aggregate(rng: &mut impl Rng, max_entries: usize, intervals: bool) -> AggregateAtom {
    let function = AggregateFunction::ALL[rng.gen_range(0..AggregateFunction::ALL.len())];
    let mut elements = Vec::new();
    let mut entries = 0;
    while entries < max_entries && (elements.is_empty() || rng.gen_bool(0.7)) {
        let with_var = entries + 2 <= max_entries && rng.gen_bool(0.4);
        let var = with_var.then_some("X");
        let mut terms = vec![random_value(rng, var)];
        if rng.gen_bool(0.3) {
            terms.push(random_value(rng, var));
        }
        if intervals && rng.gen_bool(0.3) {
            terms[0] = Term::binop(BinOp::Interval, Term::num(1), Term::num(2));
        }
        let mut condition = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            let name = ["p", "q", "r"][rng.gen_range(0..3)];
            let args = match var {
                Some(v) if rng.gen_bool(0.5) => vec![Term::var(v)],
                _ => vec![],
            };
            let negation = match rng.gen_range(0..5) {
                0 => Negation::Single,
                1 => Negation::Double,
                _ => Negation::None,
            };
            condition.push(BasicLiteral::Symbolic(SymbolicLiteral {
                negation,
                atom: Atom::new(name, args),
            }));
        }
        if let Some(v) = var {
            // keep X local to the element even without a condition mentioning it
            if !terms.iter().any(|t| t.vars().contains(v)) {
                terms.push(Term::var(v));
            }
        }
        elements.push(AggregateElement { terms, condition });
        entries += if with_var { 2 } else { 1 };
    }
    let rel = Rel::ALL[rng.gen_range(0..Rel::ALL.len())];
    let bound = Term::num(rng.gen_range(-1..=4));
    let (left, right) = match rng.gen_range(0..4) {
        0 => (Some((bound, rel)), None),
        1 => {
            let other = Term::num(rng.gen_range(-1..=4));
            let rel2 = Rel::ALL[rng.gen_range(0..Rel::ALL.len())];
            (Some((bound, rel)), Some((rel2, other)))
        }
        _ => (None, Some((rel, bound))),
    };
    AggregateAtom {
        function,
        elements,
        left,
        right,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{stable_models, SolveConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn prop(name: &str) -> Formula {
        Formula::atom(GroundAtom::prop(name))
    }

    #[test]
    fn queens_counts() {
        assert_eq!(
            (1..=8).map(count_queens).collect::<Vec<_>>(),
            vec![1, 0, 0, 2, 10, 4, 40, 92]
        );
    }

    #[test]
    fn brute_force_small_cases() {
        let p = prop("p");
        let dn = Formula::implies(Formula::not(Formula::not(p.clone())), p.clone());
        let models = brute_stable_models(&[dn]).unwrap();
        assert_eq!(
            models,
            vec![BTreeSet::new(), [GroundAtom::prop("p")].into()]
        );
        // p <- p has only the empty model
        let lp = Formula::raw_implies(p.clone(), p.clone());
        assert_eq!(brute_stable_models(&[lp]).unwrap(), vec![BTreeSet::new()]);
    }

    #[test]
    fn solver_agrees_on_a_few_theories() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let t = random_theory(&mut rng, 5);
            let expected = brute_stable_models(&t).unwrap();
            let got = stable_models(t.clone(), &SolveConfig::default()).unwrap();
            assert_eq!(got.models, expected, "{t:?}");
        }
    }

    #[test]
    fn consistency() {
        let m: Interpretation = [GroundAtom::prop("p"), GroundAtom::prop("-p")].into();
        assert!(!is_consistent(&m));
        assert!(is_consistent(&[GroundAtom::prop("-p")].into()));
    }
}
