//! Translation of core programs into sets of ground infinitary formulas,
//! with every quantification ranging over a finite [`Universe`].

pub mod aggregate;
pub mod universe;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use aggregate::{AggEntry, AggregateError, GroundAggregate, Guard, DEFAULT_AGG_BUDGET};
pub use universe::{Universe, UniverseConfig};

use crate::ast::*;
use crate::formula::{Formula, GroundAtom};
use crate::termeval::{eval_pool, eval_term, eval_tuple, rel_holds, EvalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Aggregate(#[from] AggregateError),
    #[error("the universe would contain more than {limit} terms")]
    UniverseTooLarge { limit: usize },
    #[error("in rule `{rule}`: {source}")]
    InRule {
        rule: String,
        source: Box<GroundError>,
    },
}

#[derive(Debug, Clone)]
pub struct GroundConfig {
    pub universe: UniverseConfig,
    pub agg_budget: usize,
    /// Apply the equivalence-preserving aggregate rewrites.
    pub simplify: bool,
}

impl Default for GroundConfig {
    fn default() -> Self {
        GroundConfig {
            universe: UniverseConfig::default(),
            agg_budget: DEFAULT_AGG_BUDGET,
            simplify: true,
        }
    }
}

pub type Binding = BTreeMap<String, PrecomputedTerm>;

#[derive(Debug, Clone)]
pub struct Grounding {
    pub universe: Universe,
    /// Sorted, without duplicates and without `⊤`.
    pub formulas: Vec<Formula>,
}

pub fn ground_program(p: &CoreProgram, cfg: &GroundConfig) -> Result<Grounding, GroundError> {
    let universe = Universe::for_program(p, &cfg.universe)?;
    let formulas = Grounder::new(&universe, cfg).tau_program(p)?;
    Ok(Grounding { universe, formulas })
}

// ---------------------------------------------------------------- substitution

pub fn subst_term(t: &Term, b: &Binding) -> Term {
    match t {
        Term::Variable(v) => b.get(v).map_or_else(|| t.clone(), Term::from),
        Term::Function(f, args) => {
            Term::Function(f.clone(), args.iter().map(|a| subst_term(a, b)).collect())
        }
        Term::Tuple(args) => Term::Tuple(args.iter().map(|a| subst_term(a, b)).collect()),
        Term::BinOp(op, l, r) => Term::binop(*op, subst_term(l, b), subst_term(r, b)),
        _ => t.clone(),
    }
}

fn subst_terms(ts: &[Term], b: &Binding) -> Vec<Term> {
    ts.iter().map(|t| subst_term(t, b)).collect()
}

pub fn subst_atom(a: &Atom, b: &Binding) -> Atom {
    Atom {
        pool: Pool(a.pool.0.iter().map(|alt| subst_terms(alt, b)).collect()),
        ..a.clone()
    }
}

pub fn subst_basic(l: &BasicLiteral, b: &Binding) -> BasicLiteral {
    match l {
        BasicLiteral::Symbolic(s) => BasicLiteral::Symbolic(SymbolicLiteral {
            negation: s.negation,
            atom: subst_atom(&s.atom, b),
        }),
        BasicLiteral::Arithmetic(a) => BasicLiteral::Arithmetic(ArithmeticLiteral {
            left: subst_term(&a.left, b),
            rel: a.rel,
            right: subst_term(&a.right, b),
        }),
    }
}

fn subst_basics(ls: &[BasicLiteral], b: &Binding) -> Vec<BasicLiteral> {
    ls.iter().map(|l| subst_basic(l, b)).collect()
}

pub fn subst_literal(l: &Literal, b: &Binding) -> Literal {
    match l {
        Literal::Conditional(c) => Literal::Conditional(ConditionalLiteral {
            head: match &c.head {
                ConditionalHead::Literal(h) => ConditionalHead::Literal(subst_basic(h, b)),
                ConditionalHead::Falsum => ConditionalHead::Falsum,
            },
            condition: subst_basics(&c.condition, b),
        }),
        Literal::Aggregate(a) => Literal::Aggregate(AggregateLiteral {
            negation: a.negation,
            atom: AggregateAtom {
                function: a.atom.function,
                elements: a
                    .atom
                    .elements
                    .iter()
                    .map(|e| AggregateElement {
                        terms: subst_terms(&e.terms, b),
                        condition: subst_basics(&e.condition, b),
                    })
                    .collect(),
                left: a.atom.left.as_ref().map(|(s, r)| (subst_term(s, b), *r)),
                right: a.atom.right.as_ref().map(|(r, s)| (*r, subst_term(s, b))),
            },
        }),
    }
}

// ---------------------------------------------------------------- global variables

/// Variables of the literal that are bound by rule instantiation.
pub fn literal_globals(l: &Literal) -> BTreeSet<String> {
    match l {
        Literal::Conditional(c) => {
            let mut head = BTreeSet::new();
            if let ConditionalHead::Literal(h) = &c.head {
                h.collect_vars(&mut head);
            }
            let cond = c.condition.as_slice().vars();
            head.difference(&cond).cloned().collect()
        }
        Literal::Aggregate(a) => {
            let mut out = BTreeSet::new();
            for (_, s) in a.atom.guards() {
                s.collect_vars(&mut out);
            }
            out
        }
    }
}

pub fn head_vars(h: &CoreHead) -> BTreeSet<String> {
    match h {
        CoreHead::Disjunction(ls) => ls.as_slice().vars(),
        CoreHead::Choice(a) => a.vars(),
    }
}

pub fn global_vars(r: &CoreRule) -> BTreeSet<String> {
    let mut out = head_vars(&r.head);
    for l in &r.body {
        out.extend(literal_globals(l));
    }
    out
}

// ---------------------------------------------------------------- binding search

/// Variable order plus, per depth, the checks whose variables become fully
/// bound at that depth.
struct Plan {
    order: Vec<String>,
    ready: Vec<Vec<usize>>,
}

impl Plan {
    fn new(checks: &[BTreeSet<String>], extra: &BTreeSet<String>) -> Plan {
        let mut by_size: Vec<usize> = (0..checks.len()).collect();
        by_size.sort_by_key(|&i| checks[i].len());
        let mut order: Vec<String> = Vec::new();
        for &i in &by_size {
            for v in &checks[i] {
                if !order.contains(v) {
                    order.push(v.clone());
                }
            }
        }
        for v in extra {
            if !order.contains(v) {
                order.push(v.clone());
            }
        }
        let mut ready = vec![Vec::new(); order.len() + 1];
        for (i, vs) in checks.iter().enumerate() {
            let depth = vs
                .iter()
                .map(|v| order.iter().position(|o| o == v).unwrap() + 1)
                .max()
                .unwrap_or(0);
            ready[depth].push(i);
        }
        Plan { order, ready }
    }
}

type Check<'a> = dyn Fn(usize, &Binding) -> Result<Option<Formula>, GroundError> + 'a;
type Leaf<'a> = dyn FnMut(&Binding, &[Formula]) -> Result<(), GroundError> + 'a;

/// Enumerates bindings of the plan's variables over `terms`; a check
/// returning `None` prunes every extension of the current binding.
fn search(
    plan: &Plan,
    terms: &[PrecomputedTerm],
    binding: &mut Binding,
    results: &mut Vec<Formula>,
    check: &Check<'_>,
    leaf: &mut Leaf<'_>,
) -> Result<(), GroundError> {
    let depth = binding.len();
    for &c in &plan.ready[depth] {
        match check(c, binding)? {
            None => return Ok(()),
            Some(f) => results[c] = f,
        }
    }
    if depth == plan.order.len() {
        return leaf(binding, results);
    }
    let var = &plan.order[depth];
    for t in terms {
        binding.insert(var.clone(), t.clone());
        search(plan, terms, binding, results, check, leaf)?;
    }
    binding.remove(var);
    Ok(())
}

// ---------------------------------------------------------------- translation

pub struct Grounder<'a> {
    pub universe: &'a Universe,
    pub cfg: &'a GroundConfig,
}

fn nonbottom(f: Formula) -> Option<Formula> {
    (!f.is_bottom()).then_some(f)
}

impl<'a> Grounder<'a> {
    pub fn new(universe: &'a Universe, cfg: &'a GroundConfig) -> Self {
        Grounder { universe, cfg }
    }

    fn each_binding(
        &self,
        checks: &[BTreeSet<String>],
        extra: &BTreeSet<String>,
        check: &Check<'_>,
        leaf: &mut Leaf<'_>,
    ) -> Result<(), GroundError> {
        let plan = Plan::new(checks, extra);
        let mut results = vec![Formula::top(); checks.len()];
        search(
            &plan,
            self.universe.terms(),
            &mut Binding::new(),
            &mut results,
            check,
            leaf,
        )
    }

    pub fn ground_atoms(&self, a: &Atom) -> Result<Vec<GroundAtom>, GroundError> {
        let symbol = a.symbol();
        Ok(eval_pool(&a.pool.0)?
            .into_iter()
            .map(|args| GroundAtom::new(symbol.clone(), args))
            .collect())
    }

    fn atom_formulas(&self, a: &Atom) -> Result<Vec<Formula>, GroundError> {
        Ok(self
            .ground_atoms(a)?
            .into_iter()
            .map(Formula::atom)
            .collect())
    }

    fn arithmetic(&self, a: &ArithmeticLiteral) -> Result<(Vec<bool>, bool), GroundError> {
        let ls = eval_term(&a.left)?;
        let rs = eval_term(&a.right)?;
        let mut results = Vec::new();
        for l in &ls {
            for r in &rs {
                results.push(rel_holds(a.rel, l, r));
            }
        }
        Ok((results, true))
    }

    /// `τ∧` of a ground basic literal.
    pub fn tau_and(&self, l: &BasicLiteral) -> Result<Formula, GroundError> {
        match l {
            BasicLiteral::Symbolic(s) => {
                let atoms = self.atom_formulas(&s.atom)?;
                Ok(match s.negation {
                    Negation::None => Formula::and(atoms),
                    Negation::Single => Formula::not(Formula::or(atoms)),
                    Negation::Double => Formula::not(Formula::not(Formula::and(atoms))),
                })
            }
            BasicLiteral::Arithmetic(a) => {
                let (pairs, _) = self.arithmetic(a)?;
                Ok(if pairs.iter().all(|&b| b) {
                    Formula::top()
                } else {
                    Formula::bottom()
                })
            }
        }
    }

    /// `τ∨` of a ground basic literal.
    pub fn tau_or(&self, l: &BasicLiteral) -> Result<Formula, GroundError> {
        match l {
            BasicLiteral::Symbolic(s) => {
                let atoms = self.atom_formulas(&s.atom)?;
                Ok(match s.negation {
                    Negation::None => Formula::or(atoms),
                    Negation::Single => Formula::not(Formula::and(atoms)),
                    Negation::Double => Formula::not(Formula::not(Formula::or(atoms))),
                })
            }
            BasicLiteral::Arithmetic(a) => {
                let (pairs, _) = self.arithmetic(a)?;
                Ok(if pairs.iter().any(|&b| b) {
                    Formula::top()
                } else {
                    Formula::bottom()
                })
            }
        }
    }

    /// `τ∨` of a ground tuple of basic literals: the conjunction.
    pub fn tau_or_all(&self, ls: &[BasicLiteral]) -> Result<Formula, GroundError> {
        let mut out = Vec::with_capacity(ls.len());
        for l in ls {
            out.push(self.tau_or(l)?);
        }
        Ok(Formula::and(out))
    }

    /// `∧_{t ∈ [P]} (p(t) ∨ ¬p(t))`
    pub fn tau_choice(&self, a: &Atom) -> Result<Formula, GroundError> {
        Ok(Formula::and(
            self.atom_formulas(a)?
                .into_iter()
                .map(|p| Formula::or([p.clone(), Formula::not(p)])),
        ))
    }

    /// `∧_r (τ∨(L^x_r) → τ∨(H^x_r))` with `x` the variables of the literal.
    pub fn tau_conditional(&self, c: &ConditionalLiteral) -> Result<Formula, GroundError> {
        let checks: Vec<BTreeSet<String>> = c.condition.iter().map(|l| l.vars()).collect();
        let extra = c.vars();
        let mut conjuncts = Vec::new();
        self.each_binding(
            &checks,
            &extra,
            &|i, b| Ok(nonbottom(self.tau_or(&subst_basic(&c.condition[i], b))?)),
            &mut |b, conds| {
                let head = match &c.head {
                    ConditionalHead::Literal(h) => self.tau_or(&subst_basic(h, b))?,
                    ConditionalHead::Falsum => Formula::bottom(),
                };
                let f = Formula::implies(Formula::and(conds.iter().cloned()), head);
                if !f.is_top() {
                    conjuncts.push(f);
                }
                Ok(())
            },
        )?;
        Ok(Formula::and(conjuncts))
    }

    /// The entries `(i, r)` of a closed aggregate atom whose conditions are
    /// not `⊥`, with its bounds evaluated.
    pub fn ground_aggregate(&self, e: &AggregateAtom) -> Result<GroundAggregate, GroundError> {
        let mut guards = Vec::new();
        for (rel, s) in e.guards() {
            guards.push(Guard {
                rel,
                values: eval_term(s)?,
                interval_free: is_interval_free(s),
            });
        }
        let mut entries = Vec::new();
        for (i, el) in e.elements.iter().enumerate() {
            let checks: Vec<BTreeSet<String>> = el.condition.iter().map(|l| l.vars()).collect();
            let extra = el.vars();
            self.each_binding(
                &checks,
                &extra,
                &|k, b| Ok(nonbottom(self.tau_or(&subst_basic(&el.condition[k], b))?)),
                &mut |b, conds| {
                    entries.push(AggEntry {
                        element: i,
                        binding: b.values().cloned().collect(),
                        tuples: eval_tuple(&subst_terms(&el.terms, b))?,
                        condition: Formula::and(conds.iter().cloned()),
                    });
                    Ok(())
                },
            )?;
        }
        Ok(GroundAggregate {
            label: e.to_string(),
            function: e.function,
            guards,
            terms_interval_free: e
                .elements
                .iter()
                .all(|el| is_tuple_interval_free(&el.terms)),
            entries,
        })
    }

    pub fn tau_aggregate(&self, e: &AggregateAtom) -> Result<Formula, GroundError> {
        let agg = self.ground_aggregate(e)?;
        Ok(if self.cfg.simplify {
            crate::simplify::translate(&agg, self.cfg.agg_budget)?
        } else {
            aggregate::subset_formula(&agg, self.cfg.agg_budget)?
        })
    }

    /// `τ` of a closed body literal.
    pub fn tau_literal(&self, l: &Literal) -> Result<Formula, GroundError> {
        match l {
            Literal::Conditional(c) => self.tau_conditional(c),
            Literal::Aggregate(a) => {
                let f = self.tau_aggregate(&a.atom)?;
                Ok(match a.negation {
                    Negation::None => f,
                    Negation::Single => Formula::not(f),
                    Negation::Double => Formula::not(Formula::not(f)),
                })
            }
        }
    }

    fn tau_head(&self, h: &CoreHead, b: &Binding) -> Result<Formula, GroundError> {
        match h {
            CoreHead::Disjunction(ls) => {
                let mut out = Vec::with_capacity(ls.len());
                for l in ls {
                    out.push(self.tau_and(&subst_basic(l, b))?);
                }
                Ok(Formula::or(out))
            }
            CoreHead::Choice(a) => self.tau_choice(&subst_atom(a, b)),
        }
    }

    /// One formula per instance, skipping instances that fold to `⊤`.
    pub fn tau_rule(&self, r: &CoreRule) -> Result<Vec<Formula>, GroundError> {
        // a body literal is evaluated once every global variable occurring
        // in it is bound, not only the ones global in the literal itself
        let globals = global_vars(r);
        let checks: Vec<BTreeSet<String>> = r
            .body
            .iter()
            .map(|l| l.vars().intersection(&globals).cloned().collect())
            .collect();
        let extra = head_vars(&r.head);
        let mut out = Vec::new();
        self.each_binding(
            &checks,
            &extra,
            &|i, b| Ok(nonbottom(self.tau_literal(&subst_literal(&r.body[i], b))?)),
            &mut |b, body| {
                let head = self.tau_head(&r.head, b)?;
                let f = Formula::implies(Formula::and(body.iter().cloned()), head);
                if !f.is_top() {
                    out.push(f);
                }
                Ok(())
            },
        )
        .map_err(|e| GroundError::InRule {
            rule: r.to_string(),
            source: Box::new(e),
        })?;
        Ok(out)
    }

    pub fn tau_program(&self, p: &CoreProgram) -> Result<Vec<Formula>, GroundError> {
        let mut out = BTreeSet::new();
        for r in &p.rules {
            out.extend(self.tau_rule(r)?);
        }
        Ok(out.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::desugar::expand_program;
    use crate::formula::strongly_equivalent;
    use crate::parser::{parse_literal, parse_program_with, Constants};

    fn atom(name: &str, args: &[i64]) -> Formula {
        Formula::atom(GroundAtom::new(
            Symbol::constant(name),
            args.iter().map(|&n| PrecomputedTerm::num(n)).collect(),
        ))
    }

    fn nums(lo: i64, hi: i64) -> Universe {
        Universe::new(
            (lo..=hi)
                .map(PrecomputedTerm::num)
                .chain([PrecomputedTerm::Inf, PrecomputedTerm::Sup]),
        )
    }

    fn basic(src: &str) -> BasicLiteral {
        match parse_literal(src).unwrap() {
            Literal::Conditional(ConditionalLiteral {
                head: ConditionalHead::Literal(l),
                condition,
            }) if condition.is_empty() => l,
            other => panic!("{other:?}"),
        }
    }

    fn literal_tau(src: &str, u: &Universe, simplify: bool) -> Formula {
        let cfg = GroundConfig {
            simplify,
            ..GroundConfig::default()
        };
        Grounder::new(u, &cfg)
            .tau_literal(&parse_literal(src).unwrap())
            .unwrap()
    }

    fn program(src: &str, n: i64) -> CoreProgram {
        let consts: Constants = [("n".to_string(), n.into())].into_iter().collect();
        expand_program(&parse_program_with(src, &consts).unwrap()).unwrap()
    }

    #[test]
    fn basic_literal_translations() {
        let u = nums(0, 1);
        let cfg = GroundConfig::default();
        let g = Grounder::new(&u, &cfg);
        let p234 = [atom("p", &[2]), atom("p", &[3]), atom("p", &[4])];
        assert_eq!(
            g.tau_or(&basic("p(2..4)")).unwrap(),
            Formula::or(p234.clone())
        );
        assert_eq!(
            g.tau_and(&basic("p(2..4)")).unwrap(),
            Formula::and(p234.clone())
        );
        assert_eq!(
            g.tau_and(&basic("not p(2..4)")).unwrap(),
            Formula::not(Formula::or(p234.clone()))
        );
        assert_eq!(
            g.tau_or(&basic("not not p(2..4)")).unwrap(),
            Formula::not(Formula::not(Formula::or(p234)))
        );
        assert!(g.tau_or(&basic("2 = 2..4")).unwrap().is_top());
        assert!(g.tau_and(&basic("2 = 2..4")).unwrap().is_bottom());
        assert!(g.tau_or(&basic("1 < 1/0")).unwrap().is_bottom());
        assert!(g.tau_and(&basic("1 < 1/0")).unwrap().is_top());
    }

    #[test]
    fn choice_rule_at_two() {
        let p = program("{ q(1..n,1..n) }.", 2);
        let got = ground_program(&p, &GroundConfig::default())
            .unwrap()
            .formulas;
        let expected: Vec<Formula> = [(1, 1), (1, 2), (2, 1), (2, 2)]
            .iter()
            .map(|&(x, y)| {
                let q = atom("q", &[x, y]);
                Formula::or([q.clone(), Formula::not(q)])
            })
            .collect();
        assert_eq!(got, vec![Formula::and(expected)]);
    }

    #[test]
    fn count_of_all_p_positive() {
        let u = nums(0, 2);
        let expected = Formula::or(
            u.terms()
                .iter()
                .map(|t| Formula::atom(GroundAtom::new(Symbol::constant("p"), vec![t.clone()]))),
        );
        for simplify in [false, true] {
            let got = literal_tau("#count{ p(X) : p(X) } > 0", &u, simplify);
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn interval_counterexamples_without_rewriting() {
        let u = nums(0, 1);
        let p = Formula::atom(GroundAtom::prop("p"));
        assert_eq!(
            literal_tau("#count{ a : p } = (0..1)*2", &u, false),
            Formula::not(p.clone())
        );
        assert_eq!(literal_tau("#count{ 1..2 : p } >= 1", &u, false), p);
    }

    #[test]
    fn conditional_literal_in_body() {
        let p = program("a :- p(X) : q(X).", 0);
        let u = nums(0, 1);
        let cfg = GroundConfig::default();
        let got = Grounder::new(&u, &cfg).tau_program(&p).unwrap();
        let implication = |t: PrecomputedTerm| {
            let f = |n: &str| Formula::atom(GroundAtom::new(Symbol::constant(n), vec![t.clone()]));
            Formula::implies(f("q"), f("p"))
        };
        let body = Formula::and(u.terms().iter().cloned().map(implication));
        assert_eq!(
            got,
            vec![Formula::implies(body, Formula::atom(GroundAtom::prop("a")))]
        );
    }

    #[test]
    fn arithmetic_bodies_prune_instances() {
        let p = program("d(X,Y,X+Y) :- X = 1..n, Y = 1..n.", 2);
        let got = ground_program(&p, &GroundConfig::default())
            .unwrap()
            .formulas;
        let expected: Vec<Formula> = [(1, 1, 2), (1, 2, 3), (2, 1, 3), (2, 2, 4)]
            .iter()
            .map(|&(x, y, z)| atom("d", &[x, y, z]))
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn globals_reach_into_aggregates() {
        let p = program(":- D = 1..2, 2 <= #count{ X : p(X,D) }.", 0);
        let u = nums(1, 2);
        let cfg = GroundConfig {
            simplify: false,
            ..GroundConfig::default()
        };
        let got = Grounder::new(&u, &cfg).tau_program(&p).unwrap();
        assert_eq!(got.len(), 2);
        for f in &got {
            let atoms = f.atoms();
            let ds: BTreeSet<_> = atoms.iter().map(|a| a.args[1].clone()).collect();
            assert_eq!(ds.len(), 1, "{f}");
        }
    }

    #[test]
    fn global_variables() {
        let r = &program("h(X) :- p(X,Y) : q(Y); #count{ Z : r(Z,W) } > W.", 0).rules[0];
        let expected: BTreeSet<String> = ["X", "W"].iter().map(|s| s.to_string()).collect();
        assert_eq!(global_vars(r), expected);
        let c = &program("{ p(X) } :- q(Y) : r(Y).", 0).rules[0];
        let expected: BTreeSet<String> = ["X"].iter().map(|s| s.to_string()).collect();
        assert_eq!(global_vars(c), expected);
    }

    #[test]
    fn simplification_keeps_queens_constraints_equivalent() {
        let u = nums(0, 3);
        for src in [
            "not #count{ Y : q(1,Y) } = 1",
            "#count{ 0,q(X,Y) : q(X,Y), X + Y = 3 } >= 2",
            "#sum{ Y : q(Y) } <= 2",
            "1 < #max{ Y : q(Y) } < 3",
        ] {
            let plain = literal_tau(src, &u, false);
            let short = literal_tau(src, &u, true);
            assert!(strongly_equivalent(&plain, &short).unwrap(), "{src}");
        }
    }
}
