//! The finite set of precomputed terms that variables range over.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::GroundError;
use crate::ast::*;
use crate::termeval::eval_term;

#[derive(Debug, Clone)]
pub struct UniverseConfig {
    /// Numerals `lo..=hi`; derived from the program when absent.
    pub int_range: Option<(BigInt, BigInt)>,
    pub fn_depth: usize,
    /// Refuse universes with more terms than this.
    pub limit: usize,
}

impl Default for UniverseConfig {
    fn default() -> Self {
        UniverseConfig {
            int_range: None,
            fn_depth: 0,
            limit: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    terms: Vec<PrecomputedTerm>,
}

impl Universe {
    pub fn new(terms: impl IntoIterator<Item = PrecomputedTerm>) -> Universe {
        let set: BTreeSet<PrecomputedTerm> = terms.into_iter().collect();
        Universe {
            terms: set.into_iter().collect(),
        }
    }

    pub fn terms(&self) -> &[PrecomputedTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, t: &PrecomputedTerm) -> bool {
        self.terms.binary_search(t).is_ok()
    }

    /// `{inf, sup}`, the numerals of the integer range, the constants and
    /// ground compound values of the program, closed under the program's
    /// function symbols and tuple arities up to `fn_depth` nestings.
    pub fn for_program(p: &CoreProgram, cfg: &UniverseConfig) -> Result<Universe, GroundError> {
        let mut scan = Scan::default();
        for r in &p.rules {
            scan.rule(r)?;
        }
        let (lo, hi) = match &cfg.int_range {
            Some((lo, hi)) => (lo.clone(), hi.clone()),
            None => {
                let zero = BigInt::from(0);
                let lo = scan
                    .min
                    .clone()
                    .map_or(zero.clone(), |m| m.min(zero.clone()));
                let hi = scan.max.clone().map_or(zero.clone(), |m| m.max(zero));
                (lo, hi)
            }
        };
        let too_large = GroundError::UniverseTooLarge { limit: cfg.limit };
        let width = if lo > hi {
            0
        } else {
            (&hi - &lo + 1u32).to_usize().ok_or(too_large.clone())?
        };
        if width + scan.values.len() + 2 > cfg.limit {
            return Err(too_large);
        }
        let mut terms: BTreeSet<PrecomputedTerm> = scan.values;
        terms.insert(PrecomputedTerm::Inf);
        terms.insert(PrecomputedTerm::Sup);
        let mut n = lo;
        while n <= hi {
            terms.insert(PrecomputedTerm::Numeral(n.clone()));
            n += 1;
        }
        for _ in 0..cfg.fn_depth {
            let base: Vec<PrecomputedTerm> = terms.iter().cloned().collect();
            let mut added = Vec::new();
            for (f, arity) in &scan.functions {
                for args in tuples(&base, *arity, cfg.limit)? {
                    added.push(PrecomputedTerm::function(f.clone(), args));
                }
            }
            for arity in &scan.tuple_arities {
                for args in tuples(&base, *arity, cfg.limit)? {
                    added.push(PrecomputedTerm::Tuple(args));
                }
            }
            terms.extend(added);
            if terms.len() > cfg.limit {
                return Err(too_large);
            }
        }
        Ok(Universe::new(terms))
    }
}

fn tuples(
    base: &[PrecomputedTerm],
    arity: usize,
    limit: usize,
) -> Result<Vec<Vec<PrecomputedTerm>>, GroundError> {
    let mut acc: Vec<Vec<PrecomputedTerm>> = vec![Vec::new()];
    for _ in 0..arity {
        if acc.len() * base.len() > limit {
            return Err(GroundError::UniverseTooLarge { limit });
        }
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                base.iter().map(move |t| {
                    let mut v = prefix.clone();
                    v.push(t.clone());
                    v
                })
            })
            .collect();
    }
    Ok(acc)
}

#[derive(Default)]
struct Scan {
    min: Option<BigInt>,
    max: Option<BigInt>,
    values: BTreeSet<PrecomputedTerm>,
    functions: BTreeSet<(Symbol, usize)>,
    tuple_arities: BTreeSet<usize>,
}

impl Scan {
    fn numeral(&mut self, n: &BigInt) {
        if self.min.as_ref().is_none_or(|m| n < m) {
            self.min = Some(n.clone());
        }
        if self.max.as_ref().is_none_or(|m| n > m) {
            self.max = Some(n.clone());
        }
    }

    /// Records a value and all of its subterms, which patterns can extract.
    fn value(&mut self, v: PrecomputedTerm) {
        match v {
            PrecomputedTerm::Numeral(n) => self.numeral(&n),
            PrecomputedTerm::Inf | PrecomputedTerm::Sup => {}
            PrecomputedTerm::Function(_, ref args) | PrecomputedTerm::Tuple(ref args) => {
                for a in args.clone() {
                    self.value(a);
                }
                self.values.insert(v);
            }
            other => {
                self.values.insert(other);
            }
        }
    }

    fn term(&mut self, t: &Term) -> Result<(), GroundError> {
        match t {
            Term::Function(f, args) => {
                self.functions.insert((f.clone(), args.len()));
            }
            Term::Tuple(args) => {
                self.tuple_arities.insert(args.len());
            }
            _ => {}
        }
        if t.is_ground() {
            for v in eval_term(t)? {
                self.value(v);
            }
            return Ok(());
        }
        match t {
            Term::Function(_, args) | Term::Tuple(args) => {
                args.iter().try_for_each(|a| self.term(a))
            }
            Term::BinOp(_, l, r) => {
                self.term(l)?;
                self.term(r)
            }
            _ => Ok(()),
        }
    }

    fn atom(&mut self, a: &Atom) -> Result<(), GroundError> {
        a.pool.0.iter().flatten().try_for_each(|t| self.term(t))
    }

    fn basic(&mut self, l: &BasicLiteral) -> Result<(), GroundError> {
        match l {
            BasicLiteral::Symbolic(s) => self.atom(&s.atom),
            BasicLiteral::Arithmetic(a) => {
                self.term(&a.left)?;
                self.term(&a.right)
            }
        }
    }

    fn literal(&mut self, l: &Literal) -> Result<(), GroundError> {
        match l {
            Literal::Conditional(c) => {
                if let ConditionalHead::Literal(h) = &c.head {
                    self.basic(h)?;
                }
                c.condition.iter().try_for_each(|l| self.basic(l))
            }
            Literal::Aggregate(a) => {
                for e in &a.atom.elements {
                    e.terms.iter().try_for_each(|t| self.term(t))?;
                    e.condition.iter().try_for_each(|l| self.basic(l))?;
                }
                for (_, s) in a.atom.guards() {
                    self.term(s)?;
                }
                Ok(())
            }
        }
    }

    fn rule(&mut self, r: &CoreRule) -> Result<(), GroundError> {
        match &r.head {
            CoreHead::Disjunction(h) => h.iter().try_for_each(|l| self.basic(l))?,
            CoreHead::Choice(a) => self.atom(a)?,
        }
        r.body.iter().try_for_each(|l| self.literal(l))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::desugar::expand_program;
    use crate::parser::{parse_program, parse_program_with, Constants};

    fn universe(src: &str, n: i64) -> Universe {
        let consts: Constants = [("n".to_string(), BigInt::from(n))].into_iter().collect();
        let p = expand_program(&parse_program_with(src, &consts).unwrap()).unwrap();
        Universe::for_program(&p, &UniverseConfig::default()).unwrap()
    }

    #[test]
    fn queens_range() {
        let u = universe(
            "{ q(1..n,1..n) }.\nd1(X,Y,X-Y+n) :- X = 1..n, Y = 1..n.\n\
             :- D = 1..n*2-1, 2 { q(X,Y) : d1(X,Y,D) }.",
            4,
        );
        let mut expected = vec![PrecomputedTerm::Inf];
        expected.extend((0..=7).map(PrecomputedTerm::num));
        expected.push(PrecomputedTerm::Sup);
        assert_eq!(u.terms(), expected.as_slice());
    }

    #[test]
    fn constants_and_compound_values() {
        let u = universe("p(a, f(b)). q(X) :- p(X, Y), Y = (c, -3).", 1);
        for t in [
            PrecomputedTerm::constant("a"),
            PrecomputedTerm::function(Symbol::constant("f"), vec![PrecomputedTerm::constant("b")]),
            PrecomputedTerm::Tuple(vec![
                PrecomputedTerm::constant("c"),
                PrecomputedTerm::num(-3),
            ]),
            PrecomputedTerm::num(-3),
            PrecomputedTerm::num(0),
            PrecomputedTerm::constant("b"),
        ] {
            assert!(u.contains(&t), "{t}");
        }
    }

    #[test]
    fn function_closure() {
        let p = expand_program(&parse_program("p(a). q(f(X)) :- p(X).").unwrap()).unwrap();
        let cfg = UniverseConfig {
            fn_depth: 2,
            ..UniverseConfig::default()
        };
        let u = Universe::for_program(&p, &cfg).unwrap();
        let fa =
            PrecomputedTerm::function(Symbol::constant("f"), vec![PrecomputedTerm::constant("a")]);
        let ffa = PrecomputedTerm::function(Symbol::constant("f"), vec![fa.clone()]);
        assert!(u.contains(&fa));
        assert!(u.contains(&ffa));
    }

    #[test]
    fn explicit_range_and_limit() {
        let p = expand_program(&parse_program("p(1..3).").unwrap()).unwrap();
        let cfg = UniverseConfig {
            int_range: Some((BigInt::from(-2), BigInt::from(2))),
            ..UniverseConfig::default()
        };
        assert_eq!(Universe::for_program(&p, &cfg).unwrap().len(), 7);
        let small = UniverseConfig {
            limit: 4,
            ..UniverseConfig::default()
        };
        assert!(Universe::for_program(&p, &small).is_err());
    }
}
