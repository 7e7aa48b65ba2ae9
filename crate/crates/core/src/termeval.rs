//! Denotations of ground terms and pools, and the aggregate functions.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::ast::{compare_precomputed, AggregateFunction, BinOp, PrecomputedTerm, Rel, Term};

pub type TermSet = BTreeSet<PrecomputedTerm>;
pub type Tuple = Vec<PrecomputedTerm>;
pub type TupleSet = BTreeSet<Tuple>;

/// Upper limit on the number of numerals a single interval may denote.
pub const MAX_INTERVAL_LEN: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable {0} in a term that should be ground")]
    NotGround(String),
    #[error("interval {lo}..{hi} denotes more than {MAX_INTERVAL_LEN} numerals")]
    IntervalTooLarge { lo: BigInt, hi: BigInt },
}

/// The set `[t]` of precomputed terms denoted by a ground term.
pub fn eval_term(t: &Term) -> Result<TermSet, EvalError> {
    let mut out = TermSet::new();
    match t {
        Term::Numeral(n) => {
            out.insert(PrecomputedTerm::Numeral(n.clone()));
        }
        Term::Symbol(s) => {
            out.insert(PrecomputedTerm::Symbol(s.clone()));
        }
        Term::Inf => {
            out.insert(PrecomputedTerm::Inf);
        }
        Term::Sup => {
            out.insert(PrecomputedTerm::Sup);
        }
        Term::Variable(v) => return Err(EvalError::NotGround(v.clone())),
        Term::Function(f, args) => {
            for args in product(args)? {
                out.insert(PrecomputedTerm::function(f.clone(), args));
            }
        }
        Term::Tuple(args) => {
            for args in product(args)? {
                out.insert(PrecomputedTerm::Tuple(args));
            }
        }
        Term::BinOp(op, l, r) => {
            let ls = numerals(&eval_term(l)?);
            let rs = numerals(&eval_term(r)?);
            match op {
                BinOp::Interval => {
                    // the union of [n1, n2] over all pairs is [min n1, max n2]
                    if let (Some(lo), Some(hi)) = (ls.first(), rs.last()) {
                        if lo <= hi {
                            let len = (hi - lo).to_u64();
                            if len.is_none_or(|len| len >= MAX_INTERVAL_LEN) {
                                return Err(EvalError::IntervalTooLarge {
                                    lo: lo.clone(),
                                    hi: hi.clone(),
                                });
                            }
                            let mut m = lo.clone();
                            while &m <= hi {
                                out.insert(PrecomputedTerm::Numeral(m.clone()));
                                m += 1;
                            }
                        }
                    }
                }
                _ => {
                    for a in &ls {
                        for b in &rs {
                            let v = match op {
                                BinOp::Add => a + b,
                                BinOp::Sub => a - b,
                                BinOp::Mul => a * b,
                                BinOp::Div if b.is_zero() => continue,
                                BinOp::Div => a.div_floor(b),
                                BinOp::Interval => unreachable!(),
                            };
                            out.insert(PrecomputedTerm::Numeral(v));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn numerals(set: &TermSet) -> Vec<BigInt> {
    // numerals are contiguous and sorted in the term order
    set.iter().filter_map(|t| t.as_numeral().cloned()).collect()
}

fn product(ts: &[Term]) -> Result<Vec<Tuple>, EvalError> {
    let mut acc: Vec<Tuple> = vec![Vec::with_capacity(ts.len())];
    for t in ts {
        let vals = eval_term(t)?;
        if vals.is_empty() {
            return Ok(Vec::new());
        }
        let mut next = Vec::with_capacity(acc.len() * vals.len());
        for prefix in &acc {
            for v in &vals {
                let mut tuple = prefix.clone();
                tuple.push(v.clone());
                next.push(tuple);
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// The set `[t]` of precomputed tuples denoted by a ground tuple of terms.
pub fn eval_tuple(ts: &[Term]) -> Result<TupleSet, EvalError> {
    Ok(product(ts)?.into_iter().collect())
}

/// The set `[P]` of a ground pool: the union over its alternatives.
pub fn eval_pool(alternatives: &[Vec<Term>]) -> Result<TupleSet, EvalError> {
    let mut out = TupleSet::new();
    for alt in alternatives {
        out.extend(product(alt)?);
    }
    Ok(out)
}

/// The integer `n` if the first member of the tuple is the numeral `n`,
/// otherwise 0.
pub fn weight(t: &[PrecomputedTerm]) -> BigInt {
    match t.first() {
        Some(PrecomputedTerm::Numeral(n)) => n.clone(),
        _ => BigInt::zero(),
    }
}

/// The set an aggregate function is applied to.
///
/// Only finite sets arise when grounding over a finite universe; the
/// infinite case keeps the definition complete. For an infinite set,
/// `nonzero`/`positive` hold the tuples with non-zero/positive weight when
/// there are finitely many of them, and `None` otherwise.
#[derive(Clone, Copy, Debug)]
pub enum TupleExtent<'a> {
    Finite(&'a TupleSet),
    Infinite {
        nonzero: Option<&'a TupleSet>,
        positive: Option<&'a TupleSet>,
    },
}

pub fn agg_apply(function: AggregateFunction, extent: TupleExtent<'_>) -> PrecomputedTerm {
    use AggregateFunction::*;
    match extent {
        TupleExtent::Finite(set) => match function {
            Count => PrecomputedTerm::num(set.len()),
            Sum => PrecomputedTerm::Numeral(set.iter().map(|t| weight(t)).sum()),
            SumPlus => PrecomputedTerm::Numeral(
                set.iter()
                    .map(|t| weight(t))
                    .filter(|w| w.is_positive())
                    .sum(),
            ),
            Min => set
                .iter()
                .filter_map(|t| t.first())
                .min_by(|a, b| compare_precomputed(a, b))
                .cloned()
                .unwrap_or(PrecomputedTerm::Sup),
            Max => set
                .iter()
                .filter_map(|t| t.first())
                .max_by(|a, b| compare_precomputed(a, b))
                .cloned()
                .unwrap_or(PrecomputedTerm::Inf),
        },
        TupleExtent::Infinite { nonzero, positive } => match function {
            Count => PrecomputedTerm::Sup,
            Sum => match nonzero {
                Some(set) => PrecomputedTerm::Numeral(set.iter().map(|t| weight(t)).sum()),
                None => PrecomputedTerm::num(0),
            },
            SumPlus => match positive {
                Some(set) => PrecomputedTerm::Numeral(
                    set.iter()
                        .map(|t| weight(t))
                        .filter(|w| w.is_positive())
                        .sum(),
                ),
                None => PrecomputedTerm::Sup,
            },
            Min => PrecomputedTerm::Inf,
            Max => PrecomputedTerm::Sup,
        },
    }
}

/// Applies `function` to a finite set.
pub fn agg_finite(function: AggregateFunction, set: &TupleSet) -> PrecomputedTerm {
    agg_apply(function, TupleExtent::Finite(set))
}

pub fn rel_holds(rel: Rel, a: &PrecomputedTerm, b: &PrecomputedTerm) -> bool {
    use std::cmp::Ordering::*;
    let ord = compare_precomputed(a, b);
    match rel {
        Rel::Eq => ord == Equal,
        Rel::Ne => ord != Equal,
        Rel::Lt => ord == Less,
        Rel::Gt => ord == Greater,
        Rel::Le => ord != Greater,
        Rel::Ge => ord != Less,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::Symbol;
    use PrecomputedTerm as P;

    fn iv(a: Term, b: Term) -> Term {
        Term::binop(BinOp::Interval, a, b)
    }

    fn nums(ns: &[i64]) -> TermSet {
        ns.iter().map(|&n| P::num(n)).collect()
    }

    #[test]
    fn interval_times_two() {
        let t = Term::binop(BinOp::Mul, iv(Term::num(1), Term::num(3)), Term::num(2));
        assert_eq!(eval_term(&t).unwrap(), nums(&[2, 4, 6]));
    }

    #[test]
    fn empty_denotations() {
        assert!(eval_term(&iv(Term::num(1), Term::num(0)))
            .unwrap()
            .is_empty());
        let div = Term::binop(BinOp::Div, Term::num(1), Term::num(0));
        assert!(eval_term(&div).unwrap().is_empty());
        let add = Term::binop(BinOp::Add, Term::num(1), Term::constant("a"));
        assert!(eval_term(&add).unwrap().is_empty());
    }

    #[test]
    fn floor_division() {
        let t = Term::binop(BinOp::Div, Term::num(-7), Term::num(2));
        assert_eq!(eval_term(&t).unwrap(), nums(&[-4]));
        let t = Term::binop(BinOp::Div, Term::num(7), Term::num(-2));
        assert_eq!(eval_term(&t).unwrap(), nums(&[-4]));
    }

    #[test]
    fn function_pointwise() {
        let f = Symbol::constant("f");
        let t = Term::function(f.clone(), vec![iv(Term::num(1), Term::num(2))]);
        let expected: TermSet = [
            P::function(f.clone(), vec![P::num(1)]),
            P::function(f, vec![P::num(2)]),
        ]
        .into_iter()
        .collect();
        assert_eq!(eval_term(&t).unwrap(), expected);
    }

    #[test]
    fn interval_with_set_endpoints() {
        // [(1..2)..(4..5)] = {1..5}
        let t = iv(
            iv(Term::num(1), Term::num(2)),
            iv(Term::num(4), Term::num(5)),
        );
        assert_eq!(eval_term(&t).unwrap(), nums(&[1, 2, 3, 4, 5]));
    }

    #[test]
    fn huge_interval_is_refused() {
        let t = iv(Term::num(0), Term::num(1i64 << 40));
        assert!(matches!(
            eval_term(&t),
            Err(EvalError::IntervalTooLarge { .. })
        ));
    }

    #[test]
    fn pools() {
        let square = eval_pool(&[vec![
            iv(Term::num(1), Term::num(2)),
            iv(Term::num(1), Term::num(2)),
        ]])
        .unwrap();
        let expected: TupleSet = [(1, 1), (1, 2), (2, 1), (2, 2)]
            .into_iter()
            .map(|(i, j)| vec![P::num(i), P::num(j)])
            .collect();
        assert_eq!(square, expected);

        let facts = eval_pool(&[
            vec![Term::constant("a"), Term::num(5)],
            vec![Term::constant("b"), Term::num(10)],
            vec![Term::constant("c"), Term::num(12)],
        ])
        .unwrap();
        assert_eq!(facts.len(), 3);

        let pre = vec![Term::constant("a"), Term::num(1)];
        let one: TupleSet = [vec![P::constant("a"), P::num(1)]].into_iter().collect();
        assert_eq!(eval_pool(&[pre]).unwrap(), one);

        // the empty tuple denotes the singleton of the empty tuple
        assert_eq!(eval_pool(&[vec![]]).unwrap().len(), 1);
    }

    #[test]
    fn aggregates() {
        let empty = TupleSet::new();
        assert_eq!(agg_finite(AggregateFunction::Min, &empty), P::Sup);
        assert_eq!(agg_finite(AggregateFunction::Max, &empty), P::Inf);

        let mixed: TupleSet = [
            vec![P::num(2), P::constant("a")],
            vec![P::num(3)],
            vec![P::constant("a"), P::num(5)],
        ]
        .into_iter()
        .collect();
        assert_eq!(agg_finite(AggregateFunction::Sum, &mixed), P::num(5));

        let ab: TupleSet = [vec![P::constant("a")], vec![P::constant("b")]]
            .into_iter()
            .collect();
        assert_eq!(agg_finite(AggregateFunction::Count, &ab), P::num(2));
        assert_eq!(agg_finite(AggregateFunction::Max, &ab), P::constant("b"));
        assert_eq!(agg_finite(AggregateFunction::Min, &ab), P::constant("a"));

        let signed: TupleSet = [vec![P::num(-4)], vec![P::num(3)], vec![P::num(2)], vec![]]
            .into_iter()
            .collect();
        assert_eq!(agg_finite(AggregateFunction::Sum, &signed), P::num(1));
        assert_eq!(agg_finite(AggregateFunction::SumPlus, &signed), P::num(5));
    }

    #[test]
    fn infinite_clauses() {
        let inf = TupleExtent::Infinite {
            nonzero: None,
            positive: None,
        };
        assert_eq!(agg_apply(AggregateFunction::Count, inf), P::Sup);
        assert_eq!(agg_apply(AggregateFunction::Sum, inf), P::num(0));
        assert_eq!(agg_apply(AggregateFunction::SumPlus, inf), P::Sup);
        assert_eq!(agg_apply(AggregateFunction::Min, inf), P::Inf);
        assert_eq!(agg_apply(AggregateFunction::Max, inf), P::Sup);

        let few: TupleSet = [vec![P::num(4)], vec![P::num(-1)]].into_iter().collect();
        let finite_weights = TupleExtent::Infinite {
            nonzero: Some(&few),
            positive: Some(&few),
        };
        assert_eq!(agg_apply(AggregateFunction::Sum, finite_weights), P::num(3));
        assert_eq!(
            agg_apply(AggregateFunction::SumPlus, finite_weights),
            P::num(4)
        );
    }

    #[test]
    fn relations() {
        assert!(rel_holds(Rel::Le, &P::num(3), &P::num(3)));
        assert!(rel_holds(Rel::Lt, &P::Inf, &P::Sup));
        assert!(rel_holds(Rel::Ne, &P::constant("a"), &P::constant("b")));
        assert!(!rel_holds(Rel::Gt, &P::num(10), &P::constant("a")));
    }
}
