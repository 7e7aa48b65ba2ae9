//! Expansion of head aggregates and lparse-style counting expressions into
//! core rules (disjunctive rules and choice rules only).

use thiserror::Error;

use crate::ast::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesugarError {
    #[error("literal {0} has a pool with several alternatives and has no term representation")]
    Pool(String),
    #[error("literal {0} inside a counting expression must not contain '..'")]
    Interval(String),
    #[error("counting expression {0} in a rule body needs a lower or an upper bound")]
    Unbounded(String),
}

/// `0,p(t)`, `1,p(t)` or `2,p(t)` according to the negation depth of `L`.
pub fn term_representation(lit: &SymbolicLiteral) -> Result<Vec<Term>, DesugarError> {
    let term = atom_as_term(&lit.atom).map_err(|_| DesugarError::Pool(lit.to_string()))?;
    Ok(vec![Term::num(lit.negation.depth()), term])
}

fn check_lparse_literal(lit: &SymbolicLiteral) -> Result<(), DesugarError> {
    if !lit.atom.is_interval_free() {
        return Err(DesugarError::Interval(lit.to_string()));
    }
    Ok(())
}

fn lower_bound(s: &Option<Term>) -> Option<(Term, Rel)> {
    s.clone().map(|s| (s, Rel::Le))
}

fn upper_bound(s: &Option<Term>) -> Option<(Rel, Term)> {
    s.clone().map(|s| (Rel::Le, s))
}

/// Reads a head occurrence of `s1 { L1 : Ls1; ... } s2` as the head aggregate
/// `s1 <= count{ t1 : L1 : Ls1; ... } <= s2`.
pub fn lparse_in_head(expr: &LparseExpr) -> Result<HeadAggregate, DesugarError> {
    let elements = expr
        .elements
        .iter()
        .map(|e| {
            check_lparse_literal(&e.literal)?;
            Ok(HeadAggregateElement {
                terms: term_representation(&e.literal)?,
                literal: e.literal.clone(),
                condition: e.condition.clone(),
            })
        })
        .collect::<Result<_, DesugarError>>()?;
    Ok(HeadAggregate {
        function: AggregateFunction::Count,
        elements,
        left: lower_bound(&expr.lower),
        right: upper_bound(&expr.upper),
    })
}

/// Reads a body occurrence of `s1 { L1 : Ls1; ... } s2` as the aggregate
/// atom `s1 <= count{ t1 : L1, Ls1; ... } <= s2`.
pub fn lparse_in_body(expr: &LparseExpr) -> Result<AggregateAtom, DesugarError> {
    if expr.lower.is_none() && expr.upper.is_none() {
        return Err(DesugarError::Unbounded(expr.to_string()));
    }
    let elements = expr
        .elements
        .iter()
        .map(|e| {
            check_lparse_literal(&e.literal)?;
            let mut condition = vec![BasicLiteral::Symbolic(e.literal.clone())];
            condition.extend(e.condition.iter().cloned());
            Ok(AggregateElement {
                terms: term_representation(&e.literal)?,
                condition,
            })
        })
        .collect::<Result<_, DesugarError>>()?;
    Ok(AggregateAtom {
        function: AggregateFunction::Count,
        elements,
        left: lower_bound(&expr.lower),
        right: upper_bound(&expr.upper),
    })
}

/// The constraint `<- B, not E` (when `E` has a bound) and one choice rule
/// `{Li} <- B, Ci` per positive `Li`.
pub fn expand_head_aggregate(
    head: &HeadAggregate,
    body: &[Literal],
) -> Result<Vec<CoreRule>, DesugarError> {
    let mut rules = Vec::new();
    if head.left.is_some() || head.right.is_some() {
        let elements = head
            .elements
            .iter()
            .map(|e| {
                let mut condition = vec![BasicLiteral::Symbolic(e.literal.clone())];
                condition.extend(e.condition.iter().cloned());
                AggregateElement {
                    terms: e.terms.clone(),
                    condition,
                }
            })
            .collect();
        let atom = AggregateAtom {
            function: head.function,
            elements,
            left: head.left.clone(),
            right: head.right.clone(),
        };
        let mut b = body.to_vec();
        b.push(Literal::Aggregate(AggregateLiteral {
            negation: Negation::Single,
            atom,
        }));
        rules.push(CoreRule {
            head: CoreHead::Disjunction(Vec::new()),
            body: b,
        });
    }
    for e in &head.elements {
        if e.literal.negation != Negation::None {
            continue;
        }
        let mut b = body.to_vec();
        b.extend(e.condition.iter().cloned().map(Literal::plain));
        rules.push(CoreRule {
            head: CoreHead::Choice(e.literal.atom.clone()),
            body: b,
        });
    }
    Ok(rules)
}

fn expand_body(body: &[BodyLiteral]) -> Result<Vec<Literal>, DesugarError> {
    body.iter()
        .map(|l| match l {
            BodyLiteral::Literal(l) => Ok(l.clone()),
            BodyLiteral::Lparse { negation, expr } => Ok(Literal::Aggregate(AggregateLiteral {
                negation: *negation,
                atom: lparse_in_body(expr)?,
            })),
        })
        .collect()
}

pub fn expand_rule(rule: &Rule) -> Result<Vec<CoreRule>, DesugarError> {
    let body = expand_body(&rule.body)?;
    match &rule.head {
        Head::Disjunction(h) => Ok(vec![CoreRule {
            head: CoreHead::Disjunction(h.clone()),
            body,
        }]),
        Head::Choice(a) => Ok(vec![CoreRule {
            head: CoreHead::Choice(a.clone()),
            body,
        }]),
        Head::Aggregate(h) => expand_head_aggregate(h, &body),
        Head::Lparse(e) => expand_head_aggregate(&lparse_in_head(e)?, &body),
    }
}

pub fn expand_program(program: &Program) -> Result<CoreProgram, DesugarError> {
    let mut rules = Vec::new();
    for r in &program.rules {
        rules.extend(expand_rule(r)?);
    }
    Ok(CoreProgram { rules })
}
