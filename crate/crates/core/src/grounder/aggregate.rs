//! Closed aggregate atoms over a finite universe and their translation as a
//! conjunction over the non-justifying subsets of the index set.

use thiserror::Error;

use crate::ast::{AggregateFunction, PrecomputedTerm, Rel};
use crate::formula::Formula;
use crate::termeval::{agg_finite, rel_holds, TermSet, Tuple, TupleSet};

/// Default cap on the number of index entries whose subsets are enumerated.
pub const DEFAULT_AGG_BUDGET: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AggregateError {
    #[error(
        "aggregate {atom} has {entries} index entries with satisfiable conditions; \
         the aggregate budget allows {budget} (raise --agg-budget or enable simplification)"
    )]
    Budget {
        atom: String,
        entries: usize,
        budget: usize,
    },
    #[error("expanding aggregate {atom} would produce more than {cap} subformulas")]
    Expansion { atom: String, cap: usize },
}

/// One pair `(i, r)` of the index set whose condition is not `⊥`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggEntry {
    pub element: usize,
    pub binding: Vec<PrecomputedTerm>,
    /// `[t_i r]`
    pub tuples: TupleSet,
    /// `τ∨` of the instantiated condition.
    pub condition: Formula,
}

/// Bound `α ≺ s`, satisfied when it holds for at least one `t ∈ [s]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guard {
    pub rel: Rel,
    pub values: TermSet,
    pub interval_free: bool,
}

impl Guard {
    pub fn holds(&self, value: &PrecomputedTerm) -> bool {
        self.values.iter().any(|t| rel_holds(self.rel, value, t))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundAggregate {
    pub label: String,
    pub function: AggregateFunction,
    pub guards: Vec<Guard>,
    /// Every element tuple is interval-free.
    pub terms_interval_free: bool,
    pub entries: Vec<AggEntry>,
}

impl GroundAggregate {
    pub fn value_of<'a>(
        &'a self,
        delta: impl IntoIterator<Item = &'a AggEntry>,
    ) -> PrecomputedTerm {
        let union: TupleSet = delta
            .into_iter()
            .flat_map(|e| e.tuples.iter().cloned())
            .collect::<TupleSet>();
        agg_finite(self.function, &union)
    }

    pub fn justified_by_value(&self, value: &PrecomputedTerm) -> bool {
        self.guards.iter().all(|g| g.holds(value))
    }

    /// Whether the subset `mask` (bit `k` selects entry `k`) justifies the atom.
    pub fn justifies(&self, mask: u64) -> bool {
        let v = self.value_of(self.selected(mask));
        self.justified_by_value(&v)
    }

    pub fn selected(&self, mask: u64) -> impl Iterator<Item = &AggEntry> {
        self.entries
            .iter()
            .enumerate()
            .filter(move |(k, _)| mask >> k & 1 == 1)
            .map(|(_, e)| e)
    }

    pub fn check_budget(&self, budget: usize) -> Result<(), AggregateError> {
        if self.entries.len() > budget.min(63) {
            return Err(AggregateError::Budget {
                atom: self.label.clone(),
                entries: self.entries.len(),
                budget,
            });
        }
        Ok(())
    }

    /// Same atom with a single bound.
    pub fn with_guards(&self, guards: Vec<Guard>) -> GroundAggregate {
        GroundAggregate {
            guards,
            ..self.clone()
        }
    }

    /// Distinct tuples contributed by the entries, with the entries that
    /// contribute each; requires interval-free element terms.
    pub fn tuple_groups(&self) -> Vec<(Tuple, Vec<usize>)> {
        let mut groups: std::collections::BTreeMap<Tuple, Vec<usize>> = Default::default();
        for (k, e) in self.entries.iter().enumerate() {
            for t in &e.tuples {
                groups.entry(t.clone()).or_default().push(k);
            }
        }
        groups.into_iter().collect()
    }
}

/// Which parts of each conjunct `∧Δ → ∨(A∖Δ)` are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Full,
    /// Antecedent dropped: sound when justification is upward closed.
    NoAntecedent,
    /// Consequent replaced by `⊥`: sound when justification is downward closed.
    NoConsequent,
}

/// `τE` by enumerating every subset of the entries.
pub fn subset_formula(agg: &GroundAggregate, budget: usize) -> Result<Formula, AggregateError> {
    subset_formula_shaped(agg, Shape::Full, budget)
}

pub fn subset_formula_shaped(
    agg: &GroundAggregate,
    shape: Shape,
    budget: usize,
) -> Result<Formula, AggregateError> {
    agg.check_budget(budget)?;
    let n = agg.entries.len();
    let mut conjuncts = Vec::new();
    for mask in 0..1u64 << n {
        if agg.justifies(mask) {
            continue;
        }
        let mut inside = Vec::new();
        let mut outside = Vec::new();
        for (k, e) in agg.entries.iter().enumerate() {
            if mask >> k & 1 == 1 {
                inside.push(e.condition.clone());
            } else {
                outside.push(e.condition.clone());
            }
        }
        let antecedent = match shape {
            Shape::NoAntecedent => Formula::top(),
            _ => Formula::and(inside),
        };
        let consequent = match shape {
            Shape::NoConsequent => Formula::bottom(),
            _ => Formula::or(outside),
        };
        conjuncts.push(Formula::implies(antecedent, consequent));
    }
    Ok(Formula::and(conjuncts))
}
