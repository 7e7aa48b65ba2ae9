//! Strong-equivalence-preserving rewrites of aggregate translations:
//! dropping antecedents or consequents for closed justification, splitting
//! equalities, and the counting expansions.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::ast::{AggregateAtom, AggregateFunction, PrecomputedTerm, Rel};
use crate::formula::Formula;
use crate::grounder::aggregate::{
    subset_formula_shaped, AggregateError, GroundAggregate, Guard, Shape,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplifyError {
    #[error("rewrite does not apply: {0}")]
    Refused(String),
    #[error(transparent)]
    Aggregate(#[from] AggregateError),
}

/// Closure of the set of justifying subsets under adding (`upward`) or
/// removing (`downward`) index entries. `false` means "not established".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Profile {
    pub upward: bool,
    pub downward: bool,
}

/// Profile of `α{...} ≺ s` read off the name and relation; the bound side is
/// folded into `≺` by taking the converse for `s ≺ α{...}`.
pub fn fast_profile(function: AggregateFunction, rel: Rel) -> Option<Profile> {
    use AggregateFunction::*;
    let grows = match function {
        Count | SumPlus | Max => true,
        Min => false,
        Sum => return None,
    };
    let up = match rel {
        Rel::Gt | Rel::Ge => grows,
        Rel::Lt | Rel::Le => !grows,
        Rel::Eq | Rel::Ne => return None,
    };
    Some(Profile {
        upward: up,
        downward: !up,
    })
}

/// The same table as literally stated for `α{...} ≺ s`, with "monotone" read
/// as upward closed. Kept only to report where it disagrees with
/// [`fast_profile`].
pub fn stated_profile(function: AggregateFunction, rel: Rel) -> Option<Profile> {
    use AggregateFunction::*;
    let flip = match function {
        Count | SumPlus | Max => false,
        Min => true,
        Sum => return None,
    };
    let monotone = match rel {
        Rel::Lt | Rel::Le => true,
        Rel::Gt | Rel::Ge => false,
        Rel::Eq | Rel::Ne => return None,
    } != flip;
    Some(Profile {
        upward: monotone,
        downward: !monotone,
    })
}

/// Profile by checking every subset of the entries; `None` over budget.
pub fn classify_exhaustive(agg: &GroundAggregate, budget: usize) -> Option<Profile> {
    let n = agg.entries.len();
    if n > budget.min(20) {
        return None;
    }
    let justified: Vec<bool> = (0..1u64 << n).map(|m| agg.justifies(m)).collect();
    let mut p = Profile {
        upward: true,
        downward: true,
    };
    for mask in 0..1u64 << n {
        for k in 0..n {
            let bit = 1u64 << k;
            if mask & bit != 0 {
                continue;
            }
            let (small, big) = (justified[mask as usize], justified[(mask | bit) as usize]);
            if small && !big {
                p.upward = false;
            }
            if big && !small {
                p.downward = false;
            }
        }
    }
    Some(p)
}

pub fn classify(agg: &GroundAggregate, budget: usize) -> Option<Profile> {
    if let [g] = agg.guards.as_slice() {
        if let Some(p) = fast_profile(agg.function, g.rel) {
            return Some(p);
        }
    }
    classify_exhaustive(agg, budget)
}

/// The translation with the antecedents dropped; `None` unless upward closed.
pub fn simplify_monotone(
    agg: &GroundAggregate,
    profile: Profile,
    budget: usize,
) -> Result<Option<Formula>, AggregateError> {
    if !profile.upward {
        return Ok(None);
    }
    subset_formula_shaped(agg, Shape::NoAntecedent, budget).map(Some)
}

/// The translation with the consequents replaced by `⊥`; `None` unless
/// downward closed.
pub fn simplify_antimonotone(
    agg: &GroundAggregate,
    profile: Profile,
    budget: usize,
) -> Result<Option<Formula>, AggregateError> {
    if !profile.downward {
        return Ok(None);
    }
    subset_formula_shaped(agg, Shape::NoConsequent, budget).map(Some)
}

/// `α{...} = s` into `α{...} <= s` and `α{...} >= s`; `s` must be interval-free.
pub fn eliminate_equality(
    e: &AggregateAtom,
) -> Result<(AggregateAtom, AggregateAtom), SimplifyError> {
    let guards = e.guards();
    let [(Rel::Eq, s)] = guards.as_slice() else {
        return Err(SimplifyError::Refused(format!(
            "{e} does not have a single `=` bound"
        )));
    };
    if !crate::ast::is_interval_free(s) {
        return Err(SimplifyError::Refused(format!(
            "bound {s} of {e} contains an interval"
        )));
    }
    let with = |rel: Rel| AggregateAtom {
        function: e.function,
        elements: e.elements.clone(),
        left: None,
        right: Some((rel, (*s).clone())),
    };
    Ok((with(Rel::Le), with(Rel::Ge)))
}

fn split_equality(agg: &GroundAggregate) -> Option<(GroundAggregate, GroundAggregate)> {
    match agg.guards.as_slice() {
        [g] if g.rel == Rel::Eq && g.interval_free => {
            let with = |rel| agg.with_guards(vec![Guard { rel, ..g.clone() }]);
            Some((with(Rel::Le), with(Rel::Ge)))
        }
        _ => None,
    }
}

/// Calls `visit` with every `k`-subset of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Conjunctions of conditions over the minimal `Δ` with `|[Δ]| = m`: one
/// entry from each of `m` distinct tuple groups. Larger `Δ` are absorbed.
fn minimal_deltas(
    agg: &GroundAggregate,
    m: usize,
    cap: usize,
) -> Result<Vec<Formula>, AggregateError> {
    let groups = agg.tuple_groups();
    let mut out = Vec::new();
    let mut over = false;
    combinations(groups.len(), m, |chosen| {
        let mut partial: Vec<Vec<Formula>> = vec![Vec::new()];
        for &g in chosen {
            let members = &groups[g].1;
            if partial.len() * members.len() + out.len() > cap {
                over = true;
                return false;
            }
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    members.iter().map(move |&k| {
                        let mut p = p.clone();
                        p.push(agg.entries[k].condition.clone());
                        p
                    })
                })
                .collect();
        }
        out.extend(partial.into_iter().map(Formula::and));
        true
    });
    if over {
        return Err(AggregateError::Expansion {
            atom: agg.label.clone(),
            cap,
        });
    }
    Ok(out)
}

fn expansion_cap(budget: usize) -> usize {
    1usize << budget.min(24)
}

/// Disjunction over `Δ` with `|[Δ]| = m` of the conjunction of conditions.
fn at_least(agg: &GroundAggregate, m: usize, budget: usize) -> Result<Formula, AggregateError> {
    Ok(Formula::or(minimal_deltas(agg, m, expansion_cap(budget))?))
}

/// Conjunction over `Δ` with `|[Δ]| = m + 1` of the negated conjunction.
fn at_most(agg: &GroundAggregate, m: usize, budget: usize) -> Result<Formula, AggregateError> {
    Ok(Formula::and(
        minimal_deltas(agg, m + 1, expansion_cap(budget))?
            .into_iter()
            .map(Formula::not),
    ))
}

fn single_bound(agg: &GroundAggregate, rel: Rel) -> Result<BigInt, SimplifyError> {
    if agg.function != AggregateFunction::Count {
        return Err(SimplifyError::Refused(format!(
            "{} is not a count",
            agg.label
        )));
    }
    if !agg.terms_interval_free {
        return Err(SimplifyError::Refused(format!(
            "element terms of {} contain an interval",
            agg.label
        )));
    }
    match agg.guards.as_slice() {
        [g] if g.rel == rel && g.values.len() == 1 => match g.values.first() {
            Some(PrecomputedTerm::Numeral(m)) => Ok(m.clone()),
            _ => Err(SimplifyError::Refused(format!(
                "bound of {} is not a numeral",
                agg.label
            ))),
        },
        _ => Err(SimplifyError::Refused(format!(
            "{} does not have a single `{rel}` bound",
            agg.label
        ))),
    }
}

/// `count{...} >= m` as a disjunction over the sets of `m` distinct tuples.
/// Refused for intervals in element terms and for `m < 0`, where `τE` is
/// `⊤` but no `Δ` has `|[Δ]| = m`.
pub fn expand_count_geq(agg: &GroundAggregate, budget: usize) -> Result<Formula, SimplifyError> {
    let m = single_bound(agg, Rel::Ge)?;
    if m.is_negative() {
        return Err(SimplifyError::Refused(format!(
            "negative bound in {}",
            agg.label
        )));
    }
    match m.to_usize() {
        Some(m) if m <= agg.entries.len() => Ok(at_least(agg, m, budget)?),
        _ => Ok(Formula::bottom()),
    }
}

/// `count{...} <= m` as a conjunction over the sets of `m + 1` distinct tuples.
/// Refused for intervals in element terms and for `m < -1`.
pub fn expand_count_leq(agg: &GroundAggregate, budget: usize) -> Result<Formula, SimplifyError> {
    let m = single_bound(agg, Rel::Le)?;
    if m < BigInt::from(-1) {
        return Err(SimplifyError::Refused(format!(
            "bound below -1 in {}",
            agg.label
        )));
    }
    if m == BigInt::from(-1) {
        return Ok(Formula::bottom());
    }
    match m.to_usize() {
        Some(m) if m < agg.entries.len() => Ok(at_most(agg, m, budget)?),
        _ => Ok(Formula::top()),
    }
}

/// The disjunction over every `Δ ⊆ A` with `|[Δ]| = m`, without checking
/// any precondition; exponential in `|A|`.
pub fn count_geq_unchecked(agg: &GroundAggregate, m: usize) -> Formula {
    Formula::or(subsets_of_size(agg, m).map(Formula::and))
}

/// The conjunction over every `Δ ⊆ A` with `|[Δ]| = m + 1` of the negated
/// conjunction, without checking any precondition.
pub fn count_leq_unchecked(agg: &GroundAggregate, m: usize) -> Formula {
    Formula::and(subsets_of_size(agg, m + 1).map(|c| Formula::not(Formula::and(c))))
}

fn subsets_of_size(agg: &GroundAggregate, m: usize) -> impl Iterator<Item = Vec<Formula>> + '_ {
    assert!(agg.entries.len() < 64);
    (0..1u64 << agg.entries.len()).filter_map(move |mask| {
        let delta: Vec<_> = agg.selected(mask).collect();
        let size: std::collections::BTreeSet<_> =
            delta.iter().flat_map(|e| e.tuples.iter()).collect();
        (size.len() == m).then(|| delta.iter().map(|e| e.condition.clone()).collect())
    })
}

/// For a count with interval-free element terms, justification depends only
/// on the number `v` of distinct tuples, which takes every value in
/// `0..=groups`. A convex set of justifying values reduces to the counting
/// expansions.
fn counting(agg: &GroundAggregate, budget: usize) -> Result<Option<Formula>, AggregateError> {
    let groups = agg.tuple_groups().len();
    let justified: Vec<usize> = (0..=groups)
        .filter(|&v| agg.justified_by_value(&PrecomputedTerm::num(v)))
        .collect();
    let (Some(&lo), Some(&hi)) = (justified.first(), justified.last()) else {
        // no subset justifies: the translation is classically unsatisfiable
        return Ok(Some(Formula::bottom()));
    };
    if hi - lo + 1 != justified.len() {
        return Ok(None);
    }
    let mut parts = Vec::new();
    if lo > 0 {
        parts.push(at_least(agg, lo, budget)?);
    }
    if hi < groups {
        parts.push(at_most(agg, hi, budget)?);
    }
    Ok(Some(Formula::and(parts)))
}

/// `min` and `max`: the value of a subset is the extremum of per-entry
/// extrema, so justification depends on one value. When the justifying
/// values are closed towards `sup` (max) or `inf` (min), the justifying
/// subsets are upward closed and the unique maximal non-justifying subset
/// leaves a disjunction; closed the other way, the minimal non-justifying
/// subsets are singletons and leave a conjunction of negations.
fn extremum(agg: &GroundAggregate) -> Option<Formula> {
    let max = match agg.function {
        AggregateFunction::Max => true,
        AggregateFunction::Min => false,
        _ => return None,
    };
    let outer = |a: &PrecomputedTerm, b: &PrecomputedTerm| if max { a >= b } else { a <= b };
    let neutral = if max {
        PrecomputedTerm::Inf
    } else {
        PrecomputedTerm::Sup
    };
    let weights: Vec<PrecomputedTerm> = agg
        .entries
        .iter()
        .map(|e| {
            e.tuples
                .iter()
                .filter_map(|t| t.first())
                .fold(
                    neutral.clone(),
                    |w, v| if outer(v, &w) { v.clone() } else { w },
                )
        })
        .collect();
    let mut values: Vec<PrecomputedTerm> = weights.clone();
    values.push(neutral.clone());
    values.sort();
    values.dedup();
    if !max {
        values.reverse();
    }
    // `values` runs from the neutral value outwards
    let justified: Vec<bool> = values.iter().map(|v| agg.justified_by_value(v)).collect();
    let is = |v: &PrecomputedTerm| justified[values.iter().position(|x| x == v).unwrap()];
    let outward = justified.windows(2).all(|w| !w[0] || w[1]);
    let inward = justified.windows(2).all(|w| w[0] || !w[1]);
    if outward {
        if justified[0] {
            return Some(Formula::top());
        }
        return Some(Formula::or(
            agg.entries
                .iter()
                .zip(&weights)
                .filter(|(_, w)| is(w))
                .map(|(e, _)| e.condition.clone()),
        ));
    }
    if inward {
        if !justified[0] {
            return Some(Formula::bottom());
        }
        return Some(Formula::and(
            agg.entries
                .iter()
                .zip(&weights)
                .filter(|(_, w)| !is(w))
                .map(|(e, _)| Formula::not(e.condition.clone())),
        ));
    }
    None
}

/// Translation of a closed aggregate atom using whichever rewrite applies,
/// falling back to plain subset enumeration.
pub fn translate(agg: &GroundAggregate, budget: usize) -> Result<Formula, AggregateError> {
    if agg.function == AggregateFunction::Count && agg.terms_interval_free {
        if let Some(f) = counting(agg, budget)? {
            return Ok(f);
        }
    }
    if let Some(f) = extremum(agg) {
        return Ok(f);
    }
    if agg.guards.len() > 1 {
        // justification is the conjunction of the bounds, so the
        // non-justifying subsets are the union of those for each bound
        let mut parts = Vec::new();
        for g in &agg.guards {
            parts.push(translate(&agg.with_guards(vec![g.clone()]), budget)?);
        }
        return Ok(Formula::and(parts));
    }
    if let Some((le, ge)) = split_equality(agg) {
        return Ok(Formula::and([
            translate(&le, budget)?,
            translate(&ge, budget)?,
        ]));
    }
    let shape = match classify(agg, budget) {
        Some(p) if p.upward => Shape::NoAntecedent,
        Some(p) if p.downward => Shape::NoConsequent,
        _ => Shape::Full,
    };
    subset_formula_shaped(agg, shape, budget)
}
