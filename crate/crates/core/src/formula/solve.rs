//! Stable-model enumeration.
//!
//! The formula set is first reduced by rewrites that keep its stable models:
//! top-level conjunctions are split, atoms asserted as facts are replaced by
//! `⊤` elsewhere, and atoms that occur in no consequent are replaced by `⊥`
//! (no stable model contains them). Classical models of the rest are then
//! enumerated by DPLL over a Tseitin encoding, and each model `I` is kept iff
//! no proper subset of `I` satisfies the reduct w.r.t. `I`.

use std::collections::{BTreeSet, HashMap};

use super::sat::{Lit, OutOfBudget, Solver};
use super::{satisfies, BudgetError, Formula, GroundAtom, Interpretation};

#[derive(Debug, Clone)]
pub struct SolveConfig {
    /// Upper bound on search decisions, summed over all SAT calls.
    pub search_budget: u64,
    pub max_models: Option<usize>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            search_budget: 1 << 22,
            max_models: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    /// Sorted stable models.
    pub models: Vec<Interpretation>,
    /// False when the search stopped at `max_models`.
    pub complete: bool,
}

fn split_into(f: Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::And(v) => v.into_iter().for_each(|g| split_into(g, out)),
        Formula::Implies(a, b) if matches!(*b, Formula::And(_)) => {
            let Formula::And(bs) = *b else { unreachable!() };
            for g in bs {
                split_into(Formula::implies((*a).clone(), g), out);
            }
        }
        f => out.push(f),
    }
}

fn split(fs: impl IntoIterator<Item = Formula>) -> Vec<Formula> {
    let mut out = Vec::new();
    for f in fs {
        split_into(f, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

/// Facts and remaining formulas, or `None` when `⊥` was derived.
fn reduce(formulas: Vec<Formula>) -> Option<(Interpretation, Vec<Formula>)> {
    let mut work = split(formulas);
    let mut facts = Interpretation::new();
    loop {
        if work.iter().any(Formula::is_bottom) {
            return None;
        }
        let mut new_facts = Interpretation::new();
        work.retain(|f| match f {
            Formula::Atom(a) => {
                new_facts.insert((**a).clone());
                false
            }
            _ => true,
        });
        if !new_facts.is_empty() {
            work = split(
                work.iter()
                    .map(|f| f.substitute(&|a| new_facts.contains(a).then_some(true))),
            );
            facts.extend(new_facts);
            continue;
        }
        let mut heads = BTreeSet::new();
        let mut atoms = BTreeSet::new();
        for f in &work {
            f.collect_heads(&mut heads);
            f.collect_atoms(&mut atoms);
        }
        if atoms.len() == heads.len() {
            return Some((facts, work));
        }
        work = split(
            work.iter()
                .map(|f| f.substitute(&|a| (!heads.contains(a)).then_some(false))),
        );
    }
}

struct Encoder<'a> {
    solver: Solver,
    atoms: HashMap<&'a GroundAtom, u32>,
    atom_order: Vec<(&'a GroundAtom, u32)>,
    gates: HashMap<&'a Formula, Lit>,
    truth: Option<Lit>,
}

impl<'a> Encoder<'a> {
    fn new(atoms: &'a BTreeSet<GroundAtom>) -> Self {
        let mut solver = Solver::new();
        let mut map = HashMap::new();
        let mut order = Vec::new();
        for a in atoms {
            let v = solver.new_var();
            map.insert(a, v);
            order.push((a, v));
        }
        Encoder {
            solver,
            atoms: map,
            atom_order: order,
            gates: HashMap::new(),
            truth: None,
        }
    }

    fn truth(&mut self) -> Lit {
        *self.truth.get_or_insert_with(|| {
            let v = self.solver.new_var();
            self.solver.add_clause([Lit::pos(v)]);
            Lit::pos(v)
        })
    }

    fn lit(&mut self, f: &'a Formula) -> Lit {
        if let Formula::Atom(a) = f {
            return Lit::pos(self.atoms[&**a]);
        }
        if f.is_top() {
            return self.truth();
        }
        if f.is_bottom() {
            return !self.truth();
        }
        if let Some(&l) = self.gates.get(f) {
            return l;
        }
        let g = Lit::pos(self.solver.new_var());
        match f {
            Formula::And(v) => {
                let ls: Vec<Lit> = v.iter().map(|h| self.lit(h)).collect();
                for &l in &ls {
                    self.solver.add_clause([!g, l]);
                }
                self.solver
                    .add_clause(std::iter::once(g).chain(ls.iter().map(|&l| !l)));
            }
            Formula::Or(v) => {
                let ls: Vec<Lit> = v.iter().map(|h| self.lit(h)).collect();
                for &l in &ls {
                    self.solver.add_clause([g, !l]);
                }
                self.solver
                    .add_clause(std::iter::once(!g).chain(ls.iter().copied()));
            }
            Formula::Implies(a, b) => {
                let (la, lb) = (self.lit(a), self.lit(b));
                self.solver.add_clause([!g, !la, lb]);
                self.solver.add_clause([g, la]);
                self.solver.add_clause([g, !lb]);
            }
            Formula::Atom(_) => unreachable!(),
        }
        self.gates.insert(f, g);
        g
    }

    fn assert(&mut self, f: &'a Formula) {
        match f {
            Formula::And(v) => v.iter().for_each(|g| self.assert(g)),
            Formula::Or(v) => {
                let ls: Vec<Lit> = v.iter().map(|g| self.lit(g)).collect();
                self.solver.add_clause(ls);
            }
            Formula::Implies(a, b) => {
                let (la, lb) = (self.lit(a), self.lit(b));
                self.solver.add_clause([!la, lb]);
            }
            Formula::Atom(_) => {
                let l = self.lit(f);
                self.solver.add_clause([l]);
            }
        }
    }

    fn order(&self) -> Vec<u32> {
        self.atom_order.iter().map(|&(_, v)| v).collect()
    }
}

/// The reduct `F^I` with folding; atoms outside `I` disappear.
fn folded_reduct(f: &Formula, i: &Interpretation) -> Formula {
    match f {
        Formula::Atom(a) if i.contains(&**a) => f.clone(),
        Formula::Atom(_) => Formula::bottom(),
        Formula::And(v) => Formula::and(v.iter().map(|g| folded_reduct(g, i))),
        Formula::Or(v) => Formula::or(v.iter().map(|g| folded_reduct(g, i))),
        Formula::Implies(a, b) => {
            if satisfies(i, f) {
                Formula::implies(folded_reduct(a, i), folded_reduct(b, i))
            } else {
                Formula::bottom()
            }
        }
    }
}

/// Whether some `J ⊊ I` satisfies every reduct `F^I`; `I` must satisfy `H`.
fn has_smaller_model(
    formulas: &[Formula],
    i: &Interpretation,
    budget: u64,
) -> Result<(bool, u64), OutOfBudget> {
    if i.is_empty() {
        return Ok((false, 0));
    }
    let reducts: Vec<Formula> = formulas.iter().map(|f| folded_reduct(f, i)).collect();
    let mut enc = Encoder::new(i);
    for f in &reducts {
        enc.assert(f);
    }
    let drop_one: Vec<Lit> = enc.atom_order.iter().map(|&(_, v)| Lit::neg(v)).collect();
    enc.solver.add_clause(drop_one);
    let order = enc.order();
    let mut found = false;
    enc.solver.enumerate(&order, budget, |_| {
        found = true;
        false
    })?;
    Ok((found, enc.solver.steps))
}

/// All stable models of `formulas`, sorted.
pub fn stable_models(
    formulas: impl IntoIterator<Item = Formula>,
    cfg: &SolveConfig,
) -> Result<SolveOutcome, BudgetError> {
    let budget_error = BudgetError::Search {
        budget: cfg.search_budget,
    };
    let Some((facts, rest)) = reduce(formulas.into_iter().collect()) else {
        return Ok(SolveOutcome {
            models: Vec::new(),
            complete: true,
        });
    };
    let mut atoms = BTreeSet::new();
    for f in &rest {
        f.collect_atoms(&mut atoms);
    }
    let mut enc = Encoder::new(&atoms);
    for f in &rest {
        enc.assert(f);
    }
    let order = enc.order();
    let atom_vars = enc.atom_order.clone();

    let mut models = Vec::new();
    let mut inner_steps = 0u64;
    let mut failure = None;
    let limit = cfg.max_models.unwrap_or(usize::MAX);
    let outer_budget = cfg.search_budget;
    let result = enc.solver.enumerate(&order, outer_budget, |s| {
        let candidate: Interpretation = atom_vars
            .iter()
            .filter(|&&(_, v)| s.value(v) == Some(true))
            .map(|&(a, _)| a.clone())
            .collect();
        let remaining = outer_budget.saturating_sub(s.steps + inner_steps);
        match has_smaller_model(&rest, &candidate, remaining) {
            Err(e) => {
                failure = Some(e);
                return false;
            }
            Ok((smaller, steps)) => {
                inner_steps += steps;
                if !smaller {
                    let mut model = facts.clone();
                    model.extend(candidate);
                    models.push(model);
                }
            }
        }
        models.len() < limit
    });
    let complete = match result {
        Err(OutOfBudget) => return Err(budget_error),
        Ok(complete) => complete,
    };
    if failure.is_some() {
        return Err(budget_error);
    }
    models.sort();
    Ok(SolveOutcome { models, complete })
}
