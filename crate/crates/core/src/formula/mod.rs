//! Finite propositional formulas built from set-conjunctions and
//! set-disjunctions, with satisfaction, reducts, stable models and
//! here-and-there checks.

mod sat;
mod solve;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Display, Formatter};
use std::sync::Arc;

use thiserror::Error;

use crate::ast::{PrecomputedTerm, Symbol};

pub use solve::{stable_models, SolveConfig, SolveOutcome};

/// `p(t)` or `~p(t)` over precomputed terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: Symbol,
    pub args: Vec<PrecomputedTerm>,
}

impl GroundAtom {
    pub fn new(predicate: Symbol, args: Vec<PrecomputedTerm>) -> Self {
        GroundAtom { predicate, args }
    }

    /// A nullary atom; `~p` is written with a leading `~` or `-`.
    pub fn prop(name: &str) -> Self {
        let symbol = match name.strip_prefix('-').or_else(|| name.strip_prefix('~')) {
            Some(n) => Symbol::negated(n),
            None => Symbol::constant(name),
        };
        GroundAtom::new(symbol, Vec::new())
    }

    /// The atom with the same arguments and the complementary sign.
    pub fn complement(&self) -> GroundAtom {
        GroundAtom {
            predicate: Symbol {
                negated: !self.predicate.negated,
                name: self.predicate.name.clone(),
            },
            args: self.args.clone(),
        }
    }
}

impl Display for GroundAtom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.predicate.negated {
            f.write_str("~")?;
        }
        f.write_str(&self.predicate.name)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

pub type Interpretation = BTreeSet<GroundAtom>;

/// `And`/`Or` children are kept sorted and duplicate-free, so equal sets of
/// subformulas give equal formulas. `⊤` is `And([])` and `⊥` is `Or([])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Arc<GroundAtom>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

fn canonical_set(items: impl IntoIterator<Item = Formula>) -> Vec<Formula> {
    let mut v: Vec<Formula> = items.into_iter().collect();
    v.sort();
    v.dedup();
    v
}

impl Formula {
    pub fn top() -> Formula {
        Formula::And(Vec::new())
    }

    pub fn bottom() -> Formula {
        Formula::Or(Vec::new())
    }

    pub fn atom(a: GroundAtom) -> Formula {
        Formula::Atom(Arc::new(a))
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::And(v) if v.is_empty())
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Formula::Or(v) if v.is_empty())
    }

    /// Set-conjunction without any folding.
    pub fn raw_and(items: impl IntoIterator<Item = Formula>) -> Formula {
        Formula::And(canonical_set(items))
    }

    /// Set-disjunction without any folding.
    pub fn raw_or(items: impl IntoIterator<Item = Formula>) -> Formula {
        Formula::Or(canonical_set(items))
    }

    pub fn raw_implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn raw_not(a: Formula) -> Formula {
        Formula::raw_implies(a, Formula::bottom())
    }

    /// Conjunction with `⊤` dropped, `⊥` absorbing, nested conjunctions
    /// flattened and singletons unwrapped.
    pub fn and(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::And(inner) => out.extend(inner),
                f if f.is_bottom() => return Formula::bottom(),
                f => out.push(f),
            }
        }
        let mut out = canonical_set(out);
        if out.len() == 1 {
            return out.pop().unwrap();
        }
        Formula::And(out)
    }

    /// Dual of [`Formula::and`].
    pub fn or(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::Or(inner) => out.extend(inner),
                f if f.is_top() => return Formula::top(),
                f => out.push(f),
            }
        }
        let mut out = canonical_set(out);
        if out.len() == 1 {
            return out.pop().unwrap();
        }
        Formula::Or(out)
    }

    /// `⊥ -> F` and `F -> ⊤` and `F -> F` fold to `⊤`; `⊤ -> F` folds to `F`.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        if a.is_bottom() || b.is_top() || a == b {
            Formula::top()
        } else if a.is_top() {
            b
        } else {
            Formula::raw_implies(a, b)
        }
    }

    pub fn not(a: Formula) -> Formula {
        Formula::implies(a, Formula::bottom())
    }

    /// Rebuilds the formula bottom-up with the folding constructors.
    pub fn canonical(&self) -> Formula {
        match self {
            Formula::Atom(_) => self.clone(),
            Formula::And(v) => Formula::and(v.iter().map(Formula::canonical)),
            Formula::Or(v) => Formula::or(v.iter().map(Formula::canonical)),
            Formula::Implies(a, b) => Formula::implies(a.canonical(), b.canonical()),
        }
    }

    /// Replaces atoms with `⊤`/`⊥` where `value` says so, folding on the way.
    pub fn substitute(&self, value: &impl Fn(&GroundAtom) -> Option<bool>) -> Formula {
        match self {
            Formula::Atom(a) => match value(a) {
                Some(true) => Formula::top(),
                Some(false) => Formula::bottom(),
                None => self.clone(),
            },
            Formula::And(v) => Formula::and(v.iter().map(|f| f.substitute(value))),
            Formula::Or(v) => Formula::or(v.iter().map(|f| f.substitute(value))),
            Formula::Implies(a, b) => Formula::implies(a.substitute(value), b.substitute(value)),
        }
    }

    pub fn collect_atoms(&self, out: &mut BTreeSet<GroundAtom>) {
        match self {
            Formula::Atom(a) => {
                out.insert((**a).clone());
            }
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|f| f.collect_atoms(out)),
            Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<GroundAtom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    /// Atoms that occur outside every antecedent.
    pub fn collect_heads(&self, out: &mut BTreeSet<GroundAtom>) {
        match self {
            Formula::Atom(a) => {
                out.insert((**a).clone());
            }
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|f| f.collect_heads(out)),
            Formula::Implies(_, b) => b.collect_heads(out),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::And(v) | Formula::Or(v) => 1 + v.iter().map(Formula::size).sum::<usize>(),
            Formula::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let write_set = |f: &mut Formatter<'_>, sigil: &str, v: &[Formula]| {
            write!(f, "{sigil}{{")?;
            for (i, g) in v.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{g}")?;
            }
            f.write_str("}")
        };
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            _ if self.is_top() => f.write_str("⊤"),
            _ if self.is_bottom() => f.write_str("⊥"),
            Formula::And(v) => write_set(f, "&", v),
            Formula::Or(v) => write_set(f, "|", v),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
        }
    }
}

pub fn satisfies(i: &Interpretation, f: &Formula) -> bool {
    match f {
        Formula::Atom(a) => i.contains(&**a),
        Formula::And(v) => v.iter().all(|g| satisfies(i, g)),
        Formula::Or(v) => v.iter().any(|g| satisfies(i, g)),
        Formula::Implies(a, b) => !satisfies(i, a) || satisfies(i, b),
    }
}

/// The reduct `F^I`, built without folding.
pub fn reduct(f: &Formula, i: &Interpretation) -> Formula {
    match f {
        Formula::Atom(a) if i.contains(&**a) => f.clone(),
        Formula::Atom(_) => Formula::bottom(),
        Formula::And(v) => Formula::raw_and(v.iter().map(|g| reduct(g, i))),
        Formula::Or(v) => Formula::raw_or(v.iter().map(|g| reduct(g, i))),
        Formula::Implies(a, b) => {
            if satisfies(i, f) {
                Formula::raw_implies(reduct(a, i), reduct(b, i))
            } else {
                Formula::bottom()
            }
        }
    }
}

/// Here-and-there satisfaction; requires `here ⊆ there`.
pub fn ht_satisfies(here: &Interpretation, there: &Interpretation, f: &Formula) -> bool {
    match f {
        Formula::Atom(a) => here.contains(&**a),
        Formula::And(v) => v.iter().all(|g| ht_satisfies(here, there, g)),
        Formula::Or(v) => v.iter().any(|g| ht_satisfies(here, there, g)),
        Formula::Implies(a, b) => {
            satisfies(there, f) && (!ht_satisfies(here, there, a) || ht_satisfies(here, there, b))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BudgetError {
    #[error("strong-equivalence check over {atoms} atoms exceeds the atom budget of {budget}")]
    Atoms { atoms: usize, budget: usize },
    #[error("stable-model search exceeded the search budget of {budget} steps")]
    Search { budget: u64 },
}

/// Default number of atoms for exhaustive here-and-there checks (`3^n` pairs).
pub const DEFAULT_HT_ATOMS: usize = 14;

/// Formula over atom indices, evaluated on bitmask interpretations.
#[derive(Clone, Debug)]
pub enum Compiled {
    Atom(u32),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    /// Compiles `f` against `index`, which must contain all its atoms.
    pub fn new(f: &Formula, index: &BTreeMap<GroundAtom, u32>) -> Compiled {
        match f {
            Formula::Atom(a) => Compiled::Atom(index[&**a]),
            Formula::And(v) => Compiled::And(v.iter().map(|g| Compiled::new(g, index)).collect()),
            Formula::Or(v) => Compiled::Or(v.iter().map(|g| Compiled::new(g, index)).collect()),
            Formula::Implies(a, b) => Compiled::Implies(
                Box::new(Compiled::new(a, index)),
                Box::new(Compiled::new(b, index)),
            ),
        }
    }

    pub fn eval(&self, i: u64) -> bool {
        match self {
            Compiled::Atom(k) => i >> k & 1 == 1,
            Compiled::And(v) => v.iter().all(|g| g.eval(i)),
            Compiled::Or(v) => v.iter().any(|g| g.eval(i)),
            Compiled::Implies(a, b) => !a.eval(i) || b.eval(i),
        }
    }

    pub fn eval_ht(&self, here: u64, there: u64) -> bool {
        match self {
            Compiled::Atom(k) => here >> k & 1 == 1,
            Compiled::And(v) => v.iter().all(|g| g.eval_ht(here, there)),
            Compiled::Or(v) => v.iter().any(|g| g.eval_ht(here, there)),
            Compiled::Implies(a, b) => {
                self.eval(there) && (!a.eval_ht(here, there) || b.eval_ht(here, there))
            }
        }
    }
}

/// Atoms of all formulas, numbered in order.
pub fn atom_index<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> BTreeMap<GroundAtom, u32> {
    let mut atoms = BTreeSet::new();
    for f in fs {
        f.collect_atoms(&mut atoms);
    }
    atoms.into_iter().zip(0..).collect()
}

/// Calls `visit(here, there)` for every pair `here ⊆ there ⊆ {0..n}`.
pub fn for_each_ht_pair(n: u32, mut visit: impl FnMut(u64, u64) -> bool) -> bool {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut there = 0u64;
    loop {
        // enumerate subsets of `there`
        let mut here = there;
        loop {
            if !visit(here, there) {
                return false;
            }
            if here == 0 {
                break;
            }
            here = (here - 1) & there;
        }
        if there == full {
            return true;
        }
        there += 1;
    }
}

/// Whether `f` and `g` have the same here-and-there models over their atoms.
pub fn strongly_equivalent(f: &Formula, g: &Formula) -> Result<bool, BudgetError> {
    strongly_equivalent_with(f, g, DEFAULT_HT_ATOMS)
}

pub fn strongly_equivalent_with(
    f: &Formula,
    g: &Formula,
    budget: usize,
) -> Result<bool, BudgetError> {
    if f == g {
        return Ok(true);
    }
    let index = atom_index([f, g]);
    if index.len() > budget.min(63) {
        return Err(BudgetError::Atoms {
            atoms: index.len(),
            budget,
        });
    }
    let (cf, cg) = (Compiled::new(f, &index), Compiled::new(g, &index));
    Ok(for_each_ht_pair(index.len() as u32, |h, t| {
        cf.eval_ht(h, t) == cg.eval_ht(h, t)
    }))
}
