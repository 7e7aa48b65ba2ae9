//! Abstract syntax of AG programs.
//!
//! Two layers live here. The *sugared* layer ([`Program`], [`Rule`], [`Head`],
//! [`BodyLiteral`]) is what the parser produces and may contain head
//! aggregates and lparse-style counting expressions. The *core* layer
//! ([`CoreProgram`], [`CoreRule`]) only has disjunctive rules and choice
//! rules with aggregate atoms restricted to bodies; it is what the grounder
//! consumes.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use thiserror::Error;

/// A symbolic constant `p` or its strong negation `-p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    // field order gives the derived order: constants before negated
    // constants, then by name
    pub negated: bool,
    pub name: String,
}

impl Symbol {
    pub fn constant(name: impl Into<String>) -> Self {
        Symbol {
            negated: false,
            name: name.into(),
        }
    }

    pub fn negated(name: impl Into<String>) -> Self {
        Symbol {
            negated: true,
            name: name.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Interval,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Numeral(BigInt),
    /// Symbolic constant, or a negated constant coming from a term
    /// representation.
    Symbol(Symbol),
    Variable(String),
    /// `f(t1, ..., tn)` with `n > 0`; `f()` is normalized to [`Term::Symbol`].
    Function(Symbol, Vec<Term>),
    BinOp(BinOp, Box<Term>, Box<Term>),
    Tuple(Vec<Term>),
    Inf,
    Sup,
}

impl Term {
    pub fn num(n: impl Into<BigInt>) -> Term {
        Term::Numeral(n.into())
    }

    pub fn constant(name: &str) -> Term {
        Term::Symbol(Symbol::constant(name))
    }

    pub fn var(name: &str) -> Term {
        Term::Variable(name.to_string())
    }

    /// Builds `f(args)`, collapsing `f()` to the constant `f`.
    pub fn function(symbol: Symbol, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::Symbol(symbol)
        } else {
            Term::Function(symbol, args)
        }
    }

    pub fn binop(op: BinOp, left: Term, right: Term) -> Term {
        Term::BinOp(op, Box::new(left), Box::new(right))
    }

    /// `-t`, which abbreviates `(0 - t)`.
    pub fn negate(t: Term) -> Term {
        Term::binop(BinOp::Sub, Term::num(0), t)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Variable(_) => false,
            Term::Function(_, args) | Term::Tuple(args) => args.iter().all(Term::is_ground),
            Term::BinOp(_, l, r) => l.is_ground() && r.is_ground(),
            _ => true,
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Variable(v) => {
                out.insert(v.clone());
            }
            Term::Function(_, args) | Term::Tuple(args) => {
                args.iter().for_each(|t| t.collect_vars(out));
            }
            Term::BinOp(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            _ => {}
        }
    }

    /// The term as a precomputed term, if it contains neither variables
    /// nor operators.
    pub fn as_precomputed(&self) -> Option<PrecomputedTerm> {
        Some(match self {
            Term::Numeral(n) => PrecomputedTerm::Numeral(n.clone()),
            Term::Symbol(s) => PrecomputedTerm::Symbol(s.clone()),
            Term::Function(f, args) => PrecomputedTerm::Function(
                f.clone(),
                args.iter()
                    .map(Term::as_precomputed)
                    .collect::<Option<_>>()?,
            ),
            Term::Tuple(args) => PrecomputedTerm::Tuple(
                args.iter()
                    .map(Term::as_precomputed)
                    .collect::<Option<_>>()?,
            ),
            Term::Inf => PrecomputedTerm::Inf,
            Term::Sup => PrecomputedTerm::Sup,
            Term::Variable(_) | Term::BinOp(..) => return None,
        })
    }
}

/// True iff no interval `..` occurs anywhere in the term.
pub fn is_interval_free(t: &Term) -> bool {
    match t {
        Term::BinOp(BinOp::Interval, _, _) => false,
        Term::BinOp(_, l, r) => is_interval_free(l) && is_interval_free(r),
        Term::Function(_, args) | Term::Tuple(args) => args.iter().all(is_interval_free),
        _ => true,
    }
}

pub fn is_tuple_interval_free(ts: &[Term]) -> bool {
    ts.iter().all(is_interval_free)
}

/// Ground, operator-free term.
///
/// The order is total: `inf` < numerals (by value) < symbolic constants
/// (by name) < negated constants (by name) < function terms (by symbol,
/// then argument-wise) < tuples (by length, then element-wise) < `sup`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PrecomputedTerm {
    Inf,
    Numeral(BigInt),
    Symbol(Symbol),
    Function(Symbol, Vec<PrecomputedTerm>),
    Tuple(Vec<PrecomputedTerm>),
    Sup,
}

impl PrecomputedTerm {
    pub fn num(n: impl Into<BigInt>) -> Self {
        PrecomputedTerm::Numeral(n.into())
    }

    pub fn constant(name: &str) -> Self {
        PrecomputedTerm::Symbol(Symbol::constant(name))
    }

    pub fn function(symbol: Symbol, args: Vec<PrecomputedTerm>) -> Self {
        if args.is_empty() {
            PrecomputedTerm::Symbol(symbol)
        } else {
            PrecomputedTerm::Function(symbol, args)
        }
    }

    pub fn as_numeral(&self) -> Option<&BigInt> {
        match self {
            PrecomputedTerm::Numeral(n) => Some(n),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            PrecomputedTerm::Inf => 0,
            PrecomputedTerm::Numeral(_) => 1,
            PrecomputedTerm::Symbol(s) if !s.negated => 2,
            PrecomputedTerm::Symbol(_) => 3,
            PrecomputedTerm::Function(..) => 4,
            PrecomputedTerm::Tuple(_) => 5,
            PrecomputedTerm::Sup => 6,
        }
    }
}

impl From<&PrecomputedTerm> for Term {
    fn from(t: &PrecomputedTerm) -> Term {
        match t {
            PrecomputedTerm::Inf => Term::Inf,
            PrecomputedTerm::Sup => Term::Sup,
            PrecomputedTerm::Numeral(n) => Term::Numeral(n.clone()),
            PrecomputedTerm::Symbol(s) => Term::Symbol(s.clone()),
            PrecomputedTerm::Function(f, args) => {
                Term::Function(f.clone(), args.iter().map(Term::from).collect())
            }
            PrecomputedTerm::Tuple(args) => Term::Tuple(args.iter().map(Term::from).collect()),
        }
    }
}

pub fn compare_precomputed(a: &PrecomputedTerm, b: &PrecomputedTerm) -> Ordering {
    use PrecomputedTerm::*;
    match a.rank().cmp(&b.rank()) {
        Ordering::Equal => {}
        other => return other,
    }
    match (a, b) {
        (Numeral(x), Numeral(y)) => x.cmp(y),
        (Symbol(x), Symbol(y)) => x.name.cmp(&y.name),
        (Function(f, xs), Function(g, ys)) => f.cmp(g).then_with(|| xs.as_slice().cmp(ys)),
        (Tuple(xs), Tuple(ys)) => xs.len().cmp(&ys.len()).then_with(|| xs.cmp(ys)),
        _ => Ordering::Equal,
    }
}

impl Ord for PrecomputedTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_precomputed(self, other)
    }
}

impl PartialOrd for PrecomputedTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Semicolon-separated alternatives of term tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pool(pub Vec<Vec<Term>>);

impl Pool {
    pub fn single(terms: Vec<Term>) -> Pool {
        Pool(vec![terms])
    }

    pub fn alternatives(&self) -> &[Vec<Term>] {
        &self.0
    }

    pub fn is_single(&self) -> bool {
        self.0.len() == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub strong_negation: bool,
    pub predicate: String,
    pub pool: Pool,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Atom {
        Atom {
            strong_negation: false,
            predicate: predicate.to_string(),
            pool: Pool::single(args),
        }
    }

    pub fn symbol(&self) -> Symbol {
        Symbol {
            negated: self.strong_negation,
            name: self.predicate.clone(),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        for tuple in &self.pool.0 {
            tuple.iter().for_each(|t| t.collect_vars(out));
        }
    }

    pub fn is_interval_free(&self) -> bool {
        self.pool.0.iter().all(|t| is_tuple_interval_free(t))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("atom {0} has a pool with several alternatives and is not a term")]
pub struct PoolNotTerm(pub String);

/// Views `p(t)` as the function term `p(t)` (and `-p(t)` with a negated
/// constant as its symbol).
pub fn atom_as_term(atom: &Atom) -> Result<Term, PoolNotTerm> {
    match atom.pool.0.as_slice() {
        [tuple] => Ok(Term::function(atom.symbol(), tuple.clone())),
        _ => Err(PoolNotTerm(atom.to_string())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Negation {
    None,
    Single,
    Double,
}

impl Negation {
    pub fn depth(self) -> u8 {
        match self {
            Negation::None => 0,
            Negation::Single => 1,
            Negation::Double => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicLiteral {
    pub negation: Negation,
    pub atom: Atom,
}

impl SymbolicLiteral {
    pub fn positive(atom: Atom) -> Self {
        SymbolicLiteral {
            negation: Negation::None,
            atom,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

impl Rel {
    /// The relation with its arguments swapped: `a ≺ b` iff `b ≺' a`.
    pub fn converse(self) -> Rel {
        match self {
            Rel::Eq => Rel::Eq,
            Rel::Ne => Rel::Ne,
            Rel::Lt => Rel::Gt,
            Rel::Gt => Rel::Lt,
            Rel::Le => Rel::Ge,
            Rel::Ge => Rel::Le,
        }
    }

    pub const ALL: [Rel; 6] = [Rel::Eq, Rel::Ne, Rel::Lt, Rel::Gt, Rel::Le, Rel::Ge];
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArithmeticLiteral {
    pub left: Term,
    pub rel: Rel,
    pub right: Term,
}

/// A symbolic or arithmetic literal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasicLiteral {
    Symbolic(SymbolicLiteral),
    Arithmetic(ArithmeticLiteral),
}

impl BasicLiteral {
    pub fn atom(atom: Atom) -> Self {
        BasicLiteral::Symbolic(SymbolicLiteral::positive(atom))
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            BasicLiteral::Symbolic(l) => l.atom.collect_vars(out),
            BasicLiteral::Arithmetic(a) => {
                a.left.collect_vars(out);
                a.right.collect_vars(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionalHead {
    Literal(BasicLiteral),
    Falsum,
}

/// `H : L1, ..., Lk`; a plain literal is the case `k = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConditionalLiteral {
    pub head: ConditionalHead,
    pub condition: Vec<BasicLiteral>,
}

impl ConditionalLiteral {
    pub fn plain(lit: BasicLiteral) -> Self {
        ConditionalLiteral {
            head: ConditionalHead::Literal(lit),
            condition: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AggregateFunction {
    Count,
    Sum,
    SumPlus,
    Min,
    Max,
}

impl AggregateFunction {
    pub const ALL: [AggregateFunction; 5] = [
        AggregateFunction::Count,
        AggregateFunction::Sum,
        AggregateFunction::SumPlus,
        AggregateFunction::Min,
        AggregateFunction::Max,
    ];
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AggregateElement {
    pub terms: Vec<Term>,
    pub condition: Vec<BasicLiteral>,
}

/// `s1 ≺1 α{ t1 : L1; ...; tn : Ln } ≺2 s2` with at least one bound.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AggregateAtom {
    pub function: AggregateFunction,
    pub elements: Vec<AggregateElement>,
    pub left: Option<(Term, Rel)>,
    pub right: Option<(Rel, Term)>,
}

impl AggregateAtom {
    /// Bounds as constraints `α ≺ s` on the aggregate value.
    pub fn guards(&self) -> Vec<(Rel, &Term)> {
        let mut out = Vec::with_capacity(2);
        if let Some((s, rel)) = &self.left {
            out.push((rel.converse(), s));
        }
        if let Some((rel, s)) = &self.right {
            out.push((*rel, s));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AggregateLiteral {
    pub negation: Negation,
    pub atom: AggregateAtom,
}

/// Body literal of the core language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Literal {
    Conditional(ConditionalLiteral),
    Aggregate(AggregateLiteral),
}

impl Literal {
    pub fn plain(lit: BasicLiteral) -> Literal {
        Literal::Conditional(ConditionalLiteral::plain(lit))
    }
}

/// Element `t : L : L1, ..., Lk` of a head aggregate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeadAggregateElement {
    pub terms: Vec<Term>,
    pub literal: SymbolicLiteral,
    pub condition: Vec<BasicLiteral>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeadAggregate {
    pub function: AggregateFunction,
    pub elements: Vec<HeadAggregateElement>,
    pub left: Option<(Term, Rel)>,
    pub right: Option<(Rel, Term)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LparseElement {
    pub literal: SymbolicLiteral,
    pub condition: Vec<BasicLiteral>,
}

/// `s1 { L1 : Ls1; ...; Ln : Lsn } s2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LparseExpr {
    pub lower: Option<Term>,
    pub elements: Vec<LparseElement>,
    pub upper: Option<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Head {
    /// `H1 ∨ ... ∨ Hk`; empty for constraints.
    Disjunction(Vec<BasicLiteral>),
    Choice(Atom),
    Aggregate(HeadAggregate),
    Lparse(LparseExpr),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BodyLiteral {
    Literal(Literal),
    Lparse {
        negation: Negation,
        expr: LparseExpr,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub head: Head,
    pub body: Vec<BodyLiteral>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Program {
    pub rules: Vec<Rule>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoreHead {
    Disjunction(Vec<BasicLiteral>),
    Choice(Atom),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoreRule {
    pub head: CoreHead,
    pub body: Vec<Literal>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CoreProgram {
    pub rules: Vec<CoreRule>,
}

impl From<CoreRule> for Rule {
    fn from(r: CoreRule) -> Rule {
        Rule {
            head: match r.head {
                CoreHead::Disjunction(hs) => Head::Disjunction(hs),
                CoreHead::Choice(a) => Head::Choice(a),
            },
            body: r.body.into_iter().map(BodyLiteral::Literal).collect(),
        }
    }
}

impl From<CoreProgram> for Program {
    fn from(p: CoreProgram) -> Program {
        Program {
            rules: p.rules.into_iter().map(Rule::from).collect(),
        }
    }
}

/// Anything that mentions variables.
pub trait Vars {
    fn collect_vars(&self, out: &mut BTreeSet<String>);

    fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }
}

impl Vars for Term {
    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        Term::collect_vars(self, out)
    }
}

impl Vars for [Term] {
    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        self.iter().for_each(|t| t.collect_vars(out))
    }
}

impl Vars for Atom {
    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        Atom::collect_vars(self, out)
    }
}

impl Vars for BasicLiteral {
    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        BasicLiteral::collect_vars(self, out)
    }
}

impl Vars for [BasicLiteral] {
    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        self.iter().for_each(|l| l.collect_vars(out))
    }
}

impl Vars for ConditionalLiteral {
    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        if let ConditionalHead::Literal(l) = &self.head {
            l.collect_vars(out);
        }
        self.condition.as_slice().collect_vars(out);
    }
}

impl Vars for AggregateElement {
    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        self.terms.as_slice().collect_vars(out);
        self.condition.as_slice().collect_vars(out);
    }
}

impl Vars for AggregateAtom {
    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        for e in &self.elements {
            e.collect_vars(out);
        }
        if let Some((s, _)) = &self.left {
            s.collect_vars(out);
        }
        if let Some((_, s)) = &self.right {
            s.collect_vars(out);
        }
    }
}

impl Vars for Literal {
    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Literal::Conditional(c) => c.collect_vars(out),
            Literal::Aggregate(a) => a.atom.collect_vars(out),
        }
    }
}
