//! Concrete-syntax rendering of the AST. Output parses back to the same AST,
//! except for negated constants in term position, which only arise from term
//! representations and are printed `~p` for readability.

use std::fmt::{self, Display, Formatter, Write};

use crate::ast::*;

fn join<T: Display>(f: &mut Formatter<'_>, items: &[T], sep: &str) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

impl Display for Symbol {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_char('~')?;
        }
        f.write_str(&self.name)
    }
}

impl Display for BinOp {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Interval => "..",
        })
    }
}

fn precedence(t: &Term) -> u8 {
    match t {
        Term::BinOp(BinOp::Sub, l, r) if is_unary_minus(l, r) => 4,
        Term::BinOp(BinOp::Interval, ..) => 1,
        Term::BinOp(BinOp::Add | BinOp::Sub, ..) => 2,
        Term::BinOp(BinOp::Mul | BinOp::Div, ..) => 3,
        _ => 4,
    }
}

/// `(0 - t)` is rendered `-t` unless `t` is a numeral, where `-n` would
/// read back as the negative numeral.
fn is_unary_minus(l: &Term, r: &Term) -> bool {
    matches!(l, Term::Numeral(n) if n == &0.into()) && !matches!(r, Term::Numeral(_))
}

fn write_operand(f: &mut Formatter<'_>, t: &Term, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

fn write_tuple<T: Display>(f: &mut Formatter<'_>, items: &[T]) -> fmt::Result {
    f.write_char('(')?;
    join(f, items, ",")?;
    if items.len() == 1 {
        f.write_char(',')?;
    }
    f.write_char(')')
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Numeral(n) => write!(f, "{n}"),
            Term::Symbol(s) => write!(f, "{s}"),
            Term::Variable(v) => f.write_str(v),
            Term::Function(s, args) => {
                write!(f, "{s}(")?;
                join(f, args, ",")?;
                f.write_char(')')
            }
            Term::Tuple(items) => write_tuple(f, items),
            Term::Inf => f.write_str("#inf"),
            Term::Sup => f.write_str("#sup"),
            Term::BinOp(op, l, r) => {
                if *op == BinOp::Sub && is_unary_minus(l, r) {
                    f.write_char('-')?;
                    return write_operand(f, r, precedence(r) < 4);
                }
                let p = precedence(self);
                write_operand(f, l, precedence(l) < p)?;
                write!(f, "{op}")?;
                write_operand(f, r, precedence(r) <= p)
            }
        }
    }
}

impl Display for PrecomputedTerm {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            PrecomputedTerm::Inf => f.write_str("#inf"),
            PrecomputedTerm::Sup => f.write_str("#sup"),
            PrecomputedTerm::Numeral(n) => write!(f, "{n}"),
            PrecomputedTerm::Symbol(s) => write!(f, "{s}"),
            PrecomputedTerm::Function(s, args) => {
                write!(f, "{s}(")?;
                join(f, args, ",")?;
                f.write_char(')')
            }
            PrecomputedTerm::Tuple(items) => write_tuple(f, items),
        }
    }
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())?;
        let alts = self.pool.alternatives();
        if alts.len() == 1 && alts[0].is_empty() {
            return Ok(());
        }
        f.write_char('(')?;
        for (i, alt) in alts.iter().enumerate() {
            if i > 0 {
                f.write_char(';')?;
            }
            join(f, alt, ",")?;
        }
        f.write_char(')')
    }
}

impl Display for Negation {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Negation::None => "",
            Negation::Single => "not ",
            Negation::Double => "not not ",
        })
    }
}

impl Display for SymbolicLiteral {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.negation, self.atom)
    }
}

impl Display for Rel {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Gt => ">",
            Rel::Le => "<=",
            Rel::Ge => ">=",
        })
    }
}

impl Display for ArithmeticLiteral {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.left, self.rel, self.right)
    }
}

impl Display for BasicLiteral {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            BasicLiteral::Symbolic(l) => write!(f, "{l}"),
            BasicLiteral::Arithmetic(a) => write!(f, "{a}"),
        }
    }
}

impl Display for ConditionalLiteral {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match &self.head {
            ConditionalHead::Literal(l) => write!(f, "{l}")?,
            ConditionalHead::Falsum => f.write_str("#false")?,
        }
        if !self.condition.is_empty() {
            f.write_str(" : ")?;
            join(f, &self.condition, ", ")?;
        }
        Ok(())
    }
}

impl Display for AggregateFunction {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AggregateFunction::Count => "#count",
            AggregateFunction::Sum => "#sum",
            AggregateFunction::SumPlus => "#sum+",
            AggregateFunction::Min => "#min",
            AggregateFunction::Max => "#max",
        })
    }
}

impl Display for AggregateElement {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        join(f, &self.terms, ",")?;
        match (self.terms.is_empty(), self.condition.is_empty()) {
            (false, true) => Ok(()),
            (true, true) => f.write_char(':'),
            (true, false) => {
                f.write_str(": ")?;
                join(f, &self.condition, ", ")
            }
            (false, false) => {
                f.write_str(" : ")?;
                join(f, &self.condition, ", ")
            }
        }
    }
}

fn write_braced<T: Display>(f: &mut Formatter<'_>, items: &[T]) -> fmt::Result {
    if items.is_empty() {
        return f.write_str("{ }");
    }
    f.write_str("{ ")?;
    join(f, items, "; ")?;
    f.write_str(" }")
}

fn write_bounded<T: Display>(
    f: &mut Formatter<'_>,
    function: AggregateFunction,
    elements: &[T],
    left: &Option<(Term, Rel)>,
    right: &Option<(Rel, Term)>,
) -> fmt::Result {
    if let Some((s, rel)) = left {
        write!(f, "{s} {rel} ")?;
    }
    write!(f, "{function}")?;
    write_braced(f, elements)?;
    if let Some((rel, s)) = right {
        write!(f, " {rel} {s}")?;
    }
    Ok(())
}

impl Display for AggregateAtom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_bounded(f, self.function, &self.elements, &self.left, &self.right)
    }
}

impl Display for AggregateLiteral {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.negation, self.atom)
    }
}

impl Display for Literal {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Conditional(c) => write!(f, "{c}"),
            Literal::Aggregate(a) => write!(f, "{a}"),
        }
    }
}

impl Display for HeadAggregateElement {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        join(f, &self.terms, ",")?;
        if !self.terms.is_empty() {
            f.write_char(' ')?;
        }
        write!(f, ": {}", self.literal)?;
        if !self.condition.is_empty() {
            f.write_str(" : ")?;
            join(f, &self.condition, ", ")?;
        }
        Ok(())
    }
}

impl Display for HeadAggregate {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_bounded(f, self.function, &self.elements, &self.left, &self.right)
    }
}

impl Display for LparseElement {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.literal)?;
        if !self.condition.is_empty() {
            f.write_str(" : ")?;
            join(f, &self.condition, ", ")?;
        }
        Ok(())
    }
}

impl Display for LparseExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if let Some(s) = &self.lower {
            write!(f, "{s} ")?;
        }
        write_braced(f, &self.elements)?;
        if let Some(s) = &self.upper {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

impl Display for Head {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Head::Disjunction(lits) => join(f, lits, " ; "),
            Head::Choice(a) => write!(f, "{{ {a} }}"),
            Head::Aggregate(h) => write!(f, "{h}"),
            Head::Lparse(e) => write!(f, "{e}"),
        }
    }
}

impl Display for BodyLiteral {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            BodyLiteral::Literal(l) => write!(f, "{l}"),
            BodyLiteral::Lparse { negation, expr } => write!(f, "{negation}{expr}"),
        }
    }
}

/// A conditional literal's condition swallows following commas, so the
/// next body literal is separated by `;`.
fn ends_with_condition(l: &BodyLiteral) -> bool {
    matches!(l, BodyLiteral::Literal(Literal::Conditional(c)) if !c.condition.is_empty())
}

fn write_rule(f: &mut Formatter<'_>, head: &Head, body: &[BodyLiteral]) -> fmt::Result {
    let empty_head = matches!(head, Head::Disjunction(h) if h.is_empty());
    if empty_head && body.is_empty() {
        return f.write_str("#false.");
    }
    write!(f, "{head}")?;
    if !body.is_empty() {
        f.write_str(if empty_head { ":- " } else { " :- " })?;
        for (i, l) in body.iter().enumerate() {
            if i > 0 {
                f.write_str(if ends_with_condition(&body[i - 1]) {
                    "; "
                } else {
                    ", "
                })?;
            }
            write!(f, "{l}")?;
        }
    }
    f.write_char('.')
}

impl Display for Rule {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_rule(f, &self.head, &self.body)
    }
}

impl Display for Program {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl Display for CoreRule {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Rule::from(self.clone()))
    }
}

impl Display for CoreProgram {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_program, parse_term};

    fn round_trip_term(s: &str) -> String {
        parse_term(s).unwrap().to_string()
    }

    #[test]
    fn terms_print_minimal_parentheses() {
        assert_eq!(round_trip_term("(1..3)*2"), "(1..3)*2");
        assert_eq!(round_trip_term("1..n*2-1"), "1..n*2-1");
        assert_eq!(round_trip_term("X-(Y-Z)"), "X-(Y-Z)");
        assert_eq!(round_trip_term("(X-Y)-Z"), "X-Y-Z");
        assert_eq!(round_trip_term("-X"), "-X");
        assert_eq!(round_trip_term("-(X+1)"), "-(X+1)");
        assert_eq!(round_trip_term("0-3"), "0-3");
        assert_eq!(round_trip_term("X - -3"), "X--3");
        assert_eq!(round_trip_term("(a,)"), "(a,)");
        assert_eq!(round_trip_term("f(a,(1,2))"), "f(a,(1,2))");
    }

    #[test]
    fn rules_print_back() {
        for src in [
            "p(a,5;b,10;c,12).",
            "{ q(1..n,1..n) }.",
            ":- X = 1..n, not #count{ Y : q(X,Y) } = 1.",
            ":- D = 1..n*2-1, 2 { q(X,Y) : d1(X,Y,D) }.",
            "q(1..n,1..n) ; not q(1..n,1..n).",
            "a :- p(X) : q(X), r(X); s.",
            "~p(a) :- not not ~q.",
            "1 <= #count{ 0,p(a) : p(a) : q } <= 1 :- r.",
            "p :- #sum{ X,Y : w(X,Y) } >= 3, 0 < #min{ 1; 2 }.",
            ":- p.",
            "#false.",
        ] {
            let printed = parse_program(src).unwrap().to_string();
            assert_eq!(printed.trim_end(), src);
        }
    }
}
