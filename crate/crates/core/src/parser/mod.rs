//! Concrete ASCII syntax: lexer, recursive-descent parser and the
//! pretty-printer (the `Display` impls in [`print`]).
//!
//! Arithmetic precedence, loosest first: `..`, then `+ -`, then `* /`; all
//! binary operators associate to the left and unary minus binds tightest.

mod lexer;
pub mod print;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::ast::*;
pub use lexer::{tokenize, Token, TokenKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Position {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Position,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Position, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

/// Constant definitions (`-c name=value`) applied while parsing terms.
pub type Constants = BTreeMap<String, BigInt>;

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    parse_program_with(text, &Constants::new())
}

pub fn parse_program_with(text: &str, consts: &Constants) -> Result<Program, ParseError> {
    let mut p = Parser::new(text, consts)?;
    let mut rules = Vec::new();
    while !p.at_end() {
        rules.push(p.rule()?);
    }
    Ok(Program { rules })
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    parse_term_with(text, &Constants::new())
}

pub fn parse_term_with(text: &str, consts: &Constants) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, consts)?;
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

pub fn parse_literal(text: &str) -> Result<Literal, ParseError> {
    let consts = Constants::new();
    let mut p = Parser::new(text, &consts)?;
    let lit = match p.body_element()? {
        BodyLiteral::Literal(l) => l,
        BodyLiteral::Lparse { .. } => {
            return Err(p.error("expected a core literal, found a counting expression"))
        }
    };
    p.expect_end()?;
    Ok(lit)
}

struct Parser<'c> {
    tokens: Vec<Token>,
    pos: usize,
    consts: &'c Constants,
    end: Position,
}

impl<'c> Parser<'c> {
    fn new(text: &str, consts: &'c Constants) -> Result<Self, ParseError> {
        let tokens = tokenize(text)?;
        let lines = text.split('\n').count();
        let last_len = text.rsplit('\n').next().map_or(0, |l| l.chars().count());
        Ok(Parser {
            tokens,
            pos: 0,
            consts,
            end: Position {
                line: lines,
                col: last_len + 1,
            },
        })
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn peek_at(&self, offset: usize) -> Option<&TokenKind> {
        self.tokens.get(self.pos + offset).map(|t| &t.kind)
    }

    fn here(&self) -> Position {
        self.tokens.get(self.pos).map_or(self.end, |t| t.pos)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.here(), message)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(k) => self.error(format!("expected {wanted}, found {k}")),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn bump(&mut self) -> Option<TokenKind> {
        let t = self.tokens.get(self.pos).map(|t| t.kind.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: &TokenKind) -> Result<(), ParseError> {
        if self.eat(kind) {
            Ok(())
        } else {
            Err(self.unexpected(&kind.to_string()))
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn peek_rel(&self) -> Option<Rel> {
        Some(match self.peek()? {
            TokenKind::Eq => Rel::Eq,
            TokenKind::Ne => Rel::Ne,
            TokenKind::Lt => Rel::Lt,
            TokenKind::Gt => Rel::Gt,
            TokenKind::Le => Rel::Le,
            TokenKind::Ge => Rel::Ge,
            _ => return None,
        })
    }

    fn starts_term(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                TokenKind::Numeral(_)
                    | TokenKind::Ident(_)
                    | TokenKind::NegatedIdent(_)
                    | TokenKind::Variable(_)
                    | TokenKind::LParen
                    | TokenKind::Minus
                    | TokenKind::Inf
                    | TokenKind::Sup
            )
        )
    }

    /// Runs `f`, rewinding on failure.
    fn attempt<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T, ParseError>) -> Option<T> {
        let saved = self.pos;
        match f(self) {
            Ok(v) => Some(v),
            Err(_) => {
                self.pos = saved;
                None
            }
        }
    }

    // ---- rules -------------------------------------------------------

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let start = self.here();
        let explicit_false = matches!(self.peek(), Some(TokenKind::False));
        let head = if matches!(self.peek(), Some(TokenKind::If)) {
            Head::Disjunction(Vec::new())
        } else {
            self.head()?
        };
        let mut body = Vec::new();
        if self.eat(&TokenKind::If) {
            if !matches!(self.peek(), Some(TokenKind::Dot)) {
                body = self.body()?;
            }
        } else if head == Head::Disjunction(Vec::new()) && !explicit_false {
            return Err(ParseError::new(start, "rule with neither head nor body"));
        }
        self.expect(&TokenKind::Dot)?;
        Ok(Rule { head, body })
    }

    fn head(&mut self) -> Result<Head, ParseError> {
        match self.peek() {
            Some(TokenKind::False) => {
                self.bump();
                return Ok(Head::Disjunction(Vec::new()));
            }
            Some(TokenKind::LBrace) => return self.brace_head(None),
            Some(TokenKind::AggregateName(_)) => return self.head_aggregate(None),
            _ => {}
        }
        if self.starts_term() {
            let saved = self.pos;
            if let Some(t) = self.attempt(|p| p.term()) {
                if matches!(self.peek(), Some(TokenKind::LBrace)) {
                    return self.brace_head(Some(t));
                }
                if let Some(rel) = self.peek_rel() {
                    if matches!(self.peek_at(1), Some(TokenKind::AggregateName(_))) {
                        self.bump();
                        return self.head_aggregate(Some((t, rel)));
                    }
                }
            }
            self.pos = saved;
        }
        let mut lits = vec![self.basic_literal()?];
        loop {
            if matches!(self.peek(), Some(TokenKind::Colon)) {
                return Err(self.error("conditional literals are not allowed in rule heads"));
            }
            if self.eat(&TokenKind::Semicolon) || self.eat(&TokenKind::Bar) {
                lits.push(self.basic_literal()?);
            } else {
                break;
            }
        }
        Ok(Head::Disjunction(lits))
    }

    fn brace_head(&mut self, lower: Option<Term>) -> Result<Head, ParseError> {
        let expr = self.lparse_expr(lower)?;
        let native_choice = expr.lower.is_none()
            && expr.upper.is_none()
            && expr.elements.len() == 1
            && expr.elements[0].literal.negation == Negation::None
            && expr.elements[0].condition.is_empty();
        if native_choice {
            let atom = expr.elements.into_iter().next().unwrap().literal.atom;
            Ok(Head::Choice(atom))
        } else {
            Ok(Head::Lparse(expr))
        }
    }

    fn lparse_expr(&mut self, lower: Option<Term>) -> Result<LparseExpr, ParseError> {
        self.expect(&TokenKind::LBrace)?;
        let mut elements = Vec::new();
        loop {
            let literal = self.symbolic_literal()?;
            let condition = if self.eat(&TokenKind::Colon) {
                self.conditions()?
            } else {
                Vec::new()
            };
            elements.push(LparseElement { literal, condition });
            if !self.eat(&TokenKind::Semicolon) {
                break;
            }
        }
        self.expect(&TokenKind::RBrace)?;
        let upper = if self.starts_term() {
            Some(self.term()?)
        } else {
            None
        };
        Ok(LparseExpr {
            lower,
            elements,
            upper,
        })
    }

    fn aggregate_function(&mut self) -> Result<AggregateFunction, ParseError> {
        match self.bump() {
            Some(TokenKind::AggregateName(name)) => Ok(match name.as_str() {
                "count" => AggregateFunction::Count,
                "sum" => AggregateFunction::Sum,
                "sum+" => AggregateFunction::SumPlus,
                "min" => AggregateFunction::Min,
                "max" => AggregateFunction::Max,
                _ => unreachable!("lexer only emits known names"),
            }),
            _ => {
                self.pos -= 1;
                Err(self.unexpected("aggregate name"))
            }
        }
    }

    fn right_bound(&mut self) -> Result<Option<(Rel, Term)>, ParseError> {
        match self.peek_rel() {
            Some(rel) => {
                self.bump();
                Ok(Some((rel, self.term()?)))
            }
            None => Ok(None),
        }
    }

    fn head_aggregate(&mut self, left: Option<(Term, Rel)>) -> Result<Head, ParseError> {
        let function = self.aggregate_function()?;
        self.expect(&TokenKind::LBrace)?;
        let mut elements = Vec::new();
        if !self.eat(&TokenKind::RBrace) {
            loop {
                let terms = self.term_tuple_until_colon()?;
                self.expect(&TokenKind::Colon)?;
                let literal = self.symbolic_literal()?;
                let condition = if self.eat(&TokenKind::Colon) {
                    self.conditions()?
                } else {
                    Vec::new()
                };
                elements.push(HeadAggregateElement {
                    terms,
                    literal,
                    condition,
                });
                if !self.eat(&TokenKind::Semicolon) {
                    break;
                }
            }
            self.expect(&TokenKind::RBrace)?;
        }
        let right = self.right_bound()?;
        Ok(Head::Aggregate(HeadAggregate {
            function,
            elements,
            left,
            right,
        }))
    }

    fn term_tuple_until_colon(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut terms = Vec::new();
        if self.starts_term() {
            terms.push(self.term()?);
            while self.eat(&TokenKind::Comma) {
                terms.push(self.term()?);
            }
        }
        Ok(terms)
    }

    fn body(&mut self) -> Result<Vec<BodyLiteral>, ParseError> {
        let mut body = vec![self.body_element()?];
        while self.eat(&TokenKind::Comma) || self.eat(&TokenKind::Semicolon) {
            body.push(self.body_element()?);
        }
        Ok(body)
    }

    fn negations(&mut self) -> Result<Negation, ParseError> {
        let mut n = 0;
        while self.eat(&TokenKind::Not) {
            n += 1;
        }
        match n {
            0 => Ok(Negation::None),
            1 => Ok(Negation::Single),
            2 => Ok(Negation::Double),
            _ => Err(self.error("at most two occurrences of 'not' may precede a literal")),
        }
    }

    fn body_element(&mut self) -> Result<BodyLiteral, ParseError> {
        let negation = self.negations()?;
        match self.peek() {
            Some(TokenKind::AggregateName(_)) => {
                let atom = self.body_aggregate(None)?;
                return Ok(BodyLiteral::Literal(Literal::Aggregate(AggregateLiteral {
                    negation,
                    atom,
                })));
            }
            Some(TokenKind::LBrace) => {
                let expr = self.lparse_expr(None)?;
                return Ok(BodyLiteral::Lparse { negation, expr });
            }
            Some(TokenKind::False) => {
                if negation != Negation::None {
                    return Err(self.error("#false cannot be negated"));
                }
                self.bump();
                let condition = self.optional_conditions()?;
                return Ok(BodyLiteral::Literal(Literal::Conditional(
                    ConditionalLiteral {
                        head: ConditionalHead::Falsum,
                        condition,
                    },
                )));
            }
            _ => {}
        }
        if self.starts_term() {
            let saved = self.pos;
            if let Some(t) = self.attempt(|p| p.term()) {
                if matches!(self.peek(), Some(TokenKind::LBrace)) {
                    let expr = self.lparse_expr(Some(t))?;
                    return Ok(BodyLiteral::Lparse { negation, expr });
                }
                if let Some(rel) = self.peek_rel() {
                    self.bump();
                    if matches!(self.peek(), Some(TokenKind::AggregateName(_))) {
                        let atom = self.body_aggregate(Some((t, rel)))?;
                        return Ok(BodyLiteral::Literal(Literal::Aggregate(AggregateLiteral {
                            negation,
                            atom,
                        })));
                    }
                    if negation != Negation::None {
                        return Err(self.error("arithmetic literals cannot be negated"));
                    }
                    let right = self.term()?;
                    let lit = BasicLiteral::Arithmetic(ArithmeticLiteral {
                        left: t,
                        rel,
                        right,
                    });
                    let condition = self.optional_conditions()?;
                    return Ok(BodyLiteral::Literal(Literal::Conditional(
                        ConditionalLiteral {
                            head: ConditionalHead::Literal(lit),
                            condition,
                        },
                    )));
                }
            }
            self.pos = saved;
        }
        let atom = self.atom()?;
        let condition = self.optional_conditions()?;
        Ok(BodyLiteral::Literal(Literal::Conditional(
            ConditionalLiteral {
                head: ConditionalHead::Literal(BasicLiteral::Symbolic(SymbolicLiteral {
                    negation,
                    atom,
                })),
                condition,
            },
        )))
    }

    fn body_aggregate(&mut self, left: Option<(Term, Rel)>) -> Result<AggregateAtom, ParseError> {
        let function = self.aggregate_function()?;
        self.expect(&TokenKind::LBrace)?;
        let mut elements = Vec::new();
        if !self.eat(&TokenKind::RBrace) {
            loop {
                let terms = self.term_tuple_until_colon()?;
                let condition = if self.eat(&TokenKind::Colon) {
                    if matches!(self.peek(), Some(TokenKind::Semicolon | TokenKind::RBrace)) {
                        Vec::new()
                    } else {
                        self.conditions()?
                    }
                } else if terms.is_empty() {
                    return Err(self.unexpected("aggregate element"));
                } else {
                    Vec::new()
                };
                elements.push(AggregateElement { terms, condition });
                if !self.eat(&TokenKind::Semicolon) {
                    break;
                }
            }
            self.expect(&TokenKind::RBrace)?;
        }
        let right = self.right_bound()?;
        if left.is_none() && right.is_none() {
            return Err(self.error("aggregate atom needs at least one bound"));
        }
        Ok(AggregateAtom {
            function,
            elements,
            left,
            right,
        })
    }

    fn optional_conditions(&mut self) -> Result<Vec<BasicLiteral>, ParseError> {
        if self.eat(&TokenKind::Colon) {
            self.conditions()
        } else {
            Ok(Vec::new())
        }
    }

    fn conditions(&mut self) -> Result<Vec<BasicLiteral>, ParseError> {
        let mut out = vec![self.basic_literal()?];
        while self.eat(&TokenKind::Comma) {
            out.push(self.basic_literal()?);
        }
        Ok(out)
    }

    // ---- literals ----------------------------------------------------

    fn basic_literal(&mut self) -> Result<BasicLiteral, ParseError> {
        let negation = self.negations()?;
        if negation == Negation::None && self.starts_term() {
            let saved = self.pos;
            if let Some(t) = self.attempt(|p| p.term()) {
                if let Some(rel) = self.peek_rel() {
                    self.bump();
                    let right = self.term()?;
                    return Ok(BasicLiteral::Arithmetic(ArithmeticLiteral {
                        left: t,
                        rel,
                        right,
                    }));
                }
            }
            self.pos = saved;
        }
        let atom = self.atom()?;
        Ok(BasicLiteral::Symbolic(SymbolicLiteral { negation, atom }))
    }

    fn symbolic_literal(&mut self) -> Result<SymbolicLiteral, ParseError> {
        let negation = self.negations()?;
        let atom = self.atom()?;
        Ok(SymbolicLiteral { negation, atom })
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let (strong_negation, predicate) = match self.bump() {
            Some(TokenKind::Ident(name)) => (false, name),
            Some(TokenKind::NegatedIdent(name)) => (true, name),
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("atom"));
            }
        };
        let pool = if self.eat(&TokenKind::LParen) {
            let mut alternatives = Vec::new();
            if !matches!(self.peek(), Some(TokenKind::RParen)) {
                loop {
                    let mut tuple = vec![self.term()?];
                    while self.eat(&TokenKind::Comma) {
                        tuple.push(self.term()?);
                    }
                    alternatives.push(tuple);
                    if !self.eat(&TokenKind::Semicolon) {
                        break;
                    }
                }
            } else {
                alternatives.push(Vec::new());
            }
            self.expect(&TokenKind::RParen)?;
            Pool(alternatives)
        } else {
            Pool::single(Vec::new())
        };
        Ok(Atom {
            strong_negation,
            predicate,
            pool,
        })
    }

    // ---- terms -------------------------------------------------------

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.additive()?;
        while self.eat(&TokenKind::DotDot) {
            let r = self.additive()?;
            t = Term::binop(BinOp::Interval, t, r);
        }
        Ok(t)
    }

    fn additive(&mut self) -> Result<Term, ParseError> {
        let mut t = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::Plus) => BinOp::Add,
                Some(TokenKind::Minus) => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let r = self.multiplicative()?;
            t = Term::binop(op, t, r);
        }
        Ok(t)
    }

    fn multiplicative(&mut self) -> Result<Term, ParseError> {
        let mut t = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::Star) => BinOp::Mul,
                Some(TokenKind::Slash) => BinOp::Div,
                _ => break,
            };
            self.bump();
            let r = self.unary()?;
            t = Term::binop(op, t, r);
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        if self.eat(&TokenKind::Minus) {
            return Ok(Term::negate(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        let tok = self.tokens.get(self.pos).cloned();
        let Some(tok) = tok else {
            return Err(self.unexpected("term"));
        };
        self.pos += 1;
        match tok.kind {
            TokenKind::Numeral(n) => Ok(Term::Numeral(n)),
            TokenKind::Inf => Ok(Term::Inf),
            TokenKind::Sup => Ok(Term::Sup),
            TokenKind::Variable(v) => Ok(Term::Variable(v)),
            TokenKind::Ident(name) => self.function_term(name),
            TokenKind::NegatedIdent(name) => {
                if tok.text.starts_with('~') {
                    return Err(ParseError::new(
                        tok.pos,
                        "strongly negated symbols are not allowed in terms",
                    ));
                }
                Ok(Term::negate(self.function_term(name)?))
            }
            TokenKind::LParen => {
                if self.eat(&TokenKind::RParen) {
                    return Ok(Term::Tuple(Vec::new()));
                }
                let first = self.term()?;
                if self.eat(&TokenKind::RParen) {
                    return Ok(first);
                }
                let mut items = vec![first];
                while self.eat(&TokenKind::Comma) {
                    if matches!(self.peek(), Some(TokenKind::RParen)) {
                        break;
                    }
                    items.push(self.term()?);
                }
                if matches!(self.peek(), Some(TokenKind::Semicolon)) {
                    return Err(self.error("pools are not allowed inside terms"));
                }
                self.expect(&TokenKind::RParen)?;
                Ok(Term::Tuple(items))
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected("term"))
            }
        }
    }

    fn function_term(&mut self, name: String) -> Result<Term, ParseError> {
        if !self.eat(&TokenKind::LParen) {
            if let Some(value) = self.consts.get(&name) {
                return Ok(Term::Numeral(value.clone()));
            }
            return Ok(Term::constant(&name));
        }
        let mut args = Vec::new();
        if !self.eat(&TokenKind::RParen) {
            args.push(self.term()?);
            while self.eat(&TokenKind::Comma) {
                args.push(self.term()?);
            }
            if matches!(self.peek(), Some(TokenKind::Semicolon)) {
                return Err(self.error("pools are not allowed inside terms"));
            }
            self.expect(&TokenKind::RParen)?;
        }
        Ok(Term::function(Symbol::constant(name), args))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: Term, b: Term) -> Term {
        Term::binop(BinOp::Interval, a, b)
    }

    #[test]
    fn term_precedence() {
        assert_eq!(
            parse_term("(1..3)*2").unwrap(),
            Term::binop(BinOp::Mul, iv(Term::num(1), Term::num(3)), Term::num(2))
        );
        assert_eq!(
            parse_term("-X").unwrap(),
            Term::binop(BinOp::Sub, Term::num(0), Term::var("X"))
        );
        let consts: Constants = [("n".to_string(), BigInt::from(4))].into_iter().collect();
        let expected = iv(
            Term::num(1),
            Term::binop(
                BinOp::Sub,
                Term::binop(BinOp::Mul, Term::num(4), Term::num(2)),
                Term::num(1),
            ),
        );
        assert_eq!(parse_term_with("1..n*2-1", &consts).unwrap(), expected);
        // left associativity
        assert_eq!(
            parse_term("X-Y+n").unwrap(),
            Term::binop(
                BinOp::Add,
                Term::binop(BinOp::Sub, Term::var("X"), Term::var("Y")),
                Term::constant("n")
            )
        );
    }

    #[test]
    fn tuples_and_negative_numerals() {
        assert_eq!(
            parse_term("(a,)").unwrap(),
            Term::Tuple(vec![Term::constant("a")])
        );
        assert_eq!(parse_term("(a)").unwrap(), Term::constant("a"));
        assert_eq!(parse_term("()").unwrap(), Term::Tuple(vec![]));
        assert_eq!(parse_term("-3").unwrap(), Term::num(-3));
        assert_eq!(parse_term("-a").unwrap(), Term::negate(Term::constant("a")));
        assert!(parse_term("~a").is_err());
        assert!(parse_term("f(a;b)").is_err());
    }

    #[test]
    fn pool_fact() {
        let p = parse_program("p(a,5;b,10;c,12).").unwrap();
        assert_eq!(p.rules.len(), 1);
        match &p.rules[0].head {
            Head::Disjunction(h) => match &h[0] {
                BasicLiteral::Symbolic(l) => assert_eq!(l.atom.pool.0.len(), 3),
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
        assert!(p.rules[0].body.is_empty());
    }

    #[test]
    fn rule_r2() {
        let consts: Constants = [("n".to_string(), BigInt::from(4))].into_iter().collect();
        let p = parse_program_with(":- X = 1..n, not #count{ Y : q(X,Y) } = 1.", &consts).unwrap();
        let r = &p.rules[0];
        assert_eq!(r.head, Head::Disjunction(vec![]));
        assert_eq!(r.body.len(), 2);
        match &r.body[1] {
            BodyLiteral::Literal(Literal::Aggregate(a)) => {
                assert_eq!(a.negation, Negation::Single);
                assert_eq!(a.atom.function, AggregateFunction::Count);
                assert_eq!(a.atom.right, Some((Rel::Eq, Term::num(1))));
                assert_eq!(a.atom.elements[0].terms, vec![Term::var("Y")]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn disjunctive_head() {
        let p = parse_program("q(1..n,1..n) ; not q(1..n,1..n).").unwrap();
        match &p.rules[0].head {
            Head::Disjunction(h) => assert_eq!(h.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn braces_in_heads() {
        let p = parse_program("{ q(1..2) }. { p ; q }. 1 { p : r } 2. {not p}.").unwrap();
        assert!(matches!(p.rules[0].head, Head::Choice(_)));
        assert!(matches!(p.rules[1].head, Head::Lparse(_)));
        assert!(matches!(p.rules[2].head, Head::Lparse(_)));
        assert!(matches!(p.rules[3].head, Head::Lparse(_)));
    }

    #[test]
    fn head_aggregate() {
        let p = parse_program("1 <= #count{ 0,p(a) : p(a) : q } <= 1 :- r.").unwrap();
        match &p.rules[0].head {
            Head::Aggregate(h) => {
                assert_eq!(h.elements.len(), 1);
                assert_eq!(h.left, Some((Term::num(1), Rel::Le)));
                assert_eq!(h.right, Some((Rel::Le, Term::num(1))));
                assert_eq!(h.elements[0].condition.len(), 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn conditional_literal_takes_following_commas() {
        let p = parse_program("a :- p(X) : q(X), r(X); s.").unwrap();
        let r = &p.rules[0];
        assert_eq!(r.body.len(), 2);
        match &r.body[0] {
            BodyLiteral::Literal(Literal::Conditional(c)) => assert_eq!(c.condition.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_program("p(X) :- q(X)\nr.").unwrap_err();
        assert_eq!(err.pos, Position { line: 2, col: 1 });
        assert!(parse_program("p(X) : q(X).").is_err());
        assert!(parse_program("not not not p.").is_err());
        assert!(parse_program(":- not X = 1.").is_err());
        assert!(parse_program("p :- #count{ X : q(X) }.").is_err());
    }
}
