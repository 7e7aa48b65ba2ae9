use std::fmt;

use num_bigint::BigInt;

use super::{ParseError, Position};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Numeral(BigInt),
    /// Starts with a lower-case letter.
    Ident(String),
    /// `-p` (or `~p`) in prefix position.
    NegatedIdent(String),
    /// Starts with an upper-case letter.
    Variable(String),
    /// `#count`, `#sum`, `#sum+`, `#min`, `#max`.
    AggregateName(String),
    Inf,
    Sup,
    False,
    Not,
    Plus,
    Minus,
    Star,
    Slash,
    DotDot,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    Comma,
    Semicolon,
    Colon,
    Bar,
    If,
    Dot,
    LParen,
    RParen,
    LBrace,
    RBrace,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TokenKind::*;
        let s = match self {
            Numeral(n) => return write!(f, "numeral {n}"),
            Ident(s) => return write!(f, "identifier {s}"),
            NegatedIdent(s) => return write!(f, "negated constant -{s}"),
            Variable(s) => return write!(f, "variable {s}"),
            AggregateName(s) => return write!(f, "#{s}"),
            Inf => "#inf",
            Sup => "#sup",
            False => "#false",
            Not => "not",
            Plus => "+",
            Minus => "-",
            Star => "*",
            Slash => "/",
            DotDot => "..",
            Eq => "=",
            Ne => "!=",
            Lt => "<",
            Gt => ">",
            Le => "<=",
            Ge => ">=",
            Comma => ",",
            Semicolon => ";",
            Colon => ":",
            Bar => "|",
            If => ":-",
            Dot => ".",
            LParen => "(",
            RParen => ")",
            LBrace => "{",
            RBrace => "}",
        };
        write!(f, "'{s}'")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub pos: Position,
}

impl TokenKind {
    /// Tokens after which `-` is binary minus rather than a sign.
    fn ends_term(&self) -> bool {
        matches!(
            self,
            TokenKind::Numeral(_)
                | TokenKind::Ident(_)
                | TokenKind::NegatedIdent(_)
                | TokenKind::Variable(_)
                | TokenKind::Inf
                | TokenKind::Sup
                | TokenKind::RParen
        )
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens: Vec<Token> = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
        let pos = Position { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }

        let start = i;
        let after_term = tokens.last().is_some_and(|t| t.kind.ends_term());
        let next = chars.get(i + 1).copied();
        let take_while = |from: usize, pred: fn(char) -> bool| {
            let mut j = from;
            while j < chars.len() && pred(chars[j]) {
                j += 1;
            }
            j
        };

        let kind = if c.is_ascii_digit()
            || (c == '-' && !after_term && next.is_some_and(|n| n.is_ascii_digit()))
        {
            let end = take_while(i + 1, |c| c.is_ascii_digit());
            let s: String = chars[i..end].iter().collect();
            i = end;
            TokenKind::Numeral(s.parse().expect("digits"))
        } else if (c == '-' && !after_term || c == '~')
            && next.is_some_and(|n| n.is_ascii_lowercase())
        {
            let end = take_while(i + 1, is_ident_char);
            let name: String = chars[i + 1..end].iter().collect();
            i = end;
            if name == "not" {
                return Err(ParseError::new(pos, "'not' cannot be strongly negated"));
            }
            TokenKind::NegatedIdent(name)
        } else if c.is_ascii_lowercase() {
            let end = take_while(i, is_ident_char);
            let name: String = chars[i..end].iter().collect();
            i = end;
            if name == "not" {
                TokenKind::Not
            } else {
                TokenKind::Ident(name)
            }
        } else if c.is_ascii_uppercase() {
            let end = take_while(i, is_ident_char);
            let name: String = chars[i..end].iter().collect();
            i = end;
            TokenKind::Variable(name)
        } else if c == '#' {
            let end = take_while(i + 1, |c| c.is_ascii_alphabetic());
            let word: String = chars[i + 1..end].iter().collect();
            i = end;
            match word.as_str() {
                "inf" => TokenKind::Inf,
                "sup" => TokenKind::Sup,
                "false" => TokenKind::False,
                "count" | "min" | "max" => TokenKind::AggregateName(word),
                "sum" => {
                    if chars.get(i) == Some(&'+') {
                        i += 1;
                        TokenKind::AggregateName("sum+".into())
                    } else {
                        TokenKind::AggregateName(word)
                    }
                }
                _ => {
                    return Err(ParseError::new(pos, format!("unknown directive #{word}")));
                }
            }
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let (kind, len) = match two.as_str() {
                ".." => (TokenKind::DotDot, 2),
                ":-" => (TokenKind::If, 2),
                "!=" => (TokenKind::Ne, 2),
                "<=" => (TokenKind::Le, 2),
                ">=" => (TokenKind::Ge, 2),
                "<>" => (TokenKind::Ne, 2),
                "==" => (TokenKind::Eq, 2),
                _ => {
                    let k = match c {
                        '+' => TokenKind::Plus,
                        '-' => TokenKind::Minus,
                        '*' => TokenKind::Star,
                        '/' => TokenKind::Slash,
                        '=' => TokenKind::Eq,
                        '<' => TokenKind::Lt,
                        '>' => TokenKind::Gt,
                        ',' => TokenKind::Comma,
                        ';' => TokenKind::Semicolon,
                        ':' => TokenKind::Colon,
                        '|' => TokenKind::Bar,
                        '.' => TokenKind::Dot,
                        '(' => TokenKind::LParen,
                        ')' => TokenKind::RParen,
                        '{' => TokenKind::LBrace,
                        '}' => TokenKind::RBrace,
                        _ => {
                            return Err(ParseError::new(pos, format!("unexpected character {c:?}")))
                        }
                    };
                    (k, 1)
                }
            };
            i += len;
            kind
        };
        col += i - start;
        tokens.push(Token {
            kind,
            text: chars[start..i].iter().collect(),
            pos,
        });
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use TokenKind::*;

    fn kinds(s: &str) -> Vec<TokenKind> {
        tokenize(s).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn simple_fact() {
        assert_eq!(
            kinds("p(a,5)."),
            vec![
                Ident("p".into()),
                LParen,
                Ident("a".into()),
                Comma,
                Numeral(5.into()),
                RParen,
                Dot
            ]
        );
    }

    #[test]
    fn first_two_characters_decide() {
        assert_eq!(kinds("-q"), vec![NegatedIdent("q".into())]);
        assert_eq!(kinds("~q"), vec![NegatedIdent("q".into())]);
        assert_eq!(kinds("-12"), vec![Numeral((-12).into())]);
        assert_eq!(kinds("#count"), vec![AggregateName("count".into())]);
        assert_eq!(kinds("#sum+"), vec![AggregateName("sum+".into())]);
        assert_eq!(kinds("#inf #sup #false"), vec![Inf, Sup, False]);
        assert_eq!(kinds("not nota"), vec![Not, Ident("nota".into())]);
    }

    #[test]
    fn minus_after_term_is_binary() {
        assert_eq!(
            kinds("n*2-1"),
            vec![
                Ident("n".into()),
                Star,
                Numeral(2.into()),
                Minus,
                Numeral(1.into())
            ]
        );
        assert_eq!(
            kinds("X-a"),
            vec![Variable("X".into()), Minus, Ident("a".into())]
        );
        assert_eq!(
            kinds("X - -3"),
            vec![Variable("X".into()), Minus, Numeral((-3).into())]
        );
    }

    #[test]
    fn comments_and_positions() {
        let toks = tokenize("% comment\n  p :- q.").unwrap();
        assert_eq!(toks[0].pos, Position { line: 2, col: 3 });
        assert_eq!(toks[1].kind, If);
        assert_eq!(toks[1].pos, Position { line: 2, col: 5 });
    }

    #[test]
    fn unknown_character() {
        let err = tokenize("p :- q & r.").unwrap_err();
        assert_eq!(err.pos, Position { line: 1, col: 8 });
    }
}
