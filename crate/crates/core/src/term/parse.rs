//! Concrete syntax.
//!
//! ```text
//! term ::= lam | app
//! lam  ::= ("\" | "λ") ident+ "." term
//! app  ::= atom+
//! atom ::= ident | "(" term ")" | "#" nat | "$" name
//! ```
//!
//! An abstraction is also accepted as the last element of an application.

use thiserror::Error;

use super::{church, combinator, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lambda,
    Dot,
    Open,
    Close,
    Ident(String),
    Numeral(u64),
    Combinator(String),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    let err = |line, column, message: String| ParseError { line, column, message };
    while let Some(&c) = chars.peek() {
        let (l, cl) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            '\\' | 'λ' => {
                bump(&mut chars);
                out.push((Tok::Lambda, l, cl));
            }
            '.' => {
                bump(&mut chars);
                out.push((Tok::Dot, l, cl));
            }
            '(' => {
                bump(&mut chars);
                out.push((Tok::Open, l, cl));
            }
            ')' => {
                bump(&mut chars);
                out.push((Tok::Close, l, cl));
            }
            '#' => {
                bump(&mut chars);
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                let n = s.parse().map_err(|_| err(l, cl, "expected a natural after '#'".into()))?;
                out.push((Tok::Numeral(n), l, cl));
            }
            '$' => {
                bump(&mut chars);
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '*') {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                out.push((Tok::Combinator(s), l, cl));
            }
            c if is_ident(c) => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !is_ident(d) {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                out.push((Tok::Ident(s), l, cl));
            }
            other => return Err(err(l, cl, format!("unexpected character {other:?}"))),
        }
    }
    out.push((Tok::End, line, col));
    Ok(out)
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (_, line, column) = self.toks[self.pos];
        ParseError { line, column, message: message.into() }
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if *self.peek() == Tok::Lambda {
            return self.lam();
        }
        let mut t = self.atom()?;
        loop {
            match self.peek() {
                Tok::Lambda => return Ok(Term::app(t, self.lam()?)),
                Tok::Ident(_) | Tok::Open | Tok::Numeral(_) | Tok::Combinator(_) => {
                    t = Term::app(t, self.atom()?);
                }
                _ => return Ok(t),
            }
        }
    }

    fn lam(&mut self) -> Result<Term, ParseError> {
        self.next();
        let mut names = Vec::new();
        while let Tok::Ident(n) = self.peek() {
            names.push(n.clone());
            self.next();
        }
        if names.is_empty() {
            return Err(self.error("expected a binder name"));
        }
        if *self.peek() != Tok::Dot {
            return Err(self.error("expected '.'"));
        }
        self.next();
        let body = self.term()?;
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        Ok(Term::lams(&refs, body))
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Ident(n) => {
                self.next();
                Ok(Term::var(&n))
            }
            Tok::Numeral(n) => {
                self.next();
                Ok(church(n))
            }
            Tok::Combinator(c) => {
                let t = combinator(&c).ok_or_else(|| self.error(format!("unknown combinator ${c}")))?;
                self.next();
                Ok(t)
            }
            Tok::Open => {
                self.next();
                let t = self.term()?;
                if *self.peek() != Tok::Close {
                    return Err(self.error("expected ')'"));
                }
                self.next();
                Ok(t)
            }
            Tok::End => Err(self.error("unexpected end of input")),
            other => Err(self.error(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses a term.
pub fn parse(text: &str) -> Result<Term, ParseError> {
    let mut lx = Lexer { toks: lex(text)?, pos: 0 };
    let t = lx.term()?;
    if *lx.peek() != Tok::End {
        return Err(lx.error("trailing input"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::*;

    #[test]
    fn examples() {
        assert_eq!(parse("\\x.x").unwrap(), i());
        assert_eq!(parse("(\\x.x x)(\\x.x x)").unwrap(), omega_big());
        assert_eq!(parse("\\f.\\x.f (f x)").unwrap(), church(2));
        assert_eq!(parse("λf x.f x").unwrap(), church(1));
        assert_eq!(parse("#3").unwrap(), church(3));
        assert_eq!(parse("$Omega").unwrap(), omega_big());
        assert_eq!(parse("f \\x.x").unwrap(), Term::app(Term::var("f"), i()));
    }

    #[test]
    fn body_extends_right_and_application_is_left_associative() {
        let t = parse("\\x.a b c").unwrap();
        let body = Term::apps(Term::var("a"), [Term::var("b"), Term::var("c")]);
        assert_eq!(t, Term::lam("x", body));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("\\x.(x").unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
        let e = parse("a\n  \\.x").unwrap_err();
        assert_eq!((e.line, e.column), (2, 4));
        assert!(parse("$Nope").is_err());
        assert!(parse("").is_err());
        assert!(parse("x)").is_err());
    }
}
