//! Line-oriented text format for proof fragments.
//!
//! ```text
//! id <M>
//! wconv <kind> <lhs> <rhs> [cert=asserted]
//! leib <X> <Y> <M> <N> { <left> } { <right> }
//! omega <P> <Q> [ord=<ordinal>] n=<k> [why="<text>"] { <sample>* }
//! conv <t0> <t1> ... <tk>
//! ```
//!
//! Terms with spaces are wrapped in parentheses. Cycle certificates are
//! not written; the checker finds them again.

use std::fmt::Write as _;

use super::{ConvKind, ProofError, ProofNode};
use crate::ordinals::Ordinal;
use crate::reduction::Certificate;
use crate::term::{parse, Term};

fn term_token(t: &Term) -> String {
    let s = t.to_string();
    if s.contains(char::is_whitespace) || s.starts_with(['\\', 'λ']) {
        format!("({s})")
    } else {
        s
    }
}

pub fn print_proof(p: &ProofNode) -> String {
    let mut out = String::new();
    write_node(p, 0, &mut out);
    out
}

fn write_node(p: &ProofNode, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match p {
        ProofNode::Identity(m) => {
            let _ = writeln!(out, "{pad}id {}", term_token(m));
        }
        ProofNode::WeakConv { lhs, rhs, kind, cert } => {
            let _ = write!(out, "{pad}wconv {} {} {}", kind.name(), term_token(lhs), term_token(rhs));
            if matches!(cert, Some(Certificate::Asserted)) {
                out.push_str(" cert=asserted");
            }
            out.push('\n');
        }
        ProofNode::Leibnitz { x, y, m, n, left, right } => {
            let _ = writeln!(
                out,
                "{pad}leib {} {} {} {} {{",
                term_token(x),
                term_token(y),
                term_token(m),
                term_token(n)
            );
            write_node(left, indent + 1, out);
            let _ = writeln!(out, "{pad}}} {{");
            write_node(right, indent + 1, out);
            let _ = writeln!(out, "{pad}}}");
        }
        ProofNode::Oracle { p, q, samples, bound, justification } => {
            let _ = write!(out, "{pad}omega {} {}", term_token(p), term_token(q));
            if let Some(b) = bound {
                let _ = write!(out, " ord={}", b.compact());
            }
            let _ = write!(out, " n={}", samples.len());
            if !justification.is_empty() {
                let _ = write!(out, " why={justification:?}");
            }
            out.push_str(" {\n");
            for s in samples {
                write_node(s, indent + 1, out);
            }
            let _ = writeln!(out, "{pad}}}");
        }
        ProofNode::Conversion(chain) => {
            out.push_str(&pad);
            out.push_str("conv");
            for t in chain {
                out.push(' ');
                out.push_str(&term_token(t));
            }
            out.push('\n');
        }
    }
}

struct Tokens {
    toks: Vec<(String, usize)>,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<(String, usize)>, ProofError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = line.split('%').next().unwrap_or("");
        let mut chars = line.chars().peekable();
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
                continue;
            }
            if c == '{' || c == '}' {
                chars.next();
                out.push((c.to_string(), line_no));
                continue;
            }
            let mut tok = String::new();
            let (mut depth, mut quoted) = (0usize, false);
            while let Some(&c) = chars.peek() {
                if !quoted && depth == 0 && (c.is_whitespace() || c == '{' || c == '}') {
                    break;
                }
                chars.next();
                tok.push(c);
                match c {
                    '"' => quoted = !quoted,
                    '\\' if quoted => {
                        if let Some(e) = chars.next() {
                            tok.push(e);
                        }
                    }
                    '(' if !quoted => depth += 1,
                    ')' if !quoted => {
                        depth = depth.checked_sub(1).ok_or_else(|| syntax(line_no, "unbalanced ')'"))?
                    }
                    _ => {}
                }
            }
            if depth != 0 || quoted {
                return Err(syntax(line_no, "unbalanced '(' or '\"'"));
            }
            out.push((tok, line_no));
        }
    }
    Ok(out)
}

fn syntax(line: usize, message: impl Into<String>) -> ProofError {
    ProofError::Syntax { line, message: message.into() }
}

fn unquote(s: &str, line: usize) -> Result<String, ProofError> {
    let inner = s
        .strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .ok_or_else(|| syntax(line, "expected a quoted string"))?;
    let mut out = String::new();
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('n') => out.push('\n'),
                Some('t') => out.push('\t'),
                Some(e) => out.push(e),
                None => return Err(syntax(line, "dangling escape")),
            }
        } else {
            out.push(c);
        }
    }
    Ok(out)
}

impl Tokens {
    fn line(&self) -> usize {
        self.toks.get(self.pos).or(self.toks.last()).map_or(1, |t| t.1)
    }

    fn next(&mut self) -> Result<(String, usize), ProofError> {
        let t = self.toks.get(self.pos).cloned().ok_or_else(|| syntax(self.line(), "unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn peek(&self) -> Option<&(String, usize)> {
        self.toks.get(self.pos)
    }

    fn expect(&mut self, want: &str) -> Result<(), ProofError> {
        let (t, line) = self.next()?;
        if t == want {
            Ok(())
        } else {
            Err(syntax(line, format!("expected '{want}', found '{t}'")))
        }
    }

    fn term(&mut self) -> Result<Term, ProofError> {
        let (t, line) = self.next()?;
        parse(&t).map_err(|e| syntax(line, format!("bad term '{t}': {}", e.message)))
    }

    /// `key=value` if the next token has that key.
    fn option(&mut self, key: &str) -> Option<(String, usize)> {
        let (t, line) = self.peek()?;
        let v = t.strip_prefix(key)?.strip_prefix('=')?.to_string();
        let line = *line;
        self.pos += 1;
        Some((v, line))
    }

    fn block(&mut self) -> Result<ProofNode, ProofError> {
        self.expect("{")?;
        let n = self.node()?;
        self.expect("}")?;
        Ok(n)
    }

    fn node(&mut self) -> Result<ProofNode, ProofError> {
        let (kw, line) = self.next()?;
        match kw.as_str() {
            "id" => Ok(ProofNode::Identity(self.term()?)),
            "wconv" => {
                let (k, kl) = self.next()?;
                let kind = ConvKind::from_name(&k).ok_or_else(|| syntax(kl, format!("unknown kind '{k}'")))?;
                let lhs = self.term()?;
                let rhs = self.term()?;
                let cert = match self.option("cert") {
                    Some((v, _)) if v == "asserted" => Some(Certificate::Asserted),
                    Some((v, l)) => return Err(syntax(l, format!("unknown certificate '{v}'"))),
                    None => None,
                };
                Ok(ProofNode::WeakConv { lhs, rhs, kind, cert })
            }
            "leib" => {
                let x = self.term()?;
                let y = self.term()?;
                let m = self.term()?;
                let n = self.term()?;
                let left = self.block()?;
                let right = self.block()?;
                Ok(ProofNode::leibnitz(x, y, m, n, left, right))
            }
            "omega" => {
                let p = self.term()?;
                let q = self.term()?;
                let bound = match self.option("ord") {
                    Some((v, l)) => Some(v.parse::<Ordinal>().map_err(|e| syntax(l, e.to_string()))?),
                    None => None,
                };
                let (n, nl) = self.option("n").ok_or_else(|| syntax(line, "omega needs n=<count>"))?;
                let n: usize = n.parse().map_err(|_| syntax(nl, "bad sample count"))?;
                let justification = match self.option("why") {
                    Some((v, l)) => unquote(&v, l)?,
                    None => String::new(),
                };
                self.expect("{")?;
                let mut samples = Vec::new();
                while self.peek().is_some_and(|t| t.0 != "}") {
                    samples.push(self.node()?);
                }
                self.expect("}")?;
                if samples.len() != n {
                    return Err(syntax(line, format!("n={n} but {} samples given", samples.len())));
                }
                Ok(ProofNode::Oracle { p, q, samples, bound, justification })
            }
            "conv" => {
                let mut chain = Vec::new();
                while self.peek().is_some_and(|t| t.1 == line && t.0 != "{" && t.0 != "}") {
                    chain.push(self.term()?);
                }
                if chain.is_empty() {
                    return Err(syntax(line, "empty conversion chain"));
                }
                Ok(ProofNode::Conversion(chain))
            }
            _ => Err(syntax(line, format!("unknown node '{kw}'"))),
        }
    }
}

/// Text after `%` on a line is a comment.
pub fn parse_proof(text: &str) -> Result<ProofNode, ProofError> {
    let mut t = Tokens { toks: tokenize(text)?, pos: 0 };
    let node = t.node()?;
    if let Some((tok, line)) = t.peek() {
        return Err(syntax(*line, format!("trailing input '{tok}'")));
    }
    Ok(node)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::*;

    #[test]
    fn round_trip() {
        let text = "\
leib (\\u.u) z ($I $K) $K {
  wconv beta-contract ((\\u.u) ($I $K)) ($I $K)
} {
  omega ($I $K) $K ord=w^(w+2)*2 n=1 why=\"by \\\"eta\\\"\" {
    conv ($I $K $I) ($K $I) % trailing comment
  }
}
";
        let p = parse_proof(text).unwrap();
        let ProofNode::Leibnitz { right, .. } = &p else { panic!() };
        let ProofNode::Oracle { justification, bound, samples, .. } = right.as_ref() else { panic!() };
        assert_eq!(justification, "by \"eta\"");
        assert_eq!(bound.as_ref().unwrap().compact(), "w^(w+2)*2");
        assert_eq!(samples.len(), 1);
        assert_eq!(parse_proof(&print_proof(&p)).unwrap(), p);
    }

    #[test]
    fn certificates_and_errors() {
        let p = parse_proof("wconv to-Omega ($Omega $I) $Omega cert=asserted").unwrap();
        assert!(matches!(p, ProofNode::WeakConv { cert: Some(Certificate::Asserted), .. }));
        assert_eq!(parse_proof(&print_proof(&p)).unwrap(), p);
        assert!(matches!(parse_proof("id"), Err(ProofError::Syntax { line: 1, .. })));
        assert!(matches!(parse_proof("omega $I $I n=2 {\n id $I\n}"), Err(ProofError::Syntax { .. })));
        assert!(matches!(parse_proof("id $I\nid $K"), Err(ProofError::Syntax { line: 2, .. })));
        assert!(matches!(parse_proof("frob $I"), Err(ProofError::Syntax { .. })));
        assert_eq!(parse_proof("id (\\x.x)").unwrap(), ProofNode::Identity(i()));
    }
}
