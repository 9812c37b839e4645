use std::collections::BTreeSet;
use std::fmt::{self, Write};

use super::{fresh_name, Kind, Term};

struct Printer {
    free: BTreeSet<String>,
    scope: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Top,
    Fun,
    Arg,
}

impl Printer {
    fn term(&mut self, t: &Term, prec: Prec, out: &mut String) {
        match t.kind() {
            Kind::Free(n) => out.push_str(n),
            Kind::Bound(k) => {
                let i = self.scope.len().checked_sub(*k as usize + 1);
                match i {
                    Some(i) => out.push_str(&self.scope[i]),
                    None => {
                        let _ = write!(out, "?{k}");
                    }
                }
            }
            Kind::Lam(..) => {
                if prec > Prec::Top {
                    out.push('(');
                }
                out.push('\\');
                let mut t = t;
                let mut pushed = 0;
                while let Kind::Lam(h, b) = t.kind() {
                    let name = fresh_name(h, |n| self.free.contains(n) || self.scope.iter().any(|s| s == n));
                    if pushed > 0 {
                        out.push(' ');
                    }
                    out.push_str(&name);
                    self.scope.push(name);
                    pushed += 1;
                    t = b;
                }
                out.push('.');
                self.term(t, Prec::Top, out);
                self.scope.truncate(self.scope.len() - pushed);
                if prec > Prec::Top {
                    out.push(')');
                }
            }
            Kind::App(..) => {
                let (head, args) = t.spine();
                if prec == Prec::Arg {
                    out.push('(');
                }
                self.term(head, Prec::Fun, out);
                for a in args {
                    out.push(' ');
                    self.term(a, Prec::Arg, out);
                }
                if prec == Prec::Arg {
                    out.push(')');
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut p = Printer { free: self.free_vars(), scope: Vec::new() };
        let mut out = String::new();
        p.term(self, Prec::Top, &mut out);
        f.write_str(&out)
    }
}
