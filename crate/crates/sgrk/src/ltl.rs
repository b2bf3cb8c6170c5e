//! A small LTL fragment for the strict-semantics export: atoms, Boolean
//! connectives and X, G, F, U, W. The printer and parser round-trip so the
//! emitted text can be self-checked.

use std::fmt;

use crate::error::{Error, Result};
use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ltl {
    True,
    False,
    Atom(String),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Implies(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Globally(Box<Ltl>),
    Finally(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    WeakUntil(Box<Ltl>, Box<Ltl>),
}

impl Ltl {
    pub fn not(a: Ltl) -> Ltl {
        Ltl::Not(Box::new(a))
    }

    pub fn and(a: Ltl, b: Ltl) -> Ltl {
        Ltl::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(a: Ltl) -> Ltl {
        Ltl::Next(Box::new(a))
    }

    pub fn globally(a: Ltl) -> Ltl {
        Ltl::Globally(Box::new(a))
    }

    pub fn finally(a: Ltl) -> Ltl {
        Ltl::Finally(Box::new(a))
    }

    pub fn weak_until(a: Ltl, b: Ltl) -> Ltl {
        Ltl::WeakUntil(Box::new(a), Box::new(b))
    }

    pub fn conj(fs: Vec<Ltl>) -> Ltl {
        let mut it = fs.into_iter();
        match it.next() {
            None => Ltl::True,
            Some(first) => it.fold(first, Ltl::and),
        }
    }

    /// Lifts a state/transition assertion: primed atoms become X-atoms.
    pub fn from_formula(f: &Formula) -> Ltl {
        match f {
            Formula::True => Ltl::True,
            Formula::False => Ltl::False,
            Formula::Atom(n, false) => Ltl::Atom(n.clone()),
            Formula::Atom(n, true) => Ltl::next(Ltl::Atom(n.clone())),
            Formula::Not(a) => Ltl::not(Ltl::from_formula(a)),
            Formula::And(a, b) => Ltl::and(Ltl::from_formula(a), Ltl::from_formula(b)),
            Formula::Or(a, b) => Ltl::or(Ltl::from_formula(a), Ltl::from_formula(b)),
            Formula::Implies(a, b) => {
                Ltl::implies(Ltl::from_formula(a), Ltl::from_formula(b))
            }
            Formula::Iff(a, b) => {
                let (x, y) = (Ltl::from_formula(a), Ltl::from_formula(b));
                Ltl::and(
                    Ltl::implies(x.clone(), y.clone()),
                    Ltl::implies(y, x),
                )
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Ltl::Implies(..) => 1,
            Ltl::Until(..) | Ltl::WeakUntil(..) => 2,
            Ltl::Or(..) => 3,
            Ltl::And(..) => 4,
            Ltl::Not(..) | Ltl::Next(..) | Ltl::Globally(..) | Ltl::Finally(..) => 5,
            _ => 6,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.prec();
        if p < min {
            write!(f, "(")?;
        }
        match self {
            Ltl::True => write!(f, "true")?,
            Ltl::False => write!(f, "false")?,
            Ltl::Atom(n) => write!(f, "{n}")?,
            Ltl::Not(a) => {
                write!(f, "!")?;
                a.fmt_prec(f, 6)?;
            }
            Ltl::Next(a) => {
                write!(f, "X ")?;
                a.fmt_prec(f, 6)?;
            }
            Ltl::Globally(a) => {
                write!(f, "G ")?;
                a.fmt_prec(f, 6)?;
            }
            Ltl::Finally(a) => {
                write!(f, "F ")?;
                a.fmt_prec(f, 6)?;
            }
            Ltl::And(a, b) => {
                a.fmt_prec(f, 4)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 5)?;
            }
            Ltl::Or(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 4)?;
            }
            Ltl::Until(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, " U ")?;
                b.fmt_prec(f, 3)?;
            }
            Ltl::WeakUntil(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, " W ")?;
                b.fmt_prec(f, 3)?;
            }
            Ltl::Implies(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 1)?;
            }
        }
        if p < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

struct P<'a> {
    toks: Vec<Tok<'a>>,
    pos: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok<'a> {
    Word(&'a str),
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<Tok<'_>>> {
    let mut toks = Vec::new();
    let mut rest = src;
    while !rest.is_empty() {
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            rest = &rest[c.len_utf8()..];
        } else if rest.starts_with("->") {
            toks.push(Tok::Implies);
            rest = &rest[2..];
        } else if c == '!' {
            toks.push(Tok::Not);
            rest = &rest[1..];
        } else if c == '&' {
            toks.push(Tok::And);
            rest = &rest[1..];
        } else if c == '|' {
            toks.push(Tok::Or);
            rest = &rest[1..];
        } else if c == '(' {
            toks.push(Tok::LParen);
            rest = &rest[1..];
        } else if c == ')' {
            toks.push(Tok::RParen);
            rest = &rest[1..];
        } else if c.is_alphanumeric() || c == '_' || c == ':' {
            let end = rest
                .find(|ch: char| !(ch.is_alphanumeric() || ch == '_' || ch == ':'))
                .unwrap_or(rest.len());
            toks.push(Tok::Word(&rest[..end]));
            rest = &rest[end..];
        } else {
            return Err(Error::Invalid(format!("unexpected character `{c}` in LTL")));
        }
    }
    Ok(toks)
}

impl<'a> P<'a> {
    fn peek(&self) -> Option<Tok<'a>> {
        self.toks.get(self.pos).copied()
    }

    fn eat(&mut self, t: Tok<'a>) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn implies(&mut self) -> Result<Ltl> {
        let lhs = self.until()?;
        if self.eat(Tok::Implies) {
            Ok(Ltl::implies(lhs, self.implies()?))
        } else {
            Ok(lhs)
        }
    }

    fn until(&mut self) -> Result<Ltl> {
        let mut f = self.or()?;
        loop {
            match self.peek() {
                Some(Tok::Word("U")) => {
                    self.pos += 1;
                    f = Ltl::Until(Box::new(f), Box::new(self.or()?));
                }
                Some(Tok::Word("W")) => {
                    self.pos += 1;
                    f = Ltl::WeakUntil(Box::new(f), Box::new(self.or()?));
                }
                _ => return Ok(f),
            }
        }
    }

    fn or(&mut self) -> Result<Ltl> {
        let mut f = self.and()?;
        while self.eat(Tok::Or) {
            f = Ltl::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Ltl> {
        let mut f = self.unary()?;
        while self.eat(Tok::And) {
            f = Ltl::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Ltl> {
        if self.eat(Tok::Not) {
            return Ok(Ltl::not(self.unary()?));
        }
        match self.peek() {
            Some(Tok::Word("X")) => {
                self.pos += 1;
                Ok(Ltl::next(self.unary()?))
            }
            Some(Tok::Word("G")) => {
                self.pos += 1;
                Ok(Ltl::globally(self.unary()?))
            }
            Some(Tok::Word("F")) => {
                self.pos += 1;
                Ok(Ltl::finally(self.unary()?))
            }
            Some(Tok::Word("true")) => {
                self.pos += 1;
                Ok(Ltl::True)
            }
            Some(Tok::Word("false")) => {
                self.pos += 1;
                Ok(Ltl::False)
            }
            Some(Tok::Word(w)) => {
                self.pos += 1;
                Ok(Ltl::Atom(w.to_string()))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.implies()?;
                if !self.eat(Tok::RParen) {
                    return Err(Error::Invalid("expected `)` in LTL".into()));
                }
                Ok(f)
            }
            _ => Err(Error::Invalid("unexpected end of LTL input".into())),
        }
    }
}

pub fn parse_ltl(src: &str) -> Result<Ltl> {
    let mut p = P { toks: lex(src)?, pos: 0 };
    let f = p.implies()?;
    if p.pos != p.toks.len() {
        return Err(Error::Invalid("trailing input after LTL formula".into()));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn print_parse_round_trips() {
        for src in [
            "G F a -> G F b",
            "a W !b",
            "(X a & b) U c",
            "G (a -> X a)",
            "true W false",
            "!(a | b) & X X c",
        ] {
            let f = parse_ltl(src).unwrap();
            let printed = f.to_string();
            assert_eq!(parse_ltl(&printed).unwrap(), f, "via {printed:?}");
        }
    }

    #[test]
    fn primed_atoms_become_next() {
        let f = crate::formula::parse_formula("a' <-> a").unwrap();
        let l = Ltl::from_formula(&f);
        assert_eq!(l.to_string(), "(X a -> a) & (a -> X a)");
        assert_eq!(parse_ltl(&l.to_string()).unwrap(), l);
    }
}
