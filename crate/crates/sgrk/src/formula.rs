//! Boolean state/transition formulas: AST, parser, printer, evaluation.
//!
//! Grammar (tightest first): `!`, `&`, `|`, `->` (right-associative), `<->`.
//! Atoms are identifiers, optionally primed (`v'`), plus `true`/`false`.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::fmt;

use crate::dd::{Dd, Kernel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    /// `Atom(name, primed)`
    Atom(String, bool),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string(), false)
    }

    pub fn atom_primed(name: &str) -> Formula {
        Formula::Atom(name.to_string(), true)
    }

    /// Conjunction of a list, `true` if empty.
    pub fn conj(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::True,
            1 => fs.pop().unwrap(),
            _ => {
                let mut it = fs.into_iter();
                let first = it.next().unwrap();
                it.fold(first, Formula::and)
            }
        }
    }

    /// Disjunction of a list, `false` if empty.
    pub fn disj(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::False,
            1 => fs.pop().unwrap(),
            _ => {
                let mut it = fs.into_iter();
                let first = it.next().unwrap();
                it.fold(first, Formula::or)
            }
        }
    }

    /// Atom names occurring in the formula, `(name, primed)` pairs.
    pub fn atoms(&self) -> BTreeSet<(String, bool)> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<(String, bool)>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(n, p) => {
                out.insert((n.clone(), *p));
            }
            Formula::Not(a) => a.collect_atoms(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Evaluates under an assignment keyed by `(name, primed)`;
    /// missing atoms default to false.
    pub fn eval(&self, asg: &dyn Fn(&str, bool) -> bool) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(n, p) => asg(n, *p),
            Formula::Not(a) => !a.eval(asg),
            Formula::And(a, b) => a.eval(asg) && b.eval(asg),
            Formula::Or(a, b) => a.eval(asg) || b.eval(asg),
            Formula::Implies(a, b) => !a.eval(asg) || b.eval(asg),
            Formula::Iff(a, b) => a.eval(asg) == b.eval(asg),
        }
    }

    /// Compiles to a decision diagram over the kernel's registry.
    pub fn to_dd(&self, k: &Kernel) -> Result<Dd> {
        match self {
            Formula::True => Ok(k.mk_true()),
            Formula::False => Ok(k.mk_false()),
            Formula::Atom(n, p) => {
                let name = if *p { format!("{n}'") } else { n.clone() };
                k.mk_var(&name)
            }
            Formula::Not(a) => k.not(a.to_dd(k)?),
            Formula::And(a, b) => k.and(a.to_dd(k)?, b.to_dd(k)?),
            Formula::Or(a, b) => k.or(a.to_dd(k)?, b.to_dd(k)?),
            Formula::Implies(a, b) => k.implies(a.to_dd(k)?, b.to_dd(k)?),
            Formula::Iff(a, b) => k.iff(a.to_dd(k)?, b.to_dd(k)?),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Iff(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(..) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.prec();
        if p < min {
            write!(f, "(")?;
        }
        match self {
            Formula::True => write!(f, "true")?,
            Formula::False => write!(f, "false")?,
            Formula::Atom(n, primed) => {
                write!(f, "{n}{}", if *primed { "'" } else { "" })?
            }
            Formula::Not(a) => {
                write!(f, "!")?;
                a.fmt_prec(f, 5)?;
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 4)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 3)?;
            }
            Formula::Implies(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 1)?;
            }
            Formula::Iff(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " <-> ")?;
                b.fmt_prec(f, 1)?;
            }
        }
        if p < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String, bool),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    /// `GF(` opener for liveness terms in spec files.
    Gf,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    pub line: usize,
    pub col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Lexer { src, pos: 0, line, col: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { line: self.line, col: self.col, msg: msg.into() }
    }

    fn bump(&mut self, n: usize) {
        for c in self.src[self.pos..self.pos + n].chars() {
            if c == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        self.pos += n;
    }

    fn next_tok(&mut self) -> Result<Option<(Tok, usize, usize)>> {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.bump(c.len_utf8());
            } else if c == '#' {
                while self.pos < self.src.len() && !self.src[self.pos..].starts_with('\n') {
                    self.bump(1);
                }
            } else {
                break;
            }
        }
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let (line, col) = (self.line, self.col);
        let rest = &self.src[self.pos..];
        let tok = if rest.starts_with("<->") {
            self.bump(3);
            Tok::Iff
        } else if rest.starts_with("->") {
            self.bump(2);
            Tok::Implies
        } else if rest.starts_with('&') {
            self.bump(1);
            Tok::And
        } else if rest.starts_with('|') {
            self.bump(1);
            Tok::Or
        } else if rest.starts_with('!') {
            self.bump(1);
            Tok::Not
        } else if rest.starts_with('(') {
            self.bump(1);
            Tok::LParen
        } else if rest.starts_with(')') {
            self.bump(1);
            Tok::RParen
        } else if rest.starts_with("GF(") {
            self.bump(3);
            Tok::Gf
        } else {
            let c = rest.chars().next().unwrap();
            if !(c.is_alphanumeric() || c == '_') {
                return Err(self.err(format!("unexpected character `{c}`")));
            }
            let end = rest
                .find(|ch: char| !(ch.is_alphanumeric() || ch == '_' || ch == ':'))
                .unwrap_or(rest.len());
            let word = &rest[..end];
            self.bump(end);
            let primed = self.src[self.pos..].starts_with('\'');
            if primed {
                self.bump(1);
            }
            match (word, primed) {
                ("true", false) => Tok::True,
                ("false", false) => Tok::False,
                _ => Tok::Ident(word.to_string(), primed),
            }
        };
        Ok(Some((tok, line, col)))
    }
}

pub struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    /// Tokenizes `src`; `line` seeds position reporting for embedded text.
    pub fn new(src: &str, line: usize) -> Result<Self> {
        let mut lex = Lexer::new(src, line);
        let mut toks = Vec::new();
        while let Some(t) = lex.next_tok()? {
            toks.push(t);
        }
        Ok(Parser { toks, pos: 0, end: (lex.line, lex.col) })
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|&(_, l, c)| (l, c)).unwrap_or(self.end)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Syntax { line, col, msg: msg.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    /// A full formula; fails if trailing tokens remain.
    pub fn parse_all(&mut self) -> Result<Formula> {
        let f = self.parse_iff()?;
        if !self.at_end() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(f)
    }

    /// A sequence of `GF(assertion)` terms (primes rejected inside).
    pub fn parse_gf_list(&mut self) -> Result<Vec<Formula>> {
        let mut out = Vec::new();
        while !self.at_end() {
            if !self.eat(&Tok::Gf) {
                return Err(self.err("expected `GF(`"));
            }
            let f = self.parse_iff()?;
            if !self.eat(&Tok::RParen) {
                return Err(self.err("expected `)` closing GF"));
            }
            if let Some((n, _)) = f.atoms().iter().find(|(_, p)| *p) {
                return Err(self.err(format!("primed atom `{n}'` not allowed inside GF")));
            }
            out.push(f);
        }
        Ok(out)
    }

    fn parse_iff(&mut self) -> Result<Formula> {
        let mut f = self.parse_implies()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.parse_implies()?;
            f = Formula::iff(f, rhs);
        }
        Ok(f)
    }

    fn parse_implies(&mut self) -> Result<Formula> {
        let lhs = self.parse_or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.parse_implies()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_or(&mut self) -> Result<Formula> {
        let mut f = self.parse_and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.parse_and()?;
            f = Formula::or(f, rhs);
        }
        Ok(f)
    }

    fn parse_and(&mut self) -> Result<Formula> {
        let mut f = self.parse_unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.parse_unary()?;
            f = Formula::and(f, rhs);
        }
        Ok(f)
    }

    fn parse_unary(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Not) {
            return Ok(Formula::not(self.parse_unary()?));
        }
        if self.eat(&Tok::LParen) {
            let f = self.parse_iff()?;
            if !self.eat(&Tok::RParen) {
                return Err(self.err("expected `)`"));
            }
            return Ok(f);
        }
        match self.peek().cloned() {
            Some(Tok::True) => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some(Tok::Ident(n, p)) => {
                self.pos += 1;
                Ok(Formula::Atom(n, p))
            }
            _ => Err(self.err("expected atom, `!`, or `(`")),
        }
    }
}

/// Parses one complete formula from `src`; `line` is its 1-based source line.
pub fn parse_formula_at(src: &str, line: usize) -> Result<Formula> {
    Parser::new(src, line)?.parse_all()
}

pub fn parse_formula(src: &str) -> Result<Formula> {
    parse_formula_at(src, 1)
}

/// Evaluates using a map keyed by `(name, primed)`.
pub fn eval_with_map(f: &Formula, m: &HashMap<(String, bool), bool>) -> bool {
    f.eval(&|n, p| m.get(&(n.to_string(), p)).copied().unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        let f = parse_formula("!a & b | c -> d -> e <-> f").unwrap();
        // ! > & > | > -> (right-assoc) > <->
        let expect = Formula::iff(
            Formula::implies(
                Formula::or(
                    Formula::and(Formula::not(Formula::atom("a")), Formula::atom("b")),
                    Formula::atom("c"),
                ),
                Formula::implies(Formula::atom("d"), Formula::atom("e")),
            ),
            Formula::atom("f"),
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn print_parse_round_trip() {
        for src in [
            "a & (b | c)",
            "!(a -> b) <-> c & d'",
            "true | false",
            "a -> b -> c",
            "(a <-> b) <-> c",
            "!!a",
        ] {
            let f = parse_formula(src).unwrap();
            let printed = f.to_string();
            assert_eq!(parse_formula(&printed).unwrap(), f, "via {printed:?}");
        }
    }

    #[test]
    fn primed_atoms() {
        let f = parse_formula("t0' <-> t0").unwrap();
        assert_eq!(
            f.atoms().into_iter().collect::<Vec<_>>(),
            vec![("t0".into(), false), ("t0".into(), true)]
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_formula("a & (b |") {
            Err(Error::Syntax { line: 1, col, .. }) => assert!(col >= 8),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse_formula("a $ b").is_err());
        assert!(parse_formula("a b").is_err());
    }

    #[test]
    fn gf_lists() {
        let mut p = Parser::new("GF(!t1 & t0)  GF(t1 & !t0)", 1).unwrap();
        let gfs = p.parse_gf_list().unwrap();
        assert_eq!(gfs.len(), 2);
        let mut bad = Parser::new("GF(t0')", 1).unwrap();
        assert!(bad.parse_gf_list().is_err());
    }

    #[test]
    fn evaluation() {
        let f = parse_formula("a & !b -> c").unwrap();
        assert!(!f.eval(&|n, _| n == "a")); // premise holds, c is false
        assert!(f.eval(&|n, _| n != "b"));
        let g = parse_formula("a & !b").unwrap();
        assert!(g.eval(&|n, _| n == "a"));
        assert!(!g.eval(&|_, _| true));
    }
}
