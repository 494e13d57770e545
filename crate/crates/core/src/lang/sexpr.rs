//! Canonical S-expression text for terms, formulas, virtual sets and monic
//! polynomials.
//!
//! ```text
//! formula := (= t t) | (not f) | (or f f) | (and f f) | (implies f f)
//!          | (iff f f) | (exists v f) | (forall v f) | (true) | (false)
//!          | (big-or f*) | (big-and f*)
//! term    := var | int | rat | (+ t t) | (* t t) | (bar t)
//! var     := name | name[i,j,...]
//! vset    := (vset (sig v*) [(params v*)] [(lang inv)] f)
//! monic   := (monic n t0 ... t{n-1})
//! ```
//!
//! Numerals must be canonical (`-3`, `5/2`; never `007`, `4/2` or `-0`), so
//! printing a parsed object reproduces the input up to whitespace.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::formula::Formula;
use super::term::{literal_text, Term, TermKind};
use super::var::Var;
use super::vset::VirtualSet;
use crate::poly::MonicPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A parsed top-level object.
#[derive(Debug, Clone, PartialEq)]
pub enum Object {
    Formula(Formula),
    VirtualSet(VirtualSet),
}

// ---------------------------------------------------------------- printing

pub fn term_to_sexpr(t: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, t);
    out
}

pub fn formula_to_sexpr(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

pub fn vset_to_sexpr(v: &VirtualSet) -> String {
    let mut out = String::from("(vset (sig");
    for s in v.signature() {
        write!(out, " {s}").unwrap();
    }
    out.push(')');
    if !v.params().is_empty() {
        out.push_str(" (params");
        for s in v.params() {
            write!(out, " {s}").unwrap();
        }
        out.push(')');
    }
    if v.involution() {
        out.push_str(" (lang inv)");
    }
    out.push(' ');
    write_formula(&mut out, v.body());
    out.push(')');
    out
}

pub fn monic_to_sexpr(p: &MonicPoly) -> String {
    let mut out = format!("(monic {}", p.degree());
    for c in p.coeffs() {
        out.push(' ');
        write_term(&mut out, c);
    }
    out.push(')');
    out
}

fn write_term(out: &mut String, t: &Term) {
    match t.kind() {
        TermKind::Var(v) => write!(out, "{v}").unwrap(),
        TermKind::Zero => out.push('0'),
        TermKind::One => out.push('1'),
        TermKind::Int(n) => write!(out, "{n}").unwrap(),
        TermKind::Rat(r) => out.push_str(&literal_text(r)),
        TermKind::Add(a, b) => {
            out.push_str("(+ ");
            write_term(out, a);
            out.push(' ');
            write_term(out, b);
            out.push(')');
        }
        TermKind::Mul(a, b) => {
            out.push_str("(* ");
            write_term(out, a);
            out.push(' ');
            write_term(out, b);
            out.push(')');
        }
        TermKind::Bar(a) => {
            out.push_str("(bar ");
            write_term(out, a);
            out.push(')');
        }
    }
}

fn write_formula(out: &mut String, f: &Formula) {
    let bin = |out: &mut String, op: &str, a: &Formula, b: &Formula| {
        write!(out, "({op} ").unwrap();
        write_formula(out, a);
        out.push(' ');
        write_formula(out, b);
        out.push(')');
    };
    match f {
        Formula::Eq(a, b) => {
            out.push_str("(= ");
            write_term(out, a);
            out.push(' ');
            write_term(out, b);
            out.push(')');
        }
        Formula::Not(a) => {
            out.push_str("(not ");
            write_formula(out, a);
            out.push(')');
        }
        Formula::Or(a, b) => bin(out, "or", a, b),
        Formula::And(a, b) => bin(out, "and", a, b),
        Formula::Implies(a, b) => bin(out, "implies", a, b),
        Formula::Iff(a, b) => bin(out, "iff", a, b),
        Formula::Exists(v, a) | Formula::Forall(v, a) => {
            let op = if matches!(f, Formula::Exists(..)) { "exists" } else { "forall" };
            write!(out, "({op} {v} ").unwrap();
            write_formula(out, a);
            out.push(')');
        }
        Formula::True => out.push_str("(true)"),
        Formula::False => out.push_str("(false)"),
        Formula::BigOr(v) | Formula::BigAnd(v) => {
            out.push_str(if matches!(f, Formula::BigOr(_)) { "(big-or" } else { "(big-and" });
            for g in v.iter() {
                out.push(' ');
                write_formula(out, g);
            }
            out.push(')');
        }
    }
}

// ----------------------------------------------------------------- parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c == '(' || c == ')' {
            chars.next();
            out.push(Token {
                tok: if c == '(' { Tok::Open } else { Tok::Close },
                line,
                col,
            });
            col += 1;
        } else {
            let (l0, c0) = (line, col);
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_whitespace() || d == '(' || d == ')' {
                    break;
                }
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push(Token {
                tok: Tok::Atom(s),
                line: l0,
                col: c0,
            });
        }
    }
    out
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(text: &str) -> Parser {
        let lines: Vec<&str> = text.split('\n').collect();
        let end = (lines.len(), lines.last().map(|l| l.chars().count() + 1).unwrap_or(1));
        Parser {
            toks: tokenize(text),
            pos: 0,
            end,
        }
    }

    fn err_at(&self, tok: Option<&Token>, message: impl Into<String>) -> ParseError {
        let (line, col) = tok.map(|t| (t.line, t.col)).unwrap_or(self.end);
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        self.err_at(self.toks.get(self.pos), message)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn open(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Open) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err("expected '('")),
        }
    }

    fn close(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Close) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err("expected ')'")),
        }
    }

    fn atom(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Atom(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("expected an atom")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            Err(self.err("trailing input"))
        } else {
            Ok(())
        }
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        let at = self.pos;
        let s = self.atom()?;
        parse_var(&s).ok_or_else(|| self.err_at(self.toks.get(at), format!("invalid variable '{s}'")))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Atom(_)) => {
                let at = self.pos;
                let s = self.atom()?;
                if starts_numeric(&s) {
                    parse_literal(&s)
                        .map(Term::raw_literal)
                        .ok_or_else(|| self.err_at(self.toks.get(at), format!("non-canonical numeral '{s}'")))
                } else {
                    parse_var(&s)
                        .map(|v| Term::var(&v))
                        .ok_or_else(|| self.err_at(self.toks.get(at), format!("invalid variable '{s}'")))
                }
            }
            Some(Tok::Open) => {
                self.open()?;
                let at = self.pos;
                let op = self.atom()?;
                let t = match op.as_str() {
                    "+" | "*" => {
                        let a = self.term()?;
                        let b = self.term()?;
                        if op == "+" {
                            Term::raw(TermKind::Add(a, b))
                        } else {
                            Term::raw(TermKind::Mul(a, b))
                        }
                    }
                    "bar" => Term::raw(TermKind::Bar(self.term()?)),
                    _ => return Err(self.err_at(self.toks.get(at), format!("unknown term operator '{op}'"))),
                };
                self.close()?;
                Ok(t)
            }
            _ => Err(self.err("expected a term")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.open()?;
        let at = self.pos;
        let op = self.atom()?;
        let f = match op.as_str() {
            "=" => {
                let a = self.term()?;
                let b = self.term()?;
                Formula::Eq(a, b)
            }
            "not" => Formula::not(self.formula()?),
            "or" | "and" | "implies" | "iff" => {
                let a = self.formula()?;
                let b = self.formula()?;
                match op.as_str() {
                    "or" => Formula::or(a, b),
                    "and" => Formula::and(a, b),
                    "implies" => Formula::implies(a, b),
                    _ => Formula::iff(a, b),
                }
            }
            "exists" | "forall" => {
                let v = self.var()?;
                let body = self.formula()?;
                if op == "exists" {
                    Formula::exists(&v, body)
                } else {
                    Formula::forall(&v, body)
                }
            }
            "true" => Formula::True,
            "false" => Formula::False,
            "big-or" | "big-and" => {
                let mut parts = Vec::new();
                while self.peek() == Some(&Tok::Open) {
                    parts.push(self.formula()?);
                }
                if op == "big-or" {
                    Formula::big_or(parts)
                } else {
                    Formula::big_and(parts)
                }
            }
            _ => return Err(self.err_at(self.toks.get(at), format!("unknown formula operator '{op}'"))),
        };
        self.close()?;
        Ok(f)
    }

    fn var_list(&mut self, head: &str) -> Result<Vec<Var>, ParseError> {
        self.open()?;
        let at = self.pos;
        let h = self.atom()?;
        if h != head {
            return Err(self.err_at(self.toks.get(at), format!("expected '{head}'")));
        }
        let mut vars = Vec::new();
        while let Some(Tok::Atom(_)) = self.peek() {
            vars.push(self.var()?);
        }
        self.close()?;
        Ok(vars)
    }

    fn peek_head(&self) -> Option<&str> {
        match (self.toks.get(self.pos), self.toks.get(self.pos + 1)) {
            (Some(Token { tok: Tok::Open, .. }), Some(Token { tok: Tok::Atom(s), .. })) => Some(s),
            _ => None,
        }
    }

    fn vset(&mut self) -> Result<VirtualSet, ParseError> {
        self.open()?;
        let at = self.pos;
        if self.atom()? != "vset" {
            return Err(self.err_at(self.toks.get(at), "expected 'vset'"));
        }
        let sig = self.var_list("sig")?;
        let params = if self.peek_head() == Some("params") {
            self.var_list("params")?
        } else {
            Vec::new()
        };
        let mut involution = false;
        if self.peek_head() == Some("lang") {
            self.open()?;
            self.atom()?;
            let at = self.pos;
            let l = self.atom()?;
            if l != "inv" {
                return Err(self.err_at(self.toks.get(at), format!("unknown language '{l}'")));
            }
            involution = true;
            self.close()?;
        }
        let body_at = self.pos;
        let body = self.formula()?;
        self.close()?;
        VirtualSet::with_params(sig, params, body, involution)
            .map_err(|e| self.err_at(self.toks.get(body_at), e.to_string()))
    }

    fn monic(&mut self) -> Result<MonicPoly, ParseError> {
        self.open()?;
        let at = self.pos;
        if self.atom()? != "monic" {
            return Err(self.err_at(self.toks.get(at), "expected 'monic'"));
        }
        let at = self.pos;
        let n: usize = self
            .atom()?
            .parse()
            .map_err(|_| self.err_at(self.toks.get(at), "expected a degree"))?;
        let mut coeffs = Vec::with_capacity(n);
        for _ in 0..n {
            coeffs.push(self.term()?);
        }
        self.close()?;
        Ok(MonicPoly::new(coeffs))
    }
}

impl Term {
    fn raw_literal(r: BigRational) -> Term {
        if r.is_zero() {
            Term::zero()
        } else if r.is_one() {
            Term::one()
        } else if r.is_integer() {
            Term::raw(TermKind::Int(r.to_integer()))
        } else {
            Term::raw(TermKind::Rat(r))
        }
    }
}

fn starts_numeric(s: &str) -> bool {
    let mut cs = s.chars();
    match cs.next() {
        Some(c) if c.is_ascii_digit() => true,
        Some('-') => cs.next().is_some_and(|c| c.is_ascii_digit()),
        _ => false,
    }
}

fn canonical_natural(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit()) && (s == "0" || !s.starts_with('0'))
}

fn parse_literal(s: &str) -> Option<BigRational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let value = match body.split_once('/') {
        None => {
            if !canonical_natural(body) {
                return None;
            }
            BigRational::from_integer(BigInt::from_str(body).ok()?)
        }
        Some((n, d)) => {
            if !canonical_natural(n) || !canonical_natural(d) {
                return None;
            }
            let n = BigInt::from_str(n).ok()?;
            let d = BigInt::from_str(d).ok()?;
            if d <= BigInt::one() || n.is_zero() {
                return None;
            }
            let r = BigRational::new(n.clone(), d.clone());
            if *r.numer() != n || *r.denom() != d {
                return None;
            }
            r
        }
    };
    if neg && value.is_zero() {
        return None;
    }
    Some(if neg { -value } else { value })
}

fn parse_var(s: &str) -> Option<Var> {
    let (name, index) = match s.find('[') {
        None => (s, None),
        Some(i) => {
            let rest = s[i + 1..].strip_suffix(']')?;
            let idx: Option<Vec<u32>> = rest
                .split(',')
                .map(|p| if canonical_natural(p) { p.parse().ok() } else { None })
                .collect();
            (&s[..i], Some(idx?))
        }
    };
    let first = name.chars().next()?;
    if first.is_ascii_digit() || first == '-' {
        return None;
    }
    if name.chars().any(|c| matches!(c, '[' | ']' | ',')) {
        return None;
    }
    Some(match index {
        Some(idx) => Var::indexed(name, &idx),
        None => Var::new(name),
    })
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text);
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text);
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_vset(text: &str) -> Result<VirtualSet, ParseError> {
    let mut p = Parser::new(text);
    let v = p.vset()?;
    p.finish()?;
    Ok(v)
}

pub fn parse_monic(text: &str) -> Result<MonicPoly, ParseError> {
    let mut p = Parser::new(text);
    let m = p.monic()?;
    p.finish()?;
    Ok(m)
}

/// Parses either a virtual set or a formula, dispatching on the head.
pub fn parse_object(text: &str) -> Result<Object, ParseError> {
    let p = Parser::new(text);
    if p.peek_head() == Some("vset") {
        parse_vset(text).map(Object::VirtualSet)
    } else {
        parse_formula(text).map(Object::Formula)
    }
}

/// Collapses whitespace the way the printer lays it out.
pub fn normalize_whitespace(text: &str) -> String {
    tokenize(text)
        .iter()
        .fold((String::new(), None::<Tok>), |(mut out, prev), t| {
            let need_space = matches!(
                (&prev, &t.tok),
                (Some(Tok::Atom(_)) | Some(Tok::Close), Tok::Atom(_) | Tok::Open)
            );
            if need_space {
                out.push(' ');
            }
            match &t.tok {
                Tok::Open => out.push('('),
                Tok::Close => out.push(')'),
                Tok::Atom(s) => out.push_str(s),
            }
            (out, Some(t.tok.clone()))
        })
        .0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_round_trip() {
        let f = Formula::eq(&Term::var(&Var::new("x")), &Term::zero());
        let s = formula_to_sexpr(&f);
        assert_eq!(s, "(= x 0)");
        assert_eq!(parse_formula(&s).unwrap(), f);
    }

    #[test]
    fn quantified_disjunction_text() {
        let x = Var::new("x");
        let f = Formula::exists(
            &x,
            Formula::or(
                Formula::eq(&Term::var(&x), &Term::one()),
                Formula::eq(&Term::var(&x), &Term::zero()),
            ),
        );
        assert_eq!(formula_to_sexpr(&f), "(exists x (or (= x 1) (= x 0)))");
    }

    #[test]
    fn literals_and_indices() {
        let t = parse_term("(+ x[1,2] (* -1/2 (bar y)))").unwrap();
        assert_eq!(term_to_sexpr(&t), "(+ x[1,2] (* -1/2 (bar y)))");
        assert!(parse_term("007").is_err());
        assert!(parse_term("4/2").is_err());
        assert!(parse_term("-0").is_err());
    }

    #[test]
    fn error_positions() {
        let err = parse_formula("(= x 0)\n(foo").unwrap_err();
        assert_eq!((err.line, err.col), (2, 1));
        let err = parse_formula("(exists x\n  (frob x))").unwrap_err();
        assert_eq!((err.line, err.col), (2, 4));
        assert!(err.message.contains("frob"));
        let err = parse_formula("(= x").unwrap_err();
        assert!(err.message.contains("term"));
    }

    #[test]
    fn vset_round_trip() {
        let text = "(vset (sig x y) (params p) (lang inv) (= (bar x) (+ y p)))";
        let v = parse_vset(text).unwrap();
        assert_eq!(vset_to_sexpr(&v), text);
    }

    #[test]
    fn vset_rejects_stray_free_variables() {
        assert!(parse_vset("(vset (sig x) (= x y))").is_err());
    }

    #[test]
    fn monic_round_trip() {
        let text = "(monic 2 a[0] (+ b 1))";
        assert_eq!(monic_to_sexpr(&parse_monic(text).unwrap()), text);
    }

    #[test]
    fn whitespace_normalization() {
        assert_eq!(normalize_whitespace("( =  x\n 0 )"), "(= x 0)");
    }
}
