// Copyright 2026 The ivecdb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Concrete syntax for SchemaLog programs and formulas.
//!
//! ```text
//! program  := { rule }
//! rule     := head [':-' literal {',' literal}] '.'
//! head     := pred '(' [term {',' term}] ')'
//! literal  := 'not' literal | pred '(' .. ')' | term op term | molecule
//! molecule := term ['::' term ['[' items ']']]
//! items    := term ':' term '->' term {',' term '->' term}   tuple cells
//!           | term {',' term}                                attributes
//! term     := Var | symbol | 'quoted' | number | Hash '(' term {',' term} ')'
//!
//! formula  := ['=>'] disj ['=>' formula]
//! disj     := conj {('or' | ';') conj} ;  conj := unary {('and' | ',') unary}
//! unary    := 'not' unary | ('exists' | 'forall') Var {',' Var} ':' unary
//!           | '(' formula ')' | term op term | molecule
//! ```
//!
//! Variables start with an upper-case letter or `_`; `_` alone is an
//! anonymous variable (rules only). Unquoted symbols start lower case.
//! `%` starts a comment. `→` may be written for `->`.

use super::ast::{Literal, PredAtom, SlAtom, SlFormula, SlRule, SlTerm, HASH_FUNCTOR};
use crate::error::{Error, Result};
use crate::value::{Comparison, Value};

pub(crate) const KEYWORDS: &[&str] = &["not", "and", "or", "exists", "forall"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    Num(String),
    Punct(&'static str),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

const PUNCTS: &[&str] = &[
    "::", ":-", "->", "=>", "<>", "!=", "<=", ">=", ":", "[", "]", "(", ")", ",", ".", ";", "=",
    "<", ">",
];

fn lex(text: &str) -> Result<(Vec<Spanned>, (usize, usize))> {
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut out = Vec::new();
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        let (sl, sc) = (line, col);
        let tok = if c.is_alphabetic() || c == '_' {
            let start = i;
            let mut j = i;
            while j < chars.len() {
                let d = chars[j];
                let dash_inside = d == '-' && chars.get(j + 1).is_some_and(|n| n.is_alphanumeric());
                if d.is_alphanumeric() || d == '_' || dash_inside {
                    j += 1;
                } else {
                    break;
                }
            }
            advance(&mut i, &mut line, &mut col, j - start);
            Tok::Ident(chars[start..j].iter().collect())
        } else if c.is_ascii_digit()
            || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            let start = i;
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if chars.get(j) == Some(&'.') && chars.get(j + 1).is_some_and(|d| d.is_ascii_digit()) {
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
            }
            advance(&mut i, &mut line, &mut col, j - start);
            Tok::Num(chars[start..j].iter().collect())
        } else if c == '\'' || c == '"' {
            let mut s = String::new();
            let mut j = i + 1;
            loop {
                match chars.get(j) {
                    None => return Err(Error::syntax(sl, sc, "unterminated quoted symbol")),
                    Some(&q) if q == c => {
                        if chars.get(j + 1) == Some(&c) {
                            s.push(c);
                            j += 2;
                        } else {
                            j += 1;
                            break;
                        }
                    }
                    Some(&d) => {
                        s.push(d);
                        j += 1;
                    }
                }
            }
            let n = j - i;
            advance(&mut i, &mut line, &mut col, n);
            Tok::Str(s)
        } else if c == '→' {
            advance(&mut i, &mut line, &mut col, 1);
            Tok::Punct("->")
        } else {
            let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let Some(p) = PUNCTS.iter().find(|p| rest.starts_with(**p)) else {
                return Err(Error::syntax(sl, sc, format!("unexpected character `{c}`")));
            };
            advance(&mut i, &mut line, &mut col, p.chars().count());
            Tok::Punct(p)
        };
        out.push(Spanned {
            tok,
            line: sl,
            col: sc,
        });
    }
    Ok((out, (line, col)))
}

fn is_var_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_uppercase() || c == '_')
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
    allow_anonymous: bool,
    anonymous: usize,
}

impl Parser {
    fn new(text: &str, allow_anonymous: bool) -> Result<Self> {
        let (toks, end) = lex(text)?;
        Ok(Parser {
            toks,
            pos: 0,
            end,
            allow_anonymous,
            anonymous: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (l, c) = self
            .toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or(self.end);
        let found = match self.peek() {
            Some(Tok::Ident(w) | Tok::Num(w)) => format!("`{w}`"),
            Some(Tok::Str(s)) => format!("'{s}'"),
            Some(Tok::Punct(p)) => format!("`{p}`"),
            None => "end of input".into(),
        };
        Err(Error::syntax(
            l,
            c,
            format!("{} (found {found})", msg.into()),
        ))
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        let hit = self.is_punct(p);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect_punct(&mut self, p: &str) -> Result<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.err(format!("expected `{p}`"))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(w)) if w == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        let hit = self.is_kw(kw);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn term(&mut self) -> Result<SlTerm> {
        match self.peek().cloned() {
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(SlTerm::Sym(Value::Text(s)))
            }
            Some(Tok::Num(n)) => match Value::parse_number(&n) {
                Some(v) => {
                    self.pos += 1;
                    Ok(SlTerm::Sym(v))
                }
                None => self.err("number out of range"),
            },
            Some(Tok::Ident(w)) if KEYWORDS.contains(&w.as_str()) => self.err("expected a term"),
            Some(Tok::Ident(w)) => {
                if matches!(self.peek_at(1), Some(Tok::Punct("("))) {
                    if w != HASH_FUNCTOR {
                        return self.err(format!("unknown functor `{w}`"));
                    }
                    self.pos += 2;
                    let args = self.term_list(")")?;
                    if args.is_empty() {
                        return self.err(format!("`{HASH_FUNCTOR}` needs at least one argument"));
                    }
                    return Ok(SlTerm::App(w, args));
                }
                if w == "_" {
                    if !self.allow_anonymous {
                        return self.err("anonymous variable outside a rule");
                    }
                    self.pos += 1;
                    self.anonymous += 1;
                    return Ok(SlTerm::Var(format!("_#{}", self.anonymous)));
                }
                self.pos += 1;
                Ok(if is_var_name(&w) {
                    SlTerm::Var(w)
                } else {
                    SlTerm::Sym(Value::Text(w))
                })
            }
            _ => self.err("expected a term"),
        }
    }

    /// Terms up to and including `close`.
    fn term_list(&mut self, close: &str) -> Result<Vec<SlTerm>> {
        let mut out = Vec::new();
        if self.eat_punct(close) {
            return Ok(out);
        }
        loop {
            out.push(self.term()?);
            if self.eat_punct(close) {
                return Ok(out);
            }
            self.expect_punct(",")?;
        }
    }

    fn comparison(&mut self) -> Option<Comparison> {
        let op = match self.peek()? {
            Tok::Punct("=") => Comparison::Eq,
            Tok::Punct("<>") | Tok::Punct("!=") => Comparison::Ne,
            Tok::Punct("<") => Comparison::Lt,
            Tok::Punct(">") => Comparison::Gt,
            Tok::Punct("<=") => Comparison::Le,
            Tok::Punct(">=") => Comparison::Ge,
            _ => return None,
        };
        self.pos += 1;
        Some(op)
    }

    /// A molecule or comparison: one or more atoms (a molecule with several
    /// cells or attributes expands to several), or a comparison.
    fn atomic(&mut self) -> Result<Vec<Literal>> {
        let first = self.term()?;
        if let Some(op) = self.comparison() {
            let rhs = self.term()?;
            return Ok(vec![Literal::Cmp(first, op, rhs)]);
        }
        if !self.eat_punct("::") {
            return Ok(vec![Literal::Atom(SlAtom::Db(first))]);
        }
        let rel = self.term()?;
        if !self.eat_punct("[") {
            return Ok(vec![Literal::Atom(SlAtom::Rel { db: first, rel })]);
        }
        let lead = self.term()?;
        let mut out = Vec::new();
        if self.eat_punct(":") {
            loop {
                let attr = self.term()?;
                self.expect_punct("->")?;
                let val = self.term()?;
                out.push(Literal::Atom(SlAtom::Quad {
                    db: first.clone(),
                    rel: rel.clone(),
                    tid: lead.clone(),
                    attr,
                    val,
                }));
                if self.eat_punct("]") {
                    return Ok(out);
                }
                self.expect_punct(",")?;
            }
        }
        let mut attr = lead;
        loop {
            out.push(Literal::Atom(SlAtom::Attr {
                db: first.clone(),
                rel: rel.clone(),
                attr,
            }));
            if self.eat_punct("]") {
                return Ok(out);
            }
            self.expect_punct(",")?;
            attr = self.term()?;
        }
    }

    fn literal(&mut self) -> Result<Vec<Literal>> {
        if self.eat_kw("not") {
            let inner = self.literal()?;
            if inner.len() != 1 {
                return self.err("negate one atom at a time");
            }
            return Ok(vec![Literal::Not(Box::new(
                inner.into_iter().next().unwrap(),
            ))]);
        }
        if let (Some(Tok::Ident(w)), Some(Tok::Punct("("))) =
            (self.peek().cloned(), self.peek_at(1))
        {
            if w != HASH_FUNCTOR && !is_var_name(&w) {
                self.pos += 2;
                let args = self.term_list(")")?;
                return Ok(vec![Literal::Pred(PredAtom { pred: w, args })]);
            }
        }
        self.atomic()
    }

    fn rule(&mut self) -> Result<SlRule> {
        let head = match self.peek().cloned() {
            Some(Tok::Ident(w)) if !is_var_name(&w) && !KEYWORDS.contains(&w.as_str()) => {
                self.pos += 1;
                let args = if self.eat_punct("(") {
                    self.term_list(")")?
                } else {
                    Vec::new()
                };
                PredAtom { pred: w, args }
            }
            _ => return self.err("expected a rule head `pred(...)`"),
        };
        let mut body = Vec::new();
        if self.eat_punct(":-") {
            loop {
                body.extend(self.literal()?);
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_punct(".")?;
        Ok(SlRule { head, body })
    }

    fn formula(&mut self) -> Result<SlFormula> {
        if self.eat_punct("=>") {
            return Ok(SlFormula::Implies(None, Box::new(self.formula()?)));
        }
        let lhs = self.disjunction()?;
        if self.eat_punct("=>") {
            return Ok(SlFormula::Implies(
                Some(Box::new(lhs)),
                Box::new(self.formula()?),
            ));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<SlFormula> {
        let mut f = self.conjunction()?;
        while self.eat_kw("or") || self.eat_punct(";") {
            f = f.or(self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<SlFormula> {
        let mut f = self.unary()?;
        while self.eat_kw("and") || self.eat_punct(",") {
            f = f.and(self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<SlFormula> {
        if self.eat_kw("not") {
            return Ok(self.unary()?.not());
        }
        for (kw, exists) in [("exists", true), ("forall", false)] {
            if self.eat_kw(kw) {
                let mut vars = Vec::new();
                loop {
                    match self.peek().cloned() {
                        Some(Tok::Ident(v)) if is_var_name(&v) && v != "_" => {
                            self.pos += 1;
                            vars.push(v);
                        }
                        _ => return self.err("expected a variable"),
                    }
                    if !self.eat_punct(",") {
                        break;
                    }
                }
                self.expect_punct(":")?;
                let mut body = self.unary()?;
                for v in vars.into_iter().rev() {
                    body = if exists {
                        SlFormula::Exists(v, Box::new(body))
                    } else {
                        SlFormula::Forall(v, Box::new(body))
                    };
                }
                return Ok(body);
            }
        }
        if self.eat_punct("(") {
            let f = self.formula()?;
            self.expect_punct(")")?;
            return Ok(f);
        }
        let lits = self.atomic()?;
        let mut atoms = lits.into_iter().map(|l| match l {
            Literal::Atom(a) => SlFormula::Atom(a),
            Literal::Cmp(l, op, r) => SlFormula::Cmp(l, op, r),
            _ => unreachable!("atomic yields atoms and comparisons"),
        });
        let first = atoms.next().expect("atomic yields at least one literal");
        Ok(atoms.fold(first, SlFormula::and))
    }
}

/// Parses a program of rules.
pub fn parse_program(text: &str) -> Result<Vec<SlRule>> {
    let mut p = Parser::new(text, true)?;
    let mut rules = Vec::new();
    while p.peek().is_some() {
        rules.push(p.rule()?);
    }
    Ok(rules)
}

/// Parses a single formula.
pub fn parse_formula(text: &str) -> Result<SlFormula> {
    let mut p = Parser::new(text, false)?;
    let f = p.formula()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}
