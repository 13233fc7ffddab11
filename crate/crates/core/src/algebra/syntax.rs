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

//! Textual term syntax.
//!
//! ```text
//! term     := postfix (binop postfix)*            left-associative
//! binop    := UNION | MINUS | TIMES | JOIN postfix ON '(' [name '=' name {',' ...}] ')'
//! postfix  := primary { '[' name {',' name} ']' | WHERE cond | RENAME name AS name }
//! primary  := name | '(' term ')' | EMPTY
//!           | EXTEND term ADD attr ',' name AS expr
//!           | TUPLE '(' name [':' attr] '=' const {',' ...} ')'
//! expr     := name | const | HASH '(' expr {',' expr} ')'
//! cond     := disj ; disj := conj {OR conj} ; conj := neg {AND neg}
//! neg      := NOT neg | TRUE | FALSE | '(' cond ')'
//!           | '(' name {',' name} ')' IN primary | operand IN primary
//!           | operand op operand           op: = <> != < > <= >=
//! operand  := name | 'text' | number | NULL
//! ```
//!
//! Keywords are upper case. Names may contain `-` and a trailing `(n)`
//! product suffix; anything else goes in backticks. A bare name in a
//! comparison is a column if the input has it, else a text constant; a
//! backticked name is always a column.
//!
//! Update statements: `DELETE FROM r WHERE c`, `INSERT INTO r VALUES (..)`,
//! `INSERT INTO r term`, `UPDATE r SET col = expr, .. [WHERE c]`.

use std::fmt;

use super::update::UpdateStatement;
use super::{AlgebraTerm, Condition, Expr, Operand};
use crate::error::{Error, Result};
use crate::relation::ColumnSpec;
use crate::value::{Comparison, Value};

const KEYWORDS: &[&str] = &[
    "ADD", "AND", "AS", "DELETE", "EMPTY", "EXTEND", "FALSE", "FROM", "HASH", "IN", "INSERT",
    "INTO", "JOIN", "MINUS", "NOT", "NULL", "ON", "OR", "RENAME", "SET", "TIMES", "TRUE", "TUPLE",
    "UNION", "UPDATE", "VALUES", "WHERE",
];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Quoted(String),
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

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

fn lex(text: &str, first_line: usize) -> Result<(Vec<Spanned>, (usize, usize))> {
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, first_line, 1usize);
    let mut out = Vec::new();
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let (sl, sc) = (line, col);
        let tok = if ident_start(c) {
            let start = i;
            while i < chars.len() && ident_char(chars[i]) {
                bump!();
            }
            let mut word: String = chars[start..i].iter().collect();
            if !KEYWORDS.contains(&word.as_str()) && chars.get(i) == Some(&'(') {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j > i + 1 && chars.get(j) == Some(&')') {
                    while i <= j {
                        word.push(chars[i]);
                        bump!();
                    }
                }
            }
            Tok::Ident(word)
        } else if c.is_ascii_digit()
            || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            let start = i;
            bump!();
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump!();
            }
            if chars.get(i) == Some(&'.') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                bump!();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    bump!();
                }
            }
            Tok::Num(chars[start..i].iter().collect())
        } else if c == '\'' || c == '"' || c == '`' {
            let quote = c;
            bump!();
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None => return Err(Error::syntax(sl, sc, "unterminated quoted text")),
                    Some(&q) if q == quote => {
                        if chars.get(i + 1) == Some(&quote) {
                            s.push(quote);
                            bump!();
                            bump!();
                        } else {
                            bump!();
                            break;
                        }
                    }
                    Some(&other) => {
                        s.push(other);
                        bump!();
                    }
                }
            }
            if quote == '`' {
                Tok::Quoted(s)
            } else {
                Tok::Str(s)
            }
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let p = match two.as_str() {
                "<>" => Some("<>"),
                "!=" => Some("!="),
                "<=" => Some("<="),
                ">=" => Some(">="),
                _ => None,
            };
            if let Some(p) = p {
                bump!();
                bump!();
                Tok::Punct(p)
            } else {
                let p = match c {
                    '(' => "(",
                    ')' => ")",
                    '[' => "[",
                    ']' => "]",
                    ',' => ",",
                    '=' => "=",
                    '<' => "<",
                    '>' => ">",
                    ':' => ":",
                    _ => return Err(Error::syntax(sl, sc, format!("unexpected character `{c}`"))),
                };
                bump!();
                Tok::Punct(p)
            }
        };
        out.push(Spanned {
            tok,
            line: sl,
            col: sc,
        });
    }
    Ok((out, (line, col)))
}

/// A parsed line: either a query term or an update statement.
#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Query(AlgebraTerm),
    Update(UpdateStatement),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(text: &str, first_line: usize) -> Result<Self> {
        let (toks, end) = lex(text, first_line)?;
        Ok(Parser { toks, pos: 0, end })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        let found = match self.peek() {
            Some(t) => format!(" (found {})", describe(t)),
            None => " (found end of input)".to_string(),
        };
        Err(Error::syntax(l, c, format!("{}{}", msg.into(), found)))
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(w)) if w == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.err(format!("expected {kw}"))
        }
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.err(format!("expected `{p}`"))
        }
    }

    fn finish(&self) -> Result<()> {
        if self.peek().is_some() {
            self.err("unexpected trailing input")
        } else {
            Ok(())
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.peek().cloned() {
            Some(Tok::Ident(w)) if !KEYWORDS.contains(&w.as_str()) => {
                self.pos += 1;
                Ok(w)
            }
            Some(Tok::Quoted(w)) => {
                self.pos += 1;
                Ok(w)
            }
            _ => self.err("expected a name"),
        }
    }

    fn constant(&mut self) -> Result<Value> {
        let v = match self.peek().cloned() {
            Some(Tok::Str(s)) => Value::Text(s),
            Some(Tok::Num(n)) => match Value::parse_number(&n) {
                Some(v) => v,
                None => return self.err("number out of range"),
            },
            Some(Tok::Ident(w)) if w == "NULL" => Value::Null,
            _ => return self.err("expected a constant"),
        };
        self.pos += 1;
        Ok(v)
    }

    fn term(&mut self) -> Result<AlgebraTerm> {
        let mut t = self.postfix()?;
        loop {
            if self.eat_kw("UNION") {
                t = t.union(self.postfix()?);
            } else if self.eat_kw("MINUS") {
                t = t.minus(self.postfix()?);
            } else if self.eat_kw("TIMES") {
                t = t.times(self.postfix()?);
            } else if self.eat_kw("JOIN") {
                let right = self.postfix()?;
                self.expect_kw("ON")?;
                self.expect_punct("(")?;
                let mut pairs = Vec::new();
                if !self.eat_punct(")") {
                    loop {
                        let l = self.name()?;
                        self.expect_punct("=")?;
                        let r = self.name()?;
                        pairs.push((l, r));
                        if self.eat_punct(")") {
                            break;
                        }
                        self.expect_punct(",")?;
                    }
                }
                t = AlgebraTerm::NaturalJoin {
                    left: Box::new(t),
                    right: Box::new(right),
                    pairs,
                };
            } else {
                return Ok(t);
            }
        }
    }

    fn postfix(&mut self) -> Result<AlgebraTerm> {
        let mut t = self.primary()?;
        loop {
            if self.eat_punct("[") {
                let mut cols = vec![self.name()?];
                while self.eat_punct(",") {
                    cols.push(self.name()?);
                }
                self.expect_punct("]")?;
                t = AlgebraTerm::Project {
                    input: Box::new(t),
                    columns: cols,
                };
            } else if self.eat_kw("WHERE") {
                t = t.select(self.condition()?);
            } else if self.eat_kw("RENAME") {
                let from = self.name()?;
                self.expect_kw("AS")?;
                let to = self.name()?;
                t = t.rename(from, to);
            } else {
                return Ok(t);
            }
        }
    }

    fn primary(&mut self) -> Result<AlgebraTerm> {
        if self.eat_punct("(") {
            let t = self.term()?;
            self.expect_punct(")")?;
            return Ok(t);
        }
        if self.eat_kw("EMPTY") {
            return Ok(AlgebraTerm::Empty);
        }
        if self.eat_kw("EXTEND") {
            let input = self.term()?;
            self.expect_kw("ADD")?;
            let attribute = self.name()?;
            self.expect_punct(",")?;
            let name = self.name()?;
            self.expect_kw("AS")?;
            let expr = self.expr()?;
            return Ok(input.extend(ColumnSpec::new(name, attribute), expr));
        }
        if self.eat_kw("TUPLE") {
            self.expect_punct("(")?;
            let mut cells = Vec::new();
            loop {
                let name = self.name()?;
                let attribute = if self.eat_punct(":") {
                    self.name()?
                } else {
                    name.clone()
                };
                self.expect_punct("=")?;
                cells.push((ColumnSpec::new(name, attribute), self.constant()?));
                if self.eat_punct(")") {
                    break;
                }
                self.expect_punct(",")?;
            }
            return Ok(AlgebraTerm::SingleTuple(cells));
        }
        Ok(AlgebraTerm::Base(self.name()?))
    }

    fn expr(&mut self) -> Result<Expr> {
        if self.eat_kw("HASH") {
            self.expect_punct("(")?;
            let mut args = Vec::new();
            if !self.eat_punct(")") {
                loop {
                    args.push(self.expr()?);
                    if self.eat_punct(")") {
                        break;
                    }
                    self.expect_punct(",")?;
                }
            }
            return Ok(Expr::Hash(args));
        }
        match self.peek() {
            Some(Tok::Ident(w)) if w != "NULL" => Ok(Expr::Column(self.name()?)),
            Some(Tok::Quoted(_)) => Ok(Expr::Column(self.name()?)),
            _ => Ok(Expr::Const(self.constant()?)),
        }
    }

    fn condition(&mut self) -> Result<Condition> {
        let mut c = self.conjunction()?;
        while self.eat_kw("OR") {
            c = c.or(self.conjunction()?);
        }
        Ok(c)
    }

    fn conjunction(&mut self) -> Result<Condition> {
        let mut c = self.negation()?;
        while self.eat_kw("AND") {
            c = Condition::And(Box::new(c), Box::new(self.negation()?));
        }
        Ok(c)
    }

    fn negation(&mut self) -> Result<Condition> {
        if self.eat_kw("NOT") {
            return Ok(self.negation()?.not());
        }
        if self.eat_kw("TRUE") {
            return Ok(Condition::True);
        }
        if self.eat_kw("FALSE") {
            return Ok(Condition::False);
        }
        if self.is_punct("(") {
            let save = self.pos;
            if let Some(cols) = self.try_column_tuple() {
                if self.eat_kw("IN") {
                    let source = self.primary()?;
                    return Ok(Condition::In {
                        columns: cols,
                        source: Box::new(source),
                    });
                }
            }
            self.pos = save;
            self.expect_punct("(")?;
            let c = self.condition()?;
            self.expect_punct(")")?;
            return Ok(c);
        }
        let lhs = self.operand()?;
        if self.eat_kw("IN") {
            let column = match lhs {
                Operand::Name(n) | Operand::Column(n) => n,
                Operand::Const(_) => return self.err("IN needs a column on its left"),
            };
            let source = self.primary()?;
            return Ok(Condition::In {
                columns: vec![column],
                source: Box::new(source),
            });
        }
        let op = match self.peek() {
            Some(Tok::Punct("=")) => Comparison::Eq,
            Some(Tok::Punct("<>")) | Some(Tok::Punct("!=")) => Comparison::Ne,
            Some(Tok::Punct("<")) => Comparison::Lt,
            Some(Tok::Punct(">")) => Comparison::Gt,
            Some(Tok::Punct("<=")) => Comparison::Le,
            Some(Tok::Punct(">=")) => Comparison::Ge,
            _ => return self.err("expected a comparison operator"),
        };
        self.pos += 1;
        let rhs = self.operand()?;
        Ok(Condition::Compare { lhs, op, rhs })
    }

    fn try_column_tuple(&mut self) -> Option<Vec<String>> {
        if !self.eat_punct("(") {
            return None;
        }
        let mut cols = vec![self.name().ok()?];
        loop {
            if self.eat_punct(")") {
                return Some(cols);
            }
            if !self.eat_punct(",") {
                return None;
            }
            cols.push(self.name().ok()?);
        }
    }

    fn operand(&mut self) -> Result<Operand> {
        match self.peek().cloned() {
            Some(Tok::Ident(w)) if !KEYWORDS.contains(&w.as_str()) => {
                self.pos += 1;
                Ok(Operand::Name(w))
            }
            Some(Tok::Quoted(w)) => {
                self.pos += 1;
                Ok(Operand::Column(w))
            }
            _ => Ok(Operand::Const(self.constant()?)),
        }
    }

    fn statement(&mut self) -> Result<Statement> {
        if self.eat_kw("DELETE") {
            self.expect_kw("FROM")?;
            let relation = self.name()?;
            self.expect_kw("WHERE")?;
            let condition = self.condition()?;
            return Ok(Statement::Update(UpdateStatement::Delete {
                relation,
                condition,
            }));
        }
        if self.eat_kw("INSERT") {
            self.expect_kw("INTO")?;
            let relation = self.name()?;
            if self.eat_kw("VALUES") {
                self.expect_punct("(")?;
                let mut values = vec![self.constant()?];
                while self.eat_punct(",") {
                    values.push(self.constant()?);
                }
                self.expect_punct(")")?;
                return Ok(Statement::Update(UpdateStatement::InsertValues {
                    relation,
                    values,
                }));
            }
            let query = self.term()?;
            return Ok(Statement::Update(UpdateStatement::InsertQuery {
                relation,
                query,
            }));
        }
        if self.eat_kw("UPDATE") {
            let relation = self.name()?;
            self.expect_kw("SET")?;
            let mut assignments = Vec::new();
            loop {
                let col = self.name()?;
                self.expect_punct("=")?;
                assignments.push((col, self.expr()?));
                if !self.eat_punct(",") {
                    break;
                }
            }
            let condition = if self.eat_kw("WHERE") {
                self.condition()?
            } else {
                Condition::True
            };
            return Ok(Statement::Update(UpdateStatement::Update {
                relation,
                assignments,
                condition,
            }));
        }
        Ok(Statement::Query(self.term()?))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(w) | Tok::Num(w) => format!("`{w}`"),
        Tok::Quoted(w) => format!("`{w}`"),
        Tok::Str(s) => format!("'{s}'"),
        Tok::Punct(p) => format!("`{p}`"),
    }
}

/// Parses a single term (newlines are whitespace).
pub fn parse_term(text: &str) -> Result<AlgebraTerm> {
    let mut p = Parser::new(text, 1)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a query term or an update statement.
pub fn parse_statement(text: &str) -> Result<Statement> {
    let mut p = Parser::new(text, 1)?;
    let s = p.statement()?;
    p.finish()?;
    Ok(s)
}

/// Parses one statement per non-blank line; `--` starts a comment.
pub fn parse_terms(text: &str) -> Result<Vec<Statement>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut p = Parser::new(line, i + 1)?;
        if p.peek().is_none() {
            continue;
        }
        let s = p.statement()?;
        p.finish()?;
        out.push(s);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Printing. Output parses back to the same term.

fn is_plain(name: &str) -> bool {
    let core = match name.find('(') {
        Some(i) => {
            let suffix = &name[i..];
            let digits = &suffix[1..suffix.len().saturating_sub(1)];
            if !(suffix.ends_with(')')
                && !digits.is_empty()
                && digits.bytes().all(|b| b.is_ascii_digit()))
            {
                return false;
            }
            &name[..i]
        }
        None => name,
    };
    let mut chars = core.chars();
    chars.next().is_some_and(ident_start)
        && chars.all(ident_char)
        && !core.contains("--")
        && !KEYWORDS.contains(&core)
}

pub(crate) struct NameFmt<'a>(pub &'a str);

impl fmt::Display for NameFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if is_plain(self.0) {
            f.write_str(self.0)
        } else {
            write!(f, "`{}`", self.0.replace('`', "``"))
        }
    }
}

struct ConstFmt<'a>(&'a Value);

impl fmt::Display for ConstFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Value::Null => f.write_str("NULL"),
            Value::Number(_) => f.write_str(&self.0.render()),
            Value::Text(s) => write!(f, "'{}'", s.replace('\'', "''")),
        }
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Column(c) => write!(f, "`{}`", c.replace('`', "``")),
            Operand::Name(n) => write!(f, "{}", NameFmt(n)),
            Operand::Const(v) => write!(f, "{}", ConstFmt(v)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Column(c) => write!(f, "{}", NameFmt(c)),
            Expr::Const(v) => write!(f, "{}", ConstFmt(v)),
            Expr::Hash(args) => {
                f.write_str("HASH(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::True => f.write_str("TRUE"),
            Condition::False => f.write_str("FALSE"),
            Condition::Compare { lhs, op, rhs } => write!(f, "{lhs} {op} {rhs}"),
            Condition::And(a, b) => write!(f, "({a} AND {b})"),
            Condition::Or(a, b) => write!(f, "({a} OR {b})"),
            Condition::Not(a) => write!(f, "NOT ({a})"),
            Condition::In { columns, source } => {
                f.write_str("(")?;
                for (i, c) in columns.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", NameFmt(c))?;
                }
                write!(f, ") IN {}", Wrapped(source))
            }
        }
    }
}

/// Prints a term in operand position, parenthesized unless atomic.
struct Wrapped<'a>(&'a AlgebraTerm);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            AlgebraTerm::Base(_) | AlgebraTerm::Empty | AlgebraTerm::SingleTuple(_) => {
                write!(f, "{}", self.0)
            }
            other => write!(f, "({other})"),
        }
    }
}

/// Prints the input of a postfix operator: chains of projections and
/// renames stay bare, everything else is parenthesized.
struct PostfixInput<'a>(&'a AlgebraTerm);

impl fmt::Display for PostfixInput<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            AlgebraTerm::Rename { .. } | AlgebraTerm::Project { .. } => write!(f, "{}", self.0),
            other => write!(f, "{}", Wrapped(other)),
        }
    }
}

impl fmt::Display for AlgebraTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraTerm::Base(n) => write!(f, "{}", NameFmt(n)),
            AlgebraTerm::Empty => f.write_str("EMPTY"),
            AlgebraTerm::SingleTuple(cells) => {
                f.write_str("TUPLE(")?;
                for (i, (c, v)) in cells.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", NameFmt(&c.column_name))?;
                    if c.attribute != c.column_name {
                        write!(f, ":{}", NameFmt(&c.attribute))?;
                    }
                    write!(f, " = {}", ConstFmt(v))?;
                }
                f.write_str(")")
            }
            AlgebraTerm::Rename { input, from, to } => {
                write!(
                    f,
                    "{} RENAME {} AS {}",
                    PostfixInput(input),
                    NameFmt(from),
                    NameFmt(to)
                )
            }
            AlgebraTerm::Project { input, columns } => {
                write!(f, "{}[", PostfixInput(input))?;
                for (i, c) in columns.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", NameFmt(c))?;
                }
                f.write_str("]")
            }
            AlgebraTerm::Select { input, condition } => {
                write!(f, "{} WHERE {}", Wrapped(input), condition)
            }
            AlgebraTerm::Times(l, r) => write!(f, "{} TIMES {}", Wrapped(l), Wrapped(r)),
            AlgebraTerm::Union(l, r) => write!(f, "{} UNION {}", Wrapped(l), Wrapped(r)),
            AlgebraTerm::Minus(l, r) => write!(f, "{} MINUS {}", Wrapped(l), Wrapped(r)),
            AlgebraTerm::NaturalJoin { left, right, pairs } => {
                write!(f, "{} JOIN {} ON (", Wrapped(left), Wrapped(right))?;
                for (i, (a, b)) in pairs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{} = {}", NameFmt(a), NameFmt(b))?;
                }
                f.write_str(")")
            }
            AlgebraTerm::Extend {
                input,
                column,
                expr,
            } => write!(
                f,
                "EXTEND {} ADD {}, {} AS {}",
                Wrapped(input),
                NameFmt(&column.attribute),
                NameFmt(&column.column_name),
                expr
            ),
        }
    }
}
