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

//! Abstract syntax of SchemaLog formulas and rules.

use std::collections::BTreeSet;
use std::fmt;

use crate::value::{Comparison, Value};

/// The only built-in functor: the tuple digest.
pub const HASH_FUNCTOR: &str = "Hash";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlTerm {
    Sym(Value),
    Var(String),
    App(String, Vec<SlTerm>),
}

impl SlTerm {
    pub fn sym(s: impl Into<String>) -> Self {
        SlTerm::Sym(Value::text(s))
    }

    pub fn var(s: impl Into<String>) -> Self {
        SlTerm::Var(s.into())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            SlTerm::Sym(_) => true,
            SlTerm::Var(_) => false,
            SlTerm::App(_, args) => args.iter().all(SlTerm::is_ground),
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            SlTerm::Sym(_) => {}
            SlTerm::Var(v) => {
                out.insert(v.clone());
            }
            SlTerm::App(_, args) => args.iter().for_each(|a| a.vars(out)),
        }
    }
}

/// The four atom forms: `db::rel[tid: attr -> val]`, `db::rel[attr]`,
/// `db::rel` and `db`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SlAtom {
    Quad {
        db: SlTerm,
        rel: SlTerm,
        tid: SlTerm,
        attr: SlTerm,
        val: SlTerm,
    },
    Attr {
        db: SlTerm,
        rel: SlTerm,
        attr: SlTerm,
    },
    Rel {
        db: SlTerm,
        rel: SlTerm,
    },
    Db(SlTerm),
}

impl SlAtom {
    pub fn terms(&self) -> Vec<&SlTerm> {
        match self {
            SlAtom::Quad {
                db,
                rel,
                tid,
                attr,
                val,
            } => vec![db, rel, tid, attr, val],
            SlAtom::Attr { db, rel, attr } => vec![db, rel, attr],
            SlAtom::Rel { db, rel } => vec![db, rel],
            SlAtom::Db(db) => vec![db],
        }
    }

    pub fn db(&self) -> &SlTerm {
        match self {
            SlAtom::Quad { db, .. }
            | SlAtom::Attr { db, .. }
            | SlAtom::Rel { db, .. }
            | SlAtom::Db(db) => db,
        }
    }
}

/// A SchemaLog formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SlFormula {
    Atom(SlAtom),
    /// θ-comparison between terms.
    Cmp(SlTerm, Comparison, SlTerm),
    Not(Box<SlFormula>),
    And(Box<SlFormula>, Box<SlFormula>),
    Or(Box<SlFormula>, Box<SlFormula>),
    /// `premise -> conclusion`; a missing premise is the bare `-> φ`.
    Implies(Option<Box<SlFormula>>, Box<SlFormula>),
    Exists(String, Box<SlFormula>),
    Forall(String, Box<SlFormula>),
}

impl SlFormula {
    pub fn and(self, other: SlFormula) -> Self {
        SlFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: SlFormula) -> Self {
        SlFormula::Or(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        SlFormula::Not(Box::new(self))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut add = |t: &SlTerm, bound: &Vec<String>| {
            let mut vs = BTreeSet::new();
            t.vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            SlFormula::Atom(a) => a.terms().into_iter().for_each(|t| add(t, bound)),
            SlFormula::Cmp(l, _, r) => {
                add(l, bound);
                add(r, bound);
            }
            SlFormula::Not(f) => f.collect_free(bound, out),
            SlFormula::And(a, b) | SlFormula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            SlFormula::Implies(p, c) => {
                if let Some(p) = p {
                    p.collect_free(bound, out);
                }
                c.collect_free(bound, out);
            }
            SlFormula::Exists(x, f) | SlFormula::Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

/// A derived-predicate atom `p(t1, .., tn)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PredAtom {
    pub pred: String,
    pub args: Vec<SlTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Literal {
    Atom(SlAtom),
    Pred(PredAtom),
    Not(Box<Literal>),
    Cmp(SlTerm, Comparison, SlTerm),
}

/// `head :- body.` (an empty body is a fact).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SlRule {
    pub head: PredAtom,
    pub body: Vec<Literal>,
}

// ---------------------------------------------------------------------------
// Printing in the concrete syntax accepted by the parser.

fn is_plain_symbol(s: &str) -> bool {
    let mut chars = s.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    if !first.is_lowercase() {
        return false;
    }
    let b = s.as_bytes();
    s.chars()
        .all(|c| c.is_alphanumeric() || c == '_' || c == '-')
        && !s.ends_with('-')
        && !s.contains("--")
        && !b.windows(2).any(|w| w == b"->")
        && !super::parser::KEYWORDS.contains(&s)
}

impl fmt::Display for SlTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlTerm::Var(v) if v.starts_with("_#") => f.write_str("_"),
            SlTerm::Var(v) => f.write_str(v),
            SlTerm::Sym(Value::Text(s)) if is_plain_symbol(s) => f.write_str(s),
            SlTerm::Sym(Value::Text(s)) => write!(f, "'{}'", s.replace('\'', "''")),
            SlTerm::Sym(v) => f.write_str(&v.render()),
            SlTerm::App(name, args) => {
                write!(f, "{name}(")?;
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

impl fmt::Display for SlAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlAtom::Quad {
                db,
                rel,
                tid,
                attr,
                val,
            } => write!(f, "{db}::{rel}[{tid}: {attr} -> {val}]"),
            SlAtom::Attr { db, rel, attr } => write!(f, "{db}::{rel}[{attr}]"),
            SlAtom::Rel { db, rel } => write!(f, "{db}::{rel}"),
            SlAtom::Db(db) => write!(f, "{db}"),
        }
    }
}

impl fmt::Display for SlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlFormula::Atom(a) => write!(f, "{a}"),
            SlFormula::Cmp(l, op, r) => write!(f, "{l} {op} {r}"),
            SlFormula::Not(a) => write!(f, "not ({a})"),
            SlFormula::And(a, b) => write!(f, "({a} and {b})"),
            SlFormula::Or(a, b) => write!(f, "({a} or {b})"),
            SlFormula::Implies(None, c) => write!(f, "(=> {c})"),
            SlFormula::Implies(Some(p), c) => write!(f, "({p} => {c})"),
            SlFormula::Exists(x, a) => write!(f, "(exists {x}: {a})"),
            SlFormula::Forall(x, a) => write!(f, "(forall {x}: {a})"),
        }
    }
}

impl fmt::Display for PredAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.pred)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Atom(a) => write!(f, "{a}"),
            Literal::Pred(p) => write!(f, "{p}"),
            Literal::Not(l) => write!(f, "not {l}"),
            Literal::Cmp(l, op, r) => write!(f, "{l} {op} {r}"),
        }
    }
}

impl fmt::Display for SlRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        for (i, l) in self.body.iter().enumerate() {
            f.write_str(if i == 0 { " :- " } else { ", " })?;
            write!(f, "{l}")?;
        }
        f.write_str(".")
    }
}
