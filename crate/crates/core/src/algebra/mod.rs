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

//! The relational algebra term language and its set-semantics evaluator.
//!
//! Terms cover rename, Cartesian product, projection, selection, union,
//! difference, natural join over an explicit column-pair set, EXTEND, the
//! empty-tuple constant and single-tuple literals. Update statements are
//! desugared into these operators by [`desugar_update`].

mod eval;
pub(crate) mod header;
mod syntax;
pub(crate) mod update;

use crate::relation::ColumnSpec;
use crate::value::{Comparison, Value};

pub use eval::{eval_term, union_compatible, Evaluator, RelationSource};
pub use header::{align_union, times_header};
pub use syntax::{parse_statement, parse_term, parse_terms, Statement};
pub use update::{desugar_update, UpdateStatement};

/// One side of a comparison atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Operand {
    /// Must name a column of the input.
    Column(String),
    Const(Value),
    /// A bare identifier from the textual syntax: a column when the input
    /// has one by that name, otherwise a text constant (only allowed when
    /// the other side resolves to a column).
    Name(String),
}

impl Operand {
    pub fn column(name: impl Into<String>) -> Self {
        Operand::Column(name.into())
    }

    pub fn constant(v: impl Into<Value>) -> Self {
        Operand::Const(v.into())
    }
}

/// Selection condition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    True,
    False,
    Compare {
        lhs: Operand,
        op: Comparison,
        rhs: Operand,
    },
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
    Not(Box<Condition>),
    /// Semijoin atom: the tuple of the named columns occurs in the relation
    /// computed by `source` (evaluated against the same instance).
    In {
        columns: Vec<String>,
        source: Box<AlgebraTerm>,
    },
}

impl Condition {
    pub fn cmp(lhs: Operand, op: Comparison, rhs: Operand) -> Self {
        Condition::Compare { lhs, op, rhs }
    }

    /// `column = constant`
    pub fn col_eq(column: impl Into<String>, value: impl Into<Value>) -> Self {
        Condition::cmp(
            Operand::column(column),
            Comparison::Eq,
            Operand::constant(value),
        )
    }

    /// `left = right` over two columns.
    pub fn cols_eq(left: impl Into<String>, right: impl Into<String>) -> Self {
        Condition::cmp(
            Operand::column(left),
            Comparison::Eq,
            Operand::column(right),
        )
    }

    pub fn and(self, other: Condition) -> Self {
        match (self, other) {
            (Condition::True, c) | (c, Condition::True) => c,
            (a, b) => Condition::And(Box::new(a), Box::new(b)),
        }
    }

    pub fn or(self, other: Condition) -> Self {
        Condition::Or(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Condition::Not(Box::new(self))
    }

    /// Conjunction of all conditions; `True` when empty.
    pub fn all(conds: impl IntoIterator<Item = Condition>) -> Self {
        conds.into_iter().fold(Condition::True, Condition::and)
    }

    pub fn is_in(columns: &[&str], source: AlgebraTerm) -> Self {
        Condition::In {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            source: Box::new(source),
        }
    }
}

/// Computed-column expression of EXTEND.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Column(String),
    Const(Value),
    /// The tuple-index digest of the argument values.
    Hash(Vec<Expr>),
}

/// A relational algebra term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraTerm {
    Base(String),
    /// The zero-arity relation `{<>}`.
    Empty,
    Rename {
        input: Box<AlgebraTerm>,
        from: String,
        to: String,
    },
    Times(Box<AlgebraTerm>, Box<AlgebraTerm>),
    Project {
        input: Box<AlgebraTerm>,
        columns: Vec<String>,
    },
    Select {
        input: Box<AlgebraTerm>,
        condition: Condition,
    },
    Union(Box<AlgebraTerm>, Box<AlgebraTerm>),
    Minus(Box<AlgebraTerm>, Box<AlgebraTerm>),
    /// Product, equality selection over `pairs` (left name, right name as
    /// seen before product renaming), then projection dropping the paired
    /// right-hand columns.
    NaturalJoin {
        left: Box<AlgebraTerm>,
        right: Box<AlgebraTerm>,
        pairs: Vec<(String, String)>,
    },
    Extend {
        input: Box<AlgebraTerm>,
        column: ColumnSpec,
        expr: Expr,
    },
    SingleTuple(Vec<(ColumnSpec, Value)>),
}

impl AlgebraTerm {
    pub fn base(name: impl Into<String>) -> Self {
        AlgebraTerm::Base(name.into())
    }

    pub fn rename(self, from: impl Into<String>, to: impl Into<String>) -> Self {
        AlgebraTerm::Rename {
            input: Box::new(self),
            from: from.into(),
            to: to.into(),
        }
    }

    pub fn times(self, other: AlgebraTerm) -> Self {
        AlgebraTerm::Times(Box::new(self), Box::new(other))
    }

    pub fn project<S: AsRef<str>>(self, columns: &[S]) -> Self {
        AlgebraTerm::Project {
            input: Box::new(self),
            columns: columns.iter().map(|c| c.as_ref().to_string()).collect(),
        }
    }

    pub fn select(self, condition: Condition) -> Self {
        AlgebraTerm::Select {
            input: Box::new(self),
            condition,
        }
    }

    pub fn union(self, other: AlgebraTerm) -> Self {
        AlgebraTerm::Union(Box::new(self), Box::new(other))
    }

    pub fn minus(self, other: AlgebraTerm) -> Self {
        AlgebraTerm::Minus(Box::new(self), Box::new(other))
    }

    pub fn join<S: AsRef<str>>(self, other: AlgebraTerm, pairs: &[(S, S)]) -> Self {
        AlgebraTerm::NaturalJoin {
            left: Box::new(self),
            right: Box::new(other),
            pairs: pairs
                .iter()
                .map(|(l, r)| (l.as_ref().to_string(), r.as_ref().to_string()))
                .collect(),
        }
    }

    pub fn extend(self, column: ColumnSpec, expr: Expr) -> Self {
        AlgebraTerm::Extend {
            input: Box::new(self),
            column,
            expr,
        }
    }

    /// Visits every node, including terms nested inside `IN` conditions.
    pub fn walk(&self, f: &mut dyn FnMut(&AlgebraTerm)) {
        f(self);
        match self {
            AlgebraTerm::Base(_) | AlgebraTerm::Empty | AlgebraTerm::SingleTuple(_) => {}
            AlgebraTerm::Rename { input, .. }
            | AlgebraTerm::Project { input, .. }
            | AlgebraTerm::Extend { input, .. } => input.walk(f),
            AlgebraTerm::Select { input, condition } => {
                input.walk(f);
                walk_condition(condition, f);
            }
            AlgebraTerm::Times(l, r) | AlgebraTerm::Union(l, r) | AlgebraTerm::Minus(l, r) => {
                l.walk(f);
                r.walk(f);
            }
            AlgebraTerm::NaturalJoin { left, right, .. } => {
                left.walk(f);
                right.walk(f);
            }
        }
    }

    /// Names of all base relations referenced, in first-visit order.
    pub fn base_names(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        self.walk(&mut |t| {
            if let AlgebraTerm::Base(n) = t {
                if !names.contains(n) {
                    names.push(n.clone());
                }
            }
        });
        names
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }
}

fn walk_condition(c: &Condition, f: &mut dyn FnMut(&AlgebraTerm)) {
    match c {
        Condition::And(a, b) | Condition::Or(a, b) => {
            walk_condition(a, f);
            walk_condition(b, f);
        }
        Condition::Not(a) => walk_condition(a, f),
        Condition::In { source, .. } => source.walk(f),
        Condition::True | Condition::False | Condition::Compare { .. } => {}
    }
}
