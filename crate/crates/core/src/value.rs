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

//! Scalar values and the comparison built-ins used by selection conditions.

use std::fmt;
use std::str::FromStr;

use rust_decimal::Decimal;

/// A scalar cell value.
///
/// Numbers are exact decimals kept in normalized form, so `1.50` and `1.5`
/// are the same value and render identically. `Null` compares equal to
/// itself for set membership, but every comparison atom involving it is
/// false (see [`Comparison::holds`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Null,
    Number(Decimal),
    Text(String),
}

/// Token standing in for `Null` inside hashed tuple serializations.
pub const NULL_TOKEN: &str = "\u{0}NULL\u{0}";

impl Value {
    pub fn text(s: impl Into<String>) -> Self {
        Value::Text(s.into())
    }

    pub fn number(d: Decimal) -> Self {
        Value::Number(d.normalize())
    }

    pub fn int(i: i64) -> Self {
        Value::Number(Decimal::from(i))
    }

    /// Parses a plain decimal literal: optional `-`, digits, optional
    /// fraction. No exponents, no grouping separators, no leading `+`.
    pub fn parse_number(s: &str) -> Option<Value> {
        let body = s.strip_prefix('-').unwrap_or(s);
        let (int, frac) = match body.split_once('.') {
            Some((i, f)) => (i, Some(f)),
            None => (body, None),
        };
        let digits = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
        if !digits(int) || frac.is_some_and(|f| !digits(f)) {
            return None;
        }
        Decimal::from_str(s).ok().map(Value::number)
    }

    /// Types a raw field: a decimal literal becomes a `Number`, anything
    /// else stays `Text`.
    pub fn infer(s: &str) -> Value {
        Value::parse_number(s).unwrap_or_else(|| Value::text(s))
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Value::Text(s) => Some(s),
            _ => None,
        }
    }

    /// Canonical rendering used for hashing and file output. `Null` renders
    /// as the empty string here; hashing substitutes [`NULL_TOKEN`].
    pub fn render(&self) -> String {
        match self {
            Value::Null => String::new(),
            Value::Number(d) => render_decimal(d),
            Value::Text(s) => s.clone(),
        }
    }
}

fn render_decimal(d: &Decimal) -> String {
    let n = d.normalize();
    if n.is_zero() {
        "0".to_string()
    } else {
        n.to_string()
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Null => f.write_str("NULL"),
            other => f.write_str(&other.render()),
        }
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::text(s)
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::int(i)
    }
}

/// The built-in comparison predicates available in selection conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Comparison {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

impl Comparison {
    pub const ALL: [Comparison; 6] = [
        Comparison::Eq,
        Comparison::Ne,
        Comparison::Lt,
        Comparison::Gt,
        Comparison::Le,
        Comparison::Ge,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Eq => "=",
            Comparison::Ne => "<>",
            Comparison::Lt => "<",
            Comparison::Gt => ">",
            Comparison::Le => "<=",
            Comparison::Ge => ">=",
        }
    }

    pub fn negate(self) -> Comparison {
        match self {
            Comparison::Eq => Comparison::Ne,
            Comparison::Ne => Comparison::Eq,
            Comparison::Lt => Comparison::Ge,
            Comparison::Gt => Comparison::Le,
            Comparison::Le => Comparison::Gt,
            Comparison::Ge => Comparison::Lt,
        }
    }

    /// Evaluates `lhs θ rhs`. Any `Null` operand makes the atom false.
    /// Numbers compare numerically and texts lexicographically; a number
    /// and a text are never equal and never ordered.
    pub fn holds(self, lhs: &Value, rhs: &Value) -> bool {
        use std::cmp::Ordering;
        let ord: Option<Ordering> = match (lhs, rhs) {
            (Value::Null, _) | (_, Value::Null) => return false,
            (Value::Number(a), Value::Number(b)) => Some(a.cmp(b)),
            (Value::Text(a), Value::Text(b)) => Some(a.as_str().cmp(b.as_str())),
            _ => None,
        };
        match (self, ord) {
            (Comparison::Eq, Some(o)) => o == Ordering::Equal,
            (Comparison::Ne, Some(o)) => o != Ordering::Equal,
            (Comparison::Lt, Some(o)) => o == Ordering::Less,
            (Comparison::Gt, Some(o)) => o == Ordering::Greater,
            (Comparison::Le, Some(o)) => o != Ordering::Greater,
            (Comparison::Ge, Some(o)) => o != Ordering::Less,
            (Comparison::Ne, None) => true,
            (_, None) => false,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
