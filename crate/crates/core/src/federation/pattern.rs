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

//! Cell patterns for the γ operator.

use std::fmt;

use crate::error::{Error, Result};
use crate::value::Value;

/// One pattern item `a -> v`; `None` is the wildcard `_`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternItem {
    pub attr: Option<String>,
    pub value: Option<Value>,
}

impl PatternItem {
    pub fn new(attr: Option<&str>, value: Option<Value>) -> Self {
        PatternItem {
            attr: attr.map(str::to_string),
            value,
        }
    }

    pub fn any() -> Self {
        PatternItem::new(None, None)
    }

    /// Whether the cell `attr -> value` matches this item.
    pub fn matches(&self, attr: &str, value: &Value) -> bool {
        self.attr.as_deref().is_none_or(|a| a == attr)
            && self.value.as_ref().is_none_or(|v| v == value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Pattern(pub Vec<PatternItem>);

impl Pattern {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses `item, item, ...` with items `a->v`, `a->_`, `_->v`, `_->_`
    /// (`→` is accepted for `->`, and a bare `->v` or `a->` leaves that side
    /// open). Either side may be quoted with `'` or `"` to include commas or
    /// arrows; unquoted values are typed as numbers when they parse as
    /// decimals. The empty string is the empty pattern.
    pub fn parse(text: &str) -> Result<Pattern> {
        let mut items = Vec::new();
        let mut rest = text.trim();
        if rest.is_empty() {
            return Ok(Pattern(items));
        }
        loop {
            let (attr, after) = side(rest)?;
            let after = after.trim_start();
            let after = after
                .strip_prefix("->")
                .or_else(|| after.strip_prefix('→'))
                .ok_or_else(|| bad(text, "expected `->`"))?;
            let (value, after) = side(after)?;
            items.push(PatternItem {
                attr: attr.map(|(s, _)| s),
                value: value.map(|(s, quoted)| {
                    if quoted {
                        Value::Text(s)
                    } else {
                        Value::infer(&s)
                    }
                }),
            });
            let after = after.trim_start();
            if after.is_empty() {
                return Ok(Pattern(items));
            }
            rest = after
                .strip_prefix(',')
                .ok_or_else(|| bad(text, "expected `,` between items"))?
                .trim_start();
        }
    }
}

fn bad(text: &str, msg: &str) -> Error {
    Error::InvalidArgument(format!("pattern `{text}`: {msg}"))
}

/// Reads one side of an item: `(text, was_quoted)` or `None` for `_`/empty.
fn side(s: &str) -> Result<(Option<(String, bool)>, &str)> {
    let s = s.trim_start();
    if let Some(q) = s.chars().next().filter(|c| *c == '\'' || *c == '"') {
        let body = &s[1..];
        let mut out = String::new();
        let mut chars = body.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            if c == q {
                if chars.peek().map(|(_, d)| *d) == Some(q) {
                    out.push(q);
                    chars.next();
                } else {
                    return Ok((Some((out, true)), &body[i + 1..]));
                }
            } else {
                out.push(c);
            }
        }
        return Err(bad(s, "unterminated quote"));
    }
    let end = [s.find("->"), s.find('→'), s.find(',')]
        .into_iter()
        .flatten()
        .min()
        .unwrap_or(s.len());
    let word = s[..end].trim();
    let parsed = match word {
        "" | "_" => None,
        w => Some((w.to_string(), false)),
    };
    Ok((parsed, &s[end..]))
}

fn write_side(f: &mut fmt::Formatter<'_>, s: Option<String>) -> fmt::Result {
    match s {
        None => f.write_str("_"),
        Some(s) => {
            let plain = !s.is_empty()
                && s != "_"
                && !s.contains([',', '\'', '"', '→'])
                && !s.contains("->")
                && s.trim() == s;
            if plain {
                f.write_str(&s)
            } else {
                write!(f, "'{}'", s.replace('\'', "''"))
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write_side(f, item.attr.clone())?;
            f.write_str("->")?;
            match &item.value {
                // Text that would re-parse as a number must stay quoted.
                Some(Value::Text(t)) if Value::parse_number(t).is_some() => write!(f, "'{t}'")?,
                v => write_side(f, v.as_ref().map(Value::render))?,
            }
        }
        Ok(())
    }
}
