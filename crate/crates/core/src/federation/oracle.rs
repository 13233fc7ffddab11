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

//! Brute-force γ: enumerate item matches cell by cell.

use std::collections::BTreeSet;

use super::{Federation, Pattern};
use crate::error::Result;
use crate::relation::{ColumnSpec, Relation, Row};
use crate::value::Value;
use crate::vector::matter;

/// Enumerates `(d, r) ∈ S`, the tuples of `r` rebuilt by MATTER, and every
/// sequence of their non-null cells `(a_1, v_1) .. (a_k, v_k)` whose i-th
/// cell matches the i-th pattern item. With an empty pattern a pair is kept
/// when its relation holds at least one tuple.
///
/// The header is positional (`d`, `r`, `a1`, `v1`, ...); compare rows.
pub fn gamma_oracle(fed: &Federation, pattern: &Pattern, s: &Relation) -> Result<Relation> {
    let mut header = vec![ColumnSpec::named("d"), ColumnSpec::named("r")];
    for i in 1..=pattern.len() {
        header.push(ColumnSpec::named(format!("a{i}")));
        header.push(ColumnSpec::named(format!("v{i}")));
    }
    let mut out = BTreeSet::new();
    for pair in s.rows() {
        let (Some(d), Some(r)) = (pair[0].as_text(), pair[1].as_text()) else {
            continue;
        };
        let Ok(member) = fed.member(d) else { continue };
        let Some(sig) = member.schema.relation(r) else {
            continue;
        };
        for tuple in matter(sig, &member.store).rows() {
            let cells: Vec<(Value, &Value)> = sig
                .columns
                .iter()
                .zip(tuple)
                .filter(|(_, v)| !v.is_null())
                .map(|(c, v)| (Value::text(&c.column_name), v))
                .collect();
            let mut prefix: Row = vec![pair[0].clone(), pair[1].clone()];
            extend(&cells, pattern, 0, &mut prefix, &mut out);
        }
    }
    Relation::from_rows(header, out)
}

fn extend(
    cells: &[(Value, &Value)],
    pattern: &Pattern,
    i: usize,
    prefix: &mut Row,
    out: &mut BTreeSet<Row>,
) {
    if i == pattern.len() {
        out.insert(prefix.clone());
        return;
    }
    for (a, v) in cells {
        let Value::Text(name) = a else { continue };
        if pattern.0[i].matches(name, v) {
            prefix.push(a.clone());
            prefix.push((*v).clone());
            extend(cells, pattern, i + 1, prefix, out);
            prefix.truncate(prefix.len() - 2);
        }
    }
}
