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

//! DELETE, INSERT and UPDATE as derived operators.

use super::{AlgebraTerm, Condition, Expr};
use crate::error::{Error, Result};
use crate::relation::{ColumnSpec, Schema};
use crate::value::Value;

/// Prefix of the temporary columns an UPDATE desugars into.
pub(crate) const UPDATE_TEMP_PREFIX: &str = "#upd";

/// True for the names [`desugar_update`] introduces.
pub(crate) fn is_update_temp(name: &str) -> bool {
    name.strip_prefix(UPDATE_TEMP_PREFIX)
        .is_some_and(|n| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum UpdateStatement {
    Delete {
        relation: String,
        condition: Condition,
    },
    InsertValues {
        relation: String,
        values: Vec<Value>,
    },
    InsertQuery {
        relation: String,
        query: AlgebraTerm,
    },
    Update {
        relation: String,
        assignments: Vec<(String, Expr)>,
        condition: Condition,
    },
}

impl UpdateStatement {
    pub fn relation(&self) -> &str {
        match self {
            UpdateStatement::Delete { relation, .. }
            | UpdateStatement::InsertValues { relation, .. }
            | UpdateStatement::InsertQuery { relation, .. }
            | UpdateStatement::Update { relation, .. } => relation,
        }
    }
}

/// Rewrites an update statement into the term computing the new content
/// of the target relation.
///
/// UPDATE becomes `(r WHERE NOT C) UNION EXTEND..(r WHERE C)[#upd0..]`,
/// one EXTEND per column of `r`, each unassigned column copying itself.
pub fn desugar_update(stmt: &UpdateStatement, schema: &Schema) -> Result<AlgebraTerm> {
    let sig = schema.require(stmt.relation())?;
    let r = AlgebraTerm::base(&sig.name);
    match stmt {
        UpdateStatement::Delete { condition, .. } => {
            Ok(r.clone().minus(r.select(condition.clone())))
        }
        UpdateStatement::InsertValues { values, .. } => {
            if values.len() != sig.arity() {
                return Err(Error::ArityMismatch {
                    expected: sig.arity(),
                    found: values.len(),
                });
            }
            let cells = sig
                .columns
                .iter()
                .cloned()
                .zip(values.iter().cloned())
                .collect();
            Ok(r.union(AlgebraTerm::SingleTuple(cells)))
        }
        UpdateStatement::InsertQuery { query, .. } => Ok(r.union(query.clone())),
        UpdateStatement::Update {
            assignments,
            condition,
            ..
        } => {
            for (i, (col, _)) in assignments.iter().enumerate() {
                if sig.column_index(col).is_none() {
                    return Err(Error::UnknownColumn(col.clone()));
                }
                if assignments[..i].iter().any(|(c, _)| c == col) {
                    return Err(Error::DuplicateColumn(col.clone()));
                }
            }
            let mut changed = r.clone().select(condition.clone());
            let mut temps = Vec::with_capacity(sig.arity());
            for (i, col) in sig.columns.iter().enumerate() {
                let expr = assignments
                    .iter()
                    .find(|(c, _)| *c == col.column_name)
                    .map(|(_, e)| e.clone())
                    .unwrap_or_else(|| Expr::Column(col.column_name.clone()));
                let temp = format!("{UPDATE_TEMP_PREFIX}{i}");
                changed = changed.extend(ColumnSpec::new(&temp, &col.attribute), expr);
                temps.push(temp);
            }
            Ok(r.select(condition.clone().not())
                .union(changed.project(&temps)))
        }
    }
}
