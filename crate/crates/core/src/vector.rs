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

//! The vector relation: every user tuple stored as one
//! `(r-name, t-index, a-name, value)` quadruple per non-null cell.
//!
//! PARSE turns user tuples into quadruples, MATTER and VIEW turn them back.
//! A quadruple store never holds `Null`; a missing cell is `Null`.

use std::collections::{btree_map, BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::hash::{hash_tuple, TupleIndex};
use crate::relation::{ColumnSpec, Instance, Relation, RelationSignature, Row, Schema};
use crate::value::Value;

/// Column names of a vector relation, in order.
pub const VECTOR_COLUMNS: [&str; 4] = ["r-name", "t-index", "a-name", "value"];

/// Header of a vector relation (attributes equal column names).
pub fn vector_header() -> Vec<ColumnSpec> {
    VECTOR_COLUMNS
        .iter()
        .map(|c| ColumnSpec::named(*c))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VectorTuple {
    pub r_name: String,
    pub t_index: TupleIndex,
    pub a_name: String,
    pub value: Value,
}

type CellKey = (String, TupleIndex, String);

/// A set of quadruples keyed by `(r-name, t-index, a-name)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VectorRelation {
    pub db_name: String,
    cells: BTreeMap<CellKey, Value>,
}

impl VectorRelation {
    pub fn new(db_name: impl Into<String>) -> Self {
        VectorRelation {
            db_name: db_name.into(),
            cells: BTreeMap::new(),
        }
    }

    /// Adds a quadruple. Re-adding an identical one is a no-op; a different
    /// value under an existing key is a key violation.
    pub fn insert(&mut self, t: VectorTuple) -> Result<()> {
        if t.value.is_null() {
            return Err(Error::NotNull {
                relation: self.db_name.clone(),
                column: "value".into(),
            });
        }
        match self.cells.entry((t.r_name, t.t_index, t.a_name)) {
            btree_map::Entry::Vacant(e) => {
                e.insert(t.value);
                Ok(())
            }
            btree_map::Entry::Occupied(e) if *e.get() == t.value => Ok(()),
            btree_map::Entry::Occupied(e) => {
                let (r, tid, a) = e.key();
                Err(Error::PrimaryKey {
                    relation: self.db_name.clone(),
                    detail: format!("({r}, {tid}, {a}) already holds {}", e.get()),
                })
            }
        }
    }

    pub fn get(&self, r_name: &str, t_index: &TupleIndex, a_name: &str) -> Option<&Value> {
        self.cells
            .get(&(r_name.to_string(), t_index.clone(), a_name.to_string()))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Quadruples in key order.
    pub fn cells(&self) -> impl Iterator<Item = (&str, &TupleIndex, &str, &Value)> {
        self.cells
            .iter()
            .map(|((r, t, a), v)| (r.as_str(), t, a.as_str(), v))
    }

    pub fn tuples(&self) -> impl Iterator<Item = VectorTuple> + '_ {
        self.cells.iter().map(|((r, t, a), v)| VectorTuple {
            r_name: r.clone(),
            t_index: t.clone(),
            a_name: a.clone(),
            value: v.clone(),
        })
    }

    /// Distinct relation names present.
    pub fn relation_names(&self) -> BTreeSet<&str> {
        self.cells.keys().map(|(r, _, _)| r.as_str()).collect()
    }

    /// Removes every quadruple of tuple `t_index` in `r_name`; returns how
    /// many were removed.
    pub fn remove_tuple(&mut self, r_name: &str, t_index: &TupleIndex) -> usize {
        let before = self.cells.len();
        self.cells
            .retain(|(r, t, _), _| !(r == r_name && t == t_index));
        before - self.cells.len()
    }

    /// Removes every quadruple of column `a_name` in `r_name`.
    pub fn remove_column(&mut self, r_name: &str, a_name: &str) -> usize {
        let before = self.cells.len();
        self.cells
            .retain(|(r, _, a), _| !(r == r_name && a == a_name));
        before - self.cells.len()
    }

    /// The store as a 4-column relation; t-index values are text.
    pub fn to_relation(&self) -> Relation {
        let rows = self
            .cells()
            .map(|(r, t, a, v)| {
                vec![
                    Value::text(r),
                    Value::text(t.as_str()),
                    Value::text(a),
                    v.clone(),
                ]
            })
            .collect();
        Relation::from_parts(vector_header(), rows)
    }

    /// Reads a 4-column relation (columns by position) back into a store.
    pub fn from_relation(db_name: impl Into<String>, rel: &Relation) -> Result<Self> {
        let mut out = VectorRelation::new(db_name);
        for t in vector_rows(rel)? {
            out.insert(t)?;
        }
        Ok(out)
    }
}

/// Decodes the rows of a 4-column vector-typed relation.
pub fn vector_rows(rel: &Relation) -> Result<Vec<VectorTuple>> {
    if rel.arity() != 4 {
        return Err(Error::ArityMismatch {
            expected: 4,
            found: rel.arity(),
        });
    }
    rel.rows()
        .iter()
        .map(|row| {
            let text = |i: usize| match &row[i] {
                Value::Text(s) => Ok(s.clone()),
                other => Err(Error::InvalidArgument(format!(
                    "vector column `{}` holds non-text value {other}",
                    VECTOR_COLUMNS[i]
                ))),
            };
            let raw_tid = text(1)?;
            let t_index = TupleIndex::parse(&raw_tid)
                .ok_or_else(|| Error::InvalidArgument(format!("malformed t-index `{raw_tid}`")))?;
            if row[3].is_null() {
                return Err(Error::InvalidArgument("vector value is NULL".into()));
            }
            Ok(VectorTuple {
                r_name: text(0)?,
                t_index,
                a_name: text(2)?,
                value: row[3].clone(),
            })
        })
        .collect()
}

/// PARSE of one tuple: a quadruple per non-null cell, all sharing the
/// digest of the whole tuple (Null cells included).
pub fn parse_tuple(sig: &RelationSignature, d: &[Value]) -> Result<Vec<VectorTuple>> {
    if d.len() != sig.arity() {
        return Err(Error::ArityMismatch {
            expected: sig.arity(),
            found: d.len(),
        });
    }
    let tid = hash_tuple(d);
    Ok(sig
        .columns
        .iter()
        .zip(d)
        .filter(|(_, v)| !v.is_null())
        .map(|(c, v)| VectorTuple {
            r_name: sig.name.clone(),
            t_index: tid.clone(),
            a_name: c.column_name.clone(),
            value: v.clone(),
        })
        .collect())
}

/// PARSE of a whole instance into the store named after the schema.
/// Relations absent from `instance` count as empty.
pub fn parse_instance(schema: &Schema, instance: &Instance) -> Result<VectorRelation> {
    for name in instance.keys() {
        schema.require(name)?;
    }
    let mut out = VectorRelation::new(&schema.name);
    for sig in schema.relations() {
        let Some(rel) = instance.get(&sig.name) else {
            continue;
        };
        let mut seen: BTreeMap<TupleIndex, &Row> = BTreeMap::new();
        for row in rel.rows() {
            if row.len() != sig.arity() {
                return Err(Error::ArityMismatch {
                    expected: sig.arity(),
                    found: row.len(),
                });
            }
            let tid = hash_tuple(row);
            if let Some(prev) = seen.insert(tid.clone(), row) {
                if prev != row {
                    return Err(Error::HashCollision {
                        relation: sig.name.clone(),
                        digest: tid.into_string(),
                    });
                }
            }
            for t in parse_tuple(sig, row)? {
                out.insert(t)?;
            }
        }
    }
    Ok(out)
}

/// Column sequence of a view: `(relation, column name)` per output column.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ViewType(pub Vec<(String, String)>);

impl ViewType {
    /// All columns of one relation, in order.
    pub fn of_signature(sig: &RelationSignature) -> Self {
        ViewType(
            sig.columns
                .iter()
                .map(|c| (sig.name.clone(), c.column_name.clone()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks every pair names an existing column of `schema`.
    pub fn check(&self, schema: &Schema) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::InvalidArgument("empty view type".into()));
        }
        for (r, c) in &self.0 {
            if schema.require(r)?.column_index(c).is_none() {
                return Err(Error::UnknownColumn(format!("{r}.{c}")));
            }
        }
        Ok(())
    }
}

/// Cells grouped by tuple index, optionally restricted to one relation.
fn group_cells<'a>(
    cells: impl Iterator<Item = (&'a str, &'a TupleIndex, &'a str, &'a Value)>,
    only_relation: Option<&str>,
) -> BTreeMap<&'a TupleIndex, BTreeMap<(&'a str, &'a str), &'a Value>> {
    let mut by_id: BTreeMap<&TupleIndex, BTreeMap<(&str, &str), &Value>> = BTreeMap::new();
    for (r, t, a, v) in cells {
        if only_relation.is_some_and(|o| o != r) {
            continue;
        }
        by_id.entry(t).or_default().insert((r, a), v);
    }
    by_id
}

fn assemble<'a>(
    header: Vec<ColumnSpec>,
    by_id: BTreeMap<&'a TupleIndex, BTreeMap<(&'a str, &'a str), &'a Value>>,
    columns: &[(&str, &str)],
) -> Relation {
    let rows = by_id
        .values()
        .map(|cells| {
            columns
                .iter()
                .map(|key| cells.get(key).map(|v| (*v).clone()).unwrap_or(Value::Null))
                .collect()
        })
        .collect();
    Relation::from_parts(header, rows)
}

/// MATTER: rebuilds the tuples of `sig` from the store. Every t-index seen
/// under `sig.name` yields one row; absent cells are `Null`.
pub fn matter(sig: &RelationSignature, v: &VectorRelation) -> Relation {
    matter_cells(sig, v.cells())
}

/// MATTER over a vector-typed relation (columns by position).
pub fn matter_relation(sig: &RelationSignature, r: &Relation) -> Result<Relation> {
    let rows = vector_rows(r)?;
    Ok(matter_cells(
        sig,
        rows.iter()
            .map(|t| (t.r_name.as_str(), &t.t_index, t.a_name.as_str(), &t.value)),
    ))
}

fn matter_cells<'a>(
    sig: &RelationSignature,
    cells: impl Iterator<Item = (&'a str, &'a TupleIndex, &'a str, &'a Value)>,
) -> Relation {
    let by_id = group_cells(cells, Some(&sig.name));
    let known: BTreeSet<&str> = sig.columns.iter().map(|c| c.column_name.as_str()).collect();
    let stray = by_id
        .values()
        .flat_map(|m| m.keys())
        .filter(|(_, a)| !known.contains(a))
        .count();
    if stray > 0 {
        log::warn!(
            "{stray} cells of `{}` name no current column and were ignored",
            sig.name
        );
    }
    let columns: Vec<(&str, &str)> = sig
        .columns
        .iter()
        .map(|c| (sig.name.as_str(), c.column_name.as_str()))
        .collect();
    assemble(sig.columns.clone(), by_id, &columns)
}

/// VIEW: one row per t-index occurring anywhere in `r`, column `i` taken
/// from the quadruple `(vt[i].0, id, vt[i].1, _)` or `Null` if absent.
/// Output columns are named after the view-type column names.
pub fn view(vt: &ViewType, r: &Relation) -> Result<Relation> {
    let rows = vector_rows(r)?;
    let by_id = group_cells(
        rows.iter()
            .map(|t| (t.r_name.as_str(), &t.t_index, t.a_name.as_str(), &t.value)),
        None,
    );
    let header =
        vt.0.iter()
            .map(|(_, c)| ColumnSpec::named(c.as_str()))
            .collect();
    let columns: Vec<(&str, &str)> = vt.0.iter().map(|(r, c)| (r.as_str(), c.as_str())).collect();
    Ok(assemble(header, by_id, &columns))
}

/// Checks that `v` and `instance` determine each other: each relation
/// equals its MATTER, and each non-null cell of each tuple is stored under
/// the tuple's digest.
pub fn check_canonical(schema: &Schema, v: &VectorRelation, instance: &Instance) -> bool {
    let empty_rows = BTreeSet::new();
    for sig in schema.relations() {
        let rows = instance
            .get(&sig.name)
            .map(|r| r.rows())
            .unwrap_or(&empty_rows);
        if matter(sig, v).rows() != rows {
            return false;
        }
        for row in rows {
            let tid = hash_tuple(row);
            for (c, x) in sig.columns.iter().zip(row) {
                if !x.is_null() && v.get(&sig.name, &tid, &c.column_name) != Some(x) {
                    return false;
                }
            }
        }
    }
    // Quadruples of relations outside the schema have no counterpart.
    v.relation_names()
        .iter()
        .all(|r| schema.relation(r).is_some())
}

/// A schema-flexible change applied to the store (and, for column changes,
/// to the catalog).
#[derive(Clone, Debug, PartialEq)]
pub enum VectorDml {
    InsertTuple {
        relation: String,
        values: Row,
    },
    DeleteTuple {
        relation: String,
        values: Row,
    },
    DropColumn {
        relation: String,
        column: String,
    },
    AddColumn {
        relation: String,
        column: ColumnSpec,
    },
}

/// Applies `op`, returning the new schema and store. Inserts enforce the
/// relation's NOT NULL and primary-key constraints.
pub fn vector_dml(
    schema: &Schema,
    v: &VectorRelation,
    op: &VectorDml,
) -> Result<(Schema, VectorRelation)> {
    let mut out = v.clone();
    match op {
        VectorDml::InsertTuple { relation, values } => {
            let sig = schema.require(relation)?;
            check_tuple(sig, values)?;
            if !sig.primary_key.is_empty() {
                let key: Vec<&Value> = sig.primary_key.iter().map(|&i| &values[i]).collect();
                let clash = matter(sig, v).rows().iter().any(|row| {
                    row != values
                        && sig
                            .primary_key
                            .iter()
                            .map(|&i| &row[i])
                            .eq(key.iter().copied())
                });
                if clash {
                    return Err(Error::PrimaryKey {
                        relation: relation.clone(),
                        detail: "duplicate key value".into(),
                    });
                }
            }
            let quads = parse_tuple(sig, values)?;
            if let Some(q) = quads.first() {
                let foreign = v.cells().any(|(r, t, a, x)| {
                    r == relation
                        && *t == q.t_index
                        && !quads.iter().any(|q| q.a_name == a && q.value == *x)
                });
                if foreign {
                    return Err(Error::HashCollision {
                        relation: relation.clone(),
                        digest: q.t_index.to_string(),
                    });
                }
            }
            for q in quads {
                out.insert(q)?;
            }
            Ok((schema.clone(), out))
        }
        VectorDml::DeleteTuple { relation, values } => {
            let sig = schema.require(relation)?;
            if values.len() != sig.arity() {
                return Err(Error::ArityMismatch {
                    expected: sig.arity(),
                    found: values.len(),
                });
            }
            out.remove_tuple(relation, &hash_tuple(values));
            Ok((schema.clone(), out))
        }
        VectorDml::DropColumn { relation, column } => {
            let schema = schema.drop_column(relation, column)?;
            out.remove_column(relation, column);
            Ok((schema, out))
        }
        VectorDml::AddColumn { relation, column } => {
            Ok((schema.add_column(relation, column.clone())?, out))
        }
    }
}

/// Arity, all-Null and NOT NULL checks for a tuple entering `sig`.
pub fn check_tuple(sig: &RelationSignature, values: &[Value]) -> Result<()> {
    if values.len() != sig.arity() {
        return Err(Error::ArityMismatch {
            expected: sig.arity(),
            found: values.len(),
        });
    }
    if values.iter().all(Value::is_null) {
        return Err(Error::AllNullTuple(sig.name.clone()));
    }
    for i in sig.required_columns() {
        if values[i].is_null() {
            return Err(Error::NotNull {
                relation: sig.name.clone(),
                column: sig.columns[i].column_name.clone(),
            });
        }
    }
    Ok(())
}
