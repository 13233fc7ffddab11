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

//! Relations, relation signatures and database schemas.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::value::Value;

/// One column of a relation header: its column name and the attribute it
/// carries. Renaming changes the name, never the attribute.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub column_name: String,
    pub attribute: String,
}

impl ColumnSpec {
    pub fn new(column_name: impl Into<String>, attribute: impl Into<String>) -> Self {
        ColumnSpec {
            column_name: column_name.into(),
            attribute: attribute.into(),
        }
    }

    /// A column whose attribute equals its name.
    pub fn named(name: impl Into<String>) -> Self {
        let name = name.into();
        ColumnSpec::new(name.clone(), name)
    }
}

pub type Row = Vec<Value>;

/// A relation instance under set semantics. Rows are kept ordered so that
/// evaluation output is deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    header: Vec<ColumnSpec>,
    rows: BTreeSet<Row>,
}

impl Relation {
    pub fn empty(header: Vec<ColumnSpec>) -> Self {
        Relation {
            header,
            rows: BTreeSet::new(),
        }
    }

    /// The zero-arity relation holding only the empty tuple.
    pub fn bottom() -> Self {
        Relation {
            header: Vec::new(),
            rows: BTreeSet::from([Vec::new()]),
        }
    }

    pub fn from_rows<I>(header: Vec<ColumnSpec>, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = Row>,
    {
        let mut rel = Relation::empty(header);
        for row in rows {
            rel.insert(row)?;
        }
        Ok(rel)
    }

    /// Convenience constructor for tests and examples: column names double
    /// as attributes, cells are typed with [`Value::infer`], and `""` is
    /// `Null`.
    pub fn from_strs(names: &[&str], rows: &[&[&str]]) -> Result<Self> {
        let header = names.iter().map(|n| ColumnSpec::named(*n)).collect();
        Relation::from_rows(
            header,
            rows.iter().map(|r| {
                r.iter()
                    .map(|c| {
                        if c.is_empty() {
                            Value::Null
                        } else {
                            Value::infer(c)
                        }
                    })
                    .collect()
            }),
        )
    }

    pub(crate) fn from_parts(header: Vec<ColumnSpec>, rows: BTreeSet<Row>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == header.len()));
        Relation { header, rows }
    }

    /// Adds a row; returns false when it was already present.
    pub fn insert(&mut self, row: Row) -> Result<bool> {
        if row.len() != self.header.len() {
            return Err(Error::ArityMismatch {
                expected: self.header.len(),
                found: row.len(),
            });
        }
        Ok(self.rows.insert(row))
    }

    pub fn header(&self) -> &[ColumnSpec] {
        &self.header
    }

    pub fn rows(&self) -> &BTreeSet<Row> {
        &self.rows
    }

    pub fn into_rows(self) -> BTreeSet<Row> {
        self.rows
    }

    pub fn arity(&self) -> usize {
        self.header.len()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_bottom(&self) -> bool {
        self.header.is_empty() && self.rows.len() == 1
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|c| c.column_name == name)
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.header.iter().map(|c| c.column_name.as_str()).collect()
    }

    pub fn attribute_set(&self) -> BTreeSet<&str> {
        self.header.iter().map(|c| c.attribute.as_str()).collect()
    }

    /// Same rows, different column labels. Arity must match.
    pub fn relabel(self, header: Vec<ColumnSpec>) -> Result<Self> {
        if header.len() != self.header.len() {
            return Err(Error::ArityMismatch {
                expected: self.header.len(),
                found: header.len(),
            });
        }
        Ok(Relation {
            header,
            rows: self.rows,
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.column_names().join(" | "))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join(" | "))?;
        }
        Ok(())
    }
}

/// Declared storage type for a column, overriding inference at ingestion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueType {
    Text,
    Number,
}

impl ValueType {
    /// Types a raw, non-empty field. A `number` column whose field does not
    /// parse as a decimal yields `None`.
    pub fn apply(self, raw: &str) -> Option<Value> {
        match self {
            ValueType::Text => Some(Value::text(raw)),
            ValueType::Number => Value::parse_number(raw),
        }
    }
}

/// Names starting with this prefix are reserved for engine temporaries.
pub const RESERVED_PREFIX: char = '#';

pub(crate) fn check_identifier(kind: &str, name: &str) -> Result<()> {
    if name.is_empty() {
        return Err(Error::InvalidSchema(format!("empty {kind} name")));
    }
    if name.starts_with(RESERVED_PREFIX) || name.chars().any(char::is_control) {
        return Err(Error::InvalidSchema(format!(
            "invalid {kind} name `{name}`"
        )));
    }
    Ok(())
}

/// Signature of a user relation: ordered columns plus key and NOT NULL
/// constraints (as column indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSignature {
    pub name: String,
    pub columns: Vec<ColumnSpec>,
    pub not_null: BTreeSet<usize>,
    pub primary_key: Vec<usize>,
    pub value_types: BTreeMap<usize, ValueType>,
}

impl RelationSignature {
    pub fn new(name: impl Into<String>, columns: Vec<ColumnSpec>) -> Result<Self> {
        let name = name.into();
        check_identifier("relation", &name)?;
        if columns.is_empty() {
            return Err(Error::InvalidSchema(format!(
                "relation `{name}` has no columns"
            )));
        }
        let mut names = BTreeSet::new();
        let mut attrs = BTreeSet::new();
        for c in &columns {
            check_identifier("column", &c.column_name)?;
            check_identifier("attribute", &c.attribute)?;
            if !names.insert(c.column_name.as_str()) {
                return Err(Error::InvalidSchema(format!(
                    "relation `{name}` repeats column `{}`",
                    c.column_name
                )));
            }
            if !attrs.insert(c.attribute.as_str()) {
                return Err(Error::InvalidSchema(format!(
                    "relation `{name}` repeats attribute `{}`",
                    c.attribute
                )));
            }
        }
        Ok(RelationSignature {
            name,
            columns,
            not_null: BTreeSet::new(),
            primary_key: Vec::new(),
            value_types: BTreeMap::new(),
        })
    }

    /// Signature whose attributes equal the column names.
    pub fn simple(name: &str, columns: &[&str]) -> Result<Self> {
        RelationSignature::new(
            name,
            columns.iter().map(|c| ColumnSpec::named(*c)).collect(),
        )
    }

    pub fn with_not_null(mut self, columns: &[&str]) -> Result<Self> {
        for c in columns {
            let i = self.index_of(c)?;
            self.not_null.insert(i);
        }
        Ok(self)
    }

    pub fn with_primary_key(mut self, columns: &[&str]) -> Result<Self> {
        let mut key = Vec::new();
        for c in columns {
            let i = self.index_of(c)?;
            if key.contains(&i) {
                return Err(Error::InvalidSchema(format!("key repeats column `{c}`")));
            }
            key.push(i);
        }
        self.primary_key = key;
        Ok(self)
    }

    pub fn with_value_type(mut self, column: &str, ty: ValueType) -> Result<Self> {
        let i = self.index_of(column)?;
        self.value_types.insert(i, ty);
        Ok(self)
    }

    pub fn arity(&self) -> usize {
        self.columns.len()
    }

    pub fn column_index(&self, column_name: &str) -> Option<usize> {
        self.columns
            .iter()
            .position(|c| c.column_name == column_name)
    }

    fn index_of(&self, column_name: &str) -> Result<usize> {
        self.column_index(column_name)
            .ok_or_else(|| Error::UnknownColumn(format!("{}.{}", self.name, column_name)))
    }

    /// Types a raw non-empty field of column `index`: the declared type when
    /// present, inference otherwise.
    pub fn type_field(&self, index: usize, raw: &str) -> Option<Value> {
        match self.value_types.get(&index) {
            Some(ty) => ty.apply(raw),
            None => Some(Value::infer(raw)),
        }
    }

    /// Key columns that must be non-null: the declared set plus the key.
    pub fn required_columns(&self) -> BTreeSet<usize> {
        let mut req = self.not_null.clone();
        req.extend(self.primary_key.iter().copied());
        req
    }
}

/// A database schema. The database name doubles as the name of its vector
/// relation and must differ from every relation name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    relations: Vec<RelationSignature>,
}

impl Schema {
    pub fn new(name: impl Into<String>, relations: Vec<RelationSignature>) -> Result<Self> {
        let name = name.into();
        check_identifier("database", &name)?;
        let mut seen = BTreeSet::new();
        for r in &relations {
            if r.name == name {
                return Err(Error::InvalidSchema(format!(
                    "relation `{}` shares the database name",
                    r.name
                )));
            }
            if !seen.insert(r.name.as_str()) {
                return Err(Error::InvalidSchema(format!(
                    "duplicate relation `{}`",
                    r.name
                )));
            }
        }
        Ok(Schema { name, relations })
    }

    pub fn relations(&self) -> &[RelationSignature] {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Option<&RelationSignature> {
        self.relations.iter().find(|r| r.name == name)
    }

    pub fn require(&self, name: &str) -> Result<&RelationSignature> {
        self.relation(name)
            .ok_or_else(|| Error::UnknownRelation(name.to_string()))
    }

    /// Catalog-only change: appends a column to `relation`.
    pub fn add_column(&self, relation: &str, column: ColumnSpec) -> Result<Schema> {
        let mut next = self.clone();
        let sig = next
            .relations
            .iter_mut()
            .find(|r| r.name == relation)
            .ok_or_else(|| Error::UnknownRelation(relation.to_string()))?;
        let mut columns = sig.columns.clone();
        columns.push(column);
        let mut rebuilt = RelationSignature::new(sig.name.clone(), columns)?;
        rebuilt.not_null = sig.not_null.clone();
        rebuilt.primary_key = sig.primary_key.clone();
        rebuilt.value_types = sig.value_types.clone();
        *sig = rebuilt;
        Ok(next)
    }

    /// Catalog-only change: removes a column, shifting constraint indices.
    pub fn drop_column(&self, relation: &str, column_name: &str) -> Result<Schema> {
        let mut next = self.clone();
        let sig = next
            .relations
            .iter_mut()
            .find(|r| r.name == relation)
            .ok_or_else(|| Error::UnknownRelation(relation.to_string()))?;
        let idx = sig
            .column_index(column_name)
            .ok_or_else(|| Error::UnknownColumn(format!("{relation}.{column_name}")))?;
        if sig.arity() == 1 {
            return Err(Error::InvalidSchema(format!(
                "cannot drop the last column of `{relation}`"
            )));
        }
        let shift = |i: usize| if i > idx { i - 1 } else { i };
        sig.columns.remove(idx);
        sig.not_null = sig
            .not_null
            .iter()
            .filter(|&&i| i != idx)
            .map(|&i| shift(i))
            .collect();
        sig.primary_key = sig
            .primary_key
            .iter()
            .filter(|&&i| i != idx)
            .map(|&i| shift(i))
            .collect();
        sig.value_types = sig
            .value_types
            .iter()
            .filter(|(&i, _)| i != idx)
            .map(|(&i, &t)| (shift(i), t))
            .collect();
        Ok(next)
    }
}

/// Relation instances keyed by relation name.
pub type Instance = BTreeMap<String, Relation>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_rejects_repeated_attributes() {
        let cols = vec![ColumnSpec::new("a", "x"), ColumnSpec::new("b", "x")];
        assert!(RelationSignature::new("r", cols).is_err());
        assert!(RelationSignature::simple("r", &["a", "a"]).is_err());
        assert!(RelationSignature::simple("r", &[]).is_err());
        assert!(RelationSignature::simple("r", &["#tmp"]).is_err());
    }

    #[test]
    fn schema_name_must_differ_from_relations() {
        let r = RelationSignature::simple("db", &["a"]).unwrap();
        assert!(Schema::new("db", vec![r]).is_err());
    }

    #[test]
    fn drop_column_shifts_constraints() {
        let sig = RelationSignature::simple("r", &["a", "b", "c"])
            .unwrap()
            .with_primary_key(&["c"])
            .unwrap()
            .with_not_null(&["a", "c"])
            .unwrap();
        let schema = Schema::new("db", vec![sig]).unwrap();
        let dropped = schema.drop_column("r", "b").unwrap();
        let r = dropped.relation("r").unwrap();
        assert_eq!(r.primary_key, vec![1]);
        assert_eq!(r.not_null, BTreeSet::from([0, 1]));
        let added = dropped.add_column("r", ColumnSpec::named("d")).unwrap();
        assert_eq!(added.relation("r").unwrap().arity(), 3);
        assert!(added.add_column("r", ColumnSpec::named("a")).is_err());
    }

    #[test]
    fn relation_rows_are_a_set() {
        let mut r = Relation::empty(vec![ColumnSpec::named("a")]);
        assert!(r.insert(vec![Value::int(1)]).unwrap());
        assert!(!r.insert(vec![Value::int(1)]).unwrap());
        assert!(r.insert(vec![Value::int(1), Value::int(2)]).is_err());
        assert_eq!(r.len(), 1);
    }
}
