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

//! Printable query results.

use std::str::FromStr;

use serde_json::{json, Map, Number};

use crate::relation::Relation;
use crate::value::Value;

/// Output encodings of a [`ResultDocument`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// A relation ready for output: the column names with the attribute each
/// carries, and the rows in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultDocument {
    pub columns: Vec<(String, String)>,
    pub rows: Vec<Vec<Value>>,
}

impl From<&Relation> for ResultDocument {
    fn from(r: &Relation) -> Self {
        ResultDocument {
            columns: r
                .header()
                .iter()
                .map(|c| (c.column_name.clone(), c.attribute.clone()))
                .collect(),
            rows: r.rows().iter().cloned().collect(),
        }
    }
}

fn json_value(v: &Value) -> serde_json::Value {
    match v {
        Value::Null => serde_json::Value::Null,
        Value::Text(s) => serde_json::Value::String(s.clone()),
        Value::Number(_) => {
            let text = v.render();
            Number::from_str(&text)
                .map_or(serde_json::Value::String(text), serde_json::Value::Number)
        }
    }
}

impl ResultDocument {
    /// Header row of column names, then one line per row; `Null` is an
    /// empty field.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        // A zero-column result still prints one (empty) line per row.
        w.write_record(self.columns.iter().map(|(n, _)| n.as_str()))
            .expect("writing to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(|v| {
                if v.is_null() {
                    String::new()
                } else {
                    v.render()
                }
            }))
            .expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("writing to memory")).expect("fields are UTF-8")
    }

    /// `{"columns": [{"name", "attribute"}], "rows": [[..]]}` with `null`
    /// for `Null` and JSON numbers for numbers.
    pub fn to_json(&self) -> String {
        let columns: Vec<serde_json::Value> = self
            .columns
            .iter()
            .map(|(n, a)| json!({ "name": n, "attribute": a }))
            .collect();
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| serde_json::Value::Array(r.iter().map(json_value).collect()))
            .collect();
        let mut doc = Map::new();
        doc.insert("columns".into(), columns.into());
        doc.insert("rows".into(), rows.into());
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(doc))
            .expect("JSON values serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}
