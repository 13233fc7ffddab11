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

//! On-disk formats: catalogs (JSON), vector stores (CSV), per-relation
//! data files for ingestion and federation configs.
//!
//! A store home holds one directory per database:
//!
//! ```text
//! <home>/<db>/catalog.json   catalog document with that single database
//! <home>/<db>/vector.csv     r-name,t-index,a-name,value rows, sorted
//! ```
//!
//! Writing is canonical: loading and saving again reproduces the same
//! bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::federation::{CatalogSource, Federation, Member};
use crate::hash::TupleIndex;
use crate::relation::{ColumnSpec, Instance, Relation, RelationSignature, Row, Schema, ValueType};
use crate::value::Value;
use crate::vector::{check_tuple, parse_instance, VectorRelation, VectorTuple, VECTOR_COLUMNS};

/// Environment variable naming the default store home.
pub const HOME_ENV: &str = "IVECDB_HOME";
pub const CATALOG_FILE: &str = "catalog.json";
pub const VECTOR_FILE: &str = "vector.csv";

// ---------------------------------------------------------------------------
// Catalog documents.

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogDocument {
    pub databases: Vec<DatabaseDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatabaseDoc {
    pub name: String,
    pub relations: Vec<RelationDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    pub name: String,
    pub columns: Vec<ColumnDoc>,
    #[serde(default)]
    pub primary_key: Vec<String>,
    #[serde(default)]
    pub not_null: Vec<String>,
}

/// A column; `attribute` defaults to the column name and `type` forces
/// the stored type of its values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnDoc {
    pub column_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attribute: Option<String>,
    #[serde(default, rename = "type", skip_serializing_if = "Option::is_none")]
    pub value_type: Option<ValueType>,
}

impl DatabaseDoc {
    pub fn of_schema(schema: &Schema) -> Self {
        let relations = schema
            .relations()
            .iter()
            .map(|sig| RelationDoc {
                name: sig.name.clone(),
                columns: sig
                    .columns
                    .iter()
                    .enumerate()
                    .map(|(i, c)| ColumnDoc {
                        column_name: c.column_name.clone(),
                        attribute: Some(c.attribute.clone()),
                        value_type: sig.value_types.get(&i).copied(),
                    })
                    .collect(),
                primary_key: sig
                    .primary_key
                    .iter()
                    .map(|&i| sig.columns[i].column_name.clone())
                    .collect(),
                not_null: sig
                    .not_null
                    .iter()
                    .map(|&i| sig.columns[i].column_name.clone())
                    .collect(),
            })
            .collect();
        DatabaseDoc {
            name: schema.name.clone(),
            relations,
        }
    }

    pub fn to_schema(&self) -> Result<Schema> {
        let mut sigs = Vec::new();
        for r in &self.relations {
            let columns = r
                .columns
                .iter()
                .map(|c| {
                    ColumnSpec::new(
                        &c.column_name,
                        c.attribute.as_deref().unwrap_or(&c.column_name),
                    )
                })
                .collect();
            let mut sig = RelationSignature::new(&r.name, columns)?;
            let pk: Vec<&str> = r.primary_key.iter().map(String::as_str).collect();
            let nn: Vec<&str> = r.not_null.iter().map(String::as_str).collect();
            sig = sig.with_primary_key(&pk)?.with_not_null(&nn)?;
            for c in &r.columns {
                if let Some(ty) = c.value_type {
                    sig = sig.with_value_type(&c.column_name, ty)?;
                }
            }
            sigs.push(sig);
        }
        Schema::new(&self.name, sigs)
    }
}

impl CatalogDocument {
    pub fn of_schemas<'a>(schemas: impl IntoIterator<Item = &'a Schema>) -> Self {
        CatalogDocument {
            databases: schemas.into_iter().map(DatabaseDoc::of_schema).collect(),
        }
    }

    pub fn to_schemas(&self) -> Result<Vec<Schema>> {
        let mut names = BTreeSet::new();
        let mut out = Vec::new();
        for db in &self.databases {
            if !names.insert(db.name.as_str()) {
                return Err(Error::InvalidSchema(format!(
                    "database `{}` listed twice",
                    db.name
                )));
            }
            out.push(db.to_schema()?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("catalog documents serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str, file: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Data {
            file: file.to_string(),
            line: e.line() as u64,
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        CatalogDocument::from_json(&text, &path.display().to_string())
    }
}

// ---------------------------------------------------------------------------
// Vector store CSV.

fn data_error(file: &Path, line: u64, message: impl std::fmt::Display) -> Error {
    Error::Data {
        file: file.display().to_string(),
        line,
        message: message.to_string(),
    }
}

fn csv_line(r: &csv::StringRecord) -> u64 {
    r.position().map_or(0, |p| p.line())
}

/// Canonical CSV text of a store: header, then rows sorted by the rendered
/// fields.
pub fn vector_csv(store: &VectorRelation) -> String {
    let mut rows: Vec<[String; 4]> = store
        .cells()
        .map(|(r, t, a, v)| [r.to_string(), t.to_string(), a.to_string(), v.render()])
        .collect();
    rows.sort();
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(VECTOR_COLUMNS).expect("writing to memory");
    for r in &rows {
        w.write_record(r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("fields are UTF-8")
}

/// Reads a store, typing each value through the catalog column it belongs
/// to (declared type, else inference).
pub fn read_vector_csv(schema: &Schema, text: &str, file: &Path) -> Result<VectorRelation> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| data_error(file, 1, e))?.clone();
    if header.iter().collect::<Vec<_>>() != VECTOR_COLUMNS {
        return Err(data_error(
            file,
            1,
            format!("expected header {}", VECTOR_COLUMNS.join(",")),
        ));
    }
    let mut store = VectorRelation::new(&schema.name);
    for rec in rdr.records() {
        let rec = rec.map_err(|e| data_error(file, e.position().map_or(0, |p| p.line()), e))?;
        let line = csv_line(&rec);
        if rec.len() != 4 {
            return Err(data_error(
                file,
                line,
                format!("expected 4 fields, found {}", rec.len()),
            ));
        }
        let t_index = TupleIndex::parse(&rec[1])
            .ok_or_else(|| data_error(file, line, format!("bad t-index `{}`", &rec[1])))?;
        let sig = schema.relation(&rec[0]).ok_or_else(|| {
            data_error(
                file,
                line,
                format!("relation `{}` is not in the catalog", &rec[0]),
            )
        })?;
        let idx = sig.column_index(&rec[2]).ok_or_else(|| {
            data_error(
                file,
                line,
                format!("column `{}` is not in relation `{}`", &rec[2], &rec[0]),
            )
        })?;
        let value = sig
            .type_field(idx, &rec[3])
            .ok_or_else(|| data_error(file, line, format!("`{}` is not a number", &rec[3])))?;
        store
            .insert(VectorTuple {
                r_name: rec[0].to_string(),
                t_index,
                a_name: rec[2].to_string(),
                value,
            })
            .map_err(|e| data_error(file, line, e))?;
    }
    Ok(store)
}

// ---------------------------------------------------------------------------
// Store homes.

/// The store home: `explicit`, else `$IVECDB_HOME`, else `./ivecdb-data`.
pub fn resolve_home(explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(HOME_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("ivecdb-data"))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes `<home>/<db>/catalog.json` and `<home>/<db>/vector.csv`.
pub fn save_database(home: &Path, schema: &Schema, store: &VectorRelation) -> Result<()> {
    let dir = home.join(&schema.name);
    write_file(
        &dir.join(CATALOG_FILE),
        &CatalogDocument::of_schemas([schema]).to_json(),
    )?;
    write_file(&dir.join(VECTOR_FILE), &vector_csv(store))
}

pub fn load_database(home: &Path, name: &str) -> Result<(Schema, VectorRelation)> {
    let dir = home.join(name);
    let cat_path = dir.join(CATALOG_FILE);
    if !cat_path.exists() {
        return Err(Error::UnknownDatabase(format!(
            "{name} (no catalog under {})",
            dir.display()
        )));
    }
    let doc = CatalogDocument::load(&cat_path)?;
    let mut schemas = doc.to_schemas()?;
    if schemas.len() != 1 || schemas[0].name != name {
        return Err(data_error(
            &cat_path,
            1,
            format!("expected exactly the database `{name}`"),
        ));
    }
    let schema = schemas.remove(0);
    let vec_path = dir.join(VECTOR_FILE);
    let text = fs::read_to_string(&vec_path).map_err(|e| Error::io(&vec_path, e))?;
    let store = read_vector_csv(&schema, &text, &vec_path)?;
    Ok((schema, store))
}

/// Names of the databases stored under `home`, sorted.
pub fn list_databases(home: &Path) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let entries = match fs::read_dir(home) {
        Ok(e) => e,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
        Err(e) => return Err(Error::io(home, e)),
    };
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(home, e))?;
        if entry.path().join(CATALOG_FILE).is_file() {
            out.push(entry.file_name().to_string_lossy().into_owned());
        }
    }
    out.sort();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Ingestion.

/// Reads one relation's CSV data file. The first row must repeat the
/// column names; empty fields are `Null`.
pub fn read_data_csv(sig: &RelationSignature, text: &str, file: &Path) -> Result<Relation> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let names: Vec<&str> = sig.columns.iter().map(|c| c.column_name.as_str()).collect();
    let header = rdr.headers().map_err(|e| data_error(file, 1, e))?.clone();
    if !header.is_empty() && header.iter().collect::<Vec<_>>() != names {
        return Err(data_error(
            file,
            1,
            format!("expected header {}", names.join(",")),
        ));
    }
    let mut keys: BTreeMap<Vec<Value>, (Row, u64)> = BTreeMap::new();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| data_error(file, e.position().map_or(0, |p| p.line()), e))?;
        let line = csv_line(&rec);
        if rec.len() != sig.arity() {
            return Err(data_error(
                file,
                line,
                Error::ArityMismatch {
                    expected: sig.arity(),
                    found: rec.len(),
                },
            ));
        }
        let mut row = Vec::with_capacity(rec.len());
        for (i, raw) in rec.iter().enumerate() {
            if raw.is_empty() {
                row.push(Value::Null);
                continue;
            }
            let v = sig.type_field(i, raw).ok_or_else(|| {
                data_error(
                    file,
                    line,
                    format!("`{raw}` in column `{}` is not a number", names[i]),
                )
            })?;
            row.push(v);
        }
        check_tuple(sig, &row).map_err(|e| data_error(file, line, e))?;
        if !sig.primary_key.is_empty() {
            let key: Vec<Value> = sig.primary_key.iter().map(|&i| row[i].clone()).collect();
            if let Some((prev, prev_line)) = keys.get(&key) {
                if *prev != row {
                    return Err(data_error(
                        file,
                        line,
                        Error::PrimaryKey {
                            relation: sig.name.clone(),
                            detail: format!("key repeats the tuple of line {prev_line}"),
                        },
                    ));
                }
            }
            keys.insert(key, (row.clone(), line));
        }
        rows.push(row);
    }
    Relation::from_rows(sig.columns.clone(), rows)
}

/// Locates the data file of `db.relation` under `data_dir`: first
/// `<dir>/<db>/<relation>.csv`, then `<dir>/<relation>.csv`. A relation
/// without a file is empty.
fn data_file(data_dir: &Path, db: &str, relation: &str) -> Option<PathBuf> {
    let file = format!("{relation}.csv");
    [data_dir.join(db).join(&file), data_dir.join(&file)]
        .into_iter()
        .find(|p| p.is_file())
}

/// Ingests every database of a catalog document from CSV data files.
pub fn ingest(doc: &CatalogDocument, data_dir: &Path) -> Result<Vec<(Schema, VectorRelation)>> {
    let mut out = Vec::new();
    for schema in doc.to_schemas()? {
        let mut instance = Instance::new();
        for sig in schema.relations() {
            let Some(path) = data_file(data_dir, &schema.name, &sig.name) else {
                log::info!(
                    "{}.{}: no data file, relation left empty",
                    schema.name,
                    sig.name
                );
                continue;
            };
            let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            instance.insert(sig.name.clone(), read_data_csv(sig, &text, &path)?);
        }
        let store = parse_instance(&schema, &instance)?;
        out.push((schema, store));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Federation configs.

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogSourceDoc {
    #[default]
    Derived,
    Catalog,
}

/// `{"home": "..", "databases": [..], "catalog_source": "derived"}`. A
/// relative home is resolved against the config file's directory; missing
/// `databases` means every database in the home.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FederationConfig {
    #[serde(default)]
    pub home: Option<PathBuf>,
    #[serde(default)]
    pub databases: Option<Vec<String>>,
    #[serde(default)]
    pub catalog_source: CatalogSourceDoc,
}

/// Opens the named databases of `home` (all of them when `names` is
/// `None`) as a federation.
pub fn open_federation(
    home: &Path,
    names: Option<&[String]>,
    source: CatalogSource,
) -> Result<Federation> {
    let names = match names {
        Some(n) => n.to_vec(),
        None => list_databases(home)?,
    };
    let members = names
        .iter()
        .map(|n| {
            let (schema, store) = load_database(home, n)?;
            Member::new(schema, store)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Federation::new(members)?.with_catalog_source(source))
}

pub fn load_federation_config(path: &Path, default_home: &Path) -> Result<Federation> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let cfg: FederationConfig = serde_json::from_str(&text).map_err(|e| Error::Data {
        file: path.display().to_string(),
        line: e.line() as u64,
        message: e.to_string(),
    })?;
    let home = match &cfg.home {
        Some(h) if h.is_relative() => path.parent().unwrap_or(Path::new(".")).join(h),
        Some(h) => h.clone(),
        None => default_home.to_path_buf(),
    };
    let source = match cfg.catalog_source {
        CatalogSourceDoc::Derived => CatalogSource::Derived,
        CatalogSourceDoc::Catalog => CatalogSource::Catalog,
    };
    open_federation(&home, cfg.databases.as_deref(), source)
}
