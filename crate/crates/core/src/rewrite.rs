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

//! Rewriting user terms into terms over the vector relation.
//!
//! Each base relation is replaced by an algebraic MATTER: the relation's
//! tuple indices, joined with one selection of the store per column, with
//! absent cells filled by `Null`. Operators above the bases are copied.
//! For select-project-join-union terms the result is then vectorized again
//! in algebra (one quadruple per non-null output cell, keyed by the row
//! digest) and read back with VIEW under the term's column provenance.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::header::{join_plan, project_indices, rename_header};
use crate::algebra::update::is_update_temp;
use crate::algebra::{
    align_union, desugar_update, eval_term, times_header, AlgebraTerm, Condition, Expr,
    UpdateStatement,
};
use crate::error::{Error, Result};
use crate::relation::{ColumnSpec, Instance, Relation, Row, Schema, RESERVED_PREFIX};
use crate::value::Value;
use crate::vector::{check_tuple, matter, parse_instance, view, VectorRelation, ViewType};

/// Relation and attribute names of the marker quadruple that keeps rows
/// whose cells are all `Null` visible to VIEW.
pub const ROW_MARKER: &str = "#row";

type Prov = (String, String);

/// Header of `term` with the `(relation, column)` each output column is
/// drawn from. An incompatible union types as the zero-column bottom.
fn typed(term: &AlgebraTerm, schema: &Schema) -> Result<Vec<(ColumnSpec, Prov)>> {
    match term {
        AlgebraTerm::Base(r) => {
            let sig = schema.require(r)?;
            Ok(sig
                .columns
                .iter()
                .map(|c| (c.clone(), (r.clone(), c.column_name.clone())))
                .collect())
        }
        AlgebraTerm::Rename { input, from, to } => {
            let inner = typed(input, schema)?;
            let cols: Vec<ColumnSpec> = inner.iter().map(|(c, _)| c.clone()).collect();
            let header = rename_header(&cols, from, to)?;
            Ok(header
                .into_iter()
                .zip(inner.into_iter().map(|(_, p)| p))
                .collect())
        }
        AlgebraTerm::Times(l, r) => {
            let (l, r) = (typed(l, schema)?, typed(r, schema)?);
            let header = times_header(&columns(&l), &columns(&r));
            let provs = l.into_iter().chain(r).map(|(_, p)| p);
            Ok(header.into_iter().zip(provs).collect())
        }
        AlgebraTerm::Project {
            input,
            columns: names,
        } => {
            let inner = typed(input, schema)?;
            match project_indices(&columns(&inner), names)? {
                None => Ok(inner),
                Some(idx) => Ok(idx.into_iter().map(|i| inner[i].clone()).collect()),
            }
        }
        AlgebraTerm::Select { input, .. } => typed(input, schema),
        AlgebraTerm::Union(l, r) => {
            let (l, r) = (typed(l, schema)?, typed(r, schema)?);
            match align_union(&columns(&l), &columns(&r)) {
                Some(_) => Ok(l),
                None => Ok(Vec::new()),
            }
        }
        AlgebraTerm::NaturalJoin { left, right, pairs } => {
            let (l, r) = (typed(left, schema)?, typed(right, schema)?);
            let plan = join_plan(&columns(&l), &columns(&r), pairs)?;
            let provs = l
                .into_iter()
                .map(|(_, p)| p)
                .chain(plan.kept_right.iter().map(|&j| r[j].1.clone()));
            Ok(plan.header.into_iter().zip(provs).collect())
        }
        AlgebraTerm::Minus(..) => Err(Error::NotSpju("MINUS".into())),
        AlgebraTerm::Extend { .. } => Err(Error::NotSpju("EXTEND".into())),
        AlgebraTerm::Empty => Err(Error::NotSpju("EMPTY".into())),
        AlgebraTerm::SingleTuple(_) => Err(Error::NotSpju("TUPLE".into())),
    }
}

fn columns(typed: &[(ColumnSpec, Prov)]) -> Vec<ColumnSpec> {
    typed.iter().map(|(c, _)| c.clone()).collect()
}

/// Column provenance of an SPJU term.
pub fn type_of(term: &AlgebraTerm, schema: &Schema) -> Result<ViewType> {
    Ok(ViewType(
        typed_spju(term, schema)?
            .into_iter()
            .map(|(_, p)| p)
            .collect(),
    ))
}

fn typed_spju(term: &AlgebraTerm, schema: &Schema) -> Result<Vec<(ColumnSpec, Prov)>> {
    let t = typed(term, schema)?;
    let mut seen = BTreeSet::new();
    for (_, (r, c)) in &t {
        if !seen.insert((r, c)) {
            return Err(Error::AmbiguousProvenance {
                relation: r.clone(),
                column: c.clone(),
            });
        }
    }
    Ok(t)
}

/// Header `term` evaluates to over `schema`, computed on empty relations.
pub fn static_header(term: &AlgebraTerm, schema: &Schema) -> Result<Vec<ColumnSpec>> {
    let empty: Instance = schema
        .relations()
        .iter()
        .map(|s| (s.name.clone(), Relation::empty(s.columns.clone())))
        .collect();
    Ok(eval_term(term, &empty)?.header().to_vec())
}

fn check_user_term(term: &AlgebraTerm, schema: &Schema) -> Result<()> {
    let mut err = None;
    term.walk(&mut |t| {
        if err.is_some() {
            return;
        }
        // The rewriter's own temporaries share the prefix; the columns of a
        // desugared UPDATE never reach them.
        let reserved = |n: &str| n.starts_with(RESERVED_PREFIX) && !is_update_temp(n);
        match t {
            AlgebraTerm::Base(n) if *n == schema.name => {
                err = Some(Error::InvalidArgument(format!(
                    "user terms may not reference the vector relation `{n}`"
                )))
            }
            AlgebraTerm::Base(n) => {
                if let Err(e) = schema.require(n) {
                    err = Some(e);
                }
            }
            AlgebraTerm::Rename { to, .. } if reserved(to) => {
                err = Some(Error::InvalidArgument(format!(
                    "reserved column name `{to}`"
                )))
            }
            AlgebraTerm::Extend { column, .. } if reserved(&column.column_name) => {
                err = Some(Error::InvalidArgument(format!(
                    "reserved column name `{}`",
                    column.column_name
                )))
            }
            _ => {}
        }
    });
    err.map_or(Ok(()), Err)
}

fn store(schema: &Schema) -> AlgebraTerm {
    AlgebraTerm::base(&schema.name)
}

/// The algebraic MATTER of relation `r`: its columns with the catalog
/// attributes, one row per t-index stored under `r`.
pub fn matter_term(schema: &Schema, r: &str) -> Result<AlgebraTerm> {
    let sig = schema.require(r)?;
    let in_r = Condition::col_eq("r-name", Value::text(r));
    let ids = store(schema)
        .select(in_r.clone())
        .project(&["t-index"])
        .rename("t-index", "#tid");
    let mut acc = ids.clone();
    for (i, c) in sig.columns.iter().enumerate() {
        let (t, v) = (format!("#t{i}"), format!("#v{i}"));
        let cell = store(schema)
            .select(
                in_r.clone()
                    .and(Condition::col_eq("a-name", Value::text(&c.column_name))),
            )
            .project(&["t-index", "value"])
            .rename("t-index", &t)
            .rename("value", &v);
        let present = ids.clone().join(cell, &[("#tid", t.as_str())]);
        let absent = ids
            .clone()
            .minus(present.clone().project(&["#tid"]))
            .extend(ColumnSpec::new(&v, "value"), Expr::Const(Value::Null));
        acc = acc.join(present.union(absent), &[("#tid", "#tid")]);
    }
    for (i, c) in sig.columns.iter().enumerate() {
        acc = acc.extend(c.clone(), Expr::Column(format!("#v{i}")));
    }
    let names: Vec<&str> = sig.columns.iter().map(|c| c.column_name.as_str()).collect();
    Ok(acc.project(&names))
}

/// Replaces every base relation by its algebraic MATTER, including inside
/// `IN` sources; the result reads only the vector relation.
pub fn rewrite_materialized(term: &AlgebraTerm, schema: &Schema) -> Result<AlgebraTerm> {
    check_user_term(term, schema)?;
    let mut cache = BTreeMap::new();
    encode(term, schema, &mut cache)
}

fn encode(
    term: &AlgebraTerm,
    schema: &Schema,
    cache: &mut BTreeMap<String, AlgebraTerm>,
) -> Result<AlgebraTerm> {
    let mut go = |t: &AlgebraTerm| encode(t, schema, cache).map(Box::new);
    Ok(match term {
        AlgebraTerm::Base(r) => {
            if let Some(t) = cache.get(r) {
                return Ok(t.clone());
            }
            let t = matter_term(schema, r)?;
            cache.insert(r.clone(), t.clone());
            t
        }
        AlgebraTerm::Empty | AlgebraTerm::SingleTuple(_) => term.clone(),
        AlgebraTerm::Rename { input, from, to } => AlgebraTerm::Rename {
            input: go(input)?,
            from: from.clone(),
            to: to.clone(),
        },
        AlgebraTerm::Times(l, r) => AlgebraTerm::Times(go(l)?, go(r)?),
        AlgebraTerm::Union(l, r) => AlgebraTerm::Union(go(l)?, go(r)?),
        AlgebraTerm::Minus(l, r) => AlgebraTerm::Minus(go(l)?, go(r)?),
        AlgebraTerm::Project { input, columns } => AlgebraTerm::Project {
            input: go(input)?,
            columns: columns.clone(),
        },
        AlgebraTerm::Extend {
            input,
            column,
            expr,
        } => AlgebraTerm::Extend {
            input: go(input)?,
            column: column.clone(),
            expr: expr.clone(),
        },
        AlgebraTerm::NaturalJoin { left, right, pairs } => AlgebraTerm::NaturalJoin {
            left: go(left)?,
            right: go(right)?,
            pairs: pairs.clone(),
        },
        AlgebraTerm::Select { input, condition } => {
            let input = go(input)?;
            AlgebraTerm::Select {
                input,
                condition: encode_condition(condition, schema, cache)?,
            }
        }
    })
}

fn encode_condition(
    c: &Condition,
    schema: &Schema,
    cache: &mut BTreeMap<String, AlgebraTerm>,
) -> Result<Condition> {
    Ok(match c {
        Condition::And(a, b) => Condition::And(
            Box::new(encode_condition(a, schema, cache)?),
            Box::new(encode_condition(b, schema, cache)?),
        ),
        Condition::Or(a, b) => Condition::Or(
            Box::new(encode_condition(a, schema, cache)?),
            Box::new(encode_condition(b, schema, cache)?),
        ),
        Condition::Not(a) => Condition::Not(Box::new(encode_condition(a, schema, cache)?)),
        Condition::In { columns, source } => Condition::In {
            columns: columns.clone(),
            source: Box::new(encode(source, schema, cache)?),
        },
        other => other.clone(),
    })
}

/// Vectorizes the rows of `input` (header `header`, provenance `vt`) in
/// algebra: a marker quadruple per row plus one quadruple per non-null
/// cell, all under the digest of the row.
fn vectorize(input: AlgebraTerm, header: &[ColumnSpec], vt: &ViewType) -> AlgebraTerm {
    let args = header
        .iter()
        .map(|c| Expr::Column(c.column_name.clone()))
        .collect();
    let keyed = input.extend(ColumnSpec::new("#id", "t-index"), Expr::Hash(args));
    let quad = |t: AlgebraTerm, r: &str, a: &str, value: Expr| {
        t.extend(ColumnSpec::new("#r", "r-name"), Expr::Const(Value::text(r)))
            .extend(ColumnSpec::new("#a", "a-name"), Expr::Const(Value::text(a)))
            .extend(ColumnSpec::new("#val", "value"), value)
            .project(&["#r", "#id", "#a", "#val"])
    };
    let mut out = quad(
        keyed.clone(),
        ROW_MARKER,
        ROW_MARKER,
        Expr::Const(Value::text("")),
    );
    for (c, (r, a)) in header.iter().zip(&vt.0) {
        let name = &c.column_name;
        let present = keyed.clone().select(Condition::cols_eq(name, name));
        out = out.union(quad(present, r, a, Expr::Column(name.clone())));
    }
    out
}

/// The full rewriting: for SPJU terms a term producing the vector form of
/// the answer (to be read with VIEW under [`type_of`]); for other terms,
/// or SPJU terms whose provenance is ambiguous, the materializing rewrite.
pub fn rewrite(term: &AlgebraTerm, schema: &Schema) -> Result<AlgebraTerm> {
    let inner = rewrite_materialized(term, schema)?;
    match typed_spju(term, schema) {
        Ok(t) => {
            let header = columns(&t);
            let vt = ViewType(t.into_iter().map(|(_, p)| p).collect());
            Ok(vectorize(inner, &header, &vt))
        }
        Err(Error::NotSpju(_) | Error::AmbiguousProvenance { .. }) => Ok(inner),
        Err(e) => Err(e),
    }
}

/// Answers a user term from the vector store alone.
pub fn answer(term: &AlgebraTerm, v: &VectorRelation, schema: &Schema) -> Result<Relation> {
    let bound = Instance::from([(schema.name.clone(), v.to_relation())]);
    let rewritten = rewrite(term, schema)?;
    let out = eval_term(&rewritten, &bound)?;
    match typed_spju(term, schema) {
        Ok(t) => {
            let header = columns(&t);
            let vt = ViewType(t.into_iter().map(|(_, p)| p).collect());
            // A statically bottom term still yields the marker of its one
            // empty row, so VIEW returns {<>}.
            view(&vt, &out)?.relabel(header)
        }
        Err(Error::NotSpju(_) | Error::AmbiguousProvenance { .. }) => Ok(out),
        Err(e) => Err(e),
    }
}

/// Executes an update statement against a store: the desugared term is
/// evaluated over the materialized relations, checked row by row, and the
/// store is rebuilt with the new content of the target relation.
pub fn apply_update(
    stmt: &UpdateStatement,
    v: &VectorRelation,
    schema: &Schema,
) -> Result<VectorRelation> {
    let sig = schema.require(stmt.relation())?;
    let term = desugar_update(stmt, schema)?;
    let mut instance: Instance = schema
        .relations()
        .iter()
        .map(|s| (s.name.clone(), matter(s, v)))
        .collect();
    let new = eval_term(&term, &instance)?;
    if new.is_bottom() {
        return Err(Error::InvalidArgument(format!(
            "update of `{}` produced an incompatible relation",
            sig.name
        )));
    }
    let names: Vec<String> = sig.columns.iter().map(|c| c.column_name.clone()).collect();
    let idx = project_indices(new.header(), &names)?
        .ok_or_else(|| Error::UnknownColumn(format!("{} (update result)", sig.name)))?;
    let mut keys: BTreeMap<Vec<&Value>, &Row> = BTreeMap::new();
    let rows: Vec<Row> = new
        .rows()
        .iter()
        .map(|r| idx.iter().map(|&i| r[i].clone()).collect())
        .collect();
    for row in &rows {
        check_tuple(sig, row)?;
        if !sig.primary_key.is_empty() {
            let key: Vec<&Value> = sig.primary_key.iter().map(|&i| &row[i]).collect();
            if keys.insert(key, row).is_some() {
                return Err(Error::PrimaryKey {
                    relation: sig.name.clone(),
                    detail: "update leaves two tuples with one key".into(),
                });
            }
        }
    }
    instance.insert(
        sig.name.clone(),
        Relation::from_rows(sig.columns.clone(), rows)?,
    );
    parse_instance(schema, &instance)
}
