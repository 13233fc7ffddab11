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

//! A federation of vector stores and its catalog relations.
//!
//! `call_4` lists every stored cell with its database name; `call_3`,
//! `call_2` and `call_1` project it down to attributes, relations and
//! databases. The ERA operators δ, ρ, α and γ are built as ordinary
//! algebra terms over these relations and evaluated by the algebra engine.

mod oracle;
mod pattern;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::algebra::{eval_term, times_header, AlgebraTerm, Condition, Expr, RelationSource};
use crate::error::{Error, Result};
use crate::relation::{ColumnSpec, Instance, Relation, RelationSignature, Schema};
use crate::value::Value;
use crate::vector::{matter, vector_header, VectorRelation};

pub use oracle::gamma_oracle;
pub use pattern::{Pattern, PatternItem};

pub const DB_NAME: &str = "db-name";
pub const CALL4_COLUMNS: [&str; 5] = [DB_NAME, "r-name", "t-index", "a-name", "value"];

/// Base names the catalog relations are bound to inside federation terms.
pub const CALL: [&str; 4] = ["call_1", "call_2", "call_3", "call_4"];

/// Base name a query parameter relation is bound to.
pub const PARAM: &str = "#S";

/// Where `call_1..call_3` come from: projections of `call_4` (only relations
/// and attributes that hold data) or the member catalogs (everything
/// declared, including empty relations).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CatalogSource {
    #[default]
    Derived,
    Catalog,
}

#[derive(Clone, Debug)]
pub struct Member {
    pub schema: Schema,
    pub store: VectorRelation,
    relation: OnceLock<Relation>,
}

impl Member {
    pub fn new(schema: Schema, store: VectorRelation) -> Result<Self> {
        if store.db_name != schema.name {
            return Err(Error::InvalidArgument(format!(
                "store `{}` paired with catalog of `{}`",
                store.db_name, schema.name
            )));
        }
        Ok(Member {
            schema,
            store,
            relation: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.schema.name
    }

    fn as_relation(&self) -> &Relation {
        self.relation.get_or_init(|| self.store.to_relation())
    }
}

/// An immutable snapshot of member databases. Catalog relations are built
/// on first use and cached.
#[derive(Debug)]
pub struct Federation {
    members: Vec<Member>,
    source: CatalogSource,
    calls: [OnceLock<Relation>; 4],
}

impl Clone for Federation {
    fn clone(&self) -> Self {
        Federation {
            members: self.members.clone(),
            source: self.source,
            calls: Default::default(),
        }
    }
}

impl Federation {
    pub fn new(members: Vec<Member>) -> Result<Self> {
        let mut names = BTreeSet::new();
        for m in &members {
            let n = m.name();
            if CALL.contains(&n) || n == PARAM {
                return Err(Error::InvalidArgument(format!(
                    "reserved database name `{n}`"
                )));
            }
            if !names.insert(n) {
                return Err(Error::InvalidArgument(format!(
                    "database `{n}` listed twice"
                )));
            }
        }
        Ok(Federation {
            members,
            source: CatalogSource::Derived,
            calls: Default::default(),
        })
    }

    pub fn with_catalog_source(mut self, source: CatalogSource) -> Self {
        self.source = source;
        self.calls = Default::default();
        self
    }

    pub fn catalog_source(&self) -> CatalogSource {
        self.source
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn member(&self, db: &str) -> Result<&Member> {
        self.members
            .iter()
            .find(|m| m.name() == db)
            .ok_or_else(|| Error::UnknownDatabase(db.to_string()))
    }

    /// The term defining `call_4`: each store extended by its database name.
    pub fn call4_term(&self) -> AlgebraTerm {
        let tagged = |name: &str, base: AlgebraTerm| {
            base.extend(ColumnSpec::named(DB_NAME), Expr::Const(Value::text(name)))
                .project(&CALL4_COLUMNS)
        };
        let mut parts = self
            .members
            .iter()
            .map(|m| tagged(m.name(), AlgebraTerm::base(m.name())));
        match parts.next() {
            None => tagged("", AlgebraTerm::base(EMPTY_STORE)),
            Some(first) => parts.fold(first, AlgebraTerm::union),
        }
    }

    /// The term defining `call_level` from the level above it.
    pub fn call_term(level: usize) -> AlgebraTerm {
        let upper = AlgebraTerm::base(CALL[level]);
        match level {
            1 => upper.project(&[DB_NAME]),
            2 => upper.project(&[DB_NAME, "r-name"]),
            3 => upper.project(&[DB_NAME, "r-name", "a-name"]),
            _ => panic!("call level {level} has no projection term"),
        }
    }

    pub fn call4(&self) -> &Relation {
        self.calls[3].get_or_init(|| {
            eval_term(&self.call4_term(), &Stores(self)).expect("call_4 term is well formed")
        })
    }

    /// `call_1`, `call_2` or `call_3` (or `call_4` for level 4).
    pub fn call_level(&self, level: usize) -> Result<&Relation> {
        match level {
            4 => Ok(self.call4()),
            1..=3 => Ok(self.calls[level - 1].get_or_init(|| match self.source {
                CatalogSource::Derived => {
                    let env = Env::new(self, None);
                    eval_term(&Federation::call_term(level), &env)
                        .expect("call term is well formed")
                }
                CatalogSource::Catalog => self.catalog_call(level),
            })),
            _ => Err(Error::InvalidArgument(format!(
                "no catalog relation at level {level}"
            ))),
        }
    }

    fn catalog_call(&self, level: usize) -> Relation {
        let header: Vec<ColumnSpec> = CALL4_COLUMNS
            .iter()
            .filter(|c| match level {
                1 => **c == DB_NAME,
                2 => [DB_NAME, "r-name"].contains(c),
                _ => [DB_NAME, "r-name", "a-name"].contains(c),
            })
            .map(|c| ColumnSpec::named(*c))
            .collect();
        let mut rows = Vec::new();
        for m in &self.members {
            let db = Value::text(m.name());
            if level == 1 {
                rows.push(vec![db.clone()]);
            }
            for sig in m.schema.relations() {
                let r = Value::text(&sig.name);
                if level == 2 {
                    rows.push(vec![db.clone(), r.clone()]);
                }
                if level == 3 {
                    for c in &sig.columns {
                        rows.push(vec![db.clone(), r.clone(), Value::text(&c.column_name)]);
                    }
                }
            }
        }
        Relation::from_rows(header, rows).expect("catalog rows match header")
    }

    /// The four sort relations: relation names, tuple indices, attribute
    /// names and values occurring in `call_4`.
    pub fn sorts(&self) -> [Relation; 4] {
        ["r-name", "t-index", "a-name", "value"].map(|c| {
            self.eval(&AlgebraTerm::base(CALL[3]).project(&[c]), None)
                .expect("sort projection is well formed")
        })
    }

    /// Evaluates a term over the member stores, the catalog relations and
    /// an optional parameter relation bound to [`PARAM`].
    pub fn eval(&self, term: &AlgebraTerm, param: Option<&Relation>) -> Result<Relation> {
        eval_term(term, &Env::new(self, param))
    }

    // -- ERA operators -----------------------------------------------------

    pub fn delta_term() -> AlgebraTerm {
        AlgebraTerm::base(CALL[0])
    }

    pub fn rho_term() -> AlgebraTerm {
        AlgebraTerm::base(CALL[1]).select(Condition::is_in(&[DB_NAME], AlgebraTerm::base(PARAM)))
    }

    pub fn alpha_term() -> AlgebraTerm {
        AlgebraTerm::base(CALL[2]).select(Condition::is_in(
            &[DB_NAME, "r-name"],
            AlgebraTerm::base(PARAM),
        ))
    }

    /// The γ term for `pattern`, with the parameter relation as [`PARAM`].
    pub fn gamma_term(pattern: &Pattern) -> AlgebraTerm {
        let in_s = |a: &str, b: &str| Condition::is_in(&[a, b], AlgebraTerm::base(PARAM));
        let item_condition = |item: &PatternItem, attr_col: &str, value_col: &str| {
            let mut c = Condition::True;
            if let Some(a) = &item.attr {
                c = c.and(Condition::col_eq(attr_col, Value::text(a)));
            }
            if let Some(v) = &item.value {
                c = c.and(Condition::col_eq(value_col, v.clone()));
            }
            c
        };
        let k = pattern.len();
        match k {
            0 => AlgebraTerm::base(CALL[1]).select(in_s(DB_NAME, "r-name")),
            1 => AlgebraTerm::base(CALL[3])
                .select(item_condition(&pattern.0[0], "a-name", "value"))
                .project(&[DB_NAME, "r-name", "a-name", "value"])
                .select(in_s(DB_NAME, "r-name")),
            _ => {
                let single: Vec<ColumnSpec> = CALL4_COLUMNS
                    .iter()
                    .map(|c| ColumnSpec::named(*c))
                    .collect();
                let mut header = single.clone();
                let mut t = AlgebraTerm::base(CALL[3]);
                for _ in 1..k {
                    header = times_header(&header, &single);
                    t = t.times(AlgebraTerm::base(CALL[3]));
                }
                // Name of column i (1-based) of the k-fold product header.
                let nr = |i: usize| header[i - 1].column_name.clone();
                let mut cond = Condition::True;
                for pos in 1..=3 {
                    for m in 1..k {
                        cond = cond.and(Condition::cols_eq(nr(pos), nr(5 * m + pos)));
                    }
                }
                for (m, item) in (1..=k).zip(&pattern.0) {
                    cond = cond.and(item_condition(item, &nr(5 * m - 1), &nr(5 * m)));
                }
                let mut keep = vec![nr(1), nr(2)];
                for m in 1..=k {
                    keep.push(nr(5 * m - 1));
                    keep.push(nr(5 * m));
                }
                t.select(cond).project(&keep).select(in_s(&nr(1), &nr(2)))
            }
        }
    }

    pub fn era_delta(&self) -> Result<Relation> {
        self.eval(&Federation::delta_term(), None)
    }

    pub fn era_rho(&self, s: &Relation) -> Result<Relation> {
        check_arity(s, 1)?;
        self.eval(&Federation::rho_term(), Some(s))
    }

    pub fn era_alpha(&self, s: &Relation) -> Result<Relation> {
        check_arity(s, 2)?;
        self.eval(&Federation::alpha_term(), Some(s))
    }

    pub fn era_gamma(&self, pattern: &Pattern, s: &Relation) -> Result<Relation> {
        check_arity(s, 2)?;
        self.eval(&Federation::gamma_term(pattern), Some(s))
    }

    /// `(db-name, r-name)` of every relation holding the value `v`.
    pub fn find_token_term(v: &Value) -> AlgebraTerm {
        AlgebraTerm::base(CALL[3])
            .select(Condition::col_eq("value", v.clone()))
            .project(&[DB_NAME, "r-name"])
    }

    pub fn find_token(&self, v: &Value) -> Result<Relation> {
        if v.is_null() {
            return Err(Error::InvalidArgument("cannot search for NULL".into()));
        }
        self.eval(&Federation::find_token_term(v), None)
    }

    /// Attribute names of `db.r` as listed by `call_3`, in catalog column
    /// order where the catalog knows them.
    pub fn attributes_of(&self, db: &str, r: &str) -> Result<Vec<String>> {
        let member = self.member(db)?;
        let term = AlgebraTerm::base(CALL[2])
            .select(
                Condition::col_eq(DB_NAME, Value::text(db))
                    .and(Condition::col_eq("r-name", Value::text(r))),
            )
            .project(&["a-name"]);
        let found: BTreeSet<String> = self
            .eval(&term, None)?
            .rows()
            .iter()
            .filter_map(|row| row[0].as_text().map(str::to_string))
            .collect();
        if found.is_empty() {
            return Err(Error::UnknownRelation(format!("{db}.{r}")));
        }
        let mut ordered: Vec<String> = member
            .schema
            .relation(r)
            .map(|sig| {
                sig.columns
                    .iter()
                    .map(|c| c.column_name.clone())
                    .filter(|c| found.contains(c))
                    .collect()
            })
            .unwrap_or_default();
        ordered.extend(
            found
                .into_iter()
                .filter(|a| !ordered.contains(a))
                .collect::<Vec<_>>(),
        );
        Ok(ordered)
    }

    /// Natural join of `db.r` and `db.s` on every attribute name they share,
    /// both schemas discovered from `call_3` and both relations
    /// materialized from the store.
    pub fn natural_join_unknown(&self, db: &str, r: &str, s: &str) -> Result<Relation> {
        let member = self.member(db)?;
        let materialize = |name: &str| -> Result<(Vec<String>, Relation)> {
            let attrs = self.attributes_of(db, name)?;
            let columns = attrs
                .iter()
                .map(|a| {
                    member
                        .schema
                        .relation(name)
                        .and_then(|sig| sig.columns.iter().find(|c| &c.column_name == a).cloned())
                        .unwrap_or_else(|| ColumnSpec::named(a.as_str()))
                })
                .collect();
            let sig = RelationSignature::new(name, columns)?;
            Ok((attrs, matter(&sig, &member.store)))
        };
        let (ra, rr) = materialize(r)?;
        let (sa, sr) = materialize(s)?;
        let pairs: Vec<(String, String)> = ra
            .iter()
            .filter(|a| sa.contains(a))
            .map(|a| (a.clone(), a.clone()))
            .collect();
        let inst = Instance::from([("#r".to_string(), rr), ("#s".to_string(), sr)]);
        let term = AlgebraTerm::NaturalJoin {
            left: Box::new(AlgebraTerm::base("#r")),
            right: Box::new(AlgebraTerm::base("#s")),
            pairs,
        };
        eval_term(&term, &inst)
    }
}

fn check_arity(s: &Relation, expected: usize) -> Result<()> {
    if s.arity() != expected {
        return Err(Error::ArityMismatch {
            expected,
            found: s.arity(),
        });
    }
    Ok(())
}

const EMPTY_STORE: &str = "#empty";

fn empty_store() -> &'static Relation {
    static EMPTY: OnceLock<Relation> = OnceLock::new();
    EMPTY.get_or_init(|| Relation::empty(vector_header()))
}

/// Member stores only (used to build `call_4`).
struct Stores<'a>(&'a Federation);

impl RelationSource for Stores<'_> {
    fn lookup(&self, name: &str) -> Option<&Relation> {
        store_lookup(self.0, name)
    }
}

fn store_lookup<'a>(fed: &'a Federation, name: &str) -> Option<&'a Relation> {
    if name == EMPTY_STORE {
        return Some(empty_store());
    }
    fed.members
        .iter()
        .find(|m| m.name() == name)
        .map(Member::as_relation)
}

/// Stores, cached catalog relations and the optional parameter.
struct Env<'a> {
    fed: &'a Federation,
    param: Option<&'a Relation>,
}

impl<'a> Env<'a> {
    fn new(fed: &'a Federation, param: Option<&'a Relation>) -> Self {
        Env { fed, param }
    }
}

impl RelationSource for Env<'_> {
    fn lookup(&self, name: &str) -> Option<&Relation> {
        if name == PARAM {
            return self.param;
        }
        if let Some(i) = CALL.iter().position(|c| *c == name) {
            if i == 3 {
                return Some(self.fed.call4());
            }
            return self.fed.call_level(i + 1).ok();
        }
        store_lookup(self.fed, name)
    }
}

#[cfg(test)]
mod tests;
