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

//! SchemaLog structures and direct satisfaction.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::{SlAtom, SlFormula, SlTerm};
use super::encode::apply_functor;
use crate::error::{Error, Result};
use crate::federation::Federation;
use crate::value::Value;

/// `F(db)(rel)(attr)(tid) = value`.
pub type Cells = BTreeMap<Value, BTreeMap<Value, BTreeMap<Value, BTreeMap<Value, Value>>>>;

/// The structure induced by a federation: `F` is read off the vector
/// stores, symbols denote themselves and `Hash` is the tuple digest.
/// `F(db)` is defined for every member; `F(db)(rel)` and `F(db)(rel)(attr)`
/// are defined when at least one stored cell lies below them.
#[derive(Clone, Debug)]
pub struct Structure {
    f: Cells,
    domain: Vec<Value>,
}

impl Structure {
    pub fn of_federation(fed: &Federation) -> Self {
        let mut f: Cells = BTreeMap::new();
        let mut domain = BTreeSet::new();
        for m in fed.members() {
            let db = Value::text(m.name());
            domain.insert(db.clone());
            let rels = f.entry(db).or_default();
            for (r, id, a, v) in m.store.cells() {
                let (r, id, a) = (Value::text(r), Value::text(id.as_str()), Value::text(a));
                domain.extend([r.clone(), id.clone(), a.clone(), v.clone()]);
                rels.entry(r)
                    .or_default()
                    .entry(a)
                    .or_default()
                    .insert(id, v.clone());
            }
        }
        Structure {
            f,
            domain: domain.into_iter().collect(),
        }
    }

    pub fn function(&self) -> &Cells {
        &self.f
    }

    /// The active domain, sorted.
    pub fn domain(&self) -> &[Value] {
        &self.domain
    }

    fn term(&self, t: &SlTerm, g: &[(String, Value)]) -> Result<Value> {
        match t {
            SlTerm::Sym(v) => Ok(v.clone()),
            SlTerm::Var(x) => g
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::InvalidArgument(format!("unbound variable `{x}`"))),
            SlTerm::App(f, args) => {
                let vals = args
                    .iter()
                    .map(|a| self.term(a, g))
                    .collect::<Result<Vec<_>>>()?;
                apply_functor(f, vals)
            }
        }
    }

    fn atom(&self, a: &SlAtom, g: &[(String, Value)]) -> Result<bool> {
        let db = self.term(a.db(), g)?;
        let Some(rels) = self.f.get(&db) else {
            return Ok(false);
        };
        Ok(match a {
            SlAtom::Db(_) => true,
            SlAtom::Rel { rel, .. } => rels.contains_key(&self.term(rel, g)?),
            SlAtom::Attr { rel, attr, .. } => {
                let (r, at) = (self.term(rel, g)?, self.term(attr, g)?);
                rels.get(&r).is_some_and(|attrs| attrs.contains_key(&at))
            }
            SlAtom::Quad {
                rel,
                tid,
                attr,
                val,
                ..
            } => {
                let (r, t, at, v) = (
                    self.term(rel, g)?,
                    self.term(tid, g)?,
                    self.term(attr, g)?,
                    self.term(val, g)?,
                );
                rels.get(&r)
                    .and_then(|attrs| attrs.get(&at))
                    .and_then(|cells| cells.get(&t))
                    .is_some_and(|stored| *stored == v)
            }
        })
    }

    /// `M ⊨_g φ`. Quantifiers range over the active domain; `ψ => φ` is
    /// material implication and `=> φ` is `φ`.
    pub fn satisfies(&self, f: &SlFormula, g: &BTreeMap<String, Value>) -> Result<bool> {
        let mut g: Vec<(String, Value)> = g.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        self.sat(f, &mut g)
    }

    fn sat(&self, f: &SlFormula, g: &mut Vec<(String, Value)>) -> Result<bool> {
        match f {
            SlFormula::Atom(a) => self.atom(a, g),
            SlFormula::Cmp(l, op, r) => Ok(op.holds(&self.term(l, g)?, &self.term(r, g)?)),
            SlFormula::Not(a) => Ok(!self.sat(a, g)?),
            SlFormula::And(a, b) => Ok(self.sat(a, g)? && self.sat(b, g)?),
            SlFormula::Or(a, b) => Ok(self.sat(a, g)? || self.sat(b, g)?),
            SlFormula::Implies(None, c) => self.sat(c, g),
            SlFormula::Implies(Some(p), c) => Ok(!self.sat(p, g)? || self.sat(c, g)?),
            SlFormula::Exists(x, a) | SlFormula::Forall(x, a) => {
                let want = matches!(f, SlFormula::Exists(..));
                for d in &self.domain {
                    g.push((x.clone(), d.clone()));
                    let r = self.sat(a, g);
                    g.pop();
                    if r? == want {
                        return Ok(want);
                    }
                }
                Ok(!want)
            }
        }
    }
}

/// Truth of `f` in the structure induced by `fed` under assignment `g`.
pub fn structure_eval(
    f: &SlFormula,
    fed: &Federation,
    g: &BTreeMap<String, Value>,
) -> Result<bool> {
    Structure::of_federation(fed).satisfies(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hash::hash_tuple;
    use crate::sample::university_federation;
    use crate::schemalog::encode::{encode, Interpretation};
    use crate::schemalog::parse_formula;

    fn holds(text: &str) -> bool {
        let fed = university_federation().unwrap();
        let f = parse_formula(text).unwrap();
        let m = Structure::of_federation(&fed);
        let direct = m.satisfies(&f, &BTreeMap::new()).unwrap();
        let encoded = Interpretation::of_structure(&m)
            .satisfies(&encode(&f).unwrap(), &BTreeMap::new())
            .unwrap();
        assert_eq!(direct, encoded, "{text}");
        direct
    }

    #[test]
    fn cells_of_univ_a() {
        let id = hash_tuple(&[
            Value::text("Secretary"),
            Value::text("CS"),
            Value::text("35,000"),
        ]);
        assert!(holds(&format!(
            "univ_A::pay-info['{id}': category -> 'Secretary']"
        )));
        assert!(!holds(&format!(
            "univ_A::pay-info['{id}': category -> 'Prof']"
        )));
        assert!(holds(
            "exists T: univ_A::pay-info[T: category -> 'Secretary']"
        ));
    }

    #[test]
    fn schema_atoms_and_negation() {
        assert!(holds(
            "univ_A and univ_A::pay-info and univ_A::pay-info[avg-sal]"
        ));
        assert!(!holds("univ_A::pay-info[nope]"));
        assert!(holds("not univ_A::nope"));
        assert!(!holds("nope"));
        assert!(holds("forall D: (D => exists R: D::R)"));
        assert!(holds("exists D, R: (D::R[category] and not D::R[dept])"));
        assert!(holds(
            "exists T, V: (univ_A::pay-info[T: category -> V] and Hash(V) <> T)"
        ));
    }
}
