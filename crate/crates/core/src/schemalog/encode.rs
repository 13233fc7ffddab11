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

//! Translation of SchemaLog formulas into first-order formulas over the
//! vector predicates, and a Tarskian evaluator for the result.
//!
//! Each member database `d` becomes a 4-ary predicate whose extension is
//! the set of quadruples `(r-name, t-index, a-name, value)` of its store;
//! the unary `call_1` holds exactly the database names.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::ast::{SlAtom, SlFormula, SlTerm, HASH_FUNCTOR};
use super::structure::Structure;
use crate::error::{Error, Result};
use crate::hash::hash_tuple;
use crate::value::{Comparison, Value};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FolTerm {
    Const(Value),
    Var(String),
    App(String, Vec<FolTerm>),
}

/// The predicate letter of an atom. A variable database term stays a
/// variable in predicate position; it is resolved per assignment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PredRef {
    Const(Value),
    Var(String),
    Call1,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Fol {
    Atom(PredRef, Vec<FolTerm>),
    Cmp(FolTerm, Comparison, FolTerm),
    Not(Box<Fol>),
    And(Box<Fol>, Box<Fol>),
    Or(Box<Fol>, Box<Fol>),
    Exists(Vec<String>, Box<Fol>),
    Forall(String, Box<Fol>),
}

fn encode_term(t: &SlTerm) -> FolTerm {
    match t {
        SlTerm::Sym(v) => FolTerm::Const(v.clone()),
        SlTerm::Var(x) => FolTerm::Var(x.clone()),
        SlTerm::App(f, args) => FolTerm::App(f.clone(), args.iter().map(encode_term).collect()),
    }
}

fn encode_pred(db: &SlTerm) -> Result<PredRef> {
    match db {
        SlTerm::Sym(v) => Ok(PredRef::Const(v.clone())),
        SlTerm::Var(x) => Ok(PredRef::Var(x.clone())),
        SlTerm::App(..) => Err(Error::Unsupported(format!(
            "functional term `{db}` in database position"
        ))),
    }
}

struct Encoder {
    fresh: usize,
}

impl Encoder {
    fn fresh(&mut self) -> String {
        self.fresh += 1;
        format!("#x{}", self.fresh)
    }

    fn atom(&mut self, a: &SlAtom) -> Result<Fol> {
        Ok(match a {
            SlAtom::Quad {
                db,
                rel,
                tid,
                attr,
                val,
            } => Fol::Atom(
                encode_pred(db)?,
                vec![
                    encode_term(rel),
                    encode_term(tid),
                    encode_term(attr),
                    encode_term(val),
                ],
            ),
            SlAtom::Attr { db, rel, attr } => {
                let (x2, x4) = (self.fresh(), self.fresh());
                let body = Fol::Atom(
                    encode_pred(db)?,
                    vec![
                        encode_term(rel),
                        FolTerm::Var(x2.clone()),
                        encode_term(attr),
                        FolTerm::Var(x4.clone()),
                    ],
                );
                Fol::Exists(vec![x2, x4], Box::new(body))
            }
            SlAtom::Rel { db, rel } => {
                let (x2, x3, x4) = (self.fresh(), self.fresh(), self.fresh());
                let body = Fol::Atom(
                    encode_pred(db)?,
                    vec![
                        encode_term(rel),
                        FolTerm::Var(x2.clone()),
                        FolTerm::Var(x3.clone()),
                        FolTerm::Var(x4.clone()),
                    ],
                );
                Fol::Exists(vec![x2, x3, x4], Box::new(body))
            }
            SlAtom::Db(db) => Fol::Atom(PredRef::Call1, vec![encode_term(db)]),
        })
    }

    fn formula(&mut self, f: &SlFormula) -> Result<Fol> {
        Ok(match f {
            SlFormula::Atom(a) => self.atom(a)?,
            SlFormula::Cmp(l, op, r) => Fol::Cmp(encode_term(l), *op, encode_term(r)),
            SlFormula::And(a, b) => {
                Fol::And(Box::new(self.formula(a)?), Box::new(self.formula(b)?))
            }
            SlFormula::Or(a, b) => Fol::Or(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            SlFormula::Not(a) => Fol::Not(Box::new(self.formula(a)?)),
            SlFormula::Implies(None, c) => self.formula(c)?,
            SlFormula::Implies(Some(p), c) => {
                // ¬e(ψ) ∨ (e(ψ) ∧ e(φ)), kept in this shape on purpose.
                let ep = self.formula(p)?;
                let ec = self.formula(c)?;
                Fol::Or(
                    Box::new(Fol::Not(Box::new(ep.clone()))),
                    Box::new(Fol::And(Box::new(ep), Box::new(ec))),
                )
            }
            SlFormula::Exists(x, a) => Fol::Exists(vec![x.clone()], Box::new(self.formula(a)?)),
            SlFormula::Forall(x, a) => Fol::Forall(x.clone(), Box::new(self.formula(a)?)),
        })
    }
}

/// Encodes a SchemaLog formula. Fresh variables are named `#x1`, `#x2`, ..
/// and cannot clash with user variables.
pub fn encode(f: &SlFormula) -> Result<Fol> {
    Encoder { fresh: 0 }.formula(f)
}

// ---------------------------------------------------------------------------
// Tarskian semantics.

/// The Tarski interpretation of the vector predicates and `call_1` induced
/// by a SchemaLog structure.
#[derive(Clone, Debug)]
pub struct Interpretation {
    predicates: BTreeMap<Value, BTreeSet<[Value; 4]>>,
    call1: BTreeSet<Value>,
    domain: Vec<Value>,
}

/// Variable bindings, innermost last.
type Assignment = Vec<(String, Value)>;

fn lookup<'a>(g: &'a Assignment, x: &str) -> Result<&'a Value> {
    g.iter()
        .rev()
        .find(|(y, _)| y == x)
        .map(|(_, v)| v)
        .ok_or_else(|| Error::InvalidArgument(format!("unbound variable `{x}`")))
}

/// Applies a functor. Only the tuple digest is interpreted.
pub(crate) fn apply_functor(f: &str, args: Vec<Value>) -> Result<Value> {
    if f != HASH_FUNCTOR || args.is_empty() {
        return Err(Error::Unsupported(format!("functor `{f}`/{}", args.len())));
    }
    Ok(Value::Text(hash_tuple(&args).into_string()))
}

impl Interpretation {
    /// `I_T = encode(M)`: `⟨r, id, a, v⟩ ∈ I_T(d)` iff `F(d)(r)(a)(id) = v`,
    /// and `d ∈ I_T(call_1)` iff `F(d)` is defined.
    pub fn of_structure(m: &Structure) -> Self {
        let mut predicates: BTreeMap<Value, BTreeSet<[Value; 4]>> = BTreeMap::new();
        let mut call1 = BTreeSet::new();
        for (db, rels) in m.function() {
            call1.insert(db.clone());
            let ext = predicates.entry(db.clone()).or_default();
            for (r, attrs) in rels {
                for (a, cells) in attrs {
                    for (id, v) in cells {
                        ext.insert([r.clone(), id.clone(), a.clone(), v.clone()]);
                    }
                }
            }
        }
        Interpretation {
            predicates,
            call1,
            domain: m.domain().to_vec(),
        }
    }

    pub fn domain(&self) -> &[Value] {
        &self.domain
    }

    fn term(&self, t: &FolTerm, g: &Assignment) -> Result<Value> {
        match t {
            FolTerm::Const(v) => Ok(v.clone()),
            FolTerm::Var(x) => lookup(g, x).cloned(),
            FolTerm::App(f, args) => {
                let vals = args
                    .iter()
                    .map(|a| self.term(a, g))
                    .collect::<Result<Vec<_>>>()?;
                apply_functor(f, vals)
            }
        }
    }

    fn extension(&self, p: &PredRef, g: &Assignment) -> Result<Option<&BTreeSet<[Value; 4]>>> {
        let name = match p {
            PredRef::Const(v) => v.clone(),
            PredRef::Var(x) => lookup(g, x)?.clone(),
            PredRef::Call1 => unreachable!("call_1 is handled by the caller"),
        };
        Ok(self.predicates.get(&name))
    }

    /// `I_T* ⊨_g φ` for the given assignment.
    pub fn satisfies(&self, f: &Fol, g: &BTreeMap<String, Value>) -> Result<bool> {
        let mut g: Assignment = g.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        self.sat(f, &mut g)
    }

    fn sat(&self, f: &Fol, g: &mut Assignment) -> Result<bool> {
        match f {
            Fol::Atom(PredRef::Call1, args) => {
                let [arg] = args.as_slice() else {
                    return Err(Error::ArityMismatch {
                        expected: 1,
                        found: args.len(),
                    });
                };
                Ok(self.call1.contains(&self.term(arg, g)?))
            }
            Fol::Atom(p, args) => {
                let vals = args
                    .iter()
                    .map(|a| self.term(a, g))
                    .collect::<Result<Vec<_>>>()?;
                let Ok(tuple) = <[Value; 4]>::try_from(vals) else {
                    return Ok(false);
                };
                Ok(self
                    .extension(p, g)?
                    .is_some_and(|ext| ext.contains(&tuple)))
            }
            Fol::Cmp(l, op, r) => Ok(op.holds(&self.term(l, g)?, &self.term(r, g)?)),
            Fol::Not(a) => Ok(!self.sat(a, g)?),
            Fol::And(a, b) => Ok(self.sat(a, g)? && self.sat(b, g)?),
            Fol::Or(a, b) => Ok(self.sat(a, g)? || self.sat(b, g)?),
            Fol::Exists(xs, body) => {
                if let Some(hit) = self.exists_by_scan(xs, body, g)? {
                    return Ok(hit);
                }
                self.exists_brute(xs, body, g)
            }
            Fol::Forall(x, body) => {
                for d in &self.domain {
                    g.push((x.clone(), d.clone()));
                    let ok = self.sat(body, g);
                    g.pop();
                    if !ok? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    fn exists_brute(&self, xs: &[String], body: &Fol, g: &mut Assignment) -> Result<bool> {
        let Some((x, rest)) = xs.split_first() else {
            return self.sat(body, g);
        };
        for d in &self.domain {
            g.push((x.clone(), d.clone()));
            let hit = self.exists_brute(rest, body, g);
            g.pop();
            if hit? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// `∃xs. d(t1..t4)` where each quantified variable occurs only as a
    /// bare argument: decided by matching the extension of `d`. Every value
    /// of an extension lies in the active domain, so this agrees with
    /// enumeration. `None` when the shape does not apply.
    fn exists_by_scan(&self, xs: &[String], body: &Fol, g: &Assignment) -> Result<Option<bool>> {
        let Fol::Atom(p, args) = body else {
            return Ok(None);
        };
        if matches!(p, PredRef::Call1)
            || matches!(p, PredRef::Var(x) if xs.contains(x))
            || args.len() != 4
        {
            return Ok(None);
        }
        let mut nested = false;
        let mut t = |a: &FolTerm| {
            if let FolTerm::App(_, inner) = a {
                nested |= inner.iter().any(|i| mentions_any(i, xs));
            }
        };
        args.iter().for_each(&mut t);
        if nested {
            return Ok(None);
        }
        // Quantified variables absent from the atom only need a witness.
        if xs.iter().any(|x| !args.contains(&FolTerm::Var(x.clone()))) && self.domain.is_empty() {
            return Ok(Some(false));
        }
        let fixed: Vec<Option<Value>> = args
            .iter()
            .map(|a| match a {
                FolTerm::Var(x) if xs.contains(x) => Ok(None),
                other => self.term(other, g).map(Some),
            })
            .collect::<Result<_>>()?;
        let Some(ext) = self.extension(p, g)? else {
            return Ok(Some(false));
        };
        let hit = ext.iter().any(|tuple| {
            let mut bound: BTreeMap<&str, &Value> = BTreeMap::new();
            args.iter()
                .zip(&fixed)
                .zip(tuple)
                .all(|((a, f), v)| match (a, f) {
                    (_, Some(expected)) => expected == v,
                    (FolTerm::Var(x), None) => *bound.entry(x.as_str()).or_insert(v) == v,
                    _ => unreachable!("only bare variables are left open"),
                })
        });
        Ok(Some(hit))
    }
}

fn mentions_any(t: &FolTerm, xs: &[String]) -> bool {
    match t {
        FolTerm::Const(_) => false,
        FolTerm::Var(x) => xs.contains(x),
        FolTerm::App(_, args) => args.iter().any(|a| mentions_any(a, xs)),
    }
}

// ---------------------------------------------------------------------------

impl fmt::Display for FolTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FolTerm::Const(v) => fmt::Display::fmt(&SlTerm::Sym(v.clone()), f),
            FolTerm::Var(x) => f.write_str(x),
            FolTerm::App(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[impl fmt::Display]) -> fmt::Result {
    for (i, a) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

impl fmt::Display for Fol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fol::Atom(p, args) => {
                match p {
                    PredRef::Const(v) => write!(f, "{}", FolTerm::Const(v.clone()))?,
                    PredRef::Var(x) => f.write_str(x)?,
                    PredRef::Call1 => f.write_str("call_1")?,
                }
                f.write_str("(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
            Fol::Cmp(l, op, r) => write!(f, "{l} {op} {r}"),
            Fol::Not(a) => write!(f, "¬{a}"),
            Fol::And(a, b) => write!(f, "({a} ∧ {b})"),
            Fol::Or(a, b) => write!(f, "({a} ∨ {b})"),
            Fol::Exists(xs, a) => {
                f.write_str("(∃")?;
                write_list(f, xs)?;
                write!(f, "){a}")
            }
            Fol::Forall(x, a) => write!(f, "(∀{x}){a}"),
        }
    }
}
