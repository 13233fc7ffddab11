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

//! Reference evaluator for rule programs: backtracking over the stored
//! facts with explicit substitutions. Slow but independent of the algebra.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::{Literal, SlAtom, SlRule, SlTerm};
use super::compile::analyze;
use super::encode::apply_functor;
use crate::error::Result;
use crate::federation::Federation;
use crate::relation::{ColumnSpec, Relation, Row};
use crate::value::Value;

type Subst = BTreeMap<String, Value>;

struct Facts<'a> {
    fed: &'a Federation,
    derived: BTreeMap<String, BTreeSet<Row>>,
}

impl Facts<'_> {
    /// Candidate tuples for a literal, aligned with its argument terms.
    fn candidates(&self, lit: &Literal, s: &Subst) -> Result<Vec<Row>> {
        let text = Value::text;
        let stored =
            |db: &SlTerm, pick: &dyn Fn(Value, Value, Value, Value) -> Row| -> Result<Vec<Row>> {
                let wanted = match db {
                    SlTerm::Var(x) => s.get(x).cloned(),
                    other => Some(eval(other, s)?),
                };
                let mut out = Vec::new();
                for m in self.fed.members() {
                    let name = text(m.name());
                    if wanted.as_ref().is_some_and(|w| *w != name) {
                        continue;
                    }
                    for (r, id, a, v) in m.store.cells() {
                        let mut row = vec![name.clone()];
                        row.extend(pick(text(r), text(id.as_str()), text(a), v.clone()));
                        out.push(row);
                    }
                }
                Ok(out)
            };
        Ok(match lit {
            Literal::Atom(SlAtom::Quad { db, .. }) => stored(db, &|r, t, a, v| vec![r, t, a, v])?,
            Literal::Atom(SlAtom::Attr { db, .. }) => stored(db, &|r, _, a, _| vec![r, a])?,
            Literal::Atom(SlAtom::Rel { db, .. }) => stored(db, &|r, _, _, _| vec![r])?,
            Literal::Atom(SlAtom::Db(_)) => {
                self.fed.call_level(1)?.rows().iter().cloned().collect()
            }
            Literal::Pred(p) => self.derived[&p.pred].iter().cloned().collect(),
            _ => unreachable!("only positive literals are matched"),
        })
    }
}

fn args(lit: &Literal) -> Vec<&SlTerm> {
    match lit {
        Literal::Atom(a) => a.terms(),
        Literal::Pred(p) => p.args.iter().collect(),
        _ => Vec::new(),
    }
}

fn eval(t: &SlTerm, s: &Subst) -> Result<Value> {
    match t {
        SlTerm::Sym(v) => Ok(v.clone()),
        SlTerm::Var(x) => Ok(s[x].clone()),
        SlTerm::App(f, a) => apply_functor(f, a.iter().map(|x| eval(x, s)).collect::<Result<_>>()?),
    }
}

/// Extends `s` so that `terms` match `row`, or `None`. Functional terms are
/// checked once all their variables are bound, after the whole body.
fn unify(terms: &[&SlTerm], row: &[Value], s: &Subst) -> Result<Option<Subst>> {
    let mut s = s.clone();
    for (t, v) in terms.iter().zip(row) {
        match t {
            SlTerm::Sym(c) => {
                if c != v {
                    return Ok(None);
                }
            }
            SlTerm::Var(x) => match s.get(x) {
                Some(b) if b != v => return Ok(None),
                Some(_) => {}
                None => {
                    s.insert(x.clone(), v.clone());
                }
            },
            SlTerm::App(..) => {}
        }
    }
    Ok(Some(s))
}

fn functional_ok(terms: &[&SlTerm], row: &[Value], s: &Subst) -> Result<bool> {
    for (t, v) in terms.iter().zip(row) {
        if matches!(t, SlTerm::App(..)) && eval(t, s)? != *v {
            return Ok(false);
        }
    }
    Ok(true)
}

fn solve(facts: &Facts, rule: &SlRule, i: usize, s: Subst, out: &mut Vec<Subst>) -> Result<()> {
    let Some(lit) = rule.body.get(i) else {
        out.push(s);
        return Ok(());
    };
    if !matches!(lit, Literal::Atom(_) | Literal::Pred(_)) {
        return solve(facts, rule, i + 1, s, out);
    }
    let terms = args(lit);
    for row in facts.candidates(lit, &s)? {
        if let Some(next) = unify(&terms, &row, &s)? {
            solve(facts, rule, i + 1, next, out)?;
        }
    }
    Ok(())
}

/// True iff some candidate of `lit` matches under `s`, with anonymous
/// variables free.
fn exists_match(facts: &Facts, lit: &Literal, s: &Subst) -> Result<bool> {
    let terms = args(lit);
    for row in facts.candidates(lit, s)? {
        if let Some(ext) = unify(&terms, &row, s)? {
            if functional_ok(&terms, &row, &ext)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn body_holds(facts: &Facts, rule: &SlRule, s: &Subst) -> Result<bool> {
    for lit in &rule.body {
        let ok = match lit {
            // Functional positions were skipped while matching.
            Literal::Atom(_) | Literal::Pred(_) => {
                !args(lit).iter().any(|t| matches!(t, SlTerm::App(..)))
                    || exists_match(facts, lit, s)?
            }
            Literal::Cmp(l, op, r) => op.holds(&eval(l, s)?, &eval(r, s)?),
            Literal::Not(inner) => match &**inner {
                Literal::Cmp(l, op, r) => !op.holds(&eval(l, s)?, &eval(r, s)?),
                other => !exists_match(facts, other, s)?,
            },
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Evaluates every predicate of `rules` over `fed`.
pub fn naive_eval(rules: &[SlRule], fed: &Federation) -> Result<BTreeMap<String, Relation>> {
    let program = analyze(rules)?;
    let mut facts = Facts {
        fed,
        derived: BTreeMap::new(),
    };
    for pred in &program.order {
        let mut rows = BTreeSet::new();
        for rule in &program.rules[pred] {
            let mut solutions = Vec::new();
            solve(&facts, rule, 0, Subst::new(), &mut solutions)?;
            for s in solutions {
                if body_holds(&facts, rule, &s)? {
                    rows.insert(
                        rule.head
                            .args
                            .iter()
                            .map(|t| eval(t, &s))
                            .collect::<Result<Row>>()?,
                    );
                }
            }
        }
        facts.derived.insert(pred.clone(), rows);
    }
    program
        .order
        .iter()
        .map(|p| {
            let header = program.columns[p].iter().map(ColumnSpec::named).collect();
            let rel = Relation::from_rows(header, facts.derived[p].iter().cloned())?;
            Ok((p.clone(), rel))
        })
        .collect()
}
