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

//! Compilation of safe, non-recursive SchemaLog rules into algebra terms
//! over the federation's stores and catalog relations.
//!
//! Every compiled term is closed: derived predicates are inlined, so each
//! term can be evaluated with [`Federation::eval`] on its own.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::{Literal, PredAtom, SlAtom, SlRule, SlTerm};
use crate::algebra::{AlgebraTerm, Condition, Expr, Operand};
use crate::error::{Error, Result};
use crate::federation::{Federation, CALL, CALL4_COLUMNS, DB_NAME};
use crate::relation::ColumnSpec;
use crate::value::Value;

/// Anonymous variables (`_`) are parsed to names with this prefix. Inside a
/// negated literal they are local to the negation.
pub(crate) const ANONYMOUS_PREFIX: &str = "_#";

pub(crate) fn is_anonymous(x: &str) -> bool {
    x.starts_with(ANONYMOUS_PREFIX)
}

/// A checked program: predicates in dependency order, their output
/// columns and their rules.
#[derive(Debug)]
pub(crate) struct Program<'a> {
    pub order: Vec<String>,
    pub columns: BTreeMap<String, Vec<String>>,
    pub rules: BTreeMap<String, Vec<&'a SlRule>>,
}

/// Variables occurring as a bare argument of a positive atom or predicate.
pub(crate) fn positive_vars(rule: &SlRule) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for lit in &rule.body {
        let args: Vec<&SlTerm> = match lit {
            Literal::Atom(a) => a.terms(),
            Literal::Pred(p) => p.args.iter().collect(),
            _ => continue,
        };
        for t in args {
            if let SlTerm::Var(x) = t {
                out.insert(x.clone());
            }
        }
    }
    out
}

fn literal_terms(lit: &Literal) -> Vec<&SlTerm> {
    match lit {
        Literal::Atom(a) => a.terms(),
        Literal::Pred(p) => p.args.iter().collect(),
        Literal::Not(inner) => literal_terms(inner),
        Literal::Cmp(l, _, r) => vec![l, r],
    }
}

/// Head, comparison and negated-literal variables, and variables under a
/// functor anywhere, must occur bare in some positive literal.
pub fn check_safety(rule: &SlRule) -> Result<()> {
    let bound = positive_vars(rule);
    let unsafe_var = |x: &str, wher: &str| {
        Err(Error::UnsafeRule(format!(
            "variable `{}` in {wher} of `{rule}` is not bound by a positive literal",
            if is_anonymous(x) { "_" } else { x }
        )))
    };
    let check = |t: &SlTerm, wher: &str, local_anonymous: bool| -> Result<()> {
        let mut vs = BTreeSet::new();
        t.vars(&mut vs);
        let bare = matches!(t, SlTerm::Var(_));
        for x in vs {
            if local_anonymous && bare && is_anonymous(&x) {
                continue;
            }
            if !bound.contains(&x) {
                return unsafe_var(&x, wher);
            }
        }
        Ok(())
    };
    for t in &rule.head.args {
        check(t, "the head", false)?;
    }
    for lit in &rule.body {
        match lit {
            Literal::Atom(_) | Literal::Pred(_) => {
                for t in literal_terms(lit) {
                    if matches!(t, SlTerm::App(..)) {
                        check(t, "a functional term", false)?;
                    }
                }
            }
            Literal::Cmp(..) => {
                for t in literal_terms(lit) {
                    check(t, "a comparison", false)?;
                }
            }
            Literal::Not(inner) => {
                if matches!(**inner, Literal::Not(_)) {
                    return Err(Error::Unsupported(format!("double negation in `{rule}`")));
                }
                let local = !matches!(**inner, Literal::Cmp(..));
                for t in literal_terms(inner) {
                    check(t, "a negated literal", local)?;
                }
            }
        }
        if atom_of(lit).is_some_and(|a| matches!(a.db(), SlTerm::App(..))) {
            return Err(Error::Unsupported(format!(
                "functional term in database position of `{rule}`"
            )));
        }
    }
    Ok(())
}

fn atom_of(lit: &Literal) -> Option<&SlAtom> {
    match lit {
        Literal::Atom(a) => Some(a),
        Literal::Not(inner) => atom_of(inner),
        _ => None,
    }
}

fn derived_uses(lit: &Literal) -> Option<&PredAtom> {
    match lit {
        Literal::Pred(p) => Some(p),
        Literal::Not(inner) => derived_uses(inner),
        _ => None,
    }
}

/// Output column names of a predicate, taken from its first rule: a head
/// variable names its column unless already used; other positions are
/// `arg1`, `arg2`, ...
fn head_columns(head: &PredAtom) -> Vec<String> {
    let mut used = BTreeSet::new();
    head.args
        .iter()
        .enumerate()
        .map(|(i, t)| match t {
            SlTerm::Var(x) if !is_anonymous(x) && used.insert(x.clone()) => x.clone(),
            _ => format!("arg{}", i + 1),
        })
        .collect()
}

/// Checks arities, definedness, safety and absence of recursion, and
/// orders the predicates so that each comes after those it uses.
pub(crate) fn analyze(rules: &[SlRule]) -> Result<Program<'_>> {
    let mut by_pred: BTreeMap<String, Vec<&SlRule>> = BTreeMap::new();
    let mut arity: BTreeMap<String, usize> = BTreeMap::new();
    let mut note_arity = |p: &PredAtom| -> Result<()> {
        match arity.insert(p.pred.clone(), p.args.len()) {
            Some(n) if n != p.args.len() => Err(Error::ArityMismatch {
                expected: n,
                found: p.args.len(),
            }),
            _ => Ok(()),
        }
    };
    for r in rules {
        note_arity(&r.head)?;
        by_pred.entry(r.head.pred.clone()).or_default().push(r);
    }
    for r in rules {
        check_safety(r)?;
        for p in r.body.iter().filter_map(derived_uses) {
            if !by_pred.contains_key(&p.pred) {
                return Err(Error::InvalidArgument(format!(
                    "undefined predicate `{}`",
                    p.pred
                )));
            }
            note_arity(p)?;
        }
    }
    // Depth-first topological sort; a grey node reached again is a cycle.
    let mut state: BTreeMap<&str, bool> = BTreeMap::new();
    let mut order = Vec::new();
    fn visit<'r>(
        p: &'r str,
        by_pred: &BTreeMap<String, Vec<&'r SlRule>>,
        state: &mut BTreeMap<&'r str, bool>,
        order: &mut Vec<String>,
    ) -> Result<()> {
        match state.get(p) {
            Some(true) => return Ok(()),
            Some(false) => return Err(Error::Recursion(p.to_string())),
            None => {}
        }
        state.insert(p, false);
        for r in &by_pred[p] {
            for q in r.body.iter().filter_map(derived_uses) {
                visit(&q.pred, by_pred, state, order)?;
            }
        }
        state.insert(p, true);
        order.push(p.to_string());
        Ok(())
    }
    for p in by_pred.keys() {
        visit(p, &by_pred, &mut state, &mut order)?;
    }
    let columns = by_pred
        .iter()
        .map(|(p, rs)| (p.clone(), head_columns(&rs[0].head)))
        .collect();
    Ok(Program {
        order,
        columns,
        rules: by_pred,
    })
}

// ---------------------------------------------------------------------------

/// A relation with no rows and the given columns.
fn empty_with(columns: &[String]) -> AlgebraTerm {
    AlgebraTerm::SingleTuple(
        columns
            .iter()
            .map(|c| (ColumnSpec::named(c), Value::Null))
            .collect(),
    )
    .select(Condition::False)
}

fn expr_of(t: &SlTerm) -> Expr {
    match t {
        SlTerm::Sym(v) => Expr::Const(v.clone()),
        SlTerm::Var(x) => Expr::Column(x.clone()),
        SlTerm::App(_, args) => Expr::Hash(args.iter().map(expr_of).collect()),
    }
}

struct RuleCompiler<'a> {
    fed: &'a Federation,
    compiled: &'a BTreeMap<String, AlgebraTerm>,
    columns: &'a BTreeMap<String, Vec<String>>,
    fresh: usize,
}

/// A compiled relation together with its column names.
struct Part {
    term: AlgebraTerm,
    cols: Vec<String>,
}

impl RuleCompiler<'_> {
    fn fresh(&mut self, tag: &str) -> String {
        self.fresh += 1;
        format!("#{tag}{}", self.fresh)
    }

    /// The source relation of a positive literal and the column under each
    /// argument position.
    fn source(&self, lit: &Literal) -> Result<(AlgebraTerm, Vec<(String, SlTerm)>)> {
        let vector = |db: &SlTerm,
                      cols: &[(&str, &SlTerm)]|
         -> Result<(AlgebraTerm, Vec<(String, SlTerm)>)> {
            let mut slots: Vec<(String, SlTerm)> = cols
                .iter()
                .map(|(c, t)| (c.to_string(), (*t).clone()))
                .collect();
            let base = match db {
                SlTerm::Var(_) => {
                    slots.insert(0, (DB_NAME.to_string(), db.clone()));
                    AlgebraTerm::base(CALL[3])
                }
                SlTerm::Sym(Value::Text(name)) if self.fed.member(name).is_ok() => {
                    AlgebraTerm::base(name.as_str())
                }
                SlTerm::Sym(_) => {
                    let cols: Vec<String> = slots.iter().map(|(c, _)| c.clone()).collect();
                    empty_with(&cols)
                }
                SlTerm::App(..) => unreachable!("rejected by the safety check"),
            };
            Ok((base, slots))
        };
        let [r, t, a, v] = [1, 2, 3, 4].map(|i| CALL4_COLUMNS[i]);
        match lit {
            Literal::Atom(SlAtom::Quad {
                db,
                rel,
                tid,
                attr,
                val,
            }) => vector(db, &[(r, rel), (t, tid), (a, attr), (v, val)]),
            Literal::Atom(SlAtom::Attr { db, rel, attr }) => vector(db, &[(r, rel), (a, attr)]),
            Literal::Atom(SlAtom::Rel { db, rel }) => vector(db, &[(r, rel)]),
            Literal::Atom(SlAtom::Db(db)) => Ok((
                AlgebraTerm::base(CALL[0]),
                vec![(DB_NAME.to_string(), db.clone())],
            )),
            Literal::Pred(p) => {
                let mut term = self.compiled[&p.pred].clone();
                let mut slots = Vec::new();
                for (j, (c, arg)) in self.columns[&p.pred].iter().zip(&p.args).enumerate() {
                    let tmp = format!("#p{j}");
                    term = term.rename(c.as_str(), tmp.as_str());
                    slots.push((tmp, arg.clone()));
                }
                Ok((term, slots))
            }
            _ => unreachable!("only positive literals have a source"),
        }
    }

    /// Compiles a positive literal to a relation over its variables.
    /// Functional arguments become fresh variables, returned with their
    /// defining terms so the caller can enforce them.
    fn positive(&mut self, lit: &Literal) -> Result<(Part, Vec<(String, SlTerm)>)> {
        let (mut term, slots) = self.source(lit)?;
        let mut first: BTreeMap<String, String> = BTreeMap::new();
        let mut keep: Vec<(String, String)> = Vec::new();
        let mut deferred = Vec::new();
        let mut conds = Vec::new();
        for (col, arg) in slots {
            let var = match arg {
                SlTerm::Sym(v) => {
                    conds.push(Condition::col_eq(col, v));
                    continue;
                }
                SlTerm::Var(x) => x,
                app @ SlTerm::App(..) => {
                    let f = self.fresh("f");
                    deferred.push((f.clone(), app));
                    f
                }
            };
            match first.get(&var) {
                Some(c0) => conds.push(Condition::cols_eq(c0.clone(), col)),
                None => {
                    first.insert(var.clone(), col.clone());
                    keep.push((col, var));
                }
            }
        }
        if !conds.is_empty() {
            term = term.select(Condition::all(conds));
        }
        let kept: Vec<&str> = keep.iter().map(|(c, _)| c.as_str()).collect();
        term = term.project(&kept);
        // Source columns are lower case or `#`-prefixed and never clash with
        // variable names.
        for (c, x) in &keep {
            term = term.rename(c.as_str(), x.as_str());
        }
        let cols = keep.into_iter().map(|(_, x)| x).collect();
        Ok((Part { term, cols }, deferred))
    }

    /// Restricts `acc` to rows where `lhs op rhs` holds; functional sides
    /// are computed into temporary columns first.
    fn restrict(
        &mut self,
        acc: Part,
        lhs: &SlTerm,
        op: crate::value::Comparison,
        rhs: &SlTerm,
        negate: bool,
    ) -> Part {
        let mut term = acc.term;
        let mut operand = |t: &SlTerm, term: &mut AlgebraTerm| match t {
            SlTerm::Sym(v) => Operand::Const(v.clone()),
            SlTerm::Var(x) => Operand::Column(x.clone()),
            app @ SlTerm::App(..) => {
                let c = self.fresh("e");
                *term = std::mem::replace(term, AlgebraTerm::Empty)
                    .extend(ColumnSpec::named(&c), expr_of(app));
                Operand::Column(c)
            }
        };
        let l = operand(lhs, &mut term);
        let r = operand(rhs, &mut term);
        let mut cond = Condition::cmp(l, op, r);
        if negate {
            cond = cond.not();
        }
        Part {
            term: term.select(cond).project(&acc.cols),
            cols: acc.cols,
        }
    }

    fn join(acc: Part, part: Part) -> Part {
        let pairs: Vec<(&str, &str)> = part
            .cols
            .iter()
            .filter(|c| acc.cols.contains(c))
            .map(|c| (c.as_str(), c.as_str()))
            .collect();
        let mut cols = acc.cols.clone();
        cols.extend(part.cols.iter().filter(|c| !acc.cols.contains(c)).cloned());
        Part {
            term: acc.term.join(part.term, &pairs),
            cols,
        }
    }

    fn rule(&mut self, rule: &SlRule, out_cols: &[String]) -> Result<AlgebraTerm> {
        let mut acc = Part {
            term: AlgebraTerm::Empty,
            cols: Vec::new(),
        };
        let mut checks: Vec<(SlTerm, crate::value::Comparison, SlTerm, bool)> = Vec::new();
        for lit in &rule.body {
            match lit {
                Literal::Atom(_) | Literal::Pred(_) => {
                    let (part, deferred) = self.positive(lit)?;
                    acc = Self::join(acc, part);
                    for (f, app) in deferred {
                        checks.push((SlTerm::Var(f), crate::value::Comparison::Eq, app, false));
                    }
                }
                Literal::Cmp(l, op, r) => checks.push((l.clone(), *op, r.clone(), false)),
                Literal::Not(_) => {}
            }
        }
        for (l, op, r, negate) in checks {
            acc = self.restrict(acc, &l, op, &r, negate);
        }
        for lit in &rule.body {
            let Literal::Not(inner) = lit else { continue };
            match &**inner {
                Literal::Cmp(l, op, r) => acc = self.restrict(acc, l, *op, r, true),
                _ => acc = self.subtract(acc, inner)?,
            }
        }
        // Head: computed into temporaries carrying the final attribute
        // names, then renamed.
        let mut term = acc.term;
        let mut tmps = Vec::new();
        for (i, (arg, name)) in rule.head.args.iter().zip(out_cols).enumerate() {
            let tmp = format!("#h{i}");
            term = term.extend(ColumnSpec::new(&tmp, name), expr_of(arg));
            tmps.push(tmp);
        }
        term = term.project(&tmps);
        for (tmp, name) in tmps.iter().zip(out_cols) {
            term = term.rename(tmp.as_str(), name.as_str());
        }
        Ok(term)
    }

    /// `acc − (acc ⋈ π_shared L)` restricted to `acc`'s columns.
    fn subtract(&mut self, acc: Part, inner: &Literal) -> Result<Part> {
        let (part, deferred) = self.positive(inner)?;
        let mut left = acc.term.clone();
        let mut left_cols = acc.cols.clone();
        for (f, app) in &deferred {
            left = left.extend(ColumnSpec::named(f), expr_of(app));
            left_cols.push(f.clone());
        }
        let shared: Vec<&str> = part
            .cols
            .iter()
            .filter(|c| left_cols.contains(c))
            .map(String::as_str)
            .collect();
        let pairs: Vec<(&str, &str)> = shared.iter().map(|c| (*c, *c)).collect();
        let blocked = left
            .join(part.term.project(&shared), &pairs)
            .project(&acc.cols);
        Ok(Part {
            term: acc.term.minus(blocked),
            cols: acc.cols,
        })
    }
}

/// Compiles each predicate of `rules` to a closed algebra term over `fed`.
pub fn compile_rules(rules: &[SlRule], fed: &Federation) -> Result<BTreeMap<String, AlgebraTerm>> {
    let program = analyze(rules)?;
    let mut compiled = BTreeMap::new();
    for pred in &program.order {
        let cols = &program.columns[pred];
        let mut rc = RuleCompiler {
            fed,
            compiled: &compiled,
            columns: &program.columns,
            fresh: 0,
        };
        let mut term: Option<AlgebraTerm> = None;
        for r in &program.rules[pred] {
            let t = rc.rule(r, cols)?;
            term = Some(match term {
                None => t,
                Some(acc) => acc.union(t),
            });
        }
        let term = term.expect("every predicate has a rule");
        compiled.insert(pred.clone(), term);
    }
    Ok(compiled)
}
