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

use std::borrow::Cow;
use std::collections::{BTreeSet, HashMap, HashSet};

use super::header::{
    align_union, extend_header, join_plan, project_indices, rename_header, times_header,
};
use super::{AlgebraTerm, Condition, Expr, Operand};
use crate::error::{Error, Result};
use crate::hash::hash_tuple;
use crate::relation::{ColumnSpec, Relation, Row};
use crate::value::{Comparison, Value};

/// Anything that binds relation names to relations.
pub trait RelationSource {
    fn lookup(&self, name: &str) -> Option<&Relation>;
}

impl RelationSource for std::collections::BTreeMap<String, Relation> {
    fn lookup(&self, name: &str) -> Option<&Relation> {
        self.get(name)
    }
}

impl RelationSource for HashMap<String, Relation> {
    fn lookup(&self, name: &str) -> Option<&Relation> {
        self.get(name)
    }
}

/// True iff the two headers carry the same set of attributes.
pub fn union_compatible(r1: &Relation, r2: &Relation) -> bool {
    r1.attribute_set() == r2.attribute_set()
}

/// Evaluates `term` with every base name bound in `instance`.
pub fn eval_term(term: &AlgebraTerm, instance: &dyn RelationSource) -> Result<Relation> {
    Evaluator::new(instance).eval(term).map(Cow::into_owned)
}

/// Term evaluator over a fixed relation source. Base relations are borrowed
/// rather than copied.
pub struct Evaluator<'a> {
    source: &'a dyn RelationSource,
}

impl<'a> Evaluator<'a> {
    pub fn new(source: &'a dyn RelationSource) -> Self {
        Evaluator { source }
    }

    pub fn eval(&self, term: &AlgebraTerm) -> Result<Cow<'a, Relation>> {
        match term {
            AlgebraTerm::Base(name) => self
                .source
                .lookup(name)
                .map(Cow::Borrowed)
                .ok_or_else(|| Error::UnknownRelation(name.clone())),
            AlgebraTerm::Empty => Ok(Cow::Owned(Relation::bottom())),
            AlgebraTerm::SingleTuple(cells) => {
                let header: Vec<ColumnSpec> = cells.iter().map(|(c, _)| c.clone()).collect();
                let mut names = BTreeSet::new();
                for c in &header {
                    if !names.insert(c.column_name.as_str()) {
                        return Err(Error::DuplicateColumn(c.column_name.clone()));
                    }
                }
                let row: Row = cells.iter().map(|(_, v)| v.clone()).collect();
                Ok(Cow::Owned(Relation::from_parts(
                    header,
                    BTreeSet::from([row]),
                )))
            }
            AlgebraTerm::Rename { input, from, to } => {
                let r = self.eval(input)?;
                let header = rename_header(r.header(), from, to)?;
                Ok(Cow::Owned(r.into_owned().relabel(header)?))
            }
            AlgebraTerm::Times(l, r) => {
                let (l, r) = (self.eval(l)?, self.eval(r)?);
                let header = times_header(l.header(), r.header());
                let mut rows = BTreeSet::new();
                for a in l.rows() {
                    for b in r.rows() {
                        let mut row = a.clone();
                        row.extend(b.iter().cloned());
                        rows.insert(row);
                    }
                }
                Ok(Cow::Owned(Relation::from_parts(header, rows)))
            }
            AlgebraTerm::Project { input, columns } => {
                let r = self.eval(input)?;
                let Some(idx) = project_indices(r.header(), columns)? else {
                    return Ok(r);
                };
                let header = idx.iter().map(|&i| r.header()[i].clone()).collect();
                let rows = r
                    .rows()
                    .iter()
                    .map(|row| idx.iter().map(|&i| row[i].clone()).collect())
                    .collect();
                Ok(Cow::Owned(Relation::from_parts(header, rows)))
            }
            AlgebraTerm::Select { input, condition }
                if matches!(**input, AlgebraTerm::Times(..)) =>
            {
                self.select_product(input, condition)
            }
            AlgebraTerm::Select { input, condition } => {
                let r = self.eval(input)?;
                let cond = self.compile(condition, r.header())?;
                let rows = r
                    .rows()
                    .iter()
                    .filter(|row| cond.holds(row))
                    .cloned()
                    .collect();
                Ok(Cow::Owned(Relation::from_parts(r.header().to_vec(), rows)))
            }
            AlgebraTerm::Union(l, r) => {
                let (l, r) = (self.eval(l)?, self.eval(r)?);
                let Some(map) = align_union(l.header(), r.header()) else {
                    return Ok(Cow::Owned(Relation::bottom()));
                };
                let mut rows = l.rows().clone();
                rows.extend(r.rows().iter().map(|row| permute(row, &map)));
                Ok(Cow::Owned(Relation::from_parts(l.header().to_vec(), rows)))
            }
            AlgebraTerm::Minus(l, r) => {
                let (l, r) = (self.eval(l)?, self.eval(r)?);
                let Some(map) = align_union(l.header(), r.header()) else {
                    return Ok(Cow::Owned(Relation::bottom()));
                };
                let right: HashSet<Row> = r.rows().iter().map(|row| permute(row, &map)).collect();
                let rows = l
                    .rows()
                    .iter()
                    .filter(|row| !right.contains(*row))
                    .cloned()
                    .collect();
                Ok(Cow::Owned(Relation::from_parts(l.header().to_vec(), rows)))
            }
            AlgebraTerm::NaturalJoin { left, right, pairs } => {
                let (l, r) = (self.eval(left)?, self.eval(right)?);
                let plan = join_plan(l.header(), r.header(), pairs)?;
                let mut index: HashMap<Vec<&Value>, Vec<&Row>> = HashMap::new();
                for row in r.rows() {
                    let key: Vec<&Value> = plan.right_keys.iter().map(|&j| &row[j]).collect();
                    if key.iter().any(|v| v.is_null()) {
                        continue;
                    }
                    index.entry(key).or_default().push(row);
                }
                let mut rows = BTreeSet::new();
                for a in l.rows() {
                    let key: Vec<&Value> = plan.left_keys.iter().map(|&i| &a[i]).collect();
                    if key.iter().any(|v| v.is_null()) {
                        continue;
                    }
                    for b in index.get(&key).into_iter().flatten() {
                        let mut row = a.clone();
                        row.extend(plan.kept_right.iter().map(|&j| b[j].clone()));
                        rows.insert(row);
                    }
                }
                Ok(Cow::Owned(Relation::from_parts(plan.header, rows)))
            }
            AlgebraTerm::Extend {
                input,
                column,
                expr,
            } => {
                let r = self.eval(input)?;
                let header = extend_header(r.header(), column)?;
                let expr = CompiledExpr::new(expr, r.header())?;
                let rows = r
                    .rows()
                    .iter()
                    .map(|row| {
                        let mut out = row.clone();
                        out.push(expr.eval(row));
                        out
                    })
                    .collect();
                Ok(Cow::Owned(Relation::from_parts(header, rows)))
            }
        }
    }

    /// `σ_c(A_1 × ... × A_n)` without forming the whole product: factors
    /// are added left to right, column equalities reaching into the new
    /// factor become hash-join keys, and every other conjunct filters as
    /// soon as the columns it reads are present. Same result as the plain
    /// product followed by the selection.
    fn select_product(
        &self,
        product: &AlgebraTerm,
        condition: &Condition,
    ) -> Result<Cow<'a, Relation>> {
        fn leaves<'t>(t: &'t AlgebraTerm, out: &mut Vec<&'t AlgebraTerm>) {
            match t {
                AlgebraTerm::Times(l, r) => {
                    leaves(l, out);
                    leaves(r, out);
                }
                t => out.push(t),
            }
        }
        fn header(
            t: &AlgebraTerm,
            next: &mut impl Iterator<Item = Vec<ColumnSpec>>,
        ) -> Vec<ColumnSpec> {
            match t {
                AlgebraTerm::Times(l, r) => {
                    let l = header(l, next);
                    times_header(&l, &header(r, next))
                }
                _ => next.next().expect("one header per factor"),
            }
        }
        fn conjuncts<'c>(c: &'c Condition, out: &mut Vec<&'c Condition>) {
            match c {
                Condition::And(a, b) => {
                    conjuncts(a, out);
                    conjuncts(b, out);
                }
                c => out.push(c),
            }
        }

        let mut factors = Vec::new();
        leaves(product, &mut factors);
        let rels = factors
            .iter()
            .map(|f| self.eval(f))
            .collect::<Result<Vec<_>>>()?;
        let full = header(product, &mut rels.iter().map(|r| r.header().to_vec()));
        let mut parts = Vec::new();
        conjuncts(condition, &mut parts);
        let mut pending = parts
            .into_iter()
            .map(|c| {
                let c = self.compile(c, &full)?;
                let need = c.max_column().map_or(0, |m| m + 1);
                Ok(Some((c, need)))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut acc: Vec<Row> = vec![Vec::new()];
        let mut lo = 0;
        for rel in &rels {
            let hi = lo + rel.arity();
            // (position in acc, position in the factor)
            let mut keys = Vec::new();
            for slot in pending.iter_mut() {
                if let Some((
                    CompiledCondition::Compare(Slot::Column(p), Comparison::Eq, Slot::Column(q)),
                    _,
                )) = slot
                {
                    let (p, q) = (*p, *q);
                    let pair = if p < lo && (lo..hi).contains(&q) {
                        Some((p, q - lo))
                    } else if q < lo && (lo..hi).contains(&p) {
                        Some((q, p - lo))
                    } else {
                        None
                    };
                    if let Some(pair) = pair {
                        keys.push(pair);
                        *slot = None;
                    }
                }
            }
            let mut next = Vec::new();
            if keys.is_empty() {
                for a in &acc {
                    for b in rel.rows() {
                        let mut row = a.clone();
                        row.extend(b.iter().cloned());
                        next.push(row);
                    }
                }
            } else {
                let mut index: HashMap<Vec<&Value>, Vec<&Row>> = HashMap::new();
                for b in rel.rows() {
                    let key: Vec<&Value> = keys.iter().map(|&(_, j)| &b[j]).collect();
                    if !key.iter().any(|v| v.is_null()) {
                        index.entry(key).or_default().push(b);
                    }
                }
                for a in &acc {
                    let key: Vec<&Value> = keys.iter().map(|&(i, _)| &a[i]).collect();
                    for b in index.get(&key).into_iter().flatten() {
                        let mut row = a.clone();
                        row.extend(b.iter().cloned());
                        next.push(row);
                    }
                }
            }
            for slot in pending.iter_mut() {
                if let Some((c, need)) = slot {
                    if *need <= hi {
                        next.retain(|row| c.holds(row));
                        *slot = None;
                    }
                }
            }
            acc = next;
            lo = hi;
        }
        Ok(Cow::Owned(Relation::from_parts(
            full,
            acc.into_iter().collect(),
        )))
    }

    fn compile(&self, cond: &Condition, header: &[ColumnSpec]) -> Result<CompiledCondition> {
        Ok(match cond {
            Condition::True => CompiledCondition::Const(true),
            Condition::False => CompiledCondition::Const(false),
            Condition::Compare { lhs, op, rhs } => {
                let (l, r) = resolve_pair(lhs, rhs, header)?;
                CompiledCondition::Compare(l, *op, r)
            }
            Condition::And(a, b) => CompiledCondition::And(
                Box::new(self.compile(a, header)?),
                Box::new(self.compile(b, header)?),
            ),
            Condition::Or(a, b) => CompiledCondition::Or(
                Box::new(self.compile(a, header)?),
                Box::new(self.compile(b, header)?),
            ),
            Condition::Not(a) => CompiledCondition::Not(Box::new(self.compile(a, header)?)),
            Condition::In { columns, source } => {
                let idx = columns
                    .iter()
                    .map(|c| column_index(header, c))
                    .collect::<Result<Vec<_>>>()?;
                let rel = self.eval(source)?;
                if rel.arity() != idx.len() {
                    return Err(Error::ArityMismatch {
                        expected: idx.len(),
                        found: rel.arity(),
                    });
                }
                CompiledCondition::In(idx, rel.rows().iter().cloned().collect())
            }
        })
    }
}

fn permute(row: &Row, map: &[usize]) -> Row {
    map.iter().map(|&j| row[j].clone()).collect()
}

fn column_index(header: &[ColumnSpec], name: &str) -> Result<usize> {
    header
        .iter()
        .position(|c| c.column_name == name)
        .ok_or_else(|| Error::UnknownColumn(name.to_string()))
}

enum Slot {
    Column(usize),
    Const(Value),
}

impl Slot {
    fn get<'r>(&'r self, row: &'r Row) -> &'r Value {
        match self {
            Slot::Column(i) => &row[*i],
            Slot::Const(v) => v,
        }
    }
}

enum Resolved {
    Slot(Slot),
    Unbound(String),
}

fn resolve(op: &Operand, header: &[ColumnSpec]) -> Result<Resolved> {
    Ok(match op {
        Operand::Column(c) => Resolved::Slot(Slot::Column(column_index(header, c)?)),
        Operand::Const(v) => Resolved::Slot(Slot::Const(v.clone())),
        Operand::Name(n) => match header.iter().position(|c| &c.column_name == n) {
            Some(i) => Resolved::Slot(Slot::Column(i)),
            None => Resolved::Unbound(n.clone()),
        },
    })
}

fn resolve_pair(lhs: &Operand, rhs: &Operand, header: &[ColumnSpec]) -> Result<(Slot, Slot)> {
    match (resolve(lhs, header)?, resolve(rhs, header)?) {
        (Resolved::Slot(l), Resolved::Slot(r)) => Ok((l, r)),
        (Resolved::Slot(l @ Slot::Column(_)), Resolved::Unbound(n)) => {
            Ok((l, Slot::Const(Value::Text(n))))
        }
        (Resolved::Unbound(n), Resolved::Slot(r @ Slot::Column(_))) => {
            Ok((Slot::Const(Value::Text(n)), r))
        }
        (Resolved::Unbound(n), _) | (_, Resolved::Unbound(n)) => Err(Error::UnknownColumn(n)),
    }
}

enum CompiledCondition {
    Const(bool),
    Compare(Slot, Comparison, Slot),
    And(Box<CompiledCondition>, Box<CompiledCondition>),
    Or(Box<CompiledCondition>, Box<CompiledCondition>),
    Not(Box<CompiledCondition>),
    In(Vec<usize>, HashSet<Row>),
}

impl CompiledCondition {
    /// Highest column index the condition reads.
    fn max_column(&self) -> Option<usize> {
        let slot = |s: &Slot| match s {
            Slot::Column(i) => Some(*i),
            Slot::Const(_) => None,
        };
        match self {
            CompiledCondition::Const(_) => None,
            CompiledCondition::Compare(l, _, r) => slot(l).max(slot(r)),
            CompiledCondition::And(a, b) | CompiledCondition::Or(a, b) => {
                a.max_column().max(b.max_column())
            }
            CompiledCondition::Not(a) => a.max_column(),
            CompiledCondition::In(idx, _) => idx.iter().copied().max(),
        }
    }

    fn holds(&self, row: &Row) -> bool {
        match self {
            CompiledCondition::Const(b) => *b,
            CompiledCondition::Compare(l, op, r) => op.holds(l.get(row), r.get(row)),
            CompiledCondition::And(a, b) => a.holds(row) && b.holds(row),
            CompiledCondition::Or(a, b) => a.holds(row) || b.holds(row),
            CompiledCondition::Not(a) => !a.holds(row),
            CompiledCondition::In(idx, set) => {
                let key: Row = idx.iter().map(|&i| row[i].clone()).collect();
                !key.iter().any(Value::is_null) && set.contains(&key)
            }
        }
    }
}

enum CompiledExpr {
    Slot(Slot),
    Hash(Vec<CompiledExpr>),
}

impl CompiledExpr {
    fn new(expr: &Expr, header: &[ColumnSpec]) -> Result<Self> {
        Ok(match expr {
            Expr::Column(c) => CompiledExpr::Slot(Slot::Column(column_index(header, c)?)),
            Expr::Const(v) => CompiledExpr::Slot(Slot::Const(v.clone())),
            Expr::Hash(args) => CompiledExpr::Hash(
                args.iter()
                    .map(|a| CompiledExpr::new(a, header))
                    .collect::<Result<_>>()?,
            ),
        })
    }

    fn eval(&self, row: &Row) -> Value {
        match self {
            CompiledExpr::Slot(s) => s.get(row).clone(),
            CompiledExpr::Hash(args) => {
                let values: Vec<Value> = args.iter().map(|a| a.eval(row)).collect();
                Value::Text(hash_tuple(&values).into_string())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_term;
    use crate::relation::Instance;

    fn univ_a() -> Instance {
        let pay = Relation::from_strs(
            &["category", "dept", "avg-sal"],
            &[
                &["Prof", "CS", "70,000"],
                &["Assoc. Prof", "CS", "60,000"],
                &["Secretary", "CS", "35,000"],
                &["Prof", "Math", "65,000"],
            ],
        )
        .unwrap();
        Instance::from([("pay-info".to_string(), pay)])
    }

    fn run(text: &str, inst: &Instance) -> Result<Relation> {
        eval_term(&parse_term(text)?, inst)
    }

    #[test]
    fn base_returns_the_table() {
        let inst = univ_a();
        assert_eq!(run("pay-info", &inst).unwrap(), inst["pay-info"]);
    }

    #[test]
    fn projection_deduplicates() {
        let r = run("pay-info[category]", &univ_a()).unwrap();
        let expected = Relation::from_strs(
            &["category"],
            &[&["Prof"], &["Assoc. Prof"], &["Secretary"]],
        )
        .unwrap();
        assert_eq!(r, expected);
    }

    #[test]
    fn projection_with_absent_name_is_identity() {
        let inst = univ_a();
        assert_eq!(
            run("pay-info[category, nope]", &inst).unwrap(),
            inst["pay-info"]
        );
        assert!(matches!(
            run("pay-info[dept, dept]", &inst),
            Err(Error::DuplicateColumn(_))
        ));
    }

    #[test]
    fn bare_names_resolve_to_columns_or_text() {
        let inst = univ_a();
        assert_eq!(run("pay-info WHERE dept = CS", &inst).unwrap().len(), 3);
        assert_eq!(
            run("pay-info WHERE dept = category", &inst).unwrap().len(),
            0
        );
        assert!(
            matches!(run("pay-info WHERE dpt = CS", &inst), Err(Error::UnknownColumn(c)) if c == "dpt")
        );
        assert!(matches!(
            run("pay-info WHERE `CS` = dept", &inst),
            Err(Error::UnknownColumn(_))
        ));
    }

    #[test]
    fn union_of_incompatible_is_bottom() {
        let mut inst = univ_a();
        inst.insert(
            "cs".into(),
            Relation::from_strs(&["category", "avg-sal"], &[&["Prof", "65,000"]]).unwrap(),
        );
        assert!(run("pay-info UNION cs", &inst).unwrap().is_bottom());
        assert!(run("pay-info MINUS cs", &inst).unwrap().is_bottom());
        assert_eq!(
            run("pay-info UNION pay-info", &inst).unwrap(),
            inst["pay-info"]
        );
    }

    #[test]
    fn union_aligns_permuted_columns() {
        let mut inst = Instance::new();
        inst.insert(
            "r".into(),
            Relation::from_strs(&["a", "b"], &[&["1", "2"]]).unwrap(),
        );
        inst.insert(
            "s".into(),
            Relation::from_strs(&["b", "a"], &[&["2", "1"], &["4", "3"]]).unwrap(),
        );
        let u = run("r UNION s", &inst).unwrap();
        assert_eq!(
            u,
            Relation::from_strs(&["a", "b"], &[&["1", "2"], &["3", "4"]]).unwrap()
        );
        assert!(union_compatible(&inst["r"], &inst["s"]));
        let m = run("s MINUS r", &inst).unwrap();
        assert_eq!(m, Relation::from_strs(&["b", "a"], &[&["4", "3"]]).unwrap());
    }

    #[test]
    fn null_keys_never_join() {
        let mut inst = Instance::new();
        inst.insert(
            "r".into(),
            Relation::from_strs(&["a", "b"], &[&["1", ""], &["2", "x"]]).unwrap(),
        );
        inst.insert(
            "s".into(),
            Relation::from_strs(&["b", "c"], &[&["", "n"], &["x", "y"]]).unwrap(),
        );
        let j = run("r JOIN s ON (b = b)", &inst).unwrap();
        assert_eq!(
            j,
            Relation::from_strs(&["a", "b", "c"], &[&["2", "x", "y"]]).unwrap()
        );
        let p = run("r JOIN s ON ()", &inst).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.column_names(), ["a", "b", "b(1)", "c"]);
    }

    #[test]
    fn extend_and_errors() {
        let inst = univ_a();
        let r = run("EXTEND pay-info ADD year, year AS 1997", &inst).unwrap();
        assert_eq!(r.arity(), 4);
        assert!(r.rows().iter().all(|row| row[3] == Value::int(1997)));
        assert!(matches!(
            run("EXTEND pay-info ADD x, dept AS 1", &inst),
            Err(Error::DuplicateColumn(_))
        ));
        assert!(matches!(
            run("EXTEND pay-info ADD x, x AS nope", &inst),
            Err(Error::UnknownColumn(_))
        ));
        assert!(matches!(
            run("nothing", &inst),
            Err(Error::UnknownRelation(_))
        ));
    }

    #[test]
    fn semijoin_condition() {
        let mut inst = univ_a();
        inst.insert(
            "depts".into(),
            Relation::from_strs(&["d"], &[&["Math"]]).unwrap(),
        );
        assert_eq!(run("pay-info WHERE dept IN depts", &inst).unwrap().len(), 1);
        assert!(matches!(
            run("pay-info WHERE (dept, category) IN depts", &inst),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn empty_constant() {
        let inst = univ_a();
        assert!(run("EMPTY", &inst).unwrap().is_bottom());
        assert_eq!(
            run("pay-info TIMES EMPTY", &inst).unwrap(),
            inst["pay-info"]
        );
    }
}
