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

//! Seeded generators shared by the property suites and the acceptance run.

#![allow(dead_code)]

use std::collections::BTreeSet;

use ivecdb::algebra::{
    desugar_update, eval_term, AlgebraTerm, Condition, Expr, Operand, UpdateStatement,
};
use ivecdb::federation::{Federation, Member, Pattern, PatternItem};
use ivecdb::relation::{ColumnSpec, Instance, Relation, RelationSignature, Schema};
use ivecdb::schemalog::{SlAtom, SlFormula, SlTerm};
use ivecdb::value::{Comparison, Value};
use ivecdb::vector::parse_instance;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub const COLUMNS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];
const TEXTS: [&str; 4] = ["x", "y", "z", "Prof"];
const COMPARISONS: [Comparison; 6] = [
    Comparison::Eq,
    Comparison::Ne,
    Comparison::Lt,
    Comparison::Le,
    Comparison::Gt,
    Comparison::Ge,
];

/// Size limits of generated databases.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub relations: usize,
    pub columns: usize,
    pub tuples: usize,
    pub null_rate: f64,
    pub numbers: bool,
}

impl Shape {
    /// Up to 4 relations, 5 columns, 20 tuples, about 10% Nulls.
    pub const STANDARD: Shape = Shape {
        relations: 4,
        columns: 5,
        tuples: 20,
        null_rate: 0.1,
        numbers: true,
    };

    /// Small enough that the active domain stays near 30.
    pub const TINY: Shape = Shape {
        relations: 2,
        columns: 2,
        tuples: 2,
        null_rate: 0.1,
        numbers: false,
    };
}

pub fn value(rng: &mut StdRng, numbers: bool) -> Value {
    if numbers && rng.gen_bool(0.4) {
        Value::int(rng.gen_range(1..4))
    } else {
        Value::text(*TEXTS.choose(rng).unwrap())
    }
}

pub fn schema(rng: &mut StdRng, db: &str, shape: Shape) -> Schema {
    let n = rng.gen_range(1..=shape.relations);
    let relations = (0..n)
        .map(|i| {
            let k = rng.gen_range(1..=shape.columns);
            let mut cols = COLUMNS.to_vec();
            cols.shuffle(rng);
            cols.truncate(k);
            RelationSignature::simple(&format!("r{i}"), &cols).unwrap()
        })
        .collect();
    Schema::new(db, relations).unwrap()
}

/// Random tuples with about `null_rate` Nulls and never an all-Null row.
pub fn instance(rng: &mut StdRng, schema: &Schema, shape: Shape) -> Instance {
    schema
        .relations()
        .iter()
        .map(|sig| {
            let n = rng.gen_range(0..=shape.tuples);
            let rows = (0..n).map(|_| {
                let mut row: Vec<Value> = (0..sig.arity())
                    .map(|_| {
                        if rng.gen_bool(shape.null_rate) {
                            Value::Null
                        } else {
                            value(rng, shape.numbers)
                        }
                    })
                    .collect();
                if row.iter().all(Value::is_null) {
                    let i = rng.gen_range(0..row.len());
                    row[i] = value(rng, shape.numbers);
                }
                row
            });
            let rows: Vec<_> = rows.collect();
            (
                sig.name.clone(),
                Relation::from_rows(sig.columns.clone(), rows).unwrap(),
            )
        })
        .collect()
}

pub fn database(rng: &mut StdRng, db: &str, shape: Shape) -> (Schema, Instance) {
    let s = schema(rng, db, shape);
    let i = instance(rng, &s, shape);
    (s, i)
}

/// Every relation holds a tuple and every column a non-Null value.
pub fn really_used(schema: &Schema, inst: &Instance) -> bool {
    schema.relations().iter().all(|sig| {
        let rel = &inst[&sig.name];
        !rel.is_empty() && (0..sig.arity()).all(|i| rel.rows().iter().any(|r| !r[i].is_null()))
    })
}

pub fn federation_of(dbs: &[(Schema, Instance)]) -> Federation {
    let members = dbs
        .iter()
        .map(|(s, i)| Member::new(s.clone(), parse_instance(s, i).unwrap()).unwrap())
        .collect();
    Federation::new(members).unwrap()
}

/// One to three members named `db0`, `db1`, ...
pub fn federation(rng: &mut StdRng, shape: Shape) -> (Vec<(Schema, Instance)>, Federation) {
    let n = rng.gen_range(1..=3);
    let dbs: Vec<_> = (0..n)
        .map(|i| database(rng, &format!("db{i}"), shape))
        .collect();
    let fed = federation_of(&dbs);
    (dbs, fed)
}

pub mod checks;

// -- algebra terms ---------------------------------------------------------

fn names(r: &Relation) -> Vec<String> {
    r.column_names().into_iter().map(str::to_owned).collect()
}

pub fn condition(rng: &mut StdRng, cols: &[String], depth: usize) -> Condition {
    if cols.is_empty() {
        return if rng.gen_bool(0.5) {
            Condition::True
        } else {
            Condition::False
        };
    }
    match rng.gen_range(0..if depth == 0 { 2 } else { 5 }) {
        0 => Condition::cmp(
            Operand::column(cols.choose(rng).unwrap()),
            *COMPARISONS.choose(rng).unwrap(),
            Operand::constant(value(rng, true)),
        ),
        1 => Condition::cmp(
            Operand::column(cols.choose(rng).unwrap()),
            *COMPARISONS.choose(rng).unwrap(),
            Operand::column(cols.choose(rng).unwrap()),
        ),
        2 => condition(rng, cols, depth - 1).and(condition(rng, cols, depth - 1)),
        3 => condition(rng, cols, depth - 1).or(condition(rng, cols, depth - 1)),
        _ => condition(rng, cols, depth - 1).not(),
    }
}

/// Builds random terms that evaluate without error over `inst`.
pub struct TermGen<'a> {
    pub schema: &'a Schema,
    pub inst: &'a Instance,
    /// Allow MINUS, EXTEND and single tuples besides the SPJU operators.
    pub full: bool,
    fresh: usize,
}

impl<'a> TermGen<'a> {
    pub fn new(schema: &'a Schema, inst: &'a Instance, full: bool) -> Self {
        TermGen {
            schema,
            inst,
            full,
            fresh: 0,
        }
    }

    fn eval(&self, t: &AlgebraTerm) -> Option<Relation> {
        eval_term(t, self.inst).ok()
    }

    fn base(&self, rng: &mut StdRng) -> (AlgebraTerm, Relation) {
        let sig = self.schema.relations().choose(rng).unwrap();
        let t = AlgebraTerm::base(&sig.name);
        let r = self.eval(&t).unwrap();
        (t, r)
    }

    /// A term of depth at most `depth` together with its value.
    pub fn term(&mut self, rng: &mut StdRng, depth: usize) -> (AlgebraTerm, Relation) {
        if depth == 0 {
            return self.base(rng);
        }
        for _ in 0..8 {
            let (l, lr) = self.term(rng, depth - 1);
            let cols = names(&lr);
            let ops = if self.full { 9 } else { 6 };
            let t = match rng.gen_range(0..ops) {
                0 => l.select(condition(rng, &cols, 2)),
                1 => {
                    let mut keep = cols.clone();
                    keep.shuffle(rng);
                    keep.truncate(rng.gen_range(0..=cols.len()));
                    l.project(&keep)
                }
                2 => {
                    let (r, rr) = self.term(rng, depth - 1);
                    let rcols = names(&rr);
                    let pairs: Vec<(String, String)> = if cols.is_empty() || rcols.is_empty() {
                        Vec::new()
                    } else {
                        (0..rng.gen_range(0..=2))
                            .map(|_| {
                                (
                                    cols.choose(rng).unwrap().clone(),
                                    rcols.choose(rng).unwrap().clone(),
                                )
                            })
                            .collect()
                    };
                    l.join(r, &pairs)
                }
                3 => {
                    let (r, rr) = self.term(rng, depth - 1);
                    let rcols = names(&rr);
                    let mut lcols = cols.clone();
                    lcols.shuffle(rng);
                    let r = if lcols.iter().all(|c| rcols.contains(c)) {
                        r.project(&lcols)
                    } else if rng.gen_bool(0.8) {
                        l.clone().select(condition(rng, &cols, 1)).project(&lcols)
                    } else {
                        r
                    };
                    l.union(r)
                }
                4 => match cols.choose(rng) {
                    Some(c) => {
                        let to = if rng.gen_bool(0.5) {
                            COLUMNS.choose(rng).unwrap().to_string()
                        } else {
                            self.fresh += 1;
                            format!("n{}", self.fresh)
                        };
                        l.rename(c, to)
                    }
                    None => l,
                },
                5 => {
                    if rng.gen_bool(0.3) {
                        let (r, _) = self.term(rng, depth - 1);
                        l.times(r)
                    } else {
                        l.select(condition(rng, &cols, 1))
                    }
                }
                6 => {
                    let r = if rng.gen_bool(0.7) {
                        l.clone().select(condition(rng, &cols, 1))
                    } else {
                        self.term(rng, depth - 1).0
                    };
                    l.minus(r)
                }
                7 => {
                    self.fresh += 1;
                    let expr = match rng.gen_range(0..3) {
                        0 if !cols.is_empty() => Expr::Column(cols.choose(rng).unwrap().clone()),
                        1 => Expr::Hash(cols.iter().map(|c| Expr::Column(c.clone())).collect()),
                        _ => Expr::Const(value(rng, true)),
                    };
                    l.extend(ColumnSpec::named(format!("x{}", self.fresh)), expr)
                }
                _ => {
                    if rng.gen_bool(0.5) {
                        let row: Vec<(ColumnSpec, Value)> = cols
                            .iter()
                            .map(|c| (ColumnSpec::named(c.clone()), value(rng, true)))
                            .collect();
                        l.union(AlgebraTerm::SingleTuple(row))
                    } else {
                        l.times(AlgebraTerm::Empty)
                    }
                }
            };
            if let Some(r) = self.eval(&t) {
                return (t, r);
            }
        }
        self.base(rng)
    }

    /// The desugared form of a random update statement.
    pub fn update(&mut self, rng: &mut StdRng) -> AlgebraTerm {
        let sig = self.schema.relations().choose(rng).unwrap();
        let cols: Vec<String> = sig.columns.iter().map(|c| c.column_name.clone()).collect();
        let relation = sig.name.clone();
        let stmt = match rng.gen_range(0..4) {
            0 => UpdateStatement::Delete {
                relation,
                condition: condition(rng, &cols, 2),
            },
            1 => UpdateStatement::InsertValues {
                relation,
                values: cols.iter().map(|_| value(rng, true)).collect(),
            },
            2 => UpdateStatement::Update {
                assignments: vec![(
                    cols.choose(rng).unwrap().clone(),
                    Expr::Const(value(rng, true)),
                )],
                condition: condition(rng, &cols, 1),
                relation,
            },
            _ => UpdateStatement::InsertQuery {
                query: AlgebraTerm::base(&relation).select(condition(rng, &cols, 1)),
                relation,
            },
        };
        desugar_update(&stmt, self.schema).unwrap()
    }
}

pub fn is_spju(t: &AlgebraTerm) -> bool {
    let mut ok = true;
    t.walk(&mut |n| {
        if matches!(
            n,
            AlgebraTerm::Minus(..)
                | AlgebraTerm::Extend { .. }
                | AlgebraTerm::Empty
                | AlgebraTerm::SingleTuple(_)
        ) {
            ok = false;
        }
    });
    ok
}

// -- patterns ---------------------------------------------------------------

/// Attributes and values occurring in `fed`, plus one of each that does not.
fn vocabulary(fed: &Federation) -> (Vec<String>, Vec<Value>) {
    let mut attrs = BTreeSet::from(["zz".to_string()]);
    let mut vals = BTreeSet::from([Value::text("nowhere")]);
    for m in fed.members() {
        for (_, _, a, v) in m.store.cells() {
            attrs.insert(a.to_string());
            vals.insert(v.clone());
        }
    }
    (attrs.into_iter().collect(), vals.into_iter().collect())
}

pub fn pattern(rng: &mut StdRng, fed: &Federation, k: usize) -> Pattern {
    let (attrs, vals) = vocabulary(fed);
    Pattern(
        (0..k)
            .map(|_| {
                let a = rng
                    .gen_bool(0.5)
                    .then(|| attrs.choose(rng).unwrap().as_str());
                let v = rng.gen_bool(0.5).then(|| vals.choose(rng).unwrap().clone());
                PatternItem::new(a, v)
            })
            .collect(),
    )
}

// -- SchemaLog -------------------------------------------------------------

/// Symbols a formula may mention: names, values and tuple ids of `fed`,
/// plus an outsider.
pub fn symbols(fed: &Federation) -> Vec<Value> {
    let mut out = BTreeSet::from([Value::text("zz")]);
    for m in fed.members() {
        out.insert(Value::text(m.name()));
        for (r, t, a, v) in m.store.cells() {
            out.extend([
                Value::text(r),
                Value::text(t.as_str()),
                Value::text(a),
                v.clone(),
            ]);
        }
    }
    out.into_iter().collect()
}

/// Database, relation and attribute names of `fed`.
fn names_of(fed: &Federation) -> [Vec<Value>; 3] {
    let mut out: [BTreeSet<Value>; 3] = Default::default();
    for m in fed.members() {
        out[0].insert(Value::text(m.name()));
        for (r, _, a, _) in m.store.cells() {
            out[1].insert(Value::text(r));
            out[2].insert(Value::text(a));
        }
    }
    out.map(|s| s.into_iter().collect())
}

pub struct FormulaGen {
    syms: Vec<Value>,
    /// Names by position: databases, relations, attributes.
    names: [Vec<Value>; 3],
    next: usize,
    quantifiers: usize,
}

impl FormulaGen {
    pub fn new(fed: &Federation) -> Self {
        FormulaGen {
            syms: symbols(fed),
            names: names_of(fed),
            next: 0,
            quantifiers: 0,
        }
    }

    fn term(&self, rng: &mut StdRng, bound: &[String]) -> SlTerm {
        match rng.gen_range(0..10) {
            0..=4 if !bound.is_empty() => SlTerm::var(bound.choose(rng).unwrap()),
            5 if !bound.is_empty() => {
                SlTerm::App("Hash".into(), vec![SlTerm::var(bound.choose(rng).unwrap())])
            }
            _ => SlTerm::Sym(self.syms.choose(rng).unwrap().clone()),
        }
    }

    /// Like `term`, but constants are usually names of the given kind.
    fn named(&self, rng: &mut StdRng, bound: &[String], kind: usize) -> SlTerm {
        match self.names[kind].choose(rng) {
            Some(n) if rng.gen_bool(0.4) => SlTerm::Sym(n.clone()),
            _ => self.term(rng, bound),
        }
    }

    fn atom(&self, rng: &mut StdRng, bound: &[String]) -> SlAtom {
        let mut db = self.named(rng, bound, 0);
        let rel = self.named(rng, bound, 1);
        let attr = self.named(rng, bound, 2);
        let (tid, val) = (self.term(rng, bound), self.term(rng, bound));
        // Functional terms never denote databases.
        if let SlTerm::App(_, args) = db {
            db = args.into_iter().next().unwrap();
        }
        match rng.gen_range(0..6) {
            0 => SlAtom::Db(db),
            1 => SlAtom::Rel { db, rel },
            2 => SlAtom::Attr { db, rel, attr },
            _ => SlAtom::Quad {
                db,
                rel,
                tid,
                attr,
                val,
            },
        }
    }

    /// A closed formula with at most three quantifiers.
    pub fn closed(&mut self, rng: &mut StdRng) -> SlFormula {
        self.quantifiers = 0;
        self.formula(rng, &mut Vec::new(), 4)
    }

    fn formula(&mut self, rng: &mut StdRng, bound: &mut Vec<String>, depth: usize) -> SlFormula {
        let leaf = depth == 0 || rng.gen_bool(0.2);
        if leaf {
            return if rng.gen_bool(0.8) {
                SlFormula::Atom(self.atom(rng, bound))
            } else {
                SlFormula::Cmp(
                    self.term(rng, bound),
                    *COMPARISONS.choose(rng).unwrap(),
                    self.term(rng, bound),
                )
            };
        }
        match rng.gen_range(0..7) {
            0 => self.formula(rng, bound, depth - 1).not(),
            1 => self
                .formula(rng, bound, depth - 1)
                .and(self.formula(rng, bound, depth - 1)),
            2 => self
                .formula(rng, bound, depth - 1)
                .or(self.formula(rng, bound, depth - 1)),
            3 => {
                let p = rng
                    .gen_bool(0.8)
                    .then(|| Box::new(self.formula(rng, bound, depth - 1)));
                SlFormula::Implies(p, Box::new(self.formula(rng, bound, depth - 1)))
            }
            _ if self.quantifiers < 3 => {
                self.quantifiers += 1;
                self.next += 1;
                let x = format!("V{}", self.next);
                bound.push(x.clone());
                let body = Box::new(self.formula(rng, bound, depth - 1));
                bound.pop();
                if rng.gen_bool(0.6) {
                    SlFormula::Exists(x, body)
                } else {
                    SlFormula::Forall(x, body)
                }
            }
            _ => SlFormula::Atom(self.atom(rng, bound)),
        }
    }
}

/// A random program over `fed` whose rules define `p0` and `p1`, where
/// `p1` may use `p0`. Rules are not checked for safety.
pub fn program(rng: &mut StdRng, fed: &Federation) -> String {
    let syms = symbols(fed);
    let sym = |rng: &mut StdRng| SlTerm::Sym(syms.choose(rng).unwrap().clone()).to_string();
    let dbs: Vec<String> = fed.members().iter().map(|m| m.name().to_string()).collect();
    let [_, rels, attrs] = names_of(fed);
    let pick_name = |rng: &mut StdRng, pool: &[Value]| match pool.choose(rng) {
        Some(v) if rng.gen_bool(0.8) => SlTerm::Sym(v.clone()).to_string(),
        _ => sym(rng),
    };
    let mut text = String::new();
    let mut arity = [0usize; 2];
    for (p, arity) in arity.iter_mut().enumerate() {
        *arity = rng.gen_range(0..=2);
        for _ in 0..rng.gen_range(1..=2) {
            let mut vars: Vec<String> = Vec::new();
            let mut body = Vec::new();
            for m in 0..rng.gen_range(1..=2) {
                let db = if rng.gen_bool(0.3) {
                    vars.push(format!("D{m}"));
                    format!("D{m}")
                } else {
                    dbs.choose(rng).unwrap().clone()
                };
                let term =
                    |rng: &mut StdRng, name: String, pool: &[Value], vars: &mut Vec<String>| {
                        if rng.gen_bool(0.6) {
                            vars.push(name.clone());
                            name
                        } else if pool.is_empty() {
                            sym(rng)
                        } else {
                            pick_name(rng, pool)
                        }
                    };
                let rel = term(rng, format!("R{m}"), &rels, &mut vars);
                let attr = term(rng, format!("A{m}"), &attrs, &mut vars);
                let x = ["X", "Y", "Z"].choose(rng).unwrap().to_string();
                let val = term(rng, x, &[], &mut vars);
                body.push(format!("{db}::{rel}[T{m}: {attr} -> {val}]"));
                vars.push(format!("T{m}"));
            }
            if p == 1 && rng.gen_bool(0.5) {
                let args: Vec<String> = (0..arity_of(text.as_str()))
                    .map(|_| vars.choose(rng).unwrap().clone())
                    .collect();
                let neg = if rng.gen_bool(0.4) { "not " } else { "" };
                body.push(format!("{neg}p0({})", args.join(", ")));
            }
            if rng.gen_bool(0.4) {
                let l = vars.choose(rng).unwrap().clone();
                let r = if rng.gen_bool(0.5) {
                    vars.choose(rng).unwrap().clone()
                } else {
                    sym(rng)
                };
                body.push(format!(
                    "{l} {} {r}",
                    COMPARISONS.choose(rng).unwrap().symbol()
                ));
            }
            if rng.gen_bool(0.4) {
                let pick = |rng: &mut StdRng, pool: &[Value]| match rng.gen_range(0..3) {
                    0 => "_".to_string(),
                    1 => vars.choose(rng).unwrap().clone(),
                    _ => pick_name(rng, pool),
                };
                let (db, rel, attr, val) = (
                    dbs.choose(rng).unwrap().clone(),
                    pick(rng, &rels),
                    pick(rng, &attrs),
                    pick(rng, &[]),
                );
                body.push(format!("not {db}::{rel}[_: {attr} -> {val}]"));
            }
            let head: Vec<String> = (0..*arity)
                .map(|_| vars.choose(rng).unwrap().clone())
                .collect();
            let head = if head.is_empty() {
                format!("p{p}")
            } else {
                format!("p{p}({})", head.join(", "))
            };
            text.push_str(&format!("{head} :- {}.\n", body.join(", ")));
        }
    }
    text
}

fn arity_of(text: &str) -> usize {
    let first = text.lines().next().unwrap_or("");
    match first.find('(') {
        Some(i) if i < first.find(":-").unwrap_or(usize::MAX) => {
            first[i..first.find(')').unwrap()].split(',').count()
        }
        _ => 0,
    }
}
