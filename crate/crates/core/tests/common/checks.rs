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

//! One check per property, each driven by a seed. The property suites and
//! the acceptance run share them.

#![allow(dead_code)]

use std::collections::BTreeMap;

use ivecdb::algebra::{eval_term, AlgebraTerm};
use ivecdb::federation::{gamma_oracle, CatalogSource};
use ivecdb::relation::ColumnSpec;
use ivecdb::rewrite::{answer, rewrite};
use ivecdb::schemalog::{
    check_safety, compile_rules, encode, naive_eval, parse_program, Interpretation, Structure,
};
use ivecdb::store::vector_csv;
use ivecdb::vector::{
    check_canonical, matter, parse_instance, vector_dml, VectorDml, VectorRelation, VectorTuple,
};
use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;

use super::*;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// `matter ∘ parse_instance` is the identity on every relation.
pub fn roundtrip(seed: u64) -> Check {
    let mut rng = rng(seed);
    let (schema, inst) = database(&mut rng, "db", Shape::STANDARD);
    let v = parse_instance(&schema, &inst).map_err(|e| e.to_string())?;
    for sig in schema.relations() {
        let back = matter(sig, &v);
        ensure!(
            back == inst[&sig.name],
            "seed {seed}: relation {} changed",
            sig.name
        );
    }
    Ok(())
}

fn rewrite_only_reads_the_store(term: &AlgebraTerm, schema: &Schema) -> Check {
    let rewritten = rewrite(term, schema).map_err(|e| e.to_string())?;
    let bases = rewritten.base_names();
    ensure!(
        bases.iter().all(|b| *b == schema.name),
        "rewrite of {term:?} reads {bases:?}"
    );
    Ok(())
}

/// `answer(t, parse_instance(A)) = eval_term(t, A)` for one random term.
/// `full` admits MINUS, EXTEND, single tuples and desugared updates.
pub fn rewriting(seed: u64, full: bool) -> Check {
    let mut rng = rng(seed);
    let (schema, inst) = database(&mut rng, "db", Shape::STANDARD);
    let v = parse_instance(&schema, &inst).map_err(|e| e.to_string())?;
    let mut gen = TermGen::new(&schema, &inst, full);
    let term = loop {
        let t = if full && rng.gen_bool(0.2) {
            gen.update(&mut rng)
        } else {
            {
                let depth = rng.gen_range(1..=4);
                gen.term(&mut rng, depth).0
            }
        };
        if is_spju(&t) != full {
            break t;
        }
    };
    let direct = eval_term(&term, &inst).map_err(|e| format!("seed {seed}: direct: {e}"))?;
    let via =
        answer(&term, &v, &schema).map_err(|e| format!("seed {seed}: answer {term:?}: {e}"))?;
    ensure!(
        via == direct,
        "seed {seed}: {term:?}\nanswer {via:?}\ndirect {direct:?}"
    );
    rewrite_only_reads_the_store(&term, &schema)
}

/// `era_gamma = gamma_oracle` on one random federation and pattern.
pub fn gamma(seed: u64) -> Check {
    let mut rng = rng(seed);
    let (_, fed) = federation(&mut rng, Shape::STANDARD);
    let k = rng.gen_range(0..=3);
    let p = pattern(&mut rng, &fed, k);
    let s = fed.call_level(2).map_err(|e| e.to_string())?.clone();
    // Either every relation or a random subset of them.
    let s = if rng.gen_bool(0.5) {
        s
    } else {
        let keep: Vec<_> = s
            .rows()
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .cloned()
            .collect();
        ivecdb::relation::Relation::from_rows(s.header().to_vec(), keep).unwrap()
    };
    let got = fed.era_gamma(&p, &s).map_err(|e| e.to_string())?;
    let want = gamma_oracle(&fed, &p, &s).map_err(|e| e.to_string())?;
    ensure!(got.rows() == want.rows(), "seed {seed}: pattern {p:?}");
    ensure!(
        got.arity() == 2 + 2 * k,
        "seed {seed}: arity {}",
        got.arity()
    );
    Ok(())
}

/// On a federation where every relation and attribute is really used, the
/// `call_1..3` read off `call_4` equal the catalog-sourced ones. Returns
/// `Ok(false)` when the generated federation does not qualify.
pub fn catalog_chain(seed: u64) -> Result<bool, String> {
    let mut rng = rng(seed);
    let (dbs, fed) = federation(&mut rng, Shape::STANDARD);
    if !dbs.iter().all(|(s, i)| really_used(s, i)) {
        return Ok(false);
    }
    let cat = fed.clone().with_catalog_source(CatalogSource::Catalog);
    for level in 1..=3 {
        let derived = fed.call_level(level).map_err(|e| e.to_string())?;
        let listed = cat.call_level(level).map_err(|e| e.to_string())?;
        ensure!(derived == listed, "seed {seed}: call_{level} differs");
    }
    Ok(true)
}

/// Generates a database satisfying the usage condition, retrying seeds.
pub fn catalog_chain_qualified(seed: u64) -> Check {
    for attempt in 0..1000u64 {
        if catalog_chain(seed.wrapping_mul(1000).wrapping_add(attempt))? {
            return Ok(());
        }
    }
    Err(format!("seed {seed}: no qualifying federation"))
}

/// Adding a column leaves the stored quadruples byte-identical; dropping
/// one removes exactly its `(r-name, a-name)` quadruples.
pub fn schema_flexibility(seed: u64) -> Check {
    let mut rng = rng(seed);
    let (schema, inst) = database(&mut rng, "db", Shape::STANDARD);
    let v = parse_instance(&schema, &inst).map_err(|e| e.to_string())?;
    let sig = schema.relations().choose(&mut rng).unwrap();
    let before = vector_csv(&v);

    let fresh = COLUMNS.iter().find(|c| sig.column_index(c).is_none());
    if let Some(c) = fresh {
        let op = VectorDml::AddColumn {
            relation: sig.name.clone(),
            column: ColumnSpec::named(*c),
        };
        let (s2, v2) = vector_dml(&schema, &v, &op).map_err(|e| e.to_string())?;
        ensure!(
            vector_csv(&v2) == before,
            "seed {seed}: add-column touched the store"
        );
        ensure!(
            s2.require(&sig.name).unwrap().arity() == sig.arity() + 1,
            "seed {seed}: catalog"
        );
    }

    if sig.arity() > 1 {
        let col = sig.columns.choose(&mut rng).unwrap().column_name.clone();
        let op = VectorDml::DropColumn {
            relation: sig.name.clone(),
            column: col.clone(),
        };
        let (_, v2) = vector_dml(&schema, &v, &op).map_err(|e| e.to_string())?;
        let expected: Vec<VectorTuple> = v
            .tuples()
            .filter(|t| !(t.r_name == sig.name && t.a_name == col))
            .collect();
        let got: Vec<VectorTuple> = v2.tuples().collect();
        ensure!(
            got == expected,
            "seed {seed}: drop-column of {}.{col}",
            sig.name
        );
    }
    Ok(())
}

fn rebuild(db: &str, tuples: impl IntoIterator<Item = VectorTuple>) -> Option<VectorRelation> {
    let mut v = VectorRelation::new(db);
    for t in tuples {
        v.insert(t).ok()?;
    }
    Some(v)
}

/// `check_canonical` accepts the parsed store and rejects it after one
/// quadruple is removed or mutated.
pub fn canonical(seed: u64) -> Check {
    let mut rng = rng(seed);
    let (schema, inst) = loop {
        let d = database(&mut rng, "db", Shape::STANDARD);
        if d.1.values().any(|r| !r.is_empty()) {
            break d;
        }
    };
    let v = parse_instance(&schema, &inst).map_err(|e| e.to_string())?;
    ensure!(
        check_canonical(&schema, &v, &inst),
        "seed {seed}: parsed store rejected"
    );

    let tuples: Vec<VectorTuple> = v.tuples().collect();
    let victim = rng.gen_range(0..tuples.len());
    let kind = rng.gen_range(0..5);
    let mut changed = tuples.clone();
    let label;
    match kind {
        0 => {
            changed.remove(victim);
            label = "remove";
        }
        1 => {
            let t = &mut changed[victim];
            t.value = loop {
                let x = value(&mut rng, true);
                if x != t.value {
                    break x;
                }
            };
            label = "value";
        }
        2 => {
            let t = &mut changed[victim];
            let other = COLUMNS
                .iter()
                .chain(["zz"].iter())
                .filter(|a| **a != t.a_name)
                .choose(&mut rng)
                .unwrap();
            t.a_name = other.to_string();
            label = "a-name";
        }
        3 => {
            let t = &mut changed[victim];
            t.r_name = if t.r_name == "r0" {
                "r1".into()
            } else {
                "r0".into()
            };
            label = "r-name";
        }
        _ => {
            let t = &mut changed[victim];
            t.t_index =
                ivecdb::hash::hash_tuple(&[ivecdb::value::Value::text(format!("other{seed}"))]);
            label = "t-index";
        }
    }
    // A mutation that collides with an existing key cannot even be stored,
    // which is a rejection in its own right.
    if let Some(m) = rebuild("db", changed) {
        ensure!(
            !check_canonical(&schema, &m, &inst),
            "seed {seed}: {label} mutation of quadruple {victim} accepted"
        );
    }
    Ok(())
}

/// Direct satisfaction of a random closed formula equals the Tarskian
/// truth of its encoding. Returns the active-domain size.
pub fn encoding(seed: u64) -> Result<usize, String> {
    let mut rng = rng(seed);
    let fed = loop {
        let (_, fed) = federation(&mut rng, Shape::TINY);
        if Structure::of_federation(&fed).domain().len() <= 30 {
            break fed;
        }
    };
    let m = Structure::of_federation(&fed);
    let f = FormulaGen::new(&fed).closed(&mut rng);
    let g = BTreeMap::new();
    let direct = m
        .satisfies(&f, &g)
        .map_err(|e| format!("seed {seed}: {f}: {e}"))?;
    let enc = encode(&f).map_err(|e| format!("seed {seed}: encode {f}: {e}"))?;
    let tarski = Interpretation::of_structure(&m)
        .satisfies(&enc, &g)
        .map_err(|e| format!("seed {seed}: {enc}: {e}"))?;
    ensure!(
        direct == tarski,
        "seed {seed}: {f}\n  encoded {enc}\n  direct {direct}, encoded {tarski}"
    );
    Ok(m.domain().len())
}

/// Compiled algebra and the naive evaluator agree on a random safe
/// program. Returns `Ok(false)` when the program is not safe.
pub fn compile_vs_naive(seed: u64) -> Result<bool, String> {
    let mut rng = rng(seed);
    let (_, fed) = federation(&mut rng, Shape::TINY);
    let text = program(&mut rng, &fed);
    let rules = parse_program(&text).map_err(|e| format!("seed {seed}: {text}: {e}"))?;
    if rules.iter().any(|r| check_safety(r).is_err()) {
        return Ok(false);
    }
    let compiled = match compile_rules(&rules, &fed) {
        Ok(c) => c,
        Err(ivecdb::Error::Unsupported(_)) => return Ok(false),
        Err(e) => return Err(format!("seed {seed}: compile {text}: {e}")),
    };
    let naive = naive_eval(&rules, &fed).map_err(|e| format!("seed {seed}: naive {text}: {e}"))?;
    for (p, term) in &compiled {
        let got = fed
            .eval(term, None)
            .map_err(|e| format!("seed {seed}: eval {p}: {e}"))?;
        ensure!(
            Some(&got) == naive.get(p),
            "seed {seed}: {p} differs for\n{text}\ncompiled {got:?}\nnaive {:?}",
            naive.get(p)
        );
    }
    Ok(true)
}

/// A selection over a product of up to three factors gives the same
/// relation as filtering the fully formed product.
pub fn select_over_product(seed: u64) -> Check {
    let mut rng = rng(seed);
    let (schema, inst) = database(&mut rng, "db", Shape::STANDARD);
    let mut gen = TermGen::new(&schema, &inst, false);
    let n = rng.gen_range(2..=3);
    let mut product = gen.term(&mut rng, 1).0;
    for _ in 1..n {
        product = product.times(gen.term(&mut rng, 1).0);
    }
    let plain = eval_term(&product, &inst).map_err(|e| e.to_string())?;
    let cols: Vec<String> = plain
        .column_names()
        .into_iter()
        .map(str::to_owned)
        .collect();
    let mut cond = condition(&mut rng, &cols, 2);
    for _ in 0..rng.gen_range(0..=3) {
        let (a, b) = (
            cols.choose(&mut rng).unwrap(),
            cols.choose(&mut rng).unwrap(),
        );
        cond = cond.and(ivecdb::algebra::Condition::cols_eq(a.clone(), b.clone()));
    }
    let fast =
        eval_term(&product.clone().select(cond.clone()), &inst).map_err(|e| e.to_string())?;
    // Projecting onto every column hides the product from the selection.
    let slow = eval_term(&product.project(&cols).select(cond), &inst).map_err(|e| e.to_string())?;
    ensure!(fast == slow, "seed {seed}: selection over product differs");
    Ok(())
}

/// Saving, loading and saving again gives byte-identical files and the
/// same store.
pub fn persistence(seed: u64) -> Check {
    use ivecdb::store::{load_database, save_database};
    let mut rng = rng(seed);
    let (schema, inst) = database(&mut rng, "db", Shape::STANDARD);
    let v = parse_instance(&schema, &inst).map_err(|e| e.to_string())?;
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    save_database(a.path(), &schema, &v).map_err(|e| e.to_string())?;
    let (s2, v2) = load_database(a.path(), "db").map_err(|e| e.to_string())?;
    ensure!(s2 == schema, "seed {seed}: catalog changed");
    ensure!(v2 == v, "seed {seed}: store changed");
    save_database(b.path(), &s2, &v2).map_err(|e| e.to_string())?;
    for f in ["catalog.json", "vector.csv"] {
        let x = std::fs::read(a.path().join("db").join(f)).unwrap();
        let y = std::fs::read(b.path().join("db").join(f)).unwrap();
        ensure!(x == y, "seed {seed}: {f} differs");
    }
    Ok(())
}
