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

//! Acceptance run: one line per criterion, non-zero exit on any failure.

mod common;

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::checks;
use ivecdb::federation::{gamma_oracle, Federation, Member, Pattern};
use ivecdb::relation::Relation;
use ivecdb::sample::university_federation;
use ivecdb::store::{ingest, CatalogDocument};
use ivecdb::value::Value;

const GOLDEN_LIMIT: Duration = Duration::from_secs(1);
const ROUNDTRIPS: u64 = 1000;
const SPJU_TERMS: u64 = 500;
const FULL_TERMS: u64 = 100;
const REWRITE_LIMIT: Duration = Duration::from_secs(60);
const RANDOM_FEDERATIONS: u64 = 200;
const FORMULAS: u64 = 300;
const ENCODING_LIMIT: Duration = Duration::from_secs(120);
const MAX_DOMAIN: usize = 30;
const CATALOG_FEDERATIONS: u64 = 200;
const FLEX_STORES: u64 = 200;
const MUTATIONS: u64 = 100;

/// Curated patterns over the university federation, k = 0..3.
const PATTERNS: [&str; 50] = [
    "",
    "_->_",
    "category->_",
    "_->Prof",
    "category->Prof",
    "avg-sal->_",
    "_->'35,000'",
    "dept->CS",
    "CS->_",
    "Math->'65,000'",
    "category->Secretary",
    "_->Secretary",
    "nope->_",
    "_->nope",
    "category->'Assist. Prof'",
    "avg-sal->'70,000'",
    "_->Secretary,_->_",
    "category->Prof,_->_",
    "category->_,avg-sal->_",
    "_->Prof,avg-sal->_",
    "category->Prof,dept->CS",
    "category->Prof,dept->Math",
    "_->_,_->_",
    "dept->_,category->_",
    "category->'Assoc. Prof',CS->_",
    "CS->_,Math->_",
    "_->'65,000',category->_",
    "category->Secretary,avg-sal->'30,000'",
    "category->Secretary,avg-sal->'35,000'",
    "_->Prof,_->'65,000'",
    "avg-sal->_,avg-sal->_",
    "category->_,nope->_",
    "_->CS,_->Prof",
    "Math->_,category->'Assist. Prof'",
    "_->_,dept->Math",
    "category->Prof,_->Prof",
    "_->_,_->_,_->_",
    "category->_,dept->_,avg-sal->_",
    "category->Prof,CS->_,Math->_",
    "_->Secretary,_->_,_->_",
    "category->_,avg-sal->_,_->Prof",
    "dept->CS,category->_,avg-sal->_",
    "_->'65,000',_->_,category->_",
    "category->Prof,category->Prof,category->Prof",
    "CS->'80,000',Math->_,category->_",
    "_->nope,_->_,_->_",
    "avg-sal->'40,000',category->_,_->_",
    "category->'Assoc. Prof',dept->CS,avg-sal->'60,000'",
    "_->Prof,dept->_,_->'70,000'",
    "category->_,_->_,Math->'42,000'",
];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn count_failures(n: u64, mut f: impl FnMut(u64) -> Result<(), String>) -> (u64, Option<String>) {
    let mut failures = 0;
    let mut first = None;
    for seed in 0..n {
        if let Err(e) = f(seed) {
            failures += 1;
            first.get_or_insert(e);
        }
    }
    (failures, first)
}

fn summary(label: &str, n: u64, failures: u64, first: Option<String>) -> String {
    match first {
        None => format!("{n} {label}, 0 failures"),
        Some(e) => format!("{n} {label}, {failures} failures; first: {e}"),
    }
}

fn golden() -> Outcome {
    let start = Instant::now();
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/university");
    let run = || -> ivecdb::Result<Relation> {
        let doc = CatalogDocument::load(&data.join("catalog.json"))?;
        let members = ingest(&doc, &data)?
            .into_iter()
            .map(|(s, v)| Member::new(s, v))
            .collect::<ivecdb::Result<Vec<_>>>()?;
        let fed = Federation::new(members)?;
        let s = fed.call_level(2)?.clone();
        fed.era_gamma(&Pattern::parse("_->Secretary,_->_")?, &s)
    };
    let got = match run() {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let elapsed = start.elapsed();
    let table: [[&str; 6]; 5] = [
        [
            "univ_A",
            "pay-info",
            "category",
            "Secretary",
            "category",
            "Secretary",
        ],
        ["univ_A", "pay-info", "category", "Secretary", "dept", "CS"],
        [
            "univ_A",
            "pay-info",
            "category",
            "Secretary",
            "avg-sal",
            "35,000",
        ],
        [
            "univ_C",
            "ece",
            "category",
            "Secretary",
            "category",
            "Secretary",
        ],
        [
            "univ_C",
            "ece",
            "category",
            "Secretary",
            "avg-sal",
            "30,000",
        ],
    ];
    let want: std::collections::BTreeSet<Vec<Value>> = table
        .iter()
        .map(|r| r.iter().map(|c| Value::text(*c)).collect())
        .collect();
    let exact = got.arity() == 6 && *got.rows() == want;
    outcome(
        exact && elapsed < GOLDEN_LIMIT,
        format!(
            "{} rows x {} columns, exact={exact}, {elapsed:.2?} (limit {GOLDEN_LIMIT:?})",
            got.len(),
            got.arity()
        ),
    )
}

fn roundtrip() -> Outcome {
    let (failures, first) = count_failures(ROUNDTRIPS, checks::roundtrip);
    outcome(
        failures == 0,
        summary("schema/instance pairs", ROUNDTRIPS, failures, first),
    )
}

fn rewriting() -> Outcome {
    let start = Instant::now();
    let (f1, e1) = count_failures(SPJU_TERMS, |s| checks::rewriting(s, false));
    let (f2, e2) = count_failures(FULL_TERMS, |s| checks::rewriting(10_000 + s, true));
    let elapsed = start.elapsed();
    outcome(
        f1 + f2 == 0 && elapsed < REWRITE_LIMIT,
        format!(
            "{}; {}; {elapsed:.2?} (limit {REWRITE_LIMIT:?})",
            summary("SPJU terms", SPJU_TERMS, f1, e1),
            summary("full terms", FULL_TERMS, f2, e2)
        ),
    )
}

fn gamma() -> Outcome {
    let fed = university_federation().expect("sample federation builds");
    let s = fed.call_level(2).expect("call_2").clone();
    let mut mismatches = Vec::new();
    for text in PATTERNS {
        let p = Pattern::parse(text).expect("curated pattern parses");
        let same = match (fed.era_gamma(&p, &s), gamma_oracle(&fed, &p, &s)) {
            (Ok(a), Ok(b)) => a.rows() == b.rows(),
            _ => false,
        };
        if !same {
            mismatches.push(text);
        }
    }
    let (failures, first) = count_failures(RANDOM_FEDERATIONS, checks::gamma);
    outcome(
        mismatches.is_empty() && failures == 0,
        format!(
            "{} curated patterns, {} mismatches {mismatches:?}; {}",
            PATTERNS.len(),
            mismatches.len(),
            summary("random federations", RANDOM_FEDERATIONS, failures, first)
        ),
    )
}

fn encoding() -> Outcome {
    let start = Instant::now();
    let mut largest = 0;
    let (failures, first) = count_failures(FORMULAS, |s| {
        let d = checks::encoding(s)?;
        largest = largest.max(d);
        Ok(())
    });
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && largest <= MAX_DOMAIN && elapsed < ENCODING_LIMIT,
        format!(
            "{}; largest active domain {largest} (limit {MAX_DOMAIN}); {elapsed:.2?} (limit {ENCODING_LIMIT:?})",
            summary("closed formulas", FORMULAS, failures, first)
        ),
    )
}

fn catalog_chain() -> Outcome {
    let (failures, first) = count_failures(CATALOG_FEDERATIONS, checks::catalog_chain_qualified);
    outcome(
        failures == 0,
        summary(
            "fully used federations",
            CATALOG_FEDERATIONS,
            failures,
            first,
        ),
    )
}

fn flexibility() -> Outcome {
    let (failures, first) = count_failures(FLEX_STORES, checks::schema_flexibility);
    outcome(
        failures == 0,
        summary("stores", FLEX_STORES, failures, first),
    )
}

fn canonical() -> Outcome {
    let (failures, first) = count_failures(MUTATIONS, checks::canonical);
    outcome(
        failures == 0,
        summary("mutation cases", MUTATIONS, failures, first),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("golden gamma table", golden),
        ("matter/parse roundtrip", roundtrip),
        ("rewriting soundness", rewriting),
        ("gamma equivalence", gamma),
        ("encoding soundness", encoding),
        ("catalog chain", catalog_chain),
        ("schema flexibility", flexibility),
        ("canonical-model check", canonical),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {}. {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
