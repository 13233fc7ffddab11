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

use super::*;
use crate::sample::university_federation;

fn texts(rows: &[&[&str]]) -> BTreeSet<Vec<Value>> {
    rows.iter()
        .map(|r| r.iter().map(|c| Value::text(*c)).collect())
        .collect()
}

fn pairs(rows: &[(&str, &str)]) -> Relation {
    Relation::from_rows(
        vec![ColumnSpec::named("d"), ColumnSpec::named("r")],
        rows.iter()
            .map(|(a, b)| vec![Value::text(*a), Value::text(*b)]),
    )
    .unwrap()
}

#[test]
fn catalog_levels_of_the_university_federation() {
    let fed = university_federation().unwrap();
    assert_eq!(fed.call4().len(), 12 + 9 + 8);
    assert_eq!(
        fed.call_level(2).unwrap().rows(),
        &texts(&[
            &["univ_A", "pay-info"],
            &["univ_B", "pay-info"],
            &["univ_C", "CS"],
            &["univ_C", "ece"]
        ])
    );
    assert_eq!(fed.era_delta().unwrap().len(), 3);
    let [rel, tid, attr, val] = fed.sorts();
    assert_eq!(rel.rows(), &texts(&[&["pay-info"], &["CS"], &["ece"]]));
    assert_eq!(tid.len(), 4 + 3 + 2 + 2);
    for a in ["category", "dept", "avg-sal", "CS", "Math"] {
        assert!(attr.rows().contains(&vec![Value::text(a)]));
    }
    assert!(val.rows().contains(&vec![Value::text("Secretary")]));
}

#[test]
fn derived_and_catalog_levels_agree_when_every_relation_holds_data() {
    let fed = university_federation().unwrap();
    let cat = fed.clone().with_catalog_source(CatalogSource::Catalog);
    for level in 1..=3 {
        assert_eq!(
            fed.call_level(level).unwrap(),
            cat.call_level(level).unwrap()
        );
    }
}

#[test]
fn rho_and_alpha() {
    let fed = university_federation().unwrap();
    let s =
        Relation::from_rows(vec![ColumnSpec::named("d")], [vec![Value::text("univ_C")]]).unwrap();
    assert_eq!(
        fed.era_rho(&s).unwrap().rows(),
        &texts(&[&["univ_C", "CS"], &["univ_C", "ece"]])
    );
    let all = fed.era_delta().unwrap();
    assert_eq!(&fed.era_rho(&all).unwrap(), fed.call_level(2).unwrap());
    let alpha = fed.era_alpha(&pairs(&[("univ_C", "ece")])).unwrap();
    assert_eq!(alpha.len(), 2);
    assert!(fed.era_rho(&pairs(&[])).is_err());
}

#[test]
fn gamma_reproduces_the_secretary_table() {
    let fed = university_federation().unwrap();
    let pattern = Pattern::parse("_->Secretary,_->_").unwrap();
    let s = fed.call_level(2).unwrap().clone();
    let got = fed.era_gamma(&pattern, &s).unwrap();
    let expected = texts(&[
        &["univ_A", "pay-info", "category", "Secretary", "dept", "CS"],
        &[
            "univ_A",
            "pay-info",
            "category",
            "Secretary",
            "category",
            "Secretary",
        ],
        &[
            "univ_A",
            "pay-info",
            "category",
            "Secretary",
            "avg-sal",
            "35,000",
        ],
        &[
            "univ_C",
            "ece",
            "category",
            "Secretary",
            "category",
            "Secretary",
        ],
        &[
            "univ_C",
            "ece",
            "category",
            "Secretary",
            "avg-sal",
            "30,000",
        ],
    ]);
    assert_eq!(got.rows(), &expected);
    assert_eq!(got.arity(), 6);
    assert_eq!(gamma_oracle(&fed, &pattern, &s).unwrap().rows(), &expected);
}

#[test]
fn gamma_small_cases_match_the_oracle() {
    let fed = university_federation().unwrap();
    let s = fed.call_level(2).unwrap().clone();
    for text in [
        "",
        "category->Prof",
        "_->_",
        "dept->_,_->'35,000'",
        "CS->_,Math->_,category->_",
    ] {
        let p = Pattern::parse(text).unwrap();
        let got = fed.era_gamma(&p, &s).unwrap();
        assert_eq!(
            got.rows(),
            gamma_oracle(&fed, &p, &s).unwrap().rows(),
            "{text}"
        );
        assert_eq!(got.arity(), 2 + 2 * p.len());
    }
    let p = Pattern::parse("category->Prof").unwrap();
    let only_c = pairs(&[("univ_C", "CS"), ("univ_C", "ece")]);
    let got = fed.era_gamma(&p, &only_c).unwrap();
    assert_eq!(got.len(), 2);
    assert!(fed.era_gamma(&p, &pairs(&[])).unwrap().is_empty());
}

#[test]
fn token_search_and_unknown_join() {
    let fed = university_federation().unwrap();
    assert_eq!(
        fed.find_token(&Value::text("Secretary")).unwrap().rows(),
        &texts(&[&["univ_A", "pay-info"], &["univ_C", "ece"]])
    );
    assert_eq!(
        fed.find_token(&Value::text("35,000")).unwrap().rows(),
        &texts(&[&["univ_A", "pay-info"]])
    );
    let j = fed.natural_join_unknown("univ_C", "CS", "ece").unwrap();
    assert!(j.is_empty());
    assert_eq!(j.arity(), 2);
    let same = fed.natural_join_unknown("univ_C", "CS", "CS").unwrap();
    assert_eq!(same.len(), 2);
    assert!(fed.natural_join_unknown("univ_X", "CS", "CS").is_err());
    assert!(fed.natural_join_unknown("univ_C", "nope", "CS").is_err());
}

#[test]
fn empty_federation() {
    let fed = Federation::new(Vec::new()).unwrap();
    assert!(fed.call4().is_empty());
    assert_eq!(fed.call4().arity(), 5);
    for level in 1..=3 {
        assert!(fed.call_level(level).unwrap().is_empty());
    }
    assert!(fed.sorts().iter().all(Relation::is_empty));
    assert!(fed.find_token(&Value::text("x")).unwrap().is_empty());
}

#[test]
fn rejects_duplicate_and_reserved_names() {
    let fed = university_federation().unwrap();
    let m = fed.members()[0].clone();
    assert!(Federation::new(vec![m.clone(), m]).is_err());
    let schema = Schema::new("call_4", vec![]).unwrap();
    let store = VectorRelation::new("call_4");
    assert!(Federation::new(vec![Member::new(schema, store).unwrap()]).is_err());
}
