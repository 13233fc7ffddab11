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

use std::collections::BTreeSet;

use super::*;
use crate::relation::Row;
use crate::sample::university_federation;
use crate::value::Value;

fn rows(r: &Relation) -> BTreeSet<Row> {
    r.rows().clone()
}

fn both(program: &str, pred: &str) -> Relation {
    let fed = university_federation().unwrap();
    let rules = parse_program(program).unwrap();
    let compiled = fed
        .eval(&compile_rules(&rules, &fed).unwrap()[pred], None)
        .unwrap();
    let naive = naive_eval(&rules, &fed).unwrap().remove(pred).unwrap();
    assert_eq!(compiled, naive, "{program}");
    compiled
}

fn texts(items: &[&[&str]]) -> BTreeSet<Row> {
    items
        .iter()
        .map(|r| r.iter().map(|c| Value::text(*c)).collect())
        .collect()
}

#[test]
fn relations_holding_a_token_match_find_token() {
    let fed = university_federation().unwrap();
    for token in ["Prof", "65,000", "CS"] {
        let program = format!("ans(D, R) :- D::R[T: A -> '{token}'].");
        let got = run_program(&program, "ans", &fed).unwrap();
        assert_eq!(
            rows(&got),
            rows(&fed.find_token(&Value::text(token)).unwrap()),
            "{token}"
        );
        both(&program, "ans");
    }
}

#[test]
fn unsatisfiable_comparison_gives_no_rows() {
    let r = both(
        "ans(C) :- univ_A::pay-info[T: category -> C], 1 = 2.",
        "ans",
    );
    assert!(r.is_empty());
    assert_eq!(r.column_names(), ["C"]);
}

#[test]
fn join_across_two_databases_on_salary() {
    // Categories paid the same average in some univ_A department and in
    // some univ_C department.
    let r = both(
        "same(C, S) :- univ_A::pay-info[T: category -> C, avg-sal -> S],\n\
                       univ_C::R[U: category -> C, avg-sal -> S].",
        "same",
    );
    assert_eq!(rows(&r), texts(&[&["Prof", "65,000"], &["Prof", "70,000"]]));
}

#[test]
fn negation_comparison_and_hash() {
    let r = both(
        "paid(C) :- univ_A::pay-info[T: category -> C].\n\
         only_b(C) :- univ_B::pay-info[T: category -> C], not paid(C).",
        "only_b",
    );
    assert_eq!(rows(&r), texts(&[&["Assist. Prof"]]));
    let r = both(
        "cs(C, S) :- univ_C::'CS'[T: category -> C, avg-sal -> S], T = Hash(C, S), S > '50,000'.",
        "cs",
    );
    assert_eq!(rows(&r), texts(&[&["Prof", "65,000"]]));
    let r = both("k(Hash(C, S)) :- univ_C::'CS'[T: category -> C, avg-sal -> S], not univ_C::ece[_: category -> C].", "k");
    assert_eq!(r.len(), 1);
    let r = both("m(D) :- D::pay-info[T: category -> 'Secretary'], not D::pay-info[Hash('Prof', 'CS', '70,000'): dept -> _].", "m");
    assert!(r.is_empty());
}

#[test]
fn metadata_atoms() {
    let r = both("rels(D, R) :- D::R.", "rels");
    assert_eq!(r.len(), 4);
    let r = both("has(D) :- D, D::R[dept].", "has");
    assert_eq!(rows(&r), texts(&[&["univ_A"]]));
    let r = both("fact('x', 1).\nboth(X) :- fact(X, N), N < 2.", "both");
    assert_eq!(rows(&r), texts(&[&["x"]]));
    let r = both("none :- nowhere::r.", "none");
    assert!(r.is_empty());
}

#[test]
fn multiple_rules_union() {
    let r = both(
        "db(D) :- D::'CS'.\n\
         db(D) :- D::R['Math'].",
        "db",
    );
    assert_eq!(rows(&r), texts(&[&["univ_B"], &["univ_C"]]));
}

#[test]
fn safety_accepts_and_rejects() {
    let accepted = [
        "p(X) :- a::b[T: c -> X].",
        "p(X) :- a::b[T: c -> X], not a::b[_: d -> X].",
        "p(X) :- a::b[T: c -> X], X <> 'y'.",
        "p(Hash(X)) :- a::b[T: c -> X].",
        "p(1).",
        "p(X) :- q(X, _).\nq(A, B) :- a::b[A: c -> B].",
    ];
    for text in accepted {
        for r in parse_program(text).unwrap() {
            check_safety(&r).unwrap_or_else(|e| panic!("{text}: {e}"));
        }
    }
    let rejected = [
        "p(X) :- a::b[T: c -> Y].",
        "p(X).",
        "p(X) :- a::b[T: c -> X], not a::b[T: d -> Z].",
        "p(X) :- a::b[T: c -> X], Y > 1.",
        "p(X) :- a::b[Hash(Y): c -> X].",
        "p(_) :- a::b[T: c -> X].",
        "p(X) :- a::b[T: c -> X], _ = X.",
    ];
    for text in rejected {
        let rules = parse_program(text).unwrap();
        assert!(
            matches!(check_safety(&rules[0]), Err(Error::UnsafeRule(_))),
            "{text}"
        );
    }
}

#[test]
fn program_errors() {
    let fed = university_federation().unwrap();
    let compile = |t: &str| compile_rules(&parse_program(t).unwrap(), &fed);
    assert!(matches!(
        compile("p(X) :- q(X).\nq(X) :- p(X)."),
        Err(Error::Recursion(_))
    ));
    assert!(matches!(
        compile("p(X) :- q(X)."),
        Err(Error::InvalidArgument(_))
    ));
    assert!(matches!(
        compile("q(X) :- a::b[T: c -> X].\np(X) :- q(X, X)."),
        Err(Error::ArityMismatch { .. })
    ));
    assert!(matches!(
        run_program("p(1).", "q", &fed),
        Err(Error::InvalidArgument(_))
    ));
}
