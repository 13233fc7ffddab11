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

//! The three-university sample federation used in docs and tests.
//!
//! `univ_A` keeps one `pay-info` row per department and category, `univ_B`
//! turns departments into attribute names, and `univ_C` has one relation
//! per department. Salaries are text (`"70,000"`).

use crate::error::Result;
use crate::federation::{Federation, Member};
use crate::relation::{Instance, Relation, RelationSignature, Schema};
use crate::value::Value;
use crate::vector::parse_instance;

fn table(sig: &RelationSignature, rows: &[&[&str]]) -> Relation {
    Relation::from_rows(
        sig.columns.clone(),
        rows.iter()
            .map(|r| r.iter().map(|c| Value::text(*c)).collect()),
    )
    .expect("sample rows match their signature")
}

/// Schemas and instances of `univ_A`, `univ_B` and `univ_C`.
pub fn university() -> Vec<(Schema, Instance)> {
    let a = RelationSignature::simple("pay-info", &["category", "dept", "avg-sal"]).unwrap();
    let b = RelationSignature::simple("pay-info", &["category", "CS", "Math"]).unwrap();
    let cs = RelationSignature::simple("CS", &["category", "avg-sal"]).unwrap();
    let ece = RelationSignature::simple("ece", &["category", "avg-sal"]).unwrap();
    let a_rows = table(
        &a,
        &[
            &["Prof", "CS", "70,000"],
            &["Assoc. Prof", "CS", "60,000"],
            &["Secretary", "CS", "35,000"],
            &["Prof", "Math", "65,000"],
        ],
    );
    let b_rows = table(
        &b,
        &[
            &["Prof", "80,000", "65,000"],
            &["Assoc. Prof", "65,000", "55,000"],
            &["Assist. Prof", "45,000", "42,000"],
        ],
    );
    let cs_rows = table(&cs, &[&["Prof", "65,000"], &["Assist. Prof", "40,000"]]);
    let ece_rows = table(&ece, &[&["Secretary", "30,000"], &["Prof", "70,000"]]);
    vec![
        (
            Schema::new("univ_A", vec![a]).unwrap(),
            Instance::from([("pay-info".to_string(), a_rows)]),
        ),
        (
            Schema::new("univ_B", vec![b]).unwrap(),
            Instance::from([("pay-info".to_string(), b_rows)]),
        ),
        (
            Schema::new("univ_C", vec![cs, ece]).unwrap(),
            Instance::from([("CS".to_string(), cs_rows), ("ece".to_string(), ece_rows)]),
        ),
    ]
}

/// The three universities parsed into vector stores.
pub fn university_federation() -> Result<Federation> {
    let members = university()
        .into_iter()
        .map(|(schema, inst)| {
            let store = parse_instance(&schema, &inst)?;
            Member::new(schema, store)
        })
        .collect::<Result<Vec<_>>>()?;
    Federation::new(members)
}
