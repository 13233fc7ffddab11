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

//! SchemaLog: atoms over database, relation, attribute and cell names,
//! an encoding into first-order logic over the vector predicates, and a
//! compiler from safe non-recursive rules to relational algebra.

mod ast;
mod compile;
mod encode;
mod naive;
mod parser;
mod structure;

pub use ast::{Literal, PredAtom, SlAtom, SlFormula, SlRule, SlTerm, HASH_FUNCTOR};
pub use compile::{check_safety, compile_rules};
pub use encode::{encode, Fol, FolTerm, Interpretation, PredRef};
pub use naive::naive_eval;
pub use parser::{parse_formula, parse_program};
pub use structure::{structure_eval, Cells, Structure};

use crate::error::{Error, Result};
use crate::federation::Federation;
use crate::relation::Relation;

/// Parses `program`, compiles it and evaluates predicate `query`.
pub fn run_program(program: &str, query: &str, fed: &Federation) -> Result<Relation> {
    let rules = parse_program(program)?;
    let terms = compile_rules(&rules, fed)?;
    let term = terms
        .get(query)
        .ok_or_else(|| Error::InvalidArgument(format!("program defines no predicate `{query}`")))?;
    fed.eval(term, None)
}

#[cfg(test)]
mod tests;
