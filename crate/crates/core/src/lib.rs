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

//! An intensional vector-relational database engine.

pub mod algebra;
pub mod error;
pub mod federation;
pub mod hash;
pub mod relation;
pub mod result;
pub mod rewrite;
pub mod sample;
pub mod schemalog;
pub mod store;
pub mod value;
pub mod vector;

pub use error::{Error, Result};
