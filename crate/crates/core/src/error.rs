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

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the engine. [`Error::is_data_error`] separates faults in
/// stored data from faults in what the user asked for.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("unknown database `{0}`")]
    UnknownDatabase(String),
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("duplicate column `{0}`")]
    DuplicateColumn(String),
    #[error("malformed join pair set: {0}")]
    MalformedJoin(String),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("tuple index collision in relation `{relation}` (digest {digest})")]
    HashCollision { relation: String, digest: String },
    #[error("primary key violation in relation `{relation}`: {detail}")]
    PrimaryKey { relation: String, detail: String },
    #[error("NOT NULL violation in `{relation}.{column}`")]
    NotNull { relation: String, column: String },
    #[error("all-null tuple in relation `{0}` cannot be stored")]
    AllNullTuple(String),
    #[error("term is not select-project-join-union: {0}")]
    NotSpju(String),
    #[error("ambiguous view column provenance ({relation}, {column})")]
    AmbiguousProvenance { relation: String, column: String },
    #[error("unsafe rule: {0}")]
    UnsafeRule(String),
    #[error("recursive program: predicate `{0}` depends on itself")]
    Recursion(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{file}:{line}: {message}")]
    Data {
        file: String,
        line: u64,
        message: String,
    },
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }

    /// True for faults in stored or ingested data, false for faults in the
    /// request itself.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::HashCollision { .. }
                | Error::PrimaryKey { .. }
                | Error::NotNull { .. }
                | Error::AllNullTuple(_)
                | Error::Data { .. }
                | Error::Io { .. }
        )
    }
}
