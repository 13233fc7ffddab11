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

//! Tuple indices: SHA-256 digests of canonically serialized tuples.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::value::{Value, NULL_TOKEN};

/// Separator byte placed between serialized values.
pub const UNIT_SEPARATOR: u8 = 0x1F;

/// Lowercase hex SHA-256 digest identifying one source tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TupleIndex(String);

impl TupleIndex {
    /// Accepts exactly 64 lowercase hex digits.
    pub fn parse(s: &str) -> Option<TupleIndex> {
        let ok = s.len() == 64 && s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'));
        ok.then(|| TupleIndex(s.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for TupleIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Bytes fed to the digest: canonical renderings joined by 0x1F, with
/// `Null` written as [`NULL_TOKEN`].
pub fn serialize_tuple(values: &[Value]) -> Vec<u8> {
    let mut out = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(UNIT_SEPARATOR);
        }
        match v {
            Value::Null => out.extend_from_slice(NULL_TOKEN.as_bytes()),
            other => out.extend_from_slice(other.render().as_bytes()),
        }
    }
    out
}

pub fn hash_tuple(values: &[Value]) -> TupleIndex {
    TupleIndex(hex::encode(Sha256::digest(serialize_tuple(values))))
}
