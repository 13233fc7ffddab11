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

//! Header computations shared by the evaluator and static typing.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::relation::ColumnSpec;

/// Header of `left TIMES right`. Right-hand names already used on the left
/// get the first free suffix `(1)`, `(2)`, ...
pub fn times_header(left: &[ColumnSpec], right: &[ColumnSpec]) -> Vec<ColumnSpec> {
    let left_names: BTreeSet<&str> = left.iter().map(|c| c.column_name.as_str()).collect();
    let mut used: BTreeSet<String> = left
        .iter()
        .chain(right)
        .map(|c| c.column_name.clone())
        .collect();
    let mut out = left.to_vec();
    for col in right {
        if left_names.contains(col.column_name.as_str()) {
            let mut k = 1;
            let fresh = loop {
                let candidate = format!("{}({})", col.column_name, k);
                if !used.contains(&candidate) {
                    break candidate;
                }
                k += 1;
            };
            used.insert(fresh.clone());
            out.push(ColumnSpec::new(fresh, col.attribute.clone()));
        } else {
            out.push(col.clone());
        }
    }
    out
}

/// Column indices for a projection, or `None` when some requested name is
/// absent (the projection then leaves its input unchanged).
pub(crate) fn project_indices(
    header: &[ColumnSpec],
    names: &[String],
) -> Result<Option<Vec<usize>>> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::DuplicateColumn(n.clone()));
        }
    }
    let mut idx = Vec::with_capacity(names.len());
    for n in names {
        match header.iter().position(|c| &c.column_name == n) {
            Some(i) => idx.push(i),
            None => return Ok(None),
        }
    }
    Ok(Some(idx))
}

/// Header after renaming `from` to `to`; unchanged when `from` is absent.
pub(crate) fn rename_header(
    header: &[ColumnSpec],
    from: &str,
    to: &str,
) -> Result<Vec<ColumnSpec>> {
    let mut out = header.to_vec();
    let Some(i) = header.iter().position(|c| c.column_name == from) else {
        return Ok(out);
    };
    if from != to && header.iter().any(|c| c.column_name == to) {
        return Err(Error::DuplicateColumn(to.to_string()));
    }
    out[i].column_name = to.to_string();
    Ok(out)
}

/// For union-compatible headers, the right-hand column feeding each left
/// column (matched by attribute, repeated attributes in order of
/// occurrence). `None` when the headers cannot be aligned.
pub fn align_union(left: &[ColumnSpec], right: &[ColumnSpec]) -> Option<Vec<usize>> {
    if left.len() != right.len() {
        return None;
    }
    let mut taken = vec![false; right.len()];
    let mut map = Vec::with_capacity(left.len());
    for l in left {
        let j = (0..right.len()).find(|&j| !taken[j] && right[j].attribute == l.attribute)?;
        taken[j] = true;
        map.push(j);
    }
    Some(map)
}

pub(crate) fn extend_header(header: &[ColumnSpec], column: &ColumnSpec) -> Result<Vec<ColumnSpec>> {
    if header.iter().any(|c| c.column_name == column.column_name) {
        return Err(Error::DuplicateColumn(column.column_name.clone()));
    }
    let mut out = header.to_vec();
    out.push(column.clone());
    Ok(out)
}

#[derive(Debug, Clone)]
pub(crate) struct JoinPlan {
    pub left_keys: Vec<usize>,
    pub right_keys: Vec<usize>,
    pub kept_right: Vec<usize>,
    pub header: Vec<ColumnSpec>,
}

pub(crate) fn join_plan(
    left: &[ColumnSpec],
    right: &[ColumnSpec],
    pairs: &[(String, String)],
) -> Result<JoinPlan> {
    let mut left_keys = Vec::new();
    let mut right_keys = Vec::new();
    for (l, r) in pairs {
        let li = left
            .iter()
            .position(|c| &c.column_name == l)
            .ok_or_else(|| Error::MalformedJoin(format!("no left column `{l}`")))?;
        let ri = right
            .iter()
            .position(|c| &c.column_name == r)
            .ok_or_else(|| Error::MalformedJoin(format!("no right column `{r}`")))?;
        if right_keys.contains(&ri) {
            return Err(Error::MalformedJoin(format!(
                "right column `{r}` paired twice"
            )));
        }
        left_keys.push(li);
        right_keys.push(ri);
    }
    let kept_right: Vec<usize> = (0..right.len())
        .filter(|j| !right_keys.contains(j))
        .collect();
    let product = times_header(left, right);
    let mut header = product[..left.len()].to_vec();
    header.extend(kept_right.iter().map(|&j| product[left.len() + j].clone()));
    Ok(JoinPlan {
        left_keys,
        right_keys,
        kept_right,
        header,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(names: &[&str]) -> Vec<ColumnSpec> {
        names.iter().map(|n| ColumnSpec::named(*n)).collect()
    }

    #[test]
    fn product_suffixes_clashing_names() {
        let h = times_header(&cols(&["a", "b"]), &cols(&["a", "b", "c"]));
        let names: Vec<_> = h.iter().map(|c| c.column_name.as_str()).collect();
        assert_eq!(names, ["a", "b", "a(1)", "b(1)", "c"]);
        let h3 = times_header(&h, &cols(&["a"]));
        assert_eq!(h3.last().unwrap().column_name, "a(2)");
        assert_eq!(h3.last().unwrap().attribute, "a");
    }

    #[test]
    fn suffix_skips_names_taken_on_the_right() {
        let h = times_header(&cols(&["a"]), &cols(&["a", "a(1)"]));
        let names: Vec<_> = h.iter().map(|c| c.column_name.as_str()).collect();
        assert_eq!(names, ["a", "a(2)", "a(1)"]);
    }

    #[test]
    fn union_alignment_by_attribute() {
        let l = vec![ColumnSpec::new("x", "a"), ColumnSpec::new("y", "b")];
        let r = vec![ColumnSpec::new("p", "b"), ColumnSpec::new("q", "a")];
        assert_eq!(align_union(&l, &r), Some(vec![1, 0]));
        assert_eq!(align_union(&l, &cols(&["a"])), None);
    }

    #[test]
    fn malformed_pairs() {
        assert!(join_plan(&cols(&["a"]), &cols(&["b"]), &[("z".into(), "b".into())]).is_err());
        assert!(join_plan(
            &cols(&["a", "c"]),
            &cols(&["b"]),
            &[("a".into(), "b".into()), ("c".into(), "b".into())]
        )
        .is_err());
    }
}
