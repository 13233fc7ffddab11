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

//! C ABI for ivecdb.
//!
//! Handles are opaque. Every fallible call returns an [`IvecStatus`]; on
//! failure the message is available from [`ivec_last_error`] on the same
//! thread until the next failing call. Strings passed in are borrowed,
//! NUL-terminated UTF-8. Strings handed out are either borrowed from a
//! handle (valid until it is freed) or owned and released with
//! [`ivec_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use ivecdb::algebra::{parse_statement, Statement};
use ivecdb::federation::{CatalogSource, Federation, Pattern};
use ivecdb::hash::hash_tuple;
use ivecdb::relation::Relation;
use ivecdb::result::ResultDocument;
use ivecdb::rewrite::answer;
use ivecdb::schemalog::run_program;
use ivecdb::store::{load_federation_config, open_federation};
use ivecdb::value::Value;
use ivecdb::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IvecStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    NotFound = 4,
    InvalidArgument = 5,
    Data = 6,
    Io = 7,
    OutOfRange = 8,
    Panic = 9,
}

/// A loaded federation.
pub struct IvecFederation {
    fed: Federation,
}

/// A query result with every cell pre-rendered.
pub struct IvecResult {
    doc: ResultDocument,
    names: Vec<CString>,
    cells: Vec<Vec<Option<CString>>>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> IvecStatus {
    match e {
        Error::Syntax { .. } => IvecStatus::Syntax,
        Error::UnknownRelation(_) | Error::UnknownDatabase(_) | Error::UnknownColumn(_) => {
            IvecStatus::NotFound
        }
        Error::Io { .. } => IvecStatus::Io,
        e if e.is_data_error() => IvecStatus::Data,
        _ => IvecStatus::InvalidArgument,
    }
}

struct Fail(IvecStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, recording failures and panics.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> IvecStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IvecStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            IvecStatus::Panic
        }
    }
}

/// # Safety
/// `p` is NULL or a NUL-terminated string valid for the call.
unsafe fn arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(IvecStatus::NullPointer, format!("`{name}` is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(IvecStatus::InvalidUtf8, format!("`{name}` is not UTF-8")))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(IvecStatus::NullPointer, format!("`{name}` is NULL")))
    } else {
        Ok(())
    }
}

fn render(v: &Value) -> Option<CString> {
    (!v.is_null()).then(|| CString::new(v.render().replace('\0', " ")).expect("NULs replaced"))
}

fn to_result(r: &Relation) -> *mut IvecResult {
    let doc = ResultDocument::from(r);
    let names = doc
        .columns
        .iter()
        .map(|(n, _)| CString::new(n.replace('\0', " ")).expect("NULs replaced"))
        .collect();
    let cells = doc
        .rows
        .iter()
        .map(|row| row.iter().map(render).collect())
        .collect();
    Box::into_raw(Box::new(IvecResult { doc, names, cells }))
}

/// # Safety
/// `fed` is NULL or a live handle from [`ivec_federation_open`]; `out` is
/// NULL or writable.
unsafe fn with_fed(
    fed: *const IvecFederation,
    out: *mut *mut IvecResult,
    f: impl FnOnce(&Federation) -> Result<Relation, Fail>,
) -> IvecStatus {
    guard(|| {
        non_null(fed, "fed")?;
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let r = f(&(*fed).fed)?;
        *out = to_result(&r);
        Ok(())
    })
}

/// Last error message of this thread, or NULL. Borrowed until the next
/// failing call on this thread.
#[no_mangle]
pub extern "C" fn ivec_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Opens a federation: from the config file `config` when not NULL,
/// otherwise every database stored under `home`.
///
/// # Safety
/// `home` and `config` are NULL or valid strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ivec_federation_open(
    home: *const c_char,
    config: *const c_char,
    out: *mut *mut IvecFederation,
) -> IvecStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let home = arg(home, "home")?;
        let fed = if config.is_null() {
            open_federation(Path::new(home), None, CatalogSource::Derived)?
        } else {
            load_federation_config(Path::new(arg(config, "config")?), Path::new(home))?
        };
        *out = Box::into_raw(Box::new(IvecFederation { fed }));
        Ok(())
    })
}

/// # Safety
/// `fed` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ivec_federation_free(fed: *mut IvecFederation) {
    if !fed.is_null() {
        drop(Box::from_raw(fed));
    }
}

/// Number of member databases.
///
/// # Safety
/// `fed` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ivec_federation_len(fed: *const IvecFederation) -> usize {
    if fed.is_null() {
        0
    } else {
        (*fed).fed.members().len()
    }
}

/// Answers an algebra query over member `db` through its vector store.
/// Update statements are rejected: the federation is read-only.
///
/// # Safety
/// Pointers as for [`ivec_federation_open`]; `fed` is live.
#[no_mangle]
pub unsafe extern "C" fn ivec_query(
    fed: *const IvecFederation,
    db: *const c_char,
    query: *const c_char,
    out: *mut *mut IvecResult,
) -> IvecStatus {
    with_fed(fed, out, |f| {
        let member = f.member(arg(db, "db")?)?;
        match parse_statement(arg(query, "query")?)? {
            Statement::Query(term) => Ok(answer(&term, &member.store, &member.schema)?),
            Statement::Update(_) => Err(Fail(
                IvecStatus::InvalidArgument,
                "updates are not available through a federation handle".into(),
            )),
        }
    })
}

/// The database names (`call_1`).
///
/// # Safety
/// `fed` is live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ivec_meta_delta(
    fed: *const IvecFederation,
    out: *mut *mut IvecResult,
) -> IvecStatus {
    with_fed(fed, out, |f| Ok(f.era_delta()?))
}

/// Pattern match over cells of every relation listed in `call_2`.
///
/// # Safety
/// `fed` is live; `pattern` is a valid string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ivec_meta_gamma(
    fed: *const IvecFederation,
    pattern: *const c_char,
    out: *mut *mut IvecResult,
) -> IvecStatus {
    with_fed(fed, out, |f| {
        let p = Pattern::parse(arg(pattern, "pattern")?)?;
        Ok(f.era_gamma(&p, f.call_level(2)?)?)
    })
}

/// `(db-name, r-name)` of relations holding `value`; the value is typed as
/// a number when it reads as one.
///
/// # Safety
/// `fed` is live; `value` is a valid string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ivec_find_token(
    fed: *const IvecFederation,
    value: *const c_char,
    out: *mut *mut IvecResult,
) -> IvecStatus {
    with_fed(fed, out, |f| {
        Ok(f.find_token(&Value::infer(arg(value, "value")?))?)
    })
}

/// Natural join of `db.left` and `db.right` on their shared attributes.
///
/// # Safety
/// `fed` is live; strings are valid; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ivec_njoin(
    fed: *const IvecFederation,
    db: *const c_char,
    left: *const c_char,
    right: *const c_char,
    out: *mut *mut IvecResult,
) -> IvecStatus {
    with_fed(fed, out, |f| {
        Ok(f.natural_join_unknown(arg(db, "db")?, arg(left, "left")?, arg(right, "right")?)?)
    })
}

/// Compiles a SchemaLog program and evaluates predicate `query`.
///
/// # Safety
/// `fed` is live; strings are valid; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ivec_slog_run(
    fed: *const IvecFederation,
    program: *const c_char,
    query: *const c_char,
    out: *mut *mut IvecResult,
) -> IvecStatus {
    with_fed(fed, out, |f| {
        Ok(run_program(
            arg(program, "program")?,
            arg(query, "query")?,
            f,
        )?)
    })
}

/// # Safety
/// `res` is NULL or a result not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ivec_result_free(res: *mut IvecResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// # Safety
/// `res` is NULL or live.
#[no_mangle]
pub unsafe extern "C" fn ivec_result_columns(res: *const IvecResult) -> usize {
    if res.is_null() {
        0
    } else {
        (*res).names.len()
    }
}

/// # Safety
/// `res` is NULL or live.
#[no_mangle]
pub unsafe extern "C" fn ivec_result_rows(res: *const IvecResult) -> usize {
    if res.is_null() {
        0
    } else {
        (*res).cells.len()
    }
}

/// Name of column `col`, borrowed from `res`; NULL when out of range.
///
/// # Safety
/// `res` is NULL or live.
#[no_mangle]
pub unsafe extern "C" fn ivec_result_column_name(
    res: *const IvecResult,
    col: usize,
) -> *const c_char {
    if res.is_null() {
        return ptr::null();
    }
    let names = &(*res).names;
    names.get(col).map_or(ptr::null(), |s| s.as_ptr())
}

/// Rendered cell at (`row`, `col`), borrowed from `res`. A `Null` cell
/// yields `Ok` with `*out` set to NULL.
///
/// # Safety
/// `res` is live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ivec_result_cell(
    res: *const IvecResult,
    row: usize,
    col: usize,
    out: *mut *const c_char,
) -> IvecStatus {
    guard(|| {
        non_null(res, "res")?;
        non_null(out, "out")?;
        *out = ptr::null();
        let cells = &(*res).cells;
        let cell = cells
            .get(row)
            .and_then(|r| r.get(col))
            .ok_or_else(|| Fail(IvecStatus::OutOfRange, format!("no cell ({row}, {col})")))?;
        *out = cell.as_ref().map_or(ptr::null(), |s| s.as_ptr());
        Ok(())
    })
}

fn owned(text: String) -> *mut c_char {
    CString::new(text.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// The result as CSV (Null as an empty field). Owned; free with
/// [`ivec_string_free`].
///
/// # Safety
/// `res` is NULL or live.
#[no_mangle]
pub unsafe extern "C" fn ivec_result_to_csv(res: *const IvecResult) -> *mut c_char {
    if res.is_null() {
        return ptr::null_mut();
    }
    owned((*res).doc.to_csv())
}

/// The result as JSON (Null as `null`). Owned; free with
/// [`ivec_string_free`].
///
/// # Safety
/// `res` is NULL or live.
#[no_mangle]
pub unsafe extern "C" fn ivec_result_to_json(res: *const IvecResult) -> *mut c_char {
    if res.is_null() {
        return ptr::null_mut();
    }
    owned((*res).doc.to_json())
}

/// Tuple index of `n` text values; a NULL entry stands for `Null`. The
/// 64-digit hex digest is written to `*out` (owned).
///
/// # Safety
/// `values` points to `n` entries, each NULL or a valid string; `out` is
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ivec_hash_tuple(
    values: *const *const c_char,
    n: usize,
    out: *mut *mut c_char,
) -> IvecStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        if n > 0 {
            non_null(values, "values")?;
        }
        let mut tuple = Vec::with_capacity(n);
        for i in 0..n {
            let p = *values.add(i);
            tuple.push(if p.is_null() {
                Value::Null
            } else {
                Value::text(arg(p, "value")?)
            });
        }
        *out = owned(hash_tuple(&tuple).into_string());
        Ok(())
    })
}

/// # Safety
/// `s` is NULL or an owned string from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ivec_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
