/* Copyright 2026 The ivecdb Authors. Licensed under the Apache License, Version 2.0. */

#ifndef IVECDB_H
#define IVECDB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IvecStatus {
  IVEC_STATUS_OK = 0,
  IVEC_STATUS_NULL_POINTER = 1,
  IVEC_STATUS_INVALID_UTF8 = 2,
  IVEC_STATUS_SYNTAX = 3,
  IVEC_STATUS_NOT_FOUND = 4,
  IVEC_STATUS_INVALID_ARGUMENT = 5,
  IVEC_STATUS_DATA = 6,
  IVEC_STATUS_IO = 7,
  IVEC_STATUS_OUT_OF_RANGE = 8,
  IVEC_STATUS_PANIC = 9,
} IvecStatus;

/**
 * A loaded federation.
 */
typedef struct IvecFederation IvecFederation;

/**
 * A query result with every cell pre-rendered.
 */
typedef struct IvecResult IvecResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message of this thread, or NULL. Borrowed until the next
 * failing call on this thread.
 */
const char *ivec_last_error(void);

/**
 * Opens a federation: from the config file `config` when not NULL,
 * otherwise every database stored under `home`.
 *
 * # Safety
 * `home` and `config` are NULL or valid strings; `out` is writable.
 */
enum IvecStatus ivec_federation_open(const char *home,
                                     const char *config,
                                     struct IvecFederation **out);

/**
 * # Safety
 * `fed` is NULL or a handle not yet freed.
 */
void ivec_federation_free(struct IvecFederation *fed);

/**
 * Number of member databases.
 *
 * # Safety
 * `fed` is NULL or a live handle.
 */
size_t ivec_federation_len(const struct IvecFederation *fed);

/**
 * Answers an algebra query over member `db` through its vector store.
 * Update statements are rejected: the federation is read-only.
 *
 * # Safety
 * Pointers as for [`ivec_federation_open`]; `fed` is live.
 */
enum IvecStatus ivec_query(const struct IvecFederation *fed,
                           const char *db,
                           const char *query,
                           struct IvecResult **out);

/**
 * The database names (`call_1`).
 *
 * # Safety
 * `fed` is live; `out` is writable.
 */
enum IvecStatus ivec_meta_delta(const struct IvecFederation *fed, struct IvecResult **out);

/**
 * Pattern match over cells of every relation listed in `call_2`.
 *
 * # Safety
 * `fed` is live; `pattern` is a valid string; `out` is writable.
 */
enum IvecStatus ivec_meta_gamma(const struct IvecFederation *fed,
                                const char *pattern,
                                struct IvecResult **out);

/**
 * `(db-name, r-name)` of relations holding `value`; the value is typed as
 * a number when it reads as one.
 *
 * # Safety
 * `fed` is live; `value` is a valid string; `out` is writable.
 */
enum IvecStatus ivec_find_token(const struct IvecFederation *fed,
                                const char *value,
                                struct IvecResult **out);

/**
 * Natural join of `db.left` and `db.right` on their shared attributes.
 *
 * # Safety
 * `fed` is live; strings are valid; `out` is writable.
 */
enum IvecStatus ivec_njoin(const struct IvecFederation *fed,
                           const char *db,
                           const char *left,
                           const char *right,
                           struct IvecResult **out);

/**
 * Compiles a SchemaLog program and evaluates predicate `query`.
 *
 * # Safety
 * `fed` is live; strings are valid; `out` is writable.
 */
enum IvecStatus ivec_slog_run(const struct IvecFederation *fed,
                              const char *program,
                              const char *query,
                              struct IvecResult **out);

/**
 * # Safety
 * `res` is NULL or a result not yet freed.
 */
void ivec_result_free(struct IvecResult *res);

/**
 * # Safety
 * `res` is NULL or live.
 */
size_t ivec_result_columns(const struct IvecResult *res);

/**
 * # Safety
 * `res` is NULL or live.
 */
size_t ivec_result_rows(const struct IvecResult *res);

/**
 * Name of column `col`, borrowed from `res`; NULL when out of range.
 *
 * # Safety
 * `res` is NULL or live.
 */
const char *ivec_result_column_name(const struct IvecResult *res, size_t col);

/**
 * Rendered cell at (`row`, `col`), borrowed from `res`. A `Null` cell
 * yields `Ok` with `*out` set to NULL.
 *
 * # Safety
 * `res` is live; `out` is writable.
 */
enum IvecStatus ivec_result_cell(const struct IvecResult *res,
                                 size_t row,
                                 size_t col,
                                 const char **out);

/**
 * The result as CSV (Null as an empty field). Owned; free with
 * [`ivec_string_free`].
 *
 * # Safety
 * `res` is NULL or live.
 */
char *ivec_result_to_csv(const struct IvecResult *res);

/**
 * The result as JSON (Null as `null`). Owned; free with
 * [`ivec_string_free`].
 *
 * # Safety
 * `res` is NULL or live.
 */
char *ivec_result_to_json(const struct IvecResult *res);

/**
 * Tuple index of `n` text values; a NULL entry stands for `Null`. The
 * 64-digit hex digest is written to `*out` (owned).
 *
 * # Safety
 * `values` points to `n` entries, each NULL or a valid string; `out` is
 * writable.
 */
enum IvecStatus ivec_hash_tuple(const char *const *values, size_t n, char **out);

/**
 * # Safety
 * `s` is NULL or an owned string from this library, not yet freed.
 */
void ivec_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IVECDB_H */
