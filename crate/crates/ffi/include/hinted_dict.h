#ifndef HINTED_DICT_H
#define HINTED_DICT_H

#pragma once

/* Generated by cbindgen from the hinted-dict-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>
typedef struct HdDict HdDict;

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum HdStatus {
  HdStatus_Ok = 0,
  HdStatus_NullPointer = 1,
  HdStatus_InvalidArgument = 2,
  /**
   * A library precondition was violated (for example a sentinel key).
   */
  HdStatus_ContractViolation = 3,
  /**
   * The caller-supplied buffer cannot hold the result.
   */
  HdStatus_CapacityTooSmall = 4,
  /**
   * Binary operation over two different backends.
   */
  HdStatus_BackendMismatch = 5,
} HdStatus;

/**
 * Create a dictionary for the given backend code; null for unknown codes.
 */
HdDict *hd_dict_new(int32_t backend);

/**
 * Deep copy; null input yields null.
 *
 * # Safety
 * `dict` must be null or a pointer from `hd_dict_new`/merge functions that
 * has not been freed.
 */
HdDict *hd_dict_clone(const HdDict *dict);

/**
 * Release a dictionary handle; null is a no-op.
 *
 * # Safety
 * `dict` must be null or an unfreed pointer obtained from this library.
 */
void hd_dict_free(HdDict *dict);

/**
 * Insert `(key, value)`; an existing key accumulates (`old + value`).
 *
 * # Safety
 * `dict` must be a valid handle.
 */
enum HdStatus hd_dict_insert(HdDict *dict, int64_t key, double value);

/**
 * Remove `key`; removing an absent key succeeds.
 *
 * # Safety
 * `dict` must be a valid handle.
 */
enum HdStatus hd_dict_delete(HdDict *dict, int64_t key);

/**
 * Fetch the value at `key` into `out`; absent keys read 0.0.
 *
 * # Safety
 * `dict` must be a valid handle and `out` a writable pointer.
 */
enum HdStatus hd_dict_find(const HdDict *dict, int64_t key, double *out);

/**
 * Number of stored entries (zero-valued entries included).
 *
 * # Safety
 * `dict` must be a valid handle and `out` a writable pointer.
 */
enum HdStatus hd_dict_size(const HdDict *dict, uint64_t *out);

/**
 * Number of entries with a non-zero value.
 *
 * # Safety
 * `dict` must be a valid handle and `out` a writable pointer.
 */
enum HdStatus hd_dict_count(const HdDict *dict, uint64_t *out);

/**
 * Copy all entries in ascending key order into the caller's buffers.
 * `capacity` is the element capacity of both buffers; `written` receives
 * the entry count. Fails with `CapacityTooSmall` (writing nothing) when the
 * dictionary holds more entries than `capacity`.
 *
 * # Safety
 * `dict` must be a valid handle; `keys` and `values` must point to at least
 * `capacity` writable elements; `written` must be writable.
 */
enum HdStatus hd_dict_entries(const HdDict *dict,
                              int64_t *keys,
                              double *values,
                              uint64_t capacity,
                              uint64_t *written);

/**
 * Key-union of two dictionaries of the same backend; matched values are
 * added. Returns null on null input or backend mismatch.
 *
 * # Safety
 * `left` and `right` must be valid handles.
 */
HdDict *hd_dict_merge_add(const HdDict *left, const HdDict *right);

/**
 * Key-intersection of two dictionaries of the same backend; matched values
 * are multiplied. Returns null on null input or backend mismatch.
 *
 * # Safety
 * `left` and `right` must be valid handles.
 */
HdDict *hd_dict_merge_mul(const HdDict *left, const HdDict *right);

/**
 * Sum over shared keys of multiplied values.
 *
 * # Safety
 * `left` and `right` must be valid handles and `out` a writable pointer.
 */
enum HdStatus hd_dict_inner_product(const HdDict *left, const HdDict *right, double *out);

/**
 * Static name for a status code (never null).
 */
const char *hd_status_name(enum HdStatus status);

#endif /* HINTED_DICT_H */
