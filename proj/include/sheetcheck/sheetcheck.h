// Copyright 2026 The Sheetcheck Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHEETCHECK_SHEETCHECK_H_
#define SHEETCHECK_SHEETCHECK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SHEETCHECK_BUILDING_LIBRARY)
#define SC_API __attribute__((visibility("default")))
#else
#define SC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sc_status {
  SC_OK = 0,
  SC_ERR_ARGUMENT = 1,
  SC_ERR_ADDRESS = 2,
  SC_ERR_PARSE = 3,
  SC_ERR_LOAD = 4,
  SC_ERR_INGEST = 5,
  SC_ERR_RANGE = 6,
  SC_ERR_CONFIG = 7,
  SC_ERR_GENERATION = 8,
  SC_ERR_APPLY = 9,
  SC_ERR_MANIFEST = 10,
  SC_ERR_IO = 11,
  SC_ERR_INTERNAL = 12
} sc_status;

typedef enum sc_format { SC_FORMAT_TEXT = 0, SC_FORMAT_JSON = 1 } sc_format;

typedef struct sc_workbook sc_workbook;

typedef struct sc_counts {
  size_t error;
  size_t warning;
  size_t info;
} sc_counts;

SC_API const char* sc_version(void);

/* Message of the last failed call on this thread; "" after success. */
SC_API const char* sc_last_error(void);

/* Strings returned through char** out-parameters are owned by the caller. */
SC_API void sc_string_free(char* s);

/* .xlsx or .json, picked by extension. */
SC_API sc_status sc_workbook_open(const char* path, sc_workbook** out);
SC_API sc_status sc_workbook_from_json(const char* text, size_t len,
                                       sc_workbook** out);
SC_API sc_status sc_workbook_from_xlsx(const uint8_t* bytes, size_t len,
                                       sc_workbook** out);
SC_API void sc_workbook_free(sc_workbook* wb);
SC_API sc_status sc_workbook_to_json(const sc_workbook* wb, char** out);
/* Load warnings as a JSON array of strings. */
SC_API sc_status sc_workbook_warnings(const sc_workbook* wb, char** out);

/* AST dump of the formula stored at `cell` ("Sheet!A1"). */
SC_API sc_status sc_cell_ast(const sc_workbook* wb, const char* cell,
                             sc_format format, char** out);
/* Recalculated display value of `cell`. */
SC_API sc_status sc_cell_eval(const sc_workbook* wb, const char* cell,
                              char** out);
/* Parse-print round trip of a formula text. */
SC_API sc_status sc_formula_canonical(const char* formula,
                                      const char* current_sheet, char** out);

/* `mismatches` receives the number of mismatching cells (may be NULL). */
SC_API sc_status sc_recalc_diff(const sc_workbook* wb, sc_format format,
                                char** out, size_t* mismatches);

/* config_json may be NULL for defaults. counts may be NULL. */
SC_API sc_status sc_audit(const sc_workbook* wb, const char* config_json,
                          sc_format format, char** out, sc_counts* counts);

/* Patches as JSON. */
SC_API sc_status sc_generate_checks(const sc_workbook* wb,
                                    const char* config_json, char** out);
SC_API sc_status sc_apply_patches(const sc_workbook* wb,
                                  const char* patches_json, sc_workbook** out);

/* wb may be NULL to skip the internal-check cross-check. */
SC_API sc_status sc_manifest_check(const char* manifest_json,
                                   const sc_workbook* wb, sc_format format,
                                   char** out, sc_counts* counts);
SC_API sc_status sc_default_manifest_path(const char* workbook_path,
                                          char** out);

#ifdef __cplusplus
}
#endif

#endif  // SHEETCHECK_SHEETCHECK_H_
