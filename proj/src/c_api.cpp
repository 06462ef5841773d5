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

#include "sheetcheck/sheetcheck.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>

#include "json.hpp"
#include "sheetcheck/audit.hpp"
#include "sheetcheck/checks.hpp"
#include "sheetcheck/error.hpp"
#include "sheetcheck/io.hpp"
#include "sheetcheck/manifest.hpp"
#include "sheetcheck/recalc.hpp"

struct sc_workbook {
  sheetcheck::Workbook wb;
};

namespace {

using namespace sheetcheck;

thread_local std::string g_last_error;

sc_status fail(sc_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn, mapping exceptions to status codes.
template <typename Fn>
sc_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return SC_OK;
  } catch (const AddressError& e) {
    return fail(SC_ERR_ADDRESS, e.what());
  } catch (const ParseError& e) {
    return fail(SC_ERR_PARSE, e.what());
  } catch (const LoadError& e) {
    return fail(SC_ERR_LOAD, e.what());
  } catch (const IngestError& e) {
    return fail(SC_ERR_INGEST, e.what());
  } catch (const RangeError& e) {
    return fail(SC_ERR_RANGE, e.what());
  } catch (const ConfigError& e) {
    return fail(SC_ERR_CONFIG, e.what());
  } catch (const GenerationError& e) {
    return fail(SC_ERR_GENERATION, e.what());
  } catch (const ApplyError& e) {
    return fail(SC_ERR_APPLY, e.what());
  } catch (const ManifestError& e) {
    return fail(SC_ERR_MANIFEST, e.what());
  } catch (const IoError& e) {
    return fail(SC_ERR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(SC_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SC_ERR_INTERNAL, e.what());
  }
}

bool valid_format(sc_format f) {
  return f == SC_FORMAT_TEXT || f == SC_FORMAT_JSON;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

AuditConfig config_from(const char* json_text) {
  return json_text ? parse_audit_config(json_text) : AuditConfig{};
}

CellAddress cell_of(const Workbook& wb, const char* text) {
  auto a = wb.canonical(parse_address(text, wb.front_sheet()));
  if (!a) throw AddressError(std::string("no such sheet in '") + text + "'");
  return *a;
}

void set_counts(sc_counts* out, const std::vector<Finding>& findings) {
  if (!out) return;
  *out = sc_counts{0, 0, 0};
  for (const Finding& f : findings) {
    switch (f.severity) {
      case Severity::kError: ++out->error; break;
      case Severity::kWarning: ++out->warning; break;
      case Severity::kInfo: ++out->info; break;
    }
  }
}

nlohmann::json value_json(const CellValue& v) {
  if (v.is_number()) return v.as_number();
  if (v.is_bool()) return v.as_bool();
  if (v.is_blank()) return nullptr;
  return display_text(v);
}

std::string diff_text(const RecalcDiff& d, sc_format format) {
  if (format == SC_FORMAT_JSON) {
    auto list = [](const std::vector<DiffEntry>& entries) {
      nlohmann::json out = nlohmann::json::array();
      for (const DiffEntry& e : entries) {
        nlohmann::json x = {{"cell", format_address(e.address, true)},
                            {"stored", value_json(e.stored)},
                            {"computed", value_json(e.computed)}};
        if (e.delta) x["delta"] = *e.delta;
        out.push_back(std::move(x));
      }
      return out;
    };
    nlohmann::json j = {{"mismatches", list(d.mismatches)},
                        {"unverifiable", list(d.unverifiable)}};
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  for (const DiffEntry& e : d.mismatches) {
    out << format_address(e.address, true) << ": stored "
        << display_text(e.stored) << ", computed " << display_text(e.computed);
    if (e.delta) out << " (delta " << format_general(*e.delta) << ')';
    out << '\n';
  }
  for (const DiffEntry& e : d.unverifiable) {
    out << format_address(e.address, true) << ": unverifiable, stored "
        << display_text(e.stored) << '\n';
  }
  out << d.mismatches.size() << " mismatch(es), " << d.unverifiable.size()
      << " unverifiable\n";
  return out.str();
}

std::string findings_text(const std::vector<Finding>& findings,
                          sc_format format) {
  if (format == SC_FORMAT_JSON) {
    nlohmann::json list = nlohmann::json::array();
    for (const Finding& f : findings) {
      nlohmann::json cells = nlohmann::json::array();
      for (const CellAddress& a : f.cells) cells.push_back(format_address(a, true));
      list.push_back({{"rule", f.rule},
                      {"severity", std::string(severity_text(f.severity))},
                      {"cells", cells},
                      {"message", f.message}});
    }
    return nlohmann::json{{"findings", list}}.dump(2) + "\n";
  }
  std::ostringstream out;
  for (const Finding& f : findings) {
    out << f.rule << ' ' << severity_text(f.severity);
    if (!f.cells.empty()) out << ' ' << format_address(f.cells.front(), true);
    out << ": " << f.message << '\n';
  }
  out << findings.size() << " finding(s)\n";
  return out.str();
}

}  // namespace

extern "C" {

const char* sc_version(void) { return SHEETCHECK_VERSION; }

const char* sc_last_error(void) { return g_last_error.c_str(); }

void sc_string_free(char* s) { std::free(s); }

sc_status sc_workbook_open(const char* path, sc_workbook** out) {
  if (!path || !out) return fail(SC_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new sc_workbook{load_workbook_file(path)};
  });
}

sc_status sc_workbook_from_json(const char* text, size_t len,
                                sc_workbook** out) {
  if (!text || !out) return fail(SC_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new sc_workbook{load_canonical(std::string_view(text, len))};
  });
}

sc_status sc_workbook_from_xlsx(const uint8_t* bytes, size_t len,
                                sc_workbook** out) {
  if (!bytes || !out) return fail(SC_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new sc_workbook{read_xlsx(std::span<const std::uint8_t>(bytes, len))};
  });
}

void sc_workbook_free(sc_workbook* wb) { delete wb; }

sc_status sc_workbook_to_json(const sc_workbook* wb, char** out) {
  if (!wb || !out) return fail(SC_ERR_ARGUMENT, "null argument");
  return guarded([&] { *out = dup(save_canonical(wb->wb)); });
}

sc_status sc_workbook_warnings(const sc_workbook* wb, char** out) {
  if (!wb || !out) return fail(SC_ERR_ARGUMENT, "null argument");
  return guarded([&] { *out = dup(nlohmann::json(wb->wb.warnings()).dump()); });
}

sc_status sc_cell_ast(const sc_workbook* wb, const char* cell,
                      sc_format format, char** out) {
  if (!wb || !cell || !out) return fail(SC_ERR_ARGUMENT, "null argument");
  if (!valid_format(format)) return fail(SC_ERR_ARGUMENT, "unknown format");
  return guarded([&] {
    CellAddress a = cell_of(wb->wb, cell);
    const Cell* c = wb->wb.find_cell(a);
    if (!c || c->formula_text.empty()) {
      throw AddressError(format_address(a, true) + " holds no formula");
    }
    if (!c->has_formula()) {
      // Re-parse to surface the original syntax error.
      parse_formula(c->formula_text, a.sheet);
    }
    *out = dup(dump_ast(c->formula, format == SC_FORMAT_JSON ? AstFormat::kJson
                                                             : AstFormat::kText));
  });
}

sc_status sc_cell_eval(const sc_workbook* wb, const char* cell, char** out) {
  if (!wb || !cell || !out) return fail(SC_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    CellAddress a = cell_of(wb->wb, cell);
    ValueMap values = recalculate(wb->wb);
    *out = dup(display_text(values.at(a)));
  });
}

sc_status sc_formula_canonical(const char* formula, const char* current_sheet,
                               char** out) {
  if (!formula || !current_sheet || !out) {
    return fail(SC_ERR_ARGUMENT, "null argument");
  }
  return guarded([&] {
    *out = dup(print_formula(parse_formula(formula, current_sheet)));
  });
}

sc_status sc_recalc_diff(const sc_workbook* wb, sc_format format, char** out,
                         size_t* mismatches) {
  if (!wb || !out) return fail(SC_ERR_ARGUMENT, "null argument");
  if (!valid_format(format)) return fail(SC_ERR_ARGUMENT, "unknown format");
  return guarded([&] {
    RecalcDiff d = recalc_diff(wb->wb);
    if (mismatches) *mismatches = d.mismatches.size();
    *out = dup(diff_text(d, format));
  });
}

sc_status sc_audit(const sc_workbook* wb, const char* config_json,
                   sc_format format, char** out, sc_counts* counts) {
  if (!wb || !out) return fail(SC_ERR_ARGUMENT, "null argument");
  if (!valid_format(format)) return fail(SC_ERR_ARGUMENT, "unknown format");
  return guarded([&] {
    AuditReport report = run_audit(wb->wb, config_from(config_json));
    set_counts(counts, report.findings);
    *out = dup(format == SC_FORMAT_JSON ? report.to_json() : report.to_text());
  });
}

sc_status sc_generate_checks(const sc_workbook* wb, const char* config_json,
                             char** out) {
  if (!wb || !out) return fail(SC_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    AuditConfig config = config_from(config_json);
    DepGraph graph = build_graph(wb->wb);
    ValueMap values = recalculate(wb->wb, graph);
    AuditContext ctx{wb->wb, graph, values, config};
    *out = dup(patches_to_json(generate_checks(ctx)));
  });
}

sc_status sc_apply_patches(const sc_workbook* wb, const char* patches_json,
                           sc_workbook** out) {
  if (!wb || !patches_json || !out) return fail(SC_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    auto patches = patches_from_json(patches_json, wb->wb);
    *out = new sc_workbook{apply_patches(wb->wb, patches)};
  });
}

sc_status sc_manifest_check(const char* manifest_json, const sc_workbook* wb,
                            sc_format format, char** out, sc_counts* counts) {
  if (!manifest_json || !out) return fail(SC_ERR_ARGUMENT, "null argument");
  if (!valid_format(format)) return fail(SC_ERR_ARGUMENT, "unknown format");
  return guarded([&] {
    auto findings = validate_manifest(manifest_json, wb ? &wb->wb : nullptr);
    set_counts(counts, findings);
    *out = dup(findings_text(findings, format));
  });
}

sc_status sc_default_manifest_path(const char* workbook_path, char** out) {
  if (!workbook_path || !out) return fail(SC_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = dup(default_manifest_path(workbook_path).string());
  });
}

}  // extern "C"
