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

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sheetcheck/sheetcheck.h"

namespace {

constexpr int kClean = 0;
constexpr int kFindings = 1;
constexpr int kFailure = 2;

struct WorkbookDeleter {
  void operator()(sc_workbook* wb) const { sc_workbook_free(wb); }
};
using WorkbookPtr = std::unique_ptr<sc_workbook, WorkbookDeleter>;

struct StringDeleter {
  void operator()(char* s) const { sc_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

// Output of one command on one file, emitted after all files finish.
struct Result {
  int code = kClean;
  std::string out;
  std::string err;
};

std::string error_line(const std::string& context) {
  return "sheetcheck: " + context + ": " + sc_last_error() + "\n";
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), {});
}

WorkbookPtr open_workbook(const std::string& path, Result& r) {
  sc_workbook* wb = nullptr;
  if (sc_workbook_open(path.c_str(), &wb) != SC_OK) {
    r.code = kFailure;
    r.err += error_line(path);
    return nullptr;
  }
  return WorkbookPtr(wb);
}

sc_format format_of(const std::string& name) {
  return name == "json" ? SC_FORMAT_JSON : SC_FORMAT_TEXT;
}

int verdict(const sc_counts& c, const std::string& fail_on) {
  if (c.error > 0) return kFindings;
  if (fail_on == "warning" && c.warning > 0) return kFindings;
  return kClean;
}

Result audit_one(const std::string& path, const std::optional<std::string>& config,
                 const std::string& format, const std::string& fail_on) {
  Result r;
  WorkbookPtr wb = open_workbook(path, r);
  if (!wb) return r;
  char* out = nullptr;
  sc_counts counts{};
  if (sc_audit(wb.get(), config ? config->c_str() : nullptr, format_of(format),
               &out, &counts) != SC_OK) {
    r.code = kFailure;
    r.err = error_line(path);
    return r;
  }
  r.out = OwnedString(out).get();
  r.code = verdict(counts, fail_on);
  return r;
}

int emit(const Result& r) {
  std::cout << r.out;
  std::cerr << r.err;
  return r.code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spreadsheet audit toolkit", "sheetcheck"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sc_version()));

  std::vector<std::string> files;
  std::string file;
  std::string cell;
  std::string format = "text";
  std::string fail_on = "error";
  std::string config_path;
  std::string manifest_path;
  std::string output_path;
  bool apply = false;

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
  };
  auto add_fail_on = [&](CLI::App* cmd) {
    cmd->add_option("--fail-on", fail_on, "Lowest severity that fails the run")
        ->check(CLI::IsMember({"error", "warning"}));
  };

  auto* audit = app.add_subcommand("audit", "Audit workbooks");
  audit->add_option("files", files, "Workbook files (.json or .xlsx)")
      ->required();
  audit->add_option("--config", config_path, "Audit config JSON");
  add_format(audit);
  add_fail_on(audit);

  auto* parse = app.add_subcommand("parse", "Print the AST of a cell formula");
  parse->add_option("file", file)->required();
  parse->add_option("--cell", cell, "Cell such as Data!B67")->required();
  add_format(parse);

  auto* eval = app.add_subcommand("eval", "Print the recalculated value of a cell");
  eval->add_option("file", file)->required();
  eval->add_option("--cell", cell, "Cell such as Data!B67")->required();

  auto* diff = app.add_subcommand("recalc-diff",
                                  "Compare stored values with a recalculation");
  diff->add_option("file", file)->required();
  add_format(diff);

  auto* gen = app.add_subcommand("gen-checks", "Generate cross-foot check cells");
  gen->add_option("file", file)->required();
  gen->add_option("--config", config_path, "Audit config JSON");
  gen->add_flag("--apply", apply, "Write the patched workbook");
  gen->add_option("-o,--output", output_path, "Output path for --apply");

  auto* manifest = app.add_subcommand("manifest-check",
                                      "Validate a governance manifest");
  manifest->add_option("file", file)->required();
  manifest->add_option("--manifest", manifest_path,
                       "Manifest path (default <stem>.manifest.json)");
  add_format(manifest);
  add_fail_on(manifest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kFailure;
  }

  std::optional<std::string> config;
  if (!config_path.empty()) {
    config = read_file(config_path);
    if (!config) {
      std::cerr << "sheetcheck: cannot read config " << config_path << "\n";
      return kFailure;
    }
  }

  if (*audit) {
    std::vector<std::future<Result>> jobs;
    for (const std::string& f : files) {
      jobs.push_back(std::async(std::launch::async, audit_one, f, config,
                                format, fail_on));
    }
    // Several files: text reports get headers, JSON reports form one array.
    bool many = files.size() > 1;
    bool json = format == "json";
    bool first = true;
    int code = kClean;
    if (many && json) std::cout << "[\n";
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      Result r = jobs[i].get();
      if (many && !json) std::cout << "== " << files[i] << "\n";
      if (many && json && !r.out.empty()) {
        if (!first) std::cout << ",\n";
        first = false;
        while (!r.out.empty() && r.out.back() == '\n') r.out.pop_back();
      }
      code = std::max(code, emit(r));
    }
    if (many && json) std::cout << "\n]\n";
    return code;
  }

  Result r;
  WorkbookPtr wb = open_workbook(file, r);
  if (!wb) return emit(r);

  if (*parse || *eval) {
    char* out = nullptr;
    sc_status s = *parse ? sc_cell_ast(wb.get(), cell.c_str(), format_of(format), &out)
                         : sc_cell_eval(wb.get(), cell.c_str(), &out);
    if (s != SC_OK) {
      std::cerr << error_line(cell);
      return kFailure;
    }
    std::string text = OwnedString(out).get();
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return kClean;
  }

  if (*diff) {
    char* out = nullptr;
    std::size_t mismatches = 0;
    if (sc_recalc_diff(wb.get(), format_of(format), &out, &mismatches) != SC_OK) {
      std::cerr << error_line(file);
      return kFailure;
    }
    std::cout << OwnedString(out).get();
    return mismatches > 0 ? kFindings : kClean;
  }

  if (*gen) {
    char* out = nullptr;
    if (sc_generate_checks(wb.get(), config ? config->c_str() : nullptr, &out) !=
        SC_OK) {
      std::cerr << error_line(file);
      return kFailure;
    }
    OwnedString patches(out);
    if (!apply) {
      std::cout << patches.get();
      return kClean;
    }
    sc_workbook* patched = nullptr;
    if (sc_apply_patches(wb.get(), patches.get(), &patched) != SC_OK) {
      std::cerr << error_line(file);
      return kFailure;
    }
    WorkbookPtr owned(patched);
    char* text = nullptr;
    if (sc_workbook_to_json(owned.get(), &text) != SC_OK) {
      std::cerr << error_line(file);
      return kFailure;
    }
    OwnedString json(text);
    if (output_path.empty()) {
      std::cout << json.get();
      return kClean;
    }
    std::ofstream o(output_path, std::ios::binary);
    o << json.get();
    if (!o) {
      std::cerr << "sheetcheck: cannot write " << output_path << "\n";
      return kFailure;
    }
    return kClean;
  }

  // manifest-check
  if (manifest_path.empty()) {
    char* p = nullptr;
    if (sc_default_manifest_path(file.c_str(), &p) != SC_OK) {
      std::cerr << error_line(file);
      return kFailure;
    }
    manifest_path = OwnedString(p).get();
  }
  auto doc = read_file(manifest_path);
  if (!doc) {
    std::cerr << "sheetcheck: cannot read manifest " << manifest_path << "\n";
    return kFailure;
  }
  char* out = nullptr;
  sc_counts counts{};
  if (sc_manifest_check(doc->c_str(), wb.get(), format_of(format), &out,
                        &counts) != SC_OK) {
    std::cerr << error_line(manifest_path);
    return kFailure;
  }
  std::cout << OwnedString(out).get();
  return verdict(counts, fail_on);
}
