// Copyright 2026 The noisefp Authors
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


#include <cctype>
#include <fstream>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

#include "noisefp/error.hpp"
#include "noisefp/experiments.hpp"

namespace noisefp::experiments {

namespace {

using ojson = nlohmann::ordered_json;

std::string acc(double v) { return fmt::format("{:.4f}", v); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string slug(const std::string& name) {
  std::string out;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      out += static_cast<char>(std::tolower(u));
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "table" : out;
}

ojson cell_json(const CellInfo& c) {
  return ojson{{"feature", c.feature},
               {"kernel", std::string(svm::to_string(c.kernel))},
               {"c", c.c},
               {"val_accuracy", c.val_accuracy},
               {"converged", c.converged},
               {"split_seed", c.split_seed},
               {"n_train", c.n_train},
               {"n_val", c.n_val},
               {"n_test", c.n_test}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
  if (!out) throw ValidationError("cannot write " + path.string());
}

}  // namespace

std::string format_csv(const AccuracyTable& table) {
  table.validate();
  std::string out = csv_field(table.corner);
  for (const auto& c : table.col_labels) out += "," + csv_field(c);
  out += '\n';
  for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
    out += csv_field(table.row_labels[r]);
    for (double v : table.cells[r]) out += "," + acc(v);
    out += '\n';
  }
  if (!table.column_means.empty()) {
    out += "mean";
    for (const auto& m : table.column_means) out += "," + (m ? acc(*m) : std::string());
    out += '\n';
  }
  return out;
}

std::string format_curve_csv(const Report& report) {
  std::string out = "gap_runs,gap_hours,accuracy\n";
  for (const auto& p : report.curve) out += fmt::format("{},{:.4f},{}\n", p.gap_runs, p.gap_hours, acc(p.accuracy));
  return out;
}

std::string format_markdown(const Report& report) {
  std::string out = fmt::format("# {} report\n\n", to_string(report.experiment));
  out += fmt::format("- seed: {}\n- config hash: {}\n", report.seed, report.config_hash);
  for (const auto& [k, v] : report.notes) out += fmt::format("- {}: {}\n", k, v);
  for (const auto& w : report.warnings) out += fmt::format("- warning: {}\n", w);
  out += "\nCells are test accuracies in [0, 1].\n";

  for (const auto& t : report.tables) {
    out += fmt::format("\n## {}\n\n| {} |", t.name, t.corner);
    for (const auto& c : t.col_labels) out += fmt::format(" {} |", c);
    out += "\n|---|";
    for (std::size_t c = 0; c < t.col_labels.size(); ++c) out += "---|";
    out += '\n';
    for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
      out += fmt::format("| {} |", t.row_labels[r]);
      for (double v : t.cells[r]) out += fmt::format(" {} |", acc(v));
      out += '\n';
    }
    if (!t.column_means.empty()) {
      out += "| mean |";
      for (const auto& m : t.column_means) out += fmt::format(" {} |", m ? acc(*m) : std::string("-"));
      out += '\n';
    }
  }

  if (!report.curve.empty()) {
    out += "\n## accuracy vs gap\n\n| gap runs | gap hours | accuracy |\n|---|---|---|\n";
    for (const auto& p : report.curve) {
      out += fmt::format("| {} | {:.2f} | {} |\n", p.gap_runs, p.gap_hours, acc(p.accuracy));
    }
  }
  return out;
}

std::string format_metadata(const Report& report) {
  ojson j;
  j["experiment"] = std::string(to_string(report.experiment));
  j["seed"] = report.seed;
  j["config_hash"] = report.config_hash;
  ojson notes = ojson::object();
  for (const auto& [k, v] : report.notes) notes[k] = v;
  j["notes"] = notes;
  j["warnings"] = report.warnings;
  ojson tables = ojson::array();
  for (const auto& t : report.tables) {
    ojson cells = ojson::array();
    for (const auto& row : t.info) {
      ojson r = ojson::array();
      for (const auto& c : row) r.push_back(cell_json(c));
      cells.push_back(r);
    }
    tables.push_back(ojson{{"name", t.name}, {"rows", t.row_labels}, {"columns", t.col_labels}, {"cells", cells}});
  }
  j["tables"] = tables;
  if (!report.curve.empty()) {
    ojson curve = ojson::array();
    for (const auto& p : report.curve) {
      curve.push_back(ojson{{"gap_runs", p.gap_runs}, {"gap_hours", p.gap_hours}, {"accuracy", p.accuracy},
                            {"cell", cell_json(p.info)}});
    }
    j["curve"] = curve;
  }
  bool all_converged = true;
  for (const auto& t : report.tables) {
    for (const auto& row : t.info) {
      for (const auto& c : row) all_converged = all_converged && c.converged;
    }
  }
  for (const auto& p : report.curve) all_converged = all_converged && p.info.converged;
  j["all_converged"] = all_converged;
  return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit_report(const Report& report, const std::filesystem::path& out_dir) {
  for (const auto& t : report.tables) t.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ValidationError("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    written.push_back(out_dir / name);
    write_file(written.back(), text);
  };
  emit("report.md", format_markdown(report));
  emit("metadata.json", format_metadata(report));
  for (std::size_t i = 0; i < report.tables.size(); ++i) {
    emit(fmt::format("table_{:02}_{}.csv", i + 1, slug(report.tables[i].name)), format_csv(report.tables[i]));
  }
  if (!report.curve.empty()) emit("curve.csv", format_curve_csv(report));
  return written;
}

}  // namespace noisefp::experiments
