// Copyright 2026 the maserlab authors
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

#include "maser/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace maser {

bool RunReport::gates_passed() const {
  for (const auto& g : gates)
    if (!g.pass) return false;
  return true;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_string(const RunReport& report) {
  const bool dev_col = report.effective_mode == "compare";
  std::string out = "time,mode,mean_n,variance,mandel_q,purity,top_level_population";
  if (dev_col) out += ",dev_mean_n";
  out += "\n";
  const bool sweep = report.config.mode == "sweep";
  for (const auto& block : report.blocks) {
    if (sweep) {
      out += "# point " + std::to_string(block.index);
      for (const auto& [k, v] : block.labels) out += " " + k + "=" + v;
      out += "\n";
    }
    for (const auto& row : block.rows) {
      out += format_double(row.time);
      out += ",";
      out += row.mode;
      out += ",";
      out += format_double(row.stats.mean_n);
      out += ",";
      out += format_double(row.stats.variance);
      out += ",";
      if (row.stats.mandel_q) out += format_double(*row.stats.mandel_q);
      out += ",";
      out += format_double(row.stats.purity);
      out += ",";
      out += format_double(row.stats.top_level_population);
      if (dev_col) {
        out += ",";
        if (row.dev_mean_n) out += format_double(*row.dev_mean_n);
      }
      out += "\n";
    }
  }
  return out;
}

void emit_csv(const RunReport& report, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << csv_string(report);
  if (!f) throw Error("failed writing '" + path + "'");
}

std::string json_string(const RunReport& report) {
  nlohmann::json j;
  j["config"] = report.config.echo;
  j["mode"] = report.config.mode;
  j["effective_mode"] = report.effective_mode;
  j["wall_ms"] = report.wall_ms;

  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& block : report.blocks) {
    nlohmann::json b;
    b["index"] = block.index;
    nlohmann::json labels = nlohmann::json::object();
    for (const auto& [k, v] : block.labels) labels[k] = v;
    b["labels"] = labels;
    b["rows"] = block.rows.size();
    b["diagnostics"] = block.diagnostics.values;
    if (!block.diagnostics.notes.empty()) b["notes"] = block.diagnostics.notes;
    blocks.push_back(std::move(b));
  }
  j["blocks"] = std::move(blocks);

  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : report.gates) {
    nlohmann::json e;
    e["name"] = g.name;
    e["threshold"] = g.threshold;
    e["value"] = g.value;
    e["pass"] = g.pass;
    if (!g.note.empty()) e["note"] = g.note;
    gates.push_back(std::move(e));
  }
  j["gates"] = std::move(gates);
  j["gates_passed"] = report.gates_passed();
  return j.dump(2) + "\n";
}

void emit_json(const RunReport& report, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << json_string(report);
  if (!f) throw Error("failed writing '" + path + "'");
}

std::string json_sidecar_path(const std::string& csv_path) {
  const auto slash = csv_path.find_last_of('/');
  const auto dot = csv_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return csv_path + ".json";
  return csv_path.substr(0, dot) + ".json";
}

}  // namespace maser
