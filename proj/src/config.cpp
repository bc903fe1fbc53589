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

#include "maser/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace maser {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string print_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct RawEntry {
  std::string section, key, value;
  int line = 0;
  bool used = false;
};

struct RawDoc {
  std::vector<RawEntry> entries;
  std::vector<std::string> problems;
};

RawDoc tokenize(const std::string& text) {
  RawDoc doc;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        doc.problems.push_back("line " + std::to_string(lineno) +
                               ": malformed section header '" + line + "'");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      doc.problems.push_back("line " + std::to_string(lineno) +
                             ": expected 'key = value', got '" + line + "'");
      continue;
    }
    if (section.empty()) {
      doc.problems.push_back("line " + std::to_string(lineno) +
                             ": entry outside any [section]");
      continue;
    }
    RawEntry e;
    e.section = section;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = lineno;
    if (e.key.empty()) {
      doc.problems.push_back("line " + std::to_string(lineno) + ": empty key");
      continue;
    }
    doc.entries.push_back(std::move(e));
  }
  return doc;
}

bool parse_double_strict(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

bool parse_long_strict(const std::string& s, long* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

bool parse_uint64_strict(const std::string& s, std::uint64_t* out) {
  if (s.empty() || s.front() == '-') return false;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

const std::set<std::string>& gate_names() {
  static const std::set<std::string> names = {
      "max_dev_mean_n",     "max_trace_distance", "top_level_population",
      "truncation_flux",    "series_tail",        "method_residual",
      "steady_state_trace_distance", "kernel_residual", "choi_min",
      "strobo_trace",       "spectrum_re_max",    "decay_oracle",
      "stochastic_consistency"};
  return names;
}

// Gate -> run modes it applies to.
bool gate_applies(const std::string& gate, const std::string& mode) {
  if (gate == "max_dev_mean_n" || gate == "max_trace_distance") return mode == "compare";
  if (gate == "decay_oracle") return mode == "micro";
  if (gate == "stochastic_consistency") return mode == "stochastic";
  if (gate == "method_residual" || gate == "steady_state_trace_distance" ||
      gate == "kernel_residual" || gate == "series_tail")
    return mode == "macro" || mode == "compare";
  return true;  // structural gates apply everywhere
}

class Assembler {
 public:
  Assembler(RawDoc doc) : doc_(std::move(doc)) {
    problems_ = doc_.problems;
  }

  std::optional<std::string> take(const std::string& section, const std::string& key) {
    std::optional<std::string> result;
    for (auto& e : doc_.entries) {
      if (e.section != section || e.key != key) continue;
      if (e.used || result) {
        problems_.push_back("line " + std::to_string(e.line) + ": duplicate key " +
                            section + "." + key);
        e.used = true;
        continue;
      }
      e.used = true;
      result = e.value;
    }
    return result;
  }

  double take_double(const std::string& sec, const std::string& key, double fallback,
                     bool required = false) {
    const auto raw = take(sec, key);
    if (!raw) {
      if (required) problems_.push_back("missing required key " + sec + "." + key);
      return fallback;
    }
    double v = fallback;
    if (!parse_double_strict(*raw, &v))
      problems_.push_back(sec + "." + key + ": '" + *raw + "' is not a number");
    return v;
  }

  long take_long(const std::string& sec, const std::string& key, long fallback,
                 bool required = false) {
    const auto raw = take(sec, key);
    if (!raw) {
      if (required) problems_.push_back("missing required key " + sec + "." + key);
      return fallback;
    }
    long v = fallback;
    if (!parse_long_strict(*raw, &v))
      problems_.push_back(sec + "." + key + ": '" + *raw + "' is not an integer");
    return v;
  }

  void note(const std::string& msg) { problems_.push_back(msg); }

  void reject_unknown() {
    for (const auto& e : doc_.entries)
      if (!e.used)
        problems_.push_back("line " + std::to_string(e.line) + ": unknown key " +
                            e.section + "." + e.key);
  }

  std::vector<RawEntry>& entries() { return doc_.entries; }
  std::vector<std::string>& problems() { return problems_; }

 private:
  RawDoc doc_;
  std::vector<std::string> problems_;
};

std::vector<double> parse_injection_table(const std::string& raw,
                                          std::vector<std::string>& problems) {
  std::vector<std::pair<long, double>> pairs;
  std::istringstream in(raw);
  std::string item;
  bool ok = true;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    const auto colon = item.find(':');
    long k = -1;
    double v = 0.0;
    if (colon == std::string::npos ||
        !parse_long_strict(trim(item.substr(0, colon)), &k) ||
        !parse_double_strict(trim(item.substr(colon + 1)), &v)) {
      problems.push_back("pump.p: malformed entry '" + item +
                         "' (expected k:probability)");
      ok = false;
      continue;
    }
    if (k < 0) {
      problems.push_back("pump.p: negative atom count " + std::to_string(k));
      ok = false;
      continue;
    }
    pairs.emplace_back(k, v);
  }
  if (pairs.empty()) {
    problems.push_back("pump.p: empty injection table");
    ok = false;
  }
  if (!ok) return {};

  long k_max = 0;
  for (auto& [k, v] : pairs) k_max = std::max(k_max, k);
  if (k_max > 64) {
    problems.push_back("pump.p: atom counts above 64 are not supported");
    return {};
  }
  std::vector<double> table(k_max + 1, 0.0);
  std::set<long> seen;
  double sum = 0.0;
  for (auto& [k, v] : pairs) {
    if (!seen.insert(k).second)
      problems.push_back("pump.p: duplicate atom count " + std::to_string(k));
    if (v < 0.0 || v > 1.0)
      problems.push_back("pump.p: probability " + print_double(v) + " outside [0, 1]");
    table[k] = v;
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    problems.push_back("pump.p: injection probabilities sum to " + print_double(sum));
  return table;
}

std::string rebuild_document(const std::vector<std::pair<std::string, std::string>>& raw) {
  std::string text;
  for (const auto& [full_key, value] : raw) {
    const auto dot = full_key.find('.');
    text += "[" + full_key.substr(0, dot) + "]\n";
    text += full_key.substr(dot + 1) + " = " + value + "\n";
  }
  return text;
}

SimulationConfig assemble(RawDoc doc) {
  Assembler a(std::move(doc));
  SimulationConfig cfg;

  // cavity
  cfg.n_max = static_cast<int>(a.take_long("cavity", "n_max", 1, true));
  if (cfg.n_max < 1) a.note("cavity.n_max must be >= 1");
  cfg.kappa = a.take_double("cavity", "kappa", 0.0, true);
  if (cfg.kappa < 0) a.note("cavity.kappa must be >= 0");
  cfg.n_th = a.take_double("cavity", "n_th", 0.0);
  if (cfg.n_th < 0) a.note("cavity.n_th must be >= 0");

  // pump
  cfg.theta = a.take_double("pump", "theta", 0.0, true);
  if (cfg.theta < 0) a.note("pump.theta must be >= 0");
  cfg.period = a.take_double("pump", "period", 1.0, true);
  if (cfg.period <= 0) a.note("pump.period must be > 0");
  if (const auto raw = a.take("pump", "p"); raw)
    cfg.p = parse_injection_table(*raw, a.problems());
  else
    a.note("missing required key pump.p");
  cfg.multi_atom = a.take("pump", "multi_atom").value_or("sequential");
  if (cfg.multi_atom != "sequential")
    a.note("pump.multi_atom: only the sequential composition model is implemented, got '" +
           cfg.multi_atom + "'");

  // filter
  const std::string kind = a.take("filter", "kind").value_or("rectangular");
  if (kind == "rectangular")
    cfg.filter_kind = CoarseGrainFilter::Kind::rectangular;
  else if (kind == "triangular")
    cfg.filter_kind = CoarseGrainFilter::Kind::triangular;
  else if (kind == "gaussian")
    cfg.filter_kind = CoarseGrainFilter::Kind::gaussian;
  else
    a.note("filter.kind: unknown kind '" + kind +
           "' (rectangular, triangular, gaussian)");
  const auto width = a.take("filter", "width");
  const auto width_periods = a.take("filter", "width_periods");
  if (width && width_periods)
    a.note("filter.width and filter.width_periods are mutually exclusive");
  if (width) {
    double w = 0;
    if (!parse_double_strict(*width, &w))
      a.note("filter.width: '" + *width + "' is not a number");
    cfg.filter_width = w;
  } else if (width_periods) {
    double w = 0;
    if (!parse_double_strict(*width_periods, &w))
      a.note("filter.width_periods: '" + *width_periods + "' is not a number");
    cfg.filter_width = w * cfg.period;
  } else {
    cfg.filter_width = 10.0 * cfg.period;
  }
  if (cfg.filter_width < cfg.period)
    a.note("filter width below injection period (width " +
           print_double(cfg.filter_width) + ", period " + print_double(cfg.period) + ")");

  // run
  cfg.mode = a.take("run", "mode").value_or("");
  static const std::set<std::string> modes = {"micro", "macro", "compare",
                                              "stochastic", "sweep"};
  if (cfg.mode.empty())
    a.note("missing required key run.mode");
  else if (!modes.count(cfg.mode))
    a.note("run.mode: unknown mode '" + cfg.mode + "'");
  cfg.n_periods = a.take_long("run", "n_periods", 1, true);
  if (cfg.n_periods < 1) a.note("run.n_periods must be >= 1");
  cfg.samples_per_period = static_cast<int>(a.take_long("run", "samples_per_period", 8));
  if (cfg.samples_per_period < 1) a.note("run.samples_per_period must be >= 1");
  cfg.method = a.take("run", "method").value_or("spectral");
  if (cfg.method != "spectral" && cfg.method != "series")
    a.note("run.method: unknown method '" + cfg.method + "'");
  cfg.series_l_max = a.take_long("run", "series_l_max", 1 << 16);
  if (cfg.series_l_max < 1) a.note("run.series_l_max must be >= 1");
  cfg.series_tail_tol = a.take_double("run", "series_tail_tol", 1e-10);
  if (cfg.series_tail_tol <= 0) a.note("run.series_tail_tol must be > 0");
  if (const auto raw = a.take("run", "seed"); raw) {
    if (!parse_uint64_strict(*raw, &cfg.seed))
      a.note("run.seed: '" + *raw + "' is not a non-negative integer");
  }
  cfg.realizations = static_cast<int>(a.take_long("run", "realizations", 1));
  if (cfg.realizations < 1) a.note("run.realizations must be >= 1");
  cfg.workers = static_cast<int>(a.take_long("run", "workers", 1));
  if (cfg.workers < 1) a.note("run.workers must be >= 1");
  cfg.initial = a.take("run", "initial").value_or("vacuum");
  if (cfg.initial != "vacuum") {
    if (cfg.initial.rfind("fock:", 0) == 0) {
      long n = -1;
      if (!parse_long_strict(cfg.initial.substr(5), &n) || n < 0 || n > cfg.n_max)
        a.note("run.initial: fock level outside [0, n_max] in '" + cfg.initial + "'");
    } else if (cfg.initial.rfind("thermal:", 0) == 0) {
      double x = -1;
      if (!parse_double_strict(cfg.initial.substr(8), &x) || x < 0)
        a.note("run.initial: thermal occupation must be >= 0 in '" + cfg.initial + "'");
    } else {
      a.note("run.initial: unknown state '" + cfg.initial +
             "' (vacuum, fock:<n>, thermal:<x>)");
    }
  }
  cfg.macro_seed = a.take("run", "macro_seed").value_or("filtered");
  if (cfg.macro_seed != "filtered" && cfg.macro_seed != "plain")
    a.note("run.macro_seed: expected filtered or plain, got '" + cfg.macro_seed + "'");

  // output
  cfg.output_path = a.take("output", "path").value_or("out.csv");

  // gates
  for (auto& e : a.entries()) {
    if (e.section != "gates" || e.used) continue;
    e.used = true;
    if (!gate_names().count(e.key)) {
      a.note("gates." + e.key + ": unknown gate");
      continue;
    }
    double v = 0;
    if (!parse_double_strict(e.value, &v)) {
      a.note("gates." + e.key + ": '" + e.value + "' is not a number");
      continue;
    }
    cfg.gates[e.key] = v;
  }

  // sweep
  bool saw_sweep_section = false;
  SweepSpec sweep;
  if (const auto m = a.take("sweep", "mode"); m) {
    saw_sweep_section = true;
    sweep.mode = *m;
    static const std::set<std::string> inner = {"micro", "macro", "compare", "stochastic"};
    if (!inner.count(sweep.mode))
      a.note("sweep.mode: unknown mode '" + sweep.mode + "'");
  }
  for (auto& e : a.entries()) {
    if (e.section != "sweep" || e.used) continue;
    e.used = true;
    saw_sweep_section = true;
    const auto dot = e.key.find('.');
    const std::string sec = dot == std::string::npos ? "" : e.key.substr(0, dot);
    if (sec != "cavity" && sec != "pump" && sec != "filter") {
      a.note("sweep." + e.key +
             ": sweep axes must name cavity.*, pump.* or filter.* keys");
      continue;
    }
    SweepAxis axis;
    axis.key = e.key;
    std::istringstream in(e.value);
    std::string item;
    while (std::getline(in, item, ';')) {
      item = trim(item);
      if (!item.empty()) axis.values.push_back(item);
    }
    if (axis.values.empty()) {
      a.note("sweep." + e.key + ": empty value list");
      continue;
    }
    sweep.axes.push_back(std::move(axis));
  }
  if (cfg.mode == "sweep") {
    if (!saw_sweep_section || sweep.mode.empty())
      a.note("run.mode = sweep requires a [sweep] section with a mode key");
    if (sweep.axes.empty()) a.note("sweep: at least one axis is required");
    std::size_t grid = 1;
    for (const auto& ax : sweep.axes) grid *= ax.values.size();
    if (grid > 1000)
      a.note("sweep: grid has " + std::to_string(grid) + " points (limit 1000)");
    cfg.sweep = std::move(sweep);
  } else if (saw_sweep_section) {
    a.note("[sweep] section requires run.mode = sweep");
  }

  // gate applicability against the effective inner mode
  const std::string effective =
      cfg.mode == "sweep" && cfg.sweep ? cfg.sweep->mode : cfg.mode;
  for (const auto& [gate, value] : cfg.gates) {
    (void)value;
    if (!effective.empty() && !gate_applies(gate, effective))
      a.note("gates." + gate + " does not apply to mode '" + effective + "'");
  }

  a.reject_unknown();

  if (!a.problems().empty()) throw ConfigError(a.problems());

  // echo: explicit entries verbatim, defaults printed
  for (const auto& e : a.entries()) {
    cfg.echo[e.section + "." + e.key] = e.value;
    cfg.raw[e.section + "." + e.key] = e.value;
  }
  auto fill = [&cfg](const std::string& key, const std::string& v) {
    cfg.echo.emplace(key, v);
  };
  fill("cavity.n_th", print_double(cfg.n_th));
  fill("pump.multi_atom", cfg.multi_atom);
  fill("filter.kind", kind);
  fill("filter.width", print_double(cfg.filter_width));
  fill("run.samples_per_period", std::to_string(cfg.samples_per_period));
  fill("run.method", cfg.method);
  fill("run.series_l_max", std::to_string(cfg.series_l_max));
  fill("run.series_tail_tol", print_double(cfg.series_tail_tol));
  fill("run.seed", std::to_string(cfg.seed));
  fill("run.realizations", std::to_string(cfg.realizations));
  fill("run.workers", std::to_string(cfg.workers));
  fill("run.initial", cfg.initial);
  fill("run.macro_seed", cfg.macro_seed);
  fill("output.path", cfg.output_path);
  return cfg;
}

std::vector<std::pair<std::string, std::string>> explicit_pairs(
    const SimulationConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, value] : cfg.raw) {
    if (key.rfind("sweep.", 0) == 0) continue;
    out.emplace_back(key, value);
  }
  return out;
}

}  // namespace

SimulationConfig parse_config(const std::string& text) {
  return assemble(tokenize(text));
}

SimulationConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<SweepPoint> expand_sweep(const SimulationConfig& base) {
  if (!base.sweep) throw Error("expand_sweep: config has no sweep section");
  const auto& spec = *base.sweep;

  std::vector<SweepPoint> points;
  std::vector<std::size_t> idx(spec.axes.size(), 0);
  while (true) {
    std::vector<std::pair<std::string, std::string>> overrides;
    overrides.emplace_back("run.mode", spec.mode);
    std::vector<std::pair<std::string, std::string>> labels;
    for (std::size_t i = 0; i < spec.axes.size(); ++i) {
      overrides.emplace_back(spec.axes[i].key, spec.axes[i].values[idx[i]]);
      labels.emplace_back(spec.axes[i].key, spec.axes[i].values[idx[i]]);
    }

    auto pairs = explicit_pairs(base);
    for (const auto& [k, v] : overrides) {
      bool replaced = false;
      for (auto& p : pairs)
        if (p.first == k) {
          p.second = v;
          replaced = true;
        }
      if (!replaced) pairs.emplace_back(k, v);
    }
    SweepPoint point;
    try {
      point.config = parse_config(rebuild_document(pairs));
    } catch (const ConfigError& e) {
      std::vector<std::string> wrapped;
      std::string label = "sweep point";
      for (const auto& [k, v] : labels) label += " " + k + "=" + v;
      for (const auto& v : e.violations) wrapped.push_back(label + ": " + v);
      throw ConfigError(wrapped);
    }
    point.labels = std::move(labels);
    points.push_back(std::move(point));

    std::size_t axis = spec.axes.size();
    while (axis > 0) {
      --axis;
      if (++idx[axis] < spec.axes[axis].values.size()) break;
      idx[axis] = 0;
      if (axis == 0) return points;
    }
    if (spec.axes.empty()) return points;
  }
}

SimulationConfig reparse_with_overrides(
    const SimulationConfig& base,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::vector<std::pair<std::string, std::string>> pairs(base.raw.begin(),
                                                         base.raw.end());
  for (const auto& [k, v] : overrides) {
    bool replaced = false;
    for (auto& p : pairs)
      if (p.first == k) {
        p.second = v;
        replaced = true;
      }
    if (!replaced) pairs.emplace_back(k, v);
  }
  return parse_config(rebuild_document(pairs));
}

DensityOperator initial_state(const SimulationConfig& config) {
  const FockSpace space = config.space();
  if (config.initial == "vacuum") return fock_state(space, 0);
  if (config.initial.rfind("fock:", 0) == 0)
    return fock_state(space, std::atoi(config.initial.c_str() + 5));
  if (config.initial.rfind("thermal:", 0) == 0)
    return thermal_state(space, std::atof(config.initial.c_str() + 8));
  throw Error("initial_state: unknown initial state '" + config.initial + "'");
}

}  // namespace maser
