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

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "maser/run.hpp"

namespace maser {

/// A shipped, named run: a config document plus an optional check evaluated
/// on the finished report (throws GateError on failure).  The same texts are
/// kept as files under scenarios/ for diffability.
struct Scenario {
  std::string name;
  std::string description;
  std::string config_text;
  std::function<void(const RunReport&)> extra_check;
};

const std::vector<Scenario>& scenario_registry();

const Scenario* find_scenario(const std::string& name);

/// Parses, runs, writes CSV + JSON sidecar, evaluates gates and the
/// scenario's extra check.  Throws GateError if any gate failed.
RunReport run_scenario(const Scenario& scenario, const std::string& out_override = "");

}  // namespace maser
