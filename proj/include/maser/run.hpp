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

#include "maser/report.hpp"

namespace maser {

/// Executes a validated configuration: micro, macro, compare, stochastic or
/// sweep.  Module errors propagate as exceptions; diagnostic-gate outcomes
/// are recorded on the report (a failed gate does not throw, so outputs can
/// still be written).
RunReport run(const SimulationConfig& config);

}  // namespace maser
