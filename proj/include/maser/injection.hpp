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

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "maser/fock.hpp"

namespace maser {

/// Resonant Jaynes-Cummings passage of one initially excited atom,
/// parameterized by the accumulated Rabi angle theta = g tau.
struct KickModel {
  FockSpace space;
  double theta = 0.0;
};

/// cos(theta sqrt(a a†)) evaluated on the Fock basis with the physical
/// eigenvalues n+1 (the truncated product a a† would see a spurious 0 at the
/// top level).
Operator jc_cos_factor(const KickModel& model);

/// a† sin(theta sqrt(a a†)) / sqrt(a a†); the row that would leave the
/// truncated space is clipped to zero.
Operator jc_raise_factor(const KickModel& model);

/// Trace lost per passage through the clipped row, for population sitting at
/// |n_max>: sin²(theta sqrt(n_max + 1)).
double top_clip_rate(const KickModel& model);

/// M1 = Phi − 1 with Phi(rho) = C rho C + S rho S†.  Phi is completely
/// positive and trace-preserving up to the reported clipping.
Superoperator single_atom_kick(const KickModel& model);

/// M_k = (1 + M1)^k − 1: k sequential single-atom passages within one tick.
Superoperator multi_atom_kick(const Superoperator& m1, int k);

/// Finite family k -> M_k.
struct KickFamily {
  FockSpace space;
  std::map<int, Superoperator> kicks;
};

KickFamily jc_kick_family(const KickModel& model, int k_max);

/// Probability table p_k over the number of atoms arriving per tick.
struct InjectionStatistics {
  std::vector<double> probabilities;  // index k

  /// Validates entries in [0,1] and sum 1 to 1e-12.
  static InjectionStatistics from_table(std::vector<double> p);
  int k_max() const { return static_cast<int>(probabilities.size()) - 1; }
  double mean_atoms() const;
};

/// Strictly periodic injection times t_j = j T.
struct PumpSchedule {
  double period = 1.0;
};

/// K = sum_{k>=1} p_k M_k.  Throws if some p_k > 0 has no family member.
Superoperator average_kick(const InjectionStatistics& stats, const KickFamily& family);

/// Draws an atom count from the table.  Uses a fixed 53-bit uniform mapping
/// so a given seed reproduces the same event sequence everywhere.
int sample_event(const InjectionStatistics& stats, std::mt19937_64& rng);

}  // namespace maser
