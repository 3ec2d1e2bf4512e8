// Copyright 2026 The tsteer Authors
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

// Named preset channels and seeded random draws shared by the self-test,
// the acceptance binary and the unit tests.

#include <string>
#include <vector>

#include "tsteer/assemblage.hpp"
#include "tsteer/channel.hpp"
#include "tsteer/rng.hpp"

namespace tsteer {

struct CatalogEntry {
  std::string name;
  ChannelSpec spec;
};

std::vector<CatalogEntry> channel_catalog();
const CatalogEntry& catalog_entry(const std::string& name);

// Standard normal via Box-Muller.
double normal(CounterRng& rng);

// Pauli weights drawn uniformly from the probability simplex.
spec::Pauli random_pauli(CounterRng& rng);
// Haar-random element of SU(2).
ComplexMatrix2 random_unitary(CounterRng& rng);
// Uniform over the Bloch ball.
DensityMatrix random_state(CounterRng& rng);
// Random LHS model: 2^N strategy states with Dirichlet weights.
Assemblage random_lhs_assemblage(CounterRng& rng, const std::vector<int>& bases);

}  // namespace tsteer
