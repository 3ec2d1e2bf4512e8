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

// Alice -> Bob transmission modelled as a Kraus channel whose operators carry
// branch labels (lambda), plus the catalog of channels and eavesdropper
// presets used throughout the library.

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "tsteer/qubit.hpp"

namespace tsteer {

struct KrausOperator {
  std::string label;
  ComplexMatrix2 op;
};

struct ChannelValidation {
  double residual = 0.0;  // max-abs entry of sum K^dag K - I
  std::size_t branch_count = 0;
  bool trace_preserving = false;
};

inline constexpr double kTracePreservationTol = 1e-10;

class Channel {
 public:
  // Accepts any non-empty list of finite operators; trace preservation is
  // checked by validate() and enforced by apply().
  explicit Channel(std::vector<KrausOperator> kraus);

  const std::vector<KrausOperator>& kraus() const { return kraus_; }
  std::size_t size() const { return kraus_.size(); }

 private:
  std::vector<KrausOperator> kraus_;
};

struct BranchOutcome {
  std::string label;
  double probability;
  DensityMatrix state;
};

ChannelValidation validate(const Channel& channel);

// sum_lambda K rho K^dag.
DensityMatrix apply(const Channel& channel, const DensityMatrix& rho);

// Per-branch probability and post-branch state; branches below 1e-14 are dropped.
std::vector<BranchOutcome> branch_decompose(const Channel& channel, const DensityMatrix& rho);

// Kraus set of a Pauli channel with weights (p_I, p_x, p_y, p_z).
Channel pauli_weights_channel(const std::array<double, 4>& weights);
// Pauli channel with Bloch multipliers (l_x, l_y, l_z); throws DomainError when not CP.
Channel pauli_multiplier_channel(const std::array<double, 3>& multipliers);

struct ChannelSpec;

namespace spec {
struct Identity {};
struct Unitary {
  std::array<double, 3> axis{0.0, 0.0, 1.0};
  double angle = 0.0;
};
// Bloch visibility v: r -> v r.
struct Depolarizing {
  double v = 1.0;
};
struct PhaseDamping {
  double p = 0.0;
  int axis = 3;
};
struct AmplitudeDamping {
  double g = 0.0;
};
struct Pauli {
  double px = 0.0, py = 0.0, pz = 0.0;
};
struct InterceptResend {
  std::vector<int> bases;
};
// Effective channel of the optimal universal cloner: depolarizing(2/3).
struct UniversalCloner {};
// Effective channel of the optimal phase-covariant cloner for the given plane
// ("xz", "xy" or "yz"): in-plane multipliers 1/sqrt(2), out-of-plane 1/2.
struct PhaseCovariant {
  std::string plane = "xz";
};
struct Composite {
  std::vector<ChannelSpec> parts;
};
struct Kraus {
  std::vector<ComplexMatrix2> operators;
  std::vector<std::string> labels;
};
}  // namespace spec

struct ChannelSpec {
  std::variant<spec::Identity, spec::Unitary, spec::Depolarizing, spec::PhaseDamping, spec::AmplitudeDamping,
               spec::Pauli, spec::InterceptResend, spec::UniversalCloner, spec::PhaseCovariant, spec::Composite,
               spec::Kraus>
      kind;
};

Channel make_channel(const ChannelSpec& spec);

// Convenience constructors for the catalog.
Channel identity_channel();
Channel depolarizing(double v);
Channel intercept_resend(const std::vector<int>& bases);

// Channel that applies `first`, then `second`.
Channel compose(const Channel& first, const Channel& second);

}  // namespace tsteer
