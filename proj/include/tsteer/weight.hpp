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

// Temporal steerable weight w_t: the smallest fraction of genuinely
// steerable assemblage needed to write an assemblage as a convex mixture with
// a local-hidden-state model. 1 - w_t is the optimum of
//
//   maximize    tr sum_gamma rho_gamma
//   subject to  rho_{a|A_i} - sum_gamma D_gamma(a|A_i) rho_gamma  PSD,
//               rho_gamma PSD.

#include <array>
#include <vector>

#include "tsteer/assemblage.hpp"
#include "tsteer/sdp.hpp"

namespace tsteer {

inline constexpr double kDefaultSdpTol = 1e-8;
// w_t below this is reported as exactly zero (raw value kept).
inline constexpr double kWeightZeroThreshold = 1e-6;

// Where rho_gamma may live. A rank-deficient member forces every strategy
// that feeds it into the member's range, so those rho_gamma collapse to a ray
// t |v><v| (one variable) or to zero. Removing these faces up front keeps the
// SDP strictly feasible, which pure-state assemblages otherwise are not.
struct StrategyFace {
  enum class Kind { full, ray, zero };
  Kind kind = Kind::full;
  std::array<Complex, 2> v{};  // ray direction
  int first_var = -1;          // full: 4 Pauli coordinates; ray: t
};

inline constexpr double kFaceTol = 1e-9;

struct WeightSdp {
  sdp::Problem problem;
  int n = 0;
  int strategies = 0;  // 2^N LHS states
  std::vector<StrategyFace> faces;
  int lmi_count = 0;  // assemblage constraints (blocks 0..lmi_count-1)
  int psd_count = 0;  // positivity constraints (the remaining blocks)

  ComplexMatrix2 witness(int gamma, const std::vector<double>& y) const;
};

WeightSdp build_weight_sdp(const Assemblage& assemblage);

struct WeightResult {
  double w_t = 0.0;
  double raw_w_t = 0.0;  // 1 - primal value, before clamping and zero snapping
  sdp::Solution solution;
  std::vector<ComplexMatrix2> lhs_witness;  // the optimal rho_gamma
  // Smallest eigenvalue of every member - sum rho_gamma and every rho_gamma,
  // evaluated at the witness on the unreduced constraints.
  double witness_min_eigenvalue = 0.0;
};

// Throws NumericalError unless the solver reports an optimal point.
WeightResult steerable_weight(const Assemblage& assemblage, double tol = kDefaultSdpTol);

// |w_t(assemblage) - w_t(U assemblage U^dag)| from two independent solves.
double unitary_invariance_check(const Assemblage& assemblage, const ComplexMatrix2& unitary,
                                double tol = kDefaultSdpTol);

}  // namespace tsteer
