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

// Assemblages {rho_{a|A_i}}: the subnormalized conditional states Bob holds,
// indexed by Alice's basis i and outcome a. Also the deterministic strategy
// tables D_gamma(a|A_i) that define local-hidden-state (unsteerable) models,
// and linear-inversion tomography from Bob's counts.

#include <array>
#include <optional>
#include <vector>

#include "tsteer/channel.hpp"
#include "tsteer/qubit.hpp"

namespace tsteer {

class StrategyTable {
 public:
  explicit StrategyTable(int n);

  int n() const { return n_; }
  int columns() const { return static_cast<int>(assignments_.size()); }
  // Outcome (+1/-1) that strategy gamma (0-based) assigns to the basis at
  // position pos (0-based, in the order of the assemblage's bases).
  int assigned(int gamma, int pos) const { return assignments_[gamma][pos]; }
  // D_gamma(a | A_{pos+1}) in {0, 1}.
  int value(int gamma, int pos, int outcome) const { return assigned(gamma, pos) == outcome ? 1 : 0; }
  // Bit matrix in print order: rows (-1|A_1), (+1|A_1), (-1|A_2), ...; columns D_1..D_{2^N}.
  std::vector<std::vector<int>> rows() const;

 private:
  int n_;
  std::vector<std::vector<int>> assignments_;
};

StrategyTable strategy_table(int n);

inline constexpr double kConsistencyTol = 1e-8;

class Assemblage {
 public:
  // members[2k] = rho_{+1|A_{bases[k]}}, members[2k + 1] = rho_{-1|A_{bases[k]}}.
  // Members must be Hermitian and PSD within tolerance; consistency is
  // reported by check_consistency() rather than enforced here.
  Assemblage(std::vector<int> bases, std::vector<ComplexMatrix2> members, const Tolerances& tol = {});

  int n() const { return static_cast<int>(bases_.size()); }
  const std::vector<int>& bases() const { return bases_; }
  const std::vector<ComplexMatrix2>& members() const { return members_; }
  const ComplexMatrix2& member(int basis, int outcome) const;
  const ComplexMatrix2& member_at(int pos, int outcome) const { return members_[2 * pos + (outcome == 1 ? 0 : 1)]; }

 private:
  std::vector<int> bases_;
  std::vector<ComplexMatrix2> members_;
};

// rho_{a|A_i} = 1/2 channel(|a, A_i><a, A_i|).
Assemblage build_assemblage(const Channel& channel, int n);
Assemblage build_assemblage(const Channel& channel, const std::vector<int>& bases);

// max_i |tr sum_a rho_{a|A_i} - 1|.
double check_consistency(const Assemblage& assemblage);

// rho_{a|A_i} = sum_gamma D_gamma(a|A_i) rho_gamma. `states` holds 2^N PSD
// matrices with total trace 1.
Assemblage lhs_assemblage(const StrategyTable& table, const std::vector<ComplexMatrix2>& states,
                          std::optional<std::vector<int>> bases = std::nullopt, const Tolerances& tol = {});

// U rho U^dag applied to every member.
Assemblage conjugate(const Assemblage& assemblage, const ComplexMatrix2& unitary);

// (1 - t) first + t second; both must share the same bases.
Assemblage mix(const Assemblage& first, const Assemblage& second, double t);

// Per member, the Frobenius norm of its off-diagonal part in the A_i
// eigenbasis: the coherences S_N does not see. Ordered like members().
std::vector<double> offdiagonal_remainder(const Assemblage& assemblage);

// Bob's outcome counts n[j][b] when measuring sigma_j after preparation (i, a).
class TomographyCounts {
 public:
  explicit TomographyCounts(std::vector<int> bases);

  const std::vector<int>& bases() const { return bases_; }
  void add(int i, int a, int j, int b, double count);
  double get(int i, int a, int j, int b) const;
  // Total over j and b for one preparation.
  double preparation_total(int i, int a) const;

 private:
  std::size_t slot(int i, int a) const;
  std::vector<int> bases_;
  std::vector<std::array<std::array<double, 2>, 3>> cells_;
};

struct Reconstruction {
  Assemblage assemblage;
  // Per member (ordered like members()): the linear-inversion estimate had a
  // negative eigenvalue and was projected back onto the state space.
  std::vector<bool> projected;
  bool any_projected() const;
};

// Linear inversion rho = (I + sum_j r_j sigma_j)/2 per preparation, with
// r_j the empirical mean of b. Estimates with |r| > 1 are clipped to the
// nearest state (negative eigenvalue set to 0, trace renormalized). Members
// are weighted by `priors` (ordered like members(); default 1/2 each).
Reconstruction reconstruct(const TomographyCounts& counts,
                           const std::optional<std::vector<double>>& priors = std::nullopt);

// Exact expected counts (total `shots` per setting) from a channel.
TomographyCounts expected_counts(const Channel& channel, const std::vector<int>& bases, double shots);

}  // namespace tsteer
