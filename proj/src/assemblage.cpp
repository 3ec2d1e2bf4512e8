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

#include "tsteer/assemblage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsteer/error.hpp"
#include "tsteer/metrics.hpp"

namespace tsteer {

namespace {

constexpr double kProjectionSlack = 1e-12;

int outcome_slot(int a) { return a == 1 ? 0 : 1; }

}  // namespace

StrategyTable::StrategyTable(int n) : n_(n) {
  if (n == 2) {
    // Column order of the printed BB84 table: D_1..D_4.
    assignments_ = {{+1, -1}, {+1, +1}, {-1, -1}, {-1, +1}};
  } else if (n == 3) {
    // Six-state table: binary counting, +1 before -1, first basis most significant.
    for (int g = 0; g < 8; ++g) {
      assignments_.push_back({(g & 4) ? -1 : +1, (g & 2) ? -1 : +1, (g & 1) ? -1 : +1});
    }
  } else {
    throw DomainError("strategy tables exist for N = 2 or 3, got " + std::to_string(n));
  }
}

std::vector<std::vector<int>> StrategyTable::rows() const {
  std::vector<std::vector<int>> out;
  for (int pos = 0; pos < n_; ++pos) {
    for (int a : {-1, +1}) {
      std::vector<int> row;
      for (int g = 0; g < columns(); ++g) row.push_back(value(g, pos, a));
      out.push_back(std::move(row));
    }
  }
  return out;
}

StrategyTable strategy_table(int n) { return StrategyTable(n); }

Assemblage::Assemblage(std::vector<int> bases, std::vector<ComplexMatrix2> members, const Tolerances& tol)
    : bases_(std::move(bases)), members_(std::move(members)) {
  check_bases(bases_);
  if (members_.size() != 2 * bases_.size()) throw ValidationError("assemblage needs exactly 2N members");
  for (auto& m : members_) {
    if (!m.is_finite()) throw ValidationError("assemblage member has non-finite entries");
    if (!m.is_hermitian(tol.herm)) throw ValidationError("assemblage member is not Hermitian");
    m = 0.5 * (m + m.adjoint());
    if (hermitian_eigenvalues(m)[0] < -tol.psd) throw ValidationError("assemblage member is not PSD");
  }
}

const ComplexMatrix2& Assemblage::member(int basis, int outcome) const {
  for (std::size_t k = 0; k < bases_.size(); ++k) {
    if (bases_[k] == basis) return members_[2 * k + outcome_slot(outcome)];
  }
  throw DomainError("basis " + std::to_string(basis) + " is not part of this assemblage");
}

Assemblage build_assemblage(const Channel& channel, int n) { return build_assemblage(channel, default_bases(n)); }

Assemblage build_assemblage(const Channel& channel, const std::vector<int>& bases) {
  check_bases(bases);
  std::vector<ComplexMatrix2> members;
  for (const auto& label : MubLabel::for_bases(bases)) {
    members.push_back(0.5 * apply(channel, mub_state(label)).matrix());
  }
  return Assemblage(bases, std::move(members));
}

double check_consistency(const Assemblage& assemblage) {
  double worst = 0.0;
  for (int pos = 0; pos < assemblage.n(); ++pos) {
    const double tr = (assemblage.member_at(pos, +1) + assemblage.member_at(pos, -1)).trace().real();
    worst = std::max(worst, std::abs(tr - 1.0));
  }
  return worst;
}

Assemblage lhs_assemblage(const StrategyTable& table, const std::vector<ComplexMatrix2>& states,
                          std::optional<std::vector<int>> bases, const Tolerances& tol) {
  const std::vector<int> b = bases.value_or(default_bases(table.n()));
  if (static_cast<int>(b.size()) != table.n()) throw DomainError("bases do not match the strategy table");
  if (static_cast<int>(states.size()) != table.columns()) {
    throw ValidationError("LHS model needs one state per deterministic strategy");
  }
  double total = 0.0;
  for (const auto& s : states) {
    if (!s.is_hermitian(tol.herm) || hermitian_eigenvalues(s)[0] < -tol.psd) {
      throw ValidationError("LHS states must be Hermitian and PSD");
    }
    total += s.trace().real();
  }
  if (std::abs(total - 1.0) > tol.trace) throw ValidationError("LHS states must have total trace 1");
  std::vector<ComplexMatrix2> members;
  for (int pos = 0; pos < table.n(); ++pos) {
    for (int a : {+1, -1}) {
      ComplexMatrix2 m;
      for (int g = 0; g < table.columns(); ++g) {
        if (table.value(g, pos, a) == 1) m += states[g];
      }
      members.push_back(m);
    }
  }
  return Assemblage(b, std::move(members), tol);
}

Assemblage conjugate(const Assemblage& assemblage, const ComplexMatrix2& unitary) {
  if (!is_unitary(unitary)) throw DomainError("conjugation matrix is not unitary");
  std::vector<ComplexMatrix2> members;
  for (const auto& m : assemblage.members()) members.push_back(unitary * m * unitary.adjoint());
  return Assemblage(assemblage.bases(), std::move(members));
}

Assemblage mix(const Assemblage& first, const Assemblage& second, double t) {
  if (first.bases() != second.bases()) throw DomainError("cannot mix assemblages over different bases");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("mixing weight must lie in [0, 1]");
  std::vector<ComplexMatrix2> members;
  for (std::size_t k = 0; k < first.members().size(); ++k) {
    members.push_back((1.0 - t) * first.members()[k] + t * second.members()[k]);
  }
  return Assemblage(first.bases(), std::move(members));
}

std::vector<double> offdiagonal_remainder(const Assemblage& assemblage) {
  std::vector<double> out;
  for (int pos = 0; pos < assemblage.n(); ++pos) {
    const int basis = assemblage.bases()[pos];
    const auto plus = mub_ket(MubLabel(basis, +1));
    const auto minus = mub_ket(MubLabel(basis, -1));
    for (int a : {+1, -1}) {
      const ComplexMatrix2& m = assemblage.member_at(pos, a);
      Complex coherence = 0.0;
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) coherence += std::conj(plus[r]) * m(r, c) * minus[c];
      }
      out.push_back(std::sqrt(2.0) * std::abs(coherence));
    }
  }
  return out;
}

TomographyCounts::TomographyCounts(std::vector<int> bases) : bases_(std::move(bases)) {
  check_bases(bases_);
  cells_.assign(2 * bases_.size(), {});
}

std::size_t TomographyCounts::slot(int i, int a) const {
  const MubLabel label(i, a);
  for (std::size_t k = 0; k < bases_.size(); ++k) {
    if (bases_[k] == label.basis()) return 2 * k + outcome_slot(label.outcome());
  }
  throw DomainError("preparation basis " + std::to_string(i) + " is not part of these counts");
}

void TomographyCounts::add(int i, int a, int j, int b, double count) {
  const MubLabel measured(j, b);
  if (!(count >= 0.0) || !std::isfinite(count)) throw ValidationError("counts must be finite and nonnegative");
  cells_[slot(i, a)][measured.basis() - 1][outcome_slot(measured.outcome())] += count;
}

double TomographyCounts::get(int i, int a, int j, int b) const {
  const MubLabel measured(j, b);
  return cells_[slot(i, a)][measured.basis() - 1][outcome_slot(measured.outcome())];
}

double TomographyCounts::preparation_total(int i, int a) const {
  double total = 0.0;
  for (const auto& row : cells_[slot(i, a)]) total += row[0] + row[1];
  return total;
}

bool Reconstruction::any_projected() const { return std::find(projected.begin(), projected.end(), true) != projected.end(); }

Reconstruction reconstruct(const TomographyCounts& counts, const std::optional<std::vector<double>>& priors) {
  const auto labels = MubLabel::for_bases(counts.bases());
  if (priors && priors->size() != labels.size()) throw ValidationError("need one prior per preparation");
  std::vector<ComplexMatrix2> members;
  std::vector<bool> projected;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const auto& label = labels[k];
    std::array<double, 3> r{};
    for (int j = 1; j <= 3; ++j) {
      const double plus = counts.get(label.basis(), label.outcome(), j, +1);
      const double minus = counts.get(label.basis(), label.outcome(), j, -1);
      if (!(plus + minus > 0.0)) {
        throw ValidationError("no tomography counts for preparation (" + std::to_string(label.basis()) + ", " +
                              std::to_string(label.outcome()) + ") measured in basis " + std::to_string(j));
      }
      r[j - 1] = (plus - minus) / (plus + minus);
    }
    const double norm = std::hypot(r[0], r[1], r[2]);
    const bool clip = norm > 1.0 + kProjectionSlack;
    if (norm > 1.0) {
      for (double& x : r) x /= norm;
    }
    projected.push_back(clip);
    const double prior = priors ? (*priors)[k] : 0.5;
    members.push_back(prior * from_pauli_coordinates({0.5, 0.5 * r[0], 0.5 * r[1], 0.5 * r[2]}));
  }
  return {Assemblage(counts.bases(), std::move(members)), std::move(projected)};
}

TomographyCounts expected_counts(const Channel& channel, const std::vector<int>& bases, double shots) {
  TomographyCounts counts(bases);
  for (const auto& label : MubLabel::for_bases(bases)) {
    const DensityMatrix out = apply(channel, mub_state(label));
    for (int j = 1; j <= 3; ++j) {
      const double p = fidelity_to_pure(out, MubLabel(j, +1));
      counts.add(label.basis(), label.outcome(), j, +1, shots * p);
      counts.add(label.basis(), label.outcome(), j, -1, shots * (1.0 - p));
    }
  }
  return counts;
}

}  // namespace tsteer
