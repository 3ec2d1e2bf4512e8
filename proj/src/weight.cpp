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

#include "tsteer/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tsteer/error.hpp"

namespace tsteer {

namespace {

// Unit vector spanning the top eigenspace of a Hermitian matrix.
std::array<Complex, 2> top_eigenvector(const ComplexMatrix2& m) {
  const auto c = pauli_coordinates(m);
  const double r = std::sqrt(c[1] * c[1] + c[2] * c[2] + c[3] * c[3]);
  if (r == 0.0) return {1.0, 0.0};
  const double nx = c[1] / r, ny = c[2] / r, nz = c[3] / r;
  if (1.0 + nz < 1e-300) return {0.0, 1.0};
  const double s = std::sqrt(2.0 * (1.0 + nz));
  return {Complex(1.0 + nz, 0.0) / s, Complex(nx, ny) / s};
}

double overlap2(const std::array<Complex, 2>& u, const std::array<Complex, 2>& v) {
  return std::norm(std::conj(u[0]) * v[0] + std::conj(u[1]) * v[1]);
}

ComplexMatrix2 projector(const std::array<Complex, 2>& v) { return ComplexMatrix2::outer(v, v); }

// Embeds a scalar constraint s >= 0 in a 2x2 block; the padding entry is a
// constant 1 and never binds.
ComplexMatrix2 scalar_block(double s) { return {s, 0.0, 0.0, 1.0}; }

}  // namespace

ComplexMatrix2 WeightSdp::witness(int gamma, const std::vector<double>& y) const {
  const auto& f = faces.at(static_cast<std::size_t>(gamma));
  switch (f.kind) {
    case StrategyFace::Kind::full:
      return from_pauli_coordinates({y[f.first_var], y[f.first_var + 1], y[f.first_var + 2], y[f.first_var + 3]});
    case StrategyFace::Kind::ray:
      return projector(f.v) * y[f.first_var];
    case StrategyFace::Kind::zero:
      break;
  }
  return ComplexMatrix2::zero();
}

WeightSdp build_weight_sdp(const Assemblage& assemblage) {
  const double residual = check_consistency(assemblage);
  if (residual > kConsistencyTol) {
    throw ValidationError("assemblage violates the consistency relation (residual " + std::to_string(residual) +
                          ")");
  }
  const StrategyTable table(assemblage.n());
  WeightSdp out;
  out.n = assemblage.n();
  out.strategies = table.columns();

  // Rank of each member: 0, 1 (with its range) or 2.
  struct MemberFace {
    int rank = 2;
    double top = 0.0;
    std::array<Complex, 2> range{};
  };
  std::vector<MemberFace> member_faces;
  for (int pos = 0; pos < out.n; ++pos) {
    for (int a : {+1, -1}) {
      const auto& m = assemblage.member_at(pos, a);
      const auto ev = hermitian_eigenvalues(m);
      MemberFace mf;
      mf.top = ev[1];
      if (ev[1] <= kFaceTol) mf.rank = 0;
      else if (ev[0] <= kFaceTol) mf.rank = 1;
      if (mf.rank == 1) mf.range = top_eigenvector(m);
      member_faces.push_back(mf);
    }
  }

  auto& p = out.problem;
  for (int g = 0; g < out.strategies; ++g) {
    StrategyFace f;
    for (int pos = 0; pos < out.n && f.kind != StrategyFace::Kind::zero; ++pos) {
      const auto& mf = member_faces[static_cast<std::size_t>(2 * pos + (table.assigned(g, pos) == 1 ? 0 : 1))];
      if (mf.rank == 2) continue;
      if (mf.rank == 0 || (f.kind == StrategyFace::Kind::ray && overlap2(f.v, mf.range) < 1.0 - kFaceTol)) {
        f.kind = StrategyFace::Kind::zero;
      } else if (f.kind == StrategyFace::Kind::full) {
        f.kind = StrategyFace::Kind::ray;
        f.v = mf.range;
      }
    }
    if (f.kind == StrategyFace::Kind::full) {
      f.first_var = p.num_vars;
      p.num_vars += 4;
      p.objective.insert(p.objective.end(), {2.0, 0.0, 0.0, 0.0});
    } else if (f.kind == StrategyFace::Kind::ray) {
      f.first_var = p.num_vars;
      p.num_vars += 1;
      p.objective.push_back(1.0);
    }
    out.faces.push_back(f);
  }
  if (p.num_vars == 0) {
    // Every LHS state is forced to zero; keep one inert variable so the
    // problem stays well formed (its optimum is 0).
    p.num_vars = 1;
    p.objective.push_back(0.0);
    p.blocks.push_back({"inert", scalar_block(0.0), {{0, {-1.0, 0.0, 0.0, 0.0}}}});
    p.blocks.push_back({"inert-upper", scalar_block(0.0), {{0, {1.0, 0.0, 0.0, 0.0}}}});
  }

  for (int pos = 0; pos < out.n; ++pos) {
    for (int a : {+1, -1}) {
      const auto& mf = member_faces[static_cast<std::size_t>(2 * pos + (a == 1 ? 0 : 1))];
      if (mf.rank == 0) continue;  // every contributing rho_gamma is zero
      sdp::Block block;
      block.name = "lmi:i=" + std::to_string(assemblage.bases()[pos]) + ",a=" + (a > 0 ? "+1" : "-1");
      block.constant = mf.rank == 2 ? assemblage.member_at(pos, a) : scalar_block(mf.top);
      for (int g = 0; g < out.strategies; ++g) {
        if (table.value(g, pos, a) == 0) continue;
        const auto& f = out.faces[static_cast<std::size_t>(g)];
        if (f.kind == StrategyFace::Kind::full) {
          for (int c = 0; c < 4; ++c) block.terms.push_back({f.first_var + c, pauli_or_identity(c)});
        } else if (f.kind == StrategyFace::Kind::ray) {
          block.terms.push_back({f.first_var, mf.rank == 2 ? projector(f.v) : ComplexMatrix2(overlap2(f.v, mf.range), 0.0, 0.0, 0.0)});
        }
      }
      p.blocks.push_back(std::move(block));
      ++out.lmi_count;
    }
  }
  for (int g = 0; g < out.strategies; ++g) {
    const auto& f = out.faces[static_cast<std::size_t>(g)];
    if (f.kind == StrategyFace::Kind::zero) continue;
    sdp::Block block;
    block.name = "psd:gamma=" + std::to_string(g + 1);
    if (f.kind == StrategyFace::Kind::full) {
      for (int c = 0; c < 4; ++c) block.terms.push_back({f.first_var + c, -1.0 * pauli_or_identity(c)});
    } else {
      block.constant = scalar_block(0.0);
      block.terms.push_back({f.first_var, ComplexMatrix2(-1.0, 0.0, 0.0, 0.0)});
    }
    p.blocks.push_back(std::move(block));
    ++out.psd_count;
  }
  return out;
}

WeightResult steerable_weight(const Assemblage& assemblage, double tol) {
  const WeightSdp sdp_problem = build_weight_sdp(assemblage);
  sdp::Settings settings;
  settings.tol = tol;
  WeightResult out;
  out.solution = sdp::solve(sdp_problem.problem, settings);
  if (out.solution.status != sdp::Status::optimal) {
    throw NumericalError("steerable-weight SDP ended with status " + sdp::to_string(out.solution.status) +
                         " after " + std::to_string(out.solution.iterations) + " iterations (gap " +
                         std::to_string(out.solution.gap) + ")");
  }
  const auto& y = out.solution.y;
  out.witness_min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int g = 0; g < sdp_problem.strategies; ++g) {
    out.lhs_witness.push_back(sdp_problem.witness(g, y));
    out.witness_min_eigenvalue = std::min(out.witness_min_eigenvalue, hermitian_eigenvalues(out.lhs_witness.back())[0]);
  }
  const StrategyTable table(assemblage.n());
  for (int pos = 0; pos < assemblage.n(); ++pos) {
    for (int a : {+1, -1}) {
      ComplexMatrix2 slack = assemblage.member_at(pos, a);
      for (int g = 0; g < table.columns(); ++g) {
        if (table.value(g, pos, a) == 1) slack -= out.lhs_witness[static_cast<std::size_t>(g)];
      }
      out.witness_min_eigenvalue = std::min(out.witness_min_eigenvalue, hermitian_eigenvalues(slack)[0]);
    }
  }
  out.raw_w_t = 1.0 - out.solution.primal_value;
  out.w_t = std::clamp(out.raw_w_t, 0.0, 1.0);
  if (out.w_t < kWeightZeroThreshold) out.w_t = 0.0;
  return out;
}

double unitary_invariance_check(const Assemblage& assemblage, const ComplexMatrix2& unitary, double tol) {
  if (!is_unitary(unitary)) throw DomainError("invariance check needs a unitary matrix");
  const double before = steerable_weight(assemblage, tol).raw_w_t;
  const double after = steerable_weight(conjugate(assemblage, unitary), tol).raw_w_t;
  return std::abs(before - after);
}

}  // namespace tsteer
