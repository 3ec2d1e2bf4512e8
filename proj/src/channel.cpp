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

#include "tsteer/channel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "tsteer/error.hpp"

namespace tsteer {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kMinBranchProbability = 1e-14;
constexpr double kCpSlack = 1e-12;

const char* const kPauliNames[4] = {"I", "X", "Y", "Z"};

void require_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(x));
  }
}

// Hermitian part with the trace rescaled to exactly one.
ComplexMatrix2 normalized_hermitian(const ComplexMatrix2& m) {
  ComplexMatrix2 h = 0.5 * (m + m.adjoint());
  const double tr = h.trace().real();
  return h * (1.0 / tr);
}

std::string sign_str(int a) { return a > 0 ? "+1" : "-1"; }

}  // namespace

Channel::Channel(std::vector<KrausOperator> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw ValidationError("channel needs at least one Kraus operator");
  for (const auto& k : kraus_) {
    if (!k.op.is_finite()) throw ValidationError("Kraus operator '" + k.label + "' has non-finite entries");
  }
}

ChannelValidation validate(const Channel& channel) {
  ComplexMatrix2 sum;
  for (const auto& k : channel.kraus()) sum += k.op.adjoint() * k.op;
  ChannelValidation report;
  report.residual = sum.max_abs_diff(ComplexMatrix2::identity());
  report.branch_count = channel.size();
  report.trace_preserving = report.residual <= kTracePreservationTol;
  return report;
}

DensityMatrix apply(const Channel& channel, const DensityMatrix& rho) {
  const auto report = validate(channel);
  if (!report.trace_preserving) {
    throw ValidationError("channel is not trace preserving (residual " + std::to_string(report.residual) + ")");
  }
  ComplexMatrix2 out;
  for (const auto& k : channel.kraus()) out += k.op * rho.matrix() * k.op.adjoint();
  return DensityMatrix::from_matrix(normalized_hermitian(out));
}

std::vector<BranchOutcome> branch_decompose(const Channel& channel, const DensityMatrix& rho) {
  std::vector<BranchOutcome> out;
  for (const auto& k : channel.kraus()) {
    const ComplexMatrix2 unnormalized = k.op * rho.matrix() * k.op.adjoint();
    const double q = unnormalized.trace().real();
    if (q < kMinBranchProbability) continue;
    out.push_back({k.label, q, DensityMatrix::from_matrix(normalized_hermitian(unnormalized))});
  }
  return out;
}

Channel pauli_weights_channel(const std::array<double, 4>& weights) {
  std::vector<KrausOperator> ops;
  for (int k = 0; k < 4; ++k) {
    if (weights[k] < -kCpSlack) throw DomainError("Pauli channel weights must be nonnegative");
    const double w = std::max(0.0, weights[k]);
    if (w == 0.0) continue;
    ops.push_back({kPauliNames[k], std::sqrt(w) * pauli_or_identity(k)});
  }
  return Channel(std::move(ops));
}

Channel pauli_multiplier_channel(const std::array<double, 3>& l) {
  const std::array<double, 4> weights{(1.0 + l[0] + l[1] + l[2]) / 4.0, (1.0 + l[0] - l[1] - l[2]) / 4.0,
                                      (1.0 - l[0] + l[1] - l[2]) / 4.0, (1.0 - l[0] - l[1] + l[2]) / 4.0};
  for (double w : weights) {
    if (w < -kCpSlack) throw DomainError("Bloch multipliers violate complete positivity");
  }
  return pauli_weights_channel(weights);
}

Channel identity_channel() { return Channel({{"id", ComplexMatrix2::identity()}}); }

Channel depolarizing(double v) {
  require_unit_interval(v, "depolarizing visibility v");
  const double off = (1.0 - v) / 4.0;
  return pauli_weights_channel({(1.0 + 3.0 * v) / 4.0, off, off, off});
}

Channel intercept_resend(const std::vector<int>& bases) {
  if (bases.empty()) throw DomainError("intercept-resend needs at least one basis");
  std::set<int> seen;
  for (int b : bases) {
    if (b < 1 || b > 3) throw DomainError("intercept-resend basis must be 1, 2 or 3");
    if (!seen.insert(b).second) throw DomainError("intercept-resend bases must be distinct");
  }
  const double w = 1.0 / std::sqrt(static_cast<double>(bases.size()));
  std::vector<KrausOperator> ops;
  for (int b : bases) {
    for (int a : {+1, -1}) {
      ops.push_back({"eve:basis=" + std::to_string(b) + ",a=" + sign_str(a), w * mub_projector(MubLabel(b, a))});
    }
  }
  return Channel(std::move(ops));
}

Channel compose(const Channel& first, const Channel& second) {
  std::vector<KrausOperator> ops;
  for (const auto& b : second.kraus()) {
    for (const auto& a : first.kraus()) {
      ComplexMatrix2 prod = b.op * a.op;
      if (prod.frobenius_norm() < 1e-15) continue;
      ops.push_back({a.label + ">" + b.label, prod});
    }
  }
  if (ops.empty()) throw ValidationError("composite channel annihilates every state");
  return Channel(std::move(ops));
}

namespace {

struct Builder {
  Channel operator()(const spec::Identity&) const { return identity_channel(); }

  Channel operator()(const spec::Unitary& u) const { return Channel({{"U", rotation(u.axis, u.angle)}}); }

  Channel operator()(const spec::Depolarizing& d) const { return depolarizing(d.v); }

  Channel operator()(const spec::PhaseDamping& d) const {
    require_unit_interval(d.p, "phase damping p");
    if (d.axis < 1 || d.axis > 3) throw DomainError("phase damping axis must be 1, 2 or 3");
    std::array<double, 4> w{1.0 - d.p, 0.0, 0.0, 0.0};
    w[d.axis] = d.p;
    return pauli_weights_channel(w);
  }

  Channel operator()(const spec::AmplitudeDamping& d) const {
    require_unit_interval(d.g, "amplitude damping g");
    std::vector<KrausOperator> ops{{"K0", ComplexMatrix2(1.0, 0.0, 0.0, std::sqrt(1.0 - d.g))}};
    if (d.g > 0.0) ops.push_back({"K1", ComplexMatrix2(0.0, std::sqrt(d.g), 0.0, 0.0)});
    return Channel(std::move(ops));
  }

  Channel operator()(const spec::Pauli& p) const {
    for (double x : {p.px, p.py, p.pz}) require_unit_interval(x, "Pauli weight");
    const double pi = 1.0 - p.px - p.py - p.pz;
    if (pi < -kCpSlack) throw DomainError("Pauli weights sum to more than 1");
    return pauli_weights_channel({std::max(0.0, pi), p.px, p.py, p.pz});
  }

  Channel operator()(const spec::InterceptResend& r) const { return intercept_resend(r.bases); }

  Channel operator()(const spec::UniversalCloner&) const { return depolarizing(2.0 / 3.0); }

  Channel operator()(const spec::PhaseCovariant& pc) const {
    std::array<double, 3> l{kInvSqrt2, kInvSqrt2, kInvSqrt2};
    if (pc.plane == "xz" || pc.plane == "zx") {
      l[1] = 0.5;
    } else if (pc.plane == "xy" || pc.plane == "yx") {
      l[2] = 0.5;
    } else if (pc.plane == "yz" || pc.plane == "zy") {
      l[0] = 0.5;
    } else {
      throw DomainError("phase-covariant plane must be one of xz, xy, yz");
    }
    return pauli_multiplier_channel(l);
  }

  Channel operator()(const spec::Composite& c) const {
    if (c.parts.empty()) throw DomainError("composite channel needs at least one part");
    Channel acc = make_channel(c.parts.front());
    for (std::size_t k = 1; k < c.parts.size(); ++k) acc = compose(acc, make_channel(c.parts[k]));
    return acc;
  }

  Channel operator()(const spec::Kraus& k) const {
    if (k.operators.empty()) throw DomainError("Kraus channel needs at least one operator");
    if (!k.labels.empty() && k.labels.size() != k.operators.size()) {
      throw DomainError("Kraus labels must match the operator count");
    }
    std::vector<KrausOperator> ops;
    for (std::size_t n = 0; n < k.operators.size(); ++n) {
      ops.push_back({k.labels.empty() ? "K" + std::to_string(n) : k.labels[n], k.operators[n]});
    }
    Channel ch(std::move(ops));
    const auto report = validate(ch);
    if (!report.trace_preserving) {
      throw ValidationError("Kraus operators are not trace preserving (residual " + std::to_string(report.residual) +
                            ")");
    }
    return ch;
  }
};

}  // namespace

Channel make_channel(const ChannelSpec& spec) { return std::visit(Builder{}, spec.kind); }

}  // namespace tsteer
