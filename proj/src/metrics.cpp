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

#include "tsteer/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "tsteer/error.hpp"

namespace tsteer {

namespace {

constexpr double kRangeSlack = 1e-12;
constexpr double kNormalizationTol = 1e-9;

void check_n(int n) {
  if (n != 2 && n != 3) throw DomainError("number of bases N must be 2 or 3, got " + std::to_string(n));
}

double clamp_s(double s, int n) {
  check_n(n);
  if (!(s >= -kRangeSlack && s <= n + kRangeSlack)) {
    throw DomainError("steering parameter must lie in [0, N], got " + std::to_string(s));
  }
  return std::clamp(s, 0.0, static_cast<double>(n));
}

}  // namespace

std::vector<int> default_bases(int n) {
  check_n(n);
  return n == 2 ? std::vector<int>{1, 3} : std::vector<int>{1, 2, 3};
}

void check_bases(const std::vector<int>& bases) {
  check_n(static_cast<int>(bases.size()));
  std::set<int> seen;
  for (int b : bases) {
    if (b < 1 || b > 3) throw DomainError("basis index must be 1, 2 or 3");
    if (!seen.insert(b).second) throw DomainError("bases must be distinct");
  }
}

FidelityTable::FidelityTable(std::vector<int> bases, std::vector<double> values)
    : bases_(std::move(bases)), values_(std::move(values)) {
  check_bases(bases_);
  if (values_.size() != 2 * bases_.size()) throw ValidationError("fidelity table needs exactly 2N entries");
  for (double f : values_) {
    if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("fidelities must lie in [0, 1]");
  }
}

double FidelityTable::at(int basis, int outcome) const {
  for (std::size_t k = 0; k < bases_.size(); ++k) {
    if (bases_[k] == basis) return values_[2 * k + (outcome == 1 ? 0 : 1)];
  }
  throw DomainError("basis " + std::to_string(basis) + " is not part of this table");
}

double FidelityTable::min() const { return *std::min_element(values_.begin(), values_.end()); }
double FidelityTable::max() const { return *std::max_element(values_.begin(), values_.end()); }

double FidelityTable::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double FidelityTable::variance() const {
  const double mu = mean();
  double acc = 0.0;
  for (double f : values_) acc += (f - mu) * (f - mu);
  return acc / static_cast<double>(values_.size());
}

FidelityTable fidelity_table(const Channel& channel, int n) { return fidelity_table(channel, default_bases(n)); }

FidelityTable fidelity_table(const Channel& channel, const std::vector<int>& bases) {
  check_bases(bases);
  std::vector<double> values;
  for (const auto& label : MubLabel::for_bases(bases)) {
    values.push_back(fidelity_to_pure(apply(channel, mub_state(label)), label));
  }
  return FidelityTable(bases, std::move(values));
}

double steering_parameter(const FidelityTable& table) {
  double s = 0.0;
  for (double f : table.values()) s += (2.0 * f - 1.0) * (2.0 * f - 1.0);
  return 0.5 * s;
}

double steering_parameter_from_statistics(const std::vector<ConditionalRow>& rows) {
  if (rows.empty()) throw ValidationError("no conditional statistics given");
  std::vector<int> bases;
  for (const auto& r : rows) {
    MubLabel(r.basis, r.outcome);
    if (std::find(bases.begin(), bases.end(), r.basis) == bases.end()) bases.push_back(r.basis);
  }
  double s = 0.0;
  for (int b : bases) {
    double prior_sum = 0.0;
    for (const auto& r : rows) {
      if (r.basis != b) continue;
      for (double p : {r.prior, r.p_plus, r.p_minus}) {
        if (!(p >= -kNormalizationTol && p <= 1.0 + kNormalizationTol)) {
          throw ValidationError("probabilities must lie in [0, 1]");
        }
      }
      if (std::abs(r.p_plus + r.p_minus - 1.0) > kNormalizationTol) {
        throw ValidationError("outcome distribution for basis " + std::to_string(b) + " is not normalized");
      }
      prior_sum += r.prior;
      const double expectation = r.p_plus - r.p_minus;
      s += r.prior * expectation * expectation;
    }
    if (std::abs(prior_sum - 1.0) > kNormalizationTol) {
      throw ValidationError("priors for basis " + std::to_string(b) + " do not sum to 1");
    }
  }
  return s;
}

std::vector<ConditionalRow> channel_statistics(const Channel& channel, const std::vector<int>& bases) {
  check_bases(bases);
  std::vector<ConditionalRow> rows;
  for (const auto& label : MubLabel::for_bases(bases)) {
    const DensityMatrix out = apply(channel, mub_state(label));
    const double p_plus = fidelity_to_pure(out, MubLabel(label.basis(), +1));
    rows.push_back({label.basis(), label.outcome(), 0.5, p_plus, 1.0 - p_plus});
  }
  return rows;
}

double branch_resolved_steering(const Channel& channel, int n) {
  return branch_resolved_steering(channel, default_bases(n));
}

double branch_resolved_steering(const Channel& channel, const std::vector<int>& bases) {
  check_bases(bases);
  if (!validate(channel).trace_preserving) throw ValidationError("channel is not trace preserving");
  double s = 0.0;
  for (const auto& label : MubLabel::for_bases(bases)) {
    for (const auto& branch : branch_decompose(channel, mub_state(label))) {
      const double c = 2.0 * fidelity_to_pure(branch.state, label) - 1.0;
      s += branch.probability * c * c;
    }
  }
  return 0.5 * s;
}

double qber(const FidelityTable& table) { return 1.0 - table.mean(); }

double qber_lower_bound(double s, int n) {
  s = clamp_s(s, n);
  return 0.5 * (1.0 - std::sqrt(s / n));
}

double qber_upper_bound(double s, int n, double m, double big_m) {
  s = clamp_s(s, n);
  if (!(m > 0.0) || !(m <= big_m) || !(big_m <= 1.0)) {
    throw DomainError("upper bound needs 0 < m <= M <= 1");
  }
  const double trivial = 1.0 - m;
  const double denom = m + big_m - 1.0;
  if (denom <= 0.0) return trivial;
  const double bound = ((big_m - 1.0) * (1.0 - m) + 0.25 * (1.0 - s / n)) / denom;
  return std::min(bound, trivial);
}

double variance_identity_check(const FidelityTable& table) {
  const double q = qber(table);
  const int n = table.n();
  const double predicted = q * (1.0 - q) + (steering_parameter(table) - n) / (4.0 * n);
  return std::abs(table.variance() - predicted);
}

double bhatia_davis_check(const FidelityTable& table) {
  const double mu = table.mean();
  return (table.max() - mu) * (mu - table.min()) - table.variance();
}

double symmetric_noise_S(double q, int n) {
  check_n(n);
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("QBER must lie in [0, 1]");
  return 4.0 * n * (0.5 - q) * (0.5 - q);
}

SteeringSummary summarize(const FidelityTable& table, std::optional<double> branch_resolved_s) {
  SteeringSummary out;
  out.n = table.n();
  out.s = steering_parameter(table);
  out.qber = qber(table);
  out.f_mean = table.mean();
  out.variance = table.variance();
  out.m = table.min();
  out.big_m = table.max();
  out.qber_lower = qber_lower_bound(out.s, out.n);
  out.qber_upper = out.m > 0.0 ? qber_upper_bound(out.s, out.n, out.m, out.big_m) : 1.0;
  out.variance_residual = variance_identity_check(table);
  out.bhatia_davis_slack = bhatia_davis_check(table);
  out.branch_resolved_s = branch_resolved_s;
  return out;
}

Protocol protocol_for(int n) {
  check_n(n);
  return n == 2 ? Protocol::bb84 : Protocol::b98;
}

int basis_count(Protocol p) { return p == Protocol::bb84 ? 2 : 3; }

std::string to_string(Protocol p) { return p == Protocol::bb84 ? "BB84" : "B98"; }

std::string to_string(SecurityMode m) { return m == SecurityMode::individual ? "individual" : "unconditional"; }

Protocol parse_protocol(const std::string& s) {
  if (s == "BB84" || s == "bb84") return Protocol::bb84;
  if (s == "B98" || s == "b98" || s == "six-state") return Protocol::b98;
  throw DomainError("unknown protocol '" + s + "' (expected BB84 or B98)");
}

SecurityMode parse_security_mode(const std::string& s) {
  if (s == "individual") return SecurityMode::individual;
  if (s == "unconditional") return SecurityMode::unconditional;
  throw DomainError("unknown security mode '" + s + "' (expected individual or unconditional)");
}

double individual_attack_threshold(int n) {
  check_n(n);
  return n == 2 ? 0.5 * (1.0 - 1.0 / std::sqrt(2.0)) : 1.0 / 6.0;
}

double steering_threshold(int n, double q) {
  check_n(n);
  return n * (1.0 - 2.0 * q) * (1.0 - 2.0 * q);
}

double monogamy_threshold(int n) {
  check_n(n);
  return static_cast<double>(1 << (n - 1)) / n;
}

SecurityVerdict security_verdict(double s, int n, SecurityMode mode, std::optional<double> q_override) {
  check_n(n);
  if (!std::isfinite(s)) throw DomainError("steering parameter must be finite");
  SecurityVerdict v;
  v.protocol = protocol_for(n);
  v.mode = mode;
  if (mode == SecurityMode::individual) {
    v.q_threshold = individual_attack_threshold(n);
  } else {
    const double q = q_override.value_or(kDefaultUnconditionalQ);
    if (!(q > 0.0 && q < 0.5)) throw DomainError("q_override must lie in (0, 1/2)");
    v.q_threshold = q;
  }
  v.s_threshold = steering_threshold(n, v.q_threshold);
  v.monogamy_threshold = monogamy_threshold(n);
  v.secure = s > v.s_threshold + kVerdictTol;
  v.monogamous = s > v.monogamy_threshold + kVerdictTol;
  return v;
}

}  // namespace tsteer
