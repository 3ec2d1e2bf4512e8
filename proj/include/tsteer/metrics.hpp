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

// Temporal steering parameter S_N, QBER, the analytic QBER bounds and the
// security verdicts for MUB key distribution (BB84: N = 2, six-state: N = 3).
//
// Two S_N estimators exist. The observed one, steering_parameter(), squares
// Bob's conditional expectation after averaging over the hidden channel branch
// lambda; every QBER bound below is stated for it. The branch-resolved one,
// branch_resolved_steering(), squares inside the lambda average and is only
// available when lambda is recorded (diagnostics, intercept-resend studies).

#include <optional>
#include <string>
#include <vector>

#include "tsteer/channel.hpp"

namespace tsteer {

// Bases used for N MUBs: {1, 3} (sigma_x, sigma_z) for N = 2, {1, 2, 3} for N = 3.
std::vector<int> default_bases(int n);
// Throws DomainError unless `bases` are 2 or 3 distinct indices in 1..3.
void check_bases(const std::vector<int>& bases);

class FidelityTable {
 public:
  // values[2k] = F(bases[k], +1), values[2k + 1] = F(bases[k], -1).
  FidelityTable(std::vector<int> bases, std::vector<double> values);

  int n() const { return static_cast<int>(bases_.size()); }
  const std::vector<int>& bases() const { return bases_; }
  const std::vector<double>& values() const { return values_; }
  double at(int basis, int outcome) const;

  double min() const;
  double max() const;
  double mean() const;
  // Population variance of the 2N entries.
  double variance() const;

 private:
  std::vector<int> bases_;
  std::vector<double> values_;
};

FidelityTable fidelity_table(const Channel& channel, int n);
FidelityTable fidelity_table(const Channel& channel, const std::vector<int>& bases);

// 1/2 sum_{i,a} (2 F_{i,a} - 1)^2.
double steering_parameter(const FidelityTable& table);

// Conditional statistics of one preparation (A_i = a): prior P(a|A_i) and
// Bob's outcome distribution P(b = +1), P(b = -1) when he measures B_i.
struct ConditionalRow {
  int basis;
  int outcome;
  double prior;
  double p_plus;
  double p_minus;
};

// sum_i sum_a P(a|A_i) <B_i>_{a|A_i}^2 with <B> = sum_b b P(b|...).
// Throws ValidationError for unnormalized priors or outcome distributions.
double steering_parameter_from_statistics(const std::vector<ConditionalRow>& rows);

// Exact statistics produced by a channel with uniform priors.
std::vector<ConditionalRow> channel_statistics(const Channel& channel, const std::vector<int>& bases);

double branch_resolved_steering(const Channel& channel, int n);
double branch_resolved_steering(const Channel& channel, const std::vector<int>& bases);

double qber(const FidelityTable& table);

// 1/2 (1 - sqrt(S/N)); never exceeds the QBER of the table that produced S.
double qber_lower_bound(double s, int n);

// Upper bound on the QBER of any table with smallest fidelity m and largest M,
// from the Bhatia-Davis inequality applied to the variance identity:
//   QBER (m + M - 1) <= (M - 1)(1 - m) + (1 - S/N) / 4.
// For M = 1 this is (M - S/N) / (4m). Capped by the trivial bound 1 - m, which
// is also what is returned when m + M <= 1 (the inequality then gives no
// upper bound).
double qber_upper_bound(double s, int n, double m, double big_m);

// |sigma^2 - [QBER (1 - QBER) + (S - N) / (4N)]|.
double variance_identity_check(const FidelityTable& table);

// (M - F_N)(F_N - m) - sigma^2, nonnegative up to rounding.
double bhatia_davis_check(const FidelityTable& table);

// 4N (1/2 - qber)^2.
double symmetric_noise_S(double qber, int n);

struct SteeringSummary {
  int n = 0;
  double s = 0.0;
  double qber = 0.0;
  double f_mean = 0.0;
  double variance = 0.0;
  double m = 0.0;  // smallest fidelity
  double big_m = 0.0;  // largest fidelity
  double qber_lower = 0.0;
  double qber_upper = 0.0;
  double variance_residual = 0.0;
  double bhatia_davis_slack = 0.0;
  std::optional<double> branch_resolved_s;
};

SteeringSummary summarize(const FidelityTable& table, std::optional<double> branch_resolved_s = std::nullopt);

enum class Protocol { bb84, b98 };
enum class SecurityMode { individual, unconditional };

Protocol protocol_for(int n);
int basis_count(Protocol p);
std::string to_string(Protocol p);
std::string to_string(SecurityMode m);
Protocol parse_protocol(const std::string& s);
SecurityMode parse_security_mode(const std::string& s);

inline constexpr double kDefaultUnconditionalQ = 0.1;

// Individual-attack QBER thresholds: q_2 = (1 - 1/sqrt 2)/2, q_3 = 1/6.
double individual_attack_threshold(int n);
// N (1 - 2q)^2.
double steering_threshold(int n, double q);
// 2^{N-1} / N.
double monogamy_threshold(int n);

struct SecurityVerdict {
  Protocol protocol = Protocol::bb84;
  SecurityMode mode = SecurityMode::individual;
  double q_threshold = 0.0;
  double s_threshold = 0.0;
  double monogamy_threshold = 0.0;
  bool secure = false;
  bool monogamous = false;
};

// Values within this distance of a threshold count as sitting on it.
inline constexpr double kVerdictTol = 1e-12;

// secure = S > N (1 - 2 q_N)^2, monogamous = S > 2^{N-1}/N; both strict, so a
// value on the threshold is insecure.
// Individual mode uses the cloning thresholds; unconditional mode uses
// q_override (default 0.1), which must lie in (0, 1/2).
SecurityVerdict security_verdict(double s, int n, SecurityMode mode, std::optional<double> q_override = std::nullopt);

}  // namespace tsteer
