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

// Seeded Monte Carlo of BB84 (N = 2) and six-state (N = 3) sessions over a
// configured channel, and the analysis that turns a session into a
// SteeringReport (S_N, QBER and bounds, w_t from tomography, verdicts).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsteer/assemblage.hpp"
#include "tsteer/channel.hpp"
#include "tsteer/metrics.hpp"
#include "tsteer/weight.hpp"

namespace tsteer {

// Key rounds: Bob measures in Alice's basis from the pre-shared sequence
// (preshared), or in a uniformly random protocol basis with mismatches
// discarded at sifting (random).
enum class BobBasisMode { preshared, random };

struct SessionConfig {
  Protocol protocol = Protocol::bb84;
  ChannelSpec channel;
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  double tomography_fraction = 0.25;
  std::vector<int> basis_pair{1, 3};  // BB84 only
  BobBasisMode bob_basis = BobBasisMode::preshared;
  bool keep_records = true;
  unsigned threads = 0;  // 0: hardware concurrency

  // Protocol bases: basis_pair for BB84, {1, 2, 3} for B98.
  std::vector<int> bases() const;
  void check() const;
};

inline constexpr std::uint64_t kMaxRounds = 1'000'000'000ull;

enum class Purpose { key, tomography };

struct RoundRecord {
  std::uint64_t round = 0;
  int i = 0;  // Alice's basis
  int a = 0;  // Alice's bit
  int branch = 0;  // index into SessionResult::branch_labels for (i, a)
  int j = 0;  // Bob's basis
  int b = 0;  // Bob's outcome
  Purpose purpose = Purpose::key;
};

struct QberEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t errors = 0;
  std::uint64_t n = 0;
};

// Key-round tallies per preparation (i, a) and per channel branch.
struct KeyTally {
  int i = 0;
  int a = 0;
  std::uint64_t n = 0;
  std::uint64_t agree = 0;  // b == a
  std::vector<std::uint64_t> branch_n;
  std::vector<std::uint64_t> branch_agree;
};

struct SessionResult {
  SessionConfig config;
  std::vector<int> bases;
  std::vector<RoundRecord> records;  // empty unless keep_records
  std::uint64_t sifted_length = 0;
  QberEstimate qber;
  TomographyCounts counts{{1, 3}};
  std::vector<KeyTally> key;  // ordered like MubLabel::for_bases(bases)
  std::vector<std::vector<std::string>> branch_labels;  // per preparation, per branch index
  // True when branch labels are an eavesdropper's classical record
  // (intercept-resend) rather than internal Kraus indices.
  bool branches_exposed = false;
};

SessionResult run_session(const SessionConfig& config);

// Key rounds with i == j, order preserved.
std::vector<RoundRecord> sift(const std::vector<RoundRecord>& records);

// Fraction of rounds with b != a and its binomial standard error.
QberEstimate estimate_qber(const std::vector<RoundRecord>& sifted);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct EmpiricalAnalytic {
  SteeringSummary analytic;
  double analytic_w_t = 0.0;
  double delta_qber = 0.0;  // empirical - analytic
  double delta_s = 0.0;
  double delta_w_t = 0.0;
  double delta_branch_resolved_s = 0.0;
};

struct SteeringReport {
  int n = 0;
  std::vector<int> bases;
  FidelityTable table{{1, 3}, {1.0, 1.0, 1.0, 1.0}};
  SteeringSummary summary;
  std::optional<Estimate> s_estimate;  // sampling error of summary.s (simulations)
  std::optional<Estimate> branch_resolved_estimate;
  bool branch_resolved_diagnostic = false;
  std::optional<QberEstimate> qber_hat;
  WeightResult weight;
  std::vector<bool> tomography_projected;
  // S fed to the verdicts: summary.s for exact analyses, s - 3 stderr for
  // simulations so that sampling noise cannot certify security.
  double s_for_verdict = 0.0;
  std::vector<SecurityVerdict> verdicts;
  std::optional<EmpiricalAnalytic> empirical_vs_analytic;
};

struct AnalysisOptions {
  double sdp_tol = kDefaultSdpTol;
  std::optional<double> q_override;
};

// Exact report for a known channel.
SteeringReport analyze_channel(const Channel& channel, const std::vector<int>& bases,
                               const AnalysisOptions& options = {});

// Report from simulated data; tomography must cover every (i, a, j) cell.
SteeringReport analyze(const SessionResult& result, const std::optional<ChannelSpec>& known_channel = std::nullopt,
                       const AnalysisOptions& options = {});

std::string to_string(Purpose p);
std::string to_string(BobBasisMode m);
BobBasisMode parse_bob_basis_mode(const std::string& s);

}  // namespace tsteer
