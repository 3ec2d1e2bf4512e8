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

#include "tsteer/qkd.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "tsteer/error.hpp"
#include "tsteer/rng.hpp"

namespace tsteer {

namespace {

constexpr std::uint64_t kRoundsPerThreadMin = 20'000;

struct Branch {
  double cumulative;  // upper edge of this branch in [0, total)
  std::array<double, 3> p_plus;  // P(b = +1) when Bob measures sigma_j
};

struct Preparation {
  MubLabel label;
  std::vector<Branch> branches;
  std::vector<std::string> labels;
  double total;
};

struct Tally {
  std::vector<KeyTally> key;
  std::vector<std::array<std::array<std::uint64_t, 2>, 3>> counts;
};

int slot(int outcome) { return outcome == 1 ? 0 : 1; }

// Delta-method standard error of S = 1/2 sum m^2 over preparations, with m
// the mean of a*b in n rounds (equal priors).
double steering_stderr(const std::vector<std::pair<double, std::uint64_t>>& groups) {
  double var = 0.0;
  for (const auto& [m, n] : groups) {
    if (n == 0) continue;
    const double m2 = m * m;
    var += 0.25 * (4.0 * m2 * (1.0 - m2) / n + 2.0 * (1.0 - m2) * (1.0 - m2) / (static_cast<double>(n) * n));
  }
  return std::sqrt(var);
}

}  // namespace

std::vector<int> SessionConfig::bases() const {
  return protocol == Protocol::bb84 ? basis_pair : std::vector<int>{1, 2, 3};
}

void SessionConfig::check() const {
  if (rounds < 1) throw DomainError("rounds must be at least 1");
  if (rounds > kMaxRounds) throw DomainError("rounds exceeds the supported maximum of 1e9");
  if (!(tomography_fraction > 0.0 && tomography_fraction <= 1.0)) {
    throw DomainError("tomography_fraction must lie in (0, 1]");
  }
  if (protocol == Protocol::bb84 && basis_pair.size() != 2) throw DomainError("BB84 needs exactly two bases");
  check_bases(bases());
}

SessionResult run_session(const SessionConfig& config) {
  config.check();
  const Channel channel = make_channel(config.channel);
  const auto v = validate(channel);
  if (!v.trace_preserving) throw ValidationError("channel is not trace preserving");

  SessionResult result;
  result.config = config;
  result.bases = config.bases();
  const auto labels = MubLabel::for_bases(result.bases);
  const auto nb = static_cast<std::uint32_t>(result.bases.size());

  std::vector<Preparation> preps;
  result.branches_exposed = true;
  for (const auto& label : labels) {
    Preparation p{label, {}, {}, 0.0};
    for (const auto& br : branch_decompose(channel, mub_state(label))) {
      p.total += br.probability;
      Branch b{p.total, {}};
      for (int j = 1; j <= 3; ++j) b.p_plus[j - 1] = fidelity_to_pure(br.state, MubLabel(j, +1));
      p.branches.push_back(b);
      p.labels.push_back(br.label);
      result.branches_exposed = result.branches_exposed && br.label.rfind("eve:", 0) == 0;
    }
    result.branch_labels.push_back(p.labels);
    preps.push_back(std::move(p));
  }

  if (config.keep_records) result.records.resize(config.rounds);

  auto fresh_tally = [&] {
    Tally t;
    for (const auto& p : preps) {
      KeyTally k;
      k.i = p.label.basis();
      k.a = p.label.outcome();
      k.branch_n.assign(p.branches.size(), 0);
      k.branch_agree.assign(p.branches.size(), 0);
      t.key.push_back(std::move(k));
    }
    t.counts.assign(preps.size(), {});
    return t;
  };

  auto simulate = [&](std::uint64_t begin, std::uint64_t end, Tally& t) {
    for (std::uint64_t r = begin; r < end; ++r) {
      CounterRng rng(config.seed, r);
      RoundRecord rec;
      rec.round = r;
      rec.purpose = rng.uniform() < config.tomography_fraction ? Purpose::tomography : Purpose::key;
      const std::uint32_t pos = rng.below(nb);
      rec.i = result.bases[pos];
      rec.a = rng.below(2) == 0 ? +1 : -1;
      const std::size_t li = 2 * pos + slot(rec.a);
      const Preparation& prep = preps[li];
      const double u = rng.uniform() * prep.total;
      std::size_t br = 0;
      while (br + 1 < prep.branches.size() && u >= prep.branches[br].cumulative) ++br;
      rec.branch = static_cast<int>(br);
      if (rec.purpose == Purpose::tomography) {
        rec.j = 1 + static_cast<int>(rng.below(3));
      } else if (config.bob_basis == BobBasisMode::preshared) {
        rec.j = rec.i;
      } else {
        rec.j = result.bases[rng.below(nb)];
      }
      rec.b = rng.uniform() < prep.branches[br].p_plus[rec.j - 1] ? +1 : -1;

      if (rec.purpose == Purpose::tomography) {
        ++t.counts[li][rec.j - 1][slot(rec.b)];
      } else if (rec.j == rec.i) {
        KeyTally& k = t.key[li];
        const bool agree = rec.b == rec.a;
        ++k.n;
        ++k.branch_n[br];
        if (agree) {
          ++k.agree;
          ++k.branch_agree[br];
        }
      }
      if (config.keep_records) result.records[r] = rec;
    }
  };

  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, config.rounds / kRoundsPerThreadMin)));
  std::vector<Tally> tallies(threads, fresh_tally());
  {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (config.rounds + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t begin = std::min(config.rounds, t * chunk);
      const std::uint64_t end = std::min(config.rounds, begin + chunk);
      pool.emplace_back([&, t, begin, end] { simulate(begin, end, tallies[t]); });
    }
  }

  Tally total = fresh_tally();
  for (const auto& t : tallies) {
    for (std::size_t li = 0; li < preps.size(); ++li) {
      KeyTally& k = total.key[li];
      k.n += t.key[li].n;
      k.agree += t.key[li].agree;
      for (std::size_t b = 0; b < k.branch_n.size(); ++b) {
        k.branch_n[b] += t.key[li].branch_n[b];
        k.branch_agree[b] += t.key[li].branch_agree[b];
      }
      for (int j = 0; j < 3; ++j) {
        for (int s = 0; s < 2; ++s) total.counts[li][j][s] += t.counts[li][j][s];
      }
    }
  }

  result.key = std::move(total.key);
  result.counts = TomographyCounts(result.bases);
  for (std::size_t li = 0; li < preps.size(); ++li) {
    for (int j = 1; j <= 3; ++j) {
      for (int b : {+1, -1}) {
        const auto c = total.counts[li][j - 1][slot(b)];
        if (c) result.counts.add(labels[li].basis(), labels[li].outcome(), j, b, static_cast<double>(c));
      }
    }
  }
  std::uint64_t n = 0;
  std::uint64_t agree = 0;
  for (const auto& k : result.key) {
    n += k.n;
    agree += k.agree;
  }
  result.sifted_length = n;
  result.qber.n = n;
  result.qber.errors = n - agree;
  if (n > 0) {
    const double q = static_cast<double>(n - agree) / static_cast<double>(n);
    result.qber.value = q;
    result.qber.std_error = std::sqrt(q * (1.0 - q) / static_cast<double>(n));
  }
  return result;
}

std::vector<RoundRecord> sift(const std::vector<RoundRecord>& records) {
  std::vector<RoundRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [](const RoundRecord& r) { return r.purpose == Purpose::key && r.i == r.j; });
  return out;
}

QberEstimate estimate_qber(const std::vector<RoundRecord>& sifted) {
  if (sifted.empty()) throw ValidationError("cannot estimate the QBER from an empty sifted key");
  QberEstimate out;
  out.n = sifted.size();
  for (const auto& r : sifted) out.errors += r.a != r.b ? 1 : 0;
  out.value = static_cast<double>(out.errors) / static_cast<double>(out.n);
  out.std_error = std::sqrt(out.value * (1.0 - out.value) / static_cast<double>(out.n));
  return out;
}

namespace {

std::vector<SecurityVerdict> verdicts_for(double s, int n, const AnalysisOptions& options) {
  return {security_verdict(s, n, SecurityMode::individual),
          security_verdict(s, n, SecurityMode::unconditional, options.q_override)};
}

}  // namespace

SteeringReport analyze_channel(const Channel& channel, const std::vector<int>& bases, const AnalysisOptions& options) {
  check_bases(bases);
  SteeringReport rep;
  rep.n = static_cast<int>(bases.size());
  rep.bases = bases;
  rep.table = fidelity_table(channel, bases);
  rep.summary = summarize(rep.table, branch_resolved_steering(channel, bases));
  rep.branch_resolved_diagnostic = std::any_of(channel.kraus().begin(), channel.kraus().end(),
                                               [](const KrausOperator& k) { return k.label.rfind("eve:", 0) != 0; });
  rep.weight = steerable_weight(build_assemblage(channel, bases), options.sdp_tol);
  rep.s_for_verdict = rep.summary.s;
  rep.verdicts = verdicts_for(rep.s_for_verdict, rep.n, options);
  return rep;
}

SteeringReport analyze(const SessionResult& result, const std::optional<ChannelSpec>& known_channel,
                       const AnalysisOptions& options) {
  SteeringReport rep;
  rep.n = static_cast<int>(result.bases.size());
  rep.bases = result.bases;

  std::vector<double> fidelities;
  std::vector<std::pair<double, std::uint64_t>> groups;
  std::vector<double> priors;
  double br_value = 0.0;
  double br_var = 0.0;
  for (std::size_t li = 0; li < result.key.size(); ++li) {
    const KeyTally& k = result.key[li];
    if (k.n == 0) {
      throw ValidationError("no sifted key rounds for preparation (" + std::to_string(k.i) + ", " +
                            std::to_string(k.a) + "); increase the number of rounds");
    }
    const double f = static_cast<double>(k.agree) / static_cast<double>(k.n);
    fidelities.push_back(f);
    groups.emplace_back(2.0 * f - 1.0, k.n);
    const KeyTally& partner = result.key[li ^ 1];
    priors.push_back(static_cast<double>(k.n) / static_cast<double>(k.n + partner.n));

    // Branch-resolved: sum_lambda (n_lambda / n) m_lambda^2 with the O(1/n)
    // bias of the squared mean removed.
    double per_prep = 0.0;
    double mean_sq = 0.0;
    double within = 0.0;
    for (std::size_t b = 0; b < k.branch_n.size(); ++b) {
      const auto nl = k.branch_n[b];
      if (nl == 0) continue;
      const double w = static_cast<double>(nl) / static_cast<double>(k.n);
      const double m = 2.0 * static_cast<double>(k.branch_agree[b]) / static_cast<double>(nl) - 1.0;
      double m2 = m * m;
      if (nl > 1) m2 = std::max(0.0, m2 - (1.0 - m2) / static_cast<double>(nl - 1));
      per_prep += w * m2;
      mean_sq += w * m2 * m2;
      within += w * w * (4.0 * m * m * (1.0 - m * m) / nl + 2.0 * (1.0 - m * m) * (1.0 - m * m) / (double(nl) * nl));
    }
    const double between = std::max(0.0, mean_sq - per_prep * per_prep) / static_cast<double>(k.n);
    br_value += 0.5 * per_prep;
    br_var += 0.25 * (between + within);
  }
  rep.table = FidelityTable(result.bases, fidelities);
  rep.summary = summarize(rep.table, br_value);
  rep.s_estimate = Estimate{rep.summary.s, steering_stderr(groups)};
  rep.branch_resolved_estimate = Estimate{br_value, std::sqrt(br_var)};
  rep.branch_resolved_diagnostic = !result.branches_exposed;
  rep.qber_hat = result.qber;

  std::optional<Reconstruction> rec_holder;
  try {
    rec_holder = reconstruct(result.counts, priors);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(e.what()) + "; increase the number of rounds or the tomography fraction");
  }
  const Reconstruction& rec = *rec_holder;
  rep.tomography_projected = rec.projected;
  rep.weight = steerable_weight(rec.assemblage, options.sdp_tol);

  rep.s_for_verdict = std::max(0.0, rep.summary.s - 3.0 * rep.s_estimate->std_error);
  rep.verdicts = verdicts_for(rep.s_for_verdict, rep.n, options);

  if (known_channel) {
    const SteeringReport exact = analyze_channel(make_channel(*known_channel), result.bases, options);
    EmpiricalAnalytic ea;
    ea.analytic = exact.summary;
    ea.analytic_w_t = exact.weight.w_t;
    ea.delta_qber = result.qber.value - exact.summary.qber;
    ea.delta_s = rep.summary.s - exact.summary.s;
    ea.delta_w_t = rep.weight.w_t - exact.weight.w_t;
    ea.delta_branch_resolved_s = br_value - exact.summary.branch_resolved_s.value_or(0.0);
    rep.empirical_vs_analytic = ea;
  }
  return rep;
}

std::string to_string(Purpose p) { return p == Purpose::key ? "key" : "tomography"; }

std::string to_string(BobBasisMode m) { return m == BobBasisMode::preshared ? "preshared" : "random"; }

BobBasisMode parse_bob_basis_mode(const std::string& s) {
  if (s == "preshared") return BobBasisMode::preshared;
  if (s == "random") return BobBasisMode::random;
  throw DomainError("unknown Bob basis mode '" + s + "' (expected preshared or random)");
}

}  // namespace tsteer
