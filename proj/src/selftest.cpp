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

#include "tsteer/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "tsteer/assemblage.hpp"
#include "tsteer/catalog.hpp"
#include "tsteer/error.hpp"
#include "tsteer/metrics.hpp"
#include "tsteer/rng.hpp"
#include "tsteer/weight.hpp"

namespace tsteer {

namespace {

constexpr std::uint64_t kSeed = 20260101;

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

class Runner {
 public:
  void add(std::string name, int n, bool passed, std::string detail) {
    report.checks.push_back({std::move(name), n, passed, std::move(detail)});
  }
  // Exceptions inside a check count as a failure of that check.
  void guarded(const std::string& name, int n, const std::function<std::pair<bool, std::string>()>& body) {
    try {
      auto [ok, detail] = body();
      add(name, n, ok, detail);
    } catch (const std::exception& e) {
      add(name, n, false, std::string("exception: ") + e.what());
    }
  }
  SelftestReport report;
};

}  // namespace

bool SelftestReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SelftestCheck& c) { return c.passed; });
}

SelftestFault parse_selftest_fault(const std::string& s) {
  if (s == "none") return SelftestFault::none;
  if (s == "lower-bound-sign") return SelftestFault::lower_bound_sign;
  throw DomainError("unknown fault \"" + s + "\" (expected none or lower-bound-sign)");
}

SelftestReport run_selftest(const SelftestOptions& options) {
  Runner run;
  const auto lower = [&](double s, int n) {
    if (options.fault == SelftestFault::lower_bound_sign) return 0.5 * (1.0 + std::sqrt(std::max(0.0, s) / n));
    return qber_lower_bound(s, n);
  };

  // Closed forms written out independently of the library's own.
  const std::map<int, ThresholdRow> expected{{2, {2, 0.5 * (1.0 - 1.0 / std::sqrt(2.0)), 1.0, 1.0}},
                                             {3, {3, 1.0 / 6.0, 4.0 / 3.0, 4.0 / 3.0}}};
  for (int n : {2, 3}) {
    ThresholdRow row{n, individual_attack_threshold(n), steering_threshold(n, individual_attack_threshold(n)),
                     monogamy_threshold(n)};
    run.report.thresholds.push_back(row);
    const auto& e = expected.at(n);
    double err = std::max({std::abs(row.q_n - e.q_n), std::abs(row.s_threshold - e.s_threshold),
                           std::abs(row.monogamy_threshold - e.monogamy_threshold)});
    run.add("threshold table", n, err <= 1e-12, "max deviation " + fmt("%.1e", err));
  }

  run.guarded("rng known answer", 0, [] {
    auto b = philox4x32_10({0, 0, 0, 0}, {0, 0});
    bool ok = b == PhiloxBlock{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u};
    b = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    ok = ok && b == PhiloxBlock{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu};
    return std::pair{ok, std::string(ok ? "philox4x32-10 vectors match" : "philox output mismatch")};
  });

  run.guarded("CPTP catalog", 0, [] {
    CounterRng rng(kSeed, 1);
    double worst = 0.0, worst_state = 0.0;
    for (const auto& e : channel_catalog()) {
      Channel ch = make_channel(e.spec);
      worst = std::max(worst, validate(ch).residual);
      for (int k = 0; k < 20; ++k) {
        ComplexMatrix2 out = apply(ch, random_state(rng)).matrix();
        worst_state = std::max({worst_state, std::abs(out.trace().real() - 1.0), -hermitian_eigenvalues(out)[0]});
      }
    }
    bool ok = worst <= kTracePreservationTol && worst_state <= 1e-12;
    return std::pair{ok, "TP residual " + fmt("%.1e", worst) + ", state error " + fmt("%.1e", worst_state)};
  });

  run.guarded("Bloch round trip", 0, [] {
    CounterRng rng(kSeed, 2);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      DensityMatrix rho = random_state(rng);
      worst = std::max(worst, bloch_roundtrip(rho).matrix().max_abs_diff(rho.matrix()));
    }
    return std::pair{worst <= 1e-12, "max deviation " + fmt("%.1e", worst)};
  });

  for (int n : {2, 3}) {
    CounterRng rng(kSeed, 10 + static_cast<std::uint64_t>(n));
    std::vector<FidelityTable> tables;
    for (const auto& e : channel_catalog()) tables.push_back(fidelity_table(make_channel(e.spec), n));
    for (int k = 0; k < 200; ++k) tables.push_back(fidelity_table(make_channel({random_pauli(rng)}), n));

    int violations = 0;
    double worst_resid = 0.0, worst_slack = 0.0;
    for (const auto& t : tables) {
      double s = steering_parameter(t), q = qber(t);
      if (lower(s, n) > q + 1e-10 || q > qber_upper_bound(s, n, t.min(), t.max()) + 1e-10) ++violations;
      worst_resid = std::max(worst_resid, std::abs(variance_identity_check(t)));
      worst_slack = std::min(worst_slack, bhatia_davis_check(t));
    }
    std::string count = std::to_string(tables.size()) + " channels";
    run.add("QBER sandwich", n, violations == 0, std::to_string(violations) + " violations over " + count);
    run.add("variance identity", n, worst_resid < 1e-12, "max residual " + fmt("%.1e", worst_resid));
    run.add("Bhatia-Davis", n, worst_slack >= -1e-12, "min slack " + fmt("%.1e", worst_slack));

    double worst_iso = 0.0;
    for (int k = 0; k <= 100; ++k) {
      FidelityTable t = fidelity_table(depolarizing(k / 100.0), n);
      worst_iso = std::max(worst_iso, std::abs(qber(t) - lower(steering_parameter(t), n)));
    }
    run.add("isotropic saturation", n, worst_iso < 1e-12, "max |QBER - lower| " + fmt("%.1e", worst_iso));

    run.guarded("intercept-resend saturation", n, [n] {
      double s = branch_resolved_steering(intercept_resend(default_bases(n)), n);
      return std::pair{std::abs(s - 1.0) <= 1e-10, "branch-resolved S " + fmt("%.12f", s)};
    });

    run.guarded("LHS => w_t = 0", n, [&] {
      CounterRng lrng(kSeed, 20 + static_cast<std::uint64_t>(n));
      double worst = 0.0;
      for (int k = 0; k < 3; ++k) {
        worst = std::max(worst, steerable_weight(random_lhs_assemblage(lrng, default_bases(n)), options.sdp_tol).w_t);
      }
      return std::pair{worst <= kWeightZeroThreshold, "max w_t " + fmt("%.1e", worst)};
    });
  }

  run.guarded("cloner presets", 0, [] {
    FidelityTable u = fidelity_table(make_channel({spec::UniversalCloner{}}), 3);
    FidelityTable p = fidelity_table(make_channel({spec::PhaseCovariant{"xz"}}), 2);
    double err = std::max({std::abs(qber(u) - 1.0 / 6.0), std::abs(steering_parameter(u) - 4.0 / 3.0),
                           std::abs(qber(p) - individual_attack_threshold(2)), std::abs(steering_parameter(p) - 1.0)});
    bool insecure = !security_verdict(steering_parameter(u), 3, SecurityMode::individual).secure &&
                    !security_verdict(steering_parameter(p), 2, SecurityMode::individual).secure;
    return std::pair{err <= 1e-10 && insecure, "max deviation " + fmt("%.1e", err) + (insecure ? "" : ", verdict wrong")};
  });

  return run.report;
}

std::string format_selftest(const SelftestReport& report) {
  std::ostringstream os;
  char buf[256];
  os << "threshold table\n";
  std::snprintf(buf, sizeof buf, "  %-3s %-18s %-22s %-18s\n", "N", "q_N", "N(1-2q_N)^2", "2^(N-1)/N");
  os << buf;
  for (const auto& r : report.thresholds) {
    std::snprintf(buf, sizeof buf, "  %-3d %-18.15f %-22.15f %-18.15f\n", r.n, r.q_n, r.s_threshold,
                  r.monogamy_threshold);
    os << buf;
  }
  os << "\nchecks\n";
  std::snprintf(buf, sizeof buf, "  %-28s %-5s %-5s %-5s  %s\n", "check", "any", "N=2", "N=3", "detail");
  os << buf;
  std::vector<std::string> names;
  for (const auto& c : report.checks) {
    if (std::find(names.begin(), names.end(), c.name) == names.end()) names.push_back(c.name);
  }
  for (const auto& name : names) {
    std::string cells[3] = {"-", "-", "-"};
    std::string detail;
    for (const auto& c : report.checks) {
      if (c.name != name) continue;
      cells[c.n == 0 ? 0 : c.n - 1] = c.passed ? "pass" : "FAIL";
      if (!detail.empty()) detail += "; ";
      detail += (c.n ? "N=" + std::to_string(c.n) + ": " : "") + c.detail;
    }
    std::snprintf(buf, sizeof buf, "  %-28s %-5s %-5s %-5s  ", name.c_str(), cells[0].c_str(), cells[1].c_str(),
                  cells[2].c_str());
    os << buf << detail << "\n";
  }
  std::size_t failed = std::count_if(report.checks.begin(), report.checks.end(),
                                     [](const SelftestCheck& c) { return !c.passed; });
  os << "\n" << (failed == 0 ? "selftest: all " + std::to_string(report.checks.size()) + " checks passed"
                             : "selftest: " + std::to_string(failed) + " of " + std::to_string(report.checks.size()) +
                                   " checks FAILED")
     << "\n";
  return os.str();
}

}  // namespace tsteer
