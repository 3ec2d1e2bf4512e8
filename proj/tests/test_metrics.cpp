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

#include <gtest/gtest.h>

#include <cmath>

#include "tsteer/catalog.hpp"
#include "tsteer/error.hpp"
#include "tsteer/metrics.hpp"

namespace tsteer {
namespace {

const double kQ2 = 0.5 * (1.0 - 1.0 / std::sqrt(2.0));

Channel phase_damped() { return make_channel({spec::PhaseDamping{0.25, 3}}); }
std::vector<int> all_bases(int n) { return n == 2 ? std::vector<int>{1, 3} : std::vector<int>{1, 2, 3}; }

TEST(Bases, Defaults) {
  EXPECT_EQ(default_bases(2), (std::vector<int>{1, 3}));
  EXPECT_EQ(default_bases(3), (std::vector<int>{1, 2, 3}));
  EXPECT_THROW(default_bases(4), DomainError);
  EXPECT_THROW(check_bases({1, 1}), DomainError);
  EXPECT_THROW(check_bases({0, 2}), DomainError);
  EXPECT_NO_THROW(check_bases({2, 3}));
}

TEST(FidelityTable, Identity) {
  for (int n : {2, 3}) {
    auto t = fidelity_table(identity_channel(), n);
    for (double f : t.values()) EXPECT_NEAR(f, 1.0, 1e-15);
  }
}

TEST(FidelityTable, Depolarizing) {
  for (double v : {0.0, 0.3, 0.8, 1.0}) {
    auto t = fidelity_table(depolarizing(v), 3);
    for (double f : t.values()) EXPECT_NEAR(f, (1 + v) / 2, 1e-15);
  }
}

TEST(FidelityTable, PhaseDamping) {
  auto t = fidelity_table(phase_damped(), 3);
  EXPECT_NEAR(t.at(3, 1), 1.0, 1e-15);
  EXPECT_NEAR(t.at(3, -1), 1.0, 1e-15);
  for (int i : {1, 2}) {
    EXPECT_NEAR(t.at(i, 1), 0.75, 1e-15);
    EXPECT_NEAR(t.at(i, -1), 0.75, 1e-15);
  }
  EXPECT_NEAR(t.variance(), 1.0 / 72.0, 1e-15);
  EXPECT_NEAR(t.min(), 0.75, 1e-15);
  EXPECT_NEAR(t.max(), 1.0, 1e-15);
}

TEST(FidelityTable, Validation) {
  EXPECT_THROW(FidelityTable({1, 3}, {1.0, 1.0, 1.0}), ValidationError);
  EXPECT_THROW(FidelityTable({1, 3}, {1.0, 1.0, 1.0, 1.2}), ValidationError);
  EXPECT_THROW(FidelityTable({1, 3}, {1.0, 1.0, 1.0, 1.0}).at(2, 1), DomainError);
}

TEST(SteeringParameter, Examples) {
  EXPECT_NEAR(steering_parameter(fidelity_table(identity_channel(), 2)), 2.0, 1e-15);
  EXPECT_NEAR(steering_parameter(fidelity_table(identity_channel(), 3)), 3.0, 1e-15);
  EXPECT_NEAR(steering_parameter(fidelity_table(depolarizing(0.8), 2)), 1.28, 1e-15);
  Channel pc = make_channel({spec::PhaseCovariant{"xz"}});
  EXPECT_NEAR(steering_parameter(fidelity_table(pc, 2)), 1.0, 1e-15);
}

TEST(SteeringParameter, StatisticsForm) {
  std::vector<ConditionalRow> perfect, random;
  for (int i : {1, 3}) {
    for (int a : {1, -1}) {
      perfect.push_back({i, a, 0.5, a == 1 ? 1.0 : 0.0, a == 1 ? 0.0 : 1.0});
      random.push_back({i, a, 0.5, 0.5, 0.5});
    }
  }
  EXPECT_NEAR(steering_parameter_from_statistics(perfect), 2.0, 1e-15);
  EXPECT_NEAR(steering_parameter_from_statistics(random), 0.0, 1e-15);
  EXPECT_NEAR(steering_parameter_from_statistics(channel_statistics(depolarizing(0.8), {1, 3})), 1.28, 1e-15);
  random[0].p_plus = 0.7;
  EXPECT_THROW(steering_parameter_from_statistics(random), ValidationError);
  random[0].p_plus = 0.5;
  random[1].prior = 0.6;
  EXPECT_THROW(steering_parameter_from_statistics(random), ValidationError);
}

TEST(SteeringParameter, EstimatorsAgreeOnCatalog) {
  for (const auto& e : channel_catalog()) {
    Channel ch = make_channel(e.spec);
    for (int n : {2, 3}) {
      double a = steering_parameter(fidelity_table(ch, n));
      double b = steering_parameter_from_statistics(channel_statistics(ch, default_bases(n)));
      EXPECT_NEAR(a, b, 1e-12) << e.name << " N=" << n;
    }
  }
}

TEST(BranchResolved, Examples) {
  EXPECT_NEAR(branch_resolved_steering(identity_channel(), 2), 2.0, 1e-15);
  EXPECT_NEAR(branch_resolved_steering(identity_channel(), 3), 3.0, 1e-15);
  for (int n : {2, 3}) {
    Channel ir = intercept_resend(all_bases(n));
    EXPECT_NEAR(branch_resolved_steering(ir, n), 1.0, 1e-12) << n;
    // Observed S_N on the mixture is 1/N.
    EXPECT_NEAR(steering_parameter(fidelity_table(ir, n)), 1.0 / n, 1e-12) << n;
  }
}

TEST(BranchResolved, NotBelowObserved) {
  for (const auto& e : channel_catalog()) {
    Channel ch = make_channel(e.spec);
    for (int n : {2, 3}) EXPECT_GE(branch_resolved_steering(ch, n) + 1e-12, steering_parameter(fidelity_table(ch, n))) << e.name;
  }
}

TEST(Qber, Examples) {
  EXPECT_NEAR(qber(fidelity_table(identity_channel(), 2)), 0.0, 1e-15);
  EXPECT_NEAR(qber(fidelity_table(intercept_resend({1, 2, 3}), 3)), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(qber(fidelity_table(intercept_resend({1, 3}), 2)), 0.25, 1e-15);
  EXPECT_NEAR(qber(fidelity_table(depolarizing(0.8), 2)), 0.1, 1e-15);
}

TEST(LowerBound, Examples) {
  EXPECT_NEAR(qber_lower_bound(2.0, 2), 0.0, 1e-15);
  EXPECT_NEAR(qber_lower_bound(3.0, 3), 0.0, 1e-15);
  EXPECT_NEAR(qber_lower_bound(1.0, 2), kQ2, 1e-15);
  EXPECT_NEAR(kQ2, 0.146447, 1e-6);
  EXPECT_THROW(qber_lower_bound(2.5, 2), DomainError);
  EXPECT_THROW(qber_lower_bound(-0.1, 3), DomainError);
}

TEST(UpperBound, Examples) {
  for (int n : {2, 3}) EXPECT_NEAR(qber_upper_bound(1.0, n, 0.5, 1.0), (1.0 - 1.0 / n) / 2.0, 1e-15);
  EXPECT_NEAR(qber_upper_bound(1.5, 3, 0.75, 1.0), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(qber_upper_bound(2.0, 2, 1.0, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(qber_upper_bound(3.0, 3, 1.0, 1.0), 0.0, 1e-15);
  EXPECT_THROW(qber_upper_bound(1.0, 2, 0.0, 1.0), DomainError);
}

TEST(UpperBound, AgreesWithMOneForm) {
  for (double m : {0.3, 0.5, 0.75, 0.9}) {
    for (double s : {0.5, 1.0, 1.5}) {
      double classic = (1.0 - s / 2.0) / (4.0 * m);
      EXPECT_NEAR(qber_upper_bound(s, 2, m, 1.0), std::min(classic, 1.0 - m), 1e-15);
    }
  }
}

TEST(UpperBound, HoldsBelowUnitMax) {
  // Depolarizing: every fidelity (1+v)/2 < 1.
  auto t = fidelity_table(depolarizing(0.5), 2);
  auto s = summarize(t);
  EXPECT_NEAR(s.qber, 0.25, 1e-15);
  EXPECT_GE(s.qber_upper + 1e-15, s.qber);
  EXPECT_LE(s.qber_lower, s.qber + 1e-15);
}

TEST(Identities, VarianceIdentity) {
  EXPECT_NEAR(variance_identity_check(fidelity_table(identity_channel(), 2)), 0.0, 1e-15);
  EXPECT_NEAR(variance_identity_check(fidelity_table(depolarizing(0.37), 3)), 0.0, 1e-15);
  EXPECT_NEAR(variance_identity_check(fidelity_table(phase_damped(), 3)), 0.0, 1e-15);
  CounterRng rng(21, 0);
  for (int k = 0; k < 200; ++k) {
    for (int n : {2, 3}) EXPECT_LT(variance_identity_check(fidelity_table(make_channel({random_pauli(rng)}), n)), 1e-14);
  }
}

TEST(Identities, BhatiaDavis) {
  EXPECT_NEAR(bhatia_davis_check(fidelity_table(identity_channel(), 3)), 0.0, 1e-15);
  EXPECT_NEAR(bhatia_davis_check(fidelity_table(phase_damped(), 3)), 0.0, 1e-15);
  EXPECT_GT(bhatia_davis_check(FidelityTable({1, 3}, {1.0, 0.9, 0.8, 0.7})), 1e-3);
}

TEST(SymmetricNoise, Examples) {
  EXPECT_NEAR(symmetric_noise_S(0.0, 2), 2.0, 1e-15);
  EXPECT_NEAR(symmetric_noise_S(0.0, 3), 3.0, 1e-15);
  EXPECT_NEAR(symmetric_noise_S(1.0 / 6.0, 3), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(symmetric_noise_S(0.5, 2), 0.0, 1e-15);
  // Isotropic channels saturate the lower bound.
  for (double v : {0.2, 0.6, 0.9}) {
    auto s = summarize(fidelity_table(depolarizing(v), 3));
    EXPECT_NEAR(s.s, symmetric_noise_S(s.qber, 3), 1e-14);
    EXPECT_NEAR(s.qber_lower, s.qber, 1e-14);
  }
}

TEST(Sandwich, CatalogAndRandom) {
  auto check = [](const Channel& ch, const std::string& what) {
    for (int n : {2, 3}) {
      auto s = summarize(fidelity_table(ch, n));
      EXPECT_LE(s.qber_lower, s.qber + 1e-12) << what << " N=" << n;
      EXPECT_GE(s.qber_upper, s.qber - 1e-12) << what << " N=" << n;
    }
  };
  for (const auto& e : channel_catalog()) check(make_channel(e.spec), e.name);
  CounterRng rng(22, 0);
  for (int k = 0; k < 300; ++k) check(make_channel({random_pauli(rng)}), "random pauli");
  for (int k = 0; k < 100; ++k) {
    Channel u = make_channel({spec::Kraus{{random_unitary(rng)}, {}}});
    check(u, "random unitary");
  }
}

TEST(Summary, Fields) {
  auto s = summarize(fidelity_table(phase_damped(), 3), 1.5);
  EXPECT_EQ(s.n, 3);
  EXPECT_NEAR(s.s, 1.5, 1e-15);
  EXPECT_NEAR(s.qber, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(s.qber_upper, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(s.f_mean, 5.0 / 6.0, 1e-15);
  ASSERT_TRUE(s.branch_resolved_s.has_value());
}

TEST(Thresholds, Values) {
  EXPECT_NEAR(individual_attack_threshold(2), kQ2, 1e-15);
  EXPECT_NEAR(individual_attack_threshold(3), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(steering_threshold(2, kQ2), 1.0, 1e-15);
  EXPECT_NEAR(steering_threshold(3, 1.0 / 6.0), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(monogamy_threshold(2), 1.0, 1e-15);
  EXPECT_NEAR(monogamy_threshold(3), 4.0 / 3.0, 1e-15);
  EXPECT_EQ(protocol_for(2), Protocol::bb84);
  EXPECT_EQ(protocol_for(3), Protocol::b98);
  EXPECT_EQ(basis_count(Protocol::b98), 3);
  EXPECT_EQ(parse_protocol(to_string(Protocol::bb84)), Protocol::bb84);
  EXPECT_EQ(parse_security_mode("unconditional"), SecurityMode::unconditional);
  EXPECT_THROW(parse_security_mode("coherent"), DomainError);
}

TEST(Verdict, Examples) {
  auto pc = security_verdict(1.0, 2, SecurityMode::individual);
  EXPECT_FALSE(pc.secure);
  EXPECT_FALSE(pc.monogamous);
  auto dep = security_verdict(3 * 0.81, 3, SecurityMode::individual);
  EXPECT_TRUE(dep.secure);
  EXPECT_TRUE(dep.monogamous);
  EXPECT_FALSE(security_verdict(4.0 / 3.0, 3, SecurityMode::individual).secure);
  // Rounding noise at the threshold stays insecure.
  EXPECT_FALSE(security_verdict(1.0 + 1e-14, 2, SecurityMode::individual).secure);
  EXPECT_TRUE(security_verdict(1.0 + 1e-9, 2, SecurityMode::individual).secure);
  auto id = security_verdict(2.0, 2, SecurityMode::individual);
  EXPECT_TRUE(id.secure && id.monogamous);
}

TEST(Verdict, Unconditional) {
  auto v = security_verdict(1.28, 2, SecurityMode::unconditional);
  EXPECT_NEAR(v.q_threshold, kDefaultUnconditionalQ, 1e-15);
  EXPECT_NEAR(v.s_threshold, 2 * 0.64, 1e-15);
  EXPECT_FALSE(v.secure);
  EXPECT_TRUE(security_verdict(1.3, 2, SecurityMode::unconditional).secure);
  EXPECT_NEAR(security_verdict(1.0, 3, SecurityMode::unconditional, 0.05).s_threshold, 3 * 0.81, 1e-15);
  EXPECT_THROW(security_verdict(1.0, 2, SecurityMode::unconditional, 0.5), DomainError);
  EXPECT_THROW(security_verdict(1.0, 2, SecurityMode::unconditional, 0.0), DomainError);
}

TEST(Monotonicity, DepolarizingPostProcessing) {
  for (const auto& e : channel_catalog()) {
    Channel ch = make_channel(e.spec);
    for (int n : {2, 3}) {
      double prev = steering_parameter(fidelity_table(ch, n));
      for (double v = 0.9; v >= 0.0; v -= 0.1) {
        spec::Composite c;
        c.parts = {e.spec, {spec::Depolarizing{v}}};
        double cur = steering_parameter(fidelity_table(make_channel({c}), n));
        EXPECT_LE(cur, prev + 1e-12) << e.name;
        prev = cur;
      }
    }
  }
}

}  // namespace
}  // namespace tsteer
