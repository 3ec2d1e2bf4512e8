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
#include "tsteer/qkd.hpp"
#include "tsteer/rng.hpp"

namespace tsteer {
namespace {

SessionConfig config(ChannelSpec channel, Protocol protocol, std::uint64_t rounds, std::uint64_t seed = 7) {
  SessionConfig c;
  c.protocol = protocol;
  c.channel = std::move(channel);
  c.rounds = rounds;
  c.seed = seed;
  return c;
}

TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (PhiloxBlock{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxBlock{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxBlock{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterRng, StreamsAreIndependentAndRepeatable) {
  CounterRng a(5, 0), b(5, 0), c(5, 1);
  bool differ = false;
  for (int k = 0; k < 100; ++k) {
    auto x = a.next_u32();
    EXPECT_EQ(x, b.next_u32());
    differ |= x != c.next_u32();
  }
  EXPECT_TRUE(differ);
}

TEST(CounterRng, UniformAndBelow) {
  CounterRng r(6, 0);
  double sum = 0.0;
  std::array<int, 3> hist{};
  const int n = 30000;
  for (int k = 0; k < n; ++k) {
    double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    hist[r.below(3)]++;
  }
  EXPECT_NEAR(sum / n, 0.5, 3 * std::sqrt(1.0 / 12 / n) * 2);
  for (int h : hist) EXPECT_NEAR(h, n / 3.0, 4 * std::sqrt(n * 2.0 / 9));
}

TEST(Sift, Examples) {
  std::vector<RoundRecord> rounds = {
      {0, 1, 1, 0, 1, 1, Purpose::key},        {1, 3, -1, 0, 1, 1, Purpose::tomography},
      {2, 3, 1, 0, 2, -1, Purpose::tomography}, {3, 1, -1, 0, 1, 1, Purpose::tomography},
      {4, 3, 1, 0, 1, 1, Purpose::key},         {5, 3, -1, 0, 3, -1, Purpose::key},
  };
  auto s = sift(rounds);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].round, 0u);
  EXPECT_EQ(s[1].round, 5u);
  std::vector<RoundRecord> tomo(rounds.begin() + 1, rounds.begin() + 4);
  EXPECT_TRUE(sift(tomo).empty());
}

TEST(EstimateQber, Examples) {
  std::vector<RoundRecord> r(100, RoundRecord{0, 1, 1, 0, 1, 1, Purpose::key});
  auto zero = estimate_qber(r);
  EXPECT_EQ(zero.value, 0.0);
  EXPECT_EQ(zero.std_error, 0.0);
  for (int k = 0; k < 25; ++k) r[k].b = -1;
  auto q = estimate_qber(r);
  EXPECT_NEAR(q.value, 0.25, 1e-15);
  EXPECT_NEAR(q.std_error, 0.0433, 5e-5);
  EXPECT_EQ(q.errors, 25u);
  EXPECT_THROW(estimate_qber({}), ValidationError);
}

TEST(Session, ConfigValidation) {
  auto c = config({spec::Identity{}}, Protocol::bb84, 0);
  EXPECT_THROW(c.check(), DomainError);
  c.rounds = kMaxRounds + 1;
  EXPECT_THROW(c.check(), DomainError);
  c.rounds = 10;
  c.tomography_fraction = 0.0;
  EXPECT_THROW(c.check(), DomainError);
  c.tomography_fraction = 0.25;
  c.basis_pair = {2, 2};
  EXPECT_ANY_THROW(c.check());
  c.basis_pair = {1, 3};
  EXPECT_NO_THROW(c.check());
  EXPECT_EQ(config({spec::Identity{}}, Protocol::b98, 1).bases(), (std::vector<int>{1, 2, 3}));
}

TEST(Session, IdentityIsNoiseless) {
  auto r = run_session(config({spec::Identity{}}, Protocol::bb84, 10000));
  EXPECT_EQ(r.qber.value, 0.0);
  EXPECT_EQ(r.qber.errors, 0u);
  EXPECT_GT(r.sifted_length, 7000u);
  EXPECT_EQ(r.records.size(), 10000u);
  for (const auto& rec : sift(r.records)) {
    EXPECT_EQ(rec.i, rec.j);
    EXPECT_EQ(rec.purpose, Purpose::key);
  }
}

TEST(Session, Deterministic) {
  auto c = config({spec::InterceptResend{{1, 2, 3}}}, Protocol::b98, 20000, 99);
  c.threads = 1;
  auto a = run_session(c);
  c.threads = 4;
  auto b = run_session(c);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    ASSERT_EQ(a.records[k].b, b.records[k].b);
    ASSERT_EQ(a.records[k].branch, b.records[k].branch);
    ASSERT_EQ(a.records[k].j, b.records[k].j);
  }
  EXPECT_EQ(a.qber.errors, b.qber.errors);
  c.seed = 100;
  EXPECT_NE(run_session(c).qber.errors, a.qber.errors);
}

TEST(Session, DepolarizingQber) {
  auto c = config({spec::Depolarizing{0.8}}, Protocol::bb84, 133334);
  c.keep_records = false;
  auto r = run_session(c);
  EXPECT_TRUE(r.records.empty());
  EXPECT_GE(r.sifted_length, 95000u);
  EXPECT_NEAR(r.qber.value, 0.1, 3 * std::sqrt(0.09 / r.sifted_length));
}

TEST(Session, InterceptResendQber) {
  auto r = run_session(config({spec::InterceptResend{{1, 3}}}, Protocol::bb84, 40000));
  EXPECT_NEAR(r.qber.value, 0.25, 3 * std::sqrt(0.25 * 0.75 / r.sifted_length));
  EXPECT_TRUE(r.branches_exposed);
}

TEST(Session, UniversalClonerB98) {
  auto r = run_session(config({spec::UniversalCloner{}}, Protocol::b98, 100000));
  const double q = 1.0 / 6.0;
  EXPECT_NEAR(r.qber.value, q, 3 * std::sqrt(q * (1 - q) / r.sifted_length));
  EXPECT_FALSE(r.branches_exposed);
}

TEST(Session, RandomBobBasisSiftsHalf) {
  auto c = config({spec::Identity{}}, Protocol::bb84, 20000);
  c.bob_basis = BobBasisMode::random;
  auto r = run_session(c);
  const double key = 0.75 * 20000;
  EXPECT_NEAR(r.sifted_length, key / 2, 4 * std::sqrt(key / 4));
  EXPECT_EQ(r.qber.value, 0.0);
  EXPECT_EQ(parse_bob_basis_mode(to_string(BobBasisMode::random)), BobBasisMode::random);
}

TEST(Analyze, ChannelReports) {
  auto id = analyze_channel(identity_channel(), {1, 3});
  EXPECT_NEAR(id.summary.s, 2.0, 1e-15);
  EXPECT_GT(id.weight.w_t, 0.0);
  ASSERT_EQ(id.verdicts.size(), 2u);
  EXPECT_TRUE(id.verdicts[0].secure && id.verdicts[0].monogamous);
  auto uc = analyze_channel(make_channel({spec::UniversalCloner{}}), {1, 2, 3});
  EXPECT_NEAR(uc.summary.s, 4.0 / 3.0, 1e-14);
  EXPECT_FALSE(uc.verdicts[0].secure);
}

TEST(Analyze, DepolarizingB98) {
  auto r = run_session(config({spec::Depolarizing{0.9}}, Protocol::b98, 300000));
  auto rep = analyze(r, ChannelSpec{spec::Depolarizing{0.9}});
  ASSERT_TRUE(rep.s_estimate.has_value());
  EXPECT_NEAR(rep.summary.s, 2.43, 3 * rep.s_estimate->std_error);
  EXPECT_TRUE(rep.verdicts[0].secure);
  ASSERT_TRUE(rep.empirical_vs_analytic.has_value());
  EXPECT_NEAR(rep.empirical_vs_analytic->analytic.s, 2.43, 1e-14);
  EXPECT_LE(rep.s_for_verdict, rep.summary.s);
}

TEST(Analyze, PhaseCovariantBB84) {
  auto r = run_session(config({spec::PhaseCovariant{"xz"}}, Protocol::bb84, 100000));
  auto rep = analyze(r);
  EXPECT_NEAR(rep.summary.s, 1.0, 3 * rep.s_estimate->std_error);
  EXPECT_FALSE(rep.verdicts[0].secure);
}

TEST(Analyze, IdentityBB84) {
  auto rep = analyze(run_session(config({spec::Identity{}}, Protocol::bb84, 20000)));
  EXPECT_NEAR(rep.summary.s, 2.0, 1e-12);
  EXPECT_GT(rep.weight.w_t, 0.0);
  EXPECT_TRUE(rep.verdicts[0].secure);
  EXPECT_TRUE(rep.verdicts[0].monogamous);
}

TEST(Analyze, InterceptResendBranchResolved) {
  for (Protocol p : {Protocol::bb84, Protocol::b98}) {
    const int n = basis_count(p);
    std::vector<int> bases = n == 2 ? std::vector<int>{1, 3} : std::vector<int>{1, 2, 3};
    auto rep = analyze(run_session(config({spec::InterceptResend{bases}}, p, 100000)));
    ASSERT_TRUE(rep.branch_resolved_estimate.has_value());
    EXPECT_FALSE(rep.branch_resolved_diagnostic);
    EXPECT_NEAR(rep.branch_resolved_estimate->value, 1.0, 3 * rep.branch_resolved_estimate->std_error);
    EXPECT_NEAR(rep.summary.s, 1.0 / n, 3 * rep.s_estimate->std_error);
  }
}

TEST(Analyze, EmpiricalSandwich) {
  for (const auto& e : channel_catalog()) {
    auto rep = analyze(run_session(config(e.spec, Protocol::b98, 40000, 3)));
    const double window = 3 * rep.qber_hat->std_error;
    EXPECT_LE(rep.summary.qber_lower, rep.qber_hat->value + window + 3 * rep.s_estimate->std_error) << e.name;
  }
}

TEST(Analyze, InsufficientTomography) {
  auto r = run_session(config({spec::Identity{}}, Protocol::b98, 20));
  EXPECT_THROW(analyze(r), ValidationError);
}

}  // namespace
}  // namespace tsteer
