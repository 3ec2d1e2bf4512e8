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

#include <algorithm>
#include <cmath>

#include "tsteer/catalog.hpp"
#include "tsteer/error.hpp"
#include "tsteer/io.hpp"
#include "tsteer/sweep.hpp"

namespace tsteer {
namespace {

using io::Json;

std::string parse_error(std::string_view text) {
  try {
    io::parse_channel_spec(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

TEST(ChannelJson, CatalogRoundTrip) {
  for (const auto& e : channel_catalog()) {
    const std::string text = io::dump(io::channel_spec_to_json(e.spec));
    const ChannelSpec back = io::parse_channel_spec(text);
    EXPECT_EQ(io::dump(io::channel_spec_to_json(back)), text) << e.name;
    Channel a = make_channel(e.spec), b = make_channel(back);
    for (const auto& l : MubLabel::all()) {
      EXPECT_LT(apply(a, mub_state(l)).matrix().max_abs_diff(apply(b, mub_state(l)).matrix()), 1e-15) << e.name;
    }
  }
}

TEST(ChannelJson, Forms) {
  EXPECT_NO_THROW(io::parse_channel_spec(R"({"kind":"unitary","axis":"y","angle":0.5})"));
  EXPECT_NO_THROW(io::parse_channel_spec(R"({"kind":"unitary","axis":[1,0,1],"angle":0.5})"));
  EXPECT_NO_THROW(io::parse_channel_spec(R"({"kind":"phase_damping","p":0.1,"axis":"x"})"));
  EXPECT_NO_THROW(io::parse_channel_spec(R"({"kind":"pauli","px":0.1})"));
  auto k = io::parse_channel_spec(
      R"({"kind":"kraus","operators":[[[[0.6,0],[0,0]],[[0,0],[0.6,0]]],[[0.8,0],[0,0.8]]],"labels":["a","b"]})");
  EXPECT_TRUE(validate(make_channel(k)).trace_preserving);
}

TEST(ChannelJson, LineAnchoredErrors) {
  EXPECT_NE(parse_error("{\"kind\":\"depolarizing\",\n  \"v\": 1.5}").find("line 2, column 8"), std::string::npos);
  EXPECT_NE(parse_error("{\"kind\":\"depolarizing\",\n \"v\": }").find("line 2"), std::string::npos);
  EXPECT_NE(parse_error(R"({"kind":"teleport"})").find("kind"), std::string::npos);
  EXPECT_NE(parse_error(R"({"kind":"identity","extra":1})").find("extra"), std::string::npos);
  EXPECT_NE(parse_error(R"({"kind":"depolarizing"})").find("v"), std::string::npos);
  EXPECT_NE(parse_error(R"({"kind":"depolarizing","v":"high"})").find("/v"), std::string::npos);
  const auto nested = parse_error("{\"kind\":\"composite\",\"parts\":[\n {\"kind\":\"identity\"},\n {\"kind\":\"pauli\",\"px\":0.6,\"pz\":0.6}]}");
  EXPECT_NE(nested.find("line 3"), std::string::npos) << nested;
  EXPECT_TRUE(parse_error(R"({"kind":"pauli","px":0.2,"py":0.2})").empty());
}

TEST(AssemblageJson, RoundTrip) {
  auto a = build_assemblage(make_channel(catalog_entry("amplitude_damping_0.3").spec), 3);
  auto j = io::assemblage_to_json(a);
  EXPECT_EQ(j.at("schema_version"), io::kSchemaVersion);
  auto b = io::parse_assemblage(j.dump());
  for (std::size_t k = 0; k < a.members().size(); ++k) EXPECT_EQ(a.members()[k], b.members()[k]);
}

TEST(AssemblageJson, Errors) {
  EXPECT_THROW(io::parse_assemblage(R"({"N":2,"members":[]})"), ParseError);
  EXPECT_THROW(io::parse_assemblage(R"({"N":4,"members":[]})"), ParseError);
  EXPECT_THROW(io::parse_assemblage("[1,2"), ParseError);
}

TEST(CountsCsv, RoundTrip) {
  auto c = expected_counts(depolarizing(0.7), {1, 2, 3}, 1000.0);
  const auto text = io::counts_to_csv(c);
  EXPECT_EQ(text.substr(0, text.find('\n')), "i,a,j,b,count");
  auto back = io::parse_counts_csv(text);
  for (const auto& l : MubLabel::all()) {
    for (int j = 1; j <= 3; ++j) {
      for (int b : {1, -1}) EXPECT_EQ(back.get(l.basis(), l.outcome(), j, b), c.get(l.basis(), l.outcome(), j, b));
    }
  }
}

TEST(CountsCsv, Errors) {
  try {
    io::parse_counts_csv("i,a,j,b,count\n1,1,1,1,10\n1,2,1,1,3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(io::parse_counts_csv("i,a,j,b\n"), ParseError);
  EXPECT_THROW(io::parse_counts_csv("i,a,j,b,count\n1,1,1,1,x\n"), ParseError);
  EXPECT_THROW(io::parse_counts_csv(""), ParseError);
}

TEST(SessionJson, ConfigRoundTrip) {
  auto c = io::parse_session_config(
      R"({"protocol":"B98","channel":{"kind":"universal_cloner"},"rounds":1000,"seed":12,"bob_basis":"random"})");
  EXPECT_EQ(c.protocol, Protocol::b98);
  EXPECT_EQ(c.rounds, 1000u);
  EXPECT_EQ(c.seed, 12u);
  EXPECT_EQ(c.bob_basis, BobBasisMode::random);
  EXPECT_DOUBLE_EQ(c.tomography_fraction, 0.25);
  auto again = io::parse_session_config(io::session_config_to_json(c).dump());
  EXPECT_EQ(io::session_config_to_json(again), io::session_config_to_json(c));
  EXPECT_THROW(io::parse_session_config(R"({"protocol":"E91","channel":{"kind":"identity"},"rounds":1})"), ParseError);
  EXPECT_THROW(io::parse_session_config(R"({"protocol":"BB84","channel":{"kind":"identity"},"rounds":0})"), ParseError);
}

TEST(SessionJson, RecordsCsv) {
  SessionConfig c;
  c.channel = {spec::InterceptResend{{1, 3}}};
  c.rounds = 5;
  c.seed = 1;
  auto r = run_session(c);
  const auto csv = io::records_to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "round,i,a,j,b,purpose,branch");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
  EXPECT_NE(csv.find(",\"eve:basis="), std::string::npos);
}

TEST(ReportJson, Keys) {
  auto rep = analyze_channel(make_channel({spec::PhaseDamping{0.25, 3}}), {1, 2, 3});
  auto j = io::report_to_json(rep);
  EXPECT_EQ(j.at("schema_version"), 1);
  const auto& s = j.at("summary");
  for (const char* key : {"S", "S_branch_resolved", "qber", "qber_lower_bound", "qber_upper_bound",
                          "variance_identity_residual", "bhatia_davis_slack", "thresholds"}) {
    EXPECT_TRUE(s.contains(key)) << key;
  }
  EXPECT_NEAR(s.at("qber_upper_bound").get<double>(), 1.0 / 6.0, 1e-15);
  EXPECT_TRUE(j.contains("verdicts"));
  EXPECT_TRUE(j.at("weight").contains("w_t"));
}

TEST(SdpJson, Dump) {
  auto w = build_weight_sdp(build_assemblage(depolarizing(0.9), 2));
  auto pj = io::sdp_problem_to_json(w.problem);
  EXPECT_EQ(pj.at("num_vars"), 16);
  EXPECT_EQ(pj.at("blocks").size(), 8u);
  auto sj = io::sdp_solution_to_json(sdp::solve(w.problem));
  EXPECT_EQ(sj.at("status"), "optimal");
}

TEST(Sweep, LinearGrid) {
  auto g = linear_grid(0.0, 1.0, 11);
  ASSERT_EQ(g.size(), 11u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_NEAR(g[7], 0.7, 1e-15);
  EXPECT_THROW(linear_grid(0.0, 1.0, 0), DomainError);
}

TEST(Sweep, DepolarizingN2) {
  SweepConfig c;
  c.channel = Json::parse(R"({"kind":"depolarizing","v":1})");
  c.parameter = "v";
  c.grid = linear_grid(0.0, 1.0, 11);
  auto r = run_sweep(c);
  ASSERT_EQ(r.rows.size(), 11u);
  for (const auto& row : r.rows) {
    EXPECT_NEAR(row.summary.s, 2 * row.value * row.value, 1e-12);
    if (row.value <= 0.7 + 1e-12) {
      EXPECT_EQ(row.w_t, 0.0) << row.value;
    } else {
      EXPECT_GT(row.w_t, 0.0) << row.value;
    }
  }
  const auto csv = sweep_to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "schema_version,parameter,value,N,S,S_branch_resolved,qber,qber_lower_bound,qber_upper_bound,w_t,"
            "secure_individual,secure_unconditional,monogamous");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
  EXPECT_EQ(sweep_to_json(r).at("rows").size(), 11u);
}

TEST(Sweep, ThreadCountDoesNotChangeOutput) {
  SweepConfig c;
  c.channel = Json::parse(R"({"kind":"composite","parts":[{"kind":"depolarizing","v":0.9},{"kind":"phase_damping","p":0.1,"axis":"z"}]})");
  c.parameter = "parts/1/p";
  c.grid = linear_grid(0.0, 0.5, 9);
  c.bases = {1, 2, 3};
  c.threads = 1;
  const auto one = sweep_to_csv(run_sweep(c));
  c.threads = 4;
  EXPECT_EQ(sweep_to_csv(run_sweep(c)), one);
}

TEST(Sweep, UnknownParameter) {
  auto ch = Json::parse(R"({"kind":"depolarizing","v":1})");
  EXPECT_THROW(check_sweep_parameter(ch, "p"), DomainError);
  EXPECT_NO_THROW(check_sweep_parameter(ch, "v"));
  EXPECT_THROW(check_sweep_parameter(Json::parse(R"({"kind":"identity"})"), "v"), DomainError);
  SweepConfig c;
  c.channel = ch;
  c.parameter = "gamma";
  c.grid = {0.5};
  EXPECT_THROW(run_sweep(c), DomainError);
}

TEST(Sweep, OutOfRangeValueFails) {
  SweepConfig c;
  c.channel = Json::parse(R"({"kind":"depolarizing","v":1})");
  c.parameter = "v";
  c.grid = {0.5, 1.5};
  EXPECT_ANY_THROW(run_sweep(c));
}

}  // namespace
}  // namespace tsteer
