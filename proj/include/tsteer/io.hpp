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

// JSON and CSV forms of every public data type. All emitted documents carry
// "schema_version"; see schema/README.md for the frozen key and column sets.
//
// Readers throw ParseError whose anchor is "line L, column C" (syntax errors
// and schema violations alike; schema violations also name the JSON pointer).

#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "tsteer/assemblage.hpp"
#include "tsteer/channel.hpp"
#include "tsteer/metrics.hpp"
#include "tsteer/qkd.hpp"
#include "tsteer/sdp.hpp"
#include "tsteer/weight.hpp"

namespace tsteer::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// A parsed document that remembers where each value started, so schema
// errors found after parsing can still point at a line.
class Document {
 public:
  static Document parse(std::string_view text);

  const Json& root() const { return root_; }
  // "line L, column C" for a JSON pointer ("" is the root); falls back to the
  // nearest enclosing value that was located.
  std::string anchor(const std::string& pointer) const;
  [[noreturn]] void fail(const std::string& pointer, const std::string& what) const;

 private:
  Json root_;
  std::vector<std::pair<std::string, std::pair<int, int>>> positions_;
};

Json matrix_to_json(const ComplexMatrix2& m);
Json bloch_to_json(const BlochVector& b);

ChannelSpec channel_spec_from_json(const Document& doc, const std::string& pointer = "");
ChannelSpec parse_channel_spec(std::string_view text);
Json channel_spec_to_json(const ChannelSpec& spec);
// Numeric fields a sweep may vary for the kind of `spec_json`.
std::vector<std::string> sweepable_parameters(const Json& spec_json);

Assemblage parse_assemblage(std::string_view text);
Json assemblage_to_json(const Assemblage& assemblage);

std::string counts_to_csv(const TomographyCounts& counts);
TomographyCounts parse_counts_csv(std::string_view text);

Json fidelity_table_to_json(const FidelityTable& table);
Json summary_to_json(const SteeringSummary& summary);
Json verdict_to_json(const SecurityVerdict& verdict);
Json weight_to_json(const WeightResult& weight);
Json report_to_json(const SteeringReport& report);

SessionConfig parse_session_config(std::string_view text);
Json session_config_to_json(const SessionConfig& config);
Json session_result_to_json(const SessionResult& result, const SteeringReport& report);
std::string records_to_csv(const SessionResult& result);

Json sdp_problem_to_json(const sdp::Problem& problem);
Json sdp_solution_to_json(const sdp::Solution& solution);

// Stable text form: two-space indent, trailing newline.
std::string dump(const Json& j);

}  // namespace tsteer::io
