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

// One-parameter sweeps of a channel spec, evaluated in a worker pool.

#include <string>
#include <vector>

#include "tsteer/io.hpp"
#include "tsteer/qkd.hpp"

namespace tsteer {

struct SweepConfig {
  io::Json channel;       // ChannelSpec JSON
  std::string parameter;  // "v", or a path into composites such as "parts/0/v"
  std::vector<double> grid;
  std::vector<int> bases{1, 3};
  AnalysisOptions analysis;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SweepRow {
  double value = 0.0;
  SteeringSummary summary;
  double w_t = 0.0;
  SecurityVerdict individual;
  SecurityVerdict unconditional;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;  // grid order
};

// count points from start to stop inclusive.
std::vector<double> linear_grid(double start, double stop, int count);

// Throws DomainError for a parameter the channel kind does not have.
void check_sweep_parameter(const io::Json& channel, const std::string& parameter);

SweepResult run_sweep(const SweepConfig& config);

// Frozen columns: schema_version,parameter,value,N,S,S_branch_resolved,qber,
// qber_lower_bound,qber_upper_bound,w_t,secure_individual,secure_unconditional,monogamous
std::string sweep_to_csv(const SweepResult& result);
io::Json sweep_to_json(const SweepResult& result);

}  // namespace tsteer
