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

// Invariant catalog run by `tsteer selftest`.

#include <string>
#include <vector>

namespace tsteer {

enum class SelftestFault {
  none,
  // Negative control: evaluate the QBER lower bound with the square-root
  // term's sign flipped. The sandwich check must then fail.
  lower_bound_sign,
};

struct SelftestOptions {
  SelftestFault fault = SelftestFault::none;
  double sdp_tol = 1e-8;
};

struct ThresholdRow {
  int n = 0;
  double q_n = 0.0;
  double s_threshold = 0.0;
  double monogamy_threshold = 0.0;
};

struct SelftestCheck {
  std::string name;
  int n = 0;  // 0: not specific to one N
  bool passed = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<ThresholdRow> thresholds;
  std::vector<SelftestCheck> checks;
  bool all_passed() const;
};

SelftestReport run_selftest(const SelftestOptions& options = {});

// Threshold table followed by a check x N result matrix.
std::string format_selftest(const SelftestReport& report);

SelftestFault parse_selftest_fault(const std::string& s);

}  // namespace tsteer
