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

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tsteer/assemblage.hpp"
#include "tsteer/io.hpp"

namespace tsteer::testing {

struct SdpFixture {
  std::string name;
  std::string family;
  int n = 0;
  double primal_value = 0.0;
  double w_t = 0.0;
  Assemblage assemblage;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<SdpFixture> load_sdp_fixtures() {
  const auto doc = io::Json::parse(read_file(std::string(TSTEER_FIXTURE_DIR) + "/sdp_reference.json"));
  std::vector<SdpFixture> out;
  for (const auto& f : doc.at("fixtures")) {
    out.push_back({f.at("name").get<std::string>(), f.at("family").get<std::string>(), f.at("N").get<int>(),
                   f.at("primal_value").get<double>(), f.at("w_t").get<double>(),
                   io::parse_assemblage(f.at("assemblage").dump())});
  }
  return out;
}

}  // namespace tsteer::testing
