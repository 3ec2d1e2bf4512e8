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

#include "tsteer/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "tsteer/error.hpp"

namespace tsteer {

namespace {

io::Json::json_pointer parameter_pointer(const std::string& parameter) {
  return io::Json::json_pointer("/" + parameter);
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

SweepRow evaluate(const SweepConfig& config, double value) {
  io::Json spec = config.channel;
  spec[parameter_pointer(config.parameter)] = value;
  ChannelSpec parsed = io::parse_channel_spec(spec.dump());
  Channel channel = make_channel(parsed);
  SteeringReport rep = analyze_channel(channel, config.bases, config.analysis);
  SweepRow row;
  row.value = value;
  row.summary = rep.summary;
  row.w_t = rep.weight.w_t;
  row.individual = rep.verdicts.at(0);
  row.unconditional = rep.verdicts.at(1);
  return row;
}

}  // namespace

std::vector<double> linear_grid(double start, double stop, int count) {
  if (count < 1) throw DomainError("grid needs at least one point");
  if (!std::isfinite(start) || !std::isfinite(stop)) throw DomainError("grid bounds must be finite");
  std::vector<double> g;
  for (int k = 0; k < count; ++k) {
    g.push_back(count == 1 ? start : start + (stop - start) * k / (count - 1));
  }
  return g;
}

void check_sweep_parameter(const io::Json& channel, const std::string& parameter) {
  if (parameter.empty()) throw DomainError("sweep parameter name is empty");
  auto slash = parameter.rfind('/');
  std::string leaf = slash == std::string::npos ? parameter : parameter.substr(slash + 1);
  const io::Json* parent = &channel;
  if (slash != std::string::npos) {
    auto ptr = io::Json::json_pointer("/" + parameter.substr(0, slash));
    if (!channel.contains(ptr)) throw DomainError("unknown sweep parameter \"" + parameter + "\"");
    parent = &channel.at(ptr);
  }
  auto allowed = io::sweepable_parameters(*parent);
  if (std::find(allowed.begin(), allowed.end(), leaf) == allowed.end()) {
    std::string kind = parent->is_object() && parent->contains("kind") ? parent->at("kind").dump() : "?";
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw DomainError("unknown sweep parameter \"" + parameter + "\" for kind " + kind +
                      (list.empty() ? " (it has no numeric parameters)" : " (expected one of: " + list + ")"));
  }
}

SweepResult run_sweep(const SweepConfig& config) {
  check_sweep_parameter(config.channel, config.parameter);
  check_bases(config.bases);
  SweepResult result{config, std::vector<SweepRow>(config.grid.size())};
  std::vector<std::exception_ptr> errors(config.grid.size());
  std::atomic<std::size_t> next{0};
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, config.grid.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < config.grid.size(); k = next++) {
          try {
            result.rows[k] = evaluate(config, config.grid[k]);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        }
      });
    }
  }
  // Report the first failing grid point, independent of scheduling.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return result;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out =
      "schema_version,parameter,value,N,S,S_branch_resolved,qber,qber_lower_bound,qber_upper_bound,w_t,"
      "secure_individual,secure_unconditional,monogamous\n";
  for (const auto& r : result.rows) {
    const auto& s = r.summary;
    out += std::to_string(io::kSchemaVersion) + "," + result.config.parameter + "," + num(r.value) + "," +
           std::to_string(s.n) + "," + num(s.s) + "," + (s.branch_resolved_s ? num(*s.branch_resolved_s) : "") + "," +
           num(s.qber) + "," + num(s.qber_lower) + "," + num(s.qber_upper) + "," + num(r.w_t) + "," +
           (r.individual.secure ? "true" : "false") + "," + (r.unconditional.secure ? "true" : "false") + "," +
           (r.individual.monogamous ? "true" : "false") + "\n";
  }
  return out;
}

io::Json sweep_to_json(const SweepResult& result) {
  io::Json rows = io::Json::array();
  for (const auto& r : result.rows) {
    rows.push_back(io::Json{{"value", r.value},
                            {"summary", io::summary_to_json(r.summary)},
                            {"w_t", r.w_t},
                            {"verdicts", io::Json::array({io::verdict_to_json(r.individual),
                                                          io::verdict_to_json(r.unconditional)})}});
  }
  io::Json bases = io::Json::array();
  for (int b : result.config.bases) bases.push_back(b);
  return io::Json{{"schema_version", io::kSchemaVersion},
                  {"kind", "sweep"},
                  {"channel", result.config.channel},
                  {"parameter", result.config.parameter},
                  {"N", result.config.bases.size()},
                  {"bases", bases},
                  {"rows", rows}};
}

}  // namespace tsteer
