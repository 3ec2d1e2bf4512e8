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

#include "tsteer/tsteer.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "tsteer/assemblage.hpp"
#include "tsteer/channel.hpp"
#include "tsteer/error.hpp"
#include "tsteer/io.hpp"
#include "tsteer/qkd.hpp"
#include "tsteer/selftest.hpp"
#include "tsteer/sweep.hpp"
#include "tsteer/weight.hpp"

struct tsteer_channel {
  tsteer::ChannelSpec spec;
  tsteer::Channel channel;
};

struct tsteer_assemblage {
  tsteer::Assemblage assemblage;
};

namespace {

using tsteer::io::Json;

thread_local std::string last_error;

tsteer_status fail(tsteer_status code, const std::string& message) {
  last_error = message;
  return code;
}

// Maps library exceptions onto status codes.
template <class F>
tsteer_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const tsteer::ParseError& e) {
    return fail(TSTEER_ERR_INPUT, e.what());
  } catch (const tsteer::ValidationError& e) {
    return fail(TSTEER_ERR_INPUT, e.what());
  } catch (const tsteer::DomainError& e) {
    return fail(TSTEER_ERR_INPUT, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(TSTEER_ERR_INPUT, e.what());
  } catch (const tsteer::NumericalError& e) {
    return fail(TSTEER_ERR_NUMERICAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TSTEER_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TSTEER_ERR_INTERNAL, e.what());
  }
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void require(const void* p, const char* what) {
  if (!p) throw tsteer::DomainError(std::string(what) + " must not be NULL");
}

std::vector<int> bases_of(const tsteer_analysis_options& o) {
  if (o.bases && o.bases_count) return {o.bases, o.bases + o.bases_count};
  return tsteer::default_bases(o.n);
}

tsteer::AnalysisOptions analysis_of(const tsteer_analysis_options& o) {
  tsteer::AnalysisOptions a;
  if (o.sdp_tol > 0) a.sdp_tol = o.sdp_tol;
  if (o.has_q_override) a.q_override = o.q_override;
  return a;
}

tsteer_analysis_options defaults_or(const tsteer_analysis_options* o) {
  tsteer_analysis_options d;
  tsteer_default_analysis_options(&d);
  return o ? *o : d;
}

tsteer::SecurityMode mode_of(int mode) {
  if (mode == TSTEER_MODE_INDIVIDUAL) return tsteer::SecurityMode::individual;
  if (mode == TSTEER_MODE_UNCONDITIONAL) return tsteer::SecurityMode::unconditional;
  throw tsteer::DomainError("unknown security mode " + std::to_string(mode));
}

// Adds the headline verdict for the requested mode.
Json with_headline(Json report, const tsteer::SteeringReport& rep, int mode) {
  auto m = mode_of(mode);
  for (const auto& v : rep.verdicts) {
    if (v.mode == m) {
      report["mode"] = tsteer::to_string(m);
      report["verdict"] = v.secure ? "secure" : "insecure";
      report["monogamous"] = v.monogamous;
    }
  }
  return report;
}


}  // namespace

extern "C" {

void tsteer_default_analysis_options(tsteer_analysis_options* o) {
  if (!o) return;
  *o = tsteer_analysis_options{};
  o->n = 2;
  o->mode = TSTEER_MODE_INDIVIDUAL;
  o->sdp_tol = tsteer::kDefaultSdpTol;
}

void tsteer_default_simulation_options(tsteer_simulation_options* o) {
  if (!o) return;
  *o = tsteer_simulation_options{};
  o->keep_records = -1;
}

const char* tsteer_version(void) { return TSTEER_VERSION; }

const char* tsteer_last_error(void) { return last_error.c_str(); }

void tsteer_string_free(char* s) { std::free(s); }

tsteer_status tsteer_channel_from_json(const char* json, tsteer_channel** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = nullptr;
    auto spec = tsteer::io::parse_channel_spec(json);
    auto channel = tsteer::make_channel(spec);
    *out = new tsteer_channel{std::move(spec), std::move(channel)};
    return TSTEER_OK;
  });
}

tsteer_status tsteer_channel_to_json(const tsteer_channel* channel, char** out) {
  return guarded([&] {
    require(channel, "channel");
    require(out, "out");
    *out = copy_out(tsteer::io::dump(tsteer::io::channel_spec_to_json(channel->spec)));
    return TSTEER_OK;
  });
}

void tsteer_channel_free(tsteer_channel* channel) { delete channel; }

tsteer_status tsteer_assemblage_from_json(const char* json, tsteer_assemblage** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = nullptr;
    *out = new tsteer_assemblage{tsteer::io::parse_assemblage(json)};
    return TSTEER_OK;
  });
}

tsteer_status tsteer_assemblage_from_counts_csv(const char* csv, tsteer_assemblage** out) {
  return guarded([&] {
    require(csv, "csv");
    require(out, "out");
    *out = nullptr;
    auto rec = tsteer::reconstruct(tsteer::io::parse_counts_csv(csv));
    *out = new tsteer_assemblage{std::move(rec.assemblage)};
    return TSTEER_OK;
  });
}

tsteer_status tsteer_assemblage_from_channel(const tsteer_channel* channel, const int* bases, size_t bases_count,
                                             tsteer_assemblage** out) {
  return guarded([&] {
    require(channel, "channel");
    require(bases, "bases");
    require(out, "out");
    *out = nullptr;
    *out = new tsteer_assemblage{tsteer::build_assemblage(channel->channel, std::vector<int>(bases, bases + bases_count))};
    return TSTEER_OK;
  });
}

tsteer_status tsteer_assemblage_to_json(const tsteer_assemblage* assemblage, char** out) {
  return guarded([&] {
    require(assemblage, "assemblage");
    require(out, "out");
    *out = copy_out(tsteer::io::dump(tsteer::io::assemblage_to_json(assemblage->assemblage)));
    return TSTEER_OK;
  });
}

void tsteer_assemblage_free(tsteer_assemblage* assemblage) { delete assemblage; }

tsteer_status tsteer_analyze(const tsteer_channel* channel, const tsteer_analysis_options* options,
                             char** report_json) {
  return guarded([&] {
    require(channel, "channel");
    require(report_json, "report_json");
    const auto o = defaults_or(options);
    auto rep = tsteer::analyze_channel(channel->channel, bases_of(o), analysis_of(o));
    Json j = tsteer::io::report_to_json(rep);
    Json ch = tsteer::io::channel_spec_to_json(channel->spec);
    Json out{{"schema_version", tsteer::io::kSchemaVersion}, {"channel", ch}};
    for (auto& [k, v] : j.items()) {
      if (k != "schema_version") out[k] = v;
    }
    *report_json = copy_out(tsteer::io::dump(with_headline(out, rep, o.mode)));
    return TSTEER_OK;
  });
}

tsteer_status tsteer_weight(const tsteer_assemblage* assemblage, double sdp_tol, int include_sdp, char** out_json) {
  return guarded([&] {
    require(assemblage, "assemblage");
    require(out_json, "out_json");
    const auto& a = assemblage->assemblage;
    double tol = sdp_tol > 0 ? sdp_tol : tsteer::kDefaultSdpTol;
    auto w = tsteer::steerable_weight(a, tol);
    Json j = tsteer::io::weight_to_json(w);
    j["N"] = a.n();
    j["bases"] = a.bases();
    j["consistency_residual"] = tsteer::check_consistency(a);
    Json rem = Json::array();
    for (double r : tsteer::offdiagonal_remainder(a)) rem.push_back(r);
    j["offdiagonal_remainder"] = rem;
    if (include_sdp) {
      j["sdp_problem"] = tsteer::io::sdp_problem_to_json(tsteer::build_weight_sdp(a).problem);
      j["sdp_solution"] = tsteer::io::sdp_solution_to_json(w.solution);
    }
    *out_json = copy_out(tsteer::io::dump(j));
    return TSTEER_OK;
  });
}

tsteer_status tsteer_simulate(const char* config_json, const char* channel_json, const tsteer_simulation_options* sim,
                              const tsteer_analysis_options* analysis, char** result_json, char** records_csv) {
  return guarded([&] {
    require(result_json, "result_json");
    if (!config_json && !channel_json) throw tsteer::DomainError("a session config or a channel spec is required");
    tsteer_simulation_options s;
    tsteer_default_simulation_options(&s);
    if (sim) s = *sim;
    tsteer::SessionConfig cfg;
    if (config_json) {
      cfg = tsteer::io::parse_session_config(config_json);
    } else {
      cfg.rounds = 100000;
    }
    if (channel_json) cfg.channel = tsteer::io::parse_channel_spec(channel_json);
    if (s.n == 2) cfg.protocol = tsteer::Protocol::bb84;
    else if (s.n == 3) cfg.protocol = tsteer::Protocol::b98;
    else if (s.n != 0) throw tsteer::DomainError("N must be 2 or 3");
    if (s.has_seed) cfg.seed = s.seed;
    if (s.has_rounds) cfg.rounds = s.rounds;
    if (s.keep_records >= 0) cfg.keep_records = s.keep_records != 0;
    if (s.threads) cfg.threads = s.threads;
    if (!records_csv && s.keep_records < 0) cfg.keep_records = false;
    cfg.check();

    const auto o = defaults_or(analysis);
    auto result = tsteer::run_session(cfg);
    auto rep = tsteer::analyze(result, cfg.channel, analysis_of(o));
    Json j = tsteer::io::session_result_to_json(result, rep);
    j["report"] = with_headline(j["report"], rep, o.mode);
    std::string csv = records_csv ? tsteer::io::records_to_csv(result) : std::string();
    *result_json = copy_out(tsteer::io::dump(j));
    if (records_csv) *records_csv = copy_out(csv);
    return TSTEER_OK;
  });
}

tsteer_status tsteer_sweep(const char* channel_json, const char* parameter, const double* grid, size_t grid_count,
                           const tsteer_analysis_options* options, unsigned threads, int format, char** out) {
  return guarded([&] {
    require(channel_json, "channel_json");
    require(parameter, "parameter");
    require(grid, "grid");
    require(out, "out");
    const auto o = defaults_or(options);
    // Validates the base document with line anchors before any substitution.
    tsteer::io::parse_channel_spec(channel_json);
    tsteer::SweepConfig cfg;
    cfg.channel = Json::parse(channel_json);
    cfg.parameter = parameter;
    cfg.grid.assign(grid, grid + grid_count);
    cfg.bases = bases_of(o);
    cfg.analysis = analysis_of(o);
    cfg.threads = threads;
    auto result = tsteer::run_sweep(cfg);
    if (format == TSTEER_FORMAT_CSV) {
      *out = copy_out(tsteer::sweep_to_csv(result));
    } else if (format == TSTEER_FORMAT_JSON) {
      *out = copy_out(tsteer::io::dump(tsteer::sweep_to_json(result)));
    } else {
      throw tsteer::DomainError("unknown output format");
    }
    return TSTEER_OK;
  });
}

tsteer_status tsteer_selftest(int fault, double sdp_tol, int format, char** out) {
  return guarded([&] {
    require(out, "out");
    tsteer::SelftestOptions opts;
    if (fault == TSTEER_FAULT_LOWER_BOUND_SIGN) opts.fault = tsteer::SelftestFault::lower_bound_sign;
    else if (fault != TSTEER_FAULT_NONE) throw tsteer::DomainError("unknown fault code");
    if (sdp_tol > 0) opts.sdp_tol = sdp_tol;
    auto report = tsteer::run_selftest(opts);
    if (format == TSTEER_FORMAT_JSON) {
      Json rows = Json::array(), checks = Json::array();
      for (const auto& r : report.thresholds) {
        rows.push_back(Json{{"N", r.n},
                            {"q_N", r.q_n},
                            {"S_threshold", r.s_threshold},
                            {"monogamy_threshold", r.monogamy_threshold}});
      }
      for (const auto& c : report.checks) {
        checks.push_back(Json{{"check", c.name}, {"N", c.n ? Json(c.n) : Json(nullptr)}, {"passed", c.passed},
                              {"detail", c.detail}});
      }
      Json j{{"schema_version", tsteer::io::kSchemaVersion},
             {"kind", "selftest"},
             {"thresholds", rows},
             {"checks", checks},
             {"passed", report.all_passed()}};
      *out = copy_out(tsteer::io::dump(j));
    } else {
      *out = copy_out(tsteer::format_selftest(report));
    }
    if (!report.all_passed()) return fail(TSTEER_ERR_SELFTEST, "selftest: at least one check failed");
    return TSTEER_OK;
  });
}

}  // extern "C"
