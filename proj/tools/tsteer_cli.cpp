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

// Command-line front end. Talks to the library only through tsteer.h.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tsteer/tsteer.h"

namespace {

constexpr int kExitInput = TSTEER_ERR_INPUT;

struct CliError {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitInput, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size()))) {
    throw CliError{kExitInput, "cannot write " + path};
  }
}

// Owns a string returned by the library.
struct Owned {
  char* p = nullptr;
  ~Owned() { tsteer_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

void check(tsteer_status s, const std::string& context) {
  if (s != TSTEER_OK) throw CliError{s, context + tsteer_last_error()};
}

std::vector<int> parse_bases(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "x" || item == "1") out.push_back(1);
    else if (item == "y" || item == "2") out.push_back(2);
    else if (item == "z" || item == "3") out.push_back(3);
    else throw CliError{kExitInput, "--bases: unknown basis \"" + item + "\""};
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw CliError{kExitInput, what + ": not a number: \"" + s + "\""};
}

std::vector<double> parse_grid(const std::string& grid, const std::string& values) {
  std::vector<double> out;
  if (!values.empty()) {
    std::stringstream ss(values);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item, "--values"));
    return out;
  }
  std::vector<std::string> parts;
  std::stringstream ss(grid);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw CliError{kExitInput, "--grid expects START:STOP:COUNT"};
  double start = parse_double(parts[0], "--grid"), stop = parse_double(parts[1], "--grid");
  double count = parse_double(parts[2], "--grid");
  if (count < 1 || count != static_cast<int>(count)) throw CliError{kExitInput, "--grid COUNT must be a positive integer"};
  int n = static_cast<int>(count);
  for (int k = 0; k < n; ++k) out.push_back(n == 1 ? start : start + (stop - start) * k / (n - 1));
  return out;
}

std::optional<double> env_double(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return parse_double(v, name);
}

struct Common {
  int n = 2;
  std::string bases;
  std::string mode = "individual";
  std::optional<double> q_override;
  double sdp_tol = 0.0;
  std::string out;
  std::string format;
  std::vector<int> bases_storage;

  tsteer_analysis_options analysis() {
    tsteer_analysis_options o;
    tsteer_default_analysis_options(&o);
    o.n = n;
    if (!bases.empty()) {
      bases_storage = parse_bases(bases);
      o.bases = bases_storage.data();
      o.bases_count = bases_storage.size();
    }
    o.mode = mode == "unconditional" ? TSTEER_MODE_UNCONDITIONAL : TSTEER_MODE_INDIVIDUAL;
    if (q_override) {
      o.has_q_override = 1;
      o.q_override = *q_override;
    }
    if (sdp_tol > 0) o.sdp_tol = sdp_tol;
    return o;
  }
};

void add_analysis_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--n", c.n, "Number of measurement bases (2: BB84, 3: six-state)")->check(CLI::IsMember({2, 3}));
  cmd->add_option("--bases", c.bases, "Explicit bases, e.g. x,z or 1,2,3 (overrides the default for --n)");
  cmd->add_option("--mode", c.mode, "Headline security verdict")->check(CLI::IsMember({"individual", "unconditional"}));
  cmd->add_option("--q-override", c.q_override, "QBER threshold for unconditional mode (default 0.1)");
  cmd->add_option("--sdp-tol", c.sdp_tol, "SDP stopping tolerance (default 1e-8, env TSTEER_SDP_TOL)")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tsteer: temporal steering analysis of qubit QKD channels"};
  app.set_version_flag("--version", std::string(tsteer_version()));
  app.require_subcommand(1);
  app.footer(
      "Environment:\n"
      "  TSTEER_SDP_TOL   default for --sdp-tol\n"
      "  TSTEER_THREADS   default worker count for simulate and sweep\n"
      "Exit codes: 0 success, 2 input error, 3 numerical failure (SDP), 4 selftest failure.");

  Common c;
  std::string channel_path, config_path, assemblage_path, counts_path, records_path, param, grid, values, fault = "none";
  std::optional<std::uint64_t> seed, rounds;
  unsigned threads = 0;
  bool dump_sdp = false;

  auto* analyze = app.add_subcommand("analyze", "Exact steering report for a channel spec");
  analyze->add_option("--channel", channel_path, "Channel spec JSON file")->required();
  add_analysis_flags(analyze, c);
  analyze->add_option("--out", c.out, "Output file (default stdout)");
  analyze->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json"}));

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo QKD session with sifting and tomography");
  simulate->add_option("--config", config_path, "SessionConfig JSON file");
  simulate->add_option("--channel", channel_path, "Channel spec JSON file (replaces the config's channel)");
  add_analysis_flags(simulate, c);
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--rounds", rounds, "Protocol rounds (default 100000 without --config)");
  simulate->add_option("--threads", threads, "Worker threads (0: all cores)");
  simulate->add_option("--records", records_path, "Also write the per-round CSV here");
  simulate->add_option("--out", c.out, "Output file (default stdout)");
  simulate->add_option("--format", c.format, "json: SessionResult; csv: per-round records")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* sweep = app.add_subcommand("sweep", "Evaluate a channel over a one-parameter grid");
  sweep->add_option("--channel", channel_path, "Channel spec JSON file")->required();
  sweep->add_option("--param", param, "Numeric field to vary, e.g. v or parts/0/v")->required();
  auto* grid_opt = sweep->add_option("--grid", grid, "START:STOP:COUNT, endpoints included");
  auto* values_opt = sweep->add_option("--values", values, "Comma-separated parameter values");
  grid_opt->excludes(values_opt);
  add_analysis_flags(sweep, c);
  sweep->add_option("--threads", threads, "Worker threads (0: all cores)");
  sweep->add_option("--out", c.out, "Output file (default stdout)");
  sweep->add_option("--format", c.format, "Output format (default csv)")->check(CLI::IsMember({"json", "csv"}));

  auto* weight = app.add_subcommand("weight", "Steerable weight of an assemblage");
  auto* wa = weight->add_option("--assemblage", assemblage_path, "Assemblage JSON file");
  auto* wc = weight->add_option("--counts", counts_path, "Tomography counts CSV (i,a,j,b,count)");
  auto* wch = weight->add_option("--channel", channel_path, "Channel spec JSON file");
  wa->excludes(wc)->excludes(wch);
  wc->excludes(wch);
  weight->add_option("--n", c.n, "Bases for --channel")->check(CLI::IsMember({2, 3}));
  weight->add_option("--bases", c.bases, "Explicit bases for --channel");
  weight->add_option("--sdp-tol", c.sdp_tol, "SDP stopping tolerance (default 1e-8, env TSTEER_SDP_TOL)")
      ->check(CLI::PositiveNumber);
  weight->add_flag("--dump-sdp", dump_sdp, "Embed the SDP problem and solution");
  weight->add_option("--out", c.out, "Output file (default stdout)");
  weight->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json"}));

  auto* selftest = app.add_subcommand("selftest", "Run the invariant catalog");
  selftest->add_option("--fault", fault, "Inject a fault to check the harness itself")
      ->check(CLI::IsMember({"none", "lower-bound-sign"}));
  selftest->add_option("--sdp-tol", c.sdp_tol, "SDP stopping tolerance")->check(CLI::PositiveNumber);
  selftest->add_option("--out", c.out, "Output file (default stdout)");
  selftest->add_option("--format", c.format, "text table (default) or json")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (c.sdp_tol <= 0) {
      if (auto t = env_double("TSTEER_SDP_TOL")) {
        if (*t <= 0) throw CliError{kExitInput, "TSTEER_SDP_TOL must be positive"};
        c.sdp_tol = *t;
      }
    }
    if (threads == 0) {
      if (auto t = env_double("TSTEER_THREADS")) threads = static_cast<unsigned>(*t);
    }

    if (*analyze) {
      std::string text = read_file(channel_path);
      tsteer_channel* raw = nullptr;
      check(tsteer_channel_from_json(text.c_str(), &raw), channel_path + ": ");
      std::unique_ptr<tsteer_channel, decltype(&tsteer_channel_free)> ch(raw, tsteer_channel_free);
      auto o = c.analysis();
      Owned report;
      check(tsteer_analyze(ch.get(), &o, &report.p), "");
      write_output(c.out, report.str());
    } else if (*simulate) {
      if (config_path.empty() && channel_path.empty()) throw CliError{kExitInput, "simulate needs --config or --channel"};
      std::string cfg = config_path.empty() ? "" : read_file(config_path);
      std::string chn = channel_path.empty() ? "" : read_file(channel_path);
      tsteer_simulation_options s;
      tsteer_default_simulation_options(&s);
      if (simulate->count("--n") || !c.bases.empty()) s.n = c.bases.empty() ? c.n : 0;
      if (seed) {
        s.has_seed = 1;
        s.seed = *seed;
      }
      if (rounds) {
        s.has_rounds = 1;
        s.rounds = *rounds;
      }
      s.threads = threads;
      bool want_records = !records_path.empty() || c.format == "csv";
      if (want_records) s.keep_records = 1;
      auto o = c.analysis();
      Owned result, records;
      std::string where = !config_path.empty() ? config_path + ": " : channel_path + ": ";
      check(tsteer_simulate(cfg.empty() ? nullptr : cfg.c_str(), chn.empty() ? nullptr : chn.c_str(), &s, &o,
                            &result.p, want_records ? &records.p : nullptr),
            where);
      if (!records_path.empty()) write_output(records_path, records.str());
      write_output(c.out, c.format == "csv" ? records.str() : result.str());
    } else if (*sweep) {
      if (grid.empty() && values.empty()) throw CliError{kExitInput, "sweep needs --grid or --values"};
      std::string text = read_file(channel_path);
      auto g = parse_grid(grid, values);
      auto o = c.analysis();
      Owned out;
      int format = c.format == "json" ? TSTEER_FORMAT_JSON : TSTEER_FORMAT_CSV;
      check(tsteer_sweep(text.c_str(), param.c_str(), g.data(), g.size(), &o, threads, format, &out.p),
            channel_path + ": ");
      write_output(c.out, out.str());
    } else if (*weight) {
      tsteer_assemblage* raw = nullptr;
      if (!assemblage_path.empty()) {
        std::string text = read_file(assemblage_path);
        check(tsteer_assemblage_from_json(text.c_str(), &raw), assemblage_path + ": ");
      } else if (!counts_path.empty()) {
        std::string text = read_file(counts_path);
        check(tsteer_assemblage_from_counts_csv(text.c_str(), &raw), counts_path + ": ");
      } else if (!channel_path.empty()) {
        std::string text = read_file(channel_path);
        tsteer_channel* ch = nullptr;
        check(tsteer_channel_from_json(text.c_str(), &ch), channel_path + ": ");
        std::unique_ptr<tsteer_channel, decltype(&tsteer_channel_free)> owned(ch, tsteer_channel_free);
        auto o = c.analysis();
        std::vector<int> b = o.bases ? std::vector<int>(o.bases, o.bases + o.bases_count)
                                     : (c.n == 3 ? std::vector<int>{1, 2, 3} : std::vector<int>{1, 3});
        check(tsteer_assemblage_from_channel(ch, b.data(), b.size(), &raw), "");
      } else {
        throw CliError{kExitInput, "weight needs --assemblage, --counts or --channel"};
      }
      std::unique_ptr<tsteer_assemblage, decltype(&tsteer_assemblage_free)> a(raw, tsteer_assemblage_free);
      Owned out;
      check(tsteer_weight(a.get(), c.sdp_tol, dump_sdp ? 1 : 0, &out.p), "");
      write_output(c.out, out.str());
    } else if (*selftest) {
      Owned out;
      int f = fault == "lower-bound-sign" ? TSTEER_FAULT_LOWER_BOUND_SIGN : TSTEER_FAULT_NONE;
      tsteer_status s = tsteer_selftest(f, c.sdp_tol, c.format == "json" ? TSTEER_FORMAT_JSON : TSTEER_FORMAT_TEXT, &out.p);
      if (out.p) write_output(c.out, out.str());
      if (s != TSTEER_OK) throw CliError{s, tsteer_last_error()};
    }
  } catch (const CliError& e) {
    std::fflush(stdout);
    std::fprintf(stderr, "tsteer: error: %s\n", e.message.c_str());
    return e.code;
  }
  return 0;
}
