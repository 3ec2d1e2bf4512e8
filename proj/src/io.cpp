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

#include "tsteer/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>

#include "tsteer/error.hpp"

namespace tsteer::io {

namespace {

// Walks already-validated JSON text and records where each value starts.
class PositionScanner {
 public:
  PositionScanner(std::string_view text, std::vector<std::pair<std::string, std::pair<int, int>>>& out)
      : text_(text), out_(out) {}

  void run() {
    skip_ws();
    value("");
  }

 private:
  void value(const std::string& ptr) {
    skip_ws();
    out_.push_back({ptr, {line_, col_}});
    if (pos_ >= text_.size()) return;
    char c = text_[pos_];
    if (c == '{') {
      advance();
      skip_ws();
      if (peek() == '}') {
        advance();
        return;
      }
      while (pos_ < text_.size()) {
        skip_ws();
        std::string key = string_token();
        skip_ws();
        advance();  // ':'
        value(ptr + "/" + escape(key));
        skip_ws();
        char d = peek();
        advance();
        if (d == '}') return;
      }
    } else if (c == '[') {
      advance();
      skip_ws();
      if (peek() == ']') {
        advance();
        return;
      }
      for (int k = 0; pos_ < text_.size(); ++k) {
        value(ptr + "/" + std::to_string(k));
        skip_ws();
        char d = peek();
        advance();
        if (d == ']') return;
      }
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && std::string_view(",]} \t\r\n").find(text_[pos_]) == std::string_view::npos) advance();
    }
  }

  std::string string_token() {
    std::string s;
    advance();  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') {
        advance();
        s.push_back(text_[pos_] == 'n' ? '\n' : text_[pos_]);
      } else {
        s.push_back(text_[pos_]);
      }
      advance();
    }
    advance();
    return s;
  }

  static std::string escape(const std::string& key) {
    std::string r;
    for (char c : key) {
      if (c == '~') r += "~0";
      else if (c == '/') r += "~1";
      else r.push_back(c);
    }
    return r;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void advance() {
    if (pos_ >= text_.size()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::string_view(" \t\r\n").find(text_[pos_]) != std::string_view::npos) advance();
  }

  std::string_view text_;
  std::vector<std::pair<std::string, std::pair<int, int>>>& out_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

std::string line_col(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, std::size_t k) { return ptr + "/" + std::to_string(k); }

// Typed access to a Document subtree; every failure is anchored.
class Reader {
 public:
  Reader(const Document& doc, std::string ptr) : doc_(doc), ptr_(std::move(ptr)) {}

  const Json& node() const { return doc_.root().at(Json::json_pointer(ptr_)); }
  const std::string& pointer() const { return ptr_; }
  [[noreturn]] void fail(const std::string& what) const { doc_.fail(ptr_, what); }

  Reader at(const std::string& key) const { return Reader(doc_, child(ptr_, key)); }
  Reader at(std::size_t k) const { return Reader(doc_, child(ptr_, k)); }
  bool has(const std::string& key) const { return node().is_object() && node().contains(key); }

  Reader require(const std::string& key) const {
    if (!node().is_object()) fail("expected an object");
    if (!node().contains(key)) fail("missing required key \"" + key + "\"");
    return at(key);
  }

  void only_keys(std::initializer_list<const char*> allowed) const {
    if (!node().is_object()) fail("expected an object");
    for (const auto& [k, v] : node().items()) {
      bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; });
      if (!ok) at(k).fail("unknown key \"" + k + "\"");
    }
  }

  double number() const {
    if (!node().is_number()) fail("expected a number");
    double v = node().get<double>();
    if (!std::isfinite(v)) fail("number is not finite");
    return v;
  }
  std::int64_t integer() const {
    if (!node().is_number_integer()) fail("expected an integer");
    return node().get<std::int64_t>();
  }
  std::uint64_t unsigned_integer() const {
    if (!node().is_number_integer() || node().get<std::int64_t>() < 0) fail("expected a non-negative integer");
    return node().get<std::uint64_t>();
  }
  bool boolean() const {
    if (!node().is_boolean()) fail("expected true or false");
    return node().get<bool>();
  }
  std::string string() const {
    if (!node().is_string()) fail("expected a string");
    return node().get<std::string>();
  }
  std::size_t array_size() const {
    if (!node().is_array()) fail("expected an array");
    return node().size();
  }

  std::vector<int> int_list() const {
    std::vector<int> out;
    for (std::size_t k = 0; k < array_size(); ++k) out.push_back(static_cast<int>(at(k).integer()));
    return out;
  }

  ComplexMatrix2 matrix() const {
    if (array_size() != 2) fail("a matrix is a 2x2 array of [re, im] pairs");
    ComplexMatrix2 m;
    for (std::size_t r = 0; r < 2; ++r) {
      Reader row = at(r);
      if (row.array_size() != 2) row.fail("a matrix row has two entries");
      for (std::size_t c = 0; c < 2; ++c) {
        Reader e = row.at(c);
        if (e.node().is_number()) {
          m(static_cast<int>(r), static_cast<int>(c)) = e.number();
          continue;
        }
        if (e.array_size() != 2) e.fail("an entry is [re, im]");
        m(static_cast<int>(r), static_cast<int>(c)) = Complex(e.at(std::size_t{0}).number(), e.at(std::size_t{1}).number());
      }
    }
    return m;
  }

 private:
  const Document& doc_;
  std::string ptr_;
};

template <class F>
auto anchored(const Reader& r, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    r.fail(e.what());
  }
}

std::array<double, 3> parse_axis(const Reader& r) {
  if (r.node().is_string()) {
    std::string s = r.string();
    if (s == "x") return {1, 0, 0};
    if (s == "y") return {0, 1, 0};
    if (s == "z") return {0, 0, 1};
    r.fail("axis must be \"x\", \"y\", \"z\" or a 3-vector");
  }
  if (r.array_size() != 3) r.fail("axis must be \"x\", \"y\", \"z\" or a 3-vector");
  return {r.at(std::size_t{0}).number(), r.at(std::size_t{1}).number(), r.at(std::size_t{2}).number()};
}

int parse_basis_index(const Reader& r) {
  if (r.node().is_string()) {
    std::string s = r.string();
    if (s == "x") return 1;
    if (s == "y") return 2;
    if (s == "z") return 3;
    r.fail("basis must be 1, 2, 3 or \"x\", \"y\", \"z\"");
  }
  auto v = r.integer();
  if (v < 1 || v > 3) r.fail("basis must be 1, 2 or 3");
  return static_cast<int>(v);
}

double unit_interval(const Reader& r, const char* name) {
  double x = r.number();
  if (x < 0.0 || x > 1.0) r.fail(std::string(name) + " must lie in [0, 1]");
  return x;
}

ChannelSpec read_channel(const Reader& r) {
  std::string kind = r.require("kind").string();
  ChannelSpec out;
  if (kind == "identity") {
    r.only_keys({"kind"});
    out.kind = spec::Identity{};
  } else if (kind == "unitary") {
    r.only_keys({"kind", "axis", "angle"});
    spec::Unitary u;
    u.axis = parse_axis(r.require("axis"));
    u.angle = r.require("angle").number();
    out.kind = u;
  } else if (kind == "depolarizing") {
    r.only_keys({"kind", "v"});
    out.kind = spec::Depolarizing{unit_interval(r.require("v"), "v")};
  } else if (kind == "phase_damping") {
    r.only_keys({"kind", "p", "axis"});
    spec::PhaseDamping p;
    p.p = unit_interval(r.require("p"), "p");
    if (r.has("axis")) p.axis = parse_basis_index(r.at("axis"));
    out.kind = p;
  } else if (kind == "amplitude_damping") {
    r.only_keys({"kind", "g"});
    out.kind = spec::AmplitudeDamping{unit_interval(r.require("g"), "g")};
  } else if (kind == "pauli") {
    r.only_keys({"kind", "px", "py", "pz"});
    spec::Pauli p;
    if (r.has("px")) p.px = unit_interval(r.at("px"), "px");
    if (r.has("py")) p.py = unit_interval(r.at("py"), "py");
    if (r.has("pz")) p.pz = unit_interval(r.at("pz"), "pz");
    out.kind = p;
  } else if (kind == "intercept_resend") {
    r.only_keys({"kind", "bases"});
    spec::InterceptResend ir;
    Reader b = r.require("bases");
    for (std::size_t k = 0; k < b.array_size(); ++k) ir.bases.push_back(parse_basis_index(b.at(k)));
    out.kind = ir;
  } else if (kind == "universal_cloner") {
    r.only_keys({"kind"});
    out.kind = spec::UniversalCloner{};
  } else if (kind == "phase_covariant") {
    r.only_keys({"kind", "plane"});
    spec::PhaseCovariant pc;
    if (r.has("plane")) pc.plane = r.at("plane").string();
    out.kind = pc;
  } else if (kind == "composite") {
    r.only_keys({"kind", "parts"});
    spec::Composite c;
    Reader parts = r.require("parts");
    if (parts.array_size() == 0) parts.fail("composite needs at least one part");
    for (std::size_t k = 0; k < parts.array_size(); ++k) c.parts.push_back(read_channel(parts.at(k)));
    out.kind = c;
  } else if (kind == "kraus") {
    r.only_keys({"kind", "operators", "labels"});
    spec::Kraus kr;
    Reader ops = r.require("operators");
    if (ops.array_size() == 0) ops.fail("at least one Kraus operator is required");
    for (std::size_t k = 0; k < ops.array_size(); ++k) kr.operators.push_back(ops.at(k).matrix());
    if (r.has("labels")) {
      Reader labels = r.at("labels");
      if (labels.array_size() != kr.operators.size()) labels.fail("one label per operator");
      for (std::size_t k = 0; k < labels.array_size(); ++k) kr.labels.push_back(labels.at(k).string());
    }
    out.kind = kr;
  } else {
    r.at("kind").fail("unknown channel kind \"" + kind + "\"");
  }
  // Construct once so parameter-range errors carry the anchor of this object.
  anchored(r, [&] { return make_channel(out); });
  return out;
}

std::string basis_name(int i) { return i == 1 ? "x" : i == 2 ? "y" : "z"; }

Json int_array(const std::vector<int>& v) {
  Json a = Json::array();
  for (int x : v) a.push_back(x);
  return a;
}

Json thresholds_json(int n) {
  return Json{{"q_N", individual_attack_threshold(n)},
              {"S_threshold_individual", steering_threshold(n, individual_attack_threshold(n))},
              {"S_threshold_unconditional_default", steering_threshold(n, kDefaultUnconditionalQ)},
              {"unconditional_q_default", kDefaultUnconditionalQ},
              {"monogamy_threshold", monogamy_threshold(n)}};
}

Json estimate_json(const Estimate& e) { return Json{{"value", e.value}, {"std_error", e.std_error}}; }

Json qber_json(const QberEstimate& q) {
  return Json{{"value", q.value}, {"std_error", q.std_error}, {"errors", q.errors}, {"n", q.n}};
}

}  // namespace

Document Document::parse(std::string_view text) {
  Document doc;
  try {
    doc.root_ = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::string msg = e.what();
    auto p = msg.find("syntax error");
    throw ParseError(line_col(text, e.byte > 0 ? e.byte - 1 : 0), p == std::string::npos ? msg : msg.substr(p));
  }
  PositionScanner(text, doc.positions_).run();
  return doc;
}

std::string Document::anchor(const std::string& pointer) const {
  std::string p = pointer;
  while (true) {
    for (const auto& [ptr, lc] : positions_) {
      if (ptr == p) return "line " + std::to_string(lc.first) + ", column " + std::to_string(lc.second);
    }
    if (p.empty()) return "line 1, column 1";
    p = p.substr(0, p.rfind('/'));
  }
}

void Document::fail(const std::string& pointer, const std::string& what) const {
  throw ParseError(anchor(pointer), (pointer.empty() ? std::string("/") : pointer) + ": " + what);
}

Json matrix_to_json(const ComplexMatrix2& m) {
  Json rows = Json::array();
  for (int r = 0; r < 2; ++r) {
    Json row = Json::array();
    for (int c = 0; c < 2; ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(row);
  }
  return rows;
}

Json bloch_to_json(const BlochVector& b) { return Json::array({b.r[0], b.r[1], b.r[2]}); }

ChannelSpec channel_spec_from_json(const Document& doc, const std::string& pointer) {
  return read_channel(Reader(doc, pointer));
}

ChannelSpec parse_channel_spec(std::string_view text) { return channel_spec_from_json(Document::parse(text)); }

Json channel_spec_to_json(const ChannelSpec& spec) {
  struct Visitor {
    Json operator()(const spec::Identity&) const { return Json{{"kind", "identity"}}; }
    Json operator()(const spec::Unitary& u) const {
      return Json{{"kind", "unitary"}, {"axis", Json::array({u.axis[0], u.axis[1], u.axis[2]})}, {"angle", u.angle}};
    }
    Json operator()(const spec::Depolarizing& d) const { return Json{{"kind", "depolarizing"}, {"v", d.v}}; }
    Json operator()(const spec::PhaseDamping& p) const {
      return Json{{"kind", "phase_damping"}, {"p", p.p}, {"axis", basis_name(p.axis)}};
    }
    Json operator()(const spec::AmplitudeDamping& a) const { return Json{{"kind", "amplitude_damping"}, {"g", a.g}}; }
    Json operator()(const spec::Pauli& p) const {
      return Json{{"kind", "pauli"}, {"px", p.px}, {"py", p.py}, {"pz", p.pz}};
    }
    Json operator()(const spec::InterceptResend& ir) const {
      return Json{{"kind", "intercept_resend"}, {"bases", int_array(ir.bases)}};
    }
    Json operator()(const spec::UniversalCloner&) const { return Json{{"kind", "universal_cloner"}}; }
    Json operator()(const spec::PhaseCovariant& pc) const {
      return Json{{"kind", "phase_covariant"}, {"plane", pc.plane}};
    }
    Json operator()(const spec::Composite& c) const {
      Json parts = Json::array();
      for (const auto& p : c.parts) parts.push_back(channel_spec_to_json(p));
      return Json{{"kind", "composite"}, {"parts", parts}};
    }
    Json operator()(const spec::Kraus& k) const {
      Json ops = Json::array();
      for (const auto& m : k.operators) ops.push_back(matrix_to_json(m));
      Json j{{"kind", "kraus"}, {"operators", ops}};
      if (!k.labels.empty()) j["labels"] = k.labels;
      return j;
    }
  };
  return std::visit(Visitor{}, spec.kind);
}

std::vector<std::string> sweepable_parameters(const Json& spec_json) {
  if (!spec_json.is_object() || !spec_json.contains("kind") || !spec_json["kind"].is_string()) return {};
  std::string kind = spec_json["kind"].get<std::string>();
  if (kind == "unitary") return {"angle"};
  if (kind == "depolarizing") return {"v"};
  if (kind == "phase_damping") return {"p"};
  if (kind == "amplitude_damping") return {"g"};
  if (kind == "pauli") return {"px", "py", "pz"};
  return {};
}

Assemblage parse_assemblage(std::string_view text) {
  Document doc = Document::parse(text);
  Reader r(doc, "");
  r.only_keys({"schema_version", "N", "bases", "members"});
  auto n = r.require("N").integer();
  if (n != 2 && n != 3) r.at("N").fail("N must be 2 or 3");
  std::vector<int> bases;
  if (r.has("bases")) {
    Reader b = r.at("bases");
    for (std::size_t k = 0; k < b.array_size(); ++k) bases.push_back(parse_basis_index(b.at(k)));
    anchored(b, [&] {
      check_bases(bases);
      return 0;
    });
    if (static_cast<std::int64_t>(bases.size()) != n) b.fail("N bases are required");
  }
  Reader members = r.require("members");
  std::vector<std::tuple<int, int, ComplexMatrix2, std::string>> raw;
  std::set<int> seen_bases;
  for (std::size_t k = 0; k < members.array_size(); ++k) {
    Reader m = members.at(k);
    m.only_keys({"i", "a", "matrix"});
    int i = parse_basis_index(m.require("i"));
    auto a = m.require("a").integer();
    if (a != 1 && a != -1) m.at("a").fail("outcome must be +1 or -1");
    raw.emplace_back(i, static_cast<int>(a), m.require("matrix").matrix(), m.pointer());
    seen_bases.insert(i);
  }
  if (bases.empty()) {
    bases.assign(seen_bases.begin(), seen_bases.end());
    if (static_cast<std::int64_t>(bases.size()) != n) members.fail("members must cover exactly N bases");
  }
  std::vector<ComplexMatrix2> ordered(2 * bases.size());
  std::vector<bool> filled(ordered.size(), false);
  for (const auto& [i, a, mat, ptr] : raw) {
    auto it = std::find(bases.begin(), bases.end(), i);
    if (it == bases.end()) doc.fail(ptr, "basis " + std::to_string(i) + " is not among the assemblage bases");
    std::size_t slot = 2 * static_cast<std::size_t>(it - bases.begin()) + (a == 1 ? 0 : 1);
    if (filled[slot]) doc.fail(ptr, "duplicate member");
    ordered[slot] = mat;
    filled[slot] = true;
  }
  if (std::find(filled.begin(), filled.end(), false) != filled.end()) members.fail("every (i, a) member is required");
  return anchored(r, [&] { return Assemblage(bases, ordered); });
}

Json assemblage_to_json(const Assemblage& assemblage) {
  Json members = Json::array();
  for (int pos = 0; pos < assemblage.n(); ++pos) {
    for (int a : {1, -1}) {
      members.push_back(
          Json{{"i", assemblage.bases()[pos]}, {"a", a}, {"matrix", matrix_to_json(assemblage.member_at(pos, a))}});
    }
  }
  return Json{{"schema_version", kSchemaVersion},
              {"N", assemblage.n()},
              {"bases", int_array(assemblage.bases())},
              {"members", members}};
}

std::string counts_to_csv(const TomographyCounts& counts) {
  std::ostringstream os;
  os.precision(17);
  os << "i,a,j,b,count\n";
  for (int i : counts.bases()) {
    for (int a : {1, -1}) {
      for (int j = 1; j <= 3; ++j) {
        for (int b : {1, -1}) os << i << ',' << a << ',' << j << ',' << b << ',' << counts.get(i, a, j, b) << '\n';
      }
    }
  }
  return os.str();
}

TomographyCounts parse_counts_csv(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  std::vector<std::array<double, 5>> rows;
  std::set<int> bases;
  auto where = [&](int col) { return "line " + std::to_string(lineno) + ", column " + std::to_string(col); };
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::vector<int> starts;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      starts.push_back(static_cast<int>(start) + 1);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!header_seen) {
      if (line != "i,a,j,b,count") throw ParseError(where(1), "expected header \"i,a,j,b,count\"");
      header_seen = true;
      continue;
    }
    if (cells.size() != 5) throw ParseError(where(1), "expected 5 columns, found " + std::to_string(cells.size()));
    std::array<double, 5> row{};
    for (int c = 0; c < 5; ++c) {
      try {
        std::size_t used = 0;
        row[c] = std::stod(cells[c], &used);
        if (used != cells[c].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ParseError(where(starts[c]), "not a number: \"" + cells[c] + "\"");
      }
    }
    auto integral = [](double v) { return std::floor(v) == v; };
    if (!integral(row[0]) || row[0] < 1 || row[0] > 3) throw ParseError(where(starts[0]), "i must be 1, 2 or 3");
    if (row[1] != 1 && row[1] != -1) throw ParseError(where(starts[1]), "a must be +1 or -1");
    if (!integral(row[2]) || row[2] < 1 || row[2] > 3) throw ParseError(where(starts[2]), "j must be 1, 2 or 3");
    if (row[3] != 1 && row[3] != -1) throw ParseError(where(starts[3]), "b must be +1 or -1");
    if (!(row[4] >= 0) || !std::isfinite(row[4])) throw ParseError(where(starts[4]), "count must be non-negative");
    rows.push_back(row);
    bases.insert(static_cast<int>(row[0]));
  }
  if (!header_seen) throw ParseError("line 1, column 1", "empty counts file");
  TomographyCounts counts(std::vector<int>(bases.begin(), bases.end()));
  for (const auto& r : rows) {
    counts.add(static_cast<int>(r[0]), static_cast<int>(r[1]), static_cast<int>(r[2]), static_cast<int>(r[3]), r[4]);
  }
  return counts;
}

Json fidelity_table_to_json(const FidelityTable& table) {
  Json rows = Json::array();
  for (int i : table.bases()) {
    for (int a : {1, -1}) rows.push_back(Json{{"i", i}, {"a", a}, {"F", table.at(i, a)}});
  }
  return rows;
}

Json summary_to_json(const SteeringSummary& s) {
  Json j{{"schema_version", kSchemaVersion},
         {"N", s.n},
         {"S", s.s},
         {"S_branch_resolved", s.branch_resolved_s ? Json(*s.branch_resolved_s) : Json(nullptr)},
         {"qber", s.qber},
         {"F_mean", s.f_mean},
         {"F_variance", s.variance},
         {"m", s.m},
         {"M", s.big_m},
         {"qber_lower_bound", s.qber_lower},
         {"qber_upper_bound", s.qber_upper},
         {"variance_identity_residual", s.variance_residual},
         {"bhatia_davis_slack", s.bhatia_davis_slack},
         {"thresholds", thresholds_json(s.n)}};
  return j;
}

Json verdict_to_json(const SecurityVerdict& v) {
  return Json{{"schema_version", kSchemaVersion},
              {"protocol", to_string(v.protocol)},
              {"mode", to_string(v.mode)},
              {"q_N", v.q_threshold},
              {"S_threshold", v.s_threshold},
              {"monogamy_threshold", v.monogamy_threshold},
              {"secure", v.secure},
              {"monogamous", v.monogamous}};
}

Json weight_to_json(const WeightResult& w) {
  Json witness = Json::array();
  for (const auto& m : w.lhs_witness) witness.push_back(matrix_to_json(m));
  const auto& s = w.solution;
  return Json{{"schema_version", kSchemaVersion},
              {"w_t", w.w_t},
              {"raw_w_t", w.raw_w_t},
              {"zero_threshold", kWeightZeroThreshold},
              {"status", sdp::to_string(s.status)},
              {"iterations", s.iterations},
              {"primal_value", s.primal_value},
              {"dual_value", s.dual_value},
              {"gap", s.gap},
              {"complementarity", s.complementarity},
              {"primal_residual", s.primal_residual},
              {"dual_residual", s.dual_residual},
              {"witness_min_eigenvalue", w.witness_min_eigenvalue},
              {"lhs_witness", witness}};
}

Json report_to_json(const SteeringReport& r) {
  Json j{{"schema_version", kSchemaVersion}, {"kind", "steering_report"}, {"N", r.n}, {"bases", int_array(r.bases)}};
  j["protocol"] = to_string(protocol_for(r.n));
  j["fidelity_table"] = fidelity_table_to_json(r.table);
  j["summary"] = summary_to_json(r.summary);
  j["branch_resolved_diagnostic_only"] = r.branch_resolved_diagnostic;
  if (r.s_estimate || r.branch_resolved_estimate || r.qber_hat) {
    Json s = Json::object();
    if (r.s_estimate) s["S"] = estimate_json(*r.s_estimate);
    if (r.branch_resolved_estimate) s["S_branch_resolved"] = estimate_json(*r.branch_resolved_estimate);
    if (r.qber_hat) s["qber_sifted"] = qber_json(*r.qber_hat);
    j["sampling"] = s;
  }
  j["weight"] = weight_to_json(r.weight);
  if (!r.tomography_projected.empty()) {
    Json p = Json::array();
    for (bool b : r.tomography_projected) p.push_back(b);
    j["tomography_projected"] = p;
  }
  j["S_for_verdict"] = r.s_for_verdict;
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(verdict_to_json(v));
  j["verdicts"] = verdicts;
  if (r.empirical_vs_analytic) {
    const auto& e = *r.empirical_vs_analytic;
    j["empirical_vs_analytic"] = Json{{"analytic", summary_to_json(e.analytic)},
                                      {"analytic_w_t", e.analytic_w_t},
                                      {"delta_qber", e.delta_qber},
                                      {"delta_S", e.delta_s},
                                      {"delta_S_branch_resolved", e.delta_branch_resolved_s},
                                      {"delta_w_t", e.delta_w_t}};
  }
  return j;
}

SessionConfig parse_session_config(std::string_view text) {
  Document doc = Document::parse(text);
  Reader r(doc, "");
  r.only_keys({"schema_version", "protocol", "channel", "rounds", "seed", "tomography_fraction", "basis_pair",
               "bob_basis", "keep_records", "threads"});
  SessionConfig c;
  if (r.has("protocol")) {
    Reader p = r.at("protocol");
    c.protocol = anchored(p, [&] { return parse_protocol(p.string()); });
  }
  c.channel = read_channel(r.require("channel"));
  c.rounds = r.require("rounds").unsigned_integer();
  if (r.has("seed")) c.seed = r.at("seed").unsigned_integer();
  if (r.has("tomography_fraction")) c.tomography_fraction = r.at("tomography_fraction").number();
  if (r.has("basis_pair")) {
    Reader b = r.at("basis_pair");
    c.basis_pair.clear();
    for (std::size_t k = 0; k < b.array_size(); ++k) c.basis_pair.push_back(parse_basis_index(b.at(k)));
  }
  if (r.has("bob_basis")) {
    Reader b = r.at("bob_basis");
    c.bob_basis = anchored(b, [&] { return parse_bob_basis_mode(b.string()); });
  }
  if (r.has("keep_records")) c.keep_records = r.at("keep_records").boolean();
  if (r.has("threads")) c.threads = static_cast<unsigned>(r.at("threads").unsigned_integer());
  anchored(r, [&] {
    c.check();
    return 0;
  });
  return c;
}

Json session_config_to_json(const SessionConfig& c) {
  return Json{{"schema_version", kSchemaVersion},
              {"protocol", to_string(c.protocol)},
              {"channel", channel_spec_to_json(c.channel)},
              {"rounds", c.rounds},
              {"seed", c.seed},
              {"tomography_fraction", c.tomography_fraction},
              {"basis_pair", int_array(c.basis_pair)},
              {"bob_basis", to_string(c.bob_basis)},
              {"keep_records", c.keep_records},
              {"threads", c.threads}};
}

Json session_result_to_json(const SessionResult& result, const SteeringReport& report) {
  Json j{{"schema_version", kSchemaVersion}, {"kind", "session_result"}};
  Json cfg = session_config_to_json(result.config);
  cfg.erase("schema_version");
  cfg.erase("threads");  // does not affect results
  j["config"] = cfg;
  j["bases"] = int_array(result.bases);
  j["sifted_length"] = result.sifted_length;
  j["qber"] = qber_json(result.qber);
  Json key = Json::array();
  for (std::size_t k = 0; k < result.key.size(); ++k) {
    const auto& t = result.key[k];
    Json branches = Json::array();
    for (std::size_t b = 0; b < t.branch_n.size(); ++b) {
      branches.push_back(Json{{"label", result.branch_labels[k][b]}, {"n", t.branch_n[b]}, {"agree", t.branch_agree[b]}});
    }
    key.push_back(Json{{"i", t.i}, {"a", t.a}, {"n", t.n}, {"agree", t.agree}, {"branches", branches}});
  }
  j["key_tallies"] = key;
  j["branches_exposed"] = result.branches_exposed;
  Json counts = Json::array();
  for (int i : result.counts.bases()) {
    for (int a : {1, -1}) {
      for (int jb = 1; jb <= 3; ++jb) {
        for (int b : {1, -1}) {
          counts.push_back(Json{{"i", i}, {"a", a}, {"j", jb}, {"b", b}, {"count", result.counts.get(i, a, jb, b)}});
        }
      }
    }
  }
  j["tomography_counts"] = counts;
  Json rep = report_to_json(report);
  rep.erase("schema_version");
  j["report"] = rep;
  return j;
}

namespace {

// RFC 4180 quoting; branch labels such as "eve:basis=1,a=-1" contain commas.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string records_to_csv(const SessionResult& result) {
  std::ostringstream os;
  os << "round,i,a,j,b,purpose,branch\n";
  const auto labels = MubLabel::for_bases(result.bases);
  for (const auto& rec : result.records) {
    std::size_t prep = 0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      if (labels[k].basis() == rec.i && labels[k].outcome() == rec.a) prep = k;
    }
    os << rec.round << ',' << rec.i << ',' << rec.a << ',' << rec.j << ',' << rec.b << ',' << to_string(rec.purpose)
       << ',' << csv_field(result.branch_labels[prep][static_cast<std::size_t>(rec.branch)]) << '\n';
  }
  return os.str();
}

Json sdp_problem_to_json(const sdp::Problem& p) {
  Json blocks = Json::array();
  for (const auto& b : p.blocks) {
    Json terms = Json::array();
    for (const auto& t : b.terms) terms.push_back(Json{{"var", t.var}, {"coefficient", matrix_to_json(t.coefficient)}});
    blocks.push_back(Json{{"name", b.name}, {"constant", matrix_to_json(b.constant)}, {"terms", terms}});
  }
  return Json{{"schema_version", kSchemaVersion},
              {"kind", "sdp_problem"},
              {"form", "maximize objective.y subject to constant - sum_j y_j coefficient_j >= 0 per block"},
              {"num_vars", p.num_vars},
              {"objective", p.objective},
              {"blocks", blocks}};
}

Json sdp_solution_to_json(const sdp::Solution& s) {
  Json slack = Json::array(), dual = Json::array();
  for (const auto& m : s.slack) slack.push_back(matrix_to_json(m));
  for (const auto& m : s.dual) dual.push_back(matrix_to_json(m));
  return Json{{"schema_version", kSchemaVersion},
              {"kind", "sdp_solution"},
              {"status", sdp::to_string(s.status)},
              {"iterations", s.iterations},
              {"primal_value", s.primal_value},
              {"dual_value", s.dual_value},
              {"gap", s.gap},
              {"complementarity", s.complementarity},
              {"primal_residual", s.primal_residual},
              {"dual_residual", s.dual_residual},
              {"y", s.y},
              {"slack", slack},
              {"dual", dual}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace tsteer::io
