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

#include "tsteer/catalog.hpp"

#include <cmath>
#include <numbers>

#include "tsteer/error.hpp"
#include "tsteer/metrics.hpp"

namespace tsteer {

std::vector<CatalogEntry> channel_catalog() {
  std::vector<CatalogEntry> c;
  c.push_back({"identity", {spec::Identity{}}});
  c.push_back({"depolarizing_0.9", {spec::Depolarizing{0.9}}});
  c.push_back({"universal_cloner", {spec::UniversalCloner{}}});
  c.push_back({"phase_covariant_xz", {spec::PhaseCovariant{"xz"}}});
  c.push_back({"intercept_resend_xz", {spec::InterceptResend{{1, 3}}}});
  c.push_back({"intercept_resend_xyz", {spec::InterceptResend{{1, 2, 3}}}});
  c.push_back({"phase_damping_0.25_z", {spec::PhaseDamping{0.25, 3}}});
  c.push_back({"amplitude_damping_0.3", {spec::AmplitudeDamping{0.3}}});
  c.push_back({"unitary_y_pi4", {spec::Unitary{{0.0, 1.0, 0.0}, std::numbers::pi / 4}}});
  c.push_back({"pauli_0.05_0.02_0.08", {spec::Pauli{0.05, 0.02, 0.08}}});
  spec::Composite comp;
  comp.parts.push_back({spec::Depolarizing{0.95}});
  comp.parts.push_back({spec::PhaseDamping{0.1, 1}});
  c.push_back({"depolarizing_then_dephasing", {comp}});
  return c;
}

const CatalogEntry& catalog_entry(const std::string& name) {
  static const std::vector<CatalogEntry> catalog = channel_catalog();
  for (const auto& e : catalog) {
    if (e.name == name) return e;
  }
  throw DomainError("no catalog channel named \"" + name + "\"");
}

double normal(CounterRng& rng) {
  double u1 = 1.0 - rng.uniform();  // (0, 1]
  double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {
std::vector<double> dirichlet_ones(CounterRng& rng, std::size_t k) {
  std::vector<double> w(k);
  double total = 0.0;
  for (auto& x : w) {
    x = -std::log(1.0 - rng.uniform());
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}
}  // namespace

spec::Pauli random_pauli(CounterRng& rng) {
  auto w = dirichlet_ones(rng, 4);
  return {w[1], w[2], w[3]};
}

ComplexMatrix2 random_unitary(CounterRng& rng) {
  double q[4];
  double norm = 0.0;
  for (double& x : q) {
    x = normal(rng);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : q) x /= norm;
  // q0 I - i (q1 X + q2 Y + q3 Z)
  return ComplexMatrix2(Complex(q[0], -q[3]), Complex(-q[2], -q[1]), Complex(q[2], -q[1]), Complex(q[0], q[3]));
}

DensityMatrix random_state(CounterRng& rng) {
  double r[3];
  double norm = 0.0;
  for (double& x : r) {
    x = normal(rng);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  double radius = std::cbrt(rng.uniform());
  BlochVector b;
  for (int k = 0; k < 3; ++k) b.r[k] = norm > 0 ? radius * r[k] / norm : 0.0;
  return DensityMatrix::from_bloch(b);
}

Assemblage random_lhs_assemblage(CounterRng& rng, const std::vector<int>& bases) {
  StrategyTable table(static_cast<int>(bases.size()));
  auto w = dirichlet_ones(rng, static_cast<std::size_t>(table.columns()));
  std::vector<ComplexMatrix2> states;
  for (double p : w) states.push_back(random_state(rng).matrix() * p);
  // Renormalize so rounding in the weights cannot trip the trace check.
  double total = 0.0;
  for (const auto& s : states) total += s.trace().real();
  for (auto& s : states) s *= 1.0 / total;
  return lhs_assemblage(table, states, bases);
}

}  // namespace tsteer
