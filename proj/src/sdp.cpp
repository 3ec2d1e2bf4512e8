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

#include "tsteer/sdp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "tsteer/error.hpp"

namespace tsteer::sdp {

namespace {

using Matrix = ComplexMatrix2;

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kDivergence = 1e12;

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// Spectral data of a Hermitian 2x2: eigenvalues (low, high) and the matching
// rank-one projectors. Coincident eigenvalues get an arbitrary orthogonal pair.
struct Spectrum {
  double low, high;
  Matrix p_low, p_high;
};

Spectrum spectrum(const Matrix& h) {
  const auto c = pauli_coordinates(h);
  const double r = std::hypot(c[1], c[2], c[3]);
  std::array<double, 3> n{0.0, 0.0, 1.0};
  if (r > 0.0) n = {c[1] / r, c[2] / r, c[3] / r};
  const Matrix axis = from_pauli_coordinates({0.0, 0.5 * n[0], 0.5 * n[1], 0.5 * n[2]});
  const Matrix half = 0.5 * Matrix::identity();
  return {c[0] - r, c[0] + r, half - axis, half + axis};
}

template <typename F>
Matrix spectral_map(const Matrix& h, F f) {
  const Spectrum s = spectrum(h);
  return f(s.low) * s.p_low + f(s.high) * s.p_high;
}

Matrix sqrtm(const Matrix& h) {
  return spectral_map(h, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}
Matrix inv_sqrtm(const Matrix& h) {
  return spectral_map(h, [](double x) { return 1.0 / std::sqrt(x); });
}

// G M G for Hermitian G and M.
Matrix sandwich(const Matrix& g, const Matrix& m) { return hermitian_part(g * m * g); }

double inner(const Matrix& a, const Matrix& b) { return trace_inner(a, b); }

// Largest alpha with x + alpha d PSD, for x positive definite.
double max_step(const Matrix& x, const Matrix& d) {
  const Matrix xi = inv_sqrtm(x);
  const double low = spectrum(sandwich(xi, d)).low;
  return low < 0.0 ? -1.0 / low : kInfinity;
}

// Solves V Y + Y V = R for Hermitian Y, V positive definite.
Matrix lyapunov_inverse(const Matrix& v, const Matrix& r) {
  const Spectrum s = spectrum(v);
  const Matrix ll = s.p_low * r * s.p_low;
  const Matrix hh = s.p_high * r * s.p_high;
  const Matrix lh = s.p_low * r * s.p_high + s.p_high * r * s.p_low;
  return hermitian_part(ll * (1.0 / (2.0 * s.low)) + hh * (1.0 / (2.0 * s.high)) + lh * (1.0 / (s.low + s.high)));
}

struct Scaling {
  Matrix w, g, g_inv, v;
};

Scaling nt_scaling(const Matrix& x, const Matrix& z) {
  const Matrix xs = sqrtm(x);
  const Matrix w = sandwich(xs, inv_sqrtm(sandwich(xs, z)));
  const Matrix g = sqrtm(w);
  return {w, g, inv_sqrtm(w), sandwich(g, z)};
}

struct Iterate {
  std::vector<double> y;
  std::vector<Matrix> x, z;
};

class Solver {
 public:
  Solver(const Problem& p, const Settings& s) : p_(p), s_(s), nb_(p.blocks.size()), m_(p.num_vars) {}

  Solution run();

 private:
  Matrix adjoint_map(std::size_t k, const std::vector<double>& y) const {
    Matrix out;
    for (const auto& t : p_.blocks[k].terms) out += y[t.var] * t.coefficient;
    return out;
  }

  // out_j += sum_k <A_{k,j}, M_k>
  void forward_map(const std::vector<Matrix>& mats, Eigen::VectorXd& out) const {
    for (std::size_t k = 0; k < nb_; ++k) {
      for (const auto& t : p_.blocks[k].terms) out[t.var] += inner(t.coefficient, mats[k]);
    }
  }

  void initial_point(Iterate& it) const;
  Solution finish(const Iterate& it, Status status, int iterations) const;
  void measure(const Iterate& it, Solution& sol) const;

  const Problem& p_;
  Settings s_;
  std::size_t nb_;
  int m_;
};

void Solver::initial_point(Iterate& it) const {
  const double n = 2.0 * static_cast<double>(nb_);
  double a_norm_max = 0.0;
  double c_norm_max = 0.0;
  std::vector<double> a_norm(m_, 0.0);
  for (const auto& b : p_.blocks) {
    c_norm_max = std::max(c_norm_max, b.constant.frobenius_norm());
    for (const auto& t : b.terms) a_norm[t.var] += std::norm(t.coefficient.frobenius_norm());
  }
  double xi = std::max(10.0, std::sqrt(n));
  for (int j = 0; j < m_; ++j) {
    a_norm[j] = std::sqrt(a_norm[j]);
    a_norm_max = std::max(a_norm_max, a_norm[j]);
    xi = std::max(xi, std::sqrt(n) * (1.0 + std::abs(p_.objective[j])) / (1.0 + a_norm[j]));
  }
  const double eta = std::max({10.0, std::sqrt(n), a_norm_max, c_norm_max});
  it.y.assign(m_, 0.0);
  it.x.assign(nb_, xi * Matrix::identity());
  it.z.assign(nb_, eta * Matrix::identity());
}

void Solver::measure(const Iterate& it, Solution& sol) const {
  sol.primal_value = 0.0;
  for (int j = 0; j < m_; ++j) sol.primal_value += p_.objective[j] * it.y[j];
  sol.dual_value = 0.0;
  sol.complementarity = 0.0;
  sol.primal_residual = 0.0;
  for (std::size_t k = 0; k < nb_; ++k) {
    sol.dual_value += inner(p_.blocks[k].constant, it.x[k]);
    sol.complementarity += inner(it.x[k], it.z[k]);
    const Matrix r = p_.blocks[k].constant - adjoint_map(k, it.y) - it.z[k];
    sol.primal_residual = std::max(sol.primal_residual, r.frobenius_norm());
  }
  Eigen::VectorXd ax = Eigen::VectorXd::Zero(m_);
  forward_map(it.x, ax);
  sol.dual_residual = 0.0;
  for (int j = 0; j < m_; ++j) sol.dual_residual = std::max(sol.dual_residual, std::abs(p_.objective[j] - ax[j]));
  sol.gap = sol.dual_value - sol.primal_value;
}

Solution Solver::finish(const Iterate& it, Status status, int iterations) const {
  Solution sol;
  sol.status = status;
  sol.iterations = iterations;
  sol.y = it.y;
  sol.dual = it.x;
  for (std::size_t k = 0; k < nb_; ++k) sol.slack.push_back(hermitian_part(block_value(p_.blocks[k], it.y)));
  measure(it, sol);
  return sol;
}

Solution Solver::run() {
  Iterate it;
  initial_point(it);
  const double n = 2.0 * static_cast<double>(nb_);
  double b_norm = 0.0;
  double c_norm = 0.0;
  for (double b : p_.objective) b_norm = std::max(b_norm, std::abs(b));
  for (const auto& b : p_.blocks) c_norm = std::max(c_norm, b.constant.frobenius_norm());

  Iterate best = it;
  double best_error = kInfinity;

  for (int iter = 0; iter < s_.max_iterations; ++iter) {
    Solution probe;
    measure(it, probe);
    const double pinf = probe.primal_residual / (1.0 + c_norm);
    const double dinf = probe.dual_residual / (1.0 + b_norm);
    const double error = std::max({std::abs(probe.gap), probe.complementarity, pinf, dinf});
    if (error < best_error) {
      best_error = error;
      best = it;
    }
    if (std::abs(probe.gap) <= s_.tol && probe.complementarity <= s_.tol && pinf <= s_.tol && dinf <= s_.tol) {
      return finish(it, Status::optimal, iter);
    }
    double size = 0.0;
    for (std::size_t k = 0; k < nb_; ++k) {
      size = std::max({size, it.x[k].frobenius_norm(), it.z[k].frobenius_norm()});
    }
    if (size > kDivergence || !std::isfinite(size)) return finish(best, Status::infeasible, iter);

    const double mu = probe.complementarity / n;

    std::vector<Scaling> sc;
    std::vector<Matrix> rd(nb_);
    sc.reserve(nb_);
    for (std::size_t k = 0; k < nb_; ++k) {
      sc.push_back(nt_scaling(it.x[k], it.z[k]));
      rd[k] = hermitian_part(p_.blocks[k].constant - adjoint_map(k, it.y) - it.z[k]);
    }

    // Schur complement M_ij = sum_k <A_{k,i}, W_k A_{k,j} W_k>.
    Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(m_, m_);
    for (std::size_t k = 0; k < nb_; ++k) {
      const auto& terms = p_.blocks[k].terms;
      for (std::size_t b = 0; b < terms.size(); ++b) {
        const Matrix wbw = sandwich(sc[k].w, terms[b].coefficient);
        for (std::size_t a = 0; a < terms.size(); ++a) {
          schur(terms[a].var, terms[b].var) += inner(terms[a].coefficient, wbw);
        }
      }
    }
    schur = 0.5 * (schur + schur.transpose());
    Eigen::LLT<Eigen::MatrixXd> chol(schur);
    if (chol.info() != Eigen::Success) {
      const double shift = 1e-14 * std::max(1.0, schur.diagonal().maxCoeff());
      chol.compute(schur + shift * Eigen::MatrixXd::Identity(m_, m_));
      if (chol.info() != Eigen::Success) return finish(best, Status::numerical_failure, iter);
    }

    Eigen::VectorXd ax = Eigen::VectorXd::Zero(m_);
    forward_map(it.x, ax);
    Eigen::VectorXd rp(m_);
    for (int j = 0; j < m_; ++j) rp[j] = p_.objective[j] - ax[j];

    // Given the complementarity right-hand side rc (dX + W dZ W = rc), solve
    // for the full direction.
    auto direction = [&](const std::vector<Matrix>& rc, std::vector<double>& dy, std::vector<Matrix>& dx,
                         std::vector<Matrix>& dz) {
      std::vector<Matrix> tmp(nb_);
      for (std::size_t k = 0; k < nb_; ++k) tmp[k] = rc[k] - sandwich(sc[k].w, rd[k]);
      Eigen::VectorXd a_tmp = Eigen::VectorXd::Zero(m_);
      forward_map(tmp, a_tmp);
      const Eigen::VectorXd sol = chol.solve(rp - a_tmp);
      dy.assign(sol.data(), sol.data() + m_);
      dx.resize(nb_);
      dz.resize(nb_);
      for (std::size_t k = 0; k < nb_; ++k) {
        dz[k] = hermitian_part(rd[k] - adjoint_map(k, dy));
        dx[k] = hermitian_part(rc[k] - sandwich(sc[k].w, dz[k]));
      }
    };
    auto step_lengths = [&](const std::vector<Matrix>& dx, const std::vector<Matrix>& dz) {
      double ap = kInfinity;
      double ad = kInfinity;
      for (std::size_t k = 0; k < nb_; ++k) {
        ap = std::min(ap, max_step(it.x[k], dx[k]));
        ad = std::min(ad, max_step(it.z[k], dz[k]));
      }
      return std::pair<double, double>{ap, ad};
    };

    // Predictor (affine scaling).
    std::vector<Matrix> rc(nb_);
    for (std::size_t k = 0; k < nb_; ++k) rc[k] = -1.0 * it.x[k];
    std::vector<double> dy;
    std::vector<Matrix> dx, dz;
    direction(rc, dy, dx, dz);
    auto [ap_max, ad_max] = step_lengths(dx, dz);
    const double ap = std::min(1.0, ap_max);
    const double ad = std::min(1.0, ad_max);
    double mu_aff = 0.0;
    for (std::size_t k = 0; k < nb_; ++k) mu_aff += inner(it.x[k] + ap * dx[k], it.z[k] + ad * dz[k]);
    mu_aff /= n;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector, formed in the scaled space where X and Z both equal V.
    for (std::size_t k = 0; k < nb_; ++k) {
      const Matrix dxs = sandwich(sc[k].g_inv, dx[k]);
      const Matrix dzs = sandwich(sc[k].g, dz[k]);
      const Matrix v = sc[k].v;
      const Matrix rhs = (2.0 * sigma * mu) * Matrix::identity() - 2.0 * (v * v) - (dxs * dzs + dzs * dxs);
      rc[k] = sandwich(sc[k].g, lyapunov_inverse(v, hermitian_part(rhs)));
    }
    direction(rc, dy, dx, dz);
    std::tie(ap_max, ad_max) = step_lengths(dx, dz);
    const double step_p = std::min(1.0, s_.step_fraction * ap_max);
    const double step_d = std::min(1.0, s_.step_fraction * ad_max);

    for (std::size_t k = 0; k < nb_; ++k) {
      it.x[k] = hermitian_part(it.x[k] + step_p * dx[k]);
      it.z[k] = hermitian_part(it.z[k] + step_d * dz[k]);
    }
    for (int j = 0; j < m_; ++j) it.y[j] += step_d * dy[j];

    bool finite = true;
    for (std::size_t k = 0; k < nb_; ++k) finite = finite && it.x[k].is_finite() && it.z[k].is_finite();
    if (!finite) return finish(best, Status::numerical_failure, iter + 1);
  }
  return finish(best, Status::numerical_failure, s_.max_iterations);
}

}  // namespace

void Problem::check() const {
  if (num_vars <= 0) throw ValidationError("SDP needs at least one variable");
  if (static_cast<int>(objective.size()) != num_vars) throw ValidationError("objective length must equal num_vars");
  if (blocks.empty()) throw ValidationError("SDP needs at least one block");
  for (const auto& b : blocks) {
    if (!b.constant.is_finite() || !b.constant.is_hermitian(1e-12)) {
      throw ValidationError("block '" + b.name + "' has a non-Hermitian constant");
    }
    for (const auto& t : b.terms) {
      if (t.var < 0 || t.var >= num_vars) throw ValidationError("block '" + b.name + "' references a bad variable");
      if (!t.coefficient.is_finite() || !t.coefficient.is_hermitian(1e-12)) {
        throw ValidationError("block '" + b.name + "' has a non-Hermitian coefficient");
      }
    }
  }
}

std::string to_string(Status s) {
  switch (s) {
    case Status::optimal:
      return "optimal";
    case Status::infeasible:
      return "infeasible";
    case Status::numerical_failure:
      return "numerical-failure";
  }
  return "unknown";
}

ComplexMatrix2 block_value(const Block& block, const std::vector<double>& y) {
  ComplexMatrix2 out = block.constant;
  for (const auto& t : block.terms) out -= y[t.var] * t.coefficient;
  return out;
}

Solution solve(const Problem& problem, const Settings& settings) {
  problem.check();
  if (!(settings.tol > 0.0) || settings.max_iterations <= 0 ||
      !(settings.step_fraction > 0.0 && settings.step_fraction < 1.0)) {
    throw DomainError("invalid SDP solver settings");
  }
  return Solver(problem, settings).run();
}

}  // namespace tsteer::sdp
