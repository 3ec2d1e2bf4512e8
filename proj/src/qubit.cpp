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

#include "tsteer/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsteer/error.hpp"

namespace tsteer {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
const Complex kI{0.0, 1.0};
}  // namespace

ComplexMatrix2 ComplexMatrix2::outer(const std::array<Complex, 2>& ket, const std::array<Complex, 2>& bra) {
  return {ket[0] * std::conj(bra[0]), ket[0] * std::conj(bra[1]), ket[1] * std::conj(bra[0]),
          ket[1] * std::conj(bra[1])};
}

ComplexMatrix2 ComplexMatrix2::adjoint() const {
  return {std::conj(e_[0]), std::conj(e_[2]), std::conj(e_[1]), std::conj(e_[3])};
}

double ComplexMatrix2::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : e_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexMatrix2::is_finite() const {
  return std::all_of(e_.begin(), e_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool ComplexMatrix2::is_hermitian(double tol) const { return max_abs_diff(adjoint()) <= tol; }

double ComplexMatrix2::max_abs_diff(const ComplexMatrix2& other) const {
  double d = 0.0;
  for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(e_[k] - other.e_[k]));
  return d;
}

ComplexMatrix2& ComplexMatrix2::operator+=(const ComplexMatrix2& o) {
  for (int k = 0; k < 4; ++k) e_[k] += o.e_[k];
  return *this;
}

ComplexMatrix2& ComplexMatrix2::operator-=(const ComplexMatrix2& o) {
  for (int k = 0; k < 4; ++k) e_[k] -= o.e_[k];
  return *this;
}

ComplexMatrix2& ComplexMatrix2::operator*=(Complex s) {
  for (auto& z : e_) z *= s;
  return *this;
}

ComplexMatrix2 operator*(const ComplexMatrix2& a, const ComplexMatrix2& b) {
  return {a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
          a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1)};
}

std::array<double, 4> pauli_coordinates(const ComplexMatrix2& h) {
  const Complex h01 = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
  return {0.5 * (h(0, 0).real() + h(1, 1).real()), h01.real(), -h01.imag(),
          0.5 * (h(0, 0).real() - h(1, 1).real())};
}

ComplexMatrix2 from_pauli_coordinates(const std::array<double, 4>& c) {
  return {Complex(c[0] + c[3], 0.0), Complex(c[1], -c[2]), Complex(c[1], c[2]), Complex(c[0] - c[3], 0.0)};
}

std::array<double, 2> hermitian_eigenvalues(const ComplexMatrix2& h) {
  const auto c = pauli_coordinates(h);
  const double r = std::hypot(c[1], c[2], c[3]);
  return {c[0] - r, c[0] + r};
}

ComplexMatrix2 pauli(int i) {
  switch (i) {
    case 1:
      return {0.0, 1.0, 1.0, 0.0};
    case 2:
      return {0.0, -kI, kI, 0.0};
    case 3:
      return {1.0, 0.0, 0.0, -1.0};
    default:
      throw DomainError("pauli index must be 1, 2 or 3, got " + std::to_string(i));
  }
}

ComplexMatrix2 pauli_or_identity(int i) { return i == 0 ? ComplexMatrix2::identity() : pauli(i); }

ComplexMatrix2 rotation(const std::array<double, 3>& axis, double angle) {
  const double n = std::hypot(axis[0], axis[1], axis[2]);
  if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(angle)) {
    throw DomainError("rotation axis must be a finite nonzero vector");
  }
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  ComplexMatrix2 gen = (axis[0] / n) * pauli(1) + (axis[1] / n) * pauli(2) + (axis[2] / n) * pauli(3);
  return c * ComplexMatrix2::identity() - (kI * s) * gen;
}

bool is_unitary(const ComplexMatrix2& u, double tol) {
  return (u.adjoint() * u).max_abs_diff(ComplexMatrix2::identity()) <= tol;
}

MubLabel::MubLabel(int basis, int outcome) : basis_(basis), outcome_(outcome) {
  if (basis < 1 || basis > 3) throw DomainError("basis index must be 1, 2 or 3, got " + std::to_string(basis));
  if (outcome != 1 && outcome != -1) throw DomainError("outcome must be +1 or -1, got " + std::to_string(outcome));
}

std::vector<MubLabel> MubLabel::all() { return for_bases({1, 2, 3}); }

std::vector<MubLabel> MubLabel::for_bases(const std::vector<int>& bases) {
  std::vector<MubLabel> out;
  out.reserve(2 * bases.size());
  for (int i : bases) {
    out.emplace_back(i, +1);
    out.emplace_back(i, -1);
  }
  return out;
}

double BlochVector::norm() const { return std::hypot(r[0], r[1], r[2]); }

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix2& m, const Tolerances& tol) {
  if (!m.is_finite()) throw ValidationError("density matrix has non-finite entries");
  if (!m.is_hermitian(tol.herm)) throw ValidationError("density matrix is not Hermitian");
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > tol.trace) {
    throw ValidationError("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
  }
  if (hermitian_eigenvalues(m)[0] < -tol.psd) throw ValidationError("density matrix is not positive semidefinite");
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::from_bloch(const BlochVector& b, const Tolerances& tol) {
  for (double x : b.r) {
    if (!std::isfinite(x)) throw ValidationError("Bloch vector has non-finite components");
  }
  if (b.norm() > 1.0 + tol.psd) throw ValidationError("Bloch vector lies outside the unit ball");
  return DensityMatrix(from_pauli_coordinates({0.5, 0.5 * b.r[0], 0.5 * b.r[1], 0.5 * b.r[2]}));
}

BlochVector DensityMatrix::bloch() const {
  const auto c = pauli_coordinates(m_);
  return {{2.0 * c[1], 2.0 * c[2], 2.0 * c[3]}};
}

std::array<Complex, 2> mub_ket(const MubLabel& label) {
  const double a = label.outcome();
  switch (label.basis()) {
    case 1:
      return {Complex(kInvSqrt2), Complex(a * kInvSqrt2)};
    case 2:
      return {Complex(kInvSqrt2), Complex(0.0, a * kInvSqrt2)};
    default:
      return a > 0 ? std::array<Complex, 2>{1.0, 0.0} : std::array<Complex, 2>{0.0, 1.0};
  }
}

ComplexMatrix2 mub_projector(const MubLabel& label) {
  // (I + a sigma_i) / 2 is exact in floating point, unlike |k><k| built from 1/sqrt(2).
  return 0.5 * (ComplexMatrix2::identity() + static_cast<double>(label.outcome()) * pauli(label.basis()));
}

DensityMatrix mub_state(const MubLabel& label) { return DensityMatrix::from_matrix(mub_projector(label)); }

BlochVector bloch_from_density(const DensityMatrix& rho) { return rho.bloch(); }

DensityMatrix density_from_bloch(const BlochVector& b, const Tolerances& tol) {
  return DensityMatrix::from_bloch(b, tol);
}

DensityMatrix bloch_roundtrip(const DensityMatrix& rho, const Tolerances& tol) {
  return density_from_bloch(bloch_from_density(rho), tol);
}

double fidelity_to_pure(const DensityMatrix& rho, const MubLabel& label) {
  const double ri = rho.bloch().r[label.basis() - 1];
  return std::clamp(0.5 * (1.0 + label.outcome() * ri), 0.0, 1.0);
}

double trace_inner(const ComplexMatrix2& a, const ComplexMatrix2& b) { return (a * b).trace().real(); }

}  // namespace tsteer
