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

// Complex 2x2 linear algebra for a single qubit: Pauli observables, the six
// eigenstates of the mutually unbiased Pauli bases, density matrices and the
// Bloch-vector view. Everything is closed form; nothing here iterates.
//
// Basis convention: A_1 = sigma_x, A_2 = sigma_y, A_3 = sigma_z in the
// computational basis.

#include <array>
#include <complex>
#include <vector>

namespace tsteer {

using Complex = std::complex<double>;

struct Tolerances {
  double herm = 1e-10;
  double trace = 1e-10;
  double psd = 1e-9;
};

class ComplexMatrix2 {
 public:
  ComplexMatrix2() = default;
  ComplexMatrix2(Complex m00, Complex m01, Complex m10, Complex m11) : e_{m00, m01, m10, m11} {}

  static ComplexMatrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static ComplexMatrix2 zero() { return {}; }
  static ComplexMatrix2 outer(const std::array<Complex, 2>& ket, const std::array<Complex, 2>& bra);

  Complex operator()(int row, int col) const { return e_[2 * row + col]; }
  Complex& operator()(int row, int col) { return e_[2 * row + col]; }

  ComplexMatrix2 adjoint() const;
  Complex trace() const { return e_[0] + e_[3]; }
  Complex determinant() const { return e_[0] * e_[3] - e_[1] * e_[2]; }
  double frobenius_norm() const;
  bool is_finite() const;
  bool is_hermitian(double tol) const;
  // Largest |m_ij - n_ij|.
  double max_abs_diff(const ComplexMatrix2& other) const;

  ComplexMatrix2& operator+=(const ComplexMatrix2& o);
  ComplexMatrix2& operator-=(const ComplexMatrix2& o);
  ComplexMatrix2& operator*=(Complex s);

  friend ComplexMatrix2 operator+(ComplexMatrix2 a, const ComplexMatrix2& b) { return a += b; }
  friend ComplexMatrix2 operator-(ComplexMatrix2 a, const ComplexMatrix2& b) { return a -= b; }
  friend ComplexMatrix2 operator*(ComplexMatrix2 a, Complex s) { return a *= s; }
  friend ComplexMatrix2 operator*(Complex s, ComplexMatrix2 a) { return a *= s; }
  friend ComplexMatrix2 operator*(const ComplexMatrix2& a, const ComplexMatrix2& b);
  friend bool operator==(const ComplexMatrix2&, const ComplexMatrix2&) = default;

 private:
  std::array<Complex, 4> e_{};
};

// Eigenvalues of a Hermitian matrix (the anti-Hermitian part is ignored),
// ascending.
std::array<double, 2> hermitian_eigenvalues(const ComplexMatrix2& h);

// Real coordinates (h0, h1, h2, h3) with h = h0 I + h1 X + h2 Y + h3 Z.
std::array<double, 4> pauli_coordinates(const ComplexMatrix2& h);
ComplexMatrix2 from_pauli_coordinates(const std::array<double, 4>& c);

// sigma_1..sigma_3; index 0 is accepted as the identity by pauli_or_identity.
ComplexMatrix2 pauli(int i);
ComplexMatrix2 pauli_or_identity(int i);

// exp(-i angle/2 n.sigma) for a unit (or normalizable) axis n.
ComplexMatrix2 rotation(const std::array<double, 3>& axis, double angle);
bool is_unitary(const ComplexMatrix2& u, double tol = 1e-10);

class MubLabel {
 public:
  MubLabel(int basis, int outcome);

  int basis() const { return basis_; }
  int outcome() const { return outcome_; }
  // Dense index 0..5, basis-major with +1 before -1.
  int index() const { return 2 * (basis_ - 1) + (outcome_ == 1 ? 0 : 1); }

  static std::vector<MubLabel> all();
  static std::vector<MubLabel> for_bases(const std::vector<int>& bases);

  friend bool operator==(const MubLabel&, const MubLabel&) = default;

 private:
  int basis_;
  int outcome_;
};

struct BlochVector {
  std::array<double, 3> r{};
  double norm() const;
};

class DensityMatrix {
 public:
  // Validates Hermiticity, unit trace and positivity.
  static DensityMatrix from_matrix(const ComplexMatrix2& m, const Tolerances& tol = {});
  static DensityMatrix from_bloch(const BlochVector& b, const Tolerances& tol = {});
  static DensityMatrix maximally_mixed() { return DensityMatrix(ComplexMatrix2::identity() * 0.5); }

  const ComplexMatrix2& matrix() const { return m_; }
  BlochVector bloch() const;
  Complex operator()(int row, int col) const { return m_(row, col); }

 private:
  explicit DensityMatrix(const ComplexMatrix2& m) : m_(m) {}
  ComplexMatrix2 m_;
};

std::array<Complex, 2> mub_ket(const MubLabel& label);
ComplexMatrix2 mub_projector(const MubLabel& label);
DensityMatrix mub_state(const MubLabel& label);

BlochVector bloch_from_density(const DensityMatrix& rho);
DensityMatrix density_from_bloch(const BlochVector& b, const Tolerances& tol = {});
DensityMatrix bloch_roundtrip(const DensityMatrix& rho, const Tolerances& tol = {});

// <a, A_i| rho |a, A_i> = (1 + a r_i) / 2.
double fidelity_to_pure(const DensityMatrix& rho, const MubLabel& label);

// Re tr(a b); for Hermitian arguments this is the Hilbert-Schmidt inner product.
double trace_inner(const ComplexMatrix2& a, const ComplexMatrix2& b);

}  // namespace tsteer
