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

// Primal-dual interior-point solver for semidefinite programs whose cone is a
// direct sum of 2x2 Hermitian PSD blocks:
//
//   maximize    b . y
//   subject to  Z_k(y) = C_k - sum_j y_j A_{k,j}  is PSD  for every block k
//
// with the dual
//
//   minimize    sum_k <C_k, X_k>
//   subject to  sum_k <A_{k,j}, X_k> = b_j,  X_k PSD.
//
// Search directions use Nesterov-Todd scaling with a Mehrotra
// predictor-corrector step; each block's scaling, square roots and
// Lyapunov solves are closed form. The Schur complement is dense (the
// intended problems have at most a few dozen real variables).

#include <string>
#include <vector>

#include "tsteer/qubit.hpp"

namespace tsteer::sdp {

struct Term {
  int var;
  ComplexMatrix2 coefficient;  // Hermitian
};

struct Block {
  std::string name;
  ComplexMatrix2 constant;  // Hermitian
  std::vector<Term> terms;
};

struct Problem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Block> blocks;

  // Throws ValidationError on dimension mismatches or non-Hermitian data.
  void check() const;
};

enum class Status { optimal, infeasible, numerical_failure };
std::string to_string(Status s);

struct Settings {
  double tol = 1e-8;
  int max_iterations = 200;
  double step_fraction = 0.98;
};

struct Solution {
  Status status = Status::numerical_failure;
  int iterations = 0;
  std::vector<double> y;
  std::vector<ComplexMatrix2> slack;  // Z_k at y
  std::vector<ComplexMatrix2> dual;   // X_k, the optimality certificate
  double primal_value = 0.0;          // b . y
  double dual_value = 0.0;            // sum_k <C_k, X_k>
  double gap = 0.0;                   // dual_value - primal_value
  double complementarity = 0.0;       // sum_k <X_k, Z_k>
  double primal_residual = 0.0;       // max_k |C_k - A_k(y) - Z_k|_F
  double dual_residual = 0.0;         // max_j |b_j - sum_k <A_{k,j}, X_k>|
};

// Deterministic: identical inputs give bit-identical outputs.
Solution solve(const Problem& problem, const Settings& settings = {});

// C_k - sum_j y_j A_{k,j}, recomputed from the data (not the solver's Z).
ComplexMatrix2 block_value(const Block& block, const std::vector<double>& y);

}  // namespace tsteer::sdp
