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

#include <stdexcept>
#include <string>

namespace tsteer {

// Argument outside the mathematical domain of an operation (bad basis index,
// probability outside [0,1], S > N, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Object fails a structural invariant (non-Hermitian state, channel that is
// not trace preserving, inconsistent assemblage, unnormalized statistics).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document. `where` is a line/column or JSON path anchor.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

// The SDP solver did not reach the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tsteer
