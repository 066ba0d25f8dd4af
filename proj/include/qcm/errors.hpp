// Copyright 2026 The QCM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qcm {

/// Operands live on different numbers of qubits.
class QubitCountMismatch : public std::invalid_argument {
 public:
  QubitCountMismatch(std::size_t expected, std::size_t actual);
};

/// A compressed sum kept an imaginary part above the residue threshold.
/// Either the input was not Hermitian or a phase was tracked incorrectly.
class ImaginaryResidueError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An expectation was requested for a string the store never measured.
class MissingStringError : public std::runtime_error {
 public:
  explicit MissingStringError(const std::string& pauli);
  const std::string& pauli() const noexcept { return pauli_; }

 private:
  std::string pauli_;
};

/// A group member that does not qubit-wise commute with the measured label.
class IncompatibleMemberError : public std::invalid_argument {
 public:
  IncompatibleMemberError(const std::string& member, const std::string& label);
};

/// Request exceeds a memory guard (statevector size, dense matrix size).
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric z-minimization has no admissible region or no finite infimum.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qcm
