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

#include "qcm/errors.hpp"

#include <fmt/format.h>

namespace qcm {

QubitCountMismatch::QubitCountMismatch(std::size_t expected, std::size_t actual)
    : std::invalid_argument(fmt::format(
          "qubit count mismatch: expected {}, got {}", expected, actual)) {}

MissingStringError::MissingStringError(const std::string& pauli)
    : std::runtime_error(
          fmt::format("no expectation available for Pauli string {}", pauli)),
      pauli_(pauli) {}

IncompatibleMemberError::IncompatibleMemberError(const std::string& member,
                                                 const std::string& label)
    : std::invalid_argument(fmt::format(
          "string {} does not qubit-wise commute with label {}", member,
          label)) {}

}  // namespace qcm
