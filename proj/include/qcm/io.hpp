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

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qcm/engine.hpp"
#include "qcm/grouping.hpp"
#include "qcm/models.hpp"
#include "qcm/pauli.hpp"
#include "qcm/pipeline.hpp"

namespace qcm::io {

using nlohmann::json;

json to_json(const WeightedPauliSum& sum);
WeightedPauliSum sum_from_json(const json& j);

json groups_to_json(int n, const std::vector<TPBGroup>& groups);
std::pair<int, std::vector<TPBGroup>> groups_from_json(const json& j);

json lattice_to_json(const LatticeGraph& graph, const CouplingSet& couplings);
std::pair<LatticeGraph, CouplingSet> lattice_from_json(const json& j);

json to_json(const MeasurementStore& store);
MeasurementStore store_from_json(const json& j);

json to_json(const EstimateRecord& rec);

std::string read_file(const std::string& path);
json read_json(const std::string& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);
void write_json(const std::string& path, const json& j);

}  // namespace qcm::io
