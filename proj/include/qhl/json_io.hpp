// Copyright 2026 The qhlplus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <nlohmann/json.hpp>

#include "qhl/classical/value.hpp"
#include "qhl/linalg.hpp"

namespace qhl::io {

    using nlohmann::json;

    // Entries are numbers or [re, im] pairs.
    linalg::Complex complex_from_json(const json& j);
    json complex_to_json(linalg::Complex c);
    linalg::ComplexMatrix matrix_from_json(const json& j);
    json matrix_to_json(const linalg::ComplexMatrix& m);
    linalg::ComplexVector vector_from_json(const json& j);
    json vector_to_json(const linalg::ComplexVector& v);

    // The declared type, when known, disambiguates arrays (bits vs complex pairs).
    classical::Value value_from_json(const json& j, const classical::ClassicalType* type = nullptr);
    json value_to_json(const classical::Value& v);
    classical::ClassicalState state_from_json(const json& j, const classical::Typing& typing);
    json state_to_json(const classical::ClassicalState& s);

    json read_json_file(const std::string& path);
    // Schema error naming `where` when `key` is missing.
    const json& require(const json& j, const std::string& key, const std::string& where);

}  // namespace qhl::io
