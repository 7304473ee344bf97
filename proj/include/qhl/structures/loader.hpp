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

#include <string>

#include "qhl/json_io.hpp"
#include "qhl/structures/interpretation.hpp"

namespace qhl::structures {

    // Literal tables are validated here; parameterized builders on first use.
    Interpretation load_interpretation(const io::json& doc);
    Interpretation load_interpretation_file(const std::string& path);

}  // namespace qhl::structures
