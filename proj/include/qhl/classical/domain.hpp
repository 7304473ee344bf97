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

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qhl/classical/value.hpp"

namespace qhl::classical {

    inline constexpr std::uint64_t kDefaultDomainCap = 1000000;

    struct DomainVar {
        std::string name;
        std::vector<Value> values;
    };

    // Finite product of per-variable value lists, enumerated in mixed-radix order
    // (last variable fastest).
    class Domain {
       public:
        using Grids = std::map<std::string, std::vector<Value>>;

        // Variables without an enumerable type make the domain non-enumerable; a
        // supplied grid for a Real/Complex variable is used and flagged as assumed.
        static Domain over(const std::set<std::string>& names, const Typing& typing,
                           const Grids& grids = {});

        bool enumerable() const { return m_reason.empty(); }
        const std::string& reason() const { return m_reason; }
        bool grid_assumed() const { return m_grid_assumed; }
        const std::vector<DomainVar>& vars() const { return m_vars; }

        // Saturating product of the per-variable sizes.
        std::uint64_t size() const { return m_size; }
        ClassicalState state(std::uint64_t index, const ClassicalState& base = {}) const;
        ClassicalState sample(std::mt19937_64& rng, const ClassicalState& base = {}) const;

       private:
        std::vector<DomainVar> m_vars;
        std::string m_reason;
        bool m_grid_assumed = false;
        std::uint64_t m_size = 1;
    };

}  // namespace qhl::classical
