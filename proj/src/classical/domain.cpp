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

#include "qhl/classical/domain.hpp"

#include <limits>

#include "qhl/error.hpp"

namespace qhl::classical {

    Domain Domain::over(const std::set<std::string>& names, const Typing& typing, const Grids& grids) {
        constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
        constexpr std::uint64_t kPerVarLimit = std::uint64_t{1} << 24;
        Domain d;
        for (const auto& n : names) {
            auto g = grids.find(n);
            if (g != grids.end()) {
                d.m_vars.push_back({n, g->second});
                d.m_grid_assumed = true;
            } else {
                const ClassicalType* t = typing.find(n);
                if (!t) {
                    d.m_reason = "variable " + n + " is not declared";
                    continue;
                }
                if (!t->enumerable()) {
                    d.m_reason = "variable " + n + " of type " + t->to_string() + " is not enumerable";
                    continue;
                }
                if (t->grid) d.m_grid_assumed = true;
                auto card = t->cardinality();
                if (!card || *card > kPerVarLimit) {
                    d.m_reason = "variable " + n + " has too many values";
                    continue;
                }
                d.m_vars.push_back({n, t->values()});
            }
            std::uint64_t k = d.m_vars.back().values.size();
            if (k == 0) {
                d.m_size = 0;
            } else if (d.m_size > kMax / k) {
                d.m_size = kMax;
            } else {
                d.m_size *= k;
            }
        }
        return d;
    }

    ClassicalState Domain::state(std::uint64_t index, const ClassicalState& base) const {
        if (!enumerable()) fail(ErrorKind::DomainTooLarge, m_reason);
        ClassicalState s = base;
        for (std::size_t i = m_vars.size(); i-- > 0;) {
            const auto& v = m_vars[i];
            std::uint64_t k = v.values.size();
            s.set(v.name, v.values[index % k]);
            index /= k;
        }
        return s;
    }

    ClassicalState Domain::sample(std::mt19937_64& rng, const ClassicalState& base) const {
        if (!enumerable()) fail(ErrorKind::DomainTooLarge, m_reason);
        ClassicalState s = base;
        for (const auto& v : m_vars) {
            std::uniform_int_distribution<std::size_t> pick(0, v.values.size() - 1);
            s.set(v.name, v.values[pick(rng)]);
        }
        return s;
    }

}  // namespace qhl::classical
