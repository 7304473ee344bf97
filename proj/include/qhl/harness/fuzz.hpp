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
#include <string>
#include <vector>

#include "qhl/prover/proof.hpp"
#include "qhl/semantics/semantics.hpp"

namespace qhl::harness {

    using prover::HoareTriple;
    using prover::Mode;
    using structures::Interpretation;

    struct RunConfig {
        std::size_t fuel = 100;
        std::size_t branch_cap = 1000000;
        std::size_t samples = 100;       // fuzz inputs per triple
        std::uint64_t seed = 1;
        double eps = 1e-7;               // margin tolerance
        double residual_eps = 1e-9;      // total mode: above this an input cannot be confirmed
        std::uint64_t exhaustive_sigma = 10000;
        bool keep_records = true;
    };

    io::json to_json(const RunConfig& c);

    enum class InputVerdict { Consistent, Violation, Inconclusive, Skipped };
    const char* input_verdict_name(InputVerdict v);

    struct FuzzRecord {
        std::size_t index = 0;
        classical::ClassicalState sigma;
        std::string rho_kind;  // "basis k", "pure", "mixed rank k"
        std::uint64_t rho_seed = 0;
        double lhs = 0, rhs = 0, nt = 0, residual = 0, margin = 0;
        InputVerdict verdict = InputVerdict::Consistent;
        std::string note;
    };

    enum class FuzzVerdict { Consistent, Inconsistent, Inconclusive, Vacuous };
    const char* fuzz_verdict_name(FuzzVerdict v);

    struct FuzzReport {
        HoareTriple triple;
        RunConfig config;
        std::string sigma_mode;  // "exhaustive" or "sampled"
        std::uint64_t sigma_count = 0;
        std::vector<FuzzRecord> records;
        std::size_t consistent = 0, violations = 0, inconclusive = 0, skipped = 0;
        double worst_margin = 0;
        bool has_margin = false;
        // Largest deficit of output trace against input trace; criterion for run sanity.
        double worst_trace_excess = 0;
        FuzzVerdict verdict = FuzzVerdict::Vacuous;
    };

    io::json to_json(const FuzzReport& r);

    // Empirical check of tr(sigma(A) rho) <= sum tr(sigma'(B) rho') (+ NT in partial mode).
    FuzzReport fuzz_triple(const HoareTriple& t, const Interpretation& in, const RunConfig& cfg = {});

    // Per-input pseudo-random generator; depends only on the seed and the input index.
    std::uint64_t input_seed(std::uint64_t seed, std::size_t index);

    // {"sigma": {...}, "rho": {"pure": [...]} | {"matrix": [[...]]}, "layout": ["q[1]", ...]}
    semantics::CqState load_cq_state(const io::json& j, const Interpretation& in);
    io::json cq_state_to_json(const semantics::CqState& s);

}  // namespace qhl::harness
