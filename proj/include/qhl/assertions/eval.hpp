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

#include <optional>
#include <string>

#include "qhl/assertions/predicate.hpp"
#include "qhl/classical/domain.hpp"
#include "qhl/structures/interpretation.hpp"

namespace qhl::assertions {

    using structures::Interpretation;

    struct StateValue {
        bool defined = false;
        linalg::RegisterLayout layout;
        linalg::ComplexVector vec;
        std::string reason;
    };

    struct EvalResult {
        bool defined = false;
        linalg::RegisterLayout layout;
        linalg::ComplexMatrix op;
        std::string reason;

        static EvalResult undefined(std::string why) { return {false, {}, {}, std::move(why)}; }
    };

    // Well-defined only when the resulting vector has unit norm.
    StateValue eval_state(const Interpretation& in, const classical::ClassicalState& sigma, const FormalState& s);
    EvalResult eval_predicate(const Interpretation& in, const classical::ClassicalState& sigma, const Predicate& a);

    // The operator of r extended by identity to `target`, which must contain r's systems.
    linalg::ComplexMatrix extend(const EvalResult& r, const linalg::RegisterLayout& target);

    struct CqAssertion {
        ExprPtr phi;
        PredPtr a;
    };

    std::string to_string(const CqAssertion& c);
    io::json to_json(const CqAssertion& c);
    CqAssertion assertion_from_json(const io::json& j, const syntax::SymbolTable* symbols = nullptr);

    enum class Verdict { Holds, Fails, Inconclusive };
    const char* verdict_name(Verdict v);

    struct EntailResult {
        Verdict verdict = Verdict::Holds;
        std::optional<classical::ClassicalState> witness;
        std::string reason;
        std::uint64_t states_checked = 0;
        bool grid_assumed = false;
    };

    using Grids = classical::Domain::Grids;

    // phi |= A <= B, by enumerating the classical states over the free variables involved.
    EntailResult entails(const Interpretation& in, const ExprPtr& phi, const Predicate& a, const Predicate& b,
                         const Grids& grids = {});
    // (phi, A) |= (psi, B)
    EntailResult cq_entails(const Interpretation& in, const CqAssertion& pre, const CqAssertion& post,
                            const Grids& grids = {});
    // Validity of a closed-domain classical formula.
    EntailResult valid(const Interpretation& in, const ExprPtr& phi, const Grids& grids = {});

}  // namespace qhl::assertions
