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

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qhl/classical/expr.hpp"
#include "qhl/json_io.hpp"
#include "qhl/syntax/parser.hpp"
#include "qhl/syntax/program.hpp"

namespace qhl::assertions {

    using classical::ExprPtr;
    using syntax::SubscriptedVar;

    enum class StateKind { Ket, Tensor, Sum, Apply };

    struct FormalState;
    using StatePtr = std::shared_ptr<const FormalState>;

    struct FormalState {
        StateKind kind = StateKind::Ket;
        ExprPtr value;                  // Ket
        SubscriptedVar var;             // Ket
        std::vector<StatePtr> parts;    // Tensor factors, Sum terms, Apply operand
        std::vector<ExprPtr> coefs;     // Sum, one per term
        std::string gate;               // Apply
        std::vector<ExprPtr> params;    // Apply
        std::vector<SubscriptedVar> targets;  // Apply
    };

    StatePtr ket(ExprPtr value, SubscriptedVar q);
    StatePtr tensor_state(std::vector<StatePtr> factors);
    StatePtr superpose(std::vector<ExprPtr> coefs, std::vector<StatePtr> terms);
    StatePtr apply_gate(std::string gate, std::vector<ExprPtr> params, std::vector<SubscriptedVar> targets,
                        StatePtr s);

    enum class PredKind { Atomic, StateProj, Neg, Tensor, Kraus };

    struct Predicate;
    using PredPtr = std::shared_ptr<const Predicate>;

    struct Predicate {
        PredKind kind = PredKind::Atomic;
        std::string name;                     // Atomic, Kraus
        std::vector<ExprPtr> params;          // Atomic, Kraus
        std::vector<SubscriptedVar> targets;  // Atomic, Kraus
        StatePtr state;                       // StateProj
        std::vector<PredPtr> args;            // Neg (1), Tensor (2), Kraus branches
    };

    PredPtr atomic(std::string name, std::vector<ExprPtr> params, std::vector<SubscriptedVar> targets);
    PredPtr projector(StatePtr s);
    PredPtr negation(PredPtr a);
    PredPtr tensor(PredPtr a, PredPtr b);
    PredPtr kraus(std::string name, std::vector<ExprPtr> params, std::vector<SubscriptedVar> targets,
                  std::vector<PredPtr> branches);
    PredPtr identity_predicate();  // the scalar I

    // Keyed on base name plus printed subscripts.
    std::vector<SubscriptedVar> sig(const FormalState& s);
    std::vector<SubscriptedVar> sig(const Predicate& a);

    // Every classical variable occurring in A.
    std::set<std::string> cv(const Predicate& a);
    std::set<std::string> cv(const FormalState& s);

    StatePtr subst_state(const StatePtr& s, const std::string& x, const ExprPtr& e);
    PredPtr subst_predicate(const PredPtr& a, const std::string& x, const ExprPtr& e);

    bool same_state(const FormalState& a, const FormalState& b);
    bool same_predicate(const Predicate& a, const Predicate& b);

    std::string to_string(const FormalState& s);
    std::string to_string(const Predicate& a);

    StatePtr parse_state(std::string_view text, const syntax::SymbolTable* symbols = nullptr);
    PredPtr parse_predicate(std::string_view text, const syntax::SymbolTable* symbols = nullptr);
    // For embedding in larger grammars.
    StatePtr parse_state(syntax::Parser& p);
    PredPtr parse_predicate(syntax::Parser& p);

    io::json to_json(const FormalState& s);
    io::json to_json(const Predicate& a);
    // Accepts either an AST object or predicate text.
    StatePtr state_from_json(const io::json& j, const syntax::SymbolTable* symbols = nullptr);
    PredPtr predicate_from_json(const io::json& j, const syntax::SymbolTable* symbols = nullptr);

}  // namespace qhl::assertions
