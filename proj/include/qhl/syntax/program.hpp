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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qhl/classical/expr.hpp"

namespace qhl::syntax {

    using classical::ExprPtr;

    // q or q[s1, ..., sn]; the concrete system is selected by evaluating the subscripts.
    struct SubscriptedVar {
        std::string base;
        std::vector<ExprPtr> subscripts;
    };

    bool same_qvar(const SubscriptedVar& a, const SubscriptedVar& b);
    bool same_qvars(const std::vector<SubscriptedVar>& a, const std::vector<SubscriptedVar>& b);
    std::string to_string(const SubscriptedVar& q);
    std::string to_string(const std::vector<SubscriptedVar>& qs);
    SubscriptedVar subst_qvar(const SubscriptedVar& q, const std::string& x, const ExprPtr& r);
    void collect_vars(const SubscriptedVar& q, std::set<std::string>& out);

    enum class Cmd { Skip, Assign, Init, Gate, Measure, Seq, If, While };

    struct Program;
    using ProgramPtr = std::shared_ptr<const Program>;

    struct Program {
        Cmd kind = Cmd::Skip;
        std::string name;    // assigned variable (Assign, Measure) or gate symbol (Gate)
        std::string symbol;  // measurement symbol
        ExprPtr expr;        // assigned expression or guard
        std::vector<ExprPtr> params;
        std::vector<SubscriptedVar> targets;
        ProgramPtr first;
        ProgramPtr second;
    };

    ProgramPtr skip();
    ProgramPtr assign(std::string x, ExprPtr e);
    ProgramPtr init(SubscriptedVar q);
    ProgramPtr gate(std::string name, std::vector<ExprPtr> params, std::vector<SubscriptedVar> targets);
    ProgramPtr measure(std::string x, std::string symbol, std::vector<SubscriptedVar> targets);
    ProgramPtr seq(ProgramPtr a, ProgramPtr b);
    ProgramPtr cond(ExprPtr b, ProgramPtr then_branch, ProgramPtr else_branch);
    ProgramPtr loop(ExprPtr b, ProgramPtr body);
    // Right-nested sequence of the given commands; skip when empty.
    ProgramPtr sequence(const std::vector<ProgramPtr>& cmds);

    bool same_program(const Program& a, const Program& b);
    std::string to_string(const Program& p);
    std::size_t command_count(const Program& p);

    ExprPtr dist_formula(const std::vector<SubscriptedVar>& qs);

    // One entry of qv(P): a simple variable, an array element with constant subscripts,
    // or a whole array when some subscript is not constant.
    struct QVarRef {
        std::string base;
        std::optional<std::vector<classical::Value>> index;
        bool operator==(const QVarRef&) const = default;
    };

    QVarRef qvar_ref(const SubscriptedVar& q);
    bool may_overlap(const QVarRef& a, const QVarRef& b);
    std::vector<QVarRef> quantum_vars(const Program& p);
    std::set<std::string> classical_vars(const Program& p);
    std::set<std::string> modified_vars(const Program& p);

}  // namespace qhl::syntax
