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

#include "qhl/classical/value.hpp"

namespace qhl::classical {

    enum class ExprKind { Literal, Var, Unary, Binary, Call, Index, BinFrac, Quantifier };
    enum class UnaryOp { Neg, Not };
    enum class BinaryOp { Add, Sub, Mul, Div, IntDiv, Mod, Pow, Eq, Ne, Lt, Le, Gt, Ge, And, Or, Implies };
    enum class Quantifier { Forall, Exists };

    struct Expr;
    using ExprPtr = std::shared_ptr<const Expr>;

    // Classical expressions and first-order formulas share one tree; a formula is a
    // Bool-valued expression, possibly with bounded quantifiers.
    struct Expr {
        ExprKind kind = ExprKind::Literal;
        Value value;
        std::string name;
        UnaryOp unary = UnaryOp::Neg;
        BinaryOp binary = BinaryOp::Add;
        Quantifier quant = Quantifier::Forall;
        std::vector<ExprPtr> args;
        ClassicalType bound_type;
    };

    ExprPtr lit(Value v);
    ExprPtr var(std::string name);
    ExprPtr unary(UnaryOp op, ExprPtr e);
    ExprPtr binary(BinaryOp op, ExprPtr a, ExprPtr b);
    ExprPtr call(std::string fn, std::vector<ExprPtr> args);
    ExprPtr index(std::string array, ExprPtr k);
    // 0.j[k:l] = sum over r in k..l of j[r] * 2^(k-r-1)
    ExprPtr binfrac(std::string array, ExprPtr k, ExprPtr l);
    ExprPtr quantified(Quantifier q, std::string bound, ClassicalType type, ExprPtr body);

    ExprPtr conj(ExprPtr a, ExprPtr b);
    ExprPtr disj(ExprPtr a, ExprPtr b);
    ExprPtr negate(ExprPtr a);
    ExprPtr truth();
    ExprPtr falsity();

    int precedence(BinaryOp op);
    const char* op_text(BinaryOp op);
    bool is_builtin_function(const std::string& name);

    Value eval_expr(const ClassicalState& sigma, const Expr& e);
    bool satisfies(const ClassicalState& sigma, const Expr& phi);

    std::set<std::string> free_vars(const Expr& e);
    void collect_free_vars(const Expr& e, std::set<std::string>& out);

    // e[r/x], capture-avoiding.
    ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& r);

    bool structural_equal(const Expr& a, const Expr& b);
    // Bound variables renamed by binding depth; nested ∧/∨ flattened with `true`/`false`
    // units dropped.
    ExprPtr canonical(const ExprPtr& e);
    bool same_expr(const ExprPtr& a, const ExprPtr& b);

    std::string to_string(const Expr& e);

    // Static value kind of an expression, when it can be determined from the typing.
    std::optional<ValueKind> infer_kind(const Expr& e, const Typing& typing);

}  // namespace qhl::classical
