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

#include "qhl/classical/expr.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "qhl/error.hpp"

namespace qhl::classical {

    namespace {

        ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

        std::int64_t checked_add(std::int64_t a, std::int64_t b) {
            std::int64_t r;
            if (__builtin_add_overflow(a, b, &r)) fail(ErrorKind::IntegerOverflow, "integer addition overflows");
            return r;
        }
        std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
            std::int64_t r;
            if (__builtin_sub_overflow(a, b, &r)) fail(ErrorKind::IntegerOverflow, "integer subtraction overflows");
            return r;
        }
        std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
            std::int64_t r;
            if (__builtin_mul_overflow(a, b, &r)) fail(ErrorKind::IntegerOverflow, "integer multiplication overflows");
            return r;
        }

        bool intlike(const Value& v) {
            auto k = kind_of(v);
            return k == ValueKind::Int || k == ValueKind::Bool;
        }

        void require_numeric(const Value& v, const char* what) {
            if (!is_numeric(v)) fail(ErrorKind::Type, std::string("bit array used in ") + what);
        }

        std::int64_t euclid_mod(std::int64_t a, std::int64_t b) {
            if (b == 0) fail(ErrorKind::DivisionByZero, "mod by zero");
            if (b == -1) return 0;
            std::int64_t r = a % b;
            if (r < 0) r += (b < 0 ? -b : b);
            return r;
        }

        Value arith(BinaryOp op, const Value& a, const Value& b) {
            require_numeric(a, "arithmetic");
            require_numeric(b, "arithmetic");
            bool cplx = kind_of(a) == ValueKind::Complex || kind_of(b) == ValueKind::Complex;
            switch (op) {
                case BinaryOp::Add:
                case BinaryOp::Sub:
                case BinaryOp::Mul:
                    if (intlike(a) && intlike(b)) {
                        auto x = as_int(a), y = as_int(b);
                        if (op == BinaryOp::Add) return checked_add(x, y);
                        if (op == BinaryOp::Sub) return checked_sub(x, y);
                        return checked_mul(x, y);
                    }
                    if (cplx) {
                        auto x = as_complex(a), y = as_complex(b);
                        if (op == BinaryOp::Add) return x + y;
                        if (op == BinaryOp::Sub) return x - y;
                        return x * y;
                    } else {
                        double x = as_real(a), y = as_real(b);
                        if (op == BinaryOp::Add) return x + y;
                        if (op == BinaryOp::Sub) return x - y;
                        return x * y;
                    }
                case BinaryOp::Div:
                    if (cplx) {
                        auto y = as_complex(b);
                        if (y == std::complex<double>(0.0, 0.0)) fail(ErrorKind::DivisionByZero, "division by zero");
                        return as_complex(a) / y;
                    } else {
                        double y = as_real(b);
                        if (y == 0.0) fail(ErrorKind::DivisionByZero, "division by zero");
                        return as_real(a) / y;
                    }
                case BinaryOp::IntDiv:
                case BinaryOp::Mod: {
                    if (!intlike(a) || !intlike(b)) fail(ErrorKind::Type, "div/mod need integer operands");
                    auto x = as_int(a), y = as_int(b);
                    auto r = euclid_mod(x, y);
                    if (op == BinaryOp::Mod) return r;
                    return checked_sub(x, r) / y;
                }
                case BinaryOp::Pow: {
                    if (intlike(a) && intlike(b) && as_int(b) >= 0) {
                        std::int64_t base = as_int(a), e = as_int(b), acc = 1;
                        for (std::int64_t i = 0; i < e; ++i) {
                            acc = checked_mul(acc, base);
                            if (acc == 0 || acc == 1) break;
                        }
                        return acc;
                    }
                    if (cplx) return std::pow(as_complex(a), as_complex(b));
                    return std::pow(as_real(a), as_real(b));
                }
                default: break;
            }
            fail(ErrorKind::Type, "not an arithmetic operator");
        }

        bool compare(BinaryOp op, const Value& a, const Value& b) {
            if (op == BinaryOp::Eq) return semantic_equal(a, b);
            if (op == BinaryOp::Ne) return !semantic_equal(a, b);
            auto ka = kind_of(a), kb = kind_of(b);
            if (ka == ValueKind::Complex || kb == ValueKind::Complex || ka == ValueKind::Bits || kb == ValueKind::Bits)
                fail(ErrorKind::Type, "ordering comparison needs Int or Real operands");
            if (intlike(a) && intlike(b)) {
                auto x = as_int(a), y = as_int(b);
                switch (op) {
                    case BinaryOp::Lt: return x < y;
                    case BinaryOp::Le: return x <= y;
                    case BinaryOp::Gt: return x > y;
                    default: return x >= y;
                }
            }
            double x = as_real(a), y = as_real(b);
            constexpr double tol = 1e-12;
            switch (op) {
                case BinaryOp::Lt: return x < y - tol;
                case BinaryOp::Le: return x <= y + tol;
                case BinaryOp::Gt: return x > y + tol;
                default: return x >= y - tol;
            }
        }

        double real_arg(const Value& v, const std::string& fn) {
            if (kind_of(v) == ValueKind::Complex || kind_of(v) == ValueKind::Bits)
                fail(ErrorKind::Type, fn + " expects a real argument");
            return as_real(v);
        }

        Value call_builtin(const std::string& fn, const std::vector<Value>& a) {
            auto arity = [&](std::size_t n) {
                if (a.size() != n)
                    fail(ErrorKind::ArityMismatch, fn + " expects " + std::to_string(n) + " argument(s)");
            };
            if (fn == "pi") {
                arity(0);
                return std::numbers::pi;
            }
            if (fn == "min" || fn == "max") {
                arity(2);
                if (intlike(a[0]) && intlike(a[1])) {
                    auto x = as_int(a[0]), y = as_int(a[1]);
                    return fn == "min" ? std::min(x, y) : std::max(x, y);
                }
                double x = real_arg(a[0], fn), y = real_arg(a[1], fn);
                return fn == "min" ? std::min(x, y) : std::max(x, y);
            }
            arity(1);
            const Value& v = a[0];
            require_numeric(v, fn.c_str());
            if (fn == "abs") {
                if (kind_of(v) == ValueKind::Int) {
                    auto i = std::get<std::int64_t>(v);
                    if (i == INT64_MIN) fail(ErrorKind::IntegerOverflow, "abs overflows");
                    return i < 0 ? -i : i;
                }
                return std::abs(as_complex(v));
            }
            if (fn == "re") return as_complex(v).real();
            if (fn == "im") return as_complex(v).imag();
            if (fn == "conj") return std::conj(as_complex(v));
            if (fn == "expi") return std::exp(std::complex<double>(0.0, 1.0) * as_complex(v));
            if (fn == "exp") {
                if (kind_of(v) == ValueKind::Complex) return std::exp(as_complex(v));
                return std::exp(as_real(v));
            }
            if (fn == "sqrt") {
                if (kind_of(v) == ValueKind::Complex) return std::sqrt(as_complex(v));
                double x = as_real(v);
                if (x < 0) return std::sqrt(std::complex<double>(x, 0.0));
                return std::sqrt(x);
            }
            if (fn == "cos") return std::cos(real_arg(v, fn));
            if (fn == "sin") return std::sin(real_arg(v, fn));
            if (fn == "tan") return std::tan(real_arg(v, fn));
            if (fn == "log") {
                double x = real_arg(v, fn);
                if (x <= 0) fail(ErrorKind::OutOfRange, "log of non-positive value");
                return std::log(x);
            }
            if (fn == "floor" || fn == "ceil") {
                double x = real_arg(v, fn);
                double r = fn == "floor" ? std::floor(x) : std::ceil(x);
                return static_cast<std::int64_t>(r);
            }
            fail(ErrorKind::UnknownSymbol, "unknown function " + fn);
        }

        const BitArray& bit_array(const ClassicalState& sigma, const std::string& name) {
            const Value& v = sigma.at(name);
            auto b = std::get_if<BitArray>(&v);
            if (!b) fail(ErrorKind::Type, name + " is not a bit array");
            return *b;
        }

    }  // namespace

    ExprPtr lit(Value v) {
        Expr e;
        e.kind = ExprKind::Literal;
        e.value = std::move(v);
        return make(std::move(e));
    }
    ExprPtr var(std::string name) {
        Expr e;
        e.kind = ExprKind::Var;
        e.name = std::move(name);
        return make(std::move(e));
    }
    ExprPtr unary(UnaryOp op, ExprPtr a) {
        Expr e;
        e.kind = ExprKind::Unary;
        e.unary = op;
        e.args = {std::move(a)};
        return make(std::move(e));
    }
    ExprPtr binary(BinaryOp op, ExprPtr a, ExprPtr b) {
        Expr e;
        e.kind = ExprKind::Binary;
        e.binary = op;
        e.args = {std::move(a), std::move(b)};
        return make(std::move(e));
    }
    ExprPtr call(std::string fn, std::vector<ExprPtr> args) {
        Expr e;
        e.kind = ExprKind::Call;
        e.name = std::move(fn);
        e.args = std::move(args);
        return make(std::move(e));
    }
    ExprPtr index(std::string array, ExprPtr k) {
        Expr e;
        e.kind = ExprKind::Index;
        e.name = std::move(array);
        e.args = {std::move(k)};
        return make(std::move(e));
    }
    ExprPtr binfrac(std::string array, ExprPtr k, ExprPtr l) {
        Expr e;
        e.kind = ExprKind::BinFrac;
        e.name = std::move(array);
        e.args = {std::move(k), std::move(l)};
        return make(std::move(e));
    }
    ExprPtr quantified(Quantifier q, std::string bound, ClassicalType type, ExprPtr body) {
        Expr e;
        e.kind = ExprKind::Quantifier;
        e.quant = q;
        e.name = std::move(bound);
        e.bound_type = std::move(type);
        e.args = {std::move(body)};
        return make(std::move(e));
    }

    ExprPtr conj(ExprPtr a, ExprPtr b) { return binary(BinaryOp::And, std::move(a), std::move(b)); }
    ExprPtr disj(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Or, std::move(a), std::move(b)); }
    ExprPtr negate(ExprPtr a) { return unary(UnaryOp::Not, std::move(a)); }
    ExprPtr truth() { return lit(true); }
    ExprPtr falsity() { return lit(false); }

    int precedence(BinaryOp op) {
        switch (op) {
            case BinaryOp::Implies: return 1;
            case BinaryOp::Or: return 2;
            case BinaryOp::And: return 3;
            case BinaryOp::Eq:
            case BinaryOp::Ne:
            case BinaryOp::Lt:
            case BinaryOp::Le:
            case BinaryOp::Gt:
            case BinaryOp::Ge: return 5;
            case BinaryOp::Add:
            case BinaryOp::Sub: return 6;
            case BinaryOp::Mul:
            case BinaryOp::Div:
            case BinaryOp::IntDiv:
            case BinaryOp::Mod: return 7;
            case BinaryOp::Pow: return 9;
        }
        return 0;
    }

    const char* op_text(BinaryOp op) {
        switch (op) {
            case BinaryOp::Add: return "+";
            case BinaryOp::Sub: return "-";
            case BinaryOp::Mul: return "*";
            case BinaryOp::Div: return "/";
            case BinaryOp::IntDiv: return "div";
            case BinaryOp::Mod: return "mod";
            case BinaryOp::Pow: return "^";
            case BinaryOp::Eq: return "=";
            case BinaryOp::Ne: return "!=";
            case BinaryOp::Lt: return "<";
            case BinaryOp::Le: return "<=";
            case BinaryOp::Gt: return ">";
            case BinaryOp::Ge: return ">=";
            case BinaryOp::And: return "&&";
            case BinaryOp::Or: return "||";
            case BinaryOp::Implies: return "->";
        }
        return "?";
    }

    bool is_builtin_function(const std::string& name) {
        static const std::set<std::string> fns = {"pi",   "min", "max", "abs", "re",  "im",
                                                  "conj", "expi", "exp", "sqrt", "cos", "sin",
                                                  "tan",  "log", "floor", "ceil"};
        return fns.count(name) > 0;
    }

    Value eval_expr(const ClassicalState& sigma, const Expr& e) {
        switch (e.kind) {
            case ExprKind::Literal: return e.value;
            case ExprKind::Var: return sigma.at(e.name);
            case ExprKind::Unary: {
                Value v = eval_expr(sigma, *e.args[0]);
                if (e.unary == UnaryOp::Not) return !as_bool(v);
                require_numeric(v, "negation");
                switch (kind_of(v)) {
                    case ValueKind::Bool:
                    case ValueKind::Int: return checked_sub(0, as_int(v));
                    case ValueKind::Real: return -std::get<double>(v);
                    default: return -as_complex(v);
                }
            }
            case ExprKind::Binary: {
                auto op = e.binary;
                if (op == BinaryOp::And) {
                    if (!as_bool(eval_expr(sigma, *e.args[0]))) return false;
                    return as_bool(eval_expr(sigma, *e.args[1]));
                }
                if (op == BinaryOp::Or) {
                    if (as_bool(eval_expr(sigma, *e.args[0]))) return true;
                    return as_bool(eval_expr(sigma, *e.args[1]));
                }
                if (op == BinaryOp::Implies) {
                    if (!as_bool(eval_expr(sigma, *e.args[0]))) return true;
                    return as_bool(eval_expr(sigma, *e.args[1]));
                }
                Value a = eval_expr(sigma, *e.args[0]);
                Value b = eval_expr(sigma, *e.args[1]);
                if (precedence(op) == 5) return compare(op, a, b);
                return arith(op, a, b);
            }
            case ExprKind::Call: {
                std::vector<Value> args;
                args.reserve(e.args.size());
                for (const auto& a : e.args) args.push_back(eval_expr(sigma, *a));
                return call_builtin(e.name, args);
            }
            case ExprKind::Index: {
                const BitArray& b = bit_array(sigma, e.name);
                return b.at(as_int(eval_expr(sigma, *e.args[0])));
            }
            case ExprKind::BinFrac: {
                const BitArray& b = bit_array(sigma, e.name);
                auto k = as_int(eval_expr(sigma, *e.args[0]));
                auto l = as_int(eval_expr(sigma, *e.args[1]));
                double acc = 0.0;
                for (std::int64_t r = k; r <= l; ++r)
                    if (b.at(r)) acc += std::ldexp(1.0, static_cast<int>(k - r - 1));
                return acc;
            }
            case ExprKind::Quantifier: {
                if (!e.bound_type.enumerable())
                    fail(ErrorKind::InfiniteQuantifierDomain,
                         "quantifier over " + e.bound_type.to_string() + " cannot be decided");
                ClassicalState ext = sigma;
                bool forall = e.quant == Quantifier::Forall;
                for (const Value& v : e.bound_type.values()) {
                    ext.set(e.name, v);
                    bool r = as_bool(eval_expr(ext, *e.args[0]));
                    if (forall && !r) return false;
                    if (!forall && r) return true;
                }
                return forall;
            }
        }
        fail(ErrorKind::Type, "malformed expression");
    }

    bool satisfies(const ClassicalState& sigma, const Expr& phi) { return as_bool(eval_expr(sigma, phi)); }

    void collect_free_vars(const Expr& e, std::set<std::string>& out) {
        switch (e.kind) {
            case ExprKind::Literal: return;
            case ExprKind::Var: out.insert(e.name); return;
            case ExprKind::Index:
            case ExprKind::BinFrac: out.insert(e.name); break;
            case ExprKind::Quantifier: {
                std::set<std::string> inner;
                collect_free_vars(*e.args[0], inner);
                inner.erase(e.name);
                out.insert(inner.begin(), inner.end());
                return;
            }
            default: break;
        }
        for (const auto& a : e.args) collect_free_vars(*a, out);
    }

    std::set<std::string> free_vars(const Expr& e) {
        std::set<std::string> out;
        collect_free_vars(e, out);
        return out;
    }

    static std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
        for (int i = 1;; ++i) {
            std::string n = base + "_" + std::to_string(i);
            if (!avoid.count(n)) return n;
        }
    }

    static std::string rename_array(const std::string& name, const std::string& x, const ExprPtr& r) {
        if (name != x) return name;
        if (r->kind != ExprKind::Var)
            fail(ErrorKind::Type, "bit array " + x + " can only be replaced by another array variable");
        return r->name;
    }

    ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& r) {
        switch (e->kind) {
            case ExprKind::Literal: return e;
            case ExprKind::Var: return e->name == x ? r : e;
            case ExprKind::Quantifier: {
                if (e->name == x) return e;
                std::set<std::string> fr = free_vars(*r);
                if (!fr.count(e->name))
                    return quantified(e->quant, e->name, e->bound_type, subst(e->args[0], x, r));
                std::set<std::string> avoid = fr;
                collect_free_vars(*e->args[0], avoid);
                avoid.insert(x);
                std::string fresh = fresh_name(e->name, avoid);
                ExprPtr body = subst(e->args[0], e->name, var(fresh));
                return quantified(e->quant, fresh, e->bound_type, subst(body, x, r));
            }
            default: break;
        }
        Expr copy = *e;
        for (auto& a : copy.args) a = subst(a, x, r);
        if (e->kind == ExprKind::Index || e->kind == ExprKind::BinFrac) copy.name = rename_array(e->name, x, r);
        return make(std::move(copy));
    }

    bool structural_equal(const Expr& a, const Expr& b) {
        if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
        switch (a.kind) {
            case ExprKind::Literal:
                if (!(a.value == b.value)) return false;
                break;
            case ExprKind::Var:
            case ExprKind::Call:
            case ExprKind::Index:
            case ExprKind::BinFrac:
                if (a.name != b.name) return false;
                break;
            case ExprKind::Unary:
                if (a.unary != b.unary) return false;
                break;
            case ExprKind::Binary:
                if (a.binary != b.binary) return false;
                break;
            case ExprKind::Quantifier:
                if (a.quant != b.quant || a.name != b.name || !(a.bound_type == b.bound_type)) return false;
                break;
        }
        for (std::size_t i = 0; i < a.args.size(); ++i)
            if (!structural_equal(*a.args[i], *b.args[i])) return false;
        return true;
    }

    namespace {

        void flatten(const ExprPtr& e, BinaryOp op, std::vector<ExprPtr>& out) {
            if (e->kind == ExprKind::Binary && e->binary == op) {
                flatten(e->args[0], op, out);
                flatten(e->args[1], op, out);
            } else {
                out.push_back(e);
            }
        }

        ExprPtr canon(const ExprPtr& e, std::map<std::string, std::string>& names, int depth) {
            switch (e->kind) {
                case ExprKind::Literal: return e;
                case ExprKind::Var: {
                    auto it = names.find(e->name);
                    return it == names.end() ? e : var(it->second);
                }
                case ExprKind::Quantifier: {
                    std::string fresh = "%" + std::to_string(depth);
                    auto saved = names;
                    names[e->name] = fresh;
                    ExprPtr body = canon(e->args[0], names, depth + 1);
                    names = saved;
                    return quantified(e->quant, fresh, e->bound_type, body);
                }
                case ExprKind::Binary:
                    if (e->binary == BinaryOp::And || e->binary == BinaryOp::Or) {
                        bool is_and = e->binary == BinaryOp::And;
                        std::vector<ExprPtr> parts, kept;
                        flatten(e, e->binary, parts);
                        for (const auto& p : parts) {
                            ExprPtr c = canon(p, names, depth);
                            if (c->kind == ExprKind::Literal && kind_of(c->value) == ValueKind::Bool &&
                                std::get<bool>(c->value) == is_and)
                                continue;
                            std::vector<ExprPtr> sub;
                            flatten(c, e->binary, sub);
                            kept.insert(kept.end(), sub.begin(), sub.end());
                        }
                        if (kept.empty()) return lit(is_and);
                        ExprPtr acc = kept[0];
                        for (std::size_t i = 1; i < kept.size(); ++i) acc = binary(e->binary, acc, kept[i]);
                        return acc;
                    }
                    break;
                default: break;
            }
            Expr copy = *e;
            for (auto& a : copy.args) a = canon(a, names, depth);
            if (e->kind == ExprKind::Index || e->kind == ExprKind::BinFrac) {
                auto it = names.find(e->name);
                if (it != names.end()) copy.name = it->second;
            }
            return make(std::move(copy));
        }

        std::string literal_text(const Value& v) {
            switch (kind_of(v)) {
                case ValueKind::Int: {
                    auto i = std::get<std::int64_t>(v);
                    return i < 0 ? "(" + std::to_string(i) + ")" : std::to_string(i);
                }
                case ValueKind::Real: {
                    double r = std::get<double>(v);
                    std::string s = value_to_string(v);
                    return r < 0 || std::signbit(r) ? "(" + s + ")" : s;
                }
                case ValueKind::Complex: {
                    auto c = std::get<std::complex<double>>(v);
                    if (c.real() == 0.0 && !std::signbit(c.real()) && c.imag() >= 0.0)
                        return value_to_string(Value(c.imag())) + "i";
                    return value_to_string(v);
                }
                default: return value_to_string(v);
            }
        }

        int expr_prec(const Expr& e) {
            switch (e.kind) {
                case ExprKind::Quantifier: return 0;
                case ExprKind::Unary: return e.unary == UnaryOp::Not ? 4 : 8;
                case ExprKind::Binary: return precedence(e.binary);
                default: return 10;
            }
        }

        std::string print(const Expr& e, int ctx) {
            std::string s;
            switch (e.kind) {
                case ExprKind::Literal: s = literal_text(e.value); break;
                case ExprKind::Var: s = e.name; break;
                case ExprKind::Unary:
                    if (e.unary == UnaryOp::Not)
                        s = "!" + print(*e.args[0], 4);
                    else
                        s = "-(" + print(*e.args[0], 0) + ")";
                    break;
                case ExprKind::Binary: {
                    int p = precedence(e.binary);
                    int lctx = p, rctx = p + 1;
                    if (e.binary == BinaryOp::Implies) {
                        lctx = p + 1;
                        rctx = p;
                    } else if (e.binary == BinaryOp::Pow) {
                        lctx = 10;
                        rctx = 8;
                    } else if (p == 5) {
                        lctx = rctx = 6;
                    }
                    s = print(*e.args[0], lctx) + " " + op_text(e.binary) + " " + print(*e.args[1], rctx);
                    break;
                }
                case ExprKind::Call:
                    if (e.args.empty() && e.name == "pi") {
                        s = "pi";
                    } else {
                        s = e.name + "(";
                        for (std::size_t i = 0; i < e.args.size(); ++i) {
                            if (i) s += ", ";
                            s += print(*e.args[i], 0);
                        }
                        s += ")";
                    }
                    break;
                case ExprKind::Index: s = e.name + "[" + print(*e.args[0], 0) + "]"; break;
                case ExprKind::BinFrac:
                    s = "0." + e.name + "[" + print(*e.args[0], 0) + ":" + print(*e.args[1], 0) + "]";
                    break;
                case ExprKind::Quantifier:
                    s = std::string(e.quant == Quantifier::Forall ? "forall " : "exists ") + e.name + " : " +
                        e.bound_type.to_string() + " . " + print(*e.args[0], 0);
                    break;
            }
            if (expr_prec(e) < ctx) return "(" + s + ")";
            return s;
        }

    }  // namespace

    ExprPtr canonical(const ExprPtr& e) {
        std::map<std::string, std::string> names;
        return canon(e, names, 0);
    }

    bool same_expr(const ExprPtr& a, const ExprPtr& b) {
        if (!a || !b) return !a && !b;
        return structural_equal(*canonical(a), *canonical(b));
    }

    std::string to_string(const Expr& e) { return print(e, 0); }

    std::optional<ValueKind> infer_kind(const Expr& e, const Typing& typing) {
        auto from_type = [](const ClassicalType& t) -> ValueKind {
            switch (t.kind) {
                case TypeKind::Bool: return ValueKind::Bool;
                case TypeKind::Int:
                case TypeKind::Enum: return ValueKind::Int;
                case TypeKind::Real: return ValueKind::Real;
                case TypeKind::Complex: return ValueKind::Complex;
                case TypeKind::Bits: return ValueKind::Bits;
            }
            return ValueKind::Int;
        };
        switch (e.kind) {
            case ExprKind::Literal: return kind_of(e.value);
            case ExprKind::Var: {
                auto t = typing.find(e.name);
                if (!t) return std::nullopt;
                return from_type(*t);
            }
            case ExprKind::Unary: {
                if (e.unary == UnaryOp::Not) return ValueKind::Bool;
                auto k = infer_kind(*e.args[0], typing);
                if (k == ValueKind::Bool) return ValueKind::Int;
                return k;
            }
            case ExprKind::Binary: {
                auto op = e.binary;
                if (precedence(op) <= 5) return ValueKind::Bool;
                if (op == BinaryOp::IntDiv || op == BinaryOp::Mod) return ValueKind::Int;
                auto a = infer_kind(*e.args[0], typing), b = infer_kind(*e.args[1], typing);
                if (!a || !b) return std::nullopt;
                if (*a == ValueKind::Complex || *b == ValueKind::Complex) return ValueKind::Complex;
                if (op == BinaryOp::Div) return ValueKind::Real;
                auto intish = [](ValueKind k) { return k == ValueKind::Int || k == ValueKind::Bool; };
                if (intish(*a) && intish(*b)) {
                    if (op == BinaryOp::Pow) return std::nullopt;
                    return ValueKind::Int;
                }
                return ValueKind::Real;
            }
            case ExprKind::Call: {
                const auto& f = e.name;
                if (f == "expi" || f == "conj") return ValueKind::Complex;
                if (f == "floor" || f == "ceil") return ValueKind::Int;
                if (f == "min" || f == "max") {
                    auto a = infer_kind(*e.args[0], typing), b = infer_kind(*e.args[1], typing);
                    if (a == ValueKind::Int && b == ValueKind::Int) return ValueKind::Int;
                    return ValueKind::Real;
                }
                if (f == "abs" && !e.args.empty() && infer_kind(*e.args[0], typing) == ValueKind::Int)
                    return ValueKind::Int;
                return ValueKind::Real;
            }
            case ExprKind::Index: return ValueKind::Bool;
            case ExprKind::BinFrac: return ValueKind::Real;
            case ExprKind::Quantifier: return ValueKind::Bool;
        }
        return std::nullopt;
    }

}  // namespace qhl::classical
