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

#include "qhl/syntax/program.hpp"

#include <algorithm>

#include "qhl/error.hpp"

namespace qhl::syntax {

    using namespace qhl::classical;

    bool same_qvar(const SubscriptedVar& a, const SubscriptedVar& b) {
        if (a.base != b.base || a.subscripts.size() != b.subscripts.size()) return false;
        for (std::size_t i = 0; i < a.subscripts.size(); ++i)
            if (!same_expr(a.subscripts[i], b.subscripts[i])) return false;
        return true;
    }

    bool same_qvars(const std::vector<SubscriptedVar>& a, const std::vector<SubscriptedVar>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!same_qvar(a[i], b[i])) return false;
        return true;
    }

    std::string to_string(const SubscriptedVar& q) {
        if (q.subscripts.empty()) return q.base;
        std::string s = q.base + "[";
        for (std::size_t i = 0; i < q.subscripts.size(); ++i) {
            if (i) s += ", ";
            s += classical::to_string(*q.subscripts[i]);
        }
        return s + "]";
    }

    std::string to_string(const std::vector<SubscriptedVar>& qs) {
        std::string s = "[";
        for (std::size_t i = 0; i < qs.size(); ++i) {
            if (i) s += ", ";
            s += to_string(qs[i]);
        }
        return s + "]";
    }

    SubscriptedVar subst_qvar(const SubscriptedVar& q, const std::string& x, const ExprPtr& r) {
        SubscriptedVar out{q.base, {}};
        for (const auto& s : q.subscripts) out.subscripts.push_back(subst(s, x, r));
        return out;
    }

    void collect_vars(const SubscriptedVar& q, std::set<std::string>& out) {
        for (const auto& s : q.subscripts) collect_free_vars(*s, out);
    }

    static ProgramPtr make(Program p) { return std::make_shared<const Program>(std::move(p)); }

    ProgramPtr skip() { return make(Program{}); }

    ProgramPtr assign(std::string x, ExprPtr e) {
        Program p;
        p.kind = Cmd::Assign;
        p.name = std::move(x);
        p.expr = std::move(e);
        return make(std::move(p));
    }

    ProgramPtr init(SubscriptedVar q) {
        Program p;
        p.kind = Cmd::Init;
        p.targets = {std::move(q)};
        return make(std::move(p));
    }

    ProgramPtr gate(std::string name, std::vector<ExprPtr> params, std::vector<SubscriptedVar> targets) {
        Program p;
        p.kind = Cmd::Gate;
        p.name = std::move(name);
        p.params = std::move(params);
        p.targets = std::move(targets);
        return make(std::move(p));
    }

    ProgramPtr measure(std::string x, std::string symbol, std::vector<SubscriptedVar> targets) {
        Program p;
        p.kind = Cmd::Measure;
        p.name = std::move(x);
        p.symbol = std::move(symbol);
        p.targets = std::move(targets);
        return make(std::move(p));
    }

    ProgramPtr seq(ProgramPtr a, ProgramPtr b) {
        Program p;
        p.kind = Cmd::Seq;
        p.first = std::move(a);
        p.second = std::move(b);
        return make(std::move(p));
    }

    ProgramPtr cond(ExprPtr b, ProgramPtr then_branch, ProgramPtr else_branch) {
        Program p;
        p.kind = Cmd::If;
        p.expr = std::move(b);
        p.first = std::move(then_branch);
        p.second = std::move(else_branch);
        return make(std::move(p));
    }

    ProgramPtr loop(ExprPtr b, ProgramPtr body) {
        Program p;
        p.kind = Cmd::While;
        p.expr = std::move(b);
        p.first = std::move(body);
        return make(std::move(p));
    }

    ProgramPtr sequence(const std::vector<ProgramPtr>& cmds) {
        if (cmds.empty()) return skip();
        ProgramPtr acc = cmds.back();
        for (std::size_t i = cmds.size() - 1; i-- > 0;) acc = seq(cmds[i], acc);
        return acc;
    }

    static bool same_exprs(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!same_expr(a[i], b[i])) return false;
        return true;
    }

    bool same_program(const Program& a, const Program& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
            case Cmd::Skip: return true;
            case Cmd::Assign: return a.name == b.name && same_expr(a.expr, b.expr);
            case Cmd::Init: return same_qvars(a.targets, b.targets);
            case Cmd::Gate:
                return a.name == b.name && same_exprs(a.params, b.params) && same_qvars(a.targets, b.targets);
            case Cmd::Measure:
                return a.name == b.name && a.symbol == b.symbol && same_qvars(a.targets, b.targets);
            case Cmd::Seq: return same_program(*a.first, *b.first) && same_program(*a.second, *b.second);
            case Cmd::If:
                return same_expr(a.expr, b.expr) && same_program(*a.first, *b.first) &&
                       same_program(*a.second, *b.second);
            case Cmd::While: return same_expr(a.expr, b.expr) && same_program(*a.first, *b.first);
        }
        return false;
    }

    static std::string qvar_list(const std::vector<SubscriptedVar>& qs) {
        std::string s = "[";
        for (std::size_t i = 0; i < qs.size(); ++i) {
            if (i) s += ",";
            s += to_string(qs[i]);
        }
        return s + "]";
    }

    std::string to_string(const Program& p) {
        switch (p.kind) {
            case Cmd::Skip: return "skip";
            case Cmd::Assign: return p.name + " := " + classical::to_string(*p.expr);
            case Cmd::Init: return to_string(p.targets[0]) + " := |0>";
            case Cmd::Gate: {
                std::string s = p.name;
                if (!p.params.empty()) {
                    s += "(";
                    for (std::size_t i = 0; i < p.params.size(); ++i) {
                        if (i) s += ", ";
                        s += classical::to_string(*p.params[i]);
                    }
                    s += ")";
                }
                return s + qvar_list(p.targets);
            }
            case Cmd::Measure: return p.name + " := " + p.symbol + qvar_list(p.targets);
            case Cmd::Seq: {
                std::string a = to_string(*p.first);
                if (p.first->kind == Cmd::Seq) a = "(" + a + ")";
                return a + "; " + to_string(*p.second);
            }
            case Cmd::If:
                return "if " + classical::to_string(*p.expr) + " then " + to_string(*p.first) + " else " +
                       to_string(*p.second) + " fi";
            case Cmd::While: return "while " + classical::to_string(*p.expr) + " do " + to_string(*p.first) + " od";
        }
        return "?";
    }

    std::size_t command_count(const Program& p) {
        switch (p.kind) {
            case Cmd::Seq: return command_count(*p.first) + command_count(*p.second);
            case Cmd::If: return 1 + command_count(*p.first) + command_count(*p.second);
            case Cmd::While: return 1 + command_count(*p.first);
            default: return 1;
        }
    }

    ExprPtr dist_formula(const std::vector<SubscriptedVar>& qs) {
        std::vector<ExprPtr> clauses;
        for (std::size_t i = 0; i < qs.size(); ++i)
            for (std::size_t j = i + 1; j < qs.size(); ++j) {
                const auto& a = qs[i];
                const auto& b = qs[j];
                if (a.base != b.base) continue;
                if (a.subscripts.empty() || b.subscripts.empty() || a.subscripts.size() != b.subscripts.size()) {
                    clauses.push_back(falsity());
                    continue;
                }
                ExprPtr d;
                for (std::size_t l = 0; l < a.subscripts.size(); ++l) {
                    ExprPtr ne = binary(BinaryOp::Ne, a.subscripts[l], b.subscripts[l]);
                    d = d ? disj(d, ne) : ne;
                }
                clauses.push_back(d);
            }
        if (clauses.empty()) return truth();
        ExprPtr acc = clauses[0];
        for (std::size_t i = 1; i < clauses.size(); ++i) acc = conj(acc, clauses[i]);
        return acc;
    }

    QVarRef qvar_ref(const SubscriptedVar& q) {
        QVarRef r{q.base, std::vector<Value>{}};
        ClassicalState empty;
        for (const auto& s : q.subscripts) {
            if (!free_vars(*s).empty()) return QVarRef{q.base, std::nullopt};
            try {
                r.index->push_back(eval_expr(empty, *s));
            } catch (const Error&) {
                return QVarRef{q.base, std::nullopt};
            }
        }
        return r;
    }

    bool may_overlap(const QVarRef& a, const QVarRef& b) {
        if (a.base != b.base) return false;
        if (!a.index || !b.index) return true;
        if (a.index->size() != b.index->size()) return true;
        for (std::size_t i = 0; i < a.index->size(); ++i)
            if (!semantic_equal((*a.index)[i], (*b.index)[i])) return false;
        return true;
    }

    static void collect_qv(const Program& p, std::vector<QVarRef>& out) {
        switch (p.kind) {
            case Cmd::Init:
            case Cmd::Gate:
            case Cmd::Measure:
                for (const auto& t : p.targets) {
                    QVarRef r = qvar_ref(t);
                    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
                }
                break;
            case Cmd::Seq:
            case Cmd::If:
                collect_qv(*p.first, out);
                collect_qv(*p.second, out);
                break;
            case Cmd::While: collect_qv(*p.first, out); break;
            default: break;
        }
    }

    std::vector<QVarRef> quantum_vars(const Program& p) {
        std::vector<QVarRef> out;
        collect_qv(p, out);
        return out;
    }

    static void collect_cv(const Program& p, std::set<std::string>& out) {
        for (const auto& t : p.targets) collect_vars(t, out);
        for (const auto& e : p.params) collect_free_vars(*e, out);
        if (p.expr) collect_free_vars(*p.expr, out);
        if (p.kind == Cmd::Assign || p.kind == Cmd::Measure) out.insert(p.name);
        if (p.first) collect_cv(*p.first, out);
        if (p.second) collect_cv(*p.second, out);
    }

    std::set<std::string> classical_vars(const Program& p) {
        std::set<std::string> out;
        collect_cv(p, out);
        return out;
    }

    static void collect_modified(const Program& p, std::set<std::string>& out) {
        if (p.kind == Cmd::Assign || p.kind == Cmd::Measure) out.insert(p.name);
        if (p.first) collect_modified(*p.first, out);
        if (p.second) collect_modified(*p.second, out);
    }

    std::set<std::string> modified_vars(const Program& p) {
        std::set<std::string> out;
        collect_modified(p, out);
        return out;
    }

}  // namespace qhl::syntax
