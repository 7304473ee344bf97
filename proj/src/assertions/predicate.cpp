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

#include "qhl/assertions/predicate.hpp"

#include <map>

#include "qhl/error.hpp"

namespace qhl::assertions {

    using classical::Expr;
    using classical::ExprKind;
    using syntax::Parser;
    using syntax::Tok;

    StatePtr ket(ExprPtr value, SubscriptedVar q) {
        auto s = std::make_shared<FormalState>();
        s->kind = StateKind::Ket;
        s->value = std::move(value);
        s->var = std::move(q);
        return s;
    }

    StatePtr tensor_state(std::vector<StatePtr> factors) {
        if (factors.size() == 1) return factors[0];
        auto s = std::make_shared<FormalState>();
        s->kind = StateKind::Tensor;
        s->parts = std::move(factors);
        return s;
    }

    StatePtr superpose(std::vector<ExprPtr> coefs, std::vector<StatePtr> terms) {
        if (coefs.size() != terms.size()) fail(ErrorKind::ArityMismatch, "superposition needs one coefficient per term");
        auto s = std::make_shared<FormalState>();
        s->kind = StateKind::Sum;
        s->coefs = std::move(coefs);
        s->parts = std::move(terms);
        return s;
    }

    StatePtr apply_gate(std::string gate, std::vector<ExprPtr> params, std::vector<SubscriptedVar> targets,
                        StatePtr operand) {
        auto s = std::make_shared<FormalState>();
        s->kind = StateKind::Apply;
        s->gate = std::move(gate);
        s->params = std::move(params);
        s->targets = std::move(targets);
        s->parts = {std::move(operand)};
        return s;
    }

    PredPtr atomic(std::string name, std::vector<ExprPtr> params, std::vector<SubscriptedVar> targets) {
        auto a = std::make_shared<Predicate>();
        a->kind = PredKind::Atomic;
        a->name = std::move(name);
        a->params = std::move(params);
        a->targets = std::move(targets);
        return a;
    }

    PredPtr projector(StatePtr s) {
        auto a = std::make_shared<Predicate>();
        a->kind = PredKind::StateProj;
        a->state = std::move(s);
        return a;
    }

    PredPtr negation(PredPtr b) {
        auto a = std::make_shared<Predicate>();
        a->kind = PredKind::Neg;
        a->args = {std::move(b)};
        return a;
    }

    PredPtr tensor(PredPtr l, PredPtr r) {
        auto a = std::make_shared<Predicate>();
        a->kind = PredKind::Tensor;
        a->args = {std::move(l), std::move(r)};
        return a;
    }

    PredPtr kraus(std::string name, std::vector<ExprPtr> params, std::vector<SubscriptedVar> targets,
                  std::vector<PredPtr> branches) {
        if (branches.empty()) fail(ErrorKind::ArityMismatch, "Kraus application " + name + " needs a branch");
        auto a = std::make_shared<Predicate>();
        a->kind = PredKind::Kraus;
        a->name = std::move(name);
        a->params = std::move(params);
        a->targets = std::move(targets);
        a->args = std::move(branches);
        return a;
    }

    PredPtr identity_predicate() { return atomic("I", {}, {}); }

    namespace {

        void add_unique(std::vector<SubscriptedVar>& out, const SubscriptedVar& q) {
            for (const auto& e : out)
                if (syntax::same_qvar(e, q)) return;
            out.push_back(q);
        }

        void collect_sig(const FormalState& s, std::vector<SubscriptedVar>& out) {
            if (s.kind == StateKind::Ket) {
                add_unique(out, s.var);
                return;
            }
            for (const auto& p : s.parts) collect_sig(*p, out);
        }

        void collect_sig(const Predicate& a, std::vector<SubscriptedVar>& out) {
            switch (a.kind) {
                case PredKind::Atomic:
                    for (const auto& q : a.targets) add_unique(out, q);
                    return;
                case PredKind::StateProj: collect_sig(*a.state, out); return;
                case PredKind::Neg:
                case PredKind::Tensor:
                    for (const auto& b : a.args) collect_sig(*b, out);
                    return;
                case PredKind::Kraus:
                    for (const auto& b : a.args) collect_sig(*b, out);
                    for (const auto& q : a.targets) add_unique(out, q);
                    return;
            }
        }

        void expr_vars(const ExprPtr& e, std::set<std::string>& out) {
            if (e) classical::collect_free_vars(*e, out);
        }

        void collect_cv(const FormalState& s, std::set<std::string>& out) {
            expr_vars(s.value, out);
            if (s.kind == StateKind::Ket) syntax::collect_vars(s.var, out);
            for (const auto& c : s.coefs) expr_vars(c, out);
            for (const auto& p : s.params) expr_vars(p, out);
            for (const auto& q : s.targets) syntax::collect_vars(q, out);
            for (const auto& p : s.parts) collect_cv(*p, out);
        }

        void collect_cv(const Predicate& a, std::set<std::string>& out) {
            for (const auto& p : a.params) expr_vars(p, out);
            for (const auto& q : a.targets) syntax::collect_vars(q, out);
            if (a.state) collect_cv(*a.state, out);
            for (const auto& b : a.args) collect_cv(*b, out);
        }

        ExprPtr subst_opt(const ExprPtr& e, const std::string& x, const ExprPtr& r) {
            return e ? classical::subst(e, x, r) : e;
        }

        std::vector<ExprPtr> subst_all(const std::vector<ExprPtr>& es, const std::string& x, const ExprPtr& r) {
            std::vector<ExprPtr> out;
            for (const auto& e : es) out.push_back(subst_opt(e, x, r));
            return out;
        }

        std::vector<SubscriptedVar> subst_qs(const std::vector<SubscriptedVar>& qs, const std::string& x,
                                             const ExprPtr& r) {
            std::vector<SubscriptedVar> out;
            for (const auto& q : qs) out.push_back(syntax::subst_qvar(q, x, r));
            return out;
        }

        bool same_opt(const ExprPtr& a, const ExprPtr& b) {
            if (!a || !b) return !a && !b;
            return classical::same_expr(a, b);
        }

        bool same_list(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
            if (a.size() != b.size()) return false;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (!same_opt(a[i], b[i])) return false;
            return true;
        }

        std::string expr_list(const std::vector<ExprPtr>& es) {
            std::string s;
            for (std::size_t i = 0; i < es.size(); ++i) s += (i ? ", " : "") + classical::to_string(*es[i]);
            return s;
        }

        std::string call_suffix(const std::vector<ExprPtr>& params, const std::vector<SubscriptedVar>& targets) {
            std::string s;
            if (!params.empty()) s += "(" + expr_list(params) + ")";
            if (!targets.empty()) s += syntax::to_string(targets);
            return s;
        }

        // Ket values are parsed at additive level, so anything looser is parenthesized.
        std::string ket_value(const Expr& e) {
            bool loose = e.kind == ExprKind::Quantifier ||
                         (e.kind == ExprKind::Binary && classical::precedence(e.binary) < 6) ||
                         (e.kind == ExprKind::Unary && e.unary == classical::UnaryOp::Not);
            std::string s = classical::to_string(e);
            return loose ? "(" + s + ")" : s;
        }

        std::string state_text(const FormalState& s, bool in_product);

        std::string factor_text(const FormalState& s) {
            if (s.kind == StateKind::Sum) return "(" + state_text(s, false) + ")";
            return state_text(s, true);
        }

        std::string state_text(const FormalState& s, bool in_product) {
            switch (s.kind) {
                case StateKind::Ket: return "|" + ket_value(*s.value) + ">_" + syntax::to_string(s.var);
                case StateKind::Tensor: {
                    std::string out;
                    for (std::size_t i = 0; i < s.parts.size(); ++i) {
                        // nested products are grouped so the printed form keeps its shape
                        const auto& f = *s.parts[i];
                        std::string t = f.kind == StateKind::Tensor ? "(" + state_text(f, false) + ")" : factor_text(f);
                        out += (i ? " * " : "") + t;
                    }
                    return in_product ? "(" + out + ")" : out;
                }
                case StateKind::Sum: {
                    std::string out;
                    for (std::size_t i = 0; i < s.parts.size(); ++i) {
                        const ExprPtr& c = s.coefs[i];
                        ExprPtr shown = c;
                        if (i) {
                            if (c && c->kind == ExprKind::Unary && c->unary == classical::UnaryOp::Neg) {
                                out += " - ";
                                shown = c->args[0];
                            } else {
                                out += " + ";
                            }
                        }
                        if (shown) out += "(" + classical::to_string(*shown) + ") ";
                        const auto& t = *s.parts[i];
                        out += t.kind == StateKind::Tensor ? state_text(t, false) : factor_text(t);
                    }
                    return out;
                }
                case StateKind::Apply:
                    return "apply " + s.gate + call_suffix(s.params, s.targets) + "(" + state_text(*s.parts[0], false) +
                           ")";
            }
            return {};
        }

        std::string pred_text(const Predicate& a);

        std::string pred_unary(const Predicate& a) {
            if (a.kind == PredKind::Tensor) return "(" + pred_text(a) + ")";
            return pred_text(a);
        }

        std::string pred_text(const Predicate& a) {
            switch (a.kind) {
                case PredKind::Atomic: return a.name + call_suffix(a.params, a.targets);
                case PredKind::StateProj: return "[" + state_text(*a.state, false) + "]";
                case PredKind::Neg: return "~" + pred_unary(*a.args[0]);
                case PredKind::Tensor: return pred_text(*a.args[0]) + " * " + pred_unary(*a.args[1]);
                case PredKind::Kraus: {
                    std::string out = a.name + call_suffix(a.params, a.targets) + "{";
                    for (std::size_t i = 0; i < a.args.size(); ++i) out += (i ? ", " : "") + pred_text(*a.args[i]);
                    return out + "}";
                }
            }
            return {};
        }

        // ---- parsing ----

        StatePtr state_sum(Parser& p);

        bool starts_state_atom(const Parser& p) {
            return p.at(Tok::Bar) || p.at(Tok::LParen) || p.at_keyword("apply");
        }

        StatePtr state_atom(Parser& p) {
            if (p.accept(Tok::Bar)) {
                ExprPtr v = p.additive();
                p.expect(Tok::Gt, "'>' closing a ket");
                const auto& t = p.peek();
                if (t.kind != Tok::Ident || t.text.size() < 2 || t.text[0] != '_')
                    p.error("expected '_' and a quantum variable after a ket");
                std::string base = t.text.substr(1);
                p.accept(Tok::Ident);
                SubscriptedVar q{base, {}};
                if (p.accept(Tok::LBracket)) {
                    do {
                        q.subscripts.push_back(p.expression());
                    } while (p.accept(Tok::Comma));
                    p.expect(Tok::RBracket, "']'");
                }
                return ket(v, q);
            }
            if (p.accept_keyword("apply")) {
                std::string gate = p.expect(Tok::Ident, "gate name").text;
                std::vector<ExprPtr> params;
                if (p.at(Tok::LParen)) params = p.arguments();
                auto targets = p.qvar_list();
                p.expect(Tok::LParen, "'(' before the state a gate is applied to");
                StatePtr s = state_sum(p);
                p.expect(Tok::RParen, "')'");
                if (const auto* sym = p.symbols()) {
                    if (!sym->is_gate(gate)) p.error("unknown gate " + gate);
                }
                return apply_gate(gate, params, targets, s);
            }
            p.expect(Tok::LParen, "a ket, 'apply' or '('");
            StatePtr s = state_sum(p);
            p.expect(Tok::RParen, "')'");
            return s;
        }

        StatePtr state_product(Parser& p) {
            std::vector<StatePtr> fs{state_atom(p)};
            while (p.accept(Tok::Star)) fs.push_back(state_atom(p));
            return tensor_state(std::move(fs));
        }

        // A parenthesized expression directly followed by a state is a coefficient.
        ExprPtr try_coefficient(Parser& p) {
            if (!p.at(Tok::LParen)) return nullptr;
            auto m = p.mark();
            try {
                p.accept(Tok::LParen);
                ExprPtr c = p.expression();
                if (p.accept(Tok::RParen) && starts_state_atom(p)) return c;
            } catch (const Error&) {
            }
            p.reset(m);
            return nullptr;
        }

        StatePtr state_sum(Parser& p) {
            std::vector<ExprPtr> coefs;
            std::vector<StatePtr> terms;
            bool has_coef = false;
            bool negative = p.accept(Tok::Minus);
            while (true) {
                ExprPtr c = try_coefficient(p);
                if (negative) c = classical::unary(classical::UnaryOp::Neg, c ? c : classical::lit(std::int64_t{1}));
                has_coef = has_coef || c;
                coefs.push_back(c);
                terms.push_back(state_product(p));
                if (p.accept(Tok::Plus)) {
                    negative = false;
                } else if (p.accept(Tok::Minus)) {
                    negative = true;
                } else {
                    break;
                }
            }
            if (terms.size() == 1 && !has_coef) return terms[0];
            return superpose(std::move(coefs), std::move(terms));
        }

        PredPtr pred_tensor(Parser& p);

        PredPtr pred_primary(Parser& p) {
            if (p.accept(Tok::LParen)) {
                PredPtr a = pred_tensor(p);
                p.expect(Tok::RParen, "')'");
                return a;
            }
            if (p.accept(Tok::LBracket)) {
                StatePtr s = state_sum(p);
                p.expect(Tok::RBracket, "']' closing a state projector");
                return projector(s);
            }
            std::string name = p.expect(Tok::Ident, "a predicate").text;
            std::vector<ExprPtr> params;
            std::vector<SubscriptedVar> targets;
            if (p.at(Tok::LParen)) params = p.arguments();
            if (p.at(Tok::LBracket)) targets = p.qvar_list();
            if (p.accept(Tok::LBrace)) {
                std::vector<PredPtr> branches;
                do {
                    branches.push_back(pred_tensor(p));
                } while (p.accept(Tok::Comma));
                p.expect(Tok::RBrace, "'}'");
                return kraus(name, params, targets, branches);
            }
            return atomic(name, params, targets);
        }

        PredPtr pred_unary_parse(Parser& p) {
            if (p.accept(Tok::Tilde)) return negation(pred_unary_parse(p));
            return pred_primary(p);
        }

        PredPtr pred_tensor(Parser& p) {
            PredPtr a = pred_unary_parse(p);
            while (p.accept(Tok::Star)) a = tensor(a, pred_unary_parse(p));
            return a;
        }

        std::vector<ExprPtr> exprs_from_json(const io::json& j, const syntax::SymbolTable* sym) {
            std::vector<ExprPtr> out;
            if (j.is_null()) return out;
            for (const auto& e : j) {
                if (e.is_string()) out.push_back(syntax::parse_expr(e.get<std::string>(), sym));
                else out.push_back(syntax::parse_expr(e.dump(), sym));
            }
            return out;
        }

        std::vector<SubscriptedVar> qvars_from_json(const io::json& j, const syntax::SymbolTable* sym) {
            std::vector<SubscriptedVar> out;
            if (j.is_null()) return out;
            for (const auto& e : j) out.push_back(syntax::parse_qvar(e.get<std::string>(), sym));
            return out;
        }

        io::json exprs_to_json(const std::vector<ExprPtr>& es) {
            io::json out = io::json::array();
            for (const auto& e : es) out.push_back(classical::to_string(*e));
            return out;
        }

        io::json qvars_to_json(const std::vector<SubscriptedVar>& qs) {
            io::json out = io::json::array();
            for (const auto& q : qs) out.push_back(syntax::to_string(q));
            return out;
        }

        std::string kind_of_json(const io::json& j, const char* what) {
            if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
                fail(ErrorKind::Schema, std::string(what) + " object needs a 'kind'");
            return j.at("kind").get<std::string>();
        }

    }  // namespace

    std::vector<SubscriptedVar> sig(const FormalState& s) {
        std::vector<SubscriptedVar> out;
        collect_sig(s, out);
        return out;
    }

    std::vector<SubscriptedVar> sig(const Predicate& a) {
        std::vector<SubscriptedVar> out;
        collect_sig(a, out);
        return out;
    }

    std::set<std::string> cv(const Predicate& a) {
        std::set<std::string> out;
        collect_cv(a, out);
        return out;
    }

    std::set<std::string> cv(const FormalState& s) {
        std::set<std::string> out;
        collect_cv(s, out);
        return out;
    }

    StatePtr subst_state(const StatePtr& s, const std::string& x, const ExprPtr& e) {
        auto out = std::make_shared<FormalState>(*s);
        out->value = subst_opt(s->value, x, e);
        if (s->kind == StateKind::Ket) out->var = syntax::subst_qvar(s->var, x, e);
        out->coefs = subst_all(s->coefs, x, e);
        out->params = subst_all(s->params, x, e);
        out->targets = subst_qs(s->targets, x, e);
        out->parts.clear();
        for (const auto& p : s->parts) out->parts.push_back(subst_state(p, x, e));
        return out;
    }

    PredPtr subst_predicate(const PredPtr& a, const std::string& x, const ExprPtr& e) {
        auto out = std::make_shared<Predicate>(*a);
        out->params = subst_all(a->params, x, e);
        out->targets = subst_qs(a->targets, x, e);
        if (a->state) out->state = subst_state(a->state, x, e);
        out->args.clear();
        for (const auto& b : a->args) out->args.push_back(subst_predicate(b, x, e));
        return out;
    }

    bool same_state(const FormalState& a, const FormalState& b) {
        if (a.kind != b.kind || a.parts.size() != b.parts.size()) return false;
        switch (a.kind) {
            case StateKind::Ket:
                if (!same_opt(a.value, b.value) || !syntax::same_qvar(a.var, b.var)) return false;
                break;
            case StateKind::Tensor: break;
            case StateKind::Sum:
                if (!same_list(a.coefs, b.coefs)) return false;
                break;
            case StateKind::Apply:
                if (a.gate != b.gate || !same_list(a.params, b.params) || !syntax::same_qvars(a.targets, b.targets))
                    return false;
                break;
        }
        for (std::size_t i = 0; i < a.parts.size(); ++i)
            if (!same_state(*a.parts[i], *b.parts[i])) return false;
        return true;
    }

    bool same_predicate(const Predicate& a, const Predicate& b) {
        if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
        if (a.name != b.name || !same_list(a.params, b.params) || !syntax::same_qvars(a.targets, b.targets))
            return false;
        if (a.kind == PredKind::StateProj && !same_state(*a.state, *b.state)) return false;
        for (std::size_t i = 0; i < a.args.size(); ++i)
            if (!same_predicate(*a.args[i], *b.args[i])) return false;
        return true;
    }

    std::string to_string(const FormalState& s) { return state_text(s, false); }
    std::string to_string(const Predicate& a) { return pred_text(a); }

    StatePtr parse_state(Parser& p) { return state_sum(p); }
    PredPtr parse_predicate(Parser& p) { return pred_tensor(p); }

    StatePtr parse_state(std::string_view text, const syntax::SymbolTable* symbols) {
        Parser p(text, symbols);
        StatePtr s = state_sum(p);
        p.expect_end();
        return s;
    }

    PredPtr parse_predicate(std::string_view text, const syntax::SymbolTable* symbols) {
        Parser p(text, symbols);
        PredPtr a = pred_tensor(p);
        p.expect_end();
        return a;
    }

    io::json to_json(const FormalState& s) {
        io::json j;
        switch (s.kind) {
            case StateKind::Ket:
                j["kind"] = "ket";
                j["value"] = classical::to_string(*s.value);
                j["var"] = syntax::to_string(s.var);
                break;
            case StateKind::Tensor:
                j["kind"] = "tensor";
                j["args"] = io::json::array();
                for (const auto& p : s.parts) j["args"].push_back(to_json(*p));
                break;
            case StateKind::Sum:
                j["kind"] = "sum";
                j["terms"] = io::json::array();
                for (std::size_t i = 0; i < s.parts.size(); ++i) {
                    io::json t;
                    t["coef"] = s.coefs[i] ? io::json(classical::to_string(*s.coefs[i])) : io::json(nullptr);
                    t["state"] = to_json(*s.parts[i]);
                    j["terms"].push_back(t);
                }
                break;
            case StateKind::Apply:
                j["kind"] = "apply";
                j["gate"] = s.gate;
                j["params"] = exprs_to_json(s.params);
                j["targets"] = qvars_to_json(s.targets);
                j["state"] = to_json(*s.parts[0]);
                break;
        }
        return j;
    }

    io::json to_json(const Predicate& a) {
        io::json j;
        switch (a.kind) {
            case PredKind::Atomic:
                j["kind"] = "atomic";
                j["name"] = a.name;
                j["params"] = exprs_to_json(a.params);
                j["targets"] = qvars_to_json(a.targets);
                break;
            case PredKind::StateProj:
                j["kind"] = "proj";
                j["state"] = to_json(*a.state);
                break;
            case PredKind::Neg:
                j["kind"] = "not";
                j["arg"] = to_json(*a.args[0]);
                break;
            case PredKind::Tensor:
                j["kind"] = "tensor";
                j["args"] = io::json::array({to_json(*a.args[0]), to_json(*a.args[1])});
                break;
            case PredKind::Kraus:
                j["kind"] = "kraus";
                j["name"] = a.name;
                j["params"] = exprs_to_json(a.params);
                j["targets"] = qvars_to_json(a.targets);
                j["branches"] = io::json::array();
                for (const auto& b : a.args) j["branches"].push_back(to_json(*b));
                break;
        }
        return j;
    }

    StatePtr state_from_json(const io::json& j, const syntax::SymbolTable* symbols) {
        if (j.is_string()) return parse_state(j.get<std::string>(), symbols);
        const std::string k = kind_of_json(j, "formal state");
        if (k == "ket")
            return ket(syntax::parse_expr(io::require(j, "value", "ket").is_string()
                                              ? j.at("value").get<std::string>()
                                              : j.at("value").dump(),
                                          symbols),
                       syntax::parse_qvar(io::require(j, "var", "ket").get<std::string>(), symbols));
        if (k == "tensor") {
            std::vector<StatePtr> fs;
            for (const auto& f : io::require(j, "args", "tensor state")) fs.push_back(state_from_json(f, symbols));
            if (fs.empty()) fail(ErrorKind::Schema, "tensor state needs factors");
            return tensor_state(std::move(fs));
        }
        if (k == "sum") {
            std::vector<ExprPtr> cs;
            std::vector<StatePtr> ts;
            for (const auto& t : io::require(j, "terms", "superposition")) {
                const auto& c = t.contains("coef") ? t.at("coef") : io::json(nullptr);
                cs.push_back(c.is_null() ? nullptr
                                         : syntax::parse_expr(c.is_string() ? c.get<std::string>() : c.dump(), symbols));
                ts.push_back(state_from_json(io::require(t, "state", "superposition term"), symbols));
            }
            if (ts.empty()) fail(ErrorKind::Schema, "superposition needs terms");
            return superpose(std::move(cs), std::move(ts));
        }
        if (k == "apply")
            return apply_gate(io::require(j, "gate", "gate application").get<std::string>(),
                              exprs_from_json(j.value("params", io::json::array()), symbols),
                              qvars_from_json(io::require(j, "targets", "gate application"), symbols),
                              state_from_json(io::require(j, "state", "gate application"), symbols));
        fail(ErrorKind::Schema, "unknown formal state kind '" + k + "'");
    }

    PredPtr predicate_from_json(const io::json& j, const syntax::SymbolTable* symbols) {
        if (j.is_string()) return parse_predicate(j.get<std::string>(), symbols);
        const std::string k = kind_of_json(j, "predicate");
        if (k == "atomic")
            return atomic(io::require(j, "name", "atomic predicate").get<std::string>(),
                          exprs_from_json(j.value("params", io::json::array()), symbols),
                          qvars_from_json(j.value("targets", io::json::array()), symbols));
        if (k == "proj") return projector(state_from_json(io::require(j, "state", "projector"), symbols));
        if (k == "not") return negation(predicate_from_json(io::require(j, "arg", "negation"), symbols));
        if (k == "tensor") {
            const auto& args = io::require(j, "args", "tensor predicate");
            if (!args.is_array() || args.size() < 2) fail(ErrorKind::Schema, "tensor predicate needs two or more args");
            PredPtr a = predicate_from_json(args[0], symbols);
            for (std::size_t i = 1; i < args.size(); ++i) a = tensor(a, predicate_from_json(args[i], symbols));
            return a;
        }
        if (k == "kraus") {
            std::vector<PredPtr> bs;
            for (const auto& b : io::require(j, "branches", "Kraus application"))
                bs.push_back(predicate_from_json(b, symbols));
            return kraus(io::require(j, "name", "Kraus application").get<std::string>(),
                         exprs_from_json(j.value("params", io::json::array()), symbols),
                         qvars_from_json(j.value("targets", io::json::array()), symbols), std::move(bs));
        }
        fail(ErrorKind::Schema, "unknown predicate kind '" + k + "'");
    }

}  // namespace qhl::assertions
