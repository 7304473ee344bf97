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

#include "qhl/assertions/eval.hpp"

#include <cmath>
#include <sstream>

#include "qhl/error.hpp"

namespace qhl::assertions {

    using classical::ClassicalState;
    using linalg::ComplexMatrix;
    using linalg::ComplexVector;
    using linalg::RegisterLayout;
    using linalg::SystemSpec;

    namespace {

        std::vector<SystemSpec> resolve_all(const Interpretation& in, const ClassicalState& sigma,
                                            const std::vector<SubscriptedVar>& qs) {
            std::vector<SystemSpec> out;
            for (const auto& q : qs) {
                auto r = in.resolve(q, sigma);
                out.push_back({r.id, r.dim});
            }
            return out;
        }

        bool distinct(const std::vector<SystemSpec>& s) {
            for (std::size_t i = 0; i < s.size(); ++i)
                for (std::size_t j = i + 1; j < s.size(); ++j)
                    if (s[i].id == s[j].id) return false;
            return true;
        }

        bool overlap(const RegisterLayout& a, const RegisterLayout& b) {
            for (const auto& s : b.systems())
                if (a.contains(s.id)) return true;
            return false;
        }

        RegisterLayout concat(const RegisterLayout& a, const RegisterLayout& b, std::size_t cap) {
            std::vector<SystemSpec> all = a.systems();
            all.insert(all.end(), b.systems().begin(), b.systems().end());
            return RegisterLayout(std::move(all), cap);
        }

        std::vector<classical::Value> eval_args(const ClassicalState& sigma, const std::vector<ExprPtr>& es) {
            std::vector<classical::Value> out;
            for (const auto& e : es) out.push_back(classical::eval_expr(sigma, *e));
            return out;
        }

        structures::Dims dims_of(const std::vector<SystemSpec>& s) {
            structures::Dims d;
            for (const auto& x : s) d.push_back(x.dim);
            return d;
        }

        std::vector<std::string> ids_of(const std::vector<SystemSpec>& s) {
            std::vector<std::string> ids;
            for (const auto& x : s) ids.push_back(x.id);
            return ids;
        }

        std::optional<std::size_t> ket_index(const classical::Value& v, std::size_t dim) {
            std::int64_t k = 0;
            switch (classical::kind_of(v)) {
                case classical::ValueKind::Bool:
                case classical::ValueKind::Int: k = classical::as_int(v); break;
                case classical::ValueKind::Real: {
                    double r = std::get<double>(v);
                    if (std::abs(r - std::round(r)) > 1e-12) return std::nullopt;
                    k = static_cast<std::int64_t>(std::llround(r));
                    break;
                }
                default: fail(ErrorKind::Type, "ket label must be an integer, got " + classical::value_to_string(v));
            }
            if (k < 0 || static_cast<std::size_t>(k) >= dim) return std::nullopt;
            return static_cast<std::size_t>(k);
        }

        StateValue state_rec(const Interpretation& in, const ClassicalState& sigma, const FormalState& s) {
            const std::size_t cap = in.limits().dimension_cap;
            StateValue out;
            switch (s.kind) {
                case StateKind::Ket: {
                    auto r = in.resolve(s.var, sigma);
                    auto v = classical::eval_expr(sigma, *s.value);
                    auto k = ket_index(v, r.dim);
                    if (!k) {
                        out.reason = "ket label " + classical::value_to_string(v) + " is not a basis index of " + r.id;
                        return out;
                    }
                    out.defined = true;
                    out.layout = RegisterLayout({{r.id, r.dim}}, cap);
                    out.vec = linalg::basis_vector(r.dim, *k);
                    return out;
                }
                case StateKind::Tensor: {
                    out = state_rec(in, sigma, *s.parts[0]);
                    for (std::size_t i = 1; i < s.parts.size() && out.defined; ++i) {
                        StateValue f = state_rec(in, sigma, *s.parts[i]);
                        if (!f.defined) return f;
                        if (overlap(out.layout, f.layout)) {
                            out.defined = false;
                            out.reason = "tensor factors share a system";
                            return out;
                        }
                        out.layout = concat(out.layout, f.layout, cap);
                        out.vec = linalg::kron(out.vec, f.vec, cap);
                    }
                    return out;
                }
                case StateKind::Sum: {
                    for (std::size_t i = 0; i < s.parts.size(); ++i) {
                        StateValue t = state_rec(in, sigma, *s.parts[i]);
                        if (!t.defined) return t;
                        linalg::Complex c = 1.0;
                        if (s.coefs[i]) c = classical::as_complex(classical::eval_expr(sigma, *s.coefs[i]));
                        if (i == 0) {
                            out = t;
                            out.vec *= c;
                            continue;
                        }
                        if (!t.layout.same_systems(out.layout)) {
                            out.defined = false;
                            out.reason = "superposed states have different signatures";
                            return out;
                        }
                        out.vec += c * linalg::reorder(t.vec, t.layout, out.layout);
                    }
                    return out;
                }
                case StateKind::Apply: {
                    out = state_rec(in, sigma, *s.parts[0]);
                    if (!out.defined) return out;
                    auto targets = resolve_all(in, sigma, s.targets);
                    if (!distinct(targets)) return StateValue{false, {}, {}, "gate targets are not distinct"};
                    for (const auto& t : targets)
                        if (!out.layout.contains(t.id))
                            return StateValue{false, {}, {}, "gate target " + t.id + " is outside the state's signature"};
                    ComplexMatrix u = in.gate_matrix(s.gate, eval_args(sigma, s.params), dims_of(targets));
                    auto ids = ids_of(targets);
                    out.vec = linalg::embed(u, ids, out.layout) * out.vec;
                    return out;
                }
            }
            return out;
        }

        EvalResult pred_rec(const Interpretation& in, const ClassicalState& sigma, const Predicate& a) {
            const std::size_t cap = in.limits().dimension_cap;
            switch (a.kind) {
                case PredKind::Atomic: {
                    auto targets = resolve_all(in, sigma, a.targets);
                    if (!distinct(targets)) return EvalResult::undefined("targets of " + a.name + " are not distinct");
                    ComplexMatrix k = in.atomic(a.name, eval_args(sigma, a.params), dims_of(targets));
                    return {true, RegisterLayout(targets, cap), k, {}};
                }
                case PredKind::StateProj: {
                    StateValue s = eval_state(in, sigma, *a.state);
                    if (!s.defined) return EvalResult::undefined(s.reason);
                    return {true, s.layout, linalg::outer(s.vec, s.vec), {}};
                }
                case PredKind::Neg: {
                    EvalResult r = pred_rec(in, sigma, *a.args[0]);
                    if (!r.defined) return r;
                    r.op = linalg::identity(r.op.rows()) - r.op;
                    return r;
                }
                case PredKind::Tensor: {
                    EvalResult l = pred_rec(in, sigma, *a.args[0]);
                    if (!l.defined) return l;
                    EvalResult r = pred_rec(in, sigma, *a.args[1]);
                    if (!r.defined) return r;
                    if (overlap(l.layout, r.layout)) return EvalResult::undefined("tensor factors share a system");
                    return {true, concat(l.layout, r.layout, cap), linalg::kron(l.op, r.op, cap), {}};
                }
                case PredKind::Kraus: {
                    std::vector<EvalResult> bs;
                    for (const auto& b : a.args) {
                        bs.push_back(pred_rec(in, sigma, *b));
                        if (!bs.back().defined) return bs.back();
                    }
                    auto targets = resolve_all(in, sigma, a.targets);
                    if (!distinct(targets)) return EvalResult::undefined("targets of " + a.name + " are not distinct");
                    auto ops = in.kraus_ops(a.name, eval_args(sigma, a.params), dims_of(targets));
                    if (bs.size() == 1 && ops.size() > 1) bs.resize(ops.size(), bs[0]);
                    if (bs.size() != ops.size())
                        fail(ErrorKind::ArityMismatch, a.name + " has rank " + std::to_string(ops.size()) + " but " +
                                                           std::to_string(bs.size()) + " branches were given");
                    RegisterLayout layout = bs[0].layout;
                    for (const auto& b : bs) layout = layout.merged(b.layout, cap);
                    layout = layout.merged(RegisterLayout(targets, cap), cap);
                    auto ids = ids_of(targets);
                    const auto d = static_cast<Eigen::Index>(layout.dimension());
                    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
                    for (std::size_t i = 0; i < ops.size(); ++i) {
                        ComplexMatrix b = extend(bs[i], layout);
                        if (targets.empty()) {
                            sum += ops[i](0, 0) * b * std::conj(ops[i](0, 0));
                        } else {
                            ComplexMatrix f = linalg::embed(ops[i], ids, layout);
                            sum += f * b * f.adjoint();
                        }
                    }
                    return {true, layout, sum, {}};
                }
            }
            return EvalResult::undefined("unreachable");
        }

        std::set<std::string> free_of(const ExprPtr& e) {
            return e ? classical::free_vars(*e) : std::set<std::string>{};
        }

        classical::Domain domain_for(const Interpretation& in, const std::set<std::string>& names, const Grids& grids) {
            auto d = classical::Domain::over(names, in.types(), grids);
            if (d.enumerable() && d.size() > in.limits().domain_cap)
                fail(ErrorKind::DomainTooLarge, "entailment domain has " + std::to_string(d.size()) +
                                                    " states, above the cap of " +
                                                    std::to_string(in.limits().domain_cap));
            return d;
        }

        // Compares one classical state; returns a failure reason or empty.
        std::string compare_at(const Interpretation& in, const ClassicalState& sigma, const Predicate& a,
                               const Predicate& b) {
            EvalResult ra = eval_predicate(in, sigma, a);
            EvalResult rb = eval_predicate(in, sigma, b);
            if (ra.defined != rb.defined)
                return std::string("left side is ") + (ra.defined ? "" : "not ") + "well-defined but right side is " +
                       (rb.defined ? "" : "not ") + "well-defined";
            if (!ra.defined) return {};
            RegisterLayout layout = ra.layout.merged(rb.layout, in.limits().dimension_cap);
            ComplexMatrix diff = extend(rb, layout) - extend(ra, layout);
            const auto& tol = in.tolerances();
            double lam = linalg::min_eigenvalue(diff, tol.herm);
            if (lam < -tol.psd) {
                std::ostringstream os;
                os << "right minus left has eigenvalue " << lam;
                return os.str();
            }
            return {};
        }

    }  // namespace

    StateValue eval_state(const Interpretation& in, const ClassicalState& sigma, const FormalState& s) {
        StateValue v = state_rec(in, sigma, s);
        if (v.defined && std::abs(v.vec.norm() - 1.0) > 1e-9) {
            std::ostringstream os;
            os << "state has norm " << v.vec.norm();
            return StateValue{false, {}, {}, os.str()};
        }
        return v;
    }

    EvalResult eval_predicate(const Interpretation& in, const ClassicalState& sigma, const Predicate& a) {
        return pred_rec(in, sigma, a);
    }

    ComplexMatrix extend(const EvalResult& r, const RegisterLayout& target) {
        if (r.layout == target) return r.op;
        auto ids = r.layout.ids();
        return linalg::embed(r.op, ids, target);
    }

    std::string to_string(const CqAssertion& c) {
        return "(" + (c.phi ? classical::to_string(*c.phi) : std::string("true")) + ", " +
               (c.a ? to_string(*c.a) : std::string("I")) + ")";
    }

    io::json to_json(const CqAssertion& c) {
        return io::json{{"phi", c.phi ? classical::to_string(*c.phi) : std::string("true")},
                        {"A", c.a ? to_string(*c.a) : std::string("I")}};
    }

    CqAssertion assertion_from_json(const io::json& j, const syntax::SymbolTable* symbols) {
        if (!j.is_object()) fail(ErrorKind::Schema, "assertion must be an object with 'phi' and 'A'");
        CqAssertion c;
        c.phi = j.contains("phi") ? syntax::parse_expr(j.at("phi").get<std::string>(), symbols) : classical::truth();
        c.a = j.contains("A") ? predicate_from_json(j.at("A"), symbols) : identity_predicate();
        return c;
    }

    const char* verdict_name(Verdict v) {
        switch (v) {
            case Verdict::Holds: return "holds";
            case Verdict::Fails: return "fails";
            case Verdict::Inconclusive: return "inconclusive";
        }
        return "?";
    }

    EntailResult entails(const Interpretation& in, const ExprPtr& phi, const Predicate& a, const Predicate& b,
                         const Grids& grids) {
        std::set<std::string> names = free_of(phi);
        for (const auto& v : cv(a)) names.insert(v);
        for (const auto& v : cv(b)) names.insert(v);
        EntailResult res;
        auto d = domain_for(in, names, grids);
        if (!d.enumerable()) return {Verdict::Inconclusive, std::nullopt, d.reason(), 0, false};
        res.grid_assumed = d.grid_assumed();
        for (std::uint64_t i = 0; i < d.size(); ++i) {
            ClassicalState sigma = d.state(i);
            if (phi && !classical::satisfies(sigma, *phi)) continue;
            ++res.states_checked;
            std::string why = compare_at(in, sigma, a, b);
            if (!why.empty()) return {Verdict::Fails, sigma, why, res.states_checked, res.grid_assumed};
        }
        if (res.grid_assumed) res.reason = "real-valued variables checked on an assumed grid";
        return res;
    }

    EntailResult cq_entails(const Interpretation& in, const CqAssertion& pre, const CqAssertion& post,
                            const Grids& grids) {
        std::set<std::string> names = free_of(pre.phi);
        for (const auto& v : free_of(post.phi)) names.insert(v);
        for (const auto& v : cv(*pre.a)) names.insert(v);
        for (const auto& v : cv(*post.a)) names.insert(v);
        EntailResult res;
        auto d = domain_for(in, names, grids);
        if (!d.enumerable()) return {Verdict::Inconclusive, std::nullopt, d.reason(), 0, false};
        res.grid_assumed = d.grid_assumed();
        for (std::uint64_t i = 0; i < d.size(); ++i) {
            ClassicalState sigma = d.state(i);
            if (pre.phi && !classical::satisfies(sigma, *pre.phi)) continue;
            ++res.states_checked;
            if (post.phi && !classical::satisfies(sigma, *post.phi))
                return {Verdict::Fails, sigma, "classical part " + classical::to_string(*post.phi) + " fails",
                        res.states_checked, res.grid_assumed};
            std::string why = compare_at(in, sigma, *pre.a, *post.a);
            if (!why.empty()) return {Verdict::Fails, sigma, why, res.states_checked, res.grid_assumed};
        }
        if (res.grid_assumed) res.reason = "real-valued variables checked on an assumed grid";
        return res;
    }

    EntailResult valid(const Interpretation& in, const ExprPtr& phi, const Grids& grids) {
        EntailResult res;
        auto d = domain_for(in, free_of(phi), grids);
        if (!d.enumerable()) return {Verdict::Inconclusive, std::nullopt, d.reason(), 0, false};
        res.grid_assumed = d.grid_assumed();
        for (std::uint64_t i = 0; i < d.size(); ++i) {
            ClassicalState sigma = d.state(i);
            ++res.states_checked;
            if (!classical::satisfies(sigma, *phi))
                return {Verdict::Fails, sigma, classical::to_string(*phi) + " is false here", res.states_checked,
                        res.grid_assumed};
        }
        return res;
    }

}  // namespace qhl::assertions
