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

#include "qhl/semantics/semantics.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "qhl/error.hpp"

namespace qhl::semantics {

    using linalg::ComplexMatrix;
    using syntax::Cmd;
    using syntax::Program;

    namespace {

        struct Targets {
            std::vector<std::string> ids;
            structures::Dims dims;
            bool distinct = true;
        };

        Targets resolve_targets(const Interpretation& in, const ClassicalState& sigma,
                                const std::vector<syntax::SubscriptedVar>& qs) {
            Targets t;
            for (const auto& q : qs) {
                auto r = in.resolve(q, sigma);
                if (std::find(t.ids.begin(), t.ids.end(), r.id) != t.ids.end()) t.distinct = false;
                t.ids.push_back(r.id);
                t.dims.push_back(r.dim);
            }
            return t;
        }

        std::vector<classical::Value> eval_args(const ClassicalState& sigma, const std::vector<classical::ExprPtr>& es) {
            std::vector<classical::Value> out;
            for (const auto& e : es) out.push_back(classical::eval_expr(sigma, *e));
            return out;
        }

        DensityOperator conjugate(const DensityOperator& rho, const ComplexMatrix& k) {
            return DensityOperator(rho.layout(), k * rho.matrix() * k.adjoint());
        }

        DensityOperator initialize(const Interpretation& in, const DensityOperator& rho, const ClassicalState& sigma,
                                   const syntax::SubscriptedVar& q) {
            auto r = in.resolve(q, sigma);
            std::vector<std::string> ids{r.id};
            const auto& layout = rho.layout();
            ComplexMatrix out = ComplexMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
            for (std::size_t n = 0; n < r.dim; ++n) {
                ComplexMatrix k = ComplexMatrix::Zero(r.dim, r.dim);
                k(0, n) = 1.0;
                ComplexMatrix e = linalg::embed(k, ids, layout);
                out += e * rho.matrix() * e.adjoint();
            }
            return DensityOperator(layout, out);
        }

        struct Atomic {
            std::vector<CqState> outs;
            bool blocked = false;
        };

        // Effect of a non-compound command.
        Atomic atomic_step(const Interpretation& in, const Program& p, const CqState& s) {
            Atomic a;
            switch (p.kind) {
                case Cmd::Skip: a.outs.push_back(s); break;
                case Cmd::Assign:
                    a.outs.push_back({classical::update(s.sigma, p.name, classical::eval_expr(s.sigma, *p.expr), in.types()),
                                      s.rho});
                    break;
                case Cmd::Init: a.outs.push_back({s.sigma, initialize(in, s.rho, s.sigma, p.targets[0])}); break;
                case Cmd::Gate: {
                    auto t = resolve_targets(in, s.sigma, p.targets);
                    if (!t.distinct) {
                        a.blocked = true;
                        break;
                    }
                    ComplexMatrix u = in.gate_matrix(p.name, eval_args(s.sigma, p.params), t.dims);
                    a.outs.push_back({s.sigma, conjugate(s.rho, linalg::embed(u, t.ids, s.rho.layout()))});
                    break;
                }
                case Cmd::Measure: {
                    auto t = resolve_targets(in, s.sigma, p.targets);
                    if (!t.distinct) {
                        a.blocked = true;
                        break;
                    }
                    for (const auto& [m, op] : in.measurement_ops(p.symbol, t.dims))
                        a.outs.push_back({classical::update(s.sigma, p.name, m, in.types()),
                                          conjugate(s.rho, linalg::embed(op, t.ids, s.rho.layout()))});
                    break;
                }
                default: fail(ErrorKind::Schema, "compound command passed to atomic_step");
            }
            return a;
        }

        double trace_of(const DensityOperator& rho) { return rho.trace(); }

    }  // namespace

    StepResult step(const Interpretation& in, const Configuration& c) {
        if (c.terminated()) fail(ErrorKind::Schema, "cannot step a terminated configuration");
        const Program& p = *c.program;
        StepResult r;
        switch (p.kind) {
            case Cmd::Seq: {
                Configuration inner{p.first, c.state, c.fuel};
                StepResult sub = step(in, inner);
                r.blocked = sub.blocked;
                for (auto& n : sub.next) {
                    n.program = n.terminated() ? p.second : syntax::seq(n.program, p.second);
                    r.next.push_back(std::move(n));
                }
                return r;
            }
            case Cmd::If: {
                bool b = classical::satisfies(c.state.sigma, *p.expr);
                r.next.push_back({b ? p.first : p.second, c.state, c.fuel});
                return r;
            }
            case Cmd::While: {
                if (!classical::satisfies(c.state.sigma, *p.expr)) {
                    r.next.push_back({nullptr, c.state, c.fuel});
                } else {
                    if (c.fuel == 0) fail(ErrorKind::Schema, "loop entry without fuel");
                    r.next.push_back({syntax::seq(p.first, c.program), c.state, c.fuel - 1});
                }
                return r;
            }
            default: {
                Atomic a = atomic_step(in, p, c.state);
                r.blocked = a.blocked;
                for (auto& s : a.outs) r.next.push_back({nullptr, std::move(s), c.fuel});
                return r;
            }
        }
    }

    double OutcomeMultiset::item_trace() const {
        double t = 0;
        for (const auto& s : items) t += s.trace();
        return t;
    }

    double OutcomeMultiset::residual_trace() const {
        double t = 0;
        for (const auto& c : residual) t += c.state.trace();
        return t;
    }

    namespace {

        // A configuration about to enter a loop body with no fuel left.
        bool out_of_fuel(const Configuration& c) {
            const Program* p = c.program.get();
            while (p && p->kind == Cmd::Seq) p = p->first.get();
            return p && p->kind == Cmd::While && c.fuel == 0 && classical::satisfies(c.state.sigma, *p->expr);
        }

    }  // namespace

    OutcomeMultiset run(const Interpretation& in, const ProgramPtr& program, const CqState& s, const RunOptions& opt) {
        OutcomeMultiset out;
        std::vector<Configuration> frontier{{program, s, opt.fuel}};
        while (!frontier.empty()) {
            std::vector<Configuration> next;
            for (const auto& c : frontier) {
                if (c.terminated()) {
                    out.items.push_back(c.state);
                    continue;
                }
                if (out_of_fuel(c)) {
                    out.residual.push_back(c);
                    continue;
                }
                StepResult r = step(in, c);
                if (r.blocked) out.blocked_trace += c.state.trace();
                for (auto& n : r.next) {
                    if (trace_of(n.state.rho) < opt.prune) {
                        out.pruned_trace += std::max(0.0, n.state.trace());
                        continue;
                    }
                    next.push_back(std::move(n));
                }
            }
            if (next.size() > opt.branch_cap)
                fail(ErrorKind::BranchExplosion,
                     std::to_string(next.size()) + " live configurations exceed the cap of " + std::to_string(opt.branch_cap));
            frontier = std::move(next);
        }
        return out;
    }

    namespace {

        struct Structural {
            const Interpretation& in;
            const RunOptions& opt;
            OutcomeMultiset& acc;

            // Outputs paired with the fuel left on their path.
            std::vector<std::pair<CqState, std::size_t>> sem(const ProgramPtr& p, const CqState& s, std::size_t fuel) {
                std::vector<std::pair<CqState, std::size_t>> out;
                switch (p->kind) {
                    case Cmd::Seq:
                        for (auto& [mid, f] : sem(p->first, s, fuel)) {
                            auto rest = sem(p->second, mid, f);
                            out.insert(out.end(), rest.begin(), rest.end());
                        }
                        return out;
                    case Cmd::If:
                        return sem(classical::satisfies(s.sigma, *p->expr) ? p->first : p->second, s, fuel);
                    case Cmd::While: {
                        if (!classical::satisfies(s.sigma, *p->expr)) {
                            out.push_back({s, fuel});
                            return out;
                        }
                        if (fuel == 0) {
                            acc.residual.push_back({p, s, 0});
                            return out;
                        }
                        for (auto& [mid, f] : sem(p->first, s, fuel - 1)) {
                            auto rest = sem(p, mid, f);
                            out.insert(out.end(), rest.begin(), rest.end());
                        }
                        return out;
                    }
                    default: {
                        Atomic a = atomic_step(in, *p, s);
                        if (a.blocked) acc.blocked_trace += s.trace();
                        for (auto& o : a.outs) {
                            if (o.trace() < opt.prune) {
                                acc.pruned_trace += std::max(0.0, o.trace());
                                continue;
                            }
                            out.push_back({std::move(o), fuel});
                        }
                        return out;
                    }
                }
            }
        };

    }  // namespace

    OutcomeMultiset structural_sem(const Interpretation& in, const ProgramPtr& p, const CqState& s,
                                   const RunOptions& opt) {
        OutcomeMultiset out;
        Structural w{in, opt, out};
        for (auto& [item, f] : w.sem(p, s, opt.fuel)) out.items.push_back(std::move(item));
        return out;
    }

    double nt_lower_bound(const OutcomeMultiset& out, const CqState& input) { return input.trace() - out.item_trace(); }

    double nt_lower_bound(const Interpretation& in, const ProgramPtr& p, const CqState& s, const RunOptions& opt) {
        return nt_lower_bound(run(in, p, s, opt), s);
    }

    DensityOperator theta_of(const OutcomeMultiset& out, const ClassicalState& sigma,
                             const linalg::RegisterLayout& layout) {
        const auto d = static_cast<Eigen::Index>(layout.dimension());
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (const auto& s : out.items) {
            if (!(s.sigma == sigma)) continue;
            if (!(s.rho.layout() == layout)) fail(ErrorKind::DimensionMismatch, "outcome layouts differ");
            sum += s.rho.matrix();
        }
        return DensityOperator(layout, sum);
    }

    std::vector<std::pair<ClassicalState, DensityOperator>> normalize(const OutcomeMultiset& out,
                                                                        const linalg::RegisterLayout& layout,
                                                                        double prune) {
        std::map<ClassicalState, ComplexMatrix> acc;
        for (const auto& s : out.items) {
            if (!(s.rho.layout() == layout)) fail(ErrorKind::DimensionMismatch, "outcome layouts differ");
            auto it = acc.find(s.sigma);
            if (it == acc.end()) acc.emplace(s.sigma, s.rho.matrix());
            else it->second += s.rho.matrix();
        }
        std::vector<std::pair<ClassicalState, DensityOperator>> res;
        for (auto& [sigma, m] : acc) {
            DensityOperator rho(layout, m);
            if (rho.trace() < prune) continue;
            res.emplace_back(sigma, std::move(rho));
        }
        return res;
    }

    bool same_multiset(const std::vector<CqState>& a, const std::vector<CqState>& b, double tol) {
        if (a.size() != b.size()) return false;
        std::vector<bool> used(b.size(), false);
        for (const auto& x : a) {
            bool found = false;
            for (std::size_t j = 0; j < b.size() && !found; ++j) {
                if (used[j] || !(x.sigma == b[j].sigma)) continue;
                if (!(x.rho.layout() == b[j].rho.layout())) continue;
                if (linalg::max_abs_diff(x.rho.matrix(), b[j].rho.matrix()) <= tol) {
                    used[j] = true;
                    found = true;
                }
            }
            if (!found) return false;
        }
        return true;
    }

    bool trace_non_increasing(const OutcomeMultiset& out, const CqState& input, double tol) {
        return out.item_trace() + out.residual_trace() <= input.trace() + tol;
    }

    const char* equivalence_name(Equivalence e) {
        switch (e) {
            case Equivalence::Equivalent: return "equivalent";
            case Equivalence::Different: return "different";
            case Equivalence::Inconclusive: return "inconclusive";
        }
        return "?";
    }

    EquivalenceResult equivalent(const Interpretation& in, const ProgramPtr& p1, const ProgramPtr& p2,
                                 const std::vector<CqState>& inputs, const RunOptions& opt, double tol) {
        EquivalenceResult res;
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            const auto& layout = inputs[i].rho.layout();
            auto o1 = run(in, p1, inputs[i], opt);
            auto o2 = run(in, p2, inputs[i], opt);
            auto n1 = normalize(o1, layout, opt.prune);
            auto n2 = normalize(o2, layout, opt.prune);
            std::map<ClassicalState, int> keys;
            for (const auto& [s, r] : n1) keys[s] = 0;
            for (const auto& [s, r] : n2) keys[s] = 0;
            for (const auto& [sigma, unused] : keys) {
                auto a = theta_of(o1, sigma, layout);
                auto b = theta_of(o2, sigma, layout);
                if (linalg::max_abs_diff(a.matrix(), b.matrix()) > tol)
                    return {Equivalence::Different, i, sigma, "outputs differ at " + sigma.to_string()};
            }
            if (o1.residual_trace() > tol || o2.residual_trace() > tol) {
                res.verdict = Equivalence::Inconclusive;
                res.input = i;
                res.reason = "fuel exhausted with live configurations";
            }
        }
        return res;
    }

}  // namespace qhl::semantics
