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
#include "qhl/harness/qft.hpp"

#include <algorithm>
#include <cmath>

#include "qhl/error.hpp"
#include "qhl/structures/loader.hpp"

namespace qhl::harness {

    using assertions::PredPtr;
    using classical::BinaryOp;
    using classical::ExprPtr;
    using prover::NodePtr;
    using prover::ProofNode;
    using prover::Rule;
    using syntax::Cmd;
    using syntax::ProgramPtr;
    using syntax::SubscriptedVar;

    namespace {

        // State of one qubit during the circuit: |j[a]> or (|0> + e^{2 pi i 0.j[a:b]} |1>)/sqrt(2).
        struct Factor {
            bool basis = true;
            int a = 0, b = 0;
        };
        using Desc = std::vector<Factor>;  // index k-1 describes q[k]

        ExprPtr num(int k) { return classical::lit(std::int64_t{k}); }
        SubscriptedVar q(int k) { return {"q", {num(k)}}; }

        int index_of(const SubscriptedVar& v) {
            if (v.base != "q" || v.subscripts.size() != 1) fail(ErrorKind::Schema, "unexpected target");
            return static_cast<int>(classical::as_int(classical::eval_expr({}, *v.subscripts[0])));
        }

        std::string factor_text(int k, const Factor& f, bool skew) {
            auto sys = "_q[" + std::to_string(k) + "]";
            if (f.basis) return "|j[" + std::to_string(f.a) + "]>" + sys;
            std::string phase = "2*pi*0.j[" + std::to_string(f.a) + ":" + std::to_string(f.b) + "]";
            if (skew) phase += " + pi/2";
            return "((1/sqrt(2)) |0>" + sys + " + (expi(" + phase + ")/sqrt(2)) |1>" + sys + ")";
        }

        std::string proj_text(const Desc& d, bool wrong = false) {
            std::string s = "[";
            for (std::size_t k = 0; k < d.size(); ++k) {
                if (k) s += " * ";
                s += factor_text(static_cast<int>(k + 1), d[k], wrong && k + 1 == d.size());
            }
            return s + "]";
        }

        Desc apply(const syntax::Program& g, Desc d) {
            std::vector<int> t;
            for (const auto& v : g.targets) t.push_back(index_of(v));
            auto at = [&](int k) -> Factor& { return d.at(static_cast<std::size_t>(k - 1)); };
            if (g.name == "H") {
                Factor& f = at(t[0]);
                if (!f.basis || f.a != t[0]) fail(ErrorKind::Schema, "H applied to an unexpected factor");
                f = {false, t[0], t[0]};
            } else if (g.name == "CR") {
                int c = t[0], m = t[1];
                auto l = classical::as_int(classical::eval_expr({}, *g.params[0]));
                Factor& f = at(m);
                if (f.basis || !at(c).basis || at(c).a != c || f.b + 1 != c || l != c - f.a + 1)
                    fail(ErrorKind::Schema, "controlled rotation does not extend the phase");
                f.b = c;
            } else if (g.name == "SWAP" || g.name == "Reverse") {
                Desc old = d;
                for (std::size_t i = 0; i < t.size(); ++i) at(t[i]) = old.at(t[t.size() - 1 - i] - 1);
            } else {
                fail(ErrorKind::Schema, "gate " + g.name + " is outside the QFT circuit");
            }
            return d;
        }

        struct Builder {
            const prover::Interpretation& in;
            ExprPtr phi;

            PredPtr pred(const std::string& text) const { return assertions::parse_predicate(text, &in); }

            NodePtr make(Rule r, prover::CqAssertion pre, ProgramPtr p, prover::CqAssertion post,
                         std::vector<NodePtr> premises, std::string label = "") const {
                auto n = std::make_shared<ProofNode>();
                n->rule = r;
                n->conclusion = {std::move(pre), std::move(p), std::move(post), prover::Mode::Total};
                n->premises = std::move(premises);
                n->label = std::move(label);
                return n;
            }

            // Uni instance strengthened to the descriptor precondition.
            NodePtr gate(const ProgramPtr& p, const ExprPtr& ctx, const Desc& before, const Desc& after) const {
                PredPtr post = pred(proj_text(after));
                PredPtr wp = assertions::kraus("F_U." + p->name, p->params, p->targets, {post});
                auto uni = make(Rule::Uni, {ctx, wp}, p, {ctx, post}, {}, syntax::to_string(*p));
                return make(Rule::Conseq, {ctx, pred(proj_text(before))}, p, {phi, post}, {uni});
            }

            NodePtr skip(const ProgramPtr& p, const ExprPtr& ctx, const Desc& d) const {
                PredPtr a = pred(proj_text(d));
                auto s = make(Rule::Skip, {ctx, a}, p, {ctx, a}, {}, "skip");
                return make(Rule::Conseq, {ctx, a}, p, {phi, a}, {s});
            }

            std::pair<NodePtr, Desc> prove(const ProgramPtr& p, const Desc& d) const {
                switch (p->kind) {
                    case Cmd::Gate: {
                        Desc e = apply(*p, d);
                        return {gate(p, phi, d, e), e};
                    }
                    case Cmd::Skip: {
                        PredPtr a = pred(proj_text(d));
                        return {make(Rule::Skip, {phi, a}, p, {phi, a}, {}), d};
                    }
                    case Cmd::Seq: {
                        auto [n1, d1] = prove(p->first, d);
                        auto [n2, d2] = prove(p->second, d1);
                        return {make(Rule::Seq, n1->conclusion.pre, p, n2->conclusion.post, {n1, n2}), d2};
                    }
                    case Cmd::If: {
                        bool taken_then = classical::as_bool(classical::eval_expr({}, *p->expr));
                        ExprPtr b_then = classical::conj(phi, p->expr);
                        ExprPtr b_else = classical::conj(phi, classical::negate(p->expr));
                        const ProgramPtr& live = taken_then ? p->first : p->second;
                        const ProgramPtr& dead = taken_then ? p->second : p->first;
                        auto [inner, e] = prove(live, d);
                        PredPtr pre = pred(proj_text(d));
                        PredPtr post = pred(proj_text(e));
                        auto live_node = make(Rule::Conseq, {taken_then ? b_then : b_else, pre}, live, {phi, post},
                                              {inner}, "taken branch");
                        ExprPtr dead_ctx = taken_then ? b_else : b_then;
                        NodePtr dead_node;
                        if (dead->kind == Cmd::Gate) {
                            dead_node = gate(dead, dead_ctx, d, e);
                        } else if (dead->kind == Cmd::Skip) {
                            auto s = make(Rule::Skip, {dead_ctx, pre}, dead, {dead_ctx, pre}, {}, "skip");
                            dead_node = make(Rule::Conseq, {dead_ctx, pre}, dead, {phi, post}, {s});
                        } else {
                            fail(ErrorKind::Schema, "untaken branch must be a single command");
                        }
                        dead_node = relabel(dead_node, "untaken branch");
                        std::vector<NodePtr> prem =
                            taken_then ? std::vector<NodePtr>{live_node, dead_node} : std::vector<NodePtr>{dead_node, live_node};
                        return {make(Rule::Cond, {phi, pre}, p, {phi, post}, prem), e};
                    }
                    default: fail(ErrorKind::Schema, "QFT program contains an unsupported command");
                }
            }

            static NodePtr relabel(const NodePtr& n, const std::string& label) {
                auto c = std::make_shared<ProofNode>(*n);
                c->label = label;
                return c;
            }

            NodePtr retarget(const NodePtr& n, const prover::CqAssertion& post) const {
                auto c = std::make_shared<ProofNode>(*n);
                c->conclusion.post = post;
                switch (n->rule) {
                    case Rule::Conseq: return c;
                    case Rule::Seq: c->premises[1] = retarget(n->premises[1], post); return c;
                    case Rule::Cond:
                        c->premises[0] = retarget(n->premises[0], post);
                        c->premises[1] = retarget(n->premises[1], post);
                        return c;
                    default: return make(Rule::Conseq, n->conclusion.pre, n->conclusion.program, post, {n});
                }
            }
        };

        ProgramPtr flat_qft(int n) {
            std::vector<ProgramPtr> cmds;
            for (int m = 1; m <= n; ++m) {
                cmds.push_back(syntax::gate("H", {}, {q(m)}));
                for (int r = m + 1; r <= n; ++r) cmds.push_back(syntax::gate("CR", {num(r - m + 1)}, {q(r), q(m)}));
            }
            if (n == 2) {
                cmds.push_back(syntax::gate("SWAP", {}, {q(1), q(2)}));
            } else if (n >= 3) {
                std::vector<SubscriptedVar> all;
                for (int k = 1; k <= n; ++k) all.push_back(q(k));
                cmds.push_back(syntax::gate("Reverse", {}, all));
            }
            return syntax::sequence(cmds);
        }

        // CR[q[m:l]] = if m = l then skip else CR[q[m:l-1]]; C(R_{l-m+1})[q[l], q[m]]
        ProgramPtr rotations(int m, int l) {
            if (m == l) return syntax::skip();
            return syntax::cond(classical::binary(BinaryOp::Eq, num(m), num(l)), syntax::skip(),
                                syntax::seq(rotations(m, l - 1), syntax::gate("CR", {num(l - m + 1)}, {q(l), q(m)})));
        }

        // QFT*[q[m:n]] = if m = n then H[q[n]] else H[q[m]]; CR[q[m:n]]; QFT*[q[m+1:n]]
        ProgramPtr qft_star(int m, int n) {
            if (m == n) return syntax::gate("H", {}, {q(n)});
            return syntax::cond(classical::binary(BinaryOp::Eq, num(m), num(n)), syntax::gate("H", {}, {q(n)}),
                                syntax::sequence({syntax::gate("H", {}, {q(m)}), rotations(m, n), qft_star(m + 1, n)}));
        }

        ProgramPtr recursive_qft(int n) {
            std::vector<SubscriptedVar> all;
            for (int k = 1; k <= n; ++k) all.push_back(q(k));
            return syntax::seq(qft_star(1, n), syntax::gate("Reverse", {}, all));
        }

    }  // namespace

    QftExample generate_qft(int n, const QftOptions& opt) {
        if (n < 1 || n > 6) fail(ErrorKind::OutOfRange, "QFT size must be between 1 and 6, got " + std::to_string(n));
        QftExample ex;
        ex.n = n;
        std::string range = "(1.." + std::to_string(n) + ")";
        ex.interpretation = {
            {"classical_vars", {{"j", "Bits" + range}, {"n", "Int(" + std::to_string(n) + ".." + std::to_string(n) + ")"}}},
            {"quantum_vars", io::json::array({{{"name", "q"}, {"dim", 2}, {"index", {"Int" + range}}}})}};
        auto in = structures::load_interpretation(ex.interpretation);

        ProgramPtr prog = opt.recursive ? recursive_qft(n) : flat_qft(n);
        ex.program_text = syntax::to_string(*prog);
        // Parse back so the proof refers to exactly what the script will load.
        prog = syntax::parse_program(ex.program_text, &in);

        Desc d0(static_cast<std::size_t>(n));
        for (int k = 1; k <= n; ++k) d0[static_cast<std::size_t>(k - 1)] = {true, k, k};
        Builder b{in, syntax::parse_expr("1 <= n", &in)};
        auto [root, last] = b.prove(prog, d0);
        ex.pre_text = proj_text(d0);
        ex.post_text = proj_text(last, opt.wrong_phase);
        prover::CqAssertion target{classical::truth(), b.pred(ex.post_text)};
        root = b.retarget(root, target);

        ex.script = {{"interpretation", ex.interpretation},
                     {"mode", "total"},
                     {"programs", {{"QFT", ex.program_text}}},
                     {"proof", prover::node_to_json(*root)}};
        return ex;
    }

    bool QftOutcome::ok(double tol) const {
        return check.verdict == prover::NodeVerdict::Accepted && fuzz.verdict == FuzzVerdict::Consistent &&
               max_deviation <= tol && trace_preserved;
    }

    QftOutcome run_qft_example(const QftExample& ex, const RunConfig& cfg) {
        QftOutcome out;
        auto script = prover::load_script(ex.script);
        const auto& in = *script.interp;
        out.check = prover::check_script(*script.root, in);
        out.fuzz = fuzz_triple(script.root->conclusion, in, cfg);

        const auto& t = script.root->conclusion;
        auto layout = in.full_layout();
        std::size_t dim = layout.dimension();
        for (std::size_t idx = 0; idx < dim; ++idx) {
            classical::BitArray bits{1, std::vector<bool>(static_cast<std::size_t>(ex.n))};
            for (int k = 1; k <= ex.n; ++k) bits.bits[static_cast<std::size_t>(k - 1)] = (idx >> (ex.n - k)) & 1U;
            classical::ClassicalState sigma;
            sigma.set("j", bits);
            sigma.set("n", std::int64_t{ex.n});
            auto e = linalg::basis_vector(dim, idx);
            semantics::CqState input{sigma, linalg::DensityOperator::pure(layout, e)};
            auto res = semantics::run(in, t.program, input, {cfg.fuel, cfg.branch_cap, in.tolerances().prune});
            out.trace_preserved = out.trace_preserved && semantics::trace_non_increasing(res, input);
            double v = 0;
            for (const auto& item : res.items) {
                if (!classical::satisfies(item.sigma, *t.post.phi)) continue;
                auto b = assertions::eval_predicate(in, item.sigma, *t.post.a);
                if (b.defined) v += linalg::trace_product(b.op, b.layout, item.rho);
            }
            out.max_deviation = std::max(out.max_deviation, std::abs(v - 1.0));
            ++out.inputs;
        }
        return out;
    }

    io::json to_json(const QftExample& ex, const QftOutcome& out) {
        return io::json{{"n", ex.n},
                        {"program", ex.program_text},
                        {"pre", {{"phi", "1 <= n"}, {"A", ex.pre_text}}},
                        {"post", {{"phi", "true"}, {"A", ex.post_text}}},
                        {"check", prover::to_json(out.check)},
                        {"fuzz", to_json(out.fuzz)},
                        {"simulation",
                         {{"inputs", out.inputs},
                          {"max_deviation", out.max_deviation},
                          {"trace_non_increasing", out.trace_preserved}}},
                        {"ok", out.ok()}};
    }

}  // namespace qhl::harness
