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
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qhl/error.hpp"
#include "qhl/prover/proof.hpp"

namespace qhl::prover {

    using assertions::EntailResult;
    using assertions::PredKind;
    using assertions::PredPtr;
    using classical::BinaryOp;
    using classical::ExprPtr;
    using linalg::ComplexMatrix;
    using syntax::Cmd;

    const char* mode_name(Mode m) { return m == Mode::Partial ? "partial" : "total"; }

    Mode mode_from_name(const std::string& s) {
        if (s == "partial" || s == "par") return Mode::Partial;
        if (s == "total" || s == "tot") return Mode::Total;
        fail(ErrorKind::Schema, "unknown mode '" + s + "'");
    }

    namespace {
        constexpr const char* kRuleNames[] = {"Skip",    "Ass",     "Init",   "Uni",    "Meas",
                                              "Seq",     "Cond",    "LoopPar", "LoopTot", "Conseq",
                                              "Accum1",  "Accum2",  "Convex1", "Convex2"};
    }

    const char* rule_name(Rule r) { return kRuleNames[static_cast<int>(r)]; }

    Rule rule_from_name(const std::string& s) {
        for (int i = 0; i < 14; ++i)
            if (s == kRuleNames[i]) return static_cast<Rule>(i);
        if (s == "Ski") return Rule::Skip;
        fail(ErrorKind::Schema, "unknown rule '" + s + "'");
    }

    std::optional<std::size_t> rule_arity(Rule r) {
        switch (r) {
            case Rule::Skip:
            case Rule::Ass:
            case Rule::Init:
            case Rule::Uni:
            case Rule::Meas: return 0;
            case Rule::LoopPar:
            case Rule::Conseq: return 1;
            case Rule::Seq:
            case Rule::Cond:
            case Rule::LoopTot: return 2;
            default: return std::nullopt;  // one premise per Kraus branch
        }
    }

    const char* node_verdict_name(NodeVerdict v) {
        switch (v) {
            case NodeVerdict::Accepted: return "accepted";
            case NodeVerdict::Rejected: return "rejected";
            case NodeVerdict::Inconclusive: return "inconclusive";
        }
        return "?";
    }

    std::string to_string(const HoareTriple& t) {
        return "{" + assertions::to_string(t.pre) + "} " + syntax::to_string(*t.program) + " {" +
               assertions::to_string(t.post) + "}";
    }

    io::json to_json(const HoareTriple& t) {
        return io::json{{"pre", assertions::to_json(t.pre)},
                        {"program", syntax::to_string(*t.program)},
                        {"post", assertions::to_json(t.post)},
                        {"mode", mode_name(t.mode)}};
    }

    io::json to_json(const NodeReport& r) {
        io::json conds = io::json::array();
        for (const auto& c : r.conditions) {
            io::json j{{"name", c.name}, {"verdict", assertions::verdict_name(c.verdict)}};
            if (!c.detail.empty()) j["detail"] = c.detail;
            conds.push_back(std::move(j));
        }
        io::json j{{"path", r.path}, {"rule", rule_name(r.rule)}, {"verdict", node_verdict_name(r.verdict)},
                   {"side_conditions", std::move(conds)}};
        if (!r.label.empty()) j["label"] = r.label;
        if (!r.reason.empty()) j["reason"] = r.reason;
        return j;
    }

    io::json to_json(const CheckReport& r) {
        io::json nodes = io::json::array();
        for (const auto& n : r.nodes) nodes.push_back(to_json(n));
        std::size_t accepted = std::count_if(r.nodes.begin(), r.nodes.end(), [](const NodeReport& n) {
            return n.verdict == NodeVerdict::Accepted;
        });
        return io::json{{"verdict", node_verdict_name(r.verdict)},
                        {"nodes_total", r.nodes.size()},
                        {"nodes_accepted", accepted},
                        {"nodes", std::move(nodes)}};
    }

    // ---------------------------------------------------------------- proportionality

    ProportionalResult proportional_ops(const std::vector<ComplexMatrix>& f, const std::vector<ComplexMatrix>& fp,
                                        std::size_t samples, std::uint64_t seed, const linalg::Tolerances& tol) {
        if (fp.size() != 1)
            fail(ErrorKind::MalformedWitness,
                 "F' must have rank 1, got " + std::to_string(fp.size()) + " operators");
        const ComplexMatrix& g = fp[0];
        for (const auto& fi : f)
            if (fi.rows() != g.rows() || fi.cols() != g.cols())
                fail(ErrorKind::DimensionMismatch, "F and F' act on spaces of different dimension");

        std::vector<std::size_t> open;
        double gg = g.squaredNorm();
        for (std::size_t i = 0; i < f.size(); ++i) {
            bool ok;
            if (gg < 1e-300) {
                ok = f[i].norm() < 1e-9;
            } else {
                linalg::Complex lambda = (g.adjoint() * f[i]).trace() / gg;
                ok = (f[i] - lambda * g).norm() < 1e-9 && std::abs(lambda) <= 1 + 1e-9;
            }
            if (!ok) open.push_back(i);
        }
        if (open.empty()) return {Verdict::Holds, "every F_i is a scalar multiple of F' with modulus at most 1", {}};

        auto dim = static_cast<std::size_t>(g.rows());
        std::mt19937_64 rng(seed);
        auto violates = [&](const ComplexMatrix& rho, std::size_t i) {
            ComplexMatrix d = g.adjoint() * rho * g - f[i].adjoint() * rho * f[i];
            d = 0.5 * (d + d.adjoint());
            return linalg::min_eigenvalue(d, tol.herm) < -tol.psd;
        };
        std::size_t tried = 0;
        for (std::size_t k = 0; k < dim + samples; ++k) {
            ComplexMatrix rho;
            std::string what;
            if (k < dim) {
                linalg::ComplexVector e = linalg::basis_vector(dim, k);
                rho = linalg::outer(e, e);
                what = "basis state |" + std::to_string(k) + ">";
            } else if ((k - dim) % 2 == 0) {
                linalg::ComplexVector v = linalg::random_unit_vector(dim, rng);
                rho = linalg::outer(v, v);
                what = "random pure state #" + std::to_string(k - dim);
            } else {
                std::size_t rank = 1 + static_cast<std::size_t>(rng() % dim);
                rho = linalg::random_ginibre_density(dim, rng, rank);
                what = "random mixed state #" + std::to_string(k - dim);
            }
            ++tried;
            for (std::size_t i : open)
                if (violates(rho, i))
                    return {Verdict::Fails, "F_" + std::to_string(i) + " not dominated on " + what, {}};
        }
        return {Verdict::Inconclusive,
                "no counterexample among " + std::to_string(tried) + " states, but F_" + std::to_string(open[0]) +
                    " is not a scalar multiple of F'",
                {}};
    }

    ProportionalResult check_proportional(const Interpretation& in, const std::string& f, const std::string& fp,
                                          const std::vector<ExprPtr>& params,
                                          const std::vector<syntax::SubscriptedVar>& targets,
                                          const ExprPtr& context, const Grids& grids, std::size_t samples,
                                          std::uint64_t seed) {
        std::set<std::string> names;
        if (context) classical::collect_free_vars(*context, names);
        for (const auto& p : params) classical::collect_free_vars(*p, names);
        for (const auto& q : targets) syntax::collect_vars(q, names);
        auto domain = classical::Domain::over(names, in.types(), grids);
        if (!domain.enumerable()) return {Verdict::Inconclusive, domain.reason(), {}};
        if (domain.size() > in.limits().domain_cap)
            fail(ErrorKind::DomainTooLarge, "proportionality domain has " + std::to_string(domain.size()) +
                                                " states");
        ProportionalResult last{Verdict::Holds, "no classical state satisfies the context", {}};
        bool any_inconclusive = false;
        for (std::uint64_t i = 0; i < domain.size(); ++i) {
            classical::ClassicalState sigma = domain.state(i);
            if (context && !classical::satisfies(sigma, *context)) continue;
            std::vector<classical::Value> args;
            for (const auto& p : params) args.push_back(classical::eval_expr(sigma, *p));
            structures::Dims dims;
            for (const auto& q : targets) dims.push_back(in.resolve(q, sigma).dim);
            auto r = proportional_ops(in.kraus_ops(f, args, dims), in.kraus_ops(fp, args, dims), samples,
                                      seed + i, in.tolerances());
            if (r.verdict == Verdict::Fails) {
                r.witness = sigma;
                r.reason += " at " + sigma.to_string();
                return r;
            }
            if (r.verdict == Verdict::Inconclusive && !any_inconclusive) {
                any_inconclusive = true;
                last = r;
                last.witness = sigma;
            } else if (!any_inconclusive) {
                last = r;
            }
        }
        if (domain.grid_assumed() && last.verdict == Verdict::Holds) last.reason += " (grid assumed)";
        return last;
    }

    // ---------------------------------------------------------------- rules

    namespace {

        bool same_assertion(const CqAssertion& a, const CqAssertion& b) {
            return classical::same_expr(a.phi, b.phi) && assertions::same_predicate(*a.a, *b.a);
        }

        std::string text(const ExprPtr& e) { return e ? classical::to_string(*e) : "true"; }
        std::string text(const PredPtr& a) { return assertions::to_string(*a); }
        std::string text(const CqAssertion& c) { return assertions::to_string(c); }

        class Checker {
           public:
            Checker(const ProofNode& n, const Interpretation& in, NodeReport& r) : m_n(n), m_in(in), m_r(r) {}

            void run() {
                auto arity = rule_arity(m_n.rule);
                if (arity && m_n.premises.size() != *arity)
                    fail(ErrorKind::RuleArity, std::string(rule_name(m_n.rule)) + " takes " +
                                                   std::to_string(*arity) + " premises, got " +
                                                   std::to_string(m_n.premises.size()));
                for (const auto& p : m_n.premises)
                    if (!p) fail(ErrorKind::Schema, "null premise");
                switch (m_n.rule) {
                    case Rule::Skip: skip(); break;
                    case Rule::Ass: ass(); break;
                    case Rule::Init: init(); break;
                    case Rule::Uni: uni(); break;
                    case Rule::Meas: meas(); break;
                    case Rule::Seq: seq(); break;
                    case Rule::Cond: cond(); break;
                    case Rule::LoopPar: loop_par(); break;
                    case Rule::LoopTot: loop_tot(); break;
                    case Rule::Conseq: conseq(); break;
                    case Rule::Accum1: accum1(); break;
                    case Rule::Accum2: accum2(); break;
                    case Rule::Convex1: convex(true); break;
                    case Rule::Convex2: convex(false); break;
                }
            }

           private:
            const HoareTriple& c() const { return m_n.conclusion; }
            const HoareTriple& prem(std::size_t i) const { return m_n.premises[i]->conclusion; }
            const syntax::Program& prog() const { return *c().program; }

            void require(const std::string& name, bool ok, const std::string& detail = "") {
                m_r.conditions.push_back({name, ok ? Verdict::Holds : Verdict::Fails, ok ? "" : detail});
            }

            void same_phi(const std::string& name, const ExprPtr& got, const ExprPtr& want) {
                require(name, classical::same_expr(got, want), "expected " + text(want) + ", got " + text(got));
            }

            void same_pred(const std::string& name, const PredPtr& got, const PredPtr& want) {
                require(name, assertions::same_predicate(*got, *want),
                        "expected " + text(want) + ", got " + text(got));
            }

            void same_ass(const std::string& name, const CqAssertion& got, const CqAssertion& want) {
                require(name, same_assertion(got, want), "expected " + text(want) + ", got " + text(got));
            }

            void same_prog(const std::string& name, const ProgramPtr& got, const ProgramPtr& want) {
                require(name, syntax::same_program(*got, *want),
                        "expected " + syntax::to_string(*want) + ", got " + syntax::to_string(*got));
            }

            void command(Cmd kind, const char* what) {
                if (prog().kind != kind)
                    fail(ErrorKind::Schema, std::string("conclusion program must be ") + what + ", got " +
                                                syntax::to_string(prog()));
            }

            void record(const std::string& name, const EntailResult& e) {
                std::string detail = e.reason;
                if (e.witness) detail += (detail.empty() ? "" : " ") + std::string("at ") + e.witness->to_string();
                if (e.grid_assumed && e.verdict == Verdict::Holds) detail = "grid assumed";
                m_r.conditions.push_back({name, e.verdict, detail});
            }

            void entail(const std::string& name, const CqAssertion& a, const CqAssertion& b) {
                record(name, assertions::cq_entails(m_in, a, b, m_n.witnesses.grids));
            }

            void validity(const std::string& name, const ExprPtr& phi) {
                record(name, assertions::valid(m_in, phi, m_n.witnesses.grids));
            }

            void skip() {
                command(Cmd::Skip, "skip");
                same_ass("pre = post", c().pre, c().post);
            }

            void ass() {
                command(Cmd::Assign, "an assignment");
                const auto& x = prog().name;
                const auto& e = prog().expr;
                same_phi("pre.phi = post.phi[e/x]", c().pre.phi, classical::subst(c().post.phi, x, e));
                same_pred("pre.A = post.A[e/x]", c().pre.a, assertions::subst_predicate(c().post.a, x, e));
            }

            void init() {
                command(Cmd::Init, "an initialisation");
                same_phi("pre.phi = post.phi", c().pre.phi, c().post.phi);
                same_pred("pre.A = F_B[q](post.A)", c().pre.a,
                          assertions::kraus("F_B", {}, prog().targets, {c().post.a}));
            }

            void uni() {
                command(Cmd::Gate, "a unitary");
                same_phi("pre.phi = post.phi", c().pre.phi, c().post.phi);
                same_pred("pre.A = F_U(t)[q](post.A)", c().pre.a,
                          assertions::kraus("F_U." + prog().name, prog().params, prog().targets, {c().post.a}));
            }

            void meas() {
                command(Cmd::Measure, "a measurement");
                const std::string& x = prog().name;
                const classical::Expr& post = *c().post.phi;
                ExprPtr phi0 = classical::truth();
                const classical::Expr* eq = &post;
                if (post.kind == classical::ExprKind::Binary && post.binary == BinaryOp::And) {
                    phi0 = post.args[0];
                    eq = post.args[1].get();
                }
                if (!(eq->kind == classical::ExprKind::Binary && eq->binary == BinaryOp::Eq &&
                      eq->args[0]->kind == classical::ExprKind::Var && eq->args[0]->name == x &&
                      eq->args[1]->kind == classical::ExprKind::Var))
                    fail(ErrorKind::Schema, "post.phi must have the form phi && " + x + " = y, got " + text(c().post.phi));
                std::string y = eq->args[1]->name;
                if (m_n.witnesses.y && *m_n.witnesses.y != y)
                    fail(ErrorKind::MalformedWitness,
                         "witness y = " + *m_n.witnesses.y + " but the postcondition equates " + x + " with " + y);

                std::set<std::string> taken = classical::free_vars(*phi0);
                auto cva = assertions::cv(*c().post.a);
                taken.insert(cva.begin(), cva.end());
                taken.insert(x);
                require("y fresh: " + y + " not in free(phi) + cv(A) + {" + x + "}", !taken.count(y),
                        y + " occurs in the excluded set");

                ExprPtr yv = classical::var(y);
                same_phi("pre.phi = phi[y/x]", c().pre.phi, classical::subst(phi0, x, yv));
                same_pred("pre.A = F_M(y)[q](A[y/x])", c().pre.a,
                          assertions::kraus("F_M." + prog().symbol, {yv}, prog().targets,
                                            {assertions::subst_predicate(c().post.a, x, yv)}));
            }

            void seq() {
                command(Cmd::Seq, "a sequence");
                same_prog("premise 0 program", prem(0).program, prog().first);
                same_prog("premise 1 program", prem(1).program, prog().second);
                same_ass("premise 0 pre = pre", prem(0).pre, c().pre);
                same_ass("premise 0 post = premise 1 pre", prem(1).pre, prem(0).post);
                same_ass("premise 1 post = post", prem(1).post, c().post);
            }

            void cond() {
                command(Cmd::If, "a conditional");
                const ExprPtr& b = prog().expr;
                same_prog("premise 0 program", prem(0).program, prog().first);
                same_prog("premise 1 program", prem(1).program, prog().second);
                same_phi("premise 0 pre.phi = phi && b", prem(0).pre.phi, classical::conj(c().pre.phi, b));
                same_phi("premise 1 pre.phi = phi && !b", prem(1).pre.phi,
                         classical::conj(c().pre.phi, classical::negate(b)));
                same_pred("premise 0 pre.A = A", prem(0).pre.a, c().pre.a);
                same_pred("premise 1 pre.A = A", prem(1).pre.a, c().pre.a);
                same_ass("premise 0 post = post", prem(0).post, c().post);
                same_ass("premise 1 post = post", prem(1).post, c().post);
            }

            // Shared by both loop rules: invariant premise and conclusion shape.
            void loop_common() {
                command(Cmd::While, "a loop");
                const ExprPtr& b = prog().expr;
                const ExprPtr& phi = c().pre.phi;
                same_prog("premise 0 program", prem(0).program, prog().first);
                same_phi("premise 0 pre.phi = phi && b", prem(0).pre.phi, classical::conj(phi, b));
                same_pred("premise 0 pre.A = A", prem(0).pre.a, c().pre.a);
                same_ass("premise 0 post = (phi, A)", prem(0).post, c().pre);
                same_phi("post.phi = phi && !b", c().post.phi, classical::conj(phi, classical::negate(b)));
                same_pred("post.A = A", c().post.a, c().pre.a);
            }

            void loop_par() {
                if (c().mode == Mode::Total)
                    fail(ErrorKind::Schema, "LoopPar is not a rule of the total-correctness system");
                loop_common();
            }

            void loop_tot() {
                loop_common();
                const auto& w = m_n.witnesses;
                if (!w.t || !w.z) fail(ErrorKind::MalformedWitness, "LoopTot needs witnesses t and z");
                const ExprPtr& b = prog().expr;
                const ExprPtr& phi = c().pre.phi;
                const std::string& z = *w.z;
                ExprPtr zv = classical::var(z);

                auto t_kind = classical::infer_kind(*w.t, m_in.types());
                require("t integer-typed", t_kind == classical::ValueKind::Int,
                        "variant " + text(w.t) + " is not an integer expression");
                const auto* zt = m_in.types().find(z);
                require("z integer variable", zt && zt->kind == classical::TypeKind::Int,
                        z + " is not declared with an integer type");

                std::set<std::string> excluded;
                classical::collect_free_vars(*phi, excluded);
                classical::collect_free_vars(*b, excluded);
                classical::collect_free_vars(*w.t, excluded);
                auto cvp = syntax::classical_vars(prog());
                excluded.insert(cvp.begin(), cvp.end());
                require("z fresh", !excluded.count(z),
                        z + " occurs in free(phi), var(b), var(t) or cv(P)");

                same_prog("premise 1 program", prem(1).program, prog().first);
                same_phi("premise 1 pre.phi = phi && b && t = z", prem(1).pre.phi,
                         classical::conj(classical::conj(phi, b), classical::binary(BinaryOp::Eq, w.t, zv)));
                same_pred("premise 1 pre.A = A", prem(1).pre.a, c().pre.a);
                same_phi("premise 1 post.phi = t < z", prem(1).post.phi, classical::binary(BinaryOp::Lt, w.t, zv));
                same_pred("premise 1 post.A = A", prem(1).post.a, c().pre.a);

                validity("phi -> t >= 0",
                         classical::binary(BinaryOp::Implies, phi,
                                           classical::binary(BinaryOp::Ge, w.t, classical::lit(std::int64_t{0}))));
            }

            void conseq() {
                same_prog("premise program", prem(0).program, c().program);
                entail("(phi', A') |= (phi, A)", c().pre, prem(0).pre);
                entail("(psi, B) |= (psi', B')", prem(0).post, c().post);
            }

            // Premise programs agree with the conclusion; returns k.
            std::size_t branches(const PredPtr& pre_a, const char* what) {
                if (pre_a->kind != PredKind::Kraus)
                    fail(ErrorKind::Schema, std::string("pre.A must be ") + what + ", got " + text(pre_a));
                std::size_t k = pre_a->args.size();
                if (m_n.premises.size() != k)
                    fail(ErrorKind::RuleArity, std::string(rule_name(m_n.rule)) + " needs one premise per branch: " +
                                                   std::to_string(k) + " branches, " +
                                                   std::to_string(m_n.premises.size()) + " premises");
                if (k == 0) fail(ErrorKind::RuleArity, "no branches");
                for (std::size_t i = 0; i < k; ++i) {
                    std::string p = "premise " + std::to_string(i);
                    same_prog(p + " program", prem(i).program, c().program);
                    same_phi(p + " pre.phi = phi", prem(i).pre.phi, c().pre.phi);
                    same_pred(p + " pre.A = A_" + std::to_string(i), prem(i).pre.a, pre_a->args[i]);
                }
                return k;
            }

            void exclusive(std::size_t k) {
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = i + 1; j < k; ++j)
                        validity("psi_" + std::to_string(i) + " and psi_" + std::to_string(j) + " exclusive",
                                 classical::negate(classical::conj(prem(i).post.phi, prem(j).post.phi)));
            }

            ExprPtr disjunction(std::size_t k) {
                ExprPtr d = prem(0).post.phi;
                for (std::size_t i = 1; i < k; ++i) d = classical::disj(d, prem(i).post.phi);
                return d;
            }

            void disjoint_from_program(const std::vector<syntax::SubscriptedVar>& targets) {
                auto qv = syntax::quantum_vars(prog());
                for (const auto& q : targets) {
                    auto ref = syntax::qvar_ref(q);
                    bool clash = std::any_of(qv.begin(), qv.end(),
                                             [&](const syntax::QVarRef& r) { return syntax::may_overlap(ref, r); });
                    require(syntax::to_string(q) + " not in qv(P)", !clash,
                            syntax::to_string(q) + " may denote a system used by the program");
                }
            }

            // The symbol's parameters and target subscripts must mean the same before and after P.
            void parameters_unmodified(const PredPtr& a) {
                std::set<std::string> used;
                for (const auto& p : a->params) classical::collect_free_vars(*p, used);
                for (const auto& q : a->targets) syntax::collect_vars(q, used);
                auto mod = syntax::modified_vars(prog());
                for (const auto& v : used)
                    require(v + " not modified by P", !mod.count(v), "the program assigns " + v);
            }

            void accum1() {
                const PredPtr& pa = c().pre.a;
                std::size_t k = branches(pa, "a Kraus application F(t)[q]({A_i})");
                const PredPtr& b = prem(0).post.a;
                for (std::size_t i = 1; i < k; ++i)
                    same_pred("premise " + std::to_string(i) + " post.A = B", prem(i).post.a, b);
                const PredPtr& qa = c().post.a;
                if (qa->kind != PredKind::Kraus || qa->args.size() != 1)
                    fail(ErrorKind::Schema, "post.A must be F'(t)[q](B), got " + text(qa));
                require("same parameters and targets for F and F'",
                        qa->params.size() == pa->params.size() &&
                            std::equal(qa->params.begin(), qa->params.end(), pa->params.begin(),
                                       [](const ExprPtr& x, const ExprPtr& y) { return classical::same_expr(x, y); }) &&
                            syntax::same_qvars(qa->targets, pa->targets),
                        "F and F' must be applied to the same t and q");
                same_pred("post.A = F'(t)[q](B)", qa->args[0], b);
                same_phi("post.phi = psi_1 || ... || psi_k", c().post.phi, disjunction(k));
                exclusive(k);
                disjoint_from_program(pa->targets);
                parameters_unmodified(pa);
                auto pr = check_proportional(m_in, pa->name, qa->name, pa->params, pa->targets, c().pre.phi,
                                             m_n.witnesses.grids, m_n.witnesses.samples, m_n.witnesses.seed);
                m_r.conditions.push_back({pa->name + " prop " + qa->name, pr.verdict, pr.reason});
            }

            void accum2() {
                const PredPtr& pa = c().pre.a;
                std::size_t k = branches(pa, "a Kraus application F(t)[q]({A_i})");
                const PredPtr& qa = c().post.a;
                if (qa->kind != PredKind::Kraus || qa->args.size() != k)
                    fail(ErrorKind::Schema, "post.A must be F(t)[q]({B_i}) with " + std::to_string(k) +
                                                " branches, got " + text(qa));
                std::vector<PredPtr> bs;
                for (std::size_t i = 0; i < k; ++i) {
                    std::string p = "premise " + std::to_string(i);
                    same_phi(p + " post.phi = psi", prem(i).post.phi, c().post.phi);
                    bs.push_back(prem(i).post.a);
                }
                same_pred("post.A = F(t)[q]({B_i})", qa, assertions::kraus(pa->name, pa->params, pa->targets, bs));
                disjoint_from_program(pa->targets);
                parameters_unmodified(pa);
            }

            std::vector<double> weights(const PredPtr& a, const char* where) {
                if (a->kind != PredKind::Kraus || a->name != "Mix" || !a->targets.empty())
                    fail(ErrorKind::Schema, std::string(where) + " must be Mix(p_1, ..., p_k){A_1, ..., A_k}, got " +
                                                text(a));
                std::vector<double> p;
                for (const auto& e : a->params) {
                    if (!classical::free_vars(*e).empty())
                        fail(ErrorKind::MalformedWitness, "weight " + text(e) + " is not a closed expression");
                    p.push_back(classical::as_real(classical::eval_expr({}, *e)));
                }
                if (p.size() != a->args.size())
                    fail(ErrorKind::ArityMismatch, "Mix has " + std::to_string(p.size()) + " weights and " +
                                                       std::to_string(a->args.size()) + " branches");
                bool nonneg = std::all_of(p.begin(), p.end(), [](double x) { return x >= 0; });
                double sum = 0;
                for (double x : p) sum += x;
                require("weights nonnegative", nonneg, "a weight is negative");
                require("weights sum to at most 1", sum <= 1 + 1e-12, "sum is " + std::to_string(sum));
                return p;
            }

            void convex(bool first) {
                const PredPtr& pa = c().pre.a;
                auto p = weights(pa, "pre.A");
                std::size_t k = branches(pa, "Mix(p){A_i}");
                const PredPtr& qa = c().post.a;
                if (first) {
                    const PredPtr& b = prem(0).post.a;
                    for (std::size_t i = 1; i < k; ++i)
                        same_pred("premise " + std::to_string(i) + " post.A = B", prem(i).post.a, b);
                    if (qa->kind != PredKind::Kraus || qa->name != "Scale" || qa->params.size() != 1 ||
                        qa->args.size() != 1 || !qa->targets.empty())
                        fail(ErrorKind::Schema, "post.A must be Scale(max p){B}, got " + text(qa));
                    const ExprPtr& s = qa->params[0];
                    if (!classical::free_vars(*s).empty())
                        fail(ErrorKind::MalformedWitness, "scale " + text(s) + " is not a closed expression");
                    double want = *std::max_element(p.begin(), p.end());
                    double got = classical::as_real(classical::eval_expr({}, *s));
                    require("scale = max p_i", std::abs(got - want) <= 1e-12,
                            "expected " + std::to_string(want) + ", got " + std::to_string(got));
                    same_pred("post.A = Scale(max p){B}", qa->args[0], b);
                    same_phi("post.phi = psi_1 || ... || psi_k", c().post.phi, disjunction(k));
                    exclusive(k);
                } else {
                    auto q = weights(qa, "post.A");
                    require("same weights before and after",
                            q.size() == p.size() && std::equal(p.begin(), p.end(), q.begin()),
                            "weights differ");
                    std::vector<PredPtr> bs;
                    for (std::size_t i = 0; i < k; ++i) {
                        same_phi("premise " + std::to_string(i) + " post.phi = psi", prem(i).post.phi, c().post.phi);
                        bs.push_back(prem(i).post.a);
                    }
                    same_pred("post.A = Mix(p){B_i}", qa, assertions::kraus("Mix", qa->params, {}, bs));
                }
            }

            const ProofNode& m_n;
            const Interpretation& m_in;
            NodeReport& m_r;
        };

        void finish(NodeReport& r) {
            for (const auto& c : r.conditions) {
                if (c.verdict == Verdict::Fails) {
                    r.verdict = NodeVerdict::Rejected;
                    if (r.reason.empty()) r.reason = c.name + (c.detail.empty() ? "" : ": " + c.detail);
                }
            }
            if (r.verdict == NodeVerdict::Rejected) return;
            for (const auto& c : r.conditions) {
                if (c.verdict == Verdict::Inconclusive) {
                    r.verdict = NodeVerdict::Inconclusive;
                    if (r.reason.empty()) r.reason = c.name + (c.detail.empty() ? "" : ": " + c.detail);
                }
            }
        }

        void walk(const ProofNode& n, const Interpretation& in, const std::string& path, CheckReport& out) {
            for (std::size_t i = 0; i < n.premises.size(); ++i)
                if (n.premises[i]) walk(*n.premises[i], in, path + "." + std::to_string(i), out);
            NodeReport r = check_node(n, in);
            r.path = path;
            out.nodes.push_back(std::move(r));
        }

    }  // namespace

    NodeReport check_node(const ProofNode& node, const Interpretation& in) {
        NodeReport r;
        r.rule = node.rule;
        r.label = node.label;
        try {
            if (!node.conclusion.program || !node.conclusion.pre.a || !node.conclusion.post.a)
                fail(ErrorKind::Schema, "incomplete conclusion");
            Checker(node, in, r).run();
            finish(r);
        } catch (const Error& e) {
            std::string why = e.what();
            if (e.kind() == ErrorKind::DomainTooLarge) {
                r.verdict = NodeVerdict::Inconclusive;
            } else {
                r.verdict = NodeVerdict::Rejected;
            }
            r.reason = why;
        }
        return r;
    }

    CheckReport check_script(const ProofNode& root, const Interpretation& in) {
        CheckReport out;
        walk(root, in, "root", out);
        bool inconclusive = false;
        for (const auto& n : out.nodes) {
            if (n.verdict == NodeVerdict::Rejected) {
                out.verdict = NodeVerdict::Rejected;
                return out;
            }
            if (n.verdict == NodeVerdict::Inconclusive) inconclusive = true;
        }
        out.verdict = inconclusive ? NodeVerdict::Inconclusive : NodeVerdict::Accepted;
        return out;
    }

}  // namespace qhl::prover
