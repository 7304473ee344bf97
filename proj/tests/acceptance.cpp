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
// Acceptance driver: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qhl/assertions/eval.hpp"
#include "qhl/error.hpp"
#include "qhl/harness/fuzz.hpp"
#include "qhl/harness/qft.hpp"
#include "qhl/semantics/semantics.hpp"
#include "qhl/structures/loader.hpp"
#include "support/gen.hpp"

namespace {

    using namespace qhl;
    using Clock = std::chrono::steady_clock;

    struct Outcome {
        bool pass = true;
        std::string detail;
    };

    struct TraceLedger {
        std::size_t runs = 0;
        std::size_t violations = 0;
        double worst = -1e300;

        void record(const semantics::OutcomeMultiset& out, const semantics::CqState& in) {
            ++runs;
            double excess = out.item_trace() + out.residual_trace() - in.trace();
            worst = std::max(worst, excess);
            if (!semantics::trace_non_increasing(out, in, 1e-12)) ++violations;
        }
    };

    TraceLedger g_trace;
    int g_failures = 0;

    void report(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        if (limit_s > 0 && secs >= limit_s) {
            o.pass = false;
            o.detail += "; over the time limit";
        }
        if (!o.pass) ++g_failures;
        std::printf("%s  %d  %s: %s [%.2f s", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), secs);
        if (limit_s > 0) std::printf(", limit %.0f s", limit_s);
        std::printf("]\n");
        std::fflush(stdout);
    }

    std::string fmt(const char* f, double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, f, v);
        return buf;
    }

    // Simulates every basis input of a generated QFT example and feeds the trace ledger.
    void qft_traces(const harness::QftExample& ex) {
        auto in = structures::load_interpretation(ex.interpretation);
        auto p = syntax::parse_program(ex.program_text, &in);
        auto layout = in.full_layout();
        for (std::size_t j = 0; j < layout.dimension(); ++j) {
            classical::BitArray bits{1, {}};
            for (int r = 1; r <= ex.n; ++r) bits.bits.push_back((j >> (ex.n - r)) & 1);
            semantics::CqState s{classical::ClassicalState({{"j", bits}, {"n", classical::Value(std::int64_t(ex.n))}}),
                                 linalg::DensityOperator::pure(layout, linalg::basis_vector(layout.dimension(), j))};
            g_trace.record(semantics::run(in, p, s), s);
        }
    }

    Outcome qft_end_to_end() {
        std::string detail;
        bool ok = true;
        for (int n = 1; n <= 4; ++n) {
            auto ex = harness::generate_qft(n);
            auto out = harness::run_qft_example(ex);
            bool accepted = out.check.verdict == prover::NodeVerdict::Accepted;
            bool agree = out.max_deviation <= 1e-9 && out.inputs == (std::size_t{1} << n);
            ok = ok && accepted && agree && out.trace_preserved;
            detail += "n=" + std::to_string(n) + (accepted ? " accepted" : " NOT accepted") + " dev " +
                      fmt("%.1e", out.max_deviation) + (n < 4 ? ", " : "");
            qft_traces(ex);
        }
        return {ok, detail};
    }

    Outcome substitution_lemma() {
        testgen::Rng rng(2024);
        auto in = testgen::small_interp();
        auto layout = in.full_layout();
        std::size_t cases = 0, defined = 0, wd_mismatch = 0, op_mismatch = 0;
        double worst = 0;
        while (cases < 500) {
            auto a = assertions::parse_predicate(testgen::predicate_text(rng, 3), &in);
            std::string x = testgen::var_name(rng);
            auto e = syntax::parse_expr(testgen::bounded(rng, 4), &in);
            auto sigma = testgen::random_sigma(rng);
            auto upd = classical::update(sigma, x, classical::eval_expr(sigma, *e), in.types());
            auto l = assertions::eval_predicate(in, sigma, *assertions::subst_predicate(a, x, e));
            auto r = assertions::eval_predicate(in, upd, *a);
            ++cases;
            if (l.defined != r.defined) {
                ++wd_mismatch;
                continue;
            }
            if (!l.defined) continue;
            ++defined;
            double d = linalg::max_abs_diff(assertions::extend(l, layout), assertions::extend(r, layout));
            worst = std::max(worst, d);
            if (d > 1e-12) ++op_mismatch;
        }
        return {wd_mismatch == 0 && op_mismatch == 0,
                std::to_string(cases) + " cases (" + std::to_string(defined) + " well-defined), " +
                    std::to_string(wd_mismatch) + " definedness mismatches, " + std::to_string(op_mismatch) +
                    " operator mismatches, max diff " + fmt("%.1e", worst)};
    }

    Outcome operational_vs_structural() {
        testgen::Rng rng(4048);
        auto in = testgen::small_interp();
        std::size_t programs = 0, disagree = 0, blocked = 0;
        while (programs < 200) {
            auto text = testgen::loop_free_program(rng, 5);
            auto p = syntax::parse_program(text, &in);
            if (syntax::command_count(*p) > 5) continue;
            auto s = testgen::random_cq_state(in, rng);
            auto a = semantics::run(in, p, s);
            auto b = semantics::structural_sem(in, p, s);
            ++programs;
            if (a.blocked_trace > 0) ++blocked;
            if (!semantics::same_multiset(a.items, b.items, 1e-12)) ++disagree;
            g_trace.record(a, s);
            g_trace.record(b, s);
        }
        return {disagree == 0, std::to_string(programs) + " programs, " + std::to_string(disagree) + " disagreements (" +
                                   std::to_string(blocked) + " with blocked branches)"};
    }

    Outcome trace_non_increase() {
        return {g_trace.violations == 0 && g_trace.runs > 0,
                std::to_string(g_trace.runs) + " runs, " + std::to_string(g_trace.violations) +
                    " violations, worst excess " + fmt("%.1e", g_trace.worst)};
    }

    void collect(const prover::NodePtr& n, std::vector<prover::NodePtr>& out) {
        out.push_back(n);
        for (const auto& p : n->premises) collect(p, out);
    }

    Outcome soundness_fuzz() {
        const std::string dir = QHL_CORPUS_DIR;
        std::vector<std::string> files;
        for (const auto& e : std::filesystem::directory_iterator(dir))
            if (e.path().extension() == ".json" && e.path().filename() != "interp.json") files.push_back(e.path().string());
        std::sort(files.begin(), files.end());

        std::set<prover::Rule> rules;
        std::size_t accepted = 0, triples = 0, inputs = 0, vacuous = 0, inconsistent = 0, bad_margins = 0;
        double worst = 0;
        harness::RunConfig cfg;
        cfg.samples = 100;
        cfg.keep_records = true;
        for (const auto& f : files) {
            auto s = prover::load_script_file(f);
            if (prover::check_script(*s.root, *s.interp).verdict == prover::NodeVerdict::Accepted) ++accepted;
            std::vector<prover::NodePtr> nodes;
            collect(s.root, nodes);
            for (const auto& n : nodes) {
                rules.insert(n->rule);
                auto r = harness::fuzz_triple(n->conclusion, *s.interp, cfg);
                ++triples;
                if (r.verdict == harness::FuzzVerdict::Vacuous) ++vacuous;
                if (r.verdict == harness::FuzzVerdict::Inconsistent) ++inconsistent;
                for (const auto& rec : r.records) {
                    if (rec.verdict == harness::InputVerdict::Skipped) continue;
                    ++inputs;
                    worst = std::min(worst, rec.margin);
                    if (rec.margin < -1e-7) ++bad_margins;
                }
            }
        }

        std::size_t mutants = 0, caught = 0;
        for (const auto& e : std::filesystem::directory_iterator(dir + "/mutants")) {
            if (e.path().extension() != ".json") continue;
            ++mutants;
            auto s = prover::load_script_file(e.path().string());
            bool rejected = prover::check_script(*s.root, *s.interp).verdict == prover::NodeVerdict::Rejected;
            bool flagged = harness::fuzz_triple(s.root->conclusion, *s.interp, cfg).verdict ==
                           harness::FuzzVerdict::Inconsistent;
            if (rejected || flagged) ++caught;
        }

        bool ok = files.size() >= 12 && accepted == files.size() && rules.size() == 14 && bad_margins == 0 &&
                  inconsistent == 0 && mutants == 3 && caught == 3;
        return {ok, std::to_string(accepted) + "/" + std::to_string(files.size()) + " scripts accepted, " +
                        std::to_string(rules.size()) + "/14 rules, " + std::to_string(triples) + " triples (" +
                        std::to_string(vacuous) + " vacuous), " + std::to_string(inputs) + " inputs, worst margin " +
                        fmt("%.2e", worst) + ", mutants caught " + std::to_string(caught) + "/" +
                        std::to_string(mutants)};
    }

    Outcome nt_convergence() {
        auto in = structures::Interpretation::with_builtins();
        in.declare_classical("x", classical::ClassicalType::integer(0, 1));
        in.declare_quantum({"q", 2, {}});
        linalg::ComplexVector plus = (linalg::basis_vector(2, 0) + linalg::basis_vector(2, 1)) / std::sqrt(2.0);
        semantics::CqState s{classical::ClassicalState({{"x", classical::Value(std::int64_t{1})}}),
                             linalg::DensityOperator::pure(in.full_layout(), plus)};
        auto repeat = syntax::parse_program("while x = 1 do x := M[q]; H[q] od", &in);
        auto spin = syntax::parse_program("while true do skip od", &in);
        double worst = 0, worst_spin = 0;
        for (std::size_t k = 1; k <= 10; ++k)
            worst = std::max(worst, std::abs(semantics::nt_lower_bound(in, repeat, s, {k}) - std::ldexp(1.0, -int(k))));
        for (std::size_t f = 0; f <= 20; ++f)
            worst_spin = std::max(worst_spin, std::abs(semantics::nt_lower_bound(in, spin, s, {f}) - 1.0));
        return {worst <= 1e-12 && worst_spin <= 1e-12,
                "max |NT - 2^-k| " + fmt("%.1e", worst) + " for k=1..10, while-true max |NT - 1| " + fmt("%.1e", worst_spin)};
    }

    Outcome distinctness() {
        auto in = structures::Interpretation::with_builtins();
        in.declare_classical("k", classical::ClassicalType::integer(0, 3));
        in.declare_quantum({"q", 2, {classical::ClassicalType::integer(-3, 9)}});
        auto p = syntax::parse_program("CNOT[q[2*k+1], q[4*k-3]]", &in);
        std::mt19937_64 rng(3);
        linalg::RegisterLayout l2({{"q[5]", 2}});
        semantics::CqState k2{classical::ClassicalState({{"k", classical::Value(std::int64_t{2})}}),
                              linalg::DensityOperator(l2, linalg::random_ginibre_density(2, rng))};
        linalg::RegisterLayout l0({{"q[1]", 2}, {"q[-3]", 2}});
        semantics::CqState k0{classical::ClassicalState({{"k", classical::Value(std::int64_t{0})}}),
                              linalg::DensityOperator(l0, linalg::random_ginibre_density(4, rng))};
        auto o2 = semantics::run(in, p, k2);
        auto o0 = semantics::run(in, p, k0);
        bool empty = o2.items.empty() && o2.residual.empty();
        bool one = o0.items.size() == 1 && std::abs(o0.items[0].trace() - k0.trace()) <= 1e-12;
        return {empty && one, "k=2: " + std::to_string(o2.items.size()) + " outputs; k=0: " +
                                  std::to_string(o0.items.size()) + " output, trace change " +
                                  fmt("%.1e", o0.items.empty() ? 1.0 : std::abs(o0.items[0].trace() - k0.trace()))};
    }

    Outcome equivalence_invariance() {
        auto flat = harness::generate_qft(3);
        auto rec = harness::generate_qft(3, {true, false});
        auto in = structures::load_interpretation(flat.interpretation);
        auto p1 = syntax::parse_program(flat.program_text, &in);
        auto p2 = syntax::parse_program(rec.program_text, &in);
        auto layout = in.full_layout();
        std::mt19937_64 rng(8);
        std::vector<semantics::CqState> inputs;
        for (std::size_t j = 0; j < 8; ++j) {
            classical::BitArray bits{1, {bool(j & 4), bool(j & 2), bool(j & 1)}};
            classical::ClassicalState sigma({{"j", bits}, {"n", classical::Value(std::int64_t{3})}});
            inputs.push_back({sigma, linalg::DensityOperator::pure(layout, linalg::basis_vector(8, j))});
            inputs.push_back({sigma, linalg::DensityOperator(layout, linalg::random_ginibre_density(8, rng, 1 + j % 4))});
        }
        auto eq = semantics::equivalent(in, p1, p2, inputs);
        bool same = eq.verdict == semantics::Equivalence::Equivalent;

        std::string verdicts;
        bool agree = true;
        for (int n = 1; n <= 4; ++n) {
            auto a = harness::run_qft_example(harness::generate_qft(n));
            auto b = harness::run_qft_example(harness::generate_qft(n, {true, false}));
            agree = agree && a.fuzz.verdict == b.fuzz.verdict && b.check.verdict == prover::NodeVerdict::Accepted;
            verdicts += std::string(n > 1 ? ", " : "") + "n=" + std::to_string(n) + " " +
                        harness::fuzz_verdict_name(a.fuzz.verdict) + "/" + harness::fuzz_verdict_name(b.fuzz.verdict);
        }
        return {same && agree, std::string("n=3 recursive vs flat ") + semantics::equivalence_name(eq.verdict) +
                                   " on " + std::to_string(inputs.size()) + " inputs; fuzz flat/recursive " + verdicts};
    }

}  // namespace

int main() {
    report(1, "QFT end-to-end", 10, qft_end_to_end);
    report(2, "substitution lemma", 5, substitution_lemma);
    report(3, "operational = structural semantics", 30, operational_vs_structural);
    report(4, "trace non-increase", 0, trace_non_increase);
    report(5, "soundness fuzz over the corpus", 60, soundness_fuzz);
    report(6, "NT convergence", 0, nt_convergence);
    report(7, "distinctness blocking", 0, distinctness);
    report(8, "equivalence invariance", 0, equivalence_invariance);
    std::printf("%d of 8 criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
