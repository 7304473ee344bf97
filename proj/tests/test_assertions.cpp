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
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qhl/assertions/eval.hpp"
#include "qhl/error.hpp"
#include "support/gen.hpp"

using namespace qhl::assertions;
using namespace qhl::linalg;
using qhl::classical::ClassicalState;
using qhl::classical::ClassicalType;
using qhl::classical::Value;
using qhl::syntax::parse_expr;
using qhl::testgen::pick;
using qhl::testgen::Rng;

namespace {

    ClassicalState xs(std::int64_t x, std::int64_t y = 0) {
        return ClassicalState({{"x", Value(x)}, {"y", Value(y)}});
    }

    std::set<std::string> sig_names(const std::vector<qhl::syntax::SubscriptedVar>& s) {
        std::set<std::string> out;
        for (const auto& q : s) out.insert(qhl::syntax::to_string(q));
        return out;
    }

    // Predicates on q[1], q[2] only, leaving q[3] for a tensor partner.
    std::string low_qubit(Rng& r) {
        switch (pick(r, 3)) {
            case 0: return "q[1]";
            case 1: return "q[2]";
            default: return "q[" + qhl::testgen::var_name(r) + " mod 2 + 1]";
        }
    }

    std::string low_pred(Rng& r, int depth) {
        std::string q = low_qubit(r);
        switch (depth <= 0 ? pick(r, 4) : pick(r, 8)) {
            case 0: return "[|" + qhl::testgen::bounded(r, 2, 1) + ">_" + q + "]";
            case 1: return std::string(pick(r, 2) ? "P0" : "P1") + "[" + q + "]";
            case 2: return "[(1 / sqrt(2)) |0>_" + q + " + (expi(pi * x / 2) / sqrt(2)) |1>_" + q + "]";
            case 3: return pick(r, 2) ? "I" : "O";
            case 4: return "~" + low_pred(r, depth - 1);
            case 5: return "F_U.Ry(" + qhl::testgen::angle(r) + ")[" + q + "]{" + low_pred(r, depth - 1) + "}";
            case 6: return "Mix(0.5, 0.5){" + low_pred(r, depth - 1) + ", " + low_pred(r, depth - 1) + "}";
            default: return "F_B[" + q + "]{" + low_pred(r, depth - 1) + ", " + low_pred(r, depth - 1) + "}";
        }
    }

    PredPtr P(const std::string& text, const Interpretation& in) { return parse_predicate(text, &in); }

    ComplexMatrix full(const Interpretation& in, const EvalResult& r) { return extend(r, in.full_layout()); }

    Interpretation four_level() {
        auto in = Interpretation::with_builtins();
        in.declare_quantum({"r", 4, {}});
        for (const char* p : {"p0", "p1", "s0", "s1"}) in.declare_classical(p, ClassicalType::real());
        return in;
    }

}  // namespace

TEST_CASE("signatures") {
    auto in = qhl::testgen::small_interp();
    CHECK(sig_names(sig(*parse_state("|0>_q[1]", &in))) == std::set<std::string>{"q[1]"});
    auto a = P("P0[q[x]] * [|1>_q[2]]", in);
    CHECK(sig_names(sig(*a)) == std::set<std::string>{"q[x]", "q[2]"});
    CHECK(sig_names(sig(*negation(a))) == sig_names(sig(*a)));
    CHECK(sig_names(sig(*P("F_U.H[q[3]]{I}", in))).count("q[3]"));
    CHECK(cv(*a) == std::set<std::string>{"x"});
}

TEST_CASE("eval_state examples") {
    auto in = Interpretation::with_builtins();
    in.declare_quantum({"q", 2, {ClassicalType::integer(1, 9)}});
    in.declare_classical("theta", ClassicalType::real());
    in.declare_classical("x", ClassicalType::real());
    in.declare_classical("n", ClassicalType::integer(1, 3));
    auto s = parse_state("(cos(theta / 2)) |x - 0.5>_q[3*n - 2] + (sin(theta / 2)) |x + 0.5>_q[3*n - 2]", &in);
    ClassicalState sigma({{"theta", Value(std::numbers::pi / 2)}, {"x", Value(0.5)}, {"n", Value(std::int64_t{3})}});
    auto v = eval_state(in, sigma, *s);
    REQUIRE(v.defined);
    CHECK(v.layout.ids() == std::vector<std::string>{"q[7]"});
    ComplexVector plus = (basis_vector(2, 0) + basis_vector(2, 1)) / std::sqrt(2.0);
    CHECK((v.vec - plus).norm() < 1e-12);

    CHECK_FALSE(eval_state(in, sigma, *parse_state("|0>_q[1] * |0>_q[1]", &in)).defined);
    auto h = eval_state(in, sigma, *parse_state("apply H[q[2]] (|0>_q[2])", &in));
    REQUIRE(h.defined);
    CHECK((h.vec - plus).norm() < 1e-12);
    // unnormalised sums are not well-defined
    CHECK_FALSE(eval_state(in, sigma, *parse_state("|0>_q[1] + |1>_q[1]", &in)).defined);
    CHECK_FALSE(eval_state(in, sigma, *parse_state("|2>_q[1]", &in)).defined);
}

TEST_CASE("eval_predicate examples") {
    auto in = four_level();
    ClassicalState sigma;
    for (int i = 0; i < 4; ++i) {
        auto r = eval_predicate(in, sigma, *P("[|" + std::to_string(i) + ">_r]", in));
        REQUIRE(r.defined);
        CHECK(approx_equal(r.op, outer(basis_vector(4, i), basis_vector(4, i)), 1e-15));
    }
    auto neg = eval_predicate(in, sigma, *P("~[|3>_r]", in));
    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    for (int i = 0; i < 3; ++i) expect += outer(basis_vector(4, i), basis_vector(4, i));
    CHECK(approx_equal(neg.op, expect, 1e-15));

    double p[4] = {0.1, 0.2, 0.3, 0.4};
    auto mix = eval_predicate(in, sigma, *P("Mix(0.1, 0.2, 0.3, 0.4){[|0>_r], [|1>_r], [|2>_r], [|3>_r]}", in));
    REQUIRE(mix.defined);
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) m(i, i) = p[i];
    CHECK(max_abs_diff(mix.op, m) < 1e-15);

    // sum_n |n><0| A_n |0><n| keeps only <0|A_n|0>
    auto fb = eval_predicate(in, sigma, *P("F_B[r]{I, O, P(0)[r], P(1)[r]}", in));
    REQUIRE(fb.defined);
    ComplexMatrix fbx = ComplexMatrix::Zero(4, 4);
    fbx(0, 0) = fbx(2, 2) = 1;
    CHECK(max_abs_diff(fb.op, fbx) < 1e-15);

    CHECK_FALSE(eval_predicate(in, sigma, *P("[|0>_r] * [|1>_r]", in)).defined);
}

TEST_CASE("substitution examples") {
    auto in = qhl::testgen::small_interp();
    auto a = P("[|x mod 2>_q[1]]", in);
    auto a0 = subst_predicate(a, "x", parse_expr("0"));
    for (std::int64_t x = 0; x < 4; ++x) {
        auto l = eval_predicate(in, xs(x), *a0), r = eval_predicate(in, xs(0), *a);
        CHECK(approx_equal(l.op, r.op, 0));
    }
    auto k = P("F_U.Rx(x)[q[x]]{P0[q[1]]}", in);
    auto k1 = subst_predicate(k, "x", parse_expr("x + 1"));
    CHECK(same_predicate(*k1, *P("F_U.Rx(x + 1)[q[x + 1]]{P0[q[1]]}", in)));
}

TEST_CASE("substitution lemma on random instances") {
    Rng rng(53);
    auto in = qhl::testgen::small_interp();
    auto typing = in.types();
    int defined = 0;
    for (int t = 0; t < 500; ++t) {
        auto a = P(qhl::testgen::predicate_text(rng, 3), in);
        std::string x = qhl::testgen::var_name(rng);
        auto e = parse_expr(qhl::testgen::bounded(rng, 4));
        auto sigma = qhl::testgen::random_sigma(rng);
        auto upd = qhl::classical::update(sigma, x, qhl::classical::eval_expr(sigma, *e), typing);
        auto l = eval_predicate(in, sigma, *subst_predicate(a, x, e));
        auto r = eval_predicate(in, upd, *a);
        REQUIRE(l.defined == r.defined);
        if (!l.defined) continue;
        ++defined;
        CHECK(max_abs_diff(full(in, l), full(in, r)) <= 1e-12);
    }
    // the generator has to produce a fair share of meaningful operators
    CHECK(defined > 150);
}

TEST_CASE("predicates denote effects and double negation is the identity") {
    Rng rng(59);
    auto in = qhl::testgen::small_interp();
    for (int t = 0; t < 300; ++t) {
        auto a = P(qhl::testgen::predicate_text(rng, 3), in);
        auto sigma = qhl::testgen::random_sigma(rng);
        auto r = eval_predicate(in, sigma, *a);
        if (!r.defined) continue;
        CHECK(is_psd(r.op, 1e-9));
        CHECK(is_psd(identity(r.op.rows()) - r.op, 1e-9));
        auto nn = eval_predicate(in, sigma, *negation(negation(a)));
        REQUIRE(nn.defined);
        CHECK(max_abs_diff(full(in, nn), full(in, r)) < 1e-12);
    }
}

TEST_CASE("entailment examples") {
    auto in = qhl::testgen::small_interp();
    auto a = P("[|x mod 2>_q[1]]", in);
    CHECK(entails(in, qhl::classical::truth(), *a, *a).verdict == Verdict::Holds);
    CHECK(entails(in, qhl::classical::falsity(), *P("I", in), *P("O", in)).verdict == Verdict::Holds);
    auto f = entails(in, qhl::classical::truth(), *P("I", in), *P("P0[q[1]]", in));
    CHECK(f.verdict == Verdict::Fails);
    CHECK(f.witness);

    CqAssertion pa{parse_expr("x = 1"), a};
    CHECK(cq_entails(in, pa, pa).verdict == Verdict::Holds);
    CqAssertion weaker{parse_expr("x >= 0"), a};
    CHECK(cq_entails(in, pa, weaker).verdict == Verdict::Holds);
    CHECK(cq_entails(in, weaker, pa).verdict == Verdict::Fails);
}

TEST_CASE("probability weights are monotone on a grid") {
    auto in = four_level();
    Grids g;
    for (const char* p : {"p0", "p1", "s0", "s1"}) g[p] = {Value(0.0), Value(0.2), Value(0.5)};
    auto a = P("Mix(p0, p1){[|0>_r], [|1>_r]}", in);
    auto b = P("Mix(s0, s1){[|0>_r], [|1>_r]}", in);
    auto res = entails(in, parse_expr("p0 <= s0 && p1 <= s1"), *a, *b, g);
    CHECK(res.verdict == Verdict::Holds);
    CHECK(res.grid_assumed);
    CHECK(res.states_checked == 36);
    CHECK(entails(in, parse_expr("p0 >= s0 && p1 <= s1"), *a, *b, g).verdict == Verdict::Fails);
    CHECK(entails(in, parse_expr("true"), *a, *b).verdict == Verdict::Inconclusive);
}

TEST_CASE("entailment is preserved by the predicate constructors") {
    Rng rng(61);
    auto in = qhl::testgen::small_interp();
    auto phi = parse_expr("x <= 2");
    int held = 0;
    for (int t = 0; t < 120; ++t) {
        auto a = P(low_pred(rng, 2), in);
        PredPtr b;
        switch (t % 3) {
            case 0: b = P(low_pred(rng, 2), in); break;
            case 1: b = P("Mix(0.5, 0.5){I, I}", in); b = kraus("Mix", b->params, {}, {a, P("I", in)}); break;
            default: b = a;
        }
        if (entails(in, phi, *a, *b).verdict != Verdict::Holds) continue;
        ++held;
        auto c = P(qhl::testgen::coin(rng) ? "[(1 / sqrt(2)) |0>_q[3] + (1 / sqrt(2)) |1>_q[3]]" : "P1[q[3]]", in);
        CHECK(entails(in, phi, *negation(b), *negation(a)).verdict == Verdict::Holds);
        CHECK(entails(in, phi, *tensor(a, c), *tensor(b, c)).verdict == Verdict::Holds);
        auto fa = kraus("F_U.H", {}, {qhl::syntax::parse_qvar("q[2]")}, {a});
        auto fb = kraus("F_U.H", {}, {qhl::syntax::parse_qvar("q[2]")}, {b});
        CHECK(entails(in, phi, *fa, *fb).verdict == Verdict::Holds);
    }
    CHECK(held > 60);
}

TEST_CASE("cq entailment is transitive on random chains") {
    Rng rng(67);
    auto in = qhl::testgen::small_interp();
    const char* phis[] = {"x = 1", "x <= 1", "x <= 2", "true", "x = 1 && y = 0", "y <= x"};
    int chains = 0;
    for (int t = 0; t < 5000 && chains < 40; ++t) {
        CqAssertion a{parse_expr(phis[pick(rng, 6)]), P(low_pred(rng, 1), in)};
        CqAssertion b{parse_expr(phis[pick(rng, 6)]), P(low_pred(rng, 1), in)};
        CqAssertion c{parse_expr(phis[pick(rng, 6)]), P(low_pred(rng, 1), in)};
        if (cq_entails(in, a, b).verdict != Verdict::Holds || cq_entails(in, b, c).verdict != Verdict::Holds) continue;
        ++chains;
        CHECK(cq_entails(in, a, c).verdict == Verdict::Holds);
    }
    CHECK(chains >= 10);
}

TEST_CASE("predicate text and JSON round trip") {
    Rng rng(71);
    auto in = qhl::testgen::small_interp();
    for (int t = 0; t < 200; ++t) {
        auto a = P(qhl::testgen::predicate_text(rng, 3), in);
        auto back = P(to_string(*a), in);
        CHECK_MESSAGE(same_predicate(*a, *back), to_string(*a));
        CHECK(same_predicate(*a, *predicate_from_json(to_json(*a), &in)));
    }
}
