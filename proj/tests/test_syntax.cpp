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

#include <algorithm>

#include "qhl/classical/domain.hpp"
#include "qhl/error.hpp"
#include "qhl/syntax/parser.hpp"
#include "support/gen.hpp"

using namespace qhl::syntax;
using namespace qhl::classical;
using qhl::testgen::pick;
using qhl::testgen::Rng;

namespace {

    ExprPtr random_expr(Rng& r, int depth) {
        switch (depth <= 0 ? pick(r, 2) : pick(r, 7)) {
            case 0: return lit(std::int64_t(pick(r, 10)));
            case 1: return var(pick(r, 2) ? "x" : "y");
            case 2: return binary(BinaryOp::Add, random_expr(r, depth - 1), random_expr(r, depth - 1));
            case 3: return binary(BinaryOp::Sub, random_expr(r, depth - 1), random_expr(r, depth - 1));
            case 4: return binary(BinaryOp::Mul, random_expr(r, depth - 1), random_expr(r, depth - 1));
            case 5: return binary(BinaryOp::Mod, random_expr(r, depth - 1), random_expr(r, depth - 1));
            default: return unary(UnaryOp::Neg, random_expr(r, depth - 1));
        }
    }

    ExprPtr random_guard(Rng& r, int depth) {
        switch (depth <= 0 ? pick(r, 3) : pick(r, 6)) {
            case 0: return binary(BinaryOp::Lt, random_expr(r, 1), random_expr(r, 1));
            case 1: return binary(BinaryOp::Eq, random_expr(r, 1), random_expr(r, 1));
            case 2: return pick(r, 2) ? truth() : falsity();
            case 3: return binary(BinaryOp::And, random_guard(r, depth - 1), random_guard(r, depth - 1));
            case 4: return binary(BinaryOp::Or, random_guard(r, depth - 1), random_guard(r, depth - 1));
            default: return unary(UnaryOp::Not, random_guard(r, depth - 1));
        }
    }

    SubscriptedVar random_qvar(Rng& r) { return {"q", {random_expr(r, 1)}}; }

    ProgramPtr random_program(Rng& r, int depth);

    ProgramPtr random_block(Rng& r, int depth) {
        std::vector<ProgramPtr> cmds;
        std::size_t n = 1 + pick(r, 3);
        for (std::size_t i = 0; i < n; ++i) cmds.push_back(random_program(r, depth));
        return sequence(cmds);
    }

    // Never a sequence, so blocks stay right-nested as the parser builds them.
    ProgramPtr random_program(Rng& r, int depth) {
        switch (depth <= 0 ? pick(r, 6) : pick(r, 8)) {
            case 0: return skip();
            case 1: return assign(pick(r, 2) ? "x" : "y", random_expr(r, 2));
            case 2: return init(random_qvar(r));
            case 3: return gate("H", {}, {random_qvar(r)});
            case 4: return gate("CNOT", {}, {random_qvar(r), random_qvar(r)});
            case 5: return measure("x", "M", {random_qvar(r)});
            case 6: return cond(random_guard(r, 2), random_block(r, depth - 1), random_block(r, depth - 1));
            default: return loop(random_guard(r, 2), random_block(r, depth - 1));
        }
    }

    bool touches_resolve_into(const Program& p, const std::vector<QVarRef>& qv, const Domain& d,
                              const qhl::structures::Interpretation& in) {
        std::vector<SubscriptedVar> targets = p.targets;
        bool ok = true;
        for (const auto& t : targets)
            for (std::uint64_t i = 0; i < d.size(); ++i) {
                auto sigma = d.state(i);
                auto sys = in.resolve(t, sigma);
                bool found = std::any_of(qv.begin(), qv.end(), [&](const QVarRef& r) {
                    if (r.base != t.base) return false;
                    if (!r.index) return true;
                    std::string id = t.base + "[";
                    for (std::size_t k = 0; k < r.index->size(); ++k) id += (k ? "," : "") + value_to_string((*r.index)[k]);
                    return id + "]" == sys.id;
                });
                ok = ok && found;
            }
        if (p.first) ok = ok && touches_resolve_into(*p.first, qv, d, in);
        if (p.second) ok = ok && touches_resolve_into(*p.second, qv, d, in);
        return ok;
    }

}  // namespace

TEST_CASE("parse_program examples") {
    auto in = qhl::testgen::small_interp();
    auto s = parse_program("skip");
    CHECK(s->kind == Cmd::Skip);

    auto p = parse_program("x := M[q[1]]; if x=0 then skip else U[q[1]]");
    REQUIRE(p->kind == Cmd::Seq);
    CHECK(p->first->kind == Cmd::Measure);
    CHECK(p->second->kind == Cmd::If);
    CHECK(p->second->second->kind == Cmd::Gate);
    CHECK(p->second->second->name == "U");

    auto qft = parse_program("H[q[1]]; CR(2)[q[2],q[1]]; H[q[2]]; SWAP[q[1],q[2]]", &in);
    CHECK(command_count(*qft) == 4);
    std::vector<std::string> names;
    for (auto c = qft; c; c = c->kind == Cmd::Seq ? c->second : nullptr)
        names.push_back(c->kind == Cmd::Seq ? c->first->name : c->name);
    CHECK(names == std::vector<std::string>{"H", "CR", "H", "SWAP"});
    auto cr = qft->second->first;
    REQUIRE(cr->params.size() == 1);
    CHECK(as_int(eval_expr({}, *cr->params[0])) == 2);
    CHECK(to_string(cr->targets) == "[q[2], q[1]]");
}

TEST_CASE("parser errors carry positions") {
    auto in = qhl::testgen::small_interp();
    try {
        parse_program("skip;\n  x := ", &in);
        FAIL("expected a syntax error");
    } catch (const qhl::Error& e) {
        CHECK(e.kind() == qhl::ErrorKind::Syntax);
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_program("Foo[q[1]]", &in), qhl::Error);
    CHECK_THROWS_AS(parse_program("CNOT[q[1]]", &in), qhl::Error);
    CHECK_THROWS_AS(parse_program("q[1] := |1>", &in), qhl::Error);
    CHECK_THROWS_AS(parse_program("while x do", &in), qhl::Error);
}

TEST_CASE("print then parse is the identity") {
    Rng rng(31);
    for (int t = 0; t < 500; ++t) {
        auto p = random_block(rng, 2);
        std::string text = to_string(*p);
        ProgramPtr back;
        REQUIRE_NOTHROW(back = parse_program(text));
        CHECK_MESSAGE(same_program(*p, *back), text);
        CHECK(to_string(*back) == text);
    }
}

TEST_CASE("dist_formula") {
    auto k2 = ClassicalState({{"k", Value(std::int64_t{2})}});
    auto k0 = ClassicalState({{"k", Value(std::int64_t{0})}});
    std::vector<SubscriptedVar> qs{parse_qvar("q[2*k+1]"), parse_qvar("q[4*k-3]")};
    auto d = dist_formula(qs);
    CHECK_FALSE(satisfies(k2, *d));
    CHECK(satisfies(k0, *d));
    CHECK(satisfies({}, *dist_formula({parse_qvar("q1"), parse_qvar("q2")})));
    CHECK_FALSE(satisfies({}, *dist_formula({parse_qvar("q"), parse_qvar("q")})));
    CHECK(satisfies({}, *dist_formula({parse_qvar("q[1]")})));
}

TEST_CASE("dist_formula is symmetric") {
    Rng rng(37);
    Typing t;
    t.declare("x", ClassicalType::integer(0, 3));
    t.declare("y", ClassicalType::integer(0, 3));
    auto dom = Domain::over({"x", "y"}, t);
    for (int c = 0; c < 60; ++c) {
        std::vector<SubscriptedVar> qs;
        std::size_t n = 2 + pick(rng, 2);
        for (std::size_t i = 0; i < n; ++i) qs.push_back(parse_qvar(qhl::testgen::qubit(rng)));
        auto perm = qs;
        std::shuffle(perm.begin(), perm.end(), rng);
        auto a = dist_formula(qs), b = dist_formula(perm);
        for (std::uint64_t i = 0; i < dom.size(); ++i) CHECK(satisfies(dom.state(i), *a) == satisfies(dom.state(i), *b));
    }
}

TEST_CASE("quantum_vars") {
    auto in = qhl::testgen::small_interp();
    auto qv3 = quantum_vars(*parse_program("H[q[3]]", &in));
    REQUIRE(qv3.size() == 1);
    CHECK(qv3[0].base == "q");
    REQUIRE(qv3[0].index);
    CHECK(as_int((*qv3[0].index)[0]) == 3);

    auto qvm = quantum_vars(*parse_program("H[q[x]]", &in));
    REQUIRE(qvm.size() == 1);
    CHECK_FALSE(qvm[0].index);
    CHECK(quantum_vars(*skip()).empty());
    CHECK(may_overlap(qvm[0], qv3[0]));
    CHECK_FALSE(may_overlap(qv3[0], quantum_vars(*parse_program("H[q[2]]", &in))[0]));
}

TEST_CASE("quantum_vars over-approximates the systems touched") {
    Rng rng(41);
    auto in = qhl::testgen::small_interp();
    auto dom = Domain::over({"x", "y"}, in.types());
    for (int t = 0; t < 100; ++t) {
        auto p = parse_program(qhl::testgen::loop_free_program(rng), &in);
        CHECK(touches_resolve_into(*p, quantum_vars(*p), dom, in));
    }
}

TEST_CASE("classical and modified variables") {
    auto in = qhl::testgen::small_interp();
    auto a = parse_program("x := y + 1", &in);
    auto cv = classical_vars(*a);
    CHECK(cv.count("x"));
    CHECK(cv.count("y"));
    CHECK(modified_vars(*parse_program("x := M[q[1]]", &in)) == std::set<std::string>{"x"});
    CHECK(modified_vars(*parse_program("while x = 1 do skip od", &in)).empty());
    CHECK(classical_vars(*parse_program("H[q[y]]", &in)) == std::set<std::string>{"y"});
}
