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

#include "qhl/error.hpp"
#include "qhl/semantics/semantics.hpp"
#include "support/gen.hpp"

using namespace qhl::semantics;
using namespace qhl::linalg;
using qhl::classical::Value;
using qhl::syntax::parse_program;
using qhl::testgen::Rng;

namespace {

    Interpretation one_qubit() {
        auto in = Interpretation::with_builtins();
        in.declare_classical("x", qhl::classical::ClassicalType::integer(0, 1));
        in.declare_classical("k", qhl::classical::ClassicalType::integer(0, 3));
        in.declare_quantum({"q", 2, {}});
        return in;
    }

    Interpretation qubit_array() {
        auto in = Interpretation::with_builtins();
        in.declare_classical("k", qhl::classical::ClassicalType::integer(0, 3));
        in.declare_quantum({"q", 2, {qhl::classical::ClassicalType::integer(-10, 10)}});
        return in;
    }

    ComplexVector plus() { return (basis_vector(2, 0) + basis_vector(2, 1)) / std::sqrt(2.0); }

    CqState pure_state(const Interpretation& in, const ComplexVector& v, ClassicalState sigma = {}) {
        return {std::move(sigma), DensityOperator::pure(in.full_layout(), v)};
    }

    ClassicalState with(const std::string& x, std::int64_t v) { return ClassicalState({{x, Value(v)}}); }

    // Does each item of `a` occur in `b`, respecting multiplicity?
    bool sub_multiset(const std::vector<CqState>& a, const std::vector<CqState>& b, double tol) {
        std::vector<bool> used(b.size(), false);
        for (const auto& x : a) {
            bool found = false;
            for (std::size_t j = 0; j < b.size() && !found; ++j)
                if (!used[j] && x.sigma == b[j].sigma && max_abs_diff(x.rho.matrix(), b[j].rho.matrix()) <= tol)
                    used[j] = found = true;
            if (!found) return false;
        }
        return true;
    }

}  // namespace

TEST_CASE("step examples") {
    auto in = one_qubit();
    auto s = pure_state(in, plus(), with("x", 0));
    auto sk = step(in, {parse_program("skip", &in), s, 10});
    REQUIRE(sk.next.size() == 1);
    CHECK(sk.next[0].terminated());
    CHECK(approx_equal(sk.next[0].state.rho.matrix(), s.rho.matrix(), 0));

    auto m = step(in, {parse_program("x := M[q]", &in), s, 10});
    REQUIRE(m.next.size() == 2);
    std::set<std::int64_t> outcomes;
    for (const auto& c : m.next) {
        CHECK(c.terminated());
        CHECK(c.state.trace() == doctest::Approx(0.5).epsilon(1e-12));
        outcomes.insert(qhl::classical::as_int(c.state.sigma.at("x")));
    }
    CHECK(outcomes == std::set<std::int64_t>{0, 1});

    auto arr = qubit_array();
    CqState big{with("k", 2), DensityOperator(RegisterLayout({{"q[5]", 2}}), outer(basis_vector(2, 0), basis_vector(2, 0)))};
    auto blocked = step(arr, {parse_program("CNOT[q[2*k+1], q[4*k-3]]", &arr), big, 10});
    CHECK(blocked.next.empty());
    CHECK(blocked.blocked);
}

TEST_CASE("run examples") {
    auto in = one_qubit();
    auto s = pure_state(in, plus(), with("x", 0));
    RunOptions opt;
    opt.fuel = 50;
    auto w = run(in, parse_program("while true do skip od", &in), s, opt);
    CHECK(w.items.empty());
    CHECK_FALSE(w.residual.empty());
    CHECK(w.residual_trace() == doctest::Approx(s.trace()).epsilon(1e-12));

    auto zero = pure_state(in, basis_vector(2, 0), with("x", 0));
    auto o = run(in, parse_program("q := |0>; H[q]; x := M[q]", &in), zero, {10});
    REQUIRE(o.items.size() == 2);
    for (const auto& it : o.items) {
        CHECK(it.trace() == doctest::Approx(0.5).epsilon(1e-12));
        auto x = qhl::classical::as_int(it.sigma.at("x"));
        CHECK(std::abs(it.rho.matrix()(x, x).real() - 0.5) < 1e-12);
    }
    CHECK(o.items[0].sigma != o.items[1].sigma);
}

TEST_CASE("the two-qubit QFT program is the discrete Fourier transform") {
    auto in = Interpretation::with_builtins();
    in.declare_quantum({"q", 2, {qhl::classical::ClassicalType::integer(1, 2)}});
    auto p = parse_program("H[q[1]]; CR(2)[q[2], q[1]]; H[q[2]]; SWAP[q[1], q[2]]", &in);
    const std::size_t N = 4;
    for (std::size_t j = 0; j < N; ++j) {
        ComplexVector dft(N);
        for (std::size_t k = 0; k < N; ++k)
            dft(k) = std::exp(Complex(0, 2 * std::numbers::pi * double(j * k) / N)) / std::sqrt(double(N));
        auto out = run(in, p, pure_state(in, basis_vector(N, j)));
        REQUIRE(out.items.size() == 1);
        double fidelity = (dft.adjoint() * out.items[0].rho.matrix() * dft)(0, 0).real();
        CHECK(std::abs(fidelity - 1) < 1e-9);
    }
}

TEST_CASE("structural semantics clauses") {
    auto arr = qubit_array();
    CqState s{with("k", 2), DensityOperator(RegisterLayout({{"q[5]", 2}}), outer(basis_vector(2, 0), basis_vector(2, 0)))};
    CHECK(structural_sem(arr, parse_program("CNOT[q[2*k+1], q[4*k-3]]", &arr), s).items.empty());
    CqState s0{with("k", 0), DensityOperator(RegisterLayout({{"q[1]", 2}, {"q[-3]", 2}}), identity(4) / 4.0)};
    auto ok = structural_sem(arr, parse_program("CNOT[q[2*k+1], q[4*k-3]]", &arr), s0);
    REQUIRE(ok.items.size() == 1);
    CHECK(ok.items[0].trace() == doctest::Approx(1.0).epsilon(1e-12));

    auto in = one_qubit();
    auto a = structural_sem(in, parse_program("k := k + 2", &in), pure_state(in, plus(), with("k", 1)));
    REQUIRE(a.items.size() == 1);
    CHECK(qhl::classical::as_int(a.items[0].sigma.at("k")) == 3);
}

TEST_CASE("operational and structural semantics agree") {
    Rng rng(73);
    auto in = qhl::testgen::small_interp();
    for (int t = 0; t < 100; ++t) {
        auto text = qhl::testgen::loop_free_program(rng);
        auto p = parse_program(text, &in);
        auto s = qhl::testgen::random_cq_state(in, rng);
        auto a = run(in, p, s), b = structural_sem(in, p, s);
        CHECK_MESSAGE(same_multiset(a.items, b.items, 1e-12), text);
        CHECK(trace_non_increasing(a, s));
        CHECK(trace_non_increasing(b, s));
    }
}

TEST_CASE("loops agree too and runs are fuel-monotone") {
    Rng rng(79);
    auto in = qhl::testgen::small_interp();
    const char* loops[] = {
        "while x = 1 do x := M[q[1]]; H[q[1]] od",
        "while x < 3 do H[q[2]]; y := M[q[2]]; x := (x + y) mod 4 od",
        "x := M[q[3]]; while x = 0 do Ry(1.1)[q[3]]; x := M[q[3]] od; H[q[1]]",
        "while !(x = y) do x := M[q[x mod 3 + 1]]; if x = 1 then X[q[2]] else skip fi od",
    };
    for (const char* text : loops) {
        auto p = parse_program(text, &in);
        for (int t = 0; t < 10; ++t) {
            auto s = qhl::testgen::random_cq_state(in, rng);
            std::vector<CqState> prev;
            for (std::size_t f : {0u, 1u, 2u, 4u, 7u}) {
                RunOptions opt;
                opt.fuel = f;
                auto a = run(in, p, s, opt), b = structural_sem(in, p, s, opt);
                CHECK(same_multiset(a.items, b.items, 1e-12));
                CHECK(std::abs(a.residual_trace() - b.residual_trace()) < 1e-12);
                CHECK(trace_non_increasing(a, s));
                CHECK(sub_multiset(prev, a.items, 1e-12));
                prev = a.items;
            }
        }
    }
}

TEST_CASE("non-termination bound") {
    auto in = one_qubit();
    auto s = pure_state(in, plus(), with("x", 1));
    auto spin = parse_program("while true do skip od", &in);
    for (std::size_t f : {0u, 1u, 5u, 30u}) CHECK(nt_lower_bound(in, spin, s, {f}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(nt_lower_bound(in, parse_program("H[q]; x := M[q]; X[q]", &in), s, {0})) < 1e-12);
    auto repeat = parse_program("while x = 1 do x := M[q]; H[q] od", &in);
    for (std::size_t k = 1; k <= 10; ++k)
        CHECK(std::abs(nt_lower_bound(in, repeat, s, {k}) - std::ldexp(1.0, -int(k))) < 1e-12);
}

TEST_CASE("theta_of and normalize") {
    auto in = one_qubit();
    auto l = in.full_layout();
    ClassicalState a = with("x", 0), b = with("x", 1);
    OutcomeMultiset o;
    o.items.push_back({a, DensityOperator(l, outer(basis_vector(2, 0), basis_vector(2, 0)) * 0.3)});
    o.items.push_back({a, DensityOperator(l, outer(basis_vector(2, 1), basis_vector(2, 1)) * 0.2)});
    CHECK(theta_of(o, a, l).trace() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(theta_of(o, b, l).trace() == 0.0);
    auto n = normalize(o, l);
    REQUIRE(n.size() == 1);
    CHECK(n[0].first == a);
}

TEST_CASE("normalisation preserves the denotation") {
    Rng rng(83);
    auto in = qhl::testgen::small_interp();
    auto l = in.full_layout();
    for (int t = 0; t < 60; ++t) {
        auto p = parse_program(qhl::testgen::loop_free_program(rng), &in);
        auto s = qhl::testgen::random_cq_state(in, rng);
        auto o = run(in, p, s);
        auto n = normalize(o, l);
        for (std::size_t i = 0; i + 1 < n.size(); ++i) CHECK(n[i].first < n[i + 1].first);
        for (const auto& [sigma, rho] : n) CHECK(max_abs_diff(theta_of(o, sigma, l).matrix(), rho.matrix()) < 1e-12);
        for (const auto& it : o.items) {
            bool present = std::any_of(n.begin(), n.end(), [&](const auto& e) { return e.first == it.sigma; });
            CHECK((present || theta_of(o, it.sigma, l).trace() < 1e-14));
        }
    }
}

TEST_CASE("program equivalence") {
    Rng rng(89);
    auto in = qhl::testgen::small_interp();
    std::vector<CqState> inputs;
    for (int i = 0; i < 8; ++i) inputs.push_back(qhl::testgen::random_cq_state(in, rng));
    for (int t = 0; t < 20; ++t) {
        auto text = qhl::testgen::loop_free_program(rng);
        auto p = parse_program(text, &in);
        CHECK(equivalent(in, p, p, inputs).verdict == Equivalence::Equivalent);
        CHECK(equivalent(in, parse_program("skip; " + text, &in), p, inputs).verdict == Equivalence::Equivalent);
    }
    auto d = equivalent(in, parse_program("H[q[1]]", &in), parse_program("X[q[1]]", &in), inputs);
    CHECK(d.verdict == Equivalence::Different);
    CHECK(d.input);
    CHECK(equivalent(in, parse_program("H[q[1]]; H[q[1]]", &in), parse_program("skip", &in), inputs).verdict ==
          Equivalence::Equivalent);
    CHECK(equivalent(in, parse_program("CNOT[q[1], q[2]]; CNOT[q[2], q[1]]; CNOT[q[1], q[2]]", &in),
                     parse_program("SWAP[q[1], q[2]]", &in), inputs)
              .verdict == Equivalence::Equivalent);
}

TEST_CASE("branch cap") {
    auto in = qhl::testgen::small_interp();
    Rng rng(1);
    auto s = qhl::testgen::random_cq_state(in, rng);
    RunOptions opt;
    opt.branch_cap = 3;
    auto p = parse_program("x := M[q[1]]; y := M[q[2]]; x := M[q[3]]", &in);
    CHECK_THROWS_AS(run(in, p, s, opt), qhl::Error);
}
