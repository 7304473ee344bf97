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

#include "qhl/error.hpp"
#include "qhl/linalg.hpp"

using namespace qhl::linalg;

namespace {

    ComplexMatrix pauli_x() {
        ComplexMatrix m(2, 2);
        m << 0, 1, 1, 0;
        return m;
    }

    ComplexMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
        std::normal_distribution<double> n;
        ComplexMatrix m(r, c);
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(n(rng), n(rng));
        return m;
    }

    // Mixed-radix digits, most significant first.
    std::vector<std::size_t> digits(std::size_t idx, const std::vector<std::size_t>& dims) {
        std::vector<std::size_t> d(dims.size());
        for (std::size_t i = dims.size(); i-- > 0;) {
            d[i] = idx % dims[i];
            idx /= dims[i];
        }
        return d;
    }

    // Entry-by-entry definition of an operator lifted to a layout.
    ComplexMatrix embed_oracle(const ComplexMatrix& op, const std::vector<std::size_t>& pos,
                               const std::vector<std::size_t>& dims) {
        std::size_t total = 1;
        for (auto d : dims) total *= d;
        ComplexMatrix out = ComplexMatrix::Zero(total, total);
        for (std::size_t r = 0; r < total; ++r)
            for (std::size_t c = 0; c < total; ++c) {
                auto dr = digits(r, dims), dc = digits(c, dims);
                bool rest_equal = true;
                for (std::size_t i = 0; i < dims.size(); ++i)
                    if (std::find(pos.begin(), pos.end(), i) == pos.end() && dr[i] != dc[i]) rest_equal = false;
                if (!rest_equal) continue;
                std::size_t rt = 0, ct = 0;
                for (auto p : pos) {
                    rt = rt * dims[p] + dr[p];
                    ct = ct * dims[p] + dc[p];
                }
                out(r, c) = op(rt, ct);
            }
        return out;
    }

    RegisterLayout qubits(int n) {
        std::vector<SystemSpec> s;
        for (int i = 1; i <= n; ++i) s.push_back({"q" + std::to_string(i), 2});
        return RegisterLayout(s);
    }

}  // namespace

TEST_CASE("kron examples") {
    CHECK(approx_equal(kron(identity(2), identity(2)), identity(4), 0));
    ComplexMatrix xi = kron(pauli_x(), identity(2));
    ComplexVector out = xi * basis_vector(4, 0);
    CHECK(approx_equal(out, basis_vector(4, 2), 0));

    ComplexMatrix k = kron(outer(basis_vector(2, 0), basis_vector(2, 0)), outer(basis_vector(2, 1), basis_vector(2, 1)));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(k(r, c) == Complex(r == 1 && c == 1 ? 1.0 : 0.0));
}

TEST_CASE("kron matches index arithmetic and is associative") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 40; ++t) {
        std::size_t ar = 1 + rng() % 2, ac = 1 + rng() % 2, br = 1 + rng() % 2, bc = 1 + rng() % 2;
        ComplexMatrix a = random_matrix(ar, ac, rng), b = random_matrix(br, bc, rng), c = random_matrix(2, 2, rng);
        ComplexMatrix k = kron(a, b);
        REQUIRE(k.rows() == Eigen::Index(ar * br));
        for (std::size_t i = 0; i < ar * br; ++i)
            for (std::size_t j = 0; j < ac * bc; ++j) CHECK(std::abs(k(i, j) - a(i / br, j / bc) * b(i % br, j % bc)) < 1e-14);
        CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-12);
    }
}

TEST_CASE("kron respects the dimension cap") {
    CHECK_THROWS_AS(kron(identity(64), identity(64), 1024), qhl::Error);
    CHECK_THROWS_AS(RegisterLayout(std::vector<SystemSpec>(15, SystemSpec{"a", 2})), qhl::Error);
}

TEST_CASE("embed examples") {
    auto l = qubits(2);
    std::vector<std::string> t2{"q2"};
    CHECK(approx_equal(embed(pauli_x(), t2, l) * basis_vector(4, 0), basis_vector(4, 1), 0));

    ComplexMatrix cnot = ComplexMatrix::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
    std::vector<std::string> t21{"q2", "q1"};
    ComplexMatrix e = embed(cnot, t21, l);
    // control q2, target q1: |b1 b2> -> |b1 xor b2, b2>
    for (std::size_t b = 0; b < 4; ++b) {
        std::size_t b1 = b >> 1, b2 = b & 1;
        std::size_t expect = ((b1 ^ b2) << 1) | b2;
        CHECK(approx_equal(e * basis_vector(4, b), basis_vector(4, expect), 0));
    }
    CHECK(approx_equal(e * basis_vector(4, 2), basis_vector(4, 2), 0));
    CHECK(approx_equal(e * basis_vector(4, 1), basis_vector(4, 3), 0));

    std::vector<std::string> t1{"q1"};
    CHECK(approx_equal(embed(identity(2), t1, qubits(3)), identity(8), 0));
}

TEST_CASE("embed agrees with the entrywise definition") {
    std::mt19937_64 rng(11);
    std::vector<SystemSpec> sys{{"a", 2}, {"b", 3}, {"c", 2}};
    RegisterLayout l(sys);
    std::vector<std::size_t> dims{2, 3, 2};
    std::vector<std::vector<std::size_t>> choices{{0}, {1}, {2}, {2, 0}, {1, 2}, {0, 1}, {2, 1, 0}};
    for (const auto& pos : choices) {
        std::size_t d = 1;
        std::vector<std::string> ids;
        for (auto p : pos) {
            d *= dims[p];
            ids.push_back(sys[p].id);
        }
        ComplexMatrix op = random_matrix(d, d, rng);
        CHECK(max_abs_diff(embed(op, ids, l), embed_oracle(op, pos, dims)) < 1e-14);
    }
    std::vector<std::string> dup{"a", "a"};
    CHECK_THROWS_AS(embed(identity(4), dup, l), qhl::Error);
    std::vector<std::string> missing{"z"};
    CHECK_THROWS_AS(embed(identity(2), missing, l), qhl::Error);
}

TEST_CASE("embeddings on disjoint targets commute") {
    std::mt19937_64 rng(3);
    auto l = qubits(3);
    for (int t = 0; t < 30; ++t) {
        ComplexMatrix a = random_matrix(2, 2, rng), b = random_matrix(4, 4, rng);
        std::vector<std::string> ta{"q" + std::to_string(1 + t % 3)};
        std::vector<std::string> tb;
        for (int i = 1; i <= 3; ++i)
            if ("q" + std::to_string(i) != ta[0]) tb.push_back("q" + std::to_string(i));
        if (t % 2) std::swap(tb[0], tb[1]);
        ComplexMatrix ea = embed(a, ta, l), eb = embed(b, tb, l);
        CHECK(max_abs_diff(ea * eb, eb * ea) < 1e-12);
    }
}

TEST_CASE("reorder permutes tensor factors") {
    RegisterLayout ab({{"a", 2}, {"b", 3}});
    RegisterLayout ba({{"b", 3}, {"a", 2}});
    ComplexVector va = basis_vector(2, 1), vb = basis_vector(3, 2);
    CHECK(approx_equal(reorder(kron(va, vb), ab, ba), kron(vb, va), 1e-15));
}

TEST_CASE("is_psd examples") {
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1;
    CHECK(is_psd(d));
    d(1, 1) = -1;
    CHECK_FALSE(is_psd(d));
    ComplexVector plus = (basis_vector(2, 0) + basis_vector(2, 1)) / std::sqrt(2.0);
    CHECK(is_psd(identity(2) - outer(plus, plus)));
    ComplexMatrix nh = ComplexMatrix::Zero(2, 2);
    nh(0, 1) = 1;
    CHECK_THROWS_AS(min_eigenvalue(nh), qhl::Error);
}

TEST_CASE("is_psd agrees with sampled quadratic forms") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 24; ++t) {
        std::size_t n = 1 + rng() % 16;
        ComplexMatrix g = random_matrix(n, n, rng);
        ComplexMatrix h = (g + dagger(g)) / 2.0;
        if (t % 3 == 0) h = g * dagger(g);
        if (t % 3 == 1) h += identity(n) * (std::abs(min_eigenvalue(h)) * 0.999);
        bool sampled = true;
        for (int s = 0; s < 1000 && sampled; ++s) {
            ComplexVector v = random_unit_vector(n, rng);
            if ((v.adjoint() * h * v)(0, 0).real() < -1e-9) sampled = false;
        }
        // a negative sample certifies non-PSD; a PSD verdict must never be refuted
        if (!sampled) CHECK_FALSE(is_psd(h));
        if (is_psd(h)) CHECK(sampled);
        // the eigenvector of the least eigenvalue is the decisive sample
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
        ComplexVector v = es.eigenvectors().col(0);
        bool brute = (v.adjoint() * h * v)(0, 0).real() >= -1e-9;
        CHECK(brute == is_psd(h));
    }
}

TEST_CASE("trace_product examples and linearity") {
    std::mt19937_64 rng(9);
    auto l = qubits(1);
    auto rho = DensityOperator(l, random_ginibre_density(2, rng));
    CHECK(trace_product(identity(2), rho) == doctest::Approx(rho.trace()).epsilon(1e-12));
    ComplexVector plus = (basis_vector(2, 0) + basis_vector(2, 1)) / std::sqrt(2.0);
    auto zero = DensityOperator::pure(l, basis_vector(2, 0));
    CHECK(trace_product(outer(plus, plus), zero) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(trace_product(ComplexMatrix::Zero(2, 2), rho) == 0.0);

    auto l2 = qubits(2);
    for (int t = 0; t < 30; ++t) {
        ComplexMatrix g1 = random_matrix(4, 4, rng), g2 = random_matrix(4, 4, rng);
        ComplexMatrix a = (g1 + dagger(g1)) / 2.0, b = (g2 + dagger(g2)) / 2.0;
        double s = std::uniform_real_distribution<double>(-2, 2)(rng);
        ComplexMatrix r1 = random_ginibre_density(4, rng), r2 = random_ginibre_density(4, rng);
        DensityOperator p1(l2, r1), p2(l2, r2), mix(l2, 0.3 * r1 + 0.7 * r2);
        CHECK(std::abs(trace_product(a + s * b, p1) - trace_product(a, p1) - s * trace_product(b, p1)) < 1e-12);
        CHECK(std::abs(trace_product(a, mix) - 0.3 * trace_product(a, p1) - 0.7 * trace_product(a, p2)) < 1e-12);
    }
}

TEST_CASE("trace_product extends by identity") {
    std::mt19937_64 rng(2);
    auto l2 = qubits(2);
    DensityOperator rho(l2, random_ginibre_density(4, rng));
    ComplexMatrix p1 = outer(basis_vector(2, 1), basis_vector(2, 1));
    RegisterLayout only_q2({{"q2", 2}});
    double direct = trace_product(kron(identity(2), p1), rho);
    CHECK(std::abs(trace_product(p1, only_q2, rho) - direct) < 1e-14);
}

TEST_CASE("density operator validation") {
    auto l = qubits(1);
    ComplexMatrix big = identity(2);
    CHECK_THROWS_AS(DensityOperator(l, big).validate(), qhl::Error);
    ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
    neg(0, 0) = 0.5;
    neg(1, 1) = -0.1;
    CHECK_THROWS_AS(DensityOperator(l, neg).validate(), qhl::Error);
    CHECK_NOTHROW(DensityOperator(l, identity(2) / 2.0).validate());
}

TEST_CASE("random states are normalized") {
    std::mt19937_64 rng(4);
    for (std::size_t d : {1u, 2u, 5u, 8u}) {
        CHECK(std::abs(random_unit_vector(d, rng).norm() - 1) < 1e-12);
        ComplexMatrix g = random_ginibre_density(d, rng, 1 + d / 2);
        CHECK(std::abs(trace(g).real() - 1) < 1e-12);
        CHECK(is_psd(g));
    }
}
