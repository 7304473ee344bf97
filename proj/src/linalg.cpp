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

#include "qhl/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>

#include "qhl/error.hpp"

namespace qhl::linalg {

    static std::size_t checked_product(std::size_t a, std::size_t b, std::size_t cap) {
        if (a != 0 && b > cap / a)
            fail(ErrorKind::DimensionOverflow,
                 "dimension " + std::to_string(a) + " x " + std::to_string(b) +
                     " exceeds cap " + std::to_string(cap));
        std::size_t p = a * b;
        if (p > cap)
            fail(ErrorKind::DimensionOverflow,
                 "dimension " + std::to_string(p) + " exceeds cap " + std::to_string(cap));
        return p;
    }

    RegisterLayout::RegisterLayout(std::vector<SystemSpec> systems, std::size_t cap)
        : m_systems(std::move(systems)) {
        std::set<std::string> seen;
        m_dimension = 1;
        for (const auto& s : m_systems) {
            if (s.dim == 0) fail(ErrorKind::DimensionMismatch, "system " + s.id + " has dimension 0");
            if (!seen.insert(s.id).second)
                fail(ErrorKind::DuplicateTarget, "system " + s.id + " listed twice in layout");
            m_dimension = checked_product(m_dimension, s.dim, cap);
        }
    }

    std::optional<std::size_t> RegisterLayout::position(std::string_view id) const {
        for (std::size_t i = 0; i < m_systems.size(); ++i)
            if (m_systems[i].id == id) return i;
        return std::nullopt;
    }

    std::vector<std::string> RegisterLayout::ids() const {
        std::vector<std::string> out;
        out.reserve(m_systems.size());
        for (const auto& s : m_systems) out.push_back(s.id);
        return out;
    }

    bool RegisterLayout::same_systems(const RegisterLayout& other) const {
        if (other.size() != size()) return false;
        for (const auto& s : m_systems) {
            auto p = other.position(s.id);
            if (!p || other.m_systems[*p].dim != s.dim) return false;
        }
        return true;
    }

    RegisterLayout RegisterLayout::merged(const RegisterLayout& other, std::size_t cap) const {
        std::vector<SystemSpec> all = m_systems;
        for (const auto& s : other.m_systems) {
            auto p = position(s.id);
            if (p) {
                if (m_systems[*p].dim != s.dim)
                    fail(ErrorKind::DimensionMismatch, "system " + s.id + " has conflicting dimensions");
                continue;
            }
            all.push_back(s);
        }
        return RegisterLayout(std::move(all), cap);
    }

    ComplexMatrix identity(std::size_t dim) {
        return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    }

    ComplexMatrix dagger(const ComplexMatrix& m) { return m.adjoint(); }

    ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t cap) {
        std::size_t rows = checked_product(a.rows(), b.rows(), cap);
        std::size_t cols = checked_product(a.cols(), b.cols(), cap);
        ComplexMatrix out(rows, cols);
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    }

    ComplexVector kron(const ComplexVector& a, const ComplexVector& b, std::size_t cap) {
        std::size_t n = checked_product(a.size(), b.size(), cap);
        ComplexVector out(n);
        for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
        return out;
    }

    ComplexMatrix outer(const ComplexVector& ket, const ComplexVector& bra) {
        return ket * bra.adjoint();
    }

    ComplexVector basis_vector(std::size_t dim, std::size_t index) {
        if (index >= dim)
            fail(ErrorKind::OutOfRange, "basis index " + std::to_string(index) + " >= " + std::to_string(dim));
        ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
        v(static_cast<Eigen::Index>(index)) = 1.0;
        return v;
    }

    namespace {

        struct Placement {
            std::vector<std::size_t> offsets;  // per target sub-index, offset in the full index
            std::vector<std::size_t> bases;    // full indices with all target digits zero
        };

        Placement place(std::span<const std::string> targets, const RegisterLayout& layout,
                        std::size_t op_dim) {
            const auto& sys = layout.systems();
            std::vector<std::size_t> stride(sys.size(), 1);
            for (std::size_t p = sys.size(); p-- > 1;) stride[p - 1] = stride[p] * sys[p].dim;

            std::vector<std::size_t> pos;
            std::vector<bool> used(sys.size(), false);
            std::size_t tdim = 1;
            for (const auto& t : targets) {
                auto p = layout.position(t);
                if (!p) fail(ErrorKind::UnknownSystem, "system " + t + " is not in the layout");
                if (used[*p]) fail(ErrorKind::DuplicateTarget, "system " + t + " targeted twice");
                used[*p] = true;
                pos.push_back(*p);
                tdim *= sys[*p].dim;
            }
            if (tdim != op_dim)
                fail(ErrorKind::DimensionMismatch,
                     "operator dimension " + std::to_string(op_dim) + " does not match targets (" +
                         std::to_string(tdim) + ")");

            Placement pl;
            pl.offsets.assign(tdim, 0);
            for (std::size_t t = 0; t < tdim; ++t) {
                std::size_t rem = t, off = 0;
                for (std::size_t k = pos.size(); k-- > 0;) {
                    std::size_t d = sys[pos[k]].dim;
                    off += (rem % d) * stride[pos[k]];
                    rem /= d;
                }
                pl.offsets[t] = off;
            }
            std::size_t rest = layout.dimension() / tdim;
            pl.bases.reserve(rest);
            for (std::size_t r = 0; r < rest; ++r) {
                std::size_t rem = r, base = 0;
                for (std::size_t p = sys.size(); p-- > 0;) {
                    if (used[p]) continue;
                    base += (rem % sys[p].dim) * stride[p];
                    rem /= sys[p].dim;
                }
                pl.bases.push_back(base);
            }
            return pl;
        }

    }  // namespace

    ComplexMatrix embed(const ComplexMatrix& op, std::span<const std::string> targets,
                        const RegisterLayout& layout) {
        if (op.rows() != op.cols()) fail(ErrorKind::DimensionMismatch, "operator is not square");
        Placement pl = place(targets, layout, static_cast<std::size_t>(op.rows()));
        const std::size_t d = layout.dimension();
        ComplexMatrix out = ComplexMatrix::Zero(d, d);
        const std::size_t td = pl.offsets.size();
        for (std::size_t base : pl.bases)
            for (std::size_t a = 0; a < td; ++a)
                for (std::size_t b = 0; b < td; ++b) {
                    Complex v = op(a, b);
                    if (v != Complex(0.0, 0.0)) out(base + pl.offsets[a], base + pl.offsets[b]) = v;
                }
        return out;
    }

    ComplexVector reorder(const ComplexVector& v, const RegisterLayout& from, const RegisterLayout& to) {
        if (!from.same_systems(to))
            fail(ErrorKind::DimensionMismatch, "reorder between layouts over different systems");
        if (static_cast<std::size_t>(v.size()) != from.dimension())
            fail(ErrorKind::DimensionMismatch, "vector does not match layout dimension");
        auto ids = from.ids();
        Placement pl = place(ids, to, from.dimension());
        ComplexVector out(v.size());
        for (std::size_t a = 0; a < pl.offsets.size(); ++a) out(pl.offsets[a]) = v(a);
        return out;
    }

    double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.rows() != b.rows() || a.cols() != b.cols())
            fail(ErrorKind::DimensionMismatch, "matrices differ in shape");
        if (a.size() == 0) return 0.0;
        return (a - b).cwiseAbs().maxCoeff();
    }

    bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
        if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
        return max_abs_diff(a, b) <= tol;
    }

    bool is_hermitian(const ComplexMatrix& m, double eps) {
        if (m.rows() != m.cols()) return false;
        return max_abs_diff(m, m.adjoint()) <= eps;
    }

    bool is_unitary(const ComplexMatrix& m, double eps) {
        if (m.rows() != m.cols()) return false;
        return max_abs_diff(m.adjoint() * m, identity(m.rows())) <= eps;
    }

    double min_eigenvalue(const ComplexMatrix& m, double herm_eps) {
        if (!is_hermitian(m, herm_eps)) fail(ErrorKind::NonHermitian, "operator is not Hermitian");
        if (m.rows() == 0) return 0.0;
        ComplexMatrix h = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff();
    }

    bool is_psd(const ComplexMatrix& m, double eps, double herm_eps) {
        return min_eigenvalue(m, herm_eps) >= -eps;
    }

    bool loewner_leq(const ComplexMatrix& a, const ComplexMatrix& b, double eps, double herm_eps) {
        return is_psd(b - a, eps, herm_eps);
    }

    Complex trace(const ComplexMatrix& m) { return m.trace(); }

    DensityOperator::DensityOperator(RegisterLayout layout, ComplexMatrix matrix)
        : m_layout(std::move(layout)), m_matrix(std::move(matrix)) {
        auto d = static_cast<Eigen::Index>(m_layout.dimension());
        if (m_matrix.rows() != d || m_matrix.cols() != d)
            fail(ErrorKind::DimensionMismatch, "density matrix does not match layout dimension");
    }

    double DensityOperator::trace() const { return m_matrix.trace().real(); }

    void DensityOperator::validate(const Tolerances& tol) const {
        if (!is_psd(m_matrix, tol.psd, tol.herm))
            fail(ErrorKind::EffectViolation, "density operator is not positive semidefinite");
        if (trace() > 1.0 + tol.trace)
            fail(ErrorKind::EffectViolation, "density operator has trace above one");
    }

    DensityOperator DensityOperator::pure(RegisterLayout layout, const ComplexVector& psi) {
        return DensityOperator(std::move(layout), psi * psi.adjoint());
    }

    double trace_product(const ComplexMatrix& a, const RegisterLayout& a_layout,
                         const DensityOperator& rho, double herm_eps) {
        if (!is_hermitian(a, herm_eps)) fail(ErrorKind::NonHermitian, "trace_product of non-Hermitian operator");
        if (a_layout == rho.layout()) return a.cwiseProduct(rho.matrix().transpose()).sum().real();
        auto ids = a_layout.ids();
        ComplexMatrix full = embed(a, ids, rho.layout());
        return full.cwiseProduct(rho.matrix().transpose()).sum().real();
    }

    double trace_product(const ComplexMatrix& a, const DensityOperator& rho, double herm_eps) {
        return trace_product(a, rho.layout(), rho, herm_eps);
    }

    ComplexVector random_unit_vector(std::size_t dim, std::mt19937_64& rng) {
        std::normal_distribution<double> g(0.0, 1.0);
        ComplexVector v(static_cast<Eigen::Index>(dim));
        do {
            for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(g(rng), g(rng));
        } while (v.norm() < 1e-12);
        return v / v.norm();
    }

    ComplexMatrix random_ginibre_density(std::size_t dim, std::mt19937_64& rng,
                                         std::size_t rank) {
        if (rank == 0 || rank > dim) rank = dim;
        std::normal_distribution<double> g(0.0, 1.0);
        ComplexMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rank));
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(g(rng), g(rng));
        ComplexMatrix rho = m * m.adjoint();
        rho /= rho.trace().real();
        return 0.5 * (rho + rho.adjoint());
    }

}  // namespace qhl::linalg
