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

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace qhl::linalg {

    using Complex = std::complex<double>;
    using ComplexMatrix = Eigen::MatrixXcd;
    using ComplexVector = Eigen::VectorXcd;

    inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 14;

    struct Tolerances {
        double herm = 1e-10;
        double psd = 1e-9;
        double trace = 1e-9;
        double unitary = 1e-9;
        double prune = 1e-14;
        double fuzz = 1e-7;
    };

    struct SystemSpec {
        std::string id;
        std::size_t dim = 2;
        bool operator==(const SystemSpec&) const = default;
    };

    // Ordered list of systems; the first system is the most significant tensor factor.
    class RegisterLayout {
       public:
        RegisterLayout() = default;
        explicit RegisterLayout(std::vector<SystemSpec> systems,
                                std::size_t cap = kDefaultDimensionCap);

        const std::vector<SystemSpec>& systems() const { return m_systems; }
        std::size_t size() const { return m_systems.size(); }
        std::size_t dimension() const { return m_dimension; }
        bool empty() const { return m_systems.empty(); }

        std::optional<std::size_t> position(std::string_view id) const;
        bool contains(std::string_view id) const { return position(id).has_value(); }
        std::vector<std::string> ids() const;
        bool same_systems(const RegisterLayout& other) const;

        // Systems of this layout followed by those of `other` not already present.
        RegisterLayout merged(const RegisterLayout& other,
                              std::size_t cap = kDefaultDimensionCap) const;

        bool operator==(const RegisterLayout& other) const { return m_systems == other.m_systems; }

       private:
        std::vector<SystemSpec> m_systems;
        std::size_t m_dimension = 1;
    };

    ComplexMatrix identity(std::size_t dim);
    ComplexMatrix dagger(const ComplexMatrix& m);
    ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                       std::size_t cap = kDefaultDimensionCap);
    ComplexVector kron(const ComplexVector& a, const ComplexVector& b,
                       std::size_t cap = kDefaultDimensionCap);
    ComplexMatrix outer(const ComplexVector& ket, const ComplexVector& bra);
    ComplexVector basis_vector(std::size_t dim, std::size_t index);

    // Operator acting on `targets` (in the order given) lifted to the whole layout,
    // identity on the remaining systems.
    ComplexMatrix embed(const ComplexMatrix& op, std::span<const std::string> targets,
                        const RegisterLayout& layout);
    // Vector over `from` (same systems as `to`) written in the factor order of `to`.
    ComplexVector reorder(const ComplexVector& v, const RegisterLayout& from,
                          const RegisterLayout& to);

    double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
    bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);
    bool is_hermitian(const ComplexMatrix& m, double eps);
    bool is_unitary(const ComplexMatrix& m, double eps);
    // Throws non-hermitian when m is not Hermitian within herm_eps.
    double min_eigenvalue(const ComplexMatrix& m, double herm_eps = 1e-10);
    bool is_psd(const ComplexMatrix& m, double eps = 1e-9, double herm_eps = 1e-10);
    bool loewner_leq(const ComplexMatrix& a, const ComplexMatrix& b, double eps = 1e-9,
                     double herm_eps = 1e-10);
    Complex trace(const ComplexMatrix& m);

    class DensityOperator {
       public:
        DensityOperator() = default;
        DensityOperator(RegisterLayout layout, ComplexMatrix matrix);

        const RegisterLayout& layout() const { return m_layout; }
        const ComplexMatrix& matrix() const { return m_matrix; }
        double trace() const;

        // Hermitian, positive semidefinite and trace at most one, within tolerances.
        void validate(const Tolerances& tol = {}) const;

        static DensityOperator pure(RegisterLayout layout, const ComplexVector& psi);

       private:
        RegisterLayout m_layout;
        ComplexMatrix m_matrix = ComplexMatrix::Identity(1, 1);
    };

    // tr(A rho) for a Hermitian A over `a_layout`, extended by identity to rho's layout.
    double trace_product(const ComplexMatrix& a, const RegisterLayout& a_layout,
                         const DensityOperator& rho, double herm_eps = 1e-10);
    double trace_product(const ComplexMatrix& a, const DensityOperator& rho,
                         double herm_eps = 1e-10);

    // Haar-distributed pure state (normalised complex Gaussian vector).
    ComplexVector random_unit_vector(std::size_t dim, std::mt19937_64& rng);
    // G G^dagger / tr for a dim x rank Ginibre matrix G.
    ComplexMatrix random_ginibre_density(std::size_t dim, std::mt19937_64& rng,
                                         std::size_t rank = 0);

}  // namespace qhl::linalg
