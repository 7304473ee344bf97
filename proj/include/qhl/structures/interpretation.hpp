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

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qhl/classical/value.hpp"
#include "qhl/linalg.hpp"
#include "qhl/syntax/parser.hpp"
#include "qhl/syntax/program.hpp"

namespace qhl::structures {

    using classical::ClassicalType;
    using classical::Value;
    using linalg::ComplexMatrix;
    using Dims = std::vector<std::size_t>;

    struct QuantumVarDecl {
        std::string name;
        std::size_t dim = 2;
        std::vector<ClassicalType> index_types;  // empty for a simple variable
    };

    struct GateFamily {
        std::string name;
        std::vector<ClassicalType> params;
        Dims dims;
        bool variadic = false;
        std::function<ComplexMatrix(const std::vector<Value>&, const Dims&)> build;
    };

    struct MeasurementFamily {
        std::string name;
        Dims dims;
        bool variadic = false;
        std::function<std::vector<std::pair<std::int64_t, ComplexMatrix>>(const Dims&)> build;
    };

    struct KrausFamily {
        std::string name;
        std::vector<ClassicalType> params;
        bool variadic_params = false;
        Dims dims;
        bool variadic = false;
        std::optional<std::size_t> rank;  // nullopt when it depends on parameters or dimensions
        std::function<std::vector<ComplexMatrix>(const std::vector<Value>&, const Dims&)> build;
    };

    struct AtomicFamily {
        std::string name;
        std::vector<ClassicalType> params;
        Dims dims;
        bool variadic = false;
        std::function<ComplexMatrix(const std::vector<Value>&, const Dims&)> build;
    };

    struct Limits {
        std::size_t dimension_cap = linalg::kDefaultDimensionCap;
        std::size_t branch_cap = 1000000;
        std::uint64_t domain_cap = 1000000;
    };

    struct ResolvedSystem {
        std::string id;
        std::size_t dim = 2;
    };

    KrausFamily derive_fb();
    KrausFamily derive_fu(const GateFamily& gate);
    KrausFamily derive_fm(const MeasurementFamily& measurement);

    class Interpretation : public syntax::SymbolTable {
       public:
        Interpretation() = default;
        Interpretation(const Interpretation& other);
        Interpretation& operator=(const Interpretation& other);

        static Interpretation with_builtins();

        void add_gate(GateFamily g);
        void add_measurement(MeasurementFamily m);
        void add_kraus(KrausFamily k);
        void add_atomic(AtomicFamily a);
        void declare_quantum(QuantumVarDecl q);
        void declare_classical(const std::string& name, ClassicalType t) { m_typing.declare(name, std::move(t)); }

        classical::Typing& typing_mut() { return m_typing; }
        const classical::Typing& types() const { return m_typing; }
        const std::vector<QuantumVarDecl>& quantum_vars() const { return m_qvars; }
        const QuantumVarDecl* find_quantum(const std::string& name) const;

        const GateFamily* find_gate(const std::string& name) const;
        const MeasurementFamily* find_measurement(const std::string& name) const;
        // Includes the designated F_B, F_U.<gate> and F_M.<measurement> symbols.
        std::optional<KrausFamily> find_kraus(const std::string& name) const;
        const AtomicFamily* find_atomic(const std::string& name) const;

        // Validated, cached instantiations.
        ComplexMatrix gate_matrix(const std::string& name, const std::vector<Value>& args, const Dims& dims) const;
        std::vector<std::pair<std::int64_t, ComplexMatrix>> measurement_ops(const std::string& name,
                                                                              const Dims& dims) const;
        std::vector<ComplexMatrix> kraus_ops(const std::string& name, const std::vector<Value>& args,
                                             const Dims& dims) const;
        ComplexMatrix atomic(const std::string& name, const std::vector<Value>& args, const Dims& dims) const;

        ResolvedSystem resolve(const syntax::SubscriptedVar& q, const classical::ClassicalState& sigma) const;
        std::vector<linalg::SystemSpec> systems_of(const std::string& base) const;
        // Systems of the named variables in declaration order.
        linalg::RegisterLayout layout_for(const std::set<std::string>& bases) const;
        linalg::RegisterLayout full_layout() const;

        const linalg::Tolerances& tolerances() const { return m_tol; }
        void set_tolerances(const linalg::Tolerances& t) { m_tol = t; }
        const Limits& limits() const { return m_limits; }
        void set_limits(const Limits& l) { m_limits = l; }

        bool is_gate(const std::string& name) const override;
        bool is_measurement(const std::string& name) const override;
        std::optional<std::size_t> gate_arity(const std::string& name) const override;
        std::optional<std::size_t> gate_param_count(const std::string& name) const override;
        std::optional<std::size_t> measurement_arity(const std::string& name) const override;
        std::optional<std::int64_t> enum_constant(const std::string& label) const override;
        bool is_classical_var(const std::string& name) const override;
        const classical::Typing* typing() const override { return &m_typing; }

       private:
        std::map<std::string, GateFamily> m_gates;
        std::map<std::string, MeasurementFamily> m_measurements;
        std::map<std::string, KrausFamily> m_kraus;
        std::map<std::string, AtomicFamily> m_atomic;
        std::vector<QuantumVarDecl> m_qvars;
        classical::Typing m_typing;
        linalg::Tolerances m_tol;
        Limits m_limits;

        mutable std::mutex m_cache_mutex;
        mutable std::map<std::string, ComplexMatrix> m_matrix_cache;
        mutable std::map<std::string, std::vector<ComplexMatrix>> m_kraus_cache;
        mutable std::map<std::string, std::vector<std::pair<std::int64_t, ComplexMatrix>>> m_meas_cache;
    };

    // Checks applied to user-supplied families; each throws the matching error kind.
    void check_unitary(const std::string& name, const ComplexMatrix& u, double eps);
    void check_complete(const std::string& name, const std::vector<std::pair<std::int64_t, ComplexMatrix>>& ops,
                        double eps);
    void check_subnormalized(const std::string& name, const std::vector<ComplexMatrix>& ops, double eps);
    void check_effect(const std::string& name, const ComplexMatrix& k, double eps, double herm_eps);

    std::vector<Value> coerce_args(const std::string& name, const std::vector<ClassicalType>& params,
                                   const std::vector<Value>& args, bool variadic = false);

}  // namespace qhl::structures
