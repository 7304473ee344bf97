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

#include "qhl/structures/interpretation.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qhl/error.hpp"

namespace qhl::structures {

    using linalg::Complex;
    using namespace std::complex_literals;

    namespace {

        std::size_t product(const Dims& d) {
            std::size_t p = 1;
            for (auto x : d) p *= x;
            return p;
        }

        std::string cache_key(const std::string& name, const std::vector<Value>& args, const Dims& dims) {
            std::string k = name + "(";
            for (const auto& a : args) k += classical::value_to_string(a) + ",";
            k += ")[";
            for (auto d : dims) k += std::to_string(d) + ",";
            return k + "]";
        }

        void check_dims(const std::string& name, const Dims& declared, bool variadic, const Dims& actual) {
            if (variadic) {
                if (actual.empty()) fail(ErrorKind::ArityMismatch, name + " needs at least one target");
                return;
            }
            if (declared.size() != actual.size())
                fail(ErrorKind::ArityMismatch, name + " expects " + std::to_string(declared.size()) +
                                                   " target(s), got " + std::to_string(actual.size()));
            for (std::size_t i = 0; i < declared.size(); ++i)
                if (declared[i] != actual[i])
                    fail(ErrorKind::DimensionMismatch, name + " target " + std::to_string(i + 1) + " has dimension " +
                                                           std::to_string(actual[i]) + ", expected " +
                                                           std::to_string(declared[i]));
        }

        ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
            ComplexMatrix m(2, 2);
            m << a, b, c, d;
            return m;
        }

        ComplexMatrix controlled(const ComplexMatrix& u) {
            ComplexMatrix m = ComplexMatrix::Identity(4, 4);
            m.block(2, 2, 2, 2) = u;
            return m;
        }

        ComplexMatrix phase_r(std::int64_t l) {
            double angle = 2.0 * std::numbers::pi * std::ldexp(1.0, static_cast<int>(-l));
            return mat2(1, 0, 0, std::exp(1i * angle));
        }

        ComplexMatrix reverse_perm(const Dims& dims) {
            const std::size_t k = dims.size();
            for (std::size_t p = 0; p < k; ++p)
                if (dims[p] != dims[k - 1 - p]) fail(ErrorKind::DimensionMismatch, "Reverse needs a symmetric register");
            const std::size_t d = product(dims);
            ComplexMatrix m = ComplexMatrix::Zero(d, d);
            std::vector<std::size_t> digits(k);
            for (std::size_t i = 0; i < d; ++i) {
                std::size_t rem = i;
                for (std::size_t p = k; p-- > 0;) {
                    digits[p] = rem % dims[p];
                    rem /= dims[p];
                }
                std::size_t j = 0;
                for (std::size_t p = 0; p < k; ++p) j = j * dims[p] + digits[k - 1 - p];
                m(j, i) = 1.0;
            }
            return m;
        }

        GateFamily fixed_gate(std::string name, Dims dims, ComplexMatrix u) {
            GateFamily g;
            g.name = std::move(name);
            g.dims = std::move(dims);
            g.build = [u](const std::vector<Value>&, const Dims&) { return u; };
            return g;
        }

        GateFamily real_gate(std::string name, Dims dims, std::function<ComplexMatrix(double)> f) {
            GateFamily g;
            g.name = std::move(name);
            g.dims = std::move(dims);
            g.params = {ClassicalType::real()};
            g.build = [f](const std::vector<Value>& a, const Dims&) { return f(classical::as_real(a[0])); };
            return g;
        }

        ClassicalType any_int() {
            return ClassicalType::integer(std::numeric_limits<std::int64_t>::min(),
                                          std::numeric_limits<std::int64_t>::max());
        }

    }  // namespace

    void check_unitary(const std::string& name, const ComplexMatrix& u, double eps) {
        if (!linalg::is_unitary(u, eps)) fail(ErrorKind::UnitarityViolation, "gate " + name + " is not unitary");
    }

    void check_complete(const std::string& name, const std::vector<std::pair<std::int64_t, ComplexMatrix>>& ops,
                        double eps) {
        if (ops.empty()) fail(ErrorKind::CompletenessViolation, "measurement " + name + " has no outcomes");
        ComplexMatrix sum = ComplexMatrix::Zero(ops[0].second.cols(), ops[0].second.cols());
        for (const auto& [m, op] : ops) {
            if (op.rows() != sum.rows() || op.cols() != sum.cols())
                fail(ErrorKind::DimensionMismatch, "measurement " + name + " operators differ in shape");
            sum += op.adjoint() * op;
        }
        if (!linalg::approx_equal(sum, linalg::identity(sum.rows()), eps))
            fail(ErrorKind::CompletenessViolation, "measurement " + name + " violates sum M^dagger M = I");
    }

    void check_subnormalized(const std::string& name, const std::vector<ComplexMatrix>& ops, double eps) {
        if (ops.empty()) fail(ErrorKind::SubnormalizationViolation, "Kraus symbol " + name + " has no operators");
        ComplexMatrix sum = ComplexMatrix::Zero(ops[0].rows(), ops[0].rows());
        for (const auto& f : ops) {
            if (f.rows() != sum.rows() || f.cols() != sum.cols())
                fail(ErrorKind::DimensionMismatch, "Kraus symbol " + name + " operators differ in shape");
            sum += f * f.adjoint();
        }
        if (!linalg::is_psd(linalg::identity(sum.rows()) - sum, eps, 1e-9))
            fail(ErrorKind::SubnormalizationViolation, "Kraus symbol " + name + " violates sum F F^dagger <= I");
    }

    void check_effect(const std::string& name, const ComplexMatrix& k, double eps, double herm_eps) {
        if (!linalg::is_hermitian(k, herm_eps))
            fail(ErrorKind::NonHermitian, "atomic predicate " + name + " is not Hermitian");
        if (!linalg::is_psd(k, eps, herm_eps) || !linalg::is_psd(linalg::identity(k.rows()) - k, eps, herm_eps))
            fail(ErrorKind::EffectViolation, "atomic predicate " + name + " is not between 0 and I");
    }

    std::vector<Value> coerce_args(const std::string& name, const std::vector<ClassicalType>& params,
                                   const std::vector<Value>& args, bool variadic) {
        if (variadic) {
            std::vector<Value> out;
            for (const auto& a : args) {
                if (!classical::is_numeric(a) || classical::kind_of(a) == classical::ValueKind::Complex)
                    fail(ErrorKind::Type, name + " expects real parameters");
                out.push_back(classical::as_real(a));
            }
            return out;
        }
        if (params.size() != args.size())
            fail(ErrorKind::ArityMismatch, name + " expects " + std::to_string(params.size()) + " parameter(s), got " +
                                               std::to_string(args.size()));
        std::vector<Value> out;
        for (std::size_t i = 0; i < args.size(); ++i) {
            Value v = classical::coerce_to(args[i], params[i]);
            if (params[i].kind == classical::TypeKind::Int && classical::kind_of(v) == classical::ValueKind::Bool)
                v = classical::as_int(v);
            if (!params[i].contains(v))
                fail(ErrorKind::Type, name + " parameter " + std::to_string(i + 1) + " (" +
                                          classical::value_to_string(args[i]) + ") is not of type " +
                                          params[i].to_string());
            out.push_back(v);
        }
        return out;
    }

    KrausFamily derive_fb() {
        KrausFamily k;
        k.name = "F_B";
        k.variadic = true;
        // Stored as |n><0| so that A -> sum F A F^dagger yields sum |n><0| A |0><n|.
        k.build = [](const std::vector<Value>&, const Dims& dims) {
            std::size_t d = product(dims);
            std::vector<ComplexMatrix> ops;
            for (std::size_t n = 0; n < d; ++n) {
                ComplexMatrix f = ComplexMatrix::Zero(d, d);
                f(n, 0) = 1.0;
                ops.push_back(f);
            }
            return ops;
        };
        return k;
    }

    KrausFamily derive_fu(const GateFamily& gate) {
        KrausFamily k;
        k.name = "F_U." + gate.name;
        k.params = gate.params;
        k.dims = gate.dims;
        k.variadic = gate.variadic;
        k.rank = 1;
        auto build = gate.build;
        k.build = [build](const std::vector<Value>& a, const Dims& dims) {
            return std::vector<ComplexMatrix>{build(a, dims).adjoint()};
        };
        return k;
    }

    KrausFamily derive_fm(const MeasurementFamily& measurement) {
        KrausFamily k;
        k.name = "F_M." + measurement.name;
        k.params = {any_int()};
        k.dims = measurement.dims;
        k.variadic = measurement.variadic;
        k.rank = 1;
        auto build = measurement.build;
        k.build = [build](const std::vector<Value>& a, const Dims& dims) {
            auto ops = build(dims);
            std::int64_t m = classical::as_int(a[0]);
            for (const auto& [outcome, op] : ops)
                if (outcome == m) return std::vector<ComplexMatrix>{op.adjoint()};
            std::size_t d = product(dims);
            return std::vector<ComplexMatrix>{ComplexMatrix::Zero(d, d)};
        };
        return k;
    }

    Interpretation::Interpretation(const Interpretation& other)
        : m_gates(other.m_gates),
          m_measurements(other.m_measurements),
          m_kraus(other.m_kraus),
          m_atomic(other.m_atomic),
          m_qvars(other.m_qvars),
          m_typing(other.m_typing),
          m_tol(other.m_tol),
          m_limits(other.m_limits) {}

    Interpretation& Interpretation::operator=(const Interpretation& other) {
        if (this == &other) return *this;
        m_gates = other.m_gates;
        m_measurements = other.m_measurements;
        m_kraus = other.m_kraus;
        m_atomic = other.m_atomic;
        m_qvars = other.m_qvars;
        m_typing = other.m_typing;
        m_tol = other.m_tol;
        m_limits = other.m_limits;
        std::lock_guard<std::mutex> lock(m_cache_mutex);
        m_matrix_cache.clear();
        m_kraus_cache.clear();
        m_meas_cache.clear();
        return *this;
    }

    Interpretation Interpretation::with_builtins() {
        Interpretation in;
        const double s = 1.0 / std::sqrt(2.0);
        in.add_gate(fixed_gate("H", {2}, mat2(s, s, s, -s)));
        in.add_gate(fixed_gate("X", {2}, mat2(0, 1, 1, 0)));
        in.add_gate(fixed_gate("Y", {2}, mat2(0, -1i, 1i, 0)));
        in.add_gate(fixed_gate("Z", {2}, mat2(1, 0, 0, -1)));
        in.add_gate(fixed_gate("S", {2}, mat2(1, 0, 0, 1i)));
        in.add_gate(fixed_gate("T", {2}, mat2(1, 0, 0, std::exp(1i * (std::numbers::pi / 4)))));
        in.add_gate(fixed_gate("CNOT", {2, 2}, controlled(mat2(0, 1, 1, 0))));
        in.add_gate(fixed_gate("CZ", {2, 2}, controlled(mat2(1, 0, 0, -1))));
        {
            ComplexMatrix sw = ComplexMatrix::Zero(4, 4);
            sw(0, 0) = sw(1, 2) = sw(2, 1) = sw(3, 3) = 1.0;
            in.add_gate(fixed_gate("SWAP", {2, 2}, sw));
        }
        in.add_gate(real_gate("Rx", {2}, [](double t) {
            return mat2(std::cos(t / 2), -1i * std::sin(t / 2), -1i * std::sin(t / 2), std::cos(t / 2));
        }));
        in.add_gate(real_gate("Ry", {2}, [](double t) {
            return mat2(std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2));
        }));
        in.add_gate(real_gate("Rz", {2}, [](double t) {
            return mat2(std::exp(-1i * (t / 2)), 0, 0, std::exp(1i * (t / 2)));
        }));
        in.add_gate(real_gate("Phase", {2}, [](double t) { return mat2(1, 0, 0, std::exp(1i * t)); }));
        in.add_gate(real_gate("Rxx", {2, 2}, [](double t) {
            ComplexMatrix xx = ComplexMatrix::Zero(4, 4);
            xx(0, 3) = xx(1, 2) = xx(2, 1) = xx(3, 0) = 1.0;
            return ComplexMatrix(std::cos(t / 2) * ComplexMatrix::Identity(4, 4) - 1i * std::sin(t / 2) * xx);
        }));
        {
            GateFamily r;
            r.name = "R";
            r.dims = {2};
            r.params = {any_int()};
            r.build = [](const std::vector<Value>& a, const Dims&) { return phase_r(classical::as_int(a[0])); };
            in.add_gate(r);
            GateFamily cr = r;
            cr.name = "CR";
            cr.dims = {2, 2};
            cr.build = [](const std::vector<Value>& a, const Dims&) {
                return controlled(phase_r(classical::as_int(a[0])));
            };
            in.add_gate(cr);
        }
        {
            GateFamily rev;
            rev.name = "Reverse";
            rev.variadic = true;
            rev.build = [](const std::vector<Value>&, const Dims& dims) { return reverse_perm(dims); };
            in.add_gate(rev);
        }
        {
            GateFamily id;
            id.name = "Id";
            id.variadic = true;
            id.build = [](const std::vector<Value>&, const Dims& dims) { return linalg::identity(product(dims)); };
            in.add_gate(id);
        }
        {
            MeasurementFamily m;
            m.name = "M";
            m.variadic = true;
            m.build = [](const Dims& dims) {
                std::size_t d = product(dims);
                std::vector<std::pair<std::int64_t, ComplexMatrix>> ops;
                for (std::size_t k = 0; k < d; ++k) {
                    ComplexMatrix p = ComplexMatrix::Zero(d, d);
                    p(k, k) = 1.0;
                    ops.emplace_back(static_cast<std::int64_t>(k), p);
                }
                return ops;
            };
            in.add_measurement(m);
        }
        {
            KrausFamily mix;
            mix.name = "Mix";
            mix.variadic_params = true;
            mix.dims = {};
            mix.build = [](const std::vector<Value>& a, const Dims&) {
                std::vector<ComplexMatrix> ops;
                for (const auto& v : a) {
                    double p = classical::as_real(v);
                    if (p < 0) fail(ErrorKind::SubnormalizationViolation, "Mix weight is negative");
                    ops.push_back(ComplexMatrix::Constant(1, 1, std::sqrt(p)));
                }
                return ops;
            };
            in.add_kraus(mix);
            KrausFamily scale;
            scale.name = "Scale";
            scale.params = {ClassicalType::real()};
            scale.dims = {};
            scale.rank = 1;
            scale.build = [](const std::vector<Value>& a, const Dims&) {
                double p = classical::as_real(a[0]);
                if (p < 0) fail(ErrorKind::SubnormalizationViolation, "Scale weight is negative");
                return std::vector<ComplexMatrix>{ComplexMatrix::Constant(1, 1, std::sqrt(p))};
            };
            in.add_kraus(scale);
        }
        {
            AtomicFamily id;
            id.name = "I";
            id.variadic = true;
            id.build = [](const std::vector<Value>&, const Dims& dims) { return linalg::identity(product(dims)); };
            in.add_atomic(id);
            AtomicFamily zero = id;
            zero.name = "O";
            zero.build = [](const std::vector<Value>&, const Dims& dims) {
                std::size_t d = product(dims);
                return ComplexMatrix(ComplexMatrix::Zero(d, d));
            };
            in.add_atomic(zero);
            AtomicFamily proj;
            proj.name = "P";
            proj.variadic = true;
            proj.params = {any_int()};
            proj.build = [](const std::vector<Value>& a, const Dims& dims) {
                std::size_t d = product(dims);
                std::int64_t k = classical::as_int(a[0]);
                ComplexMatrix p = ComplexMatrix::Zero(d, d);
                if (k >= 0 && static_cast<std::size_t>(k) < d) p(k, k) = 1.0;
                return p;
            };
            in.add_atomic(proj);
            for (int b = 0; b < 2; ++b) {
                AtomicFamily pb;
                pb.name = b == 0 ? "P0" : "P1";
                pb.dims = {2};
                pb.build = [b](const std::vector<Value>&, const Dims&) {
                    ComplexMatrix p = ComplexMatrix::Zero(2, 2);
                    p(b, b) = 1.0;
                    return p;
                };
                in.add_atomic(pb);
            }
        }
        return in;
    }

    void Interpretation::add_gate(GateFamily g) { m_gates[g.name] = std::move(g); }
    void Interpretation::add_measurement(MeasurementFamily m) { m_measurements[m.name] = std::move(m); }
    void Interpretation::add_kraus(KrausFamily k) { m_kraus[k.name] = std::move(k); }
    void Interpretation::add_atomic(AtomicFamily a) { m_atomic[a.name] = std::move(a); }

    void Interpretation::declare_quantum(QuantumVarDecl q) {
        for (const auto& t : q.index_types)
            if (!t.enumerable() || t.kind == classical::TypeKind::Bits || t.kind == classical::TypeKind::Real ||
                t.kind == classical::TypeKind::Complex)
                fail(ErrorKind::Schema, "quantum variable " + q.name + " needs finite Int, Bool or enum indices");
        for (auto& existing : m_qvars)
            if (existing.name == q.name) {
                existing = std::move(q);
                return;
            }
        m_qvars.push_back(std::move(q));
    }

    const QuantumVarDecl* Interpretation::find_quantum(const std::string& name) const {
        for (const auto& q : m_qvars)
            if (q.name == name) return &q;
        return nullptr;
    }

    const GateFamily* Interpretation::find_gate(const std::string& name) const {
        auto it = m_gates.find(name);
        return it == m_gates.end() ? nullptr : &it->second;
    }

    const MeasurementFamily* Interpretation::find_measurement(const std::string& name) const {
        auto it = m_measurements.find(name);
        return it == m_measurements.end() ? nullptr : &it->second;
    }

    std::optional<KrausFamily> Interpretation::find_kraus(const std::string& name) const {
        if (name == "F_B") return derive_fb();
        if (name.rfind("F_U.", 0) == 0) {
            if (auto g = find_gate(name.substr(4))) return derive_fu(*g);
            return std::nullopt;
        }
        if (name.rfind("F_M.", 0) == 0) {
            if (auto m = find_measurement(name.substr(4))) return derive_fm(*m);
            return std::nullopt;
        }
        auto it = m_kraus.find(name);
        if (it == m_kraus.end()) return std::nullopt;
        return it->second;
    }

    const AtomicFamily* Interpretation::find_atomic(const std::string& name) const {
        auto it = m_atomic.find(name);
        return it == m_atomic.end() ? nullptr : &it->second;
    }

    ComplexMatrix Interpretation::gate_matrix(const std::string& name, const std::vector<Value>& args,
                                              const Dims& dims) const {
        const GateFamily* g = find_gate(name);
        if (!g) fail(ErrorKind::UnknownSymbol, "unknown gate " + name);
        check_dims(name, g->dims, g->variadic, dims);
        auto a = coerce_args(name, g->params, args);
        std::string key = "G:" + cache_key(name, a, dims);
        {
            std::lock_guard<std::mutex> lock(m_cache_mutex);
            auto it = m_matrix_cache.find(key);
            if (it != m_matrix_cache.end()) return it->second;
        }
        ComplexMatrix u = g->build(a, dims);
        if (static_cast<std::size_t>(u.rows()) != product(dims) || u.rows() != u.cols())
            fail(ErrorKind::DimensionMismatch, "gate " + name + " has the wrong shape");
        check_unitary(name, u, m_tol.unitary);
        std::lock_guard<std::mutex> lock(m_cache_mutex);
        m_matrix_cache.emplace(key, u);
        return u;
    }

    std::vector<std::pair<std::int64_t, ComplexMatrix>> Interpretation::measurement_ops(const std::string& name,
                                                                                          const Dims& dims) const {
        const MeasurementFamily* m = find_measurement(name);
        if (!m) fail(ErrorKind::UnknownSymbol, "unknown measurement " + name);
        check_dims(name, m->dims, m->variadic, dims);
        std::string key = cache_key(name, {}, dims);
        {
            std::lock_guard<std::mutex> lock(m_cache_mutex);
            auto it = m_meas_cache.find(key);
            if (it != m_meas_cache.end()) return it->second;
        }
        auto ops = m->build(dims);
        for (const auto& [k, op] : ops)
            if (static_cast<std::size_t>(op.cols()) != product(dims))
                fail(ErrorKind::DimensionMismatch, "measurement " + name + " has the wrong shape");
        check_complete(name, ops, m_tol.unitary);
        std::lock_guard<std::mutex> lock(m_cache_mutex);
        m_meas_cache.emplace(key, ops);
        return ops;
    }

    std::vector<ComplexMatrix> Interpretation::kraus_ops(const std::string& name, const std::vector<Value>& args,
                                                         const Dims& dims) const {
        auto k = find_kraus(name);
        if (!k) fail(ErrorKind::UnknownSymbol, "unknown Kraus symbol " + name);
        if (k->variadic) {
            if (dims.empty()) fail(ErrorKind::ArityMismatch, name + " needs at least one target");
        } else {
            check_dims(name, k->dims, false, dims);
        }
        auto a = coerce_args(name, k->params, args, k->variadic_params);
        std::string key = cache_key(name, a, dims);
        {
            std::lock_guard<std::mutex> lock(m_cache_mutex);
            auto it = m_kraus_cache.find(key);
            if (it != m_kraus_cache.end()) return it->second;
        }
        auto ops = k->build(a, dims);
        for (const auto& f : ops)
            if (static_cast<std::size_t>(f.rows()) != product(dims) || f.rows() != f.cols())
                fail(ErrorKind::DimensionMismatch, "Kraus symbol " + name + " has the wrong shape");
        if (k->rank && ops.size() != *k->rank)
            fail(ErrorKind::ArityMismatch, "Kraus symbol " + name + " has the wrong rank");
        check_subnormalized(name, ops, m_tol.psd);
        std::lock_guard<std::mutex> lock(m_cache_mutex);
        m_kraus_cache.emplace(key, ops);
        return ops;
    }

    ComplexMatrix Interpretation::atomic(const std::string& name, const std::vector<Value>& args,
                                         const Dims& dims) const {
        const AtomicFamily* a = find_atomic(name);
        if (!a) fail(ErrorKind::UnknownSymbol, "unknown atomic predicate " + name);
        if (a->variadic) {
            // an empty target list denotes the scalar case
        } else {
            check_dims(name, a->dims, false, dims);
        }
        auto v = coerce_args(name, a->params, args);
        std::string key = "A:" + cache_key(name, v, dims);
        {
            std::lock_guard<std::mutex> lock(m_cache_mutex);
            auto it = m_matrix_cache.find(key);
            if (it != m_matrix_cache.end()) return it->second;
        }
        ComplexMatrix k = a->build(v, dims);
        if (static_cast<std::size_t>(k.rows()) != product(dims) || k.rows() != k.cols())
            fail(ErrorKind::DimensionMismatch, "atomic predicate " + name + " has the wrong shape");
        check_effect(name, k, m_tol.psd, m_tol.herm);
        std::lock_guard<std::mutex> lock(m_cache_mutex);
        m_matrix_cache.emplace(key, k);
        return k;
    }

    ResolvedSystem Interpretation::resolve(const syntax::SubscriptedVar& q,
                                           const classical::ClassicalState& sigma) const {
        const QuantumVarDecl* d = find_quantum(q.base);
        if (!d) fail(ErrorKind::LayoutResolution, "quantum variable " + q.base + " is not declared");
        if (d->index_types.size() != q.subscripts.size())
            fail(ErrorKind::LayoutResolution, "quantum variable " + q.base + " expects " +
                                                  std::to_string(d->index_types.size()) + " subscript(s)");
        if (q.subscripts.empty()) return {q.base, d->dim};
        std::string id = q.base + "[";
        for (std::size_t i = 0; i < q.subscripts.size(); ++i) {
            Value v = classical::eval_expr(sigma, *q.subscripts[i]);
            if (d->index_types[i].kind == classical::TypeKind::Int && classical::kind_of(v) == classical::ValueKind::Bool)
                v = classical::as_int(v);
            if (!d->index_types[i].contains(v))
                fail(ErrorKind::LayoutResolution, "subscript " + classical::value_to_string(v) + " of " + q.base +
                                                      " is outside " + d->index_types[i].to_string());
            if (i) id += ",";
            id += classical::value_to_string(v);
        }
        return {id + "]", d->dim};
    }

    std::vector<linalg::SystemSpec> Interpretation::systems_of(const std::string& base) const {
        const QuantumVarDecl* d = find_quantum(base);
        if (!d) fail(ErrorKind::LayoutResolution, "quantum variable " + base + " is not declared");
        if (d->index_types.empty()) return {{base, d->dim}};
        std::vector<std::vector<Value>> values;
        std::size_t total = 1;
        for (const auto& t : d->index_types) {
            values.push_back(t.values());
            total *= values.back().size();
        }
        std::vector<linalg::SystemSpec> out;
        for (std::size_t n = 0; n < total; ++n) {
            std::size_t rem = n;
            std::vector<std::string> parts(values.size());
            for (std::size_t i = values.size(); i-- > 0;) {
                parts[i] = classical::value_to_string(values[i][rem % values[i].size()]);
                rem /= values[i].size();
            }
            std::string id = base + "[";
            for (std::size_t i = 0; i < parts.size(); ++i) id += (i ? "," : "") + parts[i];
            out.push_back({id + "]", d->dim});
        }
        return out;
    }

    linalg::RegisterLayout Interpretation::layout_for(const std::set<std::string>& bases) const {
        for (const auto& b : bases)
            if (!find_quantum(b)) fail(ErrorKind::LayoutResolution, "quantum variable " + b + " is not declared");
        std::vector<linalg::SystemSpec> systems;
        for (const auto& q : m_qvars)
            if (bases.count(q.name)) {
                auto s = systems_of(q.name);
                systems.insert(systems.end(), s.begin(), s.end());
            }
        return linalg::RegisterLayout(std::move(systems), m_limits.dimension_cap);
    }

    linalg::RegisterLayout Interpretation::full_layout() const {
        std::set<std::string> all;
        for (const auto& q : m_qvars) all.insert(q.name);
        return layout_for(all);
    }

    bool Interpretation::is_gate(const std::string& name) const { return find_gate(name) != nullptr; }
    bool Interpretation::is_measurement(const std::string& name) const { return find_measurement(name) != nullptr; }

    std::optional<std::size_t> Interpretation::gate_arity(const std::string& name) const {
        auto g = find_gate(name);
        if (!g || g->variadic) return std::nullopt;
        return g->dims.size();
    }

    std::optional<std::size_t> Interpretation::gate_param_count(const std::string& name) const {
        auto g = find_gate(name);
        if (!g) return std::nullopt;
        return g->params.size();
    }

    std::optional<std::size_t> Interpretation::measurement_arity(const std::string& name) const {
        auto m = find_measurement(name);
        if (!m || m->variadic) return std::nullopt;
        return m->dims.size();
    }

    std::optional<std::int64_t> Interpretation::enum_constant(const std::string& label) const {
        return m_typing.enum_constant(label);
    }

    bool Interpretation::is_classical_var(const std::string& name) const { return m_typing.find(name) != nullptr; }

}  // namespace qhl::structures
