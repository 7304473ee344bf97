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

#include "qhl/structures/loader.hpp"

#include <cmath>

#include "qhl/error.hpp"

namespace qhl::structures {

    using io::json;
    using io::require;

    namespace {

        Dims read_dims(const json& e, const std::string& where) {
            Dims d;
            for (const auto& x : require(e, "dims", where)) {
                if (!x.is_number_integer() || x.get<std::int64_t>() < 1)
                    fail(ErrorKind::Schema, where + ": dimensions must be positive integers");
                d.push_back(x.get<std::size_t>());
            }
            return d;
        }

        std::vector<ClassicalType> read_params(const json& e, const classical::Typing& typing) {
            std::vector<ClassicalType> out;
            if (!e.contains("params")) return out;
            for (const auto& p : e.at("params")) out.push_back(classical::parse_type(p.get<std::string>(), &typing));
            return out;
        }

        std::vector<Value> read_args(const json& e, const std::vector<ClassicalType>& params, const std::string& where) {
            const auto& a = require(e, "args", where);
            if (!a.is_array() || a.size() != params.size())
                fail(ErrorKind::Schema, where + ": table entry has the wrong number of arguments");
            std::vector<Value> out;
            for (std::size_t i = 0; i < params.size(); ++i) {
                Value v = io::value_from_json(a[i], &params[i]);
                if (!params[i].contains(v)) fail(ErrorKind::Schema, where + ": table argument outside its type");
                out.push_back(v);
            }
            return out;
        }

        std::string args_key(const std::vector<Value>& args) {
            std::string k;
            for (const auto& a : args) k += classical::value_to_string(a) + ",";
            return k;
        }

        template <typename T>
        std::function<T(const std::vector<Value>&, const Dims&)> lookup(const std::string& name,
                                                                         std::map<std::string, T> table) {
            return [name, table = std::move(table)](const std::vector<Value>& a, const Dims&) {
                auto it = table.find(args_key(a));
                if (it == table.end()) fail(ErrorKind::OutOfRange, name + " has no table entry for these arguments");
                return it->second;
            };
        }

        std::string entry_name(const json& e, const std::string& section) {
            const auto& n = require(e, "name", section + " entry");
            if (!n.is_string() || n.get<std::string>().empty()) fail(ErrorKind::Schema, section + " name must be a string");
            return n.get<std::string>();
        }

        void load_gate(Interpretation& in, const json& e) {
            const std::string name = entry_name(e, "gates");
            const double eps = in.tolerances().unitary;
            if (e.contains("builder")) {
                const GateFamily* base = in.find_gate(e.at("builder").get<std::string>());
                if (!base) fail(ErrorKind::Schema, "gate " + name + ": unknown builder");
                GateFamily g = *base;
                g.name = name;
                in.add_gate(g);
                return;
            }
            GateFamily g;
            g.name = name;
            g.dims = read_dims(e, "gate " + name);
            g.params = read_params(e, in.types());
            if (e.contains("matrix")) {
                if (!g.params.empty()) fail(ErrorKind::Schema, "gate " + name + ": parameterized gates need a table");
                auto u = io::matrix_from_json(e.at("matrix"));
                check_unitary(name, u, eps);
                g.build = [u](const std::vector<Value>&, const Dims&) { return u; };
            } else {
                std::map<std::string, ComplexMatrix> table;
                for (const auto& row : require(e, "table", "gate " + name)) {
                    auto u = io::matrix_from_json(require(row, "matrix", "gate " + name));
                    check_unitary(name, u, eps);
                    table[args_key(read_args(row, g.params, "gate " + name))] = u;
                }
                g.build = lookup(name, std::move(table));
            }
            in.add_gate(g);
        }

        void load_measurement(Interpretation& in, const json& e) {
            const std::string name = entry_name(e, "measurements");
            if (e.contains("builder")) {
                const MeasurementFamily* base = in.find_measurement(e.at("builder").get<std::string>());
                if (!base) fail(ErrorKind::Schema, "measurement " + name + ": unknown builder");
                MeasurementFamily m = *base;
                m.name = name;
                in.add_measurement(m);
                return;
            }
            MeasurementFamily m;
            m.name = name;
            m.dims = read_dims(e, "measurement " + name);
            std::vector<std::pair<std::int64_t, ComplexMatrix>> ops;
            for (const auto& o : require(e, "outcomes", "measurement " + name)) {
                const auto& v = require(o, "value", "measurement " + name);
                if (!v.is_number_integer()) fail(ErrorKind::Schema, "measurement outcomes must be integers");
                ops.emplace_back(v.get<std::int64_t>(), io::matrix_from_json(require(o, "matrix", "measurement " + name)));
            }
            check_complete(name, ops, in.tolerances().unitary);
            m.build = [ops](const Dims&) { return ops; };
            in.add_measurement(m);
        }

        void load_kraus(Interpretation& in, const json& e) {
            const std::string name = entry_name(e, "kraus_symbols");
            if (name == "F_B" || name.rfind("F_U.", 0) == 0 || name.rfind("F_M.", 0) == 0)
                fail(ErrorKind::Schema, name + " is a designated symbol and cannot be redefined");
            KrausFamily k;
            k.name = name;
            k.dims = read_dims(e, "Kraus symbol " + name);
            k.params = read_params(e, in.types());
            auto read_ops = [&](const json& list) {
                std::vector<ComplexMatrix> ops;
                for (const auto& m : list) ops.push_back(io::matrix_from_json(m));
                check_subnormalized(name, ops, in.tolerances().psd);
                return ops;
            };
            if (e.contains("operators")) {
                if (!k.params.empty()) fail(ErrorKind::Schema, "Kraus symbol " + name + ": parameterized symbols need a table");
                auto ops = read_ops(e.at("operators"));
                k.rank = ops.size();
                k.build = [ops](const std::vector<Value>&, const Dims&) { return ops; };
            } else {
                std::map<std::string, std::vector<ComplexMatrix>> table;
                for (const auto& row : require(e, "table", "Kraus symbol " + name)) {
                    auto ops = read_ops(require(row, "operators", "Kraus symbol " + name));
                    if (k.rank && *k.rank != ops.size())
                        fail(ErrorKind::Schema, "Kraus symbol " + name + ": table entries differ in rank");
                    k.rank = ops.size();
                    table[args_key(read_args(row, k.params, "Kraus symbol " + name))] = ops;
                }
                k.build = lookup(name, std::move(table));
            }
            in.add_kraus(k);
        }

        ComplexMatrix effect_from(const json& e, const std::string& name) {
            if (e.contains("matrix")) return io::matrix_from_json(e.at("matrix"));
            if (e.contains("vector")) {
                auto v = io::vector_from_json(e.at("vector"));
                if (std::abs(v.norm() - 1.0) > 1e-9) fail(ErrorKind::Schema, "atomic predicate " + name + ": vector is not normalized");
                return linalg::outer(v, v);
            }
            fail(ErrorKind::Schema, "atomic predicate " + name + " needs 'matrix', 'vector' or 'table'");
        }

        void load_atomic(Interpretation& in, const json& e) {
            const std::string name = entry_name(e, "atomic_predicates");
            AtomicFamily a;
            a.name = name;
            a.dims = read_dims(e, "atomic predicate " + name);
            a.params = read_params(e, in.types());
            const auto& tol = in.tolerances();
            if (!e.contains("table")) {
                auto k = effect_from(e, name);
                check_effect(name, k, tol.psd, tol.herm);
                a.build = [k](const std::vector<Value>&, const Dims&) { return k; };
            } else {
                std::map<std::string, ComplexMatrix> table;
                for (const auto& row : e.at("table")) {
                    auto k = effect_from(row, name);
                    check_effect(name, k, tol.psd, tol.herm);
                    table[args_key(read_args(row, a.params, "atomic predicate " + name))] = k;
                }
                a.build = lookup(name, std::move(table));
            }
            in.add_atomic(a);
        }

    }  // namespace

    Interpretation load_interpretation(const json& doc) {
        if (!doc.is_object()) fail(ErrorKind::Schema, "interpretation must be a JSON object");
        Interpretation in = doc.value("builtins", true) ? Interpretation::with_builtins() : Interpretation{};

        if (doc.contains("tolerances")) {
            linalg::Tolerances t;
            const auto& j = doc.at("tolerances");
            t.herm = j.value("herm", t.herm);
            t.psd = j.value("psd", t.psd);
            t.trace = j.value("trace", t.trace);
            t.unitary = j.value("unitary", t.unitary);
            t.prune = j.value("prune", t.prune);
            t.fuzz = j.value("fuzz", t.fuzz);
            in.set_tolerances(t);
        }
        if (doc.contains("limits")) {
            Limits l;
            const auto& j = doc.at("limits");
            l.dimension_cap = j.value("dimension_cap", l.dimension_cap);
            l.branch_cap = j.value("branch_cap", l.branch_cap);
            l.domain_cap = j.value("domain_cap", l.domain_cap);
            in.set_limits(l);
        }
        if (doc.contains("enums"))
            for (const auto& [name, labels] : doc.at("enums").items())
                in.typing_mut().declare_enum(name, labels.get<std::vector<std::string>>());
        if (doc.contains("classical_vars")) {
            const auto& cv = doc.at("classical_vars");
            if (cv.is_object()) {
                for (const auto& [name, type] : cv.items())
                    in.declare_classical(name, classical::parse_type(type.get<std::string>(), &in.types()));
            } else {
                for (const auto& e : cv)
                    in.declare_classical(entry_name(e, "classical_vars"),
                                         classical::parse_type(require(e, "type", "classical_vars entry").get<std::string>(),
                                                               &in.types()));
            }
            for (const auto& [name, type] : in.types().variables())
                if (doc.contains("grids") && doc.at("grids").contains(name)) {
                    ClassicalType t = type;
                    t.grid = doc.at("grids").at(name).get<std::vector<double>>();
                    in.declare_classical(name, t);
                }
        }
        if (doc.contains("quantum_vars")) {
            for (const auto& e : doc.at("quantum_vars")) {
                QuantumVarDecl q;
                q.name = entry_name(e, "quantum_vars");
                q.dim = e.value("dim", std::size_t{2});
                if (q.dim < 1) fail(ErrorKind::Schema, "quantum variable " + q.name + " needs a positive dimension");
                if (e.contains("index"))
                    for (const auto& t : e.at("index"))
                        q.index_types.push_back(classical::parse_type(t.get<std::string>(), &in.types()));
                in.declare_quantum(q);
            }
        }
        if (doc.contains("gates"))
            for (const auto& e : doc.at("gates")) load_gate(in, e);
        if (doc.contains("measurements"))
            for (const auto& e : doc.at("measurements")) load_measurement(in, e);
        if (doc.contains("kraus_symbols"))
            for (const auto& e : doc.at("kraus_symbols")) load_kraus(in, e);
        if (doc.contains("atomic_predicates"))
            for (const auto& e : doc.at("atomic_predicates")) load_atomic(in, e);
        return in;
    }

    Interpretation load_interpretation_file(const std::string& path) {
        return load_interpretation(io::read_json_file(path));
    }

}  // namespace qhl::structures
