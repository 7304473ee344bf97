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

#include "qhl/json_io.hpp"

#include <fstream>
#include <sstream>

#include "qhl/error.hpp"

namespace qhl::io {

    using classical::ClassicalType;
    using classical::TypeKind;
    using classical::Value;

    linalg::Complex complex_from_json(const json& j) {
        if (j.is_number()) return {j.get<double>(), 0.0};
        if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
            return {j[0].get<double>(), j[1].get<double>()};
        fail(ErrorKind::Schema, "expected a number or [re, im] pair, got " + j.dump());
    }

    json complex_to_json(linalg::Complex c) {
        if (c.imag() == 0.0) return c.real();
        return json::array({c.real(), c.imag()});
    }

    linalg::ComplexMatrix matrix_from_json(const json& j) {
        if (!j.is_array() || j.empty()) fail(ErrorKind::Schema, "matrix must be a non-empty array of rows");
        const std::size_t rows = j.size();
        if (!j[0].is_array()) fail(ErrorKind::Schema, "matrix rows must be arrays");
        const std::size_t cols = j[0].size();
        linalg::ComplexMatrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            if (!j[r].is_array() || j[r].size() != cols) fail(ErrorKind::Schema, "matrix rows differ in length");
            for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
        }
        return m;
    }

    json matrix_to_json(const linalg::ComplexMatrix& m) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
            rows.push_back(row);
        }
        return rows;
    }

    linalg::ComplexVector vector_from_json(const json& j) {
        if (!j.is_array() || j.empty()) fail(ErrorKind::Schema, "state vector must be a non-empty array");
        linalg::ComplexVector v(j.size());
        for (std::size_t i = 0; i < j.size(); ++i) v(i) = complex_from_json(j[i]);
        return v;
    }

    json vector_to_json(const linalg::ComplexVector& v) {
        json out = json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
        return out;
    }

    Value value_from_json(const json& j, const ClassicalType* type) {
        if (type && type->kind == TypeKind::Bits) {
            classical::BitArray b;
            b.lo = type->lo;
            if (j.is_string()) {
                for (char c : j.get<std::string>()) {
                    if (c != '0' && c != '1') fail(ErrorKind::Schema, "bit string may contain only 0 and 1");
                    b.bits.push_back(c == '1');
                }
            } else if (j.is_array()) {
                for (const auto& e : j) {
                    if (e.is_boolean()) b.bits.push_back(e.get<bool>());
                    else if (e.is_number_integer() && (e == 0 || e == 1)) b.bits.push_back(e.get<int>() == 1);
                    else fail(ErrorKind::Schema, "bit arrays hold 0/1 entries");
                }
            } else {
                fail(ErrorKind::Schema, "bit array expected, got " + j.dump());
            }
            return b;
        }
        if (type && type->kind == TypeKind::Enum && j.is_string()) {
            auto s = j.get<std::string>();
            for (std::size_t i = 0; i < type->labels.size(); ++i)
                if (type->labels[i] == s) return static_cast<std::int64_t>(i);
            fail(ErrorKind::Type, "'" + s + "' is not a label of " + type->enum_name);
        }
        Value v;
        if (j.is_boolean()) v = j.get<bool>();
        else if (j.is_number_integer()) v = j.get<std::int64_t>();
        else if (j.is_number()) v = j.get<double>();
        else if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
            v = std::complex<double>(j[0].get<double>(), j[1].get<double>());
        else fail(ErrorKind::Schema, "cannot read a classical value from " + j.dump());
        if (type) v = classical::coerce_to(v, *type);
        return v;
    }

    json value_to_json(const Value& v) {
        switch (classical::kind_of(v)) {
            case classical::ValueKind::Bool: return std::get<bool>(v);
            case classical::ValueKind::Int: return std::get<std::int64_t>(v);
            case classical::ValueKind::Real: return std::get<double>(v);
            case classical::ValueKind::Complex: {
                auto c = std::get<std::complex<double>>(v);
                return json::array({c.real(), c.imag()});
            }
            case classical::ValueKind::Bits: {
                std::string s;
                for (bool b : std::get<classical::BitArray>(v).bits) s += b ? '1' : '0';
                return s;
            }
        }
        return nullptr;
    }

    classical::ClassicalState state_from_json(const json& j, const classical::Typing& typing) {
        if (!j.is_object()) fail(ErrorKind::Schema, "classical state must be an object");
        classical::ClassicalState s;
        for (const auto& [name, val] : j.items()) {
            const ClassicalType* t = typing.find(name);
            if (!t) fail(ErrorKind::UnknownSymbol, "classical variable " + name + " is not declared");
            Value v = value_from_json(val, t);
            if (!t->contains(v))
                fail(ErrorKind::OutOfRange, "value " + classical::value_to_string(v) + " of " + name +
                                                " is outside " + t->to_string());
            s.set(name, v);
        }
        return s;
    }

    json state_to_json(const classical::ClassicalState& s) {
        json out = json::object();
        for (const auto& [k, v] : s.bindings()) out[k] = value_to_json(v);
        return out;
    }

    json read_json_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) fail(ErrorKind::Io, "cannot open " + path);
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            return json::parse(buf.str());
        } catch (const json::parse_error& e) {
            fail(ErrorKind::Schema, path + ": " + e.what());
        }
    }

    const json& require(const json& j, const std::string& key, const std::string& where) {
        if (!j.is_object() || !j.contains(key)) fail(ErrorKind::Schema, where + " lacks '" + key + "'");
        return j.at(key);
    }

}  // namespace qhl::io
