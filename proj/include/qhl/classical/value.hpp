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

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qhl::classical {

    struct BitArray {
        std::int64_t lo = 0;
        std::vector<bool> bits;

        std::int64_t hi() const { return lo + static_cast<std::int64_t>(bits.size()) - 1; }
        bool at(std::int64_t k) const;
        bool operator==(const BitArray&) const = default;
    };

    using Value = std::variant<bool, std::int64_t, double, std::complex<double>, BitArray>;

    enum class ValueKind { Bool, Int, Real, Complex, Bits };

    ValueKind kind_of(const Value& v);
    const char* kind_name(ValueKind k);
    std::string value_to_string(const Value& v);

    bool as_bool(const Value& v);
    std::int64_t as_int(const Value& v);
    double as_real(const Value& v);
    std::complex<double> as_complex(const Value& v);
    bool is_numeric(const Value& v);

    // Numeric values compare by magnitude with tolerance; other kinds compare exactly.
    bool semantic_equal(const Value& a, const Value& b, double tol = 1e-12);
    // Total order used for canonical sorting of states.
    int compare_values(const Value& a, const Value& b);

    enum class TypeKind { Bool, Int, Enum, Real, Complex, Bits };

    struct ClassicalType {
        TypeKind kind = TypeKind::Int;
        std::int64_t lo = 0;
        std::int64_t hi = 0;
        std::string enum_name;
        std::vector<std::string> labels;
        std::optional<std::vector<double>> grid;

        static ClassicalType boolean();
        static ClassicalType integer(std::int64_t lo, std::int64_t hi);
        static ClassicalType bits(std::int64_t lo, std::int64_t hi);
        static ClassicalType real();
        static ClassicalType complex();
        static ClassicalType enumeration(std::string name, std::vector<std::string> labels);

        bool enumerable() const;
        // Saturates at UINT64_MAX; nullopt when not enumerable.
        std::optional<std::uint64_t> cardinality() const;
        std::vector<Value> values() const;
        bool contains(const Value& v) const;
        std::string to_string() const;
        bool operator==(const ClassicalType&) const = default;
    };

    class Typing {
       public:
        void declare(const std::string& name, ClassicalType type);
        const ClassicalType* find(const std::string& name) const;
        const ClassicalType& at(const std::string& name) const;
        const std::map<std::string, ClassicalType>& variables() const { return m_vars; }

        void declare_enum(const std::string& name, std::vector<std::string> labels);
        const ClassicalType* enum_type(const std::string& name) const;
        std::optional<std::int64_t> enum_constant(const std::string& label) const;

       private:
        std::map<std::string, ClassicalType> m_vars;
        std::map<std::string, ClassicalType> m_enums;
        std::map<std::string, std::int64_t> m_labels;
    };

    // Accepts Bool, Int(lo..hi), Bits(lo..hi), Real, Complex, or a declared enum name.
    ClassicalType parse_type(std::string_view text, const Typing* typing = nullptr);

    class ClassicalState {
       public:
        ClassicalState() = default;
        explicit ClassicalState(std::map<std::string, Value> bindings) : m_bindings(std::move(bindings)) {}

        const Value* find(const std::string& name) const;
        const Value& at(const std::string& name) const;
        void set(const std::string& name, Value v) { m_bindings[name] = std::move(v); }
        void erase(const std::string& name) { m_bindings.erase(name); }
        const std::map<std::string, Value>& bindings() const { return m_bindings; }

        bool operator==(const ClassicalState& other) const { return m_bindings == other.m_bindings; }
        bool operator<(const ClassicalState& other) const;
        std::string to_string() const;

       private:
        std::map<std::string, Value> m_bindings;
    };

    // σ[x := v]; x must be declared and v must belong to its type.
    ClassicalState update(const ClassicalState& sigma, const std::string& x, const Value& v,
                          const Typing& typing);
    // Coerces v into the representation of type t when lossless (e.g. Int into Real).
    Value coerce_to(const Value& v, const ClassicalType& t);

}  // namespace qhl::classical
