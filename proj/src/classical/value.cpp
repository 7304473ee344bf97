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

#include "qhl/classical/value.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "qhl/error.hpp"

namespace qhl::classical {

    bool BitArray::at(std::int64_t k) const {
        if (k < lo || k > hi())
            fail(ErrorKind::OutOfRange, "bit index " + std::to_string(k) + " outside " +
                                            std::to_string(lo) + ".." + std::to_string(hi()));
        return bits[static_cast<std::size_t>(k - lo)];
    }

    ValueKind kind_of(const Value& v) { return static_cast<ValueKind>(v.index()); }

    const char* kind_name(ValueKind k) {
        switch (k) {
            case ValueKind::Bool: return "Bool";
            case ValueKind::Int: return "Int";
            case ValueKind::Real: return "Real";
            case ValueKind::Complex: return "Complex";
            case ValueKind::Bits: return "Bits";
        }
        return "?";
    }

    static std::string real_text(double r) {
        std::ostringstream os;
        os.precision(17);
        os << r;
        std::string s = os.str();
        if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
        return s;
    }

    std::string value_to_string(const Value& v) {
        switch (kind_of(v)) {
            case ValueKind::Bool: return std::get<bool>(v) ? "true" : "false";
            case ValueKind::Int: return std::to_string(std::get<std::int64_t>(v));
            case ValueKind::Real: return real_text(std::get<double>(v));
            case ValueKind::Complex: {
                auto c = std::get<std::complex<double>>(v);
                return "(" + real_text(c.real()) + " + " + real_text(c.imag()) + "i)";
            }
            case ValueKind::Bits: {
                const auto& b = std::get<BitArray>(v);
                std::string s = "[";
                for (std::size_t i = 0; i < b.bits.size(); ++i) {
                    if (i) s += ",";
                    s += b.bits[i] ? "1" : "0";
                }
                return s + "]";
            }
        }
        return "?";
    }

    bool as_bool(const Value& v) {
        if (auto b = std::get_if<bool>(&v)) return *b;
        fail(ErrorKind::Type, "expected Bool, got " + std::string(kind_name(kind_of(v))));
    }

    std::int64_t as_int(const Value& v) {
        if (auto i = std::get_if<std::int64_t>(&v)) return *i;
        if (auto b = std::get_if<bool>(&v)) return *b ? 1 : 0;
        fail(ErrorKind::Type, "expected Int, got " + std::string(kind_name(kind_of(v))));
    }

    double as_real(const Value& v) {
        switch (kind_of(v)) {
            case ValueKind::Bool: return std::get<bool>(v) ? 1.0 : 0.0;
            case ValueKind::Int: return static_cast<double>(std::get<std::int64_t>(v));
            case ValueKind::Real: return std::get<double>(v);
            default: break;
        }
        fail(ErrorKind::Type, "expected Real, got " + std::string(kind_name(kind_of(v))));
    }

    std::complex<double> as_complex(const Value& v) {
        if (auto c = std::get_if<std::complex<double>>(&v)) return *c;
        return {as_real(v), 0.0};
    }

    bool is_numeric(const Value& v) { return kind_of(v) != ValueKind::Bits; }

    bool semantic_equal(const Value& a, const Value& b, double tol) {
        ValueKind ka = kind_of(a), kb = kind_of(b);
        if (ka == ValueKind::Bits || kb == ValueKind::Bits) return a == b;
        if (ka == ValueKind::Bool && kb == ValueKind::Bool) return a == b;
        if ((ka == ValueKind::Int || ka == ValueKind::Bool) && (kb == ValueKind::Int || kb == ValueKind::Bool))
            return as_int(a) == as_int(b);
        return std::abs(as_complex(a) - as_complex(b)) <= tol;
    }

    int compare_values(const Value& a, const Value& b) {
        if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
        auto cmp = [](auto x, auto y) { return x < y ? -1 : (y < x ? 1 : 0); };
        switch (kind_of(a)) {
            case ValueKind::Bool: return cmp(std::get<bool>(a), std::get<bool>(b));
            case ValueKind::Int: return cmp(std::get<std::int64_t>(a), std::get<std::int64_t>(b));
            case ValueKind::Real: return cmp(std::get<double>(a), std::get<double>(b));
            case ValueKind::Complex: {
                auto x = std::get<std::complex<double>>(a), y = std::get<std::complex<double>>(b);
                int c = cmp(x.real(), y.real());
                return c ? c : cmp(x.imag(), y.imag());
            }
            case ValueKind::Bits: {
                const auto& x = std::get<BitArray>(a);
                const auto& y = std::get<BitArray>(b);
                if (int c = cmp(x.lo, y.lo)) return c;
                if (x.bits < y.bits) return -1;
                if (y.bits < x.bits) return 1;
                return 0;
            }
        }
        return 0;
    }

    ClassicalType ClassicalType::boolean() {
        ClassicalType t;
        t.kind = TypeKind::Bool;
        return t;
    }
    ClassicalType ClassicalType::integer(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) fail(ErrorKind::Schema, "empty integer range");
        ClassicalType t;
        t.kind = TypeKind::Int;
        t.lo = lo;
        t.hi = hi;
        return t;
    }
    ClassicalType ClassicalType::bits(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) fail(ErrorKind::Schema, "empty bit-array index range");
        ClassicalType t;
        t.kind = TypeKind::Bits;
        t.lo = lo;
        t.hi = hi;
        return t;
    }
    ClassicalType ClassicalType::real() {
        ClassicalType t;
        t.kind = TypeKind::Real;
        return t;
    }
    ClassicalType ClassicalType::complex() {
        ClassicalType t;
        t.kind = TypeKind::Complex;
        return t;
    }
    ClassicalType ClassicalType::enumeration(std::string name, std::vector<std::string> labels) {
        if (labels.empty()) fail(ErrorKind::Schema, "enum " + name + " has no labels");
        ClassicalType t;
        t.kind = TypeKind::Enum;
        t.enum_name = std::move(name);
        t.labels = std::move(labels);
        t.lo = 0;
        t.hi = static_cast<std::int64_t>(t.labels.size()) - 1;
        return t;
    }

    bool ClassicalType::enumerable() const {
        if (kind == TypeKind::Real || kind == TypeKind::Complex) return grid.has_value();
        return true;
    }

    std::optional<std::uint64_t> ClassicalType::cardinality() const {
        constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
        switch (kind) {
            case TypeKind::Bool: return 2;
            case TypeKind::Int:
            case TypeKind::Enum: return static_cast<std::uint64_t>(hi - lo) + 1;
            case TypeKind::Bits: {
                std::uint64_t n = static_cast<std::uint64_t>(hi - lo) + 1;
                if (n >= 64) return kMax;
                return std::uint64_t{1} << n;
            }
            case TypeKind::Real:
            case TypeKind::Complex:
                if (grid) return grid->size();
                return std::nullopt;
        }
        return std::nullopt;
    }

    std::vector<Value> ClassicalType::values() const {
        auto card = cardinality();
        if (!card) fail(ErrorKind::InfiniteQuantifierDomain, "type " + to_string() + " is not enumerable");
        if (*card > 100000000ULL) fail(ErrorKind::DomainTooLarge, "type " + to_string() + " too large to enumerate");
        std::vector<Value> out;
        out.reserve(*card);
        switch (kind) {
            case TypeKind::Bool:
                out.push_back(false);
                out.push_back(true);
                break;
            case TypeKind::Int:
            case TypeKind::Enum:
                for (std::int64_t v = lo; v <= hi; ++v) out.push_back(v);
                break;
            case TypeKind::Bits: {
                std::size_t n = static_cast<std::size_t>(hi - lo) + 1;
                for (std::uint64_t m = 0; m < *card; ++m) {
                    BitArray b{lo, std::vector<bool>(n)};
                    // first index is the most significant bit, so enumeration order is numeric
                    for (std::size_t i = 0; i < n; ++i) b.bits[i] = (m >> (n - 1 - i)) & 1u;
                    out.push_back(std::move(b));
                }
                break;
            }
            case TypeKind::Real:
                for (double g : *grid) out.push_back(g);
                break;
            case TypeKind::Complex:
                for (double g : *grid) out.push_back(std::complex<double>(g, 0.0));
                break;
        }
        return out;
    }

    bool ClassicalType::contains(const Value& v) const {
        switch (kind) {
            case TypeKind::Bool: return kind_of(v) == ValueKind::Bool;
            case TypeKind::Int:
            case TypeKind::Enum: {
                if (kind_of(v) != ValueKind::Int) return false;
                auto i = std::get<std::int64_t>(v);
                return i >= lo && i <= hi;
            }
            case TypeKind::Bits: {
                auto b = std::get_if<BitArray>(&v);
                return b && b->lo == lo && b->hi() == hi;
            }
            case TypeKind::Real: return kind_of(v) == ValueKind::Real || kind_of(v) == ValueKind::Int;
            case TypeKind::Complex: return kind_of(v) != ValueKind::Bits && kind_of(v) != ValueKind::Bool;
        }
        return false;
    }

    std::string ClassicalType::to_string() const {
        switch (kind) {
            case TypeKind::Bool: return "Bool";
            case TypeKind::Int: return "Int(" + std::to_string(lo) + ".." + std::to_string(hi) + ")";
            case TypeKind::Bits: return "Bits(" + std::to_string(lo) + ".." + std::to_string(hi) + ")";
            case TypeKind::Real: return "Real";
            case TypeKind::Complex: return "Complex";
            case TypeKind::Enum: return enum_name;
        }
        return "?";
    }

    void Typing::declare(const std::string& name, ClassicalType type) { m_vars[name] = std::move(type); }

    const ClassicalType* Typing::find(const std::string& name) const {
        auto it = m_vars.find(name);
        return it == m_vars.end() ? nullptr : &it->second;
    }

    const ClassicalType& Typing::at(const std::string& name) const {
        auto t = find(name);
        if (!t) fail(ErrorKind::UnboundVariable, "classical variable " + name + " is not declared");
        return *t;
    }

    void Typing::declare_enum(const std::string& name, std::vector<std::string> labels) {
        auto t = ClassicalType::enumeration(name, labels);
        for (std::size_t i = 0; i < labels.size(); ++i) m_labels[labels[i]] = static_cast<std::int64_t>(i);
        m_enums[name] = std::move(t);
    }

    const ClassicalType* Typing::enum_type(const std::string& name) const {
        auto it = m_enums.find(name);
        return it == m_enums.end() ? nullptr : &it->second;
    }

    std::optional<std::int64_t> Typing::enum_constant(const std::string& label) const {
        auto it = m_labels.find(label);
        if (it == m_labels.end()) return std::nullopt;
        return it->second;
    }

    static std::string trim(std::string_view s) {
        std::size_t a = 0, b = s.size();
        while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
        return std::string(s.substr(a, b - a));
    }

    static std::pair<std::int64_t, std::int64_t> parse_range(const std::string& body, std::string_view text) {
        auto dots = body.find("..");
        if (dots == std::string::npos) fail(ErrorKind::Schema, "malformed range in type " + std::string(text));
        try {
            return {std::stoll(trim(body.substr(0, dots))), std::stoll(trim(body.substr(dots + 2)))};
        } catch (const std::exception&) {
            fail(ErrorKind::Schema, "malformed range in type " + std::string(text));
        }
    }

    ClassicalType parse_type(std::string_view text, const Typing* typing) {
        std::string t = trim(text);
        if (t == "Bool") return ClassicalType::boolean();
        if (t == "Real") return ClassicalType::real();
        if (t == "Complex") return ClassicalType::complex();
        auto open = t.find('(');
        if (open != std::string::npos && t.back() == ')') {
            std::string head = trim(t.substr(0, open));
            auto [lo, hi] = parse_range(t.substr(open + 1, t.size() - open - 2), text);
            if (head == "Int") return ClassicalType::integer(lo, hi);
            if (head == "Bits") return ClassicalType::bits(lo, hi);
        }
        if (typing)
            if (auto e = typing->enum_type(t)) return *e;
        fail(ErrorKind::Schema, "unknown type " + t);
    }

    const Value* ClassicalState::find(const std::string& name) const {
        auto it = m_bindings.find(name);
        return it == m_bindings.end() ? nullptr : &it->second;
    }

    const Value& ClassicalState::at(const std::string& name) const {
        auto v = find(name);
        if (!v) fail(ErrorKind::UnboundVariable, "variable " + name + " has no value");
        return *v;
    }

    bool ClassicalState::operator<(const ClassicalState& other) const {
        auto a = m_bindings.begin(), b = other.m_bindings.begin();
        for (; a != m_bindings.end() && b != other.m_bindings.end(); ++a, ++b) {
            if (a->first != b->first) return a->first < b->first;
            int c = compare_values(a->second, b->second);
            if (c) return c < 0;
        }
        return a == m_bindings.end() && b != other.m_bindings.end();
    }

    std::string ClassicalState::to_string() const {
        std::string s = "{";
        bool first = true;
        for (const auto& [k, v] : m_bindings) {
            if (!first) s += ", ";
            first = false;
            s += k + "=" + value_to_string(v);
        }
        return s + "}";
    }

    Value coerce_to(const Value& v, const ClassicalType& t) {
        if (t.kind == TypeKind::Real && kind_of(v) == ValueKind::Int) return as_real(v);
        if (t.kind == TypeKind::Complex && kind_of(v) != ValueKind::Complex && is_numeric(v))
            return as_complex(v);
        return v;
    }

    ClassicalState update(const ClassicalState& sigma, const std::string& x, const Value& v,
                          const Typing& typing) {
        const ClassicalType& t = typing.at(x);
        Value c = coerce_to(v, t);
        if (!t.contains(c))
            fail(ErrorKind::OutOfRange, "value " + value_to_string(v) + " is outside type " + t.to_string() +
                                            " of " + x);
        ClassicalState out = sigma;
        out.set(x, std::move(c));
        return out;
    }

}  // namespace qhl::classical
