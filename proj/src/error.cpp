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

#include "qhl/error.hpp"

namespace qhl {

    const char* error_kind_name(ErrorKind kind) {
        switch (kind) {
            case ErrorKind::Syntax: return "syntax-error";
            case ErrorKind::UnknownSymbol: return "unknown-symbol";
            case ErrorKind::ArityMismatch: return "arity-mismatch";
            case ErrorKind::Type: return "type-error";
            case ErrorKind::UnboundVariable: return "unbound-variable";
            case ErrorKind::DivisionByZero: return "division-by-zero";
            case ErrorKind::OutOfRange: return "out-of-range";
            case ErrorKind::IntegerOverflow: return "integer-overflow";
            case ErrorKind::InfiniteQuantifierDomain: return "infinite-quantifier-domain";
            case ErrorKind::DimensionOverflow: return "dimension-overflow";
            case ErrorKind::DimensionMismatch: return "dimension-mismatch";
            case ErrorKind::UnknownSystem: return "unknown-system";
            case ErrorKind::DuplicateTarget: return "duplicate-target";
            case ErrorKind::NonHermitian: return "non-hermitian";
            case ErrorKind::Schema: return "schema-error";
            case ErrorKind::UnitarityViolation: return "unitarity-violation";
            case ErrorKind::CompletenessViolation: return "completeness-violation";
            case ErrorKind::SubnormalizationViolation: return "subnormalization-violation";
            case ErrorKind::EffectViolation: return "effect-violation";
            case ErrorKind::LayoutResolution: return "layout-resolution-failure";
            case ErrorKind::BranchExplosion: return "branch-explosion";
            case ErrorKind::DomainTooLarge: return "domain-too-large";
            case ErrorKind::MalformedWitness: return "malformed-witness";
            case ErrorKind::RuleArity: return "rule-arity-mismatch";
            case ErrorKind::Usage: return "usage-error";
            case ErrorKind::Io: return "io-error";
        }
        return "error";
    }

    static std::string decorate(ErrorKind kind, const std::string& message, int line, int column) {
        std::string out = std::string(error_kind_name(kind)) + ": " + message;
        if (line > 0)
            out += " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")";
        return out;
    }

    Error::Error(ErrorKind kind, const std::string& message, int line, int column)
        : std::runtime_error(decorate(kind, message, line, column)),
          m_kind(kind),
          m_line(line),
          m_column(column) {}

    void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace qhl
