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

#include <stdexcept>
#include <string>

namespace qhl {

    enum class ErrorKind {
        Syntax,
        UnknownSymbol,
        ArityMismatch,
        Type,
        UnboundVariable,
        DivisionByZero,
        OutOfRange,
        IntegerOverflow,
        InfiniteQuantifierDomain,
        DimensionOverflow,
        DimensionMismatch,
        UnknownSystem,
        DuplicateTarget,
        NonHermitian,
        Schema,
        UnitarityViolation,
        CompletenessViolation,
        SubnormalizationViolation,
        EffectViolation,
        LayoutResolution,
        BranchExplosion,
        DomainTooLarge,
        MalformedWitness,
        RuleArity,
        Usage,
        Io,
    };

    const char* error_kind_name(ErrorKind kind);

    class Error : public std::runtime_error {
       public:
        Error(ErrorKind kind, const std::string& message, int line = 0, int column = 0);

        ErrorKind kind() const { return m_kind; }
        int line() const { return m_line; }
        int column() const { return m_column; }

       private:
        ErrorKind m_kind;
        int m_line;
        int m_column;
    };

    [[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace qhl
