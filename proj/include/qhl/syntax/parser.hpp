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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qhl/classical/expr.hpp"
#include "qhl/syntax/program.hpp"

namespace qhl::syntax {

    // What the parser needs to know about the surrounding interpretation.
    class SymbolTable {
       public:
        virtual ~SymbolTable() = default;
        virtual bool is_gate(const std::string& name) const = 0;
        virtual bool is_measurement(const std::string& name) const = 0;
        // nullopt means variadic
        virtual std::optional<std::size_t> gate_arity(const std::string& name) const = 0;
        virtual std::optional<std::size_t> gate_param_count(const std::string& name) const = 0;
        virtual std::optional<std::size_t> measurement_arity(const std::string& name) const = 0;
        virtual std::optional<std::int64_t> enum_constant(const std::string& label) const = 0;
        virtual bool is_classical_var(const std::string& name) const = 0;
        virtual const classical::Typing* typing() const = 0;
    };

    enum class Tok {
        Ident, Int, Real, Imag, BinFracPrefix,
        LParen, RParen, LBracket, RBracket, LBrace, RBrace,
        Comma, Semi, Colon, Dot, DotDot, Assign, Bar,
        Plus, Minus, Star, Slash, Caret, Tilde, Bang,
        Eq, Ne, Lt, Le, Gt, Ge, AndAnd, OrOr, Arrow, Forall, Exists,
        End,
    };

    struct Token {
        Tok kind = Tok::End;
        std::string text;
        std::int64_t ival = 0;
        double rval = 0.0;
        int line = 1;
        int column = 1;
    };

    std::vector<Token> lex(std::string_view text);

    class Parser {
       public:
        explicit Parser(std::string_view text, const SymbolTable* symbols = nullptr);

        classical::ExprPtr expression();
        // Arithmetic level only; used where '>' closes an enclosing construct.
        classical::ExprPtr additive();
        ProgramPtr program();
        SubscriptedVar qvar();
        std::vector<SubscriptedVar> qvar_list();
        std::vector<classical::ExprPtr> arguments();
        classical::ClassicalType type_annotation();

        const Token& peek(std::size_t ahead = 0) const;
        bool at(Tok kind) const { return peek().kind == kind; }
        bool at_keyword(std::string_view word) const;
        bool accept(Tok kind);
        bool accept_keyword(std::string_view word);
        Token expect(Tok kind, const char* what);
        void expect_keyword(std::string_view word);
        void expect_end();
        std::size_t mark() const { return m_pos; }
        void reset(std::size_t pos) { m_pos = pos; }
        const SymbolTable* symbols() const { return m_symbols; }
        [[noreturn]] void error(const std::string& message) const;

       private:
        classical::ExprPtr quantifier();
        classical::ExprPtr implication();
        classical::ExprPtr disjunction();
        classical::ExprPtr conjunction();
        classical::ExprPtr negation();
        classical::ExprPtr comparison();
        classical::ExprPtr multiplicative();
        classical::ExprPtr unary_minus();
        classical::ExprPtr power();
        classical::ExprPtr primary();
        ProgramPtr command();
        bool is_measurement(const std::string& name) const;

        std::vector<Token> m_tokens;
        std::size_t m_pos = 0;
        const SymbolTable* m_symbols;
    };

    bool is_keyword(std::string_view word);

    classical::ExprPtr parse_expr(std::string_view text, const SymbolTable* symbols = nullptr);
    ProgramPtr parse_program(std::string_view text, const SymbolTable* symbols = nullptr);
    SubscriptedVar parse_qvar(std::string_view text, const SymbolTable* symbols = nullptr);

}  // namespace qhl::syntax
