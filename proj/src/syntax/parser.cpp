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

#include "qhl/syntax/parser.hpp"

#include <cctype>
#include <set>

#include "qhl/error.hpp"

namespace qhl::syntax {

    using namespace qhl::classical;

    bool is_keyword(std::string_view word) {
        static const std::set<std::string, std::less<>> words = {
            "skip", "if",  "then", "else", "fi",     "while",  "do",   "od",  "true",
            "false", "not", "and", "or",  "div",    "mod",    "forall", "exists", "apply"};
        return words.count(word) > 0;
    }

    namespace {

        struct Utf8Op {
            const char* bytes;
            Tok kind;
        };

        const Utf8Op kUtf8Ops[] = {
            {"\xE2\x88\xA7", Tok::AndAnd}, {"\xE2\x88\xA8", Tok::OrOr}, {"\xC2\xAC", Tok::Bang},
            {"\xE2\x86\x92", Tok::Arrow},  {"\xE2\x89\xA4", Tok::Le},   {"\xE2\x89\xA5", Tok::Ge},
            {"\xE2\x89\xA0", Tok::Ne},     {"\xE2\x88\x80", Tok::Forall}, {"\xE2\x88\x83", Tok::Exists},
            {"\xE2\x8A\x97", Tok::Star},   {"\xC3\x97", Tok::Star},
        };

        bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
        bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    }  // namespace

    std::vector<Token> lex(std::string_view s) {
        std::vector<Token> out;
        std::size_t i = 0;
        int line = 1, col = 1;
        auto bump = [&](std::size_t n) {
            for (std::size_t k = 0; k < n; ++k) {
                if (s[i] == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
                ++i;
            }
        };
        auto push = [&](Tok kind, std::size_t len) {
            Token t;
            t.kind = kind;
            t.text = std::string(s.substr(i, len));
            t.line = line;
            t.column = col;
            out.push_back(std::move(t));
            bump(len);
        };
        while (i < s.size()) {
            char c = s[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                bump(1);
                continue;
            }
            if (c == '#') {
                while (i < s.size() && s[i] != '\n') bump(1);
                continue;
            }
            bool matched = false;
            for (const auto& op : kUtf8Ops) {
                std::string_view b(op.bytes);
                if (s.substr(i, b.size()) == b) {
                    push(op.kind, b.size());
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            if (s.substr(i, 2) == "\xCF\x80") {
                Token t;
                t.kind = Tok::Ident;
                t.text = "pi";
                t.line = line;
                t.column = col;
                out.push_back(t);
                bump(2);
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t j = i;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                if (j - i == 1 && s[i] == '0' && j + 1 < s.size() && s[j] == '.' && ident_start(s[j + 1])) {
                    push(Tok::BinFracPrefix, 2);
                    continue;
                }
                bool real = false;
                if (j + 1 < s.size() && s[j] == '.' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
                    real = true;
                    ++j;
                    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                }
                if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
                    std::size_t k = j + 1;
                    if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
                    if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
                        real = true;
                        j = k;
                        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                    }
                }
                bool imag = j < s.size() && s[j] == 'i' && (j + 1 >= s.size() || !ident_char(s[j + 1]));
                std::string text(s.substr(i, j - i));
                Token t;
                t.line = line;
                t.column = col;
                t.text = text;
                try {
                    if (imag) {
                        t.kind = Tok::Imag;
                        t.rval = std::stod(text);
                    } else if (real) {
                        t.kind = Tok::Real;
                        t.rval = std::stod(text);
                    } else {
                        t.kind = Tok::Int;
                        t.ival = std::stoll(text);
                    }
                } catch (const std::out_of_range&) {
                    throw Error(ErrorKind::IntegerOverflow, "numeric literal " + text + " out of range", line, col);
                }
                out.push_back(t);
                bump(j - i + (imag ? 1 : 0));
                continue;
            }
            if (ident_start(c)) {
                std::size_t j = i;
                while (j < s.size() && (ident_char(s[j]) || (s[j] == '.' && j + 1 < s.size() && ident_start(s[j + 1]) &&
                                                              j > i && ident_char(s[j - 1]))))
                    ++j;
                Token t;
                t.kind = Tok::Ident;
                t.text = std::string(s.substr(i, j - i));
                t.line = line;
                t.column = col;
                if (t.text == "forall") t.kind = Tok::Forall;
                if (t.text == "exists") t.kind = Tok::Exists;
                out.push_back(t);
                bump(j - i);
                continue;
            }
            std::string_view two = s.substr(i, 2);
            if (two == ":=") { push(Tok::Assign, 2); continue; }
            if (two == "..") { push(Tok::DotDot, 2); continue; }
            if (two == "<=") { push(Tok::Le, 2); continue; }
            if (two == ">=") { push(Tok::Ge, 2); continue; }
            if (two == "!=") { push(Tok::Ne, 2); continue; }
            if (two == "&&") { push(Tok::AndAnd, 2); continue; }
            if (two == "||") { push(Tok::OrOr, 2); continue; }
            if (two == "->") { push(Tok::Arrow, 2); continue; }
            if (two == "==") { push(Tok::Eq, 2); continue; }
            switch (c) {
                case '(': push(Tok::LParen, 1); continue;
                case ')': push(Tok::RParen, 1); continue;
                case '[': push(Tok::LBracket, 1); continue;
                case ']': push(Tok::RBracket, 1); continue;
                case '{': push(Tok::LBrace, 1); continue;
                case '}': push(Tok::RBrace, 1); continue;
                case ',': push(Tok::Comma, 1); continue;
                case ';': push(Tok::Semi, 1); continue;
                case ':': push(Tok::Colon, 1); continue;
                case '.': push(Tok::Dot, 1); continue;
                case '|': push(Tok::Bar, 1); continue;
                case '+': push(Tok::Plus, 1); continue;
                case '-': push(Tok::Minus, 1); continue;
                case '*': push(Tok::Star, 1); continue;
                case '/': push(Tok::Slash, 1); continue;
                case '^': push(Tok::Caret, 1); continue;
                case '~': push(Tok::Tilde, 1); continue;
                case '!': push(Tok::Bang, 1); continue;
                case '=': push(Tok::Eq, 1); continue;
                case '<': push(Tok::Lt, 1); continue;
                case '>': push(Tok::Gt, 1); continue;
                default: break;
            }
            throw Error(ErrorKind::Syntax, std::string("unexpected character '") + c + "'", line, col);
        }
        Token end;
        end.kind = Tok::End;
        end.line = line;
        end.column = col;
        out.push_back(end);
        return out;
    }

    Parser::Parser(std::string_view text, const SymbolTable* symbols) : m_tokens(lex(text)), m_symbols(symbols) {}

    const Token& Parser::peek(std::size_t ahead) const {
        std::size_t p = std::min(m_pos + ahead, m_tokens.size() - 1);
        return m_tokens[p];
    }

    bool Parser::at_keyword(std::string_view word) const { return at(Tok::Ident) && peek().text == word; }

    bool Parser::accept(Tok kind) {
        if (!at(kind)) return false;
        ++m_pos;
        return true;
    }

    bool Parser::accept_keyword(std::string_view word) {
        if (!at_keyword(word)) return false;
        ++m_pos;
        return true;
    }

    void Parser::error(const std::string& message) const {
        const Token& t = peek();
        std::string near = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw Error(ErrorKind::Syntax, message + " near " + near, t.line, t.column);
    }

    Token Parser::expect(Tok kind, const char* what) {
        if (!at(kind)) error(std::string("expected ") + what);
        return m_tokens[m_pos++];
    }

    void Parser::expect_keyword(std::string_view word) {
        if (!accept_keyword(word)) error("expected '" + std::string(word) + "'");
    }

    void Parser::expect_end() {
        if (!at(Tok::End)) error("unexpected trailing input");
    }

    ExprPtr Parser::expression() {
        if (at(Tok::Forall) || at(Tok::Exists)) return quantifier();
        return implication();
    }

    ClassicalType Parser::type_annotation() {
        Token t = expect(Tok::Ident, "type name");
        if (t.text == "Bool") return ClassicalType::boolean();
        if (t.text == "Real") return ClassicalType::real();
        if (t.text == "Complex") return ClassicalType::complex();
        if (t.text == "Int" || t.text == "Bits") {
            expect(Tok::LParen, "'('");
            auto bound = [&]() {
                bool neg = accept(Tok::Minus);
                Token n = expect(Tok::Int, "integer bound");
                return neg ? -n.ival : n.ival;
            };
            std::int64_t lo = bound();
            expect(Tok::DotDot, "'..'");
            std::int64_t hi = bound();
            expect(Tok::RParen, "')'");
            if (lo > hi) error("empty range");
            return t.text == "Int" ? ClassicalType::integer(lo, hi) : ClassicalType::bits(lo, hi);
        }
        if (m_symbols && m_symbols->typing())
            if (auto e = m_symbols->typing()->enum_type(t.text)) return *e;
        --m_pos;
        error("unknown type");
    }

    ExprPtr Parser::quantifier() {
        Quantifier q = at(Tok::Forall) ? Quantifier::Forall : Quantifier::Exists;
        ++m_pos;
        Token v = expect(Tok::Ident, "bound variable");
        if (is_keyword(v.text)) error("keyword used as variable");
        expect(Tok::Colon, "':'");
        ClassicalType t = type_annotation();
        expect(Tok::Dot, "'.'");
        return quantified(q, v.text, t, expression());
    }

    ExprPtr Parser::implication() {
        ExprPtr a = disjunction();
        if (accept(Tok::Arrow)) {
            ExprPtr b = (at(Tok::Forall) || at(Tok::Exists)) ? quantifier() : implication();
            return binary(BinaryOp::Implies, a, b);
        }
        return a;
    }

    ExprPtr Parser::disjunction() {
        ExprPtr a = conjunction();
        while (accept(Tok::OrOr) || accept_keyword("or")) a = disj(a, conjunction());
        return a;
    }

    ExprPtr Parser::conjunction() {
        ExprPtr a = negation();
        while (accept(Tok::AndAnd) || accept_keyword("and")) a = conj(a, negation());
        return a;
    }

    ExprPtr Parser::negation() {
        if (accept(Tok::Bang) || accept_keyword("not")) return negate(negation());
        if (at(Tok::Forall) || at(Tok::Exists)) return quantifier();
        return comparison();
    }

    ExprPtr Parser::comparison() {
        ExprPtr a = additive();
        BinaryOp op;
        switch (peek().kind) {
            case Tok::Eq: op = BinaryOp::Eq; break;
            case Tok::Ne: op = BinaryOp::Ne; break;
            case Tok::Lt: op = BinaryOp::Lt; break;
            case Tok::Le: op = BinaryOp::Le; break;
            case Tok::Gt: op = BinaryOp::Gt; break;
            case Tok::Ge: op = BinaryOp::Ge; break;
            default: return a;
        }
        ++m_pos;
        return binary(op, a, additive());
    }

    ExprPtr Parser::additive() {
        ExprPtr a = multiplicative();
        for (;;) {
            if (accept(Tok::Plus))
                a = binary(BinaryOp::Add, a, multiplicative());
            else if (accept(Tok::Minus))
                a = binary(BinaryOp::Sub, a, multiplicative());
            else
                return a;
        }
    }

    ExprPtr Parser::multiplicative() {
        ExprPtr a = unary_minus();
        for (;;) {
            if (accept(Tok::Star))
                a = binary(BinaryOp::Mul, a, unary_minus());
            else if (accept(Tok::Slash))
                a = binary(BinaryOp::Div, a, unary_minus());
            else if (accept_keyword("div"))
                a = binary(BinaryOp::IntDiv, a, unary_minus());
            else if (accept_keyword("mod"))
                a = binary(BinaryOp::Mod, a, unary_minus());
            else
                return a;
        }
    }

    ExprPtr Parser::unary_minus() {
        if (accept(Tok::Minus)) {
            const Token& t = peek();
            if (t.kind == Tok::Int || t.kind == Tok::Real || t.kind == Tok::Imag) {
                ++m_pos;
                ExprPtr base;
                if (t.kind == Tok::Int)
                    base = lit(-t.ival);
                else if (t.kind == Tok::Real)
                    base = lit(-t.rval);
                else
                    base = lit(std::complex<double>(0.0, -t.rval));
                if (accept(Tok::Caret)) return binary(BinaryOp::Pow, base, unary_minus());
                return base;
            }
            return unary(UnaryOp::Neg, unary_minus());
        }
        return power();
    }

    ExprPtr Parser::power() {
        ExprPtr base = primary();
        if (accept(Tok::Caret)) return binary(BinaryOp::Pow, base, unary_minus());
        return base;
    }

    std::vector<ExprPtr> Parser::arguments() {
        std::vector<ExprPtr> args;
        expect(Tok::LParen, "'('");
        if (accept(Tok::RParen)) return args;
        do {
            args.push_back(expression());
        } while (accept(Tok::Comma));
        expect(Tok::RParen, "')'");
        return args;
    }

    ExprPtr Parser::primary() {
        const Token t = peek();
        switch (t.kind) {
            case Tok::Int: ++m_pos; return lit(t.ival);
            case Tok::Real: ++m_pos; return lit(t.rval);
            case Tok::Imag: ++m_pos; return lit(std::complex<double>(0.0, t.rval));
            case Tok::LParen: {
                ++m_pos;
                ExprPtr e = expression();
                expect(Tok::RParen, "')'");
                return e;
            }
            case Tok::BinFracPrefix: {
                ++m_pos;
                Token a = expect(Tok::Ident, "bit array name");
                expect(Tok::LBracket, "'['");
                ExprPtr k = expression();
                expect(Tok::Colon, "':'");
                ExprPtr l = expression();
                expect(Tok::RBracket, "']'");
                return binfrac(a.text, k, l);
            }
            case Tok::Ident: {
                if (t.text == "true") { ++m_pos; return truth(); }
                if (t.text == "false") { ++m_pos; return falsity(); }
                if (is_keyword(t.text)) error("unexpected keyword");
                ++m_pos;
                if (t.text == "pi" && !at(Tok::LParen)) return call("pi", {});
                if (at(Tok::LParen)) {
                    if (!is_builtin_function(t.text)) {
                        --m_pos;
                        throw Error(ErrorKind::UnknownSymbol, "unknown function " + t.text, t.line, t.column);
                    }
                    return call(t.text, arguments());
                }
                if (accept(Tok::LBracket)) {
                    ExprPtr k = expression();
                    expect(Tok::RBracket, "']'");
                    return index(t.text, k);
                }
                if (m_symbols && !m_symbols->is_classical_var(t.text))
                    if (auto c = m_symbols->enum_constant(t.text)) return lit(*c);
                return var(t.text);
            }
            default: break;
        }
        error("expected expression");
    }

    SubscriptedVar Parser::qvar() {
        Token t = expect(Tok::Ident, "quantum variable");
        if (is_keyword(t.text)) error("keyword used as quantum variable");
        SubscriptedVar q{t.text, {}};
        if (accept(Tok::LBracket)) {
            do {
                q.subscripts.push_back(expression());
            } while (accept(Tok::Comma));
            expect(Tok::RBracket, "']'");
        }
        return q;
    }

    std::vector<SubscriptedVar> Parser::qvar_list() {
        std::vector<SubscriptedVar> out;
        expect(Tok::LBracket, "'['");
        if (accept(Tok::RBracket)) return out;
        do {
            out.push_back(qvar());
        } while (accept(Tok::Comma));
        expect(Tok::RBracket, "']'");
        return out;
    }

    bool Parser::is_measurement(const std::string& name) const {
        if (m_symbols) return m_symbols->is_measurement(name);
        return name == "M";
    }

    ProgramPtr Parser::program() {
        ProgramPtr first = command();
        if (accept(Tok::Semi)) {
            if (at(Tok::End) || at(Tok::RParen) || at_keyword("else") || at_keyword("fi") || at_keyword("od"))
                return first;
            return seq(first, program());
        }
        return first;
    }

    ProgramPtr Parser::command() {
        const Token t = peek();
        if (accept(Tok::LParen)) {
            ProgramPtr p = program();
            expect(Tok::RParen, "')'");
            return p;
        }
        if (t.kind != Tok::Ident) error("expected command");
        if (accept_keyword("skip")) return skip();
        if (accept_keyword("if")) {
            ExprPtr b = expression();
            expect_keyword("then");
            ProgramPtr p1 = program();
            expect_keyword("else");
            ProgramPtr p0 = program();
            accept_keyword("fi");
            return cond(b, p1, p0);
        }
        if (accept_keyword("while")) {
            ExprPtr b = expression();
            expect_keyword("do");
            ProgramPtr body = program();
            accept_keyword("od");
            return loop(b, body);
        }
        if (is_keyword(t.text)) error("unexpected keyword");

        if (peek(1).kind == Tok::Assign) {
            m_pos += 2;
            if (accept(Tok::Bar)) {
                Token z = expect(Tok::Int, "'0'");
                if (z.ival != 0) error("initialisation must be to |0>");
                expect(Tok::Gt, "'>'");
                return init(SubscriptedVar{t.text, {}});
            }
            if (at(Tok::Ident) && peek(1).kind == Tok::LBracket && is_measurement(peek().text)) {
                std::string m = peek().text;
                ++m_pos;
                auto targets = qvar_list();
                if (m_symbols)
                    if (auto a = m_symbols->measurement_arity(m); a && *a != targets.size())
                        throw Error(ErrorKind::ArityMismatch,
                                    "measurement " + m + " expects " + std::to_string(*a) + " target(s)", t.line,
                                    t.column);
                return measure(t.text, m, std::move(targets));
            }
            return assign(t.text, expression());
        }

        if (peek(1).kind == Tok::LBracket || peek(1).kind == Tok::LParen) {
            // q[..] := |0> or a gate application
            std::size_t save = m_pos;
            if (peek(1).kind == Tok::LBracket && !(m_symbols && m_symbols->is_gate(t.text))) {
                SubscriptedVar q = qvar();
                if (accept(Tok::Assign)) {
                    expect(Tok::Bar, "'|'");
                    Token z = expect(Tok::Int, "'0'");
                    if (z.ival != 0) error("initialisation must be to |0>");
                    expect(Tok::Gt, "'>'");
                    return init(std::move(q));
                }
                m_pos = save;
            }
            ++m_pos;
            std::vector<ExprPtr> params;
            if (at(Tok::LParen)) params = arguments();
            auto targets = qvar_list();
            if (m_symbols) {
                if (!m_symbols->is_gate(t.text))
                    throw Error(ErrorKind::UnknownSymbol, "unknown gate " + t.text, t.line, t.column);
                if (auto a = m_symbols->gate_arity(t.text); a && *a != targets.size())
                    throw Error(ErrorKind::ArityMismatch,
                                "gate " + t.text + " expects " + std::to_string(*a) + " target(s)", t.line, t.column);
                if (auto n = m_symbols->gate_param_count(t.text); n && *n != params.size())
                    throw Error(ErrorKind::ArityMismatch,
                                "gate " + t.text + " expects " + std::to_string(*n) + " parameter(s)", t.line,
                                t.column);
            }
            if (targets.empty()) error("gate needs at least one target");
            return gate(t.text, std::move(params), std::move(targets));
        }
        error("expected command");
    }

    ExprPtr parse_expr(std::string_view text, const SymbolTable* symbols) {
        Parser p(text, symbols);
        ExprPtr e = p.expression();
        p.expect_end();
        return e;
    }

    ProgramPtr parse_program(std::string_view text, const SymbolTable* symbols) {
        Parser p(text, symbols);
        ProgramPtr prog = p.program();
        p.expect_end();
        return prog;
    }

    SubscriptedVar parse_qvar(std::string_view text, const SymbolTable* symbols) {
        Parser p(text, symbols);
        SubscriptedVar q = p.qvar();
        p.expect_end();
        return q;
    }

}  // namespace qhl::syntax
