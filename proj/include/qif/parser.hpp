#pragma once

#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qif/ast.hpp"
#include "qif/error.hpp"
#include "qif/rational.hpp"

// Concrete syntax for the mini imperative language:
//
//   program   := decl (';' decl)* ';' stmt
//   decl      := ('high'|'low'|'output') IDENT 'in' '{' VALUE (',' VALUE)* '}'
//   stmt      := atom (';' atom)*                    -- ';' folds to the right
//   atom      := 'skip'
//              | IDENT ':=' VALUE
//              | 'if' cond 'then' stmt 'else' stmt 'end'
//              | 'pchoice' PROB '{' stmt '}' '{' stmt '}'
//              | '{' stmt '}'                        -- grouping only
//   cond      := conj ('or' conj)*                   -- 'or' folds to the right
//   conj      := unit ('and' unit)*
//   unit      := 'not' unit | '(' cond ')' | IDENT '==' (IDENT | VALUE)
//   PROB      := decimal or rational literal, e.g. 0.99 or 99/100
//
// '#' starts a line comment. Values are symbolic tokens (letters, digits,
// '_'); the right-hand side of '==' resolves to a variable when one of that
// name is declared, and to a value literal otherwise.

namespace qif {

namespace detail {

enum class TokKind { Word, Assign, EqEq, Semi, Comma, LBrace, RBrace, LParen, RParen, Slash, Eof };

struct Token {
    TokKind kind;
    std::string text;
    int line = 1;
    int col = 1;
};

inline bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

inline std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto bump = [&](size_t n) {
        for (size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') bump(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            bump(1);
            continue;
        }
        int tl = line, tc = col;
        auto push = [&](TokKind k, std::string text, size_t len) {
            out.push_back(Token{k, std::move(text), tl, tc});
            bump(len);
        };
        if (is_word_char(c)) {
            size_t j = i;
            while (j < src.size() && is_word_char(src[j])) ++j;
            push(TokKind::Word, std::string(src.substr(i, j - i)), j - i);
            continue;
        }
        switch (c) {
            case ';': push(TokKind::Semi, ";", 1); break;
            case ',': push(TokKind::Comma, ",", 1); break;
            case '{': push(TokKind::LBrace, "{", 1); break;
            case '}': push(TokKind::RBrace, "}", 1); break;
            case '(': push(TokKind::LParen, "(", 1); break;
            case ')': push(TokKind::RParen, ")", 1); break;
            case '/': push(TokKind::Slash, "/", 1); break;
            case ':':
                if (i + 1 < src.size() && src[i + 1] == '=') {
                    push(TokKind::Assign, ":=", 2);
                } else {
                    throw ParseError("expected ':=' after ':'", line, col);
                }
                break;
            case '=':
                if (i + 1 < src.size() && src[i + 1] == '=') {
                    push(TokKind::EqEq, "==", 2);
                } else {
                    throw ParseError("expected '==' (single '=' is not an operator)", line, col);
                }
                break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
    }
    out.push_back(Token{TokKind::Eof, "<eof>", line, col});
    return out;
}

inline const std::set<std::string>& reserved_words() {
    static const std::set<std::string> words = {"high", "low",  "output", "in",  "skip", "if", "then",
                                                "else", "end",  "pchoice", "and", "or",   "not"};
    return words;
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    Program parse() {
        Program p;
        while (at_word("high") || at_word("low") || at_word("output")) {
            p.decls.push_back(parse_decl(p));
            expect(TokKind::Semi, "';' after declaration");
        }
        if (p.decls.empty()) fail("program must start with at least one variable declaration");
        program_ = &p;
        p.body = parse_stmt();
        if (peek().kind != TokKind::Eof) fail("unexpected trailing input '" + peek().text + "'");
        return p;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_++]; }
    bool at_word(std::string_view w) const { return peek().kind == TokKind::Word && peek().text == w; }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().col); }
    [[noreturn]] void fail_at(const Token& t, const std::string& msg) const { throw ParseError(msg, t.line, t.col); }

    Token expect(TokKind k, const std::string& what) {
        if (peek().kind != k) fail("expected " + what + ", found '" + peek().text + "'");
        return next();
    }

    Token expect_keyword(std::string_view kw) {
        if (!at_word(kw)) fail("expected '" + std::string(kw) + "', found '" + peek().text + "'");
        return next();
    }

    static bool valid_identifier(const std::string& s) {
        if (s.empty()) return false;
        if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
        for (char c : s)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
        return true;
    }

    VarDecl parse_decl(const Program& sofar) {
        Token cls = next();
        VarDecl d;
        d.cls = cls.text == "high" ? VarClass::High : cls.text == "low" ? VarClass::Low : VarClass::Output;
        Token name = expect(TokKind::Word, "variable name");
        if (reserved_words().count(name.text)) fail_at(name, "reserved word '" + name.text + "' cannot name a variable");
        if (!valid_identifier(name.text)) fail_at(name, "invalid variable name '" + name.text + "'");
        if (sofar.find_decl(name.text)) fail_at(name, "duplicate declaration of '" + name.text + "'");
        d.name = name.text;
        expect_keyword("in");
        expect(TokKind::LBrace, "'{'");
        while (true) {
            Token v = expect(TokKind::Word, "domain value");
            check_value_token(v);
            if (d.has_value(v.text)) fail_at(v, "duplicate domain value '" + v.text + "' for '" + d.name + "'");
            d.domain.push_back(v.text);
            if (peek().kind == TokKind::Comma) {
                next();
                continue;
            }
            break;
        }
        expect(TokKind::RBrace, "'}'");
        return d;
    }

    void check_value_token(const Token& v) const {
        if (reserved_words().count(v.text)) fail_at(v, "reserved word '" + v.text + "' cannot be a value");
        if (v.text.find('.') != std::string::npos) fail_at(v, "invalid value '" + v.text + "'");
    }

    const VarDecl& lookup_var(const Token& name) const {
        const VarDecl* d = program_->find_decl(name.text);
        if (!d) fail_at(name, "undeclared variable '" + name.text + "'");
        return *d;
    }

    StmtPtr parse_stmt() {
        std::vector<StmtPtr> parts;
        parts.push_back(parse_stmt_atom());
        while (peek().kind == TokKind::Semi) {
            next();
            parts.push_back(parse_stmt_atom());
        }
        StmtPtr s = parts.back();
        for (size_t i = parts.size() - 1; i-- > 0;) s = make_seq(parts[i], s);
        return s;
    }

    StmtPtr parse_stmt_atom() {
        if (at_word("skip")) {
            next();
            return make_skip();
        }
        if (at_word("if")) {
            next();
            CondPtr c = parse_cond();
            expect_keyword("then");
            StmtPtr t = parse_stmt();
            expect_keyword("else");
            StmtPtr e = parse_stmt();
            expect_keyword("end");
            return make_if(c, t, e);
        }
        if (at_word("pchoice")) {
            next();
            Rat p = parse_prob();
            expect(TokKind::LBrace, "'{'");
            StmtPtr l = parse_stmt();
            expect(TokKind::RBrace, "'}'");
            expect(TokKind::LBrace, "'{'");
            StmtPtr r = parse_stmt();
            expect(TokKind::RBrace, "'}'");
            return make_pchoice(p, l, r);
        }
        if (peek().kind == TokKind::LBrace) {
            next();
            StmtPtr s = parse_stmt();
            expect(TokKind::RBrace, "'}'");
            return s;
        }
        if (peek().kind == TokKind::Word) {
            Token name = next();
            if (reserved_words().count(name.text)) fail_at(name, "unexpected '" + name.text + "'");
            const VarDecl& d = lookup_var(name);
            expect(TokKind::Assign, "':='");
            Token v = expect(TokKind::Word, "value");
            check_value_token(v);
            if (!d.has_value(v.text))
                fail_at(v, "value '" + v.text + "' is not in the domain of '" + d.name + "'");
            return make_assign(name.text, v.text);
        }
        fail("expected a statement, found '" + peek().text + "'");
    }

    Rat parse_prob() {
        Token t = expect(TokKind::Word, "probability literal");
        std::string text = t.text;
        if (peek().kind == TokKind::Slash) {
            next();
            Token den = expect(TokKind::Word, "denominator");
            text += "/" + den.text;
        }
        Rat p;
        try {
            p = parse_rat(text);
        } catch (const ValidationError& e) {
            fail_at(t, e.what());
        }
        if (p <= 0 || p >= 1) fail_at(t, "pchoice probability must be strictly between 0 and 1");
        return p;
    }

    CondPtr parse_cond() {
        std::vector<CondPtr> parts;
        parts.push_back(parse_conj());
        while (at_word("or")) {
            next();
            parts.push_back(parse_conj());
        }
        CondPtr c = parts.back();
        for (size_t i = parts.size() - 1; i-- > 0;) c = cond_or(parts[i], c);
        return c;
    }

    CondPtr parse_conj() {
        std::vector<CondPtr> parts;
        parts.push_back(parse_cond_unit());
        while (at_word("and")) {
            next();
            parts.push_back(parse_cond_unit());
        }
        CondPtr c = parts.back();
        for (size_t i = parts.size() - 1; i-- > 0;) c = cond_and(parts[i], c);
        return c;
    }

    CondPtr parse_cond_unit() {
        if (at_word("not")) {
            next();
            return cond_not(parse_cond_unit());
        }
        if (peek().kind == TokKind::LParen) {
            next();
            CondPtr c = parse_cond();
            expect(TokKind::RParen, "')'");
            return c;
        }
        Token lhs = expect(TokKind::Word, "variable name");
        if (reserved_words().count(lhs.text)) fail_at(lhs, "unexpected '" + lhs.text + "'");
        const VarDecl& l = lookup_var(lhs);
        expect(TokKind::EqEq, "'=='");
        Token rhs = expect(TokKind::Word, "variable or value");
        check_value_token(rhs);
        if (program_->find_decl(rhs.text)) return eq_var(lhs.text, rhs.text);
        if (!l.has_value(rhs.text))
            fail_at(rhs, "value '" + rhs.text + "' is not in the domain of '" + l.name + "'");
        return eq_value(lhs.text, rhs.text);
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
    const Program* program_ = nullptr;
};

}  // namespace detail

/// Parses and validates a program. Throws ParseError with a 1-based source
/// position on any syntax or validation failure.
inline Program parse_program(std::string_view source) { return detail::Parser(source).parse(); }

}  // namespace qif
