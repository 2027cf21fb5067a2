#include "arbor/parser.hpp"

#include <cctype>
#include <utility>

#include "arbor/errors.hpp"

namespace arbor {

namespace {

struct Token {
    enum Kind { Name, Int, Star, Eq, LParen, RParen, Comma, Caret, Minus, End };
    Kind kind = End;
    std::string text;
    long value = 0;
    int line = 1;
    int column = 1;
};

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    int line = 1, column = 1;
    std::size_t i = 0;
    auto push = [&](Token::Kind k, std::string text, long value = 0) {
        out.push_back({k, std::move(text), value, line, column});
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') {
            ++line;
            column = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++column;
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) ||
                                      src[i] == '_'))
                ++i;
            push(Token::Name, src.substr(start, i - start));
            column += static_cast<int>(i - start);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            std::string text = src.substr(start, i - start);
            long value = 0;
            try {
                value = std::stol(text);
            } catch (const std::out_of_range&) {
                throw parse_error("integer literal out of range", line, column);
            }
            push(Token::Int, std::move(text), value);
            column += static_cast<int>(i - start);
            continue;
        }
        Token::Kind kind;
        switch (c) {
            case '*': kind = Token::Star; break;
            case '=': kind = Token::Eq; break;
            case '(': kind = Token::LParen; break;
            case ')': kind = Token::RParen; break;
            case ',': kind = Token::Comma; break;
            case '^': kind = Token::Caret; break;
            case '-': kind = Token::Minus; break;
            case ';': ++i; ++column; continue;  // optional separator
            default:
                throw parse_error(std::string("unexpected character '") + c + "'", line, column);
        }
        push(kind, std::string(1, c));
        ++i;
        ++column;
    }
    out.push_back({Token::End, "", 0, line, column});
    return out;
}

class Parser {
  public:
    Parser(const std::string& source, std::uint32_t arity)
        : tokens_(tokenize(source)), arity_(arity) {
        if (arity_ < 2) throw domain_error("arity must be at least 2");
    }

    std::vector<ParsedDefinition> definitions() {
        std::vector<ParsedDefinition> defs;
        while (peek().kind != Token::End) {
            const Token& name = expect(Token::Name, "a definition name");
            if (name.text == "id" || name.text == "eta" || name.text == "perm")
                fail(name, "'" + name.text + "' is reserved and cannot be defined");
            expect(Token::Eq, "'=' after the definition name");
            defs.push_back({name.text, expr(), name.line});
        }
        return defs;
    }

    ExprPtr single_expression() {
        ExprPtr e = expr();
        const Token& t = peek();
        if (t.kind != Token::End) fail(t, "end of expression");
        return e;
    }

  private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return tokens_[i < tokens_.size() ? i : tokens_.size() - 1];
    }
    const Token& advance() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const Token& at, const std::string& expected) {
        std::string got = at.kind == Token::End ? "end of input" : "'" + at.text + "'";
        throw parse_error("expected " + expected + ", got " + got, at.line, at.column);
    }

    const Token& expect(Token::Kind kind, const std::string& what) {
        const Token& t = peek();
        if (t.kind != kind) fail(t, what);
        return advance();
    }

    /// A name directly followed by '=' opens the next definition.
    bool at_next_definition() const {
        return peek().kind == Token::Name && peek(1).kind == Token::Eq;
    }

    ExprPtr expr() {
        std::vector<ExprPtr> factors;
        factors.push_back(term());
        while (peek().kind == Token::Star) {
            advance();
            factors.push_back(term());
        }
        return factors.size() == 1 ? factors.front() : ex_compose(std::move(factors));
    }

    ExprPtr term() {
        ExprPtr e = primary();
        while (peek().kind == Token::Caret) {
            advance();
            long sign = 1;
            if (peek().kind == Token::Minus) {
                advance();
                sign = -1;
            }
            const Token& t = expect(Token::Int, "an integer exponent");
            e = ex_power(e, sign * t.value);
        }
        return e;
    }

    ExprPtr primary() {
        const Token& t = peek();
        if (t.kind == Token::LParen) {
            advance();
            std::vector<ExprPtr> parts;
            parts.push_back(expr());
            while (peek().kind == Token::Comma) {
                advance();
                parts.push_back(expr());
            }
            expect(Token::RParen, "')'");
            if (parts.size() == 1) return parts.front();  // grouping
            if (parts.size() != arity_)
                fail(t, "a tuple with " + std::to_string(arity_) + " children");
            return ex_tuple(std::move(parts));
        }
        if (t.kind == Token::Name) {
            if (at_next_definition()) fail(t, "an expression");
            advance();
            if (t.text == "id") return ex_identity();
            if (t.text == "eta") return eta();
            if (t.text == "perm") return root_perm(t);
            return ex_ref(t.text);
        }
        fail(t, "'id', 'eta', 'perm', a name, or '('");
    }

    ExprPtr eta() const {
        std::vector<std::uint32_t> image(arity_);
        for (std::uint32_t x = 0; x < arity_; ++x) image[x] = x;
        image[0] = 1;
        image[1] = 0;
        return ex_root_perm(std::move(image));
    }

    /// perm(0 1 2) or perm((0 1)(2 3)); letters may be comma-separated.
    ExprPtr root_perm(const Token& at) {
        expect(Token::LParen, "'(' after perm");
        std::vector<std::uint32_t> image(arity_);
        for (std::uint32_t x = 0; x < arity_; ++x) image[x] = x;
        std::vector<bool> seen(arity_, false);

        auto cycle = [&](const std::vector<std::uint32_t>& points) {
            for (std::size_t i = 0; i < points.size(); ++i)
                image[points[i]] = points[(i + 1) % points.size()];
        };
        auto letters = [&]() {
            std::vector<std::uint32_t> points;
            while (peek().kind == Token::Int || peek().kind == Token::Comma) {
                if (peek().kind == Token::Comma) {
                    advance();
                    continue;
                }
                const Token& t = advance();
                if (t.value < 0 || t.value >= static_cast<long>(arity_))
                    throw parse_error("letter out of range for arity " + std::to_string(arity_),
                                      t.line, t.column);
                auto x = static_cast<std::uint32_t>(t.value);
                if (seen[x])
                    throw parse_error("letter repeated across cycles", t.line, t.column);
                seen[x] = true;
                points.push_back(x);
            }
            return points;
        };

        if (peek().kind == Token::LParen) {
            while (peek().kind == Token::LParen) {
                advance();
                cycle(letters());
                expect(Token::RParen, "')' closing a cycle");
            }
        } else {
            std::vector<std::uint32_t> points = letters();
            if (points.empty()) fail(peek(), "at least one letter");
            cycle(points);
        }
        expect(Token::RParen, "')' closing perm");
        (void)at;
        return ex_root_perm(std::move(image));
    }

    std::vector<Token> tokens_;
    std::uint32_t arity_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<ParsedDefinition> parse_definition_list(const std::string& source,
                                                    std::uint32_t arity) {
    return Parser(source, arity).definitions();
}

RecursionEnv parse_definitions(const std::string& source, std::uint32_t arity) {
    RecursionEnv env;
    for (const ParsedDefinition& def : parse_definition_list(source, arity)) {
        try {
            env.define(def.name, def.expr);
        } catch (const error& e) {
            throw parse_error("in definition of '" + def.name + "': " + e.what(), def.line, 1);
        }
    }
    return env;
}

ExprPtr parse_expression(const std::string& source, std::uint32_t arity) {
    return Parser(source, arity).single_expression();
}

}  // namespace arbor
