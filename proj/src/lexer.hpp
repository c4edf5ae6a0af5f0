#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "cak/error.hpp"

namespace cak::detail {

struct Token {
    enum Kind { Ident, Number, Sym, End } kind;
    std::string text;
    int line;
    int col;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) {
        int line = 1, col = 1;
        std::size_t i = 0;
        auto advance = [&](std::size_t k) {
            for (std::size_t j = 0; j < k; ++j) {
                if (text[i] == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
                ++i;
            }
        };
        while (i < text.size()) {
            char c = text[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
                continue;
            }
            if (c == '#') {
                while (i < text.size() && text[i] != '\n') advance(1);
                continue;
            }
            int l = line, cl = col;
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t j = i;
                while (j < text.size() &&
                       (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '\''))
                    ++j;
                tokens_.push_back({Token::Ident, text.substr(i, j - i), l, cl});
                advance(j - i);
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t j = i;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                tokens_.push_back({Token::Number, text.substr(i, j - i), l, cl});
                advance(j - i);
            } else if (std::string("(),.;").find(c) != std::string::npos) {
                tokens_.push_back({Token::Sym, std::string(1, c), l, cl});
                advance(1);
            } else {
                throw SyntaxError(std::string("unexpected character '") + c + "'", l, cl);
            }
        }
        tokens_.push_back({Token::End, "", line, col});
    }

    const Token& peek(std::size_t k = 0) const {
        return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
    }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    bool at(const std::string& text) const {
        return peek().kind != Token::End && peek().kind != Token::Number && peek().text == text;
    }
    bool accept(const std::string& text) {
        if (!at(text)) return false;
        next();
        return true;
    }
    void expect(const std::string& text) {
        if (!accept(text)) fail("expected '" + text + "'");
    }
    std::string ident(const std::vector<std::string>& reserved) {
        const Token& t = peek();
        if (t.kind != Token::Ident) fail("expected identifier");
        for (auto& r : reserved)
            if (t.text == r) fail("keyword '" + r + "' used as identifier");
        return next().text;
    }
    bool done() const { return peek().kind == Token::End; }
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        throw SyntaxError(msg + (t.kind == Token::End ? " at end of input" : " near '" + t.text + "'"), t.line, t.col);
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace cak::detail
