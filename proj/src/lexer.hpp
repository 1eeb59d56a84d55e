#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "tcw/error.hpp"

namespace tcw::detail {

struct Token {
    enum Kind { Ident, Symbol, End } kind = End;
    std::string text;
    SourcePos pos;
};

// Identifiers are [A-Za-z0-9_]+; everything else non-blank is a one-char symbol.
// "//" starts a comment running to end of line.
class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }
    Token next()
    {
        Token t = cur_;
        advance();
        return t;
    }
    bool at_symbol(char c) const { return cur_.kind == Token::Symbol && cur_.text[0] == c; }
    bool at_ident(std::string_view s) const { return cur_.kind == Token::Ident && cur_.text == s; }
    bool at_end() const { return cur_.kind == Token::End; }
    // True if the current token is immediately followed by c, with no blank between.
    bool glued(char c) const
    {
        std::size_t after = cur_.pos.offset + cur_.text.size();
        return after < src_.size() && src_[after] == c;
    }

    [[noreturn]] void fail(const std::string& msg) const { fail_at(cur_.pos, msg); }
    [[noreturn]] static void fail_at(SourcePos pos, const std::string& msg)
    {
        throw Error(ErrorKind::SyntaxError, msg, pos);
    }

    void expect_symbol(char c)
    {
        if (!at_symbol(c)) fail(std::string("expected '") + c + "' but found " + describe());
        advance();
    }
    std::string expect_ident(const char* what)
    {
        if (cur_.kind != Token::Ident) fail(std::string("expected ") + what + " but found " + describe());
        return next().text;
    }
    std::string describe() const
    {
        if (cur_.kind == Token::End) return "end of input";
        return "'" + cur_.text + "'";
    }

  private:
    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    void skip()
    {
        while (i_ < src_.size()) {
            char c = src_[i_];
            if (c == '\n') { ++line_; col_ = 1; ++i_; }
            else if (std::isspace(static_cast<unsigned char>(c))) { ++col_; ++i_; }
            else if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
                while (i_ < src_.size() && src_[i_] != '\n') { ++i_; ++col_; }
            } else break;
        }
    }

    void advance()
    {
        skip();
        cur_ = Token{};
        cur_.pos = SourcePos{i_, line_, col_};
        if (i_ >= src_.size()) { cur_.kind = Token::End; return; }
        std::size_t start = i_;
        if (ident_char(src_[i_])) {
            while (i_ < src_.size() && ident_char(src_[i_])) ++i_;
            cur_.kind = Token::Ident;
        } else {
            ++i_;
            cur_.kind = Token::Symbol;
        }
        cur_.text = std::string(src_.substr(start, i_ - start));
        col_ += i_ - start;
    }

    std::string_view src_;
    std::size_t i_ = 0, line_ = 1, col_ = 1;
    Token cur_;
};

} // namespace tcw::detail
