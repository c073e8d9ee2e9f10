#include <cctype>
#include <cstdlib>

#include "cobbie/bql/parse.hpp"

namespace cobbie::bql {

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1;
    auto peek = [&](std::size_t off = 0) { return i + off < src.size() ? src[i + off] : '\0'; };

    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '/' && peek(1) == '/') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
                ++i;
            out.push_back({Token::Kind::Ident, std::string(src.substr(start, i - start)), 0, 0,
                           line});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            bool real = false;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
                real = true;
                ++i;
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            }
            if (peek() == 'e' || peek() == 'E') {
                real = true;
                ++i;
                if (peek() == '+' || peek() == '-') ++i;
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            }
            std::string num(src.substr(start, i - start));
            Token t;
            t.line = line;
            if (real) {
                t.kind = Token::Kind::Real;
                t.real_val = std::strtod(num.c_str(), nullptr);
            } else {
                t.kind = Token::Kind::Int;
                t.int_val = std::strtoll(num.c_str(), nullptr, 10);
            }
            out.push_back(std::move(t));
            continue;
        }
        if (c == '"' || c == '\'') {
            char quote = c;
            ++i;
            std::string text;
            while (i < src.size() && src[i] != quote) {
                if (src[i] == '\\' && i + 1 < src.size()) {
                    char esc = src[i + 1];
                    switch (esc) {
                        case 'n': text.push_back('\n'); break;
                        case 't': text.push_back('\t'); break;
                        case '\\': text.push_back('\\'); break;
                        case '"': text.push_back('"'); break;
                        case '\'': text.push_back('\''); break;
                        default: text.push_back(esc); break;
                    }
                    i += 2;
                    continue;
                }
                if (src[i] == '\n') ++line;
                text.push_back(src[i++]);
            }
            if (i >= src.size()) throw SyntaxError{line, "unterminated string literal"};
            ++i;
            out.push_back({Token::Kind::Str, std::move(text), 0, 0, line});
            continue;
        }
        // two-char operators first
        static const char* two[] = {"==", "!=", "<=", ">=", "&&", "||"};
        bool matched = false;
        for (const char* op : two) {
            if (c == op[0] && peek(1) == op[1]) {
                out.push_back({Token::Kind::Punct, op, 0, 0, line});
                i += 2;
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string_view("+-*/%<>=!(){}[],;").find(c) != std::string_view::npos) {
            out.push_back({Token::Kind::Punct, std::string(1, c), 0, 0, line});
            ++i;
            continue;
        }
        throw SyntaxError{line, std::string("unexpected character '") + c + "'"};
    }
    out.push_back({Token::Kind::End, "", 0, 0, line});
    return out;
}

}  // namespace cobbie::bql
