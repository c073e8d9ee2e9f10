#pragma once
// BQL lexer and recursive-descent parser.

#include <optional>
#include <string>
#include <vector>

#include "cobbie/bql/ast.hpp"

namespace cobbie::bql {

struct Token {
    enum class Kind {
        Ident,
        Int,
        Real,
        Str,
        Punct,  // operators and delimiters, text in `text`
        End
    };
    Kind kind = Kind::End;
    std::string text;
    std::int64_t int_val = 0;
    double real_val = 0;
    int line = 1;
};

struct SyntaxError {
    int line = 0;
    std::string message;
};

// Throws SyntaxError.
std::vector<Token> lex(std::string_view source);
Block parse_program(std::string_view source);

// `fn name(params) { ... }` and nothing else; used by install_tool.
std::shared_ptr<FunctionDecl> parse_function(std::string_view source);

}  // namespace cobbie::bql
