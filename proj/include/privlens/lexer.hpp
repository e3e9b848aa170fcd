#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "privlens/unit.hpp"

namespace privlens {

enum class TokKind { identifier, number, string, template_string, regex, punct };

struct Token {
    TokKind kind = TokKind::punct;
    std::string text;  // identifiers/punct verbatim; strings without their quotes
    int line = 0;
    int end_line = 0;
    std::size_t offset = 0;
    std::size_t end_offset = 0;
    bool newline_before = false;
    std::vector<std::vector<Token>> parts;  // `${...}` interpolations of a template string

    bool is(std::string_view punct) const { return kind == TokKind::punct && text == punct; }
    bool is_ident(std::string_view word) const { return kind == TokKind::identifier && text == word; }
};

struct LexResult {
    std::vector<Token> tokens;
    std::vector<Literal> literals;     // strings, template fragments, comments
    std::vector<std::string> errors;   // non-empty means the token stream is best-effort
};

/// Lexes JavaScript, TypeScript or Java source. Never throws; malformed input
/// produces errors and a best-effort token stream.
LexResult lex(std::string_view source, Language lang);

}  // namespace privlens
