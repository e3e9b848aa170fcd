#include "privlens/lexer.hpp"

#include <array>
#include <cctype>

namespace privlens {

namespace {

constexpr std::array<std::string_view, 47> kPuncts = {
    ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=", "?\?=", "=>",
    "==",   "!=",  "<=",  ">=",  "&&",  "||",  "??",  "?.",  "++",  "--",  "+=",  "-=",
    "*=",   "/=",  "%=",  "&=",  "|=",  "^=",  "**",  "<<",  ">>",  "->",  "::",  "{",
    "}",    "(",   ")",   "[",   "]",   ";",   ",",   "<",   ">",   "=",   "."};

constexpr std::string_view kSinglePuncts = "+-*/%&|^!~?:@#";

constexpr std::array<std::string_view, 15> kRegexAfterWords = {
    "return", "typeof", "instanceof", "in",   "of",    "new",  "delete", "void",
    "throw",  "case",   "do",         "else", "yield", "await", "extends"};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80; }

class Lexer {
public:
    Lexer(std::string_view src, Language lang, LexResult& out) : src_(src), lang_(lang), out_(out) {}

    // Lexes until end of input, or until the `}` closing a template interpolation
    // when `in_template` is set.
    std::vector<Token> run(bool in_template) {
        std::vector<Token> toks;
        int brace_depth = 0;
        bool newline = false;
        if (!in_template && src_.substr(0, 2) == "#!") skip_line();

        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
                newline = true;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
                continue;
            }
            if (c == '/' && peek(1) == '/') {
                line_comment();
                continue;
            }
            if (c == '/' && peek(1) == '*') {
                block_comment();
                continue;
            }

            Token tok;
            tok.line = line_;
            tok.offset = pos_;
            tok.newline_before = newline;
            newline = false;

            if (ident_start(static_cast<unsigned char>(c))) {
                std::size_t start = pos_;
                while (pos_ < src_.size() && ident_char(static_cast<unsigned char>(src_[pos_]))) ++pos_;
                tok.kind = TokKind::identifier;
                tok.text = std::string(src_.substr(start, pos_ - start));
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
                number(tok);
            } else if (c == '"' || c == '\'') {
                if (lang_ == Language::java && c == '"' && src_.substr(pos_, 3) == "\"\"\"")
                    text_block(tok);
                else
                    quoted(tok, c);
            } else if (c == '`' && lang_ != Language::java) {
                template_string(tok);
            } else if (c == '/' && lang_ != Language::java && regex_allowed(toks)) {
                regex(tok);
            } else {
                if (in_template && c == '}' && brace_depth == 0) {
                    ++pos_;
                    return toks;
                }
                punct(tok);
                if (tok.text == "{") ++brace_depth;
                if (tok.text == "}") --brace_depth;
            }
            tok.end_line = line_;
            tok.end_offset = pos_;
            toks.push_back(std::move(tok));
        }
        if (in_template) error("unterminated template interpolation");
        return toks;
    }

private:
    char peek(std::size_t ahead) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void error(std::string what) {
        out_.errors.push_back("line " + std::to_string(line_) + ": " + std::move(what));
    }

    void skip_line() {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
    }

    void add_literal(std::size_t start, std::size_t end, int first_line, LiteralContext ctx) {
        Literal lit;
        lit.text = std::string(src_.substr(start, end - start));
        lit.span = {first_line, line_};
        lit.context = ctx;
        if (!lit.text.empty()) out_.literals.push_back(std::move(lit));
    }

    void line_comment() {
        std::size_t start = pos_ + 2;
        skip_line();
        add_literal(start, pos_, line_, LiteralContext::comment);
    }

    void block_comment() {
        int first = line_;
        std::size_t start = pos_ + 2;
        pos_ += 2;
        while (pos_ < src_.size() && !(src_[pos_] == '*' && peek(1) == '/')) {
            if (src_[pos_] == '\n') ++line_;
            ++pos_;
        }
        if (pos_ >= src_.size()) {
            error("unterminated block comment");
            add_literal(start, src_.size(), first, LiteralContext::comment);
            return;
        }
        add_literal(start, pos_, first, LiteralContext::comment);
        pos_ += 2;
    }

    void number(Token& tok) {
        std::size_t start = pos_;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
                ++pos_;
            } else if ((c == '+' || c == '-') && pos_ > start &&
                       (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E') &&
                       !(src_.substr(start, 2) == "0x" || src_.substr(start, 2) == "0X")) {
                ++pos_;
            } else {
                break;
            }
        }
        tok.kind = TokKind::number;
        tok.text = std::string(src_.substr(start, pos_ - start));
    }

    void quoted(Token& tok, char quote) {
        int first = line_;
        std::size_t start = ++pos_;
        while (pos_ < src_.size() && src_[pos_] != quote) {
            if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
                if (src_[pos_ + 1] == '\n') ++line_;
                pos_ += 2;
                continue;
            }
            if (src_[pos_] == '\n') break;
            ++pos_;
        }
        tok.kind = TokKind::string;
        tok.text = std::string(src_.substr(start, pos_ - start));
        add_literal(start, pos_, first, LiteralContext::string);
        if (pos_ >= src_.size() || src_[pos_] != quote) {
            error("unterminated string literal");
            return;
        }
        ++pos_;
    }

    void text_block(Token& tok) {
        int first = line_;
        pos_ += 3;
        std::size_t start = pos_;
        while (pos_ < src_.size() && src_.substr(pos_, 3) != "\"\"\"") {
            if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) ++pos_;
            else if (src_[pos_] == '\n') ++line_;
            ++pos_;
        }
        std::size_t end = std::min(pos_, src_.size());
        tok.kind = TokKind::string;
        tok.text = std::string(src_.substr(start, end - start));
        add_literal(start, end, first, LiteralContext::string);
        if (pos_ >= src_.size()) {
            error("unterminated text block");
            return;
        }
        pos_ += 3;
    }

    void template_string(Token& tok) {
        tok.kind = TokKind::template_string;
        ++pos_;
        std::size_t frag_start = pos_;
        int frag_line = line_;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\\') {
                if (peek(1) == '\n') ++line_;
                pos_ = std::min(pos_ + 2, src_.size());
                continue;
            }
            if (c == '`') {
                add_literal(frag_start, pos_, frag_line, LiteralContext::string);
                tok.text += src_.substr(frag_start, pos_ - frag_start);
                ++pos_;
                return;
            }
            if (c == '$' && peek(1) == '{') {
                add_literal(frag_start, pos_, frag_line, LiteralContext::string);
                tok.text += src_.substr(frag_start, pos_ - frag_start);
                pos_ += 2;
                tok.parts.push_back(run(true));
                frag_start = pos_;
                frag_line = line_;
                continue;
            }
            if (c == '\n') ++line_;
            ++pos_;
        }
        error("unterminated template literal");
        add_literal(frag_start, src_.size(), frag_line, LiteralContext::string);
    }

    bool regex_allowed(const std::vector<Token>& toks) const {
        if (toks.empty()) return true;
        const Token& prev = toks.back();
        switch (prev.kind) {
            case TokKind::number:
            case TokKind::string:
            case TokKind::template_string:
            case TokKind::regex:
                return false;
            case TokKind::identifier:
                for (auto w : kRegexAfterWords)
                    if (prev.text == w) return true;
                return false;
            case TokKind::punct:
                return !(prev.text == ")" || prev.text == "]" || prev.text == "++" ||
                         prev.text == "--");
        }
        return true;
    }

    void regex(Token& tok) {
        std::size_t start = pos_++;
        bool in_class = false;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') break;
            if (c == '\\') {
                pos_ = std::min(pos_ + 2, src_.size());
                continue;
            }
            if (c == '[') in_class = true;
            else if (c == ']') in_class = false;
            else if (c == '/' && !in_class) break;
            ++pos_;
        }
        if (pos_ >= src_.size() || src_[pos_] != '/') {
            error("unterminated regular expression");
            tok.kind = TokKind::regex;
            tok.text = std::string(src_.substr(start, pos_ - start));
            return;
        }
        ++pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok.kind = TokKind::regex;
        tok.text = std::string(src_.substr(start, pos_ - start));
    }

    void punct(Token& tok) {
        tok.kind = TokKind::punct;
        for (auto p : kPuncts) {
            if (src_.substr(pos_, p.size()) == p) {
                // `a?.5:b` is a conditional, not optional chaining.
                if (p == "?." && std::isdigit(static_cast<unsigned char>(peek(2)))) continue;
                tok.text = std::string(p);
                pos_ += p.size();
                return;
            }
        }
        char c = src_[pos_++];
        tok.text = std::string(1, c);
        if (kSinglePuncts.find(c) == std::string_view::npos && c != '\\')
            error(std::string("unexpected character '") + c + "'");
    }

    std::string_view src_;
    Language lang_;
    LexResult& out_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

}  // namespace

LexResult lex(std::string_view source, Language lang) {
    LexResult out;
    Lexer lexer(source, lang, out);
    out.tokens = lexer.run(false);
    return out;
}

}  // namespace privlens
