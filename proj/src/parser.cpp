#include <algorithm>
#include <array>
#include <optional>
#include <set>

#include "privlens/frontend.hpp"
#include "privlens/lexer.hpp"

namespace privlens {

namespace {

struct ParseError {
    std::string what;
};

/// A token vector with bracket matching and the regions claimed by nested functions.
struct Seq {
    const std::vector<Token>* toks = nullptr;
    std::vector<int> match;       // index of the matching bracket, -1 otherwise
    std::vector<int> opaque_end;  // >= 0 when a nested function region starts here

    const Token& operator[](int i) const { return (*toks)[static_cast<std::size_t>(i)]; }
    int size() const { return static_cast<int>(toks->size()); }
};

std::optional<Seq> make_seq(const std::vector<Token>& toks) {
    Seq s;
    s.toks = &toks;
    s.match.assign(toks.size(), -1);
    s.opaque_end.assign(toks.size(), -1);
    std::vector<int> stack;
    for (int i = 0; i < s.size(); ++i) {
        const Token& t = s[i];
        if (t.kind != TokKind::punct) continue;
        if (t.text == "(" || t.text == "[" || t.text == "{") {
            stack.push_back(i);
        } else if (t.text == ")" || t.text == "]" || t.text == "}") {
            if (stack.empty()) return std::nullopt;
            const std::string& open = s[stack.back()].text;
            bool ok = (open == "(" && t.text == ")") || (open == "[" && t.text == "]") ||
                      (open == "{" && t.text == "}");
            if (!ok) return std::nullopt;
            s.match[static_cast<std::size_t>(stack.back())] = i;
            s.match[static_cast<std::size_t>(i)] = stack.back();
            stack.pop_back();
        }
    }
    if (!stack.empty()) return std::nullopt;
    return s;
}

bool is_open(const Token& t) { return t.is("(") || t.is("[") || t.is("{"); }
bool is_close(const Token& t) { return t.is(")") || t.is("]") || t.is("}"); }

const std::set<std::string, std::less<>> kAssignOps = {
    "=", "+=", "-=", "*=", "/=", "%=", "**=", "<<=", ">>=", ">>>=", "&=", "|=", "^=", "&&=", "||=", "?\?="};

const std::set<std::string, std::less<>> kContinuePuncts = {
    ".",  "?.", ",",  "?",   ":",   "=",   "+=", "-=", "*=", "/=", "%=", "**=", "<<=", ">>=",
    ">>>=", "&=", "|=", "^=", "&&=", "||=", "?\?=", "=>", "==", "===", "!=", "!==", "<",  ">",
    "<=", ">=", "&&", "||", "??",  "+",   "-",   "*",  "/",  "%",  "**", "&",  "|",   "^",
    "<<", ">>", ">>>", "(", "[", "->", "::"};

const std::set<std::string, std::less<>> kContinueWords = {"instanceof", "in", "as", "satisfies"};

const std::set<std::string, std::less<>> kModifiers = {
    "public",   "private",  "protected", "static",   "final",     "abstract", "readonly",
    "override", "declare",  "native",    "transient", "volatile", "synchronized", "default",
    "async",    "strictfp", "sealed",    "accessor"};

const std::set<std::string, std::less<>> kLiteralWords = {"true", "false", "null", "undefined", "NaN",
                                                          "Infinity"};

const std::set<std::string, std::less<>> kPrefixWords = {"await", "typeof", "void", "delete", "yield",
                                                         "throw", "return", "async"};

const std::set<std::string, std::less<>> kJavaPrimitives = {"int",   "long", "short",  "byte",
                                                            "char",  "float", "double", "boolean"};

bool can_end_statement(const Token& t) {
    switch (t.kind) {
        case TokKind::identifier:
        case TokKind::number:
        case TokKind::string:
        case TokKind::template_string:
        case TokKind::regex:
            return true;
        case TokKind::punct:
            return t.text == ")" || t.text == "]" || t.text == "}" || t.text == "++" || t.text == "--";
    }
    return false;
}

bool can_continue_statement(const Token& t) {
    if (t.kind == TokKind::punct) return kContinuePuncts.contains(t.text);
    if (t.kind == TokKind::identifier) return kContinueWords.contains(t.text);
    return false;
}

struct CallInfo {
    Chain callee;
    bool is_new = false;
    std::vector<ExprSummary> args;
    std::vector<Chain> receiver_mentions;
    std::vector<Chain> arg_mentions;
    std::size_t base_len = 0;
    int first = 0;
    int last = 0;
};

struct Summary {
    ExprSummary expr;
    std::optional<CallInfo> top;
    std::vector<Stmt> inner;
};

class Parser {
public:
    Parser(std::string_view src, Language lang, NormalizedUnit& unit)
        : src_(src), lang_(lang), unit_(unit) {}

    void parse_program(Seq& s) {
        unit_.top_level.name = "<top>";
        unit_.top_level.span = {1, std::max(1, unit_.line_count)};
        parse_statements(s, 0, s.size(), unit_.top_level.body);
    }

private:
    bool js() const { return lang_ != Language::java; }

    // ---------------------------------------------------------------- statements

    void parse_statements(Seq& s, int b, int e, Block& out) {
        int i = b;
        while (i < e) {
            int next = parse_statement(s, i, e, out);
            i = std::max(next, i + 1);
        }
    }

    /// Parses one statement (or a single-statement body) into its own block.
    Block sub_block(Seq& s, int& i, int e) {
        Block block;
        if (i >= e) throw ParseError{"missing statement body"};
        int next = parse_statement(s, i, e, block);
        i = std::max(next, i + 1);
        return block;
    }

    bool asi_break(const Seq& s, int k) const {
        return js() && s[k].newline_before && can_end_statement(s[k - 1]) &&
               !can_continue_statement(s[k]);
    }

    int statement_end(const Seq& s, int i, int e) const {
        int k = i;
        while (k < e) {
            if (k > i && asi_break(s, k)) return k;
            const Token& t = s[k];
            if (is_open(t)) {
                k = s.match[static_cast<std::size_t>(k)] + 1;
                continue;
            }
            if (t.is(";") || is_close(t)) return k;
            ++k;
        }
        return e;
    }

    int skip_semicolon(const Seq& s, int k, int e) const { return (k < e && s[k].is(";")) ? k + 1 : k; }

    int require_group(const Seq& s, int i, int e, const char* what) const {
        if (i >= e || !s[i].is("(")) throw ParseError{std::string("expected '(' after ") + what};
        return s.match[static_cast<std::size_t>(i)];
    }

    int skip_annotation(const Seq& s, int i, int e) const {
        // @Name(.Name)*(args)?
        int k = i + 1;
        if (k < e && s[k].kind == TokKind::identifier) ++k;
        while (k + 1 < e && s[k].is(".") && s[k + 1].kind == TokKind::identifier) k += 2;
        if (k < e && s[k].is("(") && !s[k].newline_before) k = s.match[static_cast<std::size_t>(k)] + 1;
        return k;
    }

    int find_top(const Seq& s, int b, int e, std::string_view punct) const {
        for (int k = b; k < e;) {
            if (s.opaque_end[static_cast<std::size_t>(k)] >= 0) {
                k = s.opaque_end[static_cast<std::size_t>(k)];
                continue;
            }
            if (is_open(s[k])) {
                k = s.match[static_cast<std::size_t>(k)] + 1;
                continue;
            }
            if (s[k].is(punct)) return k;
            ++k;
        }
        return -1;
    }

    int parse_statement(Seq& s, int i, int e, Block& out) {
        const Token& t = s[i];
        if (t.is(";")) return i + 1;
        if (t.is("{")) {
            int close = s.match[static_cast<std::size_t>(i)];
            parse_statements(s, i + 1, close, out);
            return close + 1;
        }
        if (t.is("@")) {
            if (i + 1 < e && s[i + 1].is_ident("interface")) return skip_type_decl(s, i + 1, e);
            return skip_annotation(s, i, e);
        }
        if (t.kind == TokKind::identifier) {
            const std::string& w = t.text;
            if (w == "if") return parse_if(s, i, e, out);
            if (w == "for") return parse_for(s, i, e, out);
            if (w == "while") {
                int close = require_group(s, i + 1, e, "while");
                expression_statement(s, i + 2, close, out);
                int k = close + 1;
                Block body = sub_block(s, k, e);
                push_loop(out, std::move(body), t.line, s[k - 1].end_line);
                return k;
            }
            if (w == "do") {
                int k = i + 1;
                Block body = sub_block(s, k, e);
                if (k < e && s[k].is_ident("while")) {
                    int close = require_group(s, k + 1, e, "while");
                    expression_statement(s, k + 2, close, body);
                    k = skip_semicolon(s, close + 1, e);
                }
                push_loop(out, std::move(body), t.line, s[k - 1].end_line);
                return k;
            }
            if (w == "switch") {
                int close = require_group(s, i + 1, e, "switch");
                expression_statement(s, i + 2, close, out);
                int open = close + 1;
                if (open >= e || !s[open].is("{")) throw ParseError{"expected switch body"};
                int end = s.match[static_cast<std::size_t>(open)];
                Branch br;
                br.arms.emplace_back();
                parse_statements(s, open + 1, end, br.arms.back());
                br.arms.emplace_back();
                br.span = {t.line, s[end].end_line};
                out.nodes.push_back(Node{std::move(br)});
                return end + 1;
            }
            if (w == "case") {
                int k = i + 1;
                while (k < e && !s[k].is(":")) k = is_open(s[k]) ? s.match[static_cast<std::size_t>(k)] + 1 : k + 1;
                return k + 1;
            }
            if (w == "default" && i + 1 < e && s[i + 1].is(":")) return i + 2;
            if (w == "try") return parse_try(s, i, e, out);
            if (w == "synchronized" && i + 1 < e && s[i + 1].is("(")) {
                int close = s.match[static_cast<std::size_t>(i + 1)];
                expression_statement(s, i + 2, close, out);
                return close + 1;
            }
            if (w == "break" || w == "continue" || w == "debugger") {
                int end = statement_end(s, i, e);
                return skip_semicolon(s, end, e);
            }
            if (w == "import" && !(i + 1 < e && (s[i + 1].is("(") || s[i + 1].is(".")))) return parse_import(s, i, e);
            if (w == "package") return skip_semicolon(s, statement_end(s, i, e), e);
            if (w == "export") {
                int k = i + 1;
                if (k < e && s[k].is_ident("default")) ++k;
                if (k < e && (s[k].is("{") || s[k].is("*"))) {
                    int end = statement_end(s, k, e);
                    record_string_imports(s, k, end);
                    return skip_semicolon(s, end, e);
                }
                return k;
            }
            if (w == "function" || (w == "async" && i + 1 < e && s[i + 1].is_ident("function")))
                return parse_function_decl(s, w == "async" ? i + 1 : i, e, out);
            if (w == "class" || (w == "record" && lang_ == Language::java)) return parse_class_decl(s, i, e, out);
            if (w == "interface" || w == "enum") return skip_type_decl(s, i, e);
            if (js() && w == "type" && i + 2 < e && s[i + 1].kind == TokKind::identifier &&
                (s[i + 2].is("=") || s[i + 2].is("<")))
                return skip_semicolon(s, statement_end(s, i, e), e);
            if (js() && (w == "namespace" || w == "module") && i + 2 < e &&
                s[i + 1].kind == TokKind::identifier && s[i + 2].is("{")) {
                int close = s.match[static_cast<std::size_t>(i + 2)];
                parse_statements(s, i + 3, close, out);
                return close + 1;
            }
            if (js() && w == "declare") return skip_semicolon(s, statement_end(s, i, e), e);
            if (kModifiers.contains(w) && w != "async" && w != "default" && i + 1 < e &&
                s[i + 1].kind == TokKind::identifier) {
                // `public class`, `abstract class`, `static final int X = ...`
                int k = i;
                while (k < e && s[k].kind == TokKind::identifier && kModifiers.contains(s[k].text)) ++k;
                if (k < e && (s[k].is_ident("class") || s[k].is_ident("interface") || s[k].is_ident("enum") ||
                              s[k].is_ident("record")))
                    return k;
            }
            // Labels.
            if (js() && i + 1 < e && s[i + 1].is(":") && !kModifiers.contains(w)) return i + 2;
        }

        int end = statement_end(s, i, e);
        expression_statement(s, i, end, out);
        return skip_semicolon(s, end, e);
    }

    void push_loop(Block& out, Block body, int first, int last) {
        Branch br;
        br.loop = true;
        br.arms.push_back(std::move(body));
        br.arms.emplace_back();
        br.span = {first, last};
        out.nodes.push_back(Node{std::move(br)});
    }

    int parse_if(Seq& s, int i, int e, Block& out) {
        int close = require_group(s, i + 1, e, "if");
        expression_statement(s, i + 2, close, out);
        int k = close + 1;
        Branch br;
        br.arms.push_back(sub_block(s, k, e));
        if (k < e && s[k].is_ident("else")) {
            ++k;
            br.arms.push_back(sub_block(s, k, e));
        } else {
            br.arms.emplace_back();
        }
        br.span = {s[i].line, s[k - 1].end_line};
        out.nodes.push_back(Node{std::move(br)});
        return k;
    }

    int parse_for(Seq& s, int i, int e, Block& out) {
        int open = i + 1;
        if (open < e && s[open].is_ident("await")) ++open;
        if (open < e && s[open].is_ident("each")) ++open;
        int close = require_group(s, open, e, "for");
        int hb = open + 1;
        Block body;

        int semi1 = find_top(s, hb, close, ";");
        if (semi1 >= 0) {
            int semi2 = find_top(s, semi1 + 1, close, ";");
            if (semi2 < 0) throw ParseError{"malformed for header"};
            expression_statement(s, hb, semi1, out);
            expression_statement(s, semi1 + 1, semi2, body);
            int k = close + 1;
            Block inner = sub_block(s, k, e);
            for (auto& n : inner.nodes) body.nodes.push_back(std::move(n));
            expression_statement(s, semi2 + 1, close, body);
            push_loop(out, std::move(body), s[i].line, s[k - 1].end_line);
            return k;
        }

        // for (x of xs) / for (x in obj) / for (T x : xs)
        int split = -1;
        for (int k = hb; k < close;) {
            if (is_open(s[k])) {
                k = s.match[static_cast<std::size_t>(k)] + 1;
                continue;
            }
            if (s[k].is_ident("of") || s[k].is_ident("in") || s[k].is(":")) {
                split = k;
                break;
            }
            ++k;
        }
        if (split > hb) {
            extract_functions(s, split + 1, close);
            Stmt st = make_stmt_shell(s, hb, close);
            st.kind = StmtKind::assignment;
            st.targets = lhs_targets(s, hb, split);
            Summary sum = summarize(s, split + 1, close);
            apply_summary(st, std::move(sum));
            st.kind = st.targets.empty() ? StmtKind::other : StmtKind::assignment;
            body.nodes.push_back(Node{std::move(st)});
        } else {
            expression_statement(s, hb, close, out);
        }
        int k = close + 1;
        Block inner = sub_block(s, k, e);
        for (auto& n : inner.nodes) body.nodes.push_back(std::move(n));
        push_loop(out, std::move(body), s[i].line, s[k - 1].end_line);
        return k;
    }

    int parse_try(Seq& s, int i, int e, Block& out) {
        int k = i + 1;
        if (k < e && s[k].is("(")) {  // try-with-resources
            int close = s.match[static_cast<std::size_t>(k)];
            int b = k + 1;
            while (b < close) {
                int semi = find_top(s, b, close, ";");
                int end = semi < 0 ? close : semi;
                expression_statement(s, b, end, out);
                b = end + 1;
            }
            k = close + 1;
        }
        if (k >= e || !s[k].is("{")) throw ParseError{"expected try block"};
        int close = s.match[static_cast<std::size_t>(k)];
        parse_statements(s, k + 1, close, out);
        k = close + 1;
        while (k < e && s[k].is_ident("catch")) {
            ++k;
            if (k < e && s[k].is("(")) k = s.match[static_cast<std::size_t>(k)] + 1;
            if (k >= e || !s[k].is("{")) throw ParseError{"expected catch block"};
            int cclose = s.match[static_cast<std::size_t>(k)];
            Branch br;
            br.arms.emplace_back();
            parse_statements(s, k + 1, cclose, br.arms.back());
            br.arms.emplace_back();
            br.span = {s[k].line, s[cclose].end_line};
            out.nodes.push_back(Node{std::move(br)});
            k = cclose + 1;
        }
        if (k < e && s[k].is_ident("finally")) {
            ++k;
            if (k >= e || !s[k].is("{")) throw ParseError{"expected finally block"};
            int fclose = s.match[static_cast<std::size_t>(k)];
            parse_statements(s, k + 1, fclose, out);
            k = fclose + 1;
        }
        return k;
    }

    void record_string_imports(const Seq& s, int b, int e) {
        for (int k = b; k < e; ++k)
            if (s[k].kind == TokKind::string) unit_.imports.push_back(s[k].text);
    }

    int parse_import(const Seq& s, int i, int e) {
        int end = statement_end(s, i, e);
        if (lang_ == Language::java) {
            std::string path;
            for (int k = i + 1; k < end; ++k) {
                if (s[k].is_ident("static")) continue;
                path += s[k].text;
            }
            unit_.imports.push_back(path);
        } else {
            record_string_imports(s, i, end);
        }
        return skip_semicolon(s, end, e);
    }

    int skip_type_decl(const Seq& s, int i, int e) const {
        int k = i;
        while (k < e && !s[k].is("{") && !s[k].is(";")) k = s[k].is("(") || s[k].is("[") ? s.match[static_cast<std::size_t>(k)] + 1 : k + 1;
        if (k < e && s[k].is("{")) return s.match[static_cast<std::size_t>(k)] + 1;
        return skip_semicolon(s, k, e);
    }

    int parse_function_decl(Seq& s, int i, int e, Block& out) {
        int k = i + 1;
        if (k < e && s[k].is("*")) ++k;
        std::string name = "<anonymous>";
        if (k < e && s[k].kind == TokKind::identifier) name = s[k++].text;
        if (k < e && s[k].is("<")) {  // generic parameters
            while (k < e && !s[k].is("(")) ++k;
        }
        int close = require_group(s, k, e, "function name");
        int body = close + 1;
        while (body < e && !s[body].is("{") && !s[body].is(";") && !asi_break(s, body))
            body = is_open(s[body]) && !s[body].is("{") ? s.match[static_cast<std::size_t>(body)] + 1 : body + 1;
        if (body >= e || !s[body].is("{")) return skip_semicolon(s, body, e);  // overload signature
        function_scope(s, name, k, body, -1, -1);
        (void)out;
        return s.match[static_cast<std::size_t>(body)] + 1;
    }

    int parse_class_decl(Seq& s, int i, int e, Block& out) {
        int k = i + 1;
        while (k < e && !s[k].is("{")) {
            k = (s[k].is("(") || s[k].is("[")) ? s.match[static_cast<std::size_t>(k)] + 1 : k + 1;
        }
        if (k >= e) throw ParseError{"expected class body"};
        int close = s.match[static_cast<std::size_t>(k)];
        class_body(s, k + 1, close, out);
        return close + 1;
    }

    // ---------------------------------------------------------------- classes

    void class_body(Seq& s, int b, int e, Block& fields) {
        int i = b;
        if (lang_ == Language::java) {
            // Enum constants precede the first ';' of an enum body; harmless to treat as members.
        }
        while (i < e) {
            int next = class_member(s, i, e, fields);
            i = std::max(next, i + 1);
        }
    }

    int class_member(Seq& s, int i, int e, Block& fields) {
        if (s[i].is(";") || s[i].is(",")) return i + 1;
        int j = i;
        while (j < e) {
            if (s[j].is("@")) {
                if (j + 1 < e && s[j + 1].is_ident("interface")) return skip_type_decl(s, j + 1, e);
                j = skip_annotation(s, j, e);
                continue;
            }
            if (s[j].kind == TokKind::identifier && j + 1 < e &&
                (kModifiers.contains(s[j].text) || s[j].text == "get" || s[j].text == "set") &&
                (s[j + 1].kind == TokKind::identifier || s[j + 1].is("*") || s[j + 1].is("[") ||
                 s[j + 1].is("#") || s[j + 1].is("{") || s[j + 1].is("<"))) {
                ++j;
                continue;
            }
            if (s[j].is("*") || s[j].is("#")) {
                ++j;
                continue;
            }
            break;
        }
        if (j >= e) return e;
        const Token& t = s[j];
        if (t.is_ident("class") || (lang_ == Language::java && t.is_ident("record"))) {
            return parse_class_decl(s, j, e, fields);
        }
        if (t.is_ident("interface") || t.is_ident("enum") || t.is_ident("type")) {
            if (t.is_ident("type")) return skip_semicolon(s, statement_end(s, j, e), e);
            return skip_type_decl(s, j, e);
        }
        if (t.is("{")) {  // initializer block
            int close = s.match[static_cast<std::size_t>(j)];
            function_scope(s, "<init>", -1, j, -1, -1);
            return close + 1;
        }

        for (int k = j; k < e;) {
            if (k > j && asi_break(s, k)) break;
            const Token& c = s[k];
            if (c.is("(")) {
                int close = s.match[static_cast<std::size_t>(k)];
                if (k > j && s[k - 1].kind == TokKind::identifier) {
                    int m = close + 1;
                    while (m < e && !s[m].is("{") && !s[m].is(";") && !s[m].is("=") && !s[m].is("=>") &&
                           !(m > close + 1 && asi_break(s, m)))
                        m = (s[m].is("(") || s[m].is("[")) ? s.match[static_cast<std::size_t>(m)] + 1 : m + 1;
                    if (m < e && s[m].is("{")) {
                        function_scope(s, s[k - 1].text, k, m, -1, -1);
                        return s.match[static_cast<std::size_t>(m)] + 1;
                    }
                    if (m < e && s[m].is(";")) return m + 1;
                    if (m >= e || asi_break(s, m)) return m;
                }
                k = close + 1;
                continue;
            }
            if (c.is("[") || c.is("{")) {
                k = s.match[static_cast<std::size_t>(k)] + 1;
                continue;
            }
            if (c.is("=") || c.is(";")) break;
            ++k;
        }

        int end = statement_end(s, j, e);
        if (find_top(s, j, end, "=") >= 0) field_initializer(s, j, end, fields);
        return skip_semicolon(s, end, e);
    }

    void field_initializer(Seq& s, int b, int e, Block& fields) {
        extract_functions(s, b, e);
        auto pieces = split_declarators(s, b, e, true);
        for (auto [pb, pe] : pieces) {
            Stmt st = build_stmt(s, pb, pe);
            for (auto& t : st.targets)
                if (t.empty() || t.front() != "this") t.insert(t.begin(), "this");
            fields.nodes.push_back(Node{std::move(st)});
        }
    }

    // ---------------------------------------------------------------- functions

    std::vector<Param> parse_params(const Seq& s, int open) {
        std::vector<Param> params;
        if (open < 0) return params;
        int close = s.match[static_cast<std::size_t>(open)];
        int b = open + 1;
        while (b < close) {
            int comma = find_top(s, b, close, ",");
            int pe = comma < 0 ? close : comma;
            int p = b;
            while (p < pe && (s[p].is("@") || s[p].is("...") ||
                              (s[p].kind == TokKind::identifier && kModifiers.contains(s[p].text) &&
                               p + 1 < pe && s[p + 1].kind == TokKind::identifier))) {
                p = s[p].is("@") ? skip_annotation(s, p, pe) : p + 1;
            }
            if (p < pe && (s[p].is("{") || s[p].is("["))) {
                for (auto& c : pattern_identifiers(s, p + 1, s.match[static_cast<std::size_t>(p)]))
                    params.push_back({c.front(), s[p].line});
            } else {
                int q = pe;
                int eq = find_top(s, p, q, "=");
                if (eq >= 0) q = eq;
                if (js()) {
                    int colon = find_top(s, p, q, ":");
                    if (colon >= 0) q = colon;
                    int opt = find_top(s, p, q, "?");
                    if (opt >= 0) q = opt;
                }
                for (int k = q - 1; k >= p; --k) {
                    if (s[k].kind == TokKind::identifier) {
                        if (s[k].text != "this") params.push_back({s[k].text, s[k].line});
                        break;
                    }
                }
            }
            b = pe + 1;
        }
        return params;
    }

    /// Registers a function scope. Either `body_open` ('{' index) or the
    /// expression range [expr_b, expr_e) gives the body.
    void function_scope(Seq& s, std::string name, int params_open, int body_open, int expr_b, int expr_e) {
        FunctionScope fs;
        fs.name = std::move(name);
        fs.params = parse_params(s, params_open);
        if (body_open >= 0) {
            int close = s.match[static_cast<std::size_t>(body_open)];
            int first = params_open >= 0 ? params_open : body_open;
            fs.span = {s[first].line, s[close].end_line};
            parse_statements(s, body_open + 1, close, fs.body);
        } else {
            int first = params_open >= 0 ? params_open : expr_b;
            fs.span = {s[first].line, s[expr_e - 1].end_line};
            expression_statement(s, expr_b, expr_e, fs.body);
        }
        unit_.functions.push_back(std::move(fs));
    }

    std::string context_name(const Seq& s, int region_start, int b, const char* fallback) const {
        if (region_start - 2 >= b && s[region_start - 2].kind == TokKind::identifier &&
            (s[region_start - 1].is("=") || s[region_start - 1].is(":")))
            return s[region_start - 2].text;
        return std::string(fallback) + "@" + std::to_string(s[region_start].line);
    }

    int arrow_body_end(const Seq& s, int k, int e) const {
        int m = k;
        while (m < e) {
            if (m > k && asi_break(s, m)) break;
            const Token& t = s[m];
            if (t.is("(") || t.is("[") || t.is("{")) {
                m = s.match[static_cast<std::size_t>(m)] + 1;
                continue;
            }
            if (is_close(t) || t.is(",") || t.is(";")) break;
            ++m;
        }
        return m;
    }

    /// Claims every function/lambda/anonymous class inside [b, e) as its own scope
    /// and marks its tokens opaque for expression summaries.
    void extract_functions(Seq& s, int b, int e) {
        for (int i = b; i < e;) {
            if (s.opaque_end[static_cast<std::size_t>(i)] >= 0) {
                i = s.opaque_end[static_cast<std::size_t>(i)];
                continue;
            }
            const Token& t = s[i];

            if (t.is("=>") || (lang_ == Language::java && t.is("->"))) {
                int start = -1;
                int params_open = -1;
                if (i - 1 >= b && s[i - 1].is(")")) {
                    params_open = s.match[static_cast<std::size_t>(i - 1)];
                    start = params_open;
                } else if (i - 1 >= b && s[i - 1].kind == TokKind::identifier) {
                    start = i - 1;
                }
                if (start < b || start < 0) {
                    ++i;
                    continue;
                }
                if (start - 1 >= b && s[start - 1].is_ident("async")) --start;
                std::string name = context_name(s, start, b, "<arrow>");
                int end;
                bool made = true;
                if (i + 1 < e && s[i + 1].is("{")) {
                    end = s.match[static_cast<std::size_t>(i + 1)] + 1;
                    function_scope(s, name, params_open, i + 1, -1, -1);
                } else {
                    end = arrow_body_end(s, i + 1, e);
                    made = end > i + 1;
                    if (made) function_scope(s, name, params_open, -1, i + 1, end);
                    else end = i + 1;
                }
                if (made && params_open < 0 && start == i - 1) {
                    unit_.functions.back().params = {{s[i - 1].text, s[i - 1].line}};
                }
                s.opaque_end[static_cast<std::size_t>(start)] = end;
                i = end;
                continue;
            }

            if (t.is_ident("function")) {
                int k = i + 1;
                if (k < e && s[k].is("*")) ++k;
                std::string name;
                if (k < e && s[k].kind == TokKind::identifier) name = s[k++].text;
                if (k < e && s[k].is("(")) {
                    int close = s.match[static_cast<std::size_t>(k)];
                    int body = close + 1;
                    while (body < e && !s[body].is("{")) ++body;
                    if (body < e) {
                        int start = (i - 1 >= b && s[i - 1].is_ident("async")) ? i - 1 : i;
                        if (name.empty()) name = context_name(s, start, b, "<function>");
                        function_scope(s, name, k, body, -1, -1);
                        int end = s.match[static_cast<std::size_t>(body)] + 1;
                        s.opaque_end[static_cast<std::size_t>(start)] = end;
                        i = end;
                        continue;
                    }
                }
            }

            if (t.is_ident("class") && js()) {
                int k = i + 1;
                while (k < e && !s[k].is("{")) ++k;
                if (k < e) {
                    int close = s.match[static_cast<std::size_t>(k)];
                    FunctionScope fields;
                    fields.name = "<class-fields>";
                    fields.span = {s[i].line, s[close].end_line};
                    class_body(s, k + 1, close, fields.body);
                    if (!fields.body.nodes.empty()) unit_.functions.push_back(std::move(fields));
                    s.opaque_end[static_cast<std::size_t>(i)] = close + 1;
                    i = close + 1;
                    continue;
                }
            }

            // name(params) { ... } inside an expression: object-literal method or,
            // after `new`, an anonymous class body.
            if (t.is("(") && i - 1 >= b && s[i - 1].kind == TokKind::identifier) {
                int close = s.match[static_cast<std::size_t>(i)];
                if (close + 1 < e && s[close + 1].is("{")) {
                    int body = close + 1;
                    int body_close = s.match[static_cast<std::size_t>(body)];
                    int start = i - 1;
                    while (start - 2 >= b && s[start - 1].is(".") && s[start - 2].kind == TokKind::identifier)
                        start -= 2;
                    if (start - 1 >= b && s[start - 1].is_ident("new")) {
                        FunctionScope fields;
                        fields.name = "<anonymous-class>";
                        fields.span = {s[start].line, s[body_close].end_line};
                        class_body(s, body + 1, body_close, fields.body);
                        if (!fields.body.nodes.empty()) unit_.functions.push_back(std::move(fields));
                        // Constructor arguments still count; only the body is claimed.
                        s.opaque_end[static_cast<std::size_t>(body)] = body_close + 1;
                        extract_functions(s, i + 1, close);
                        i = body_close + 1;
                        continue;
                    }
                    int mstart = i - 1;
                    while (mstart - 1 >= b && (s[mstart - 1].is_ident("async") || s[mstart - 1].is_ident("get") ||
                                               s[mstart - 1].is_ident("set") || s[mstart - 1].is("*")))
                        --mstart;
                    function_scope(s, s[i - 1].text, i, body, -1, -1);
                    s.opaque_end[static_cast<std::size_t>(mstart)] = body_close + 1;
                    i = body_close + 1;
                    continue;
                }
            }

            if (t.kind == TokKind::template_string) {
                // Interpolations are handled when the template is summarized.
            }
            ++i;
        }
    }

    // ---------------------------------------------------------------- expressions

    std::vector<std::pair<int, int>> split_declarators(const Seq& s, int b, int e, bool decl) const {
        std::vector<std::pair<int, int>> out;
        bool seen_assign = false;
        int start = b;
        for (int k = b; k < e;) {
            if (s.opaque_end[static_cast<std::size_t>(k)] >= 0) {
                k = s.opaque_end[static_cast<std::size_t>(k)];
                continue;
            }
            if (is_open(s[k])) {
                k = s.match[static_cast<std::size_t>(k)] + 1;
                continue;
            }
            if (s[k].is("=")) seen_assign = true;
            bool split = s[k].is(",") && (js() ? decl : seen_assign);
            if (split) {
                out.emplace_back(start, k);
                start = k + 1;
            }
            ++k;
        }
        out.emplace_back(start, e);
        return out;
    }

    void expression_statement(Seq& s, int b, int e, Block& out) {
        if (b >= e) return;
        extract_functions(s, b, e);
        bool decl = false;
        while (b < e && s[b].kind == TokKind::identifier) {
            const std::string& w = s[b].text;
            if (w == "const" || w == "let" || w == "var" || w == "final") {
                decl = true;
            } else if (!(w == "return" || w == "throw" || w == "yield" || w == "export" ||
                         (w == "default" && js()) || (kModifiers.contains(w) && w != "async"))) {
                break;
            }
            ++b;
        }
        if (b >= e) return;
        for (auto [pb, pe] : split_declarators(s, b, e, decl)) {
            if (pb >= pe) continue;
            Stmt st = build_stmt(s, pb, pe, decl);
            out.nodes.push_back(Node{std::move(st)});
        }
    }

    int find_assign(const Seq& s, int b, int e) const {
        for (int k = b; k < e;) {
            if (s.opaque_end[static_cast<std::size_t>(k)] >= 0) {
                k = s.opaque_end[static_cast<std::size_t>(k)];
                continue;
            }
            if (is_open(s[k])) {
                k = s.match[static_cast<std::size_t>(k)] + 1;
                continue;
            }
            if (s[k].kind == TokKind::punct && kAssignOps.contains(s[k].text)) return k;
            ++k;
        }
        return -1;
    }

    Stmt make_stmt_shell(const Seq& s, int b, int e) const {
        Stmt st;
        st.span = {s[b].line, s[e - 1].end_line};
        st.offset = s[b].offset;
        st.text = std::string(src_.substr(s[b].offset, s[e - 1].end_offset - s[b].offset));
        return st;
    }

    Stmt build_stmt(Seq& s, int b, int e, bool decl = false) {
        Stmt st = make_stmt_shell(s, b, e);
        int k = find_assign(s, b, e);
        if (k > b) {
            st.targets = lhs_targets(s, b, k);
            st.compound = s[k].text != "=";
            int rhs = k + 1;
            for (int k2; (k2 = find_assign(s, rhs, e)) > rhs && s[k2].is("=");) {
                for (auto& t : lhs_targets(s, rhs, k2)) st.targets.push_back(std::move(t));
                rhs = k2 + 1;
            }
            Summary sum = rhs < e ? summarize(s, rhs, e) : Summary{};
            apply_summary(st, std::move(sum));
            st.kind = st.targets.empty() ? (st.has_callee() ? StmtKind::call : StmtKind::other)
                                         : StmtKind::assignment;
            return st;
        }
        if (decl || java_declaration(s, b, e)) {
            st.targets = lhs_targets(s, b, e);
            if (!st.targets.empty()) {
                st.kind = StmtKind::assignment;
                st.value.kind = ExprKind::literal;
                st.value.literal = "undefined";
                return st;
            }
        }
        apply_summary(st, summarize(s, b, e));
        st.kind = st.has_callee() ? StmtKind::call : StmtKind::other;
        return st;
    }

    // `Type name` or `Type<A, B> name` with nothing else.
    bool java_declaration(const Seq& s, int b, int e) const {
        if (lang_ != Language::java || e - b < 2) return false;
        if (s[e - 1].kind != TokKind::identifier) return false;
        const Token& prev = s[e - 2];
        if (!(prev.kind == TokKind::identifier || prev.is(">") || prev.is(">>") || prev.is("]")))
            return false;
        for (int k = b; k < e - 1; ++k) {
            const Token& t = s[k];
            if (t.kind == TokKind::identifier) continue;
            if (t.is(".") || t.is("<") || t.is(">") || t.is(">>") || t.is(",") || t.is("?") || t.is("[") ||
                t.is("]"))
                continue;
            return false;
        }
        return !kPrefixWords.contains(s[b].text);
    }

    void apply_summary(Stmt& st, Summary sum) {
        st.value = std::move(sum.expr);
        if (sum.top) {
            st.callee = std::move(sum.top->callee);
            st.constructor_call = sum.top->is_new;
            st.args = std::move(sum.top->args);
            st.receiver_mentions = std::move(sum.top->receiver_mentions);
            st.base_len = sum.top->base_len;
        }
        st.inner = std::move(sum.inner);
        std::stable_sort(st.inner.begin(), st.inner.end(),
                         [](const Stmt& a, const Stmt& b) { return a.offset < b.offset; });
    }

    std::vector<Chain> pattern_identifiers(const Seq& s, int b, int e) const {
        std::vector<Chain> out;
        for (int k = b; k < e; ++k) {
            if (s[k].kind != TokKind::identifier) continue;
            bool next_ok = k + 1 >= e || !(s[k + 1].is(":") || s[k + 1].is("(") || s[k + 1].is("."));
            bool prev_ok = k - 1 < b || !(s[k - 1].is(".") || s[k - 1].is("="));
            if (next_ok && prev_ok) out.push_back({s[k].text});
        }
        return out;
    }

    std::vector<Chain> lhs_targets(const Seq& s, int b, int e) const {
        while (b < e && s[b].kind == TokKind::identifier &&
               (s[b].text == "const" || s[b].text == "let" || s[b].text == "var" || kModifiers.contains(s[b].text)))
            ++b;
        if (b >= e) return {};
        if (js()) {
            int colon = find_top(s, b, e, ":");
            if (colon > b) e = colon;
        }
        while (e > b && (s[e - 1].is("!") || s[e - 1].is("?"))) --e;
        if (e <= b) return {};
        if ((s[b].is("{") || s[b].is("[")) && s.match[static_cast<std::size_t>(b)] == e - 1)
            return pattern_identifiers(s, b + 1, e - 1);

        Chain chain;
        int k = e - 1;
        while (k >= b) {
            if (s[k].is("]")) {
                k = s.match[static_cast<std::size_t>(k)] - 1;
                continue;
            }
            if (s[k].kind != TokKind::identifier) break;
            chain.push_back(s[k].text);
            --k;
            if (k >= b && (s[k].is(".") || s[k].is("?."))) {
                --k;
                continue;
            }
            break;
        }
        if (chain.empty()) return {};
        std::reverse(chain.begin(), chain.end());
        return {chain};
    }

    bool is_java_cast(const Seq& s, int open, int e) const {
        if (lang_ != Language::java) return false;
        int close = s.match[static_cast<std::size_t>(open)];
        if (close + 1 >= e || close == open + 1) return false;
        const Token& first = s[open + 1];
        if (first.kind != TokKind::identifier) return false;
        bool typeish = kJavaPrimitives.contains(first.text) || std::isupper(static_cast<unsigned char>(first.text[0]));
        if (!typeish) return false;
        for (int k = open + 1; k < close; ++k) {
            const Token& t = s[k];
            if (!(t.kind == TokKind::identifier || t.is(".") || t.is("<") || t.is(">") || t.is(",") ||
                  t.is("[") || t.is("]") || t.is("?")))
                return false;
        }
        const Token& next = s[close + 1];
        return next.kind != TokKind::punct || next.is("(") || next.is("!") || next.is("~");
    }

    void merge(Summary& out, Summary sub) {
        auto& m = out.expr.mentions;
        m.insert(m.end(), sub.expr.mentions.begin(), sub.expr.mentions.end());
        auto& c = out.expr.calls;
        c.insert(c.end(), sub.expr.calls.begin(), sub.expr.calls.end());
        for (auto& st : sub.inner) out.inner.push_back(std::move(st));
        if (sub.top) out.inner.push_back(call_stmt(*sub.top));
    }

    Stmt call_stmt_from(const Seq& s, const CallInfo& ci) {
        Stmt st = make_stmt_shell(s, ci.first, ci.last + 1);
        st.kind = StmtKind::call;
        st.callee = ci.callee;
        st.constructor_call = ci.is_new;
        st.args = ci.args;
        st.receiver_mentions = ci.receiver_mentions;
        st.base_len = ci.base_len;
        st.value.kind = ExprKind::call;
        st.value.chain = ci.callee;
        st.value.mentions = ci.arg_mentions;
        if (ci.callee.size() > 1) st.value.mentions.push_back(Chain(ci.callee.begin(), ci.callee.end() - 1));
        st.value.calls.push_back(ci.callee);
        return st;
    }

    // Call infos carry token indices of the sequence being summarized; convert them
    // to statements while that sequence is still in scope.
    Stmt call_stmt(const CallInfo& ci) { return call_stmt_from(*current_, ci); }

    std::vector<std::pair<int, int>> split_commas(const Seq& s, int b, int e) const {
        std::vector<std::pair<int, int>> out;
        if (b >= e) return out;
        int start = b;
        for (int k = b; k < e;) {
            if (s.opaque_end[static_cast<std::size_t>(k)] >= 0) {
                k = s.opaque_end[static_cast<std::size_t>(k)];
                continue;
            }
            if (is_open(s[k])) {
                k = s.match[static_cast<std::size_t>(k)] + 1;
                continue;
            }
            if (s[k].is(",")) {
                out.emplace_back(start, k);
                start = k + 1;
            }
            ++k;
        }
        out.emplace_back(start, e);
        return out;
    }

    void object_literal(Seq& s, int b, int e, Summary& out) {
        for (auto [p, q] : split_commas(s, b, e)) {
            if (p >= q) continue;
            if (s.opaque_end[static_cast<std::size_t>(p)] >= q) continue;
            if (s[p].is("...")) {
                merge(out, summarize(s, p + 1, q));
                continue;
            }
            int colon = find_top(s, p, q, ":");
            if (colon > p) {
                if (colon == p + 1 && (s[p].kind == TokKind::identifier || s[p].kind == TokKind::string)) {
                    const std::string& key = s[p].text;
                    bool identifier_like = !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
                        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
                    });
                    if (identifier_like) out.expr.mentions.push_back({key});
                } else if (s[p].is("[")) {
                    merge(out, summarize(s, p + 1, s.match[static_cast<std::size_t>(p)]));
                }
                if (colon + 1 < q) merge(out, summarize(s, colon + 1, q));
                continue;
            }
            // Shorthand `{ email }` or a default in a pattern `{ email = x }`.
            if (s[p].kind == TokKind::identifier) out.expr.mentions.push_back({s[p].text});
            int eq = find_top(s, p, q, "=");
            if (eq > p && eq + 1 < q) merge(out, summarize(s, eq + 1, q));
        }
    }

    struct ChainResult {
        int end = 0;
        Chain names;
        std::vector<CallInfo> calls;
        bool ends_with_call = false;
    };

    // `get<Coordinates>(` in TypeScript: index just past the closing `>`, or i
    // when the tokens cannot be type arguments (so `a < b` stays a comparison).
    static int skip_type_arguments(const Seq& s, int i, int e) {
        int depth = 0;
        for (int k = i; k < e; ++k) {
            const Token& t = s[k];
            if (t.is("<")) {
                ++depth;
            } else if (t.is(">") || t.is(">>") || t.is(">>>")) {
                depth -= static_cast<int>(t.text.size());
                if (depth < 0) return i;
                if (depth == 0) return k + 1;
            } else if (t.is("{") || t.is("[") || t.is("(")) {
                k = s.match[static_cast<std::size_t>(k)];
                if (k < 0) return i;
            } else if (t.kind != TokKind::identifier && !t.is(".") && !t.is(",") && !t.is("|") && !t.is("&") &&
                       !t.is("?") && !t.is("=>") && t.kind != TokKind::string) {
                return i;
            }
        }
        return i;
    }

    ChainResult parse_chain(Seq& s, int i, int e, bool is_new, Summary& out) {
        ChainResult r;
        int start = i;
        if (s[i].kind == TokKind::identifier) r.names.push_back(s[i++].text);
        std::vector<Chain> recv;
        std::size_t names_at_last_call = 0;
        bool base_recorded = false;

        while (i < e) {
            const Token& t = s[i];
            if ((t.is(".") || t.is("?.") || t.is("::")) && i + 1 < e) {
                int k = i + 1;
                if (s[k].is("#") && k + 1 < e) ++k;
                if (s[k].kind == TokKind::identifier) {
                    r.names.push_back(s[k].text);
                    i = k + 1;
                    r.ends_with_call = false;
                    continue;
                }
                if (t.is("?.") && (s[k].is("(") || s[k].is("["))) {
                    i = k;
                    continue;
                }
                break;
            }
            if (t.is("!") && js() && !t.newline_before && i + 1 < e &&
                (s[i + 1].is(".") || s[i + 1].is("?.") || s[i + 1].is("["))) {
                ++i;
                continue;
            }
            if (t.is("<") && lang_ == Language::typescript) {
                int k = skip_type_arguments(s, i, e);
                if (k > i && k < e && s[k].is("(")) {
                    i = k;
                    continue;
                }
            }
            if (t.is("(") && !(t.newline_before && js() && false)) {
                int close = s.match[static_cast<std::size_t>(i)];
                CallInfo ci;
                ci.callee = r.names.empty() ? Chain{"<expr>"} : r.names;
                ci.is_new = is_new && r.calls.empty();
                ci.receiver_mentions = recv;
                ci.base_len = r.calls.empty() ? (r.names.empty() ? 0 : r.names.size() - 1) : r.calls.front().base_len;
                ci.first = start;
                ci.last = close;
                for (auto [ab, ae] : split_commas(s, i + 1, close)) {
                    if (ab >= ae) continue;
                    Summary sub = summarize(s, ab, ae);
                    ci.args.push_back(sub.expr);
                    ci.arg_mentions.insert(ci.arg_mentions.end(), sub.expr.mentions.begin(), sub.expr.mentions.end());
                    merge(out, std::move(sub));
                }
                if (!base_recorded) {
                    if (r.names.size() > 1) out.expr.mentions.push_back(Chain(r.names.begin(), r.names.end() - 1));
                    base_recorded = true;
                }
                if ((ci.callee == Chain{"require"} || ci.callee == Chain{"import"}) && !ci.args.empty() &&
                    ci.args.front().kind == ExprKind::literal)
                    unit_.imports.push_back(ci.args.front().literal);
                recv.insert(recv.end(), ci.arg_mentions.begin(), ci.arg_mentions.end());
                out.expr.calls.push_back(ci.callee);
                r.calls.push_back(std::move(ci));
                names_at_last_call = r.names.size();
                r.ends_with_call = true;
                i = close + 1;
                continue;
            }
            if (t.is("[") && !(js() && t.newline_before)) {
                int close = s.match[static_cast<std::size_t>(i)];
                Summary sub = summarize(s, i + 1, close);
                recv.insert(recv.end(), sub.expr.mentions.begin(), sub.expr.mentions.end());
                merge(out, std::move(sub));
                r.ends_with_call = false;
                i = close + 1;
                continue;
            }
            break;
        }
        r.end = i;

        if (!r.ends_with_call) {
            if (r.calls.empty()) {
                if (!r.names.empty()) out.expr.mentions.push_back(r.names);
            } else if (r.names.size() > names_at_last_call) {
                out.expr.mentions.push_back(Chain(r.names.begin() + static_cast<long>(names_at_last_call), r.names.end()));
            }
        }
        return r;
    }

    Summary summarize(Seq& s, int b, int e) {
        Seq* saved = current_;
        current_ = &s;
        Summary out;
        int operands = 0;
        bool compound = false;
        bool expect_operand = true;
        bool pending_new = false;
        ExprKind single_kind = ExprKind::opaque;
        Chain single_chain;
        std::string single_literal;
        std::vector<CallInfo> finals;
        std::optional<Summary> group_passthrough;

        int i = b;
        while (i < e) {
            if (s.opaque_end[static_cast<std::size_t>(i)] >= 0) {
                ++operands;
                single_kind = ExprKind::opaque;
                i = s.opaque_end[static_cast<std::size_t>(i)];
                expect_operand = false;
                continue;
            }
            const Token& t = s[i];
            switch (t.kind) {
                case TokKind::punct: {
                    if (t.is("(")) {
                        int close = s.match[static_cast<std::size_t>(i)];
                        if (is_java_cast(s, i, e)) {
                            i = close + 1;
                            continue;
                        }
                        Summary inner = summarize(s, i + 1, close);
                        ++operands;
                        expect_operand = false;
                        bool postfix = close + 1 < e && (s[close + 1].is(".") || s[close + 1].is("?.") ||
                                                         s[close + 1].is("(") || s[close + 1].is("["));
                        if (postfix) {
                            single_kind = ExprKind::opaque;
                            merge(out, std::move(inner));
                            ChainResult r = parse_chain(s, close + 1, e, false, out);
                            // parse_chain starts from a non-identifier: re-anchor the first call span.
                            for (auto& c : r.calls) c.first = i;
                            take_chain(r, out, finals, single_kind, single_chain);
                            i = r.end;
                        } else {
                            if (inner.top || inner.expr.kind != ExprKind::opaque) {
                                single_kind = inner.expr.kind;
                                single_chain = inner.expr.chain;
                                single_literal = inner.expr.literal;
                            } else {
                                single_kind = ExprKind::opaque;
                            }
                            group_passthrough = std::move(inner);
                            i = close + 1;
                        }
                        continue;
                    }
                    if (t.is("[")) {
                        int close = s.match[static_cast<std::size_t>(i)];
                        for (auto [ab, ae] : split_commas(s, i + 1, close))
                            if (ab < ae) merge(out, summarize(s, ab, ae));
                        ++operands;
                        single_kind = ExprKind::opaque;
                        expect_operand = false;
                        i = close + 1;
                        continue;
                    }
                    if (t.is("{")) {
                        int close = s.match[static_cast<std::size_t>(i)];
                        object_literal(s, i + 1, close, out);
                        ++operands;
                        single_kind = ExprKind::opaque;
                        expect_operand = false;
                        i = close + 1;
                        continue;
                    }
                    bool prefix = expect_operand && (t.is("!") || t.is("~") || t.is("...") || t.is("+") ||
                                                     t.is("-") || t.is("++") || t.is("--"));
                    bool postfix_incdec = !expect_operand && (t.is("++") || t.is("--"));
                    bool ts_non_null = !expect_operand && t.is("!") && js();
                    if (!prefix && !postfix_incdec && !ts_non_null) {
                        compound = true;
                        expect_operand = true;
                    }
                    ++i;
                    continue;
                }
                case TokKind::identifier: {
                    const std::string& w = t.text;
                    if (w == "new") {
                        pending_new = true;
                        ++i;
                        continue;
                    }
                    if (kPrefixWords.contains(w) && expect_operand) {
                        ++i;
                        continue;
                    }
                    if (!expect_operand && (w == "as" || w == "satisfies")) {
                        // Skip the type.
                        ++i;
                        while (i < e && (s[i].kind == TokKind::identifier || s[i].is(".") || s[i].is("<") ||
                                         s[i].is(">") || s[i].is("[") || s[i].is("]"))) {
                            if (s[i].is("[")) i = s.match[static_cast<std::size_t>(i)];
                            ++i;
                        }
                        continue;
                    }
                    if (w == "instanceof" || w == "in" || w == "of") {
                        compound = true;
                        expect_operand = true;
                        ++i;
                        continue;
                    }
                    ++operands;
                    expect_operand = false;
                    if (kLiteralWords.contains(w)) {
                        single_kind = ExprKind::literal;
                        single_literal = w;
                        ++i;
                        continue;
                    }
                    ChainResult r = parse_chain(s, i, e, pending_new, out);
                    pending_new = false;
                    take_chain(r, out, finals, single_kind, single_chain);
                    i = std::max(r.end, i + 1);
                    continue;
                }
                case TokKind::template_string: {
                    for (const auto& part : t.parts) {
                        auto ps = make_seq(part);
                        if (!ps) throw ParseError{"unbalanced template interpolation"};
                        extract_functions(*ps, 0, ps->size());
                        Summary sub = summarize(*ps, 0, ps->size());
                        // Convert the part's top call while its sequence is alive.
                        if (sub.top) {
                            sub.inner.push_back(call_stmt_from(*ps, *sub.top));
                            sub.top.reset();
                        }
                        merge(out, std::move(sub));
                    }
                    current_ = &s;
                    [[fallthrough]];
                }
                case TokKind::string:
                case TokKind::number:
                case TokKind::regex:
                    ++operands;
                    expect_operand = false;
                    single_kind = ExprKind::literal;
                    single_literal = t.text;
                    ++i;
                    continue;
            }
        }

        if (operands == 1 && !compound) {
            if (group_passthrough) {
                Summary g = std::move(*group_passthrough);
                auto mentions = std::move(out.expr.mentions);
                out.expr = std::move(g.expr);
                out.expr.mentions.insert(out.expr.mentions.end(), mentions.begin(), mentions.end());
                for (auto& st : g.inner) out.inner.push_back(std::move(st));
                out.top = std::move(g.top);
            } else {
                out.expr.kind = single_kind;
                if (single_kind == ExprKind::chain || single_kind == ExprKind::call) out.expr.chain = single_chain;
                if (single_kind == ExprKind::literal) out.expr.literal = single_literal;
                if (single_kind == ExprKind::call && !finals.empty()) {
                    out.top = std::move(finals.back());
                    finals.pop_back();
                }
            }
        } else {
            out.expr.kind = ExprKind::opaque;
            if (group_passthrough) merge(out, std::move(*group_passthrough));
        }
        for (auto& ci : finals) out.inner.push_back(call_stmt_from(s, ci));
        current_ = saved;
        return out;
    }

    void take_chain(ChainResult& r, Summary& out, std::vector<CallInfo>& finals, ExprKind& single_kind,
                    Chain& single_chain) {
        std::size_t n = r.calls.size();
        for (std::size_t k = 0; k < n; ++k) {
            bool last = k + 1 == n;
            if (last && r.ends_with_call) {
                finals.push_back(std::move(r.calls[k]));
            } else {
                out.inner.push_back(call_stmt_from(*current_, r.calls[k]));
            }
        }
        if (r.ends_with_call) {
            single_kind = ExprKind::call;
            single_chain = finals.back().callee;
        } else {
            single_kind = r.calls.empty() && !r.names.empty() ? ExprKind::chain : ExprKind::opaque;
            single_chain = r.names;
        }
    }

    std::string_view src_;
    Language lang_;
    NormalizedUnit& unit_;
    Seq* current_ = nullptr;
};

void collect_identifiers(const std::vector<Token>& toks, std::vector<IdentifierToken>& out) {
    for (const auto& t : toks) {
        if (t.kind == TokKind::identifier) out.push_back({t.text, t.line});
        for (const auto& part : t.parts) collect_identifiers(part, out);
    }
}

bool looks_minified(const std::string& content) {
    if (content.size() > kTaintMaxBytes) return true;
    std::size_t line_start = 0;
    while (line_start <= content.size()) {
        auto nl = content.find('\n', line_start);
        std::size_t len = (nl == std::string::npos ? content.size() : nl) - line_start;
        if (len > kTaintMaxLineLength) return true;
        if (nl == std::string::npos) break;
        line_start = nl + 1;
    }
    return false;
}

int count_lines(const std::string& content) {
    if (content.empty()) return 0;
    int n = static_cast<int>(std::count(content.begin(), content.end(), '\n'));
    return content.back() == '\n' ? n : n + 1;
}

}  // namespace

std::string_view to_string(LiteralContext ctx) { return ctx == LiteralContext::string ? "string" : "comment"; }

std::string join_chain(const Chain& chain) {
    std::string out;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (i) out += '.';
        out += chain[i];
    }
    return out;
}

Chain Stmt::receiver() const {
    if (callee.size() <= 1) return {};
    return Chain(callee.begin(), callee.end() - 1);
}

Chain Stmt::base_object() const {
    return Chain(callee.begin(), callee.begin() + static_cast<long>(std::min(base_len, callee.size())));
}

namespace {
void flatten_into(const Block& block, std::vector<const Stmt*>& out) {
    for (const auto& node : block.nodes) {
        if (const auto* st = std::get_if<Stmt>(&node.value)) {
            out.push_back(st);
            for (const auto& in : st->inner) out.push_back(&in);
        } else {
            for (const auto& arm : std::get<Branch>(node.value).arms) flatten_into(arm, out);
        }
    }
}
}  // namespace

std::vector<const Stmt*> flatten(const Block& block) {
    std::vector<const Stmt*> out;
    flatten_into(block, out);
    return out;
}

std::vector<const Stmt*> flatten(const FunctionScope& scope) { return flatten(scope.body); }

NormalizedUnit parse_file(const SourceFile& file) {
    NormalizedUnit unit;
    unit.file = file.path;
    unit.language = file.language;
    unit.line_count = count_lines(file.content);
    unit.top_level.name = "<top>";
    unit.top_level.span = {1, std::max(1, unit.line_count)};
    if (file.lossy_utf8) unit.notes.push_back("invalid UTF-8 replaced");

    if (file.language == Language::unknown) {
        // Plain text: every non-blank line is a literal for the cleartext scan.
        unit.parse_quality = ParseQuality::tokens_only;
        unit.notes.push_back("no grammar for this file type; cleartext scan only");
        int line = 1;
        std::size_t start = 0;
        const std::string& c = file.content;
        while (start < c.size()) {
            auto nl = c.find('\n', start);
            std::size_t end = nl == std::string::npos ? c.size() : nl;
            std::string text = c.substr(start, end - start);
            if (text.find_first_not_of(" \t\r") != std::string::npos)
                unit.literals.push_back({std::move(text), {line, line}, LiteralContext::string});
            ++line;
            if (nl == std::string::npos) break;
            start = nl + 1;
        }
        return unit;
    }

    LexResult lexed = lex(file.content, file.language);
    unit.literals = std::move(lexed.literals);
    collect_identifiers(lexed.tokens, unit.identifiers);

    auto degrade = [&](std::string why) {
        unit.parse_quality = ParseQuality::tokens_only;
        unit.notes.push_back(std::move(why));
        unit.functions.clear();
        unit.top_level.body.nodes.clear();
    };

    if (!lexed.errors.empty()) {
        degrade("lexical error, " + lexed.errors.front());
        return unit;
    }
    if (looks_minified(file.content)) {
        degrade("generated or minified file; flow analysis skipped");
        return unit;
    }
    auto seq = make_seq(lexed.tokens);
    if (!seq) {
        degrade("unbalanced brackets");
        return unit;
    }
    try {
        Parser parser(file.content, file.language, unit);
        parser.parse_program(*seq);
    } catch (const ParseError& err) {
        degrade("syntax error: " + err.what);
        return unit;
    }
    std::stable_sort(unit.functions.begin(), unit.functions.end(), [](const auto& a, const auto& b) {
        return a.span.start < b.span.start;
    });
    std::sort(unit.imports.begin(), unit.imports.end());
    unit.imports.erase(std::unique(unit.imports.begin(), unit.imports.end()), unit.imports.end());
    return unit;
}

}  // namespace privlens
