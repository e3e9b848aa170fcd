#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace privlens {

enum class Language { javascript, typescript, java, unknown };

std::string_view to_string(Language lang);
Language language_from_path(std::string_view path);

/// Inclusive, 1-based line range.
struct LineSpan {
    int start = 0;
    int end = 0;

    bool contains(const LineSpan& other) const { return start <= other.start && other.end <= end; }
    bool operator==(const LineSpan&) const = default;
    auto operator<=>(const LineSpan&) const = default;
};

struct SourceFile {
    std::string path;  // relative to the scan root, '/' separated
    std::string content;
    Language language = Language::unknown;
    bool lossy_utf8 = false;  // invalid sequences were replaced with U+FFFD
};

/// Dotted access path, e.g. {"req", "body", "email"}.
using Chain = std::vector<std::string>;

std::string join_chain(const Chain& chain);

enum class ExprKind { chain, literal, call, opaque };

/// What an expression looks like from a privacy point of view: the value paths it
/// reads, the functions it calls, and nothing else.
struct ExprSummary {
    ExprKind kind = ExprKind::opaque;
    Chain chain;                // the path for `chain`, the callee for `call`
    std::string literal;        // literal text for `literal`
    std::vector<Chain> mentions;  // value paths read anywhere inside
    std::vector<Chain> calls;     // callee paths of every call inside

    bool operator==(const ExprSummary&) const = default;
};

enum class StmtKind { assignment, call, other };

struct Stmt {
    StmtKind kind = StmtKind::other;
    std::vector<Chain> targets;  // assignment targets; destructuring may bind several
    bool compound = false;       // `+=` and friends keep the previous value
    Chain callee;                // set when the statement's top expression is a call
    bool constructor_call = false;
    std::vector<Chain> receiver_mentions;  // paths read by intermediate calls/indexes of the callee chain
    std::size_t base_len = 0;  // callee elements before the first call of a chain: 1 for sb.append(a).append(b)
    std::vector<ExprSummary> args;
    ExprSummary value;  // the right-hand side, or the whole expression
    LineSpan span;
    std::size_t offset = 0;  // byte offset of the first token
    std::string text;
    std::vector<Stmt> inner;  // calls nested inside this statement, evaluated before it

    const Chain* lhs() const { return targets.empty() ? nullptr : &targets.front(); }
    bool has_callee() const { return !callee.empty(); }
    /// callee minus its final member name.
    Chain receiver() const;
    /// The object a call chain starts from: `sb` in sb.append(a).append(b).
    Chain base_object() const;
    const std::string& callee_name() const { return callee.back(); }
};

struct Node;

struct Block {
    std::vector<Node> nodes;
};

/// Conditional or loop. Arms are alternative paths; a loop has its body and an
/// empty arm.
struct Branch {
    std::vector<Block> arms;
    bool loop = false;
    LineSpan span;
};

struct Node {
    std::variant<Stmt, Branch> value;
};

struct Param {
    std::string name;
    int line = 0;
};

struct FunctionScope {
    std::string name;
    std::vector<Param> params;
    Block body;
    LineSpan span;
};

/// Statements of a scope in start-position order, nested calls after their parent.
std::vector<const Stmt*> flatten(const FunctionScope& scope);
std::vector<const Stmt*> flatten(const Block& block);

enum class LiteralContext { string, comment };
std::string_view to_string(LiteralContext ctx);

struct Literal {
    std::string text;
    LineSpan span;
    LiteralContext context = LiteralContext::string;
};

struct IdentifierToken {
    std::string name;
    int line = 0;
};

enum class ParseQuality { full, tokens_only };

struct NormalizedUnit {
    std::string file;
    Language language = Language::unknown;
    std::vector<FunctionScope> functions;
    FunctionScope top_level;
    std::vector<Literal> literals;
    std::vector<IdentifierToken> identifiers;
    std::vector<std::string> imports;  // module specifiers seen in import/require
    ParseQuality parse_quality = ParseQuality::full;
    std::vector<std::string> notes;
    int line_count = 0;
};

}  // namespace privlens
