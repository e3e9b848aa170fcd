#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace privlens {

/// Raised for any problem with a rule document: I/O, schema, invariants, regex.
/// The message always carries the offending field path or pattern name.
class RuleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SourceKind { fixed, contextual };
enum class Validator { none, luhn, email_syntax };

std::string_view to_string(SourceKind kind);
std::string_view to_string(Validator validator);

struct CleartextPatternSpec {
    std::string name;
    std::string regex;
    Validator validator = Validator::none;

    bool operator==(const CleartextPatternSpec&) const = default;
};

struct SourceCategorySpec {
    std::string name;
    SourceKind kind = SourceKind::contextual;
    std::vector<std::string> keywords;
    std::vector<CleartextPatternSpec> cleartext_patterns;
    bool extension = false;

    bool operator==(const SourceCategorySpec&) const = default;
};

struct SinkCategorySpec {
    std::string name;
    std::vector<std::string> verbs;
    std::string description;
    bool extension = false;

    bool operator==(const SinkCategorySpec&) const = default;
};

struct ApiSpec {
    std::string library;
    std::vector<std::string> member_patterns;
    std::string sink_category;

    bool operator==(const ApiSpec&) const = default;
};

struct RuleSpec {
    int version = 1;
    std::vector<SourceCategorySpec> sources;
    std::vector<SinkCategorySpec> sinks;
    std::vector<ApiSpec> apis;

    bool operator==(const RuleSpec&) const = default;
};

/// The closed sink alphabet, in report column order.
inline constexpr std::string_view kSinkAlphabet[] = {"M", "T", "C/D", "DB", "E", "L"};

/// Built-in source categories that must be declared `fixed`.
inline constexpr std::string_view kFixedCategories[] = {"account", "contact", "national_id",
                                                         "personal_id"};
/// Built-in source categories that must be declared `contextual`.
inline constexpr std::string_view kContextualCategories[] = {
    "online_id", "location", "health", "financial", "credentials"};

bool is_sink_name(std::string_view name);

RuleSpec parse_rules(std::string_view json_text);
RuleSpec load_rules(const std::filesystem::path& path);
/// Canonical JSON form. Stable across runs; used for fingerprinting.
std::string serialize_rules(const RuleSpec& spec);
/// Throws RuleError on the first violated invariant.
void validate_rules(const RuleSpec& spec);

/// Text of the bundled rule document.
std::string_view default_rules_text();
RuleSpec default_rules();

/// Adds a keyword-only source category. Returns a new spec; `spec` is untouched.
RuleSpec extend_with_custom_category(const RuleSpec& spec, std::string_view name,
                                     std::vector<std::string> keywords, SourceKind kind);

struct CleartextMatcher;

struct ApiHit {
    std::string library;
    std::string member_pattern;
    std::string sink_category;
};

/// Immutable matchers compiled from a RuleSpec. Safe to share across threads.
class CompiledRuleSet {
public:
    CompiledRuleSet(const CompiledRuleSet&) = default;
    CompiledRuleSet(CompiledRuleSet&&) noexcept = default;
    CompiledRuleSet& operator=(const CompiledRuleSet&) = default;
    CompiledRuleSet& operator=(CompiledRuleSet&&) noexcept = default;
    ~CompiledRuleSet();

    /// First category in rule order whose keyword equals a token or a run of up
    /// to three consecutive tokens joined together ("first"+"name" = "firstname").
    std::optional<std::string> source_category_of_tokens(std::span<const std::string> tokens) const;
    std::optional<std::string> source_category_of(std::string_view identifier) const;
    /// True when `category` accepts the identifier.
    bool category_accepts(std::string_view category, std::string_view identifier) const;

    /// Sink category of a single lowercase verb token.
    std::optional<std::string> sink_category_of_verb(std::string_view verb) const;
    /// API match on a member name, restricted to libraries in `libraries_in_scope`.
    std::optional<ApiHit> api_match(std::span<const std::string> member_tokens,
                                    std::span<const std::string> libraries_in_scope) const;

    const std::vector<CleartextMatcher>& cleartext_matchers() const { return *cleartext_; }
    const std::vector<ApiSpec>& apis() const { return apis_; }

    /// Source category names in rule order.
    const std::vector<std::string>& source_categories() const { return source_order_; }
    /// Sink category names in rule order.
    const std::vector<std::string>& sink_categories() const { return sink_order_; }
    bool has_source_category(std::string_view name) const;
    bool has_sink_category(std::string_view name) const;

    /// Keywords of every category, ascending by category name.
    std::vector<std::pair<std::string, std::vector<std::string>>> keyword_table() const;

private:
    friend CompiledRuleSet compile_rules(const RuleSpec& spec);
    CompiledRuleSet() = default;

    struct SourceMatcher {
        std::string name;
        std::vector<std::string> keywords;  // sorted, unique
        bool accepts(std::string_view word) const;
    };
    struct VerbEntry {
        std::string verb;
        std::string category;
    };

    std::vector<SourceMatcher> sources_;  // rule order
    std::vector<VerbEntry> verbs_;        // sorted by verb; first category wins on duplicates
    std::vector<ApiSpec> apis_;
    std::vector<std::string> source_order_;
    std::vector<std::string> sink_order_;
    std::shared_ptr<const std::vector<CleartextMatcher>> cleartext_;
};

/// Throws RuleError naming the pattern when a cleartext regex does not compile.
CompiledRuleSet compile_rules(const RuleSpec& spec);

}  // namespace privlens
