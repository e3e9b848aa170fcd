#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <boost/regex.hpp>

#include "privlens/ruleset.hpp"
#include "privlens/unit.hpp"

namespace privlens {

struct CleartextMatcher {
    std::string category;
    std::string pattern_name;
    boost::regex regex;
    Validator validator = Validator::none;
};

/// Verbatim personal data found inside a string literal or comment.
struct OccurrenceFinding {
    std::string file;
    LineSpan span;
    std::string matched;  // masked unless the caller asked for raw text
    std::string category;
    std::string pattern_name;
    LiteralContext context = LiteralContext::string;

    bool operator==(const OccurrenceFinding&) const = default;
};

struct CleartextResult {
    std::vector<OccurrenceFinding> findings;
    std::vector<std::string> warnings;
};

struct CleartextOptions {
    bool mask = true;
};

/// Runs every cleartext matcher over every literal of the unit. Matches that
/// fail their validator are dropped. Output is ordered by (line, pattern name).
CleartextResult scan_literals(const NormalizedUnit& unit, const CompiledRuleSet& rules,
                              const CleartextOptions& options = {});

/// Keeps the first 3 and last 2 characters; anything shorter than 8 characters
/// is starred out entirely.
std::string mask_text(std::string_view raw);

/// Replaces every cleartext match inside `text` with its masked form.
std::string mask_snippet(std::string_view text, const CompiledRuleSet& rules);

bool luhn_valid(std::string_view digits_with_separators);
bool email_syntax_valid(std::string_view email);

}  // namespace privlens
