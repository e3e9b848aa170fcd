#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace privlens {

/// Splits an identifier into lowercase word tokens.
///
/// Boundaries: any non-alphanumeric character, lower-to-upper transitions,
/// letter/digit transitions, and the last capital of an acronym run when it
/// starts a new word ("XMLHttpRequest" -> xml, http, request).
std::vector<std::string> tokenize_identifier(std::string_view name);

/// Jaccard similarity of the token sets of two identifiers. Two identifiers
/// with no tokens at all compare as 1 when equal, 0 otherwise.
double token_jaccard(std::string_view a, std::string_view b);

}  // namespace privlens
