#include "privlens/identifier.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace privlens {

namespace {

enum class CharClass { other, lower, upper, digit };

CharClass classify(char c) {
    auto u = static_cast<unsigned char>(c);
    if (std::islower(u)) return CharClass::lower;
    if (std::isupper(u)) return CharClass::upper;
    if (std::isdigit(u)) return CharClass::digit;
    return CharClass::other;
}

}  // namespace

std::vector<std::string> tokenize_identifier(std::string_view name) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
    };

    for (std::size_t i = 0; i < name.size(); ++i) {
        CharClass cls = classify(name[i]);
        if (cls == CharClass::other) {
            flush();
            continue;
        }
        if (!current.empty()) {
            CharClass prev = classify(name[i - 1]);
            bool boundary = false;
            if (cls == CharClass::upper && prev == CharClass::lower) boundary = true;
            if ((cls == CharClass::digit) != (prev == CharClass::digit)) boundary = true;
            // "HTTPServer": the S starts a new word because a lowercase letter follows it.
            if (cls == CharClass::upper && prev == CharClass::upper && i + 1 < name.size() &&
                classify(name[i + 1]) == CharClass::lower)
                boundary = true;
            if (boundary) flush();
        }
        current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(name[i]))));
    }
    flush();
    return tokens;
}

double token_jaccard(std::string_view a, std::string_view b) {
    auto ta = tokenize_identifier(a);
    auto tb = tokenize_identifier(b);
    std::set<std::string> sa(ta.begin(), ta.end());
    std::set<std::string> sb(tb.begin(), tb.end());
    if (sa.empty() && sb.empty()) return a == b ? 1.0 : 0.0;
    std::vector<std::string> common;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
    std::size_t uni = sa.size() + sb.size() - common.size();
    return static_cast<double>(common.size()) / static_cast<double>(uni);
}

}  // namespace privlens
