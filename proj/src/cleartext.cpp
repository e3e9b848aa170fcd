#include "privlens/cleartext.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <tuple>

namespace privlens {

std::string mask_text(std::string_view raw) {
    if (raw.size() < 8) return std::string(raw.size(), '*');
    std::string out(raw);
    for (std::size_t i = 3; i + 2 < out.size(); ++i) out[i] = '*';
    return out;
}

bool luhn_valid(std::string_view text) {
    std::string digits;
    for (char c : text) {
        if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
        else if (c != ' ' && c != '-') return false;
    }
    if (digits.size() < 13 || digits.size() > 19) return false;
    int sum = 0;
    bool dbl = false;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        int d = *it - '0';
        if (dbl) {
            d *= 2;
            if (d > 9) d -= 9;
        }
        sum += d;
        dbl = !dbl;
    }
    return sum % 10 == 0;
}

bool email_syntax_valid(std::string_view email) {
    auto at = email.find('@');
    if (at == std::string_view::npos || at == 0 || email.find('@', at + 1) != std::string_view::npos)
        return false;
    auto local = email.substr(0, at);
    auto domain = email.substr(at + 1);
    if (local.size() > 64 || local.front() == '.' || local.back() == '.' ||
        local.find("..") != std::string_view::npos)
        return false;
    if (domain.size() < 4 || domain.size() > 253 || domain.find("..") != std::string_view::npos) return false;
    auto dot = domain.rfind('.');
    if (dot == std::string_view::npos || dot == 0) return false;
    // Each label: alphanumerics and inner hyphens.
    std::size_t start = 0;
    while (start <= domain.size()) {
        auto end = domain.find('.', start);
        auto label = domain.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        if (label.empty() || label.size() > 63 || label.front() == '-' || label.back() == '-') return false;
        for (char c : label)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-') return false;
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    auto tld = domain.substr(dot + 1);
    return tld.size() >= 2 && std::all_of(tld.begin(), tld.end(), [](char c) {
               return std::isalpha(static_cast<unsigned char>(c));
           });
}

namespace {

bool validate(Validator v, std::string_view text) {
    switch (v) {
        case Validator::none: return true;
        case Validator::luhn: return luhn_valid(text);
        case Validator::email_syntax: return email_syntax_valid(text);
    }
    return true;
}

struct RawMatch {
    std::size_t pos;
    std::size_t len;
    const CleartextMatcher* matcher;
};

std::vector<RawMatch> find_matches(std::string_view text, const std::vector<CleartextMatcher>& matchers,
                                   std::vector<std::string>* errors) {
    std::vector<RawMatch> out;
    for (const auto& m : matchers) {
        try {
            boost::cregex_iterator it(text.data(), text.data() + text.size(), m.regex);
            for (; it != boost::cregex_iterator(); ++it) {
                const auto& hit = (*it)[0];
                if (hit.length() == 0) continue;
                std::string_view found(hit.first, static_cast<std::size_t>(hit.length()));
                if (!validate(m.validator, found)) continue;
                out.push_back({static_cast<std::size_t>(hit.first - text.data()), found.size(), &m});
            }
        } catch (const std::runtime_error& err) {
            if (errors) errors->push_back(m.category + "/" + m.pattern_name + ": " + err.what());
        }
    }
    return out;
}

}  // namespace

CleartextResult scan_literals(const NormalizedUnit& unit, const CompiledRuleSet& rules,
                              const CleartextOptions& options) {
    CleartextResult result;
    const auto& matchers = rules.cleartext_matchers();
    struct Keyed {
        std::size_t order;
        OccurrenceFinding f;
    };
    std::vector<Keyed> keyed;
    std::size_t order = 0;
    for (const auto& lit : unit.literals) {
        std::vector<std::string> errors;
        for (const auto& hit : find_matches(lit.text, matchers, &errors)) {
            std::string_view raw(lit.text.data() + hit.pos, hit.len);
            auto before = std::count(lit.text.begin(), lit.text.begin() + static_cast<long>(hit.pos), '\n');
            auto within = std::count(raw.begin(), raw.end(), '\n');
            OccurrenceFinding f;
            f.file = unit.file;
            f.span.start = lit.span.start + static_cast<int>(before);
            f.span.end = f.span.start + static_cast<int>(within);
            f.matched = options.mask ? mask_text(raw) : std::string(raw);
            f.category = hit.matcher->category;
            f.pattern_name = hit.matcher->pattern_name;
            f.context = lit.context;
            keyed.push_back({order++, std::move(f)});
        }
        for (auto& e : errors)
            result.warnings.push_back(unit.file + ":" + std::to_string(lit.span.start) +
                                      ": pattern skipped, " + e);
    }
    std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        return std::tie(a.f.span.start, a.f.pattern_name) < std::tie(b.f.span.start, b.f.pattern_name);
    });
    result.findings.reserve(keyed.size());
    for (auto& k : keyed) result.findings.push_back(std::move(k.f));
    return result;
}

std::string mask_snippet(std::string_view text, const CompiledRuleSet& rules) {
    auto hits = find_matches(text, rules.cleartext_matchers(), nullptr);
    if (hits.empty()) return std::string(text);
    std::sort(hits.begin(), hits.end(), [](const RawMatch& a, const RawMatch& b) {
        return a.pos != b.pos ? a.pos < b.pos : a.len > b.len;
    });
    std::string out;
    std::size_t cursor = 0;
    for (const auto& h : hits) {
        if (h.pos < cursor) continue;  // overlaps an earlier, already masked match
        out.append(text.substr(cursor, h.pos - cursor));
        out += mask_text(text.substr(h.pos, h.len));
        cursor = h.pos + h.len;
    }
    out.append(text.substr(cursor));
    return out;
}

}  // namespace privlens
