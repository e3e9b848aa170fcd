#include "oracles.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace oracle {

std::vector<std::string> tokens(const std::string& identifier) {
    static const std::regex word("[A-Z]+(?![a-z])|[A-Z]?[a-z]+|[0-9]+");
    std::vector<std::string> out;
    for (std::sregex_iterator it(identifier.begin(), identifier.end(), word), end; it != end; ++it) {
        std::string w = it->str();
        for (auto& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        out.push_back(w);
    }
    return out;
}

KeywordTable::KeywordTable(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    for (const auto& s : j.at("sources")) {
        std::set<std::string> kws;
        for (const auto& k : s.at("keywords")) kws.insert(k.get<std::string>());
        sources_.emplace_back(s.at("name").get<std::string>(), std::move(kws));
    }
    for (const auto& s : j.at("sinks")) {
        std::set<std::string> verbs;
        for (const auto& v : s.at("verbs")) verbs.insert(v.get<std::string>());
        sinks_.emplace_back(s.at("name").get<std::string>(), std::move(verbs));
    }
}

std::optional<std::string> KeywordTable::category_of(const std::string& identifier) const {
    auto t = tokens(identifier);
    // word -> number of tokens glued into it
    std::map<std::string, std::size_t> words;
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::string glued;
        for (std::size_t n = 0; n < 3 && i + n < t.size(); ++n) {
            glued += t[i + n];
            words[glued] = std::max(words[glued], n + 1);
        }
    }
    std::optional<std::string> best;
    std::size_t best_len = 0;
    for (const auto& [name, kws] : sources_)
        for (const auto& [w, len] : words)
            if (kws.contains(w) && len > best_len) {
                best = name;
                best_len = len;
            }
    return best;
}

std::optional<std::string> KeywordTable::verb_category(const std::string& verb) const {
    for (const auto& [name, verbs] : sinks_)
        if (verbs.contains(verb)) return name;
    return std::nullopt;
}

bool luhn(const std::string& digits) {
    static constexpr int kDoubled[10] = {0, 2, 4, 6, 8, 1, 3, 5, 7, 9};
    int sum = 0;
    int n = static_cast<int>(digits.size());
    for (int i = 0; i < n; ++i) {
        int d = digits[static_cast<std::size_t>(i)] - '0';
        bool doubled = (n - 1 - i) % 2 == 1;
        sum += doubled ? kDoubled[d] : d;
    }
    return sum % 10 == 0;
}

std::string make_luhn_valid(std::mt19937_64& rng, const std::string& prefix, std::size_t length) {
    std::uniform_int_distribution<int> digit(0, 9);
    std::string body = prefix;
    while (body.size() + 1 < length) body += static_cast<char>('0' + digit(rng));
    for (char check = '0'; check <= '9'; ++check)
        if (luhn(body + check)) return body + check;
    throw std::logic_error("no check digit");
}

int shape_from_table(bool assignment, bool lhs_source, bool receiver_source, bool source_args,
                     bool source_specific, int* rows_matched) {
    // Columns: assignment, lhs_source, receiver_source, source_args, source_specific.
    struct Row {
        int shape;
        const char* pattern;
    };
    static constexpr Row kRows[] = {
        {9, "***YY"},  // _.I^O(_, Ō)
        {8, "***NY"},  // _.I^O(_)
        {3, "YYY*N"},  // O2 = _.O1.I(_)
        {2, "YYNYN"},  // O2 = _.I(O1, _)
        {1, "YYNNN"},  // O = _.I(_)
        {4, "YNY*N"},  // _ = _.O.I(_)
        {5, "YNNYN"},  // _ = _.I(Ō, _)
        {7, "N*YYN"},  // _.O.I(_, Ō)
        {6, "N*YNN"},  // _.O.I(_)
        {10, "N*NYN"}, // _.I(Ō, _)
    };
    const bool v[5] = {assignment, lhs_source, receiver_source, source_args, source_specific};
    int found = 0;
    int matched = 0;
    for (const auto& row : kRows) {
        bool ok = true;
        for (int k = 0; k < 5 && ok; ++k) {
            char p = row.pattern[k];
            if (p == 'Y') ok = v[k];
            else if (p == 'N') ok = !v[k];
        }
        if (ok) {
            found = row.shape;
            ++matched;
        }
    }
    if (rows_matched) *rows_matched = matched;
    return found;
}

std::set<std::set<std::string>> neighbor_partition(const std::vector<Span>& spans, int threshold) {
    std::vector<std::size_t> parent(spans.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t a = 0; a < spans.size(); ++a)
        for (std::size_t b = 0; b < spans.size(); ++b) {
            if (a == b || spans[a].file != spans[b].file) continue;
            // Distance between two closed line ranges.
            int gap = 0;
            if (spans[a].end < spans[b].start) gap = spans[b].start - spans[a].end;
            else if (spans[b].end < spans[a].start) gap = spans[a].start - spans[b].end;
            if (gap <= threshold) parent[find(a)] = find(b);
        }
    std::map<std::size_t, std::set<std::string>> parts;
    for (std::size_t i = 0; i < spans.size(); ++i) parts[find(i)].insert(spans[i].id);
    std::set<std::set<std::string>> out;
    for (auto& [root, ids] : parts) out.insert(ids);
    return out;
}

std::string Program::source() const {
    std::string out;
    for (const auto& s : stmts) out += s.text + "\n";
    return out;
}

namespace {

const std::vector<std::string> kNeutral = {"a", "b", "c", "tmp", "data", "value"};
const std::vector<std::string> kSourceNamed = {"userEmail", "ssn", "lat", "cardNumber", "passportNo"};
const std::vector<std::string> kHelpers = {"combine", "wrap", "pick"};

struct SinkKind {
    const char* receiver;
    const char* method;
};
const std::vector<SinkKind> kSinks = {
    {"client", "send"}, {"store", "save"}, {"logger", "info"}, {"hasher", "hash"}, {"profile", "update"},
    {"repo", "delete"}};

}  // namespace

Program random_program(std::mt19937_64& rng, std::size_t max_statements) {
    auto pick = [&](const std::vector<std::string>& v) {
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    };
    auto var = [&] {
        return std::bernoulli_distribution(0.3)(rng) ? pick(kSourceNamed) : pick(kNeutral);
    };
    Program p;
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_statements)(rng);
    for (std::size_t i = 0; i < n; ++i) {
        ProgStmt s{};
        int kind = std::uniform_int_distribution<int>(0, 6)(rng);
        switch (kind) {
            case 0:
                s.kind = ProgStmt::copy;
                s.target = var();
                s.uses = {var()};
                s.text = s.target + " = " + s.uses[0] + ";";
                break;
            case 1:
                s.kind = ProgStmt::call_assign;
                s.target = var();
                s.method = pick(kHelpers);
                s.uses = {var(), var()};
                s.text = s.target + " = " + s.method + "(" + s.uses[0] + ", " + s.uses[1] + ");";
                break;
            case 2:
                s.kind = ProgStmt::literal;
                s.target = var();
                s.text = s.target + " = " + std::to_string(i) + ";";
                break;
            case 3:
                s.kind = ProgStmt::member;
                s.target = var();
                s.uses = {var()};
                s.text = s.target + " = " + s.uses[0] + ".field;";
                break;
            case 4:
                s.kind = ProgStmt::binary;
                s.target = var();
                s.uses = {var(), var()};
                s.text = s.target + " = " + s.uses[0] + " + " + s.uses[1] + ";";
                break;
            case 5:
            case 6: {
                const auto& sk = kSinks[std::uniform_int_distribution<std::size_t>(0, kSinks.size() - 1)(rng)];
                s.receiver = sk.receiver;
                s.method = sk.method;
                std::size_t nargs = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
                for (std::size_t k = 0; k < nargs; ++k) s.uses.push_back(var());
                std::string call = s.receiver + "." + s.method + "(";
                for (std::size_t k = 0; k < s.uses.size(); ++k) call += (k ? ", " : "") + s.uses[k];
                call += ")";
                if (kind == 6) {
                    s.kind = ProgStmt::sink_assign;
                    s.target = var();
                    s.text = s.target + " = " + call + ";";
                } else {
                    s.kind = ProgStmt::sink_call;
                    s.text = call + ";";
                }
                break;
            }
        }
        p.stmts.push_back(std::move(s));
    }
    return p;
}

std::set<ExpectedFlow> expected_flows(const Program& p, const KeywordTable& table) {
    // carries(v, i): categories a read of v at statement i carries.
    std::map<std::pair<std::string, std::size_t>, std::set<std::string>> memo;
    std::function<std::set<std::string>(const std::string&, std::size_t)> carries =
        [&](const std::string& v, std::size_t i) -> std::set<std::string> {
        auto key = std::make_pair(v, i);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::set<std::string> cats;
        if (auto own = table.category_of(v)) cats.insert(*own);
        for (std::size_t d = i; d-- > 0;) {
            if (p.stmts[d].target != v) continue;
            for (const auto& u : p.stmts[d].uses) {
                auto sub = carries(u, d);
                cats.insert(sub.begin(), sub.end());
            }
            break;  // only the last definition reaches i
        }
        memo[key] = cats;
        return cats;
    };

    std::set<ExpectedFlow> out;
    for (std::size_t i = 0; i < p.stmts.size(); ++i) {
        const auto& s = p.stmts[i];
        if (s.kind != ProgStmt::sink_call && s.kind != ProgStmt::sink_assign) continue;
        std::set<std::string> cats;
        for (const auto& u : s.uses) {
            auto c = carries(u, i);
            cats.insert(c.begin(), c.end());
        }
        // The receiver holds whatever earlier manipulation calls on it were given.
        for (std::size_t d = 0; d < i; ++d) {
            const auto& prev = p.stmts[d];
            if (prev.receiver != s.receiver || table.verb_category(prev.method) != "M") continue;
            for (const auto& u : prev.uses) {
                auto c = carries(u, d);
                cats.insert(c.begin(), c.end());
            }
        }
        if (s.kind == ProgStmt::sink_assign)
            if (auto own = table.category_of(s.target)) cats.insert(*own);
        if (cats.empty()) continue;
        auto sink = table.verb_category(s.method);
        out.emplace(static_cast<int>(i + 1), sink.value_or("?"), cats);
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace oracle
