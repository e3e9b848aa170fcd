#include "privlens/ruleset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "privlens/cleartext.hpp"
#include "privlens/identifier.hpp"

namespace privlens {

namespace {

using nlohmann::ordered_json;

constexpr std::string_view kDefaultRules =
#include "default_rules.inc"
    ;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw RuleError(path.empty() ? what : path + ": " + what);
}

bool is_lower_token(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    });
}

bool is_category_name(std::string_view s) {
    if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    });
}

bool is_library_name(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
               c == '.' || c == '/' || c == '@';
    });
}

template <std::size_t N>
bool contains(const std::string_view (&names)[N], std::string_view name) {
    return std::find(std::begin(names), std::end(names), name) != std::end(names);
}

void check_keys(const ordered_json& obj, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail(path, "unknown key '" + key + "'");
    }
}

const ordered_json& require(const ordered_json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing required key '") + key + "'");
    return *it;
}

std::string get_string(const ordered_json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

std::vector<std::string> get_string_list(const ordered_json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(get_string(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

bool get_bool(const ordered_json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) return false;
    if (!it->is_boolean()) fail(path + "." + key, "expected a boolean");
    return it->get<bool>();
}

SourceKind parse_kind(const std::string& s, const std::string& path) {
    if (s == "fixed") return SourceKind::fixed;
    if (s == "contextual") return SourceKind::contextual;
    fail(path, "kind must be 'fixed' or 'contextual', got '" + s + "'");
}

Validator parse_validator(const std::string& s, const std::string& path) {
    if (s == "none") return Validator::none;
    if (s == "luhn") return Validator::luhn;
    if (s == "email-syntax") return Validator::email_syntax;
    fail(path, "validator must be one of luhn, email-syntax, none; got '" + s + "'");
}

boost::regex compile_regex(const CleartextPatternSpec& p, const std::string& category) {
    try {
        return boost::regex(p.regex, boost::regex::perl);
    } catch (const boost::regex_error& e) {
        throw RuleError("cleartext pattern '" + p.name + "' in source category '" + category +
                        "' does not compile: " + e.what());
    }
}

// Concatenations of 1..3 consecutive tokens, the unit a keyword is compared against.
template <typename Fn>
bool any_token_run(std::span<const std::string> tokens, Fn&& fn) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string run;
        for (std::size_t j = i; j < tokens.size() && j < i + 3; ++j) {
            run += tokens[j];
            if (fn(run)) return true;
        }
    }
    return false;
}

// Length in tokens of the longest run fn accepts, 0 when none does.
template <typename Fn>
std::size_t longest_token_run(std::span<const std::string> tokens, Fn&& fn) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string run;
        for (std::size_t j = i; j < tokens.size() && j < i + 3; ++j) {
            run += tokens[j];
            if (fn(run)) best = std::max(best, j - i + 1);
        }
    }
    return best;
}

}  // namespace

std::string_view to_string(SourceKind kind) {
    return kind == SourceKind::fixed ? "fixed" : "contextual";
}

std::string_view to_string(Validator validator) {
    switch (validator) {
        case Validator::luhn: return "luhn";
        case Validator::email_syntax: return "email-syntax";
        case Validator::none: break;
    }
    return "none";
}

bool is_sink_name(std::string_view name) { return contains(kSinkAlphabet, name); }

RuleSpec parse_rules(std::string_view json_text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw RuleError(std::string("rule document is not valid JSON: ") + e.what());
    }
    check_keys(doc, "", {"version", "sources", "sinks", "apis"});

    RuleSpec spec;
    const auto& version = require(doc, "", "version");
    if (!version.is_number_integer()) fail("version", "expected an integer");
    spec.version = version.get<int>();

    const auto& sources = require(doc, "", "sources");
    if (!sources.is_array()) fail("sources", "expected an array");
    for (std::size_t i = 0; i < sources.size(); ++i) {
        std::string path = "sources[" + std::to_string(i) + "]";
        const auto& s = sources[i];
        check_keys(s, path, {"name", "kind", "keywords", "cleartext_patterns", "extension"});
        SourceCategorySpec cat;
        cat.name = get_string(require(s, path, "name"), path + ".name");
        cat.kind = parse_kind(get_string(require(s, path, "kind"), path + ".kind"), path + ".kind");
        cat.keywords = get_string_list(require(s, path, "keywords"), path + ".keywords");
        cat.extension = get_bool(s, "extension", path);
        if (auto it = s.find("cleartext_patterns"); it != s.end()) {
            std::string ppath = path + ".cleartext_patterns";
            if (!it->is_array()) fail(ppath, "expected an array");
            for (std::size_t j = 0; j < it->size(); ++j) {
                std::string jpath = ppath + "[" + std::to_string(j) + "]";
                const auto& p = (*it)[j];
                check_keys(p, jpath, {"name", "regex", "validator"});
                CleartextPatternSpec pat;
                pat.name = get_string(require(p, jpath, "name"), jpath + ".name");
                pat.regex = get_string(require(p, jpath, "regex"), jpath + ".regex");
                if (auto v = p.find("validator"); v != p.end() && !v->is_null())
                    pat.validator = parse_validator(get_string(*v, jpath + ".validator"),
                                                    jpath + ".validator");
                cat.cleartext_patterns.push_back(std::move(pat));
            }
        }
        spec.sources.push_back(std::move(cat));
    }

    if (auto it = doc.find("sinks"); it != doc.end()) {
        if (!it->is_array()) fail("sinks", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            std::string path = "sinks[" + std::to_string(i) + "]";
            const auto& s = (*it)[i];
            check_keys(s, path, {"name", "verbs", "description", "extension"});
            SinkCategorySpec sink;
            sink.name = get_string(require(s, path, "name"), path + ".name");
            sink.verbs = get_string_list(require(s, path, "verbs"), path + ".verbs");
            if (auto d = s.find("description"); d != s.end())
                sink.description = get_string(*d, path + ".description");
            sink.extension = get_bool(s, "extension", path);
            spec.sinks.push_back(std::move(sink));
        }
    }

    if (auto it = doc.find("apis"); it != doc.end()) {
        if (!it->is_array()) fail("apis", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            std::string path = "apis[" + std::to_string(i) + "]";
            const auto& a = (*it)[i];
            check_keys(a, path, {"library", "member_patterns", "sink_category"});
            ApiSpec api;
            api.library = get_string(require(a, path, "library"), path + ".library");
            api.member_patterns =
                get_string_list(require(a, path, "member_patterns"), path + ".member_patterns");
            api.sink_category =
                get_string(require(a, path, "sink_category"), path + ".sink_category");
            spec.apis.push_back(std::move(api));
        }
    }

    validate_rules(spec);
    return spec;
}

RuleSpec load_rules(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuleError("cannot open rules file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_rules(buf.str());
    } catch (const RuleError& e) {
        throw RuleError(path.string() + ": " + e.what());
    }
}

void validate_rules(const RuleSpec& spec) {
    if (spec.version != 1)
        fail("version", "unsupported rules version " + std::to_string(spec.version));
    if (spec.sources.empty()) fail("sources", "at least one source category required");

    std::set<std::string> seen;
    for (std::size_t i = 0; i < spec.sources.size(); ++i) {
        const auto& s = spec.sources[i];
        std::string path = "sources[" + std::to_string(i) + "]";
        if (!is_category_name(s.name))
            fail(path + ".name", "category name must match [a-z][a-z0-9_]*, got '" + s.name + "'");
        if (!seen.insert(s.name).second) fail(path + ".name", "duplicate source category '" + s.name + "'");
        if (contains(kFixedCategories, s.name) && s.kind != SourceKind::fixed)
            fail(path + ".kind", "category '" + s.name + "' is a fixed category");
        if (contains(kContextualCategories, s.name) && s.kind != SourceKind::contextual)
            fail(path + ".kind", "category '" + s.name + "' is a contextual category");
        if (s.keywords.empty())
            fail(path + ".keywords", "source category '" + s.name + "' needs at least one keyword");
        for (std::size_t k = 0; k < s.keywords.size(); ++k) {
            if (!is_lower_token(s.keywords[k]))
                fail(path + ".keywords[" + std::to_string(k) + "]",
                     "keyword must be a lowercase alphanumeric token, got '" + s.keywords[k] + "'");
        }
        std::set<std::string> pattern_names;
        for (std::size_t p = 0; p < s.cleartext_patterns.size(); ++p) {
            const auto& pat = s.cleartext_patterns[p];
            std::string ppath = path + ".cleartext_patterns[" + std::to_string(p) + "]";
            if (pat.name.empty()) fail(ppath + ".name", "pattern name must not be empty");
            if (!pattern_names.insert(pat.name).second)
                fail(ppath + ".name", "duplicate pattern name '" + pat.name + "'");
            compile_regex(pat, s.name);
        }
    }

    std::set<std::string> sink_names;
    for (std::size_t i = 0; i < spec.sinks.size(); ++i) {
        const auto& s = spec.sinks[i];
        std::string path = "sinks[" + std::to_string(i) + "]";
        if (!is_sink_name(s.name))
            fail(path + ".name", "sink category must be one of M, T, C/D, DB, E, L; got '" + s.name + "'");
        if (!sink_names.insert(s.name).second) fail(path + ".name", "duplicate sink category '" + s.name + "'");
        if (s.verbs.empty()) fail(path + ".verbs", "sink category '" + s.name + "' needs at least one verb");
        for (std::size_t v = 0; v < s.verbs.size(); ++v) {
            if (!is_lower_token(s.verbs[v]))
                fail(path + ".verbs[" + std::to_string(v) + "]",
                     "verb must be a lowercase alphanumeric token, got '" + s.verbs[v] + "'");
        }
    }

    for (std::size_t i = 0; i < spec.apis.size(); ++i) {
        const auto& a = spec.apis[i];
        std::string path = "apis[" + std::to_string(i) + "]";
        if (!is_library_name(a.library)) fail(path + ".library", "invalid library name '" + a.library + "'");
        if (a.member_patterns.empty()) fail(path + ".member_patterns", "at least one member pattern required");
        for (std::size_t m = 0; m < a.member_patterns.size(); ++m) {
            if (!is_lower_token(a.member_patterns[m]))
                fail(path + ".member_patterns[" + std::to_string(m) + "]",
                     "member pattern must be a lowercase alphanumeric token");
        }
        if (!sink_names.contains(a.sink_category))
            fail(path + ".sink_category", "unknown sink category '" + a.sink_category + "'");
    }
}

std::string serialize_rules(const RuleSpec& spec) {
    ordered_json doc;
    doc["version"] = spec.version;
    doc["sources"] = ordered_json::array();
    for (const auto& s : spec.sources) {
        ordered_json cat;
        cat["name"] = s.name;
        cat["kind"] = to_string(s.kind);
        if (s.extension) cat["extension"] = true;
        cat["keywords"] = s.keywords;
        cat["cleartext_patterns"] = ordered_json::array();
        for (const auto& p : s.cleartext_patterns) {
            cat["cleartext_patterns"].push_back(
                {{"name", p.name}, {"regex", p.regex}, {"validator", to_string(p.validator)}});
        }
        doc["sources"].push_back(std::move(cat));
    }
    doc["sinks"] = ordered_json::array();
    for (const auto& s : spec.sinks) {
        ordered_json sink;
        sink["name"] = s.name;
        sink["description"] = s.description;
        if (s.extension) sink["extension"] = true;
        sink["verbs"] = s.verbs;
        doc["sinks"].push_back(std::move(sink));
    }
    doc["apis"] = ordered_json::array();
    for (const auto& a : spec.apis) {
        doc["apis"].push_back({{"library", a.library},
                               {"member_patterns", a.member_patterns},
                               {"sink_category", a.sink_category}});
    }
    return doc.dump(2) + "\n";
}

std::string_view default_rules_text() { return kDefaultRules; }

RuleSpec default_rules() { return parse_rules(kDefaultRules); }

RuleSpec extend_with_custom_category(const RuleSpec& spec, std::string_view name,
                                     std::vector<std::string> keywords, SourceKind kind) {
    for (const auto& s : spec.sources) {
        if (s.name == name) throw RuleError("duplicate source category '" + std::string(name) + "'");
    }
    if (keywords.empty())
        throw RuleError("custom category '" + std::string(name) + "' needs at least one keyword");

    RuleSpec out = spec;
    SourceCategorySpec cat;
    cat.name = std::string(name);
    cat.kind = kind;
    cat.keywords = std::move(keywords);
    cat.extension = true;
    out.sources.push_back(std::move(cat));
    validate_rules(out);
    return out;
}

// ---------------------------------------------------------------------------

CompiledRuleSet::~CompiledRuleSet() = default;

bool CompiledRuleSet::SourceMatcher::accepts(std::string_view word) const {
    return std::binary_search(keywords.begin(), keywords.end(), word);
}

std::optional<std::string> CompiledRuleSet::source_category_of_tokens(
    std::span<const std::string> tokens) const {
    // The most specific keyword wins (`ipAddress` is an online id, not an
    // address); equal lengths go to the earlier category.
    const SourceMatcher* best = nullptr;
    std::size_t best_len = 0;
    for (const auto& m : sources_) {
        std::size_t len = longest_token_run(tokens, [&](const std::string& run) { return m.accepts(run); });
        if (len > best_len) {
            best = &m;
            best_len = len;
        }
    }
    if (!best) return std::nullopt;
    return best->name;
}

std::optional<std::string> CompiledRuleSet::source_category_of(std::string_view identifier) const {
    auto tokens = tokenize_identifier(identifier);
    return source_category_of_tokens(tokens);
}

bool CompiledRuleSet::category_accepts(std::string_view category, std::string_view identifier) const {
    auto tokens = tokenize_identifier(identifier);
    for (const auto& m : sources_) {
        if (m.name != category) continue;
        return any_token_run(std::span<const std::string>(tokens),
                             [&](const std::string& run) { return m.accepts(run); });
    }
    return false;
}

std::optional<std::string> CompiledRuleSet::sink_category_of_verb(std::string_view verb) const {
    auto it = std::lower_bound(verbs_.begin(), verbs_.end(), verb,
                               [](const VerbEntry& e, std::string_view v) { return e.verb < v; });
    if (it != verbs_.end() && it->verb == verb) return it->category;
    return std::nullopt;
}

std::optional<ApiHit> CompiledRuleSet::api_match(std::span<const std::string> member_tokens,
                                                 std::span<const std::string> libraries_in_scope) const {
    if (member_tokens.empty()) return std::nullopt;
    for (const auto& api : apis_) {
        if (std::find(libraries_in_scope.begin(), libraries_in_scope.end(), api.library) ==
            libraries_in_scope.end())
            continue;
        // A pattern matches the leading token run of the member name.
        std::string run;
        for (std::size_t j = 0; j < member_tokens.size() && j < 3; ++j) {
            run += member_tokens[j];
            if (std::find(api.member_patterns.begin(), api.member_patterns.end(), run) !=
                api.member_patterns.end())
                return ApiHit{api.library, run, api.sink_category};
        }
    }
    return std::nullopt;
}

bool CompiledRuleSet::has_source_category(std::string_view name) const {
    return std::find(source_order_.begin(), source_order_.end(), name) != source_order_.end();
}

bool CompiledRuleSet::has_sink_category(std::string_view name) const {
    return std::find(sink_order_.begin(), sink_order_.end(), name) != sink_order_.end();
}

std::vector<std::pair<std::string, std::vector<std::string>>> CompiledRuleSet::keyword_table() const {
    std::vector<std::pair<std::string, std::vector<std::string>>> out;
    for (const auto& m : sources_) out.emplace_back(m.name, m.keywords);
    std::sort(out.begin(), out.end());
    return out;
}

CompiledRuleSet compile_rules(const RuleSpec& spec) {
    validate_rules(spec);
    CompiledRuleSet out;

    for (const auto& s : spec.sources) {
        CompiledRuleSet::SourceMatcher m;
        m.name = s.name;
        m.keywords = s.keywords;
        std::sort(m.keywords.begin(), m.keywords.end());
        m.keywords.erase(std::unique(m.keywords.begin(), m.keywords.end()), m.keywords.end());
        out.sources_.push_back(std::move(m));
        out.source_order_.push_back(s.name);
    }

    for (const auto& s : spec.sinks) {
        out.sink_order_.push_back(s.name);
        for (const auto& v : s.verbs) {
            bool known = std::any_of(out.verbs_.begin(), out.verbs_.end(),
                                     [&](const auto& e) { return e.verb == v; });
            if (!known) out.verbs_.push_back({v, s.name});
        }
    }
    std::sort(out.verbs_.begin(), out.verbs_.end(),
              [](const auto& a, const auto& b) { return a.verb < b.verb; });

    out.apis_ = spec.apis;

    // Ascending category name, then pattern order within a category.
    std::vector<const SourceCategorySpec*> by_name;
    for (const auto& s : spec.sources) by_name.push_back(&s);
    std::stable_sort(by_name.begin(), by_name.end(),
                     [](const auto* a, const auto* b) { return a->name < b->name; });
    auto matchers = std::make_shared<std::vector<CleartextMatcher>>();
    for (const auto* s : by_name) {
        for (const auto& p : s->cleartext_patterns)
            matchers->push_back({s->name, p.name, compile_regex(p, s->name), p.validator});
    }
    out.cleartext_ = std::move(matchers);
    return out;
}

}  // namespace privlens
