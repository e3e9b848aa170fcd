#include <fnmatch.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <system_error>

#include "privlens/frontend.hpp"

namespace privlens {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kSkippedDirs[] = {".git", ".hg", ".svn", "node_modules"};

bool matches_any(const std::vector<std::string>& globs, const std::string& rel) {
    return std::any_of(globs.begin(), globs.end(),
                       [&](const std::string& g) { return glob_match(g, rel); });
}

bool looks_binary(const std::string& content) {
    std::size_t n = std::min<std::size_t>(content.size(), 8192);
    return content.find('\0', 0) < n;
}

}  // namespace

std::string_view to_string(Language lang) {
    switch (lang) {
        case Language::javascript: return "javascript";
        case Language::typescript: return "typescript";
        case Language::java: return "java";
        case Language::unknown: break;
    }
    return "unknown";
}

Language language_from_path(std::string_view path) {
    auto dot = path.rfind('.');
    if (dot == std::string_view::npos) return Language::unknown;
    auto ext = path.substr(dot + 1);
    if (ext == "js" || ext == "mjs" || ext == "cjs" || ext == "jsx") return Language::javascript;
    if (ext == "ts" || ext == "mts" || ext == "cts" || ext == "tsx") return Language::typescript;
    if (ext == "java") return Language::java;
    return Language::unknown;
}

bool glob_match(std::string_view pattern, std::string_view path) {
    std::string pat(pattern);
    std::string p(path);
    if (fnmatch(pat.c_str(), p.c_str(), 0) == 0) return true;
    auto slash = p.rfind('/');
    std::string base = slash == std::string::npos ? p : p.substr(slash + 1);
    if (fnmatch(pat.c_str(), base.c_str(), 0) == 0) return true;
    // "**/x" also matches "x" at the root.
    if (pat.rfind("**/", 0) == 0 && fnmatch(pat.c_str() + 3, p.c_str(), 0) == 0) return true;
    return false;
}

bool sanitize_utf8(std::string& text) {
    std::string out;
    bool replaced = false;
    std::size_t i = 0;
    const std::size_t n = text.size();
    out.reserve(n);
    while (i < n) {
        auto c = static_cast<unsigned char>(text[i]);
        std::size_t len = 0;
        if (c < 0x80) len = 1;
        else if (c >= 0xC2 && c <= 0xDF) len = 2;
        else if (c >= 0xE0 && c <= 0xEF) len = 3;
        else if (c >= 0xF0 && c <= 0xF4) len = 4;

        bool ok = len > 0 && i + len <= n;
        for (std::size_t k = 1; ok && k < len; ++k)
            ok = (static_cast<unsigned char>(text[i + k]) & 0xC0) == 0x80;
        if (ok && len == 3) {
            auto c1 = static_cast<unsigned char>(text[i + 1]);
            if ((c == 0xE0 && c1 < 0xA0) || (c == 0xED && c1 > 0x9F)) ok = false;
        }
        if (ok && len == 4) {
            auto c1 = static_cast<unsigned char>(text[i + 1]);
            if ((c == 0xF0 && c1 < 0x90) || (c == 0xF4 && c1 > 0x8F)) ok = false;
        }
        if (ok) {
            out.append(text, i, len);
            i += len;
        } else {
            out += "\xEF\xBF\xBD";
            replaced = true;
            ++i;
        }
    }
    if (replaced) text = std::move(out);
    return replaced;
}

DiscoveryResult discover_files(const fs::path& root, const DiscoverOptions& options) {
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw DiscoveryError("scan root '" + root.string() + "' is not a readable directory");

    DiscoveryResult result;
    std::vector<std::pair<std::string, fs::path>> candidates;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw DiscoveryError("cannot read scan root '" + root.string() + "': " + ec.message());

    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) {
            result.notes.push_back("walk error: " + ec.message());
            ec.clear();
            continue;
        }
        const auto& entry = *it;
        auto name = entry.path().filename().string();
        if (entry.is_directory(ec)) {
            if (std::find(std::begin(kSkippedDirs), std::end(kSkippedDirs), name) != std::end(kSkippedDirs))
                it.disable_recursion_pending();
            continue;
        }
        if (!entry.is_regular_file(ec) || entry.is_symlink(ec)) continue;
        std::string rel = fs::relative(entry.path(), root, ec).generic_string();
        if (ec) {
            ec.clear();
            continue;
        }
        if (!options.include.empty() && !matches_any(options.include, rel)) continue;
        if (matches_any(options.exclude, rel)) continue;
        candidates.emplace_back(std::move(rel), entry.path());
    }
    std::sort(candidates.begin(), candidates.end());

    for (auto& [rel, path] : candidates) {
        std::error_code size_ec;
        auto size = fs::file_size(path, size_ec);
        if (size_ec) {
            result.notes.push_back(rel + ": unreadable, skipped");
            continue;
        }
        if (size > options.max_file_bytes) {
            result.notes.push_back(rel + ": larger than " + std::to_string(options.max_file_bytes) +
                                   " bytes, skipped");
            continue;
        }
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            result.notes.push_back(rel + ": unreadable, skipped");
            continue;
        }
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (looks_binary(content)) {
            result.notes.push_back(rel + ": binary, skipped");
            continue;
        }
        SourceFile file;
        file.path = rel;
        file.lossy_utf8 = sanitize_utf8(content);
        file.content = std::move(content);
        Language lang = language_from_path(rel);
        file.language = options.languages.contains(lang) ? lang : Language::unknown;
        result.files.push_back(std::move(file));
    }
    return result;
}

}  // namespace privlens
