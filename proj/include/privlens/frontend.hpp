#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "privlens/unit.hpp"

namespace privlens {

class DiscoveryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DiscoverOptions {
    std::vector<std::string> include;  // empty = everything
    std::vector<std::string> exclude;
    std::size_t max_file_bytes = 8u << 20;
    /// Languages given full parsing; files in other languages are read as
    /// unknown and only scanned for cleartext.
    std::set<Language> languages = {Language::javascript, Language::typescript, Language::java};
};

struct DiscoveryResult {
    std::vector<SourceFile> files;   // ascending path order
    std::vector<std::string> notes;  // one line per skipped file
};

/// Walks `root` recursively. Binary files (NUL byte in the first 8 KiB) and files
/// above the size limit are left out with a note. Paths are matched against the
/// globs both as a whole and by file name.
DiscoveryResult discover_files(const std::filesystem::path& root, const DiscoverOptions& options = {});

/// Replaces invalid UTF-8 sequences with U+FFFD. Returns true when anything was replaced.
bool sanitize_utf8(std::string& text);

bool glob_match(std::string_view pattern, std::string_view path);

/// Limits beyond which a file counts as generated/minified and is only scanned for cleartext.
inline constexpr std::size_t kTaintMaxBytes = 1u << 20;
inline constexpr std::size_t kTaintMaxLineLength = 5000;

/// Normalizes one file. Never fails: syntax problems degrade the unit to
/// tokens-only, with the reason in `notes`.
NormalizedUnit parse_file(const SourceFile& file);

}  // namespace privlens
