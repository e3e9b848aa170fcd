#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "privlens/grouper.hpp"
#include "privlens/taint.hpp"

namespace privlens {

inline constexpr int kReportSchema = 1;
inline constexpr std::string_view kToolVersion = "0.1.0";

struct OccurrenceEntry {
    std::string id;  // occ-N
    std::string file;
    LineSpan span;
    std::string category;
    std::string pattern;
    std::string context;  // "string" or "comment"
    std::string matched;
    std::vector<std::string> labels;

    bool operator==(const OccurrenceEntry&) const = default;
};

struct SourceEntry {
    std::string name;  // dotted chain
    std::string category;
    std::string origin;
    LineSpan site;

    bool operator==(const SourceEntry&) const = default;
};

struct SinkEntry {
    std::string name;
    std::string category;
    std::string via;
    std::string library;  // empty unless via == "api"

    bool operator==(const SinkEntry&) const = default;
};

struct FlowEntry {
    std::string id;  // flow-N
    std::string file;
    std::string scope;
    LineSpan span;
    std::vector<SourceEntry> sources;
    SinkEntry sink;
    bool source_specific = false;
    int shape = 0;
    std::string sensitivity;
    std::vector<std::string> labels;
    std::string snippet;

    bool operator==(const FlowEntry&) const = default;
};

struct FileStats {
    int scanned = 0;
    int tokens_only = 0;  // cleartext scan only
    int skipped = 0;      // left out at discovery
    long long lines = 0;
    std::map<std::string, int> by_language;

    bool operator==(const FileStats&) const = default;
};

/// Flow counts per (source category, sink category). A flow with several source
/// categories counts once in each of their rows.
struct CountMatrix {
    std::vector<std::string> rows;     // source categories, rule order
    std::vector<std::string> columns;  // sink alphabet
    std::vector<std::vector<int>> counts;

    int at(std::string_view source, std::string_view sink) const;
    int total() const;
    bool operator==(const CountMatrix&) const = default;
};

struct GroupSection {
    std::string criterion;
    std::vector<Group> groups;

    bool operator==(const GroupSection&) const = default;
};

struct Report {
    int schema = kReportSchema;
    std::string tool_version{kToolVersion};
    std::string rules_fingerprint;
    std::string scan_root;
    std::vector<std::string> label_filter;
    FileStats files;
    std::vector<OccurrenceEntry> occurrences;
    std::vector<FlowEntry> flows;
    std::vector<GroupSection> groups;
    CountMatrix matrix;
    std::vector<std::string> warnings;
    std::vector<std::string> notes;

    bool operator==(const Report&) const = default;
};

class ReportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Newline-terminated, key order fixed.
std::string render_json(const Report& report);
/// Throws ReportError on malformed input or a schema other than 1.
Report parse_report(std::string_view json_text);
/// Occurrences, then flows, then the count matrix ('-' for zero cells), then groups.
std::string render_text(const Report& report);

}  // namespace privlens
