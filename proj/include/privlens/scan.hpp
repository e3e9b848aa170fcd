#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "privlens/frontend.hpp"
#include "privlens/report.hpp"
#include "privlens/ruleset.hpp"

namespace privlens {

struct ScanOptions {
    DiscoverOptions discover;
    int line_threshold = kDefaultLineThreshold;
    double name_threshold = kDefaultNameThreshold;
    std::vector<std::string> labels;  // conjunction filter; validated against the rules
    bool mask = true;
    unsigned jobs = 1;
};

/// "sha256:<hex>" of the canonical rule document.
std::string rules_fingerprint(const RuleSpec& spec);

/// Everything found in one file, before ids are assigned.
struct FileResult {
    std::vector<OccurrenceFinding> occurrences;
    std::vector<FlowFinding> flows;
    std::vector<std::string> warnings;
    std::vector<std::string> notes;
    bool tokens_only = false;
    int lines = 0;
};

FileResult analyze_file(const SourceFile& file, const CompiledRuleSet& rules, bool mask);

/// Discovers, analyzes (up to `jobs` files at a time), labels and groups.
/// Output does not depend on `jobs`.
Report run_scan(const std::filesystem::path& root, const RuleSpec& spec, const ScanOptions& options = {});

/// Builds the report from per-file results given in path order.
Report assemble_report(std::string scan_root, const RuleSpec& spec, const CompiledRuleSet& rules,
                       const std::vector<SourceFile>& files, std::vector<FileResult> results,
                       std::vector<std::string> discovery_notes, const ScanOptions& options);

/// True when some finding in the report carries `label`.
bool report_has_label(const Report& report, std::string_view label);

}  // namespace privlens
