// privlens command-line entry point.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "privlens/labeler.hpp"
#include "privlens/ruleset.hpp"
#include "privlens/scan.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFailOn = 2;

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    for (std::string piece; std::getline(in, piece, ',');) {
        auto b = piece.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        auto e = piece.find_last_not_of(" \t");
        out.push_back(piece.substr(b, e - b + 1));
    }
    return out;
}

std::set<privlens::Language> parse_langs(const std::string& text) {
    std::set<privlens::Language> out;
    for (const auto& l : split_commas(text)) {
        if (l == "js" || l == "javascript") out.insert(privlens::Language::javascript);
        else if (l == "ts" || l == "typescript") out.insert(privlens::Language::typescript);
        else if (l == "java") out.insert(privlens::Language::java);
        else throw CLI::ValidationError("--langs", "unknown language '" + l + "' (use js, ts, java)");
    }
    return out;
}

privlens::RuleSpec load_spec(const std::string& path) {
    return path.empty() ? privlens::default_rules() : privlens::load_rules(path);
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out.flush()) throw std::runtime_error("cannot write '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finds personal data in source code and where it gets processed."};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(privlens::kToolVersion));

    // scan
    auto* scan = app.add_subcommand("scan", "Scan a directory and write a report");
    std::string root;
    std::string rules_path;
    std::string format = "json";
    std::string out_path;
    std::vector<std::string> include;
    std::vector<std::string> exclude;
    std::string langs;
    int line_threshold = privlens::kDefaultLineThreshold;
    double name_threshold = privlens::kDefaultNameThreshold;
    std::string labels;
    bool no_mask = false;
    unsigned jobs = 1;
    std::string fail_on;
    scan->add_option("root", root, "Directory to scan")->required();
    scan->add_option("--rules", rules_path, "Rule file (JSON); the bundled rules by default");
    scan->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
    scan->add_option("--out", out_path, "Write the report here instead of stdout");
    scan->add_option("--include", include, "Only scan paths matching this glob (repeatable)");
    scan->add_option("--exclude", exclude, "Skip paths matching this glob (repeatable)");
    scan->add_option("--langs", langs, "Languages to analyze for flows, e.g. js,ts,java");
    scan->add_option("--line-threshold", line_threshold, "Max line gap for neighbor groups")
        ->check(CLI::NonNegativeNumber);
    scan->add_option("--name-threshold", name_threshold, "Min Jaccard similarity for name groups")
        ->check(CLI::Range(0.0, 1.0));
    scan->add_option("--labels", labels, "Keep findings carrying all of these labels, e.g. sink.T,source.contact");
    scan->add_flag("--no-mask", no_mask, "Show matched personal data unmasked");
    scan->add_option("--jobs", jobs, "Files analyzed in parallel")->check(CLI::Range(1u, 256u));
    scan->add_option("--fail-on", fail_on, "Exit with status 2 when any finding carries this label");

    // rules
    auto* rules = app.add_subcommand("rules", "Inspect or extend rule files");
    rules->require_subcommand(1);
    auto* show = rules->add_subcommand("show", "Print the canonical rule document and its fingerprint");
    std::string show_path;
    show->add_option("--rules", show_path, "Rule file; the bundled rules by default");
    bool show_labels = false;
    show->add_flag("--labels", show_labels, "List the label names instead");

    auto* extend = rules->add_subcommand("extend", "Add a keyword-only source category");
    std::string ext_rules;
    std::string ext_name;
    std::string ext_keywords;
    std::string ext_kind = "contextual";
    std::string ext_out;
    extend->add_option("--rules", ext_rules, "Rule file to extend; the bundled rules by default");
    extend->add_option("--name", ext_name, "Category name")->required();
    extend->add_option("--keywords", ext_keywords, "Comma-separated keywords")->required();
    extend->add_option("--kind", ext_kind, "fixed or contextual")->check(CLI::IsMember({"fixed", "contextual"}));
    extend->add_option("--out", ext_out, "Write the new rule file here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (scan->parsed()) {
            privlens::RuleSpec spec = load_spec(rules_path);
            privlens::CompiledRuleSet compiled = privlens::compile_rules(spec);
            privlens::ScanOptions options;
            options.discover.include = include;
            options.discover.exclude = exclude;
            if (!langs.empty()) options.discover.languages = parse_langs(langs);
            options.line_threshold = line_threshold;
            options.name_threshold = name_threshold;
            options.labels = privlens::parse_label_list(labels, compiled);
            options.mask = !no_mask;
            options.jobs = jobs;
            if (!fail_on.empty()) privlens::parse_label_list(fail_on, compiled);

            privlens::Report report = privlens::run_scan(root, spec, options);
            write_output(format == "json" ? privlens::render_json(report) : privlens::render_text(report), out_path);
            if (!fail_on.empty()) {
                for (const auto& l : privlens::parse_label_list(fail_on, compiled))
                    if (privlens::report_has_label(report, l)) return kExitFailOn;
            }
            return kExitOk;
        }
        if (show->parsed()) {
            privlens::RuleSpec spec = load_spec(show_path);
            if (show_labels) {
                for (const auto& l : privlens::label_inventory(privlens::compile_rules(spec))) std::cout << l << "\n";
                return kExitOk;
            }
            std::cout << privlens::serialize_rules(spec);
            std::cerr << privlens::rules_fingerprint(spec) << "\n";
            return kExitOk;
        }
        if (extend->parsed()) {
            privlens::RuleSpec spec = load_spec(ext_rules);
            auto kind = ext_kind == "fixed" ? privlens::SourceKind::fixed : privlens::SourceKind::contextual;
            auto extended = privlens::extend_with_custom_category(spec, ext_name, split_commas(ext_keywords), kind);
            write_output(privlens::serialize_rules(extended), ext_out);
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "privlens: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
