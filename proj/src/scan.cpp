#include "privlens/scan.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "privlens/cleartext.hpp"
#include "privlens/grouper.hpp"
#include "privlens/labeler.hpp"
#include "privlens/taint.hpp"

namespace privlens {

namespace {

constexpr std::size_t kSnippetMax = 240;

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

std::string one_line(std::string_view text) {
    std::string out;
    bool space = false;
    for (char c : text) {
        if (c == '\n' || c == '\r' || c == '\t' || c == ' ') {
            space = !out.empty();
            continue;
        }
        if (space) out += ' ';
        space = false;
        out += c;
    }
    if (out.size() > kSnippetMax) {
        // Cut on a UTF-8 boundary.
        std::size_t cut = kSnippetMax;
        while (cut > 0 && (static_cast<unsigned char>(out[cut]) & 0xC0) == 0x80) --cut;
        out.resize(cut);
        out += "...";
    }
    return out;
}

std::string last_name(const Chain& c) { return c.empty() ? std::string() : c.back(); }

}  // namespace

std::string rules_fingerprint(const RuleSpec& spec) { return "sha256:" + sha256_hex(serialize_rules(spec)); }

FileResult analyze_file(const SourceFile& file, const CompiledRuleSet& rules, bool mask) {
    FileResult out;
    NormalizedUnit unit = parse_file(file);
    out.lines = unit.line_count;
    out.tokens_only = unit.parse_quality == ParseQuality::tokens_only;
    for (const auto& n : unit.notes) out.notes.push_back(file.path + ": " + n);

    CleartextResult clear = scan_literals(unit, rules, CleartextOptions{mask});
    out.occurrences = std::move(clear.findings);
    out.warnings = std::move(clear.warnings);

    out.flows = detect_flows(unit, rules);
    for (auto& f : out.flows) {
        std::string text = one_line(f.snippet);
        f.snippet = mask ? mask_snippet(text, rules) : text;
    }
    return out;
}

Report assemble_report(std::string scan_root, const RuleSpec& spec, const CompiledRuleSet& rules,
                       const std::vector<SourceFile>& files, std::vector<FileResult> results,
                       std::vector<std::string> discovery_notes, const ScanOptions& options) {
    Report report;
    report.rules_fingerprint = rules_fingerprint(spec);
    report.scan_root = std::move(scan_root);
    report.label_filter = options.labels;
    report.files.skipped = static_cast<int>(discovery_notes.size());
    report.notes = std::move(discovery_notes);

    std::vector<GroupItem> items;
    int occ_n = 0;
    int flow_n = 0;
    std::vector<FlowEntry> flows;
    for (std::size_t i = 0; i < files.size(); ++i) {
        FileResult& res = results[i];
        ++report.files.scanned;
        report.files.lines += res.lines;
        report.files.by_language[std::string(to_string(files[i].language))]++;
        if (res.tokens_only) ++report.files.tokens_only;
        for (auto& w : res.warnings) report.warnings.push_back(std::move(w));
        for (auto& n : res.notes) report.notes.push_back(std::move(n));

        for (const auto& o : res.occurrences) {
            LabelSet labels = label(o);
            OccurrenceEntry e;
            e.id = "occ-" + std::to_string(++occ_n);
            e.file = o.file;
            e.span = o.span;
            e.category = o.category;
            e.pattern = o.pattern_name;
            e.context = std::string(to_string(o.context));
            e.matched = o.matched;
            e.labels = labels.names();
            items.push_back({e.id, e.file, e.span, {}, std::nullopt, labels});
            report.occurrences.push_back(std::move(e));
        }
        for (const auto& f : res.flows) {
            LabelSet labels = label(f);
            FlowShape shape = classify_shape(f);
            FlowEntry e;
            e.id = "flow-" + std::to_string(++flow_n);
            e.file = f.file;
            e.scope = f.scope;
            e.span = f.span;
            for (const auto& s : f.sources)
                e.sources.push_back({join_chain(s.chain), s.category, std::string(to_string(s.origin)), s.site});
            e.sink = {join_chain(f.sink.chain), f.sink.category, std::string(to_string(f.sink.via)), f.sink.library};
            e.source_specific = f.source_specific;
            e.shape = shape.id;
            e.sensitivity = std::string(to_string(sensitivity_of(shape)));
            e.labels = labels.names();
            e.snippet = f.snippet;

            GroupItem item{e.id, e.file, e.span, {}, std::nullopt, labels};
            for (const auto& s : f.sources) item.names.push_back(last_name(s.chain));
            // The object a re-rooted call works on, or the receiver of an ordinary sink.
            Chain object = f.source_specific ? f.sink.chain
                                             : Chain(f.sink.chain.begin(), f.sink.chain.end() - (f.sink.chain.empty() ? 0 : 1));
            if (!object.empty() && object.back() != "this") item.names.push_back(object.back());
            std::sort(item.names.begin(), item.names.end());
            item.names.erase(std::unique(item.names.begin(), item.names.end()), item.names.end());
            if (f.sink.via == SinkVia::api) item.api_library = f.sink.library;
            items.push_back(std::move(item));
            flows.push_back(std::move(e));
        }
    }
    report.flows = std::move(flows);

    std::optional<GroupSection> filter_section;
    if (!options.labels.empty()) {
        auto kept = filter_by_labels(items, options.labels, label_inventory(rules));
        std::set<std::string> keep_ids;
        for (const auto& k : kept) keep_ids.insert(k.id);
        std::erase_if(report.occurrences, [&](const OccurrenceEntry& e) { return !keep_ids.contains(e.id); });
        std::erase_if(report.flows, [&](const FlowEntry& e) { return !keep_ids.contains(e.id); });
        items = std::move(kept);

        filter_section = GroupSection{std::string(to_string(Criterion::label_filter)), {}};
        if (!items.empty()) {
            // One group holding every finding that passed, in report order.
            Group g;
            g.id = "filter-1";
            g.criterion = Criterion::label_filter;
            for (std::size_t i = 0; i < options.labels.size(); ++i) g.key += (i ? "," : "") + options.labels[i];
            std::set<std::string> labels;
            for (const auto& e : report.occurrences) g.members.push_back(e.id);
            for (const auto& e : report.flows) g.members.push_back(e.id);
            for (const auto& it : items)
                for (auto& l : it.labels.names()) labels.insert(std::move(l));
            g.label_summary.assign(labels.begin(), labels.end());
            filter_section->groups.push_back(std::move(g));
        }
    }
    report.groups.push_back({std::string(to_string(Criterion::neighboring)),
                             merge_neighbors(items, options.line_threshold)});
    report.groups.push_back({std::string(to_string(Criterion::name_similarity)),
                             group_by_name(items, options.name_threshold)});
    report.groups.push_back({std::string(to_string(Criterion::api)), group_by_api(items)});
    if (filter_section) report.groups.push_back(std::move(*filter_section));

    report.matrix.rows = rules.source_categories();
    report.matrix.columns.assign(std::begin(kSinkAlphabet), std::end(kSinkAlphabet));
    report.matrix.counts.assign(report.matrix.rows.size(), std::vector<int>(report.matrix.columns.size(), 0));
    for (const auto& f : report.flows) {
        auto col = std::find(report.matrix.columns.begin(), report.matrix.columns.end(), f.sink.category);
        if (col == report.matrix.columns.end()) continue;
        std::vector<std::string> cats;
        for (const auto& s : f.sources) cats.push_back(s.category);
        std::sort(cats.begin(), cats.end());
        cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
        for (const auto& c : cats) {
            auto row = std::find(report.matrix.rows.begin(), report.matrix.rows.end(), c);
            if (row == report.matrix.rows.end()) continue;
            report.matrix.counts[static_cast<std::size_t>(row - report.matrix.rows.begin())]
                                [static_cast<std::size_t>(col - report.matrix.columns.begin())]++;
        }
    }
    return report;
}

Report run_scan(const std::filesystem::path& root, const RuleSpec& spec, const ScanOptions& options) {
    CompiledRuleSet rules = compile_rules(spec);
    if (!options.labels.empty()) {
        auto inventory = label_inventory(rules);
        for (const auto& l : options.labels)
            if (std::find(inventory.begin(), inventory.end(), l) == inventory.end())
                throw LabelError("unknown label '" + l + "'");
    }
    DiscoveryResult found = discover_files(root, options.discover);

    std::vector<FileResult> results(found.files.size());
    unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(found.files.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < found.files.size(); i = next++)
            results[i] = analyze_file(found.files[i], rules, options.mask);
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    }
    return assemble_report(root.generic_string(), spec, rules, found.files, std::move(results),
                           std::move(found.notes), options);
}

bool report_has_label(const Report& report, std::string_view label) {
    auto has = [&](const std::vector<std::string>& labels) {
        return std::find(labels.begin(), labels.end(), label) != labels.end();
    };
    return std::any_of(report.occurrences.begin(), report.occurrences.end(),
                       [&](const OccurrenceEntry& e) { return has(e.labels); }) ||
           std::any_of(report.flows.begin(), report.flows.end(), [&](const FlowEntry& e) { return has(e.labels); });
}

}  // namespace privlens
