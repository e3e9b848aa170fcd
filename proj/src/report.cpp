#include "privlens/report.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace privlens {

using nlohmann::ordered_json;

int CountMatrix::at(std::string_view source, std::string_view sink) const {
    auto r = std::find(rows.begin(), rows.end(), source);
    auto c = std::find(columns.begin(), columns.end(), sink);
    if (r == rows.end() || c == columns.end()) return 0;
    return counts[static_cast<std::size_t>(r - rows.begin())][static_cast<std::size_t>(c - columns.begin())];
}

int CountMatrix::total() const {
    int sum = 0;
    for (const auto& row : counts) sum = std::accumulate(row.begin(), row.end(), sum);
    return sum;
}

namespace {

ordered_json span_json(LineSpan s) { return ordered_json{{"start", s.start}, {"end", s.end}}; }

LineSpan span_from(const ordered_json& j) { return {j.at("start").get<int>(), j.at("end").get<int>()}; }

Criterion criterion_from(const std::string& name) {
    for (auto c : {Criterion::neighboring, Criterion::name_similarity, Criterion::api, Criterion::label_filter})
        if (to_string(c) == name) return c;
    throw ReportError("unknown grouping criterion '" + name + "'");
}

ordered_json to_json(const Report& r) {
    ordered_json j;
    j["schema"] = r.schema;
    j["tool_version"] = r.tool_version;
    j["rules_fingerprint"] = r.rules_fingerprint;
    j["scan_root"] = r.scan_root;
    j["label_filter"] = r.label_filter;

    ordered_json by_lang = ordered_json::object();
    for (const auto& [lang, n] : r.files.by_language) by_lang[lang] = n;
    j["files"] = {{"scanned", r.files.scanned},
                  {"tokens_only", r.files.tokens_only},
                  {"skipped", r.files.skipped},
                  {"lines", r.files.lines},
                  {"by_language", by_lang}};

    ordered_json occ = ordered_json::array();
    for (const auto& o : r.occurrences) {
        occ.push_back({{"id", o.id},
                       {"file", o.file},
                       {"span", span_json(o.span)},
                       {"category", o.category},
                       {"pattern", o.pattern},
                       {"context", o.context},
                       {"matched", o.matched},
                       {"labels", o.labels}});
    }
    j["occurrences"] = std::move(occ);

    ordered_json flows = ordered_json::array();
    for (const auto& f : r.flows) {
        ordered_json sources = ordered_json::array();
        for (const auto& s : f.sources)
            sources.push_back({{"name", s.name},
                               {"category", s.category},
                               {"origin", s.origin},
                               {"site", span_json(s.site)}});
        ordered_json sink = {{"name", f.sink.name}, {"category", f.sink.category}, {"via", f.sink.via}};
        if (!f.sink.library.empty()) sink["library"] = f.sink.library;
        flows.push_back({{"id", f.id},
                         {"file", f.file},
                         {"scope", f.scope},
                         {"span", span_json(f.span)},
                         {"sources", std::move(sources)},
                         {"sink", std::move(sink)},
                         {"source_specific", f.source_specific},
                         {"shape", f.shape},
                         {"sensitivity", f.sensitivity},
                         {"labels", f.labels},
                         {"snippet", f.snippet}});
    }
    j["flows"] = std::move(flows);

    ordered_json groups = ordered_json::object();
    for (const auto& section : r.groups) {
        ordered_json arr = ordered_json::array();
        for (const auto& g : section.groups)
            arr.push_back({{"id", g.id},
                           {"criterion", std::string(to_string(g.criterion))},
                           {"key", g.key},
                           {"members", g.members},
                           {"labels", g.label_summary}});
        groups[section.criterion] = std::move(arr);
    }
    j["groups"] = std::move(groups);

    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < r.matrix.rows.size(); ++i)
        rows.push_back({{"source", r.matrix.rows[i]}, {"counts", r.matrix.counts[i]}});
    j["matrix"] = {{"columns", r.matrix.columns}, {"rows", std::move(rows)}};
    j["warnings"] = r.warnings;
    j["notes"] = r.notes;
    return j;
}

Report from_json(const ordered_json& j) {
    Report r;
    r.schema = j.at("schema").get<int>();
    if (r.schema != kReportSchema)
        throw ReportError("unsupported report schema " + std::to_string(r.schema) + ", expected " +
                          std::to_string(kReportSchema));
    r.tool_version = j.at("tool_version").get<std::string>();
    r.rules_fingerprint = j.at("rules_fingerprint").get<std::string>();
    r.scan_root = j.at("scan_root").get<std::string>();
    r.label_filter = j.at("label_filter").get<std::vector<std::string>>();

    const auto& files = j.at("files");
    r.files.scanned = files.at("scanned").get<int>();
    r.files.tokens_only = files.at("tokens_only").get<int>();
    r.files.skipped = files.at("skipped").get<int>();
    r.files.lines = files.at("lines").get<long long>();
    for (const auto& [lang, n] : files.at("by_language").items()) r.files.by_language[lang] = n.get<int>();

    for (const auto& o : j.at("occurrences")) {
        OccurrenceEntry e;
        e.id = o.at("id").get<std::string>();
        e.file = o.at("file").get<std::string>();
        e.span = span_from(o.at("span"));
        e.category = o.at("category").get<std::string>();
        e.pattern = o.at("pattern").get<std::string>();
        e.context = o.at("context").get<std::string>();
        e.matched = o.at("matched").get<std::string>();
        e.labels = o.at("labels").get<std::vector<std::string>>();
        r.occurrences.push_back(std::move(e));
    }

    for (const auto& f : j.at("flows")) {
        FlowEntry e;
        e.id = f.at("id").get<std::string>();
        e.file = f.at("file").get<std::string>();
        e.scope = f.at("scope").get<std::string>();
        e.span = span_from(f.at("span"));
        for (const auto& s : f.at("sources"))
            e.sources.push_back({s.at("name").get<std::string>(), s.at("category").get<std::string>(),
                                 s.at("origin").get<std::string>(), span_from(s.at("site"))});
        const auto& sink = f.at("sink");
        e.sink.name = sink.at("name").get<std::string>();
        e.sink.category = sink.at("category").get<std::string>();
        e.sink.via = sink.at("via").get<std::string>();
        if (sink.contains("library")) e.sink.library = sink.at("library").get<std::string>();
        e.source_specific = f.at("source_specific").get<bool>();
        e.shape = f.at("shape").get<int>();
        e.sensitivity = f.at("sensitivity").get<std::string>();
        e.labels = f.at("labels").get<std::vector<std::string>>();
        e.snippet = f.at("snippet").get<std::string>();
        r.flows.push_back(std::move(e));
    }

    for (const auto& [criterion, arr] : j.at("groups").items()) {
        GroupSection section;
        section.criterion = criterion;
        for (const auto& g : arr) {
            Group grp;
            grp.id = g.at("id").get<std::string>();
            grp.criterion = criterion_from(g.at("criterion").get<std::string>());
            grp.key = g.at("key").get<std::string>();
            grp.members = g.at("members").get<std::vector<std::string>>();
            grp.label_summary = g.at("labels").get<std::vector<std::string>>();
            section.groups.push_back(std::move(grp));
        }
        r.groups.push_back(std::move(section));
    }

    const auto& m = j.at("matrix");
    r.matrix.columns = m.at("columns").get<std::vector<std::string>>();
    for (const auto& row : m.at("rows")) {
        r.matrix.rows.push_back(row.at("source").get<std::string>());
        r.matrix.counts.push_back(row.at("counts").get<std::vector<int>>());
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string lines_of(LineSpan s) {
    return s.start == s.end ? std::to_string(s.start) : std::to_string(s.start) + "-" + std::to_string(s.end);
}

}  // namespace

std::string render_json(const Report& report) { return to_json(report).dump(2) + "\n"; }

Report parse_report(std::string_view json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        throw ReportError(std::string("report is not valid JSON: ") + e.what());
    }
    try {
        return from_json(j);
    } catch (const ordered_json::exception& e) {
        throw ReportError(std::string("malformed report: ") + e.what());
    }
}

std::string render_text(const Report& r) {
    std::ostringstream out;
    out << "privlens " << r.tool_version << "  root: " << r.scan_root << "\n";
    out << "files: " << r.files.scanned << " scanned, " << r.files.tokens_only << " cleartext-only, "
        << r.files.skipped << " skipped\n";
    if (!r.label_filter.empty()) out << "filter: " << join(r.label_filter, " & ") << "\n";

    out << "\nPersonal data occurrences (" << r.occurrences.size() << ")\n";
    if (r.occurrences.empty()) out << "  no findings\n";
    for (const auto& o : r.occurrences) {
        out << "  " << o.id << "  " << o.file << ":" << lines_of(o.span) << "  " << o.category << "/" << o.pattern
            << " in " << o.context << "  " << o.matched << "\n";
    }

    out << "\nPersonal data processing (" << r.flows.size() << ")\n";
    if (r.flows.empty()) out << "  no findings\n";
    for (const auto& f : r.flows) {
        std::vector<std::string> srcs;
        for (const auto& s : f.sources) {
            // The JSON keeps each origin and site; one line per name is enough here.
            std::string shown = s.name + " [" + s.category + "]";
            if (std::find(srcs.begin(), srcs.end(), shown) == srcs.end()) srcs.push_back(std::move(shown));
        }
        out << "  " << f.id << "  " << f.file << ":" << lines_of(f.span) << "  in " << f.scope << "\n";
        out << "      " << join(srcs, ", ") << " -> " << f.sink.name << " [" << f.sink.category
            << (f.sink.via == "api" ? ", api " + f.sink.library : std::string()) << "]"
            << "  shape " << f.shape << ", sensitivity " << f.sensitivity << "\n";
        out << "      | " << f.snippet << "\n";
    }

    out << "\nFlows per source and sink\n";
    std::size_t w0 = 12;
    for (const auto& row : r.matrix.rows) w0 = std::max(w0, row.size() + 2);
    out << "  " << std::left << std::setw(static_cast<int>(w0)) << "source";
    for (const auto& c : r.matrix.columns) out << std::right << std::setw(5) << c;
    out << "\n";
    for (std::size_t i = 0; i < r.matrix.rows.size(); ++i) {
        out << "  " << std::left << std::setw(static_cast<int>(w0)) << r.matrix.rows[i];
        for (int n : r.matrix.counts[i]) out << std::right << std::setw(5) << (n == 0 ? std::string("-") : std::to_string(n));
        out << "\n";
    }

    out << "\nGroups\n";
    for (const auto& section : r.groups) {
        std::size_t multi = std::count_if(section.groups.begin(), section.groups.end(),
                                          [](const Group& g) { return g.members.size() > 1; });
        out << "  " << section.criterion << ": " << section.groups.size() << " groups, " << multi
            << " with several findings\n";
        for (const auto& g : section.groups)
            if (g.members.size() > 1) out << "    " << g.id << " " << g.key << ": " << join(g.members, " ") << "\n";
    }

    if (!r.warnings.empty()) {
        out << "\nWarnings\n";
        for (const auto& w : r.warnings) out << "  " << w << "\n";
    }
    if (!r.notes.empty()) {
        out << "\nNotes\n";
        for (const auto& n : r.notes) out << "  " << n << "\n";
    }
    return out.str();
}

}  // namespace privlens
