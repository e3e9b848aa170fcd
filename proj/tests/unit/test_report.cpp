#include <algorithm>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "privlens/report.hpp"
#include "privlens/scan.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace privlens;
using testutil::TempDir;

namespace {

void write_sample(const TempDir& dir) {
    dir.write("src/app.js",
              "import { MongoClient } from 'mongodb';\n"
              "// support: help.desk@example.com\n"
              "function signup(userEmail, password) {\n"
              "  const h = hasher.hash(password);\n"
              "  db.insertOne({ userEmail, h });\n"
              "  mailer.send(userEmail);\n"
              "}\n"
              "gpsTracker.setLatitude(100, 100);\n");
    dir.write("src/Svc.java",
              "class Svc {\n"
              "  void run(String phoneNumber, String ssn) {\n"
              "    logger.info(phoneNumber);\n"
              "    repo.save(phoneNumber, ssn);\n"
              "    String card = \"4111 1111 1111 1111\";\n"
              "  }\n"
              "}\n");
    dir.write("notes.txt", "ping 192.168.10.4 from the lab\n");
}

Report sample_report(const ScanOptions& options = {}) {
    TempDir dir;
    write_sample(dir);
    Report r = run_scan(dir.path(), default_rules(), options);
    r.scan_root = "<tmp>";
    return r;
}

const GroupSection* section(const Report& r, std::string_view criterion) {
    for (const auto& s : r.groups)
        if (s.criterion == criterion) return &s;
    return nullptr;
}

}  // namespace

TEST_CASE("scan of a small tree") {
    Report r = sample_report();
    CHECK(r.schema == 1);
    CHECK(r.tool_version == "0.1.0");
    CHECK(r.rules_fingerprint.rfind("sha256:", 0) == 0);
    CHECK(r.rules_fingerprint.size() == 7 + 64);
    CHECK(r.files.scanned == 3);
    CHECK(r.files.tokens_only == 1);
    CHECK(r.files.by_language.at("javascript") == 1);
    CHECK(r.files.by_language.at("java") == 1);

    std::set<std::string> occ;
    for (const auto& o : r.occurrences) occ.insert(o.category + "/" + o.pattern);
    CHECK(occ == std::set<std::string>{"contact/email", "financial/card", "online_id/ipv4"});
    CHECK(r.occurrences[0].id == "occ-1");

    std::vector<std::string> sinks;
    for (const auto& f : r.flows) sinks.push_back(f.file + ":" + std::to_string(f.span.start) + " " + f.sink.category);
    CHECK(sinks == std::vector<std::string>{"src/Svc.java:3 L", "src/Svc.java:4 DB", "src/app.js:4 E",
                                            "src/app.js:5 DB", "src/app.js:6 T", "src/app.js:8 M"});
    auto api = std::find_if(r.flows.begin(), r.flows.end(), [](const FlowEntry& f) { return f.sink.via == "api"; });
    REQUIRE(api != r.flows.end());
    CHECK(api->sink.library == "mongodb");
    for (std::size_t i = 0; i < r.flows.size(); ++i) CHECK(r.flows[i].id == "flow-" + std::to_string(i + 1));

    REQUIRE(section(r, "neighboring"));
    REQUIRE(section(r, "name-similarity"));
    REQUIRE(section(r, "api"));
    CHECK_FALSE(section(r, "label-filter"));
    REQUIRE(section(r, "api")->groups.size() == 1);
    CHECK(section(r, "api")->groups[0].key == "api:mongodb");
}

TEST_CASE("every finding appears exactly once in the neighbor groups") {
    Report r = sample_report();
    std::multiset<std::string> seen;
    for (const auto& g : section(r, "neighboring")->groups)
        for (const auto& m : g.members) seen.insert(m);
    CHECK(seen.size() == r.occurrences.size() + r.flows.size());
    for (const auto& id : seen) CHECK(seen.count(id) == 1);
}

TEST_CASE("matrix counts each flow once per source category") {
    Report r = sample_report();
    CHECK(r.matrix.columns == std::vector<std::string>{"M", "T", "C/D", "DB", "E", "L"});
    CHECK(r.matrix.rows.size() == 9);
    int expected_total = 0;
    for (const auto& row : r.matrix.rows)
        for (const auto& col : r.matrix.columns) {
            int n = 0;
            for (const auto& f : r.flows) {
                if (f.sink.category != col) continue;
                bool hit = std::any_of(f.sources.begin(), f.sources.end(),
                                       [&](const SourceEntry& s) { return s.category == row; });
                n += hit;
            }
            CHECK(r.matrix.at(row, col) == n);
            expected_total += n;
        }
    CHECK(r.matrix.total() == expected_total);
    CHECK(r.matrix.at("contact", "T") == 1);
    CHECK(r.matrix.at("nope", "T") == 0);
}

TEST_CASE("json round-trips and is newline-terminated") {
    Report r = sample_report();
    std::string text = render_json(r);
    CHECK(text.back() == '\n');
    Report back = parse_report(text);
    CHECK(back == r);
    CHECK(render_json(back) == text);

    auto j = nlohmann::json::parse(text);
    CHECK(j.at("schema") == 1);
    std::vector<std::string> keys;
    auto ordered = nlohmann::ordered_json::parse(text);
    for (const auto& [key, value] : ordered.items()) keys.push_back(key);
    auto occ = std::find(keys.begin(), keys.end(), "occurrences");
    auto flows = std::find(keys.begin(), keys.end(), "flows");
    CHECK(occ < flows);
}

TEST_CASE("parse_report rejects other schemas and bad input") {
    Report r;
    auto j = nlohmann::json::parse(render_json(r));
    j["schema"] = 2;
    CHECK_THROWS_WITH_AS(parse_report(j.dump()), doctest::Contains("schema"), ReportError);
    CHECK_THROWS_AS(parse_report("{"), ReportError);
    CHECK_THROWS_AS(parse_report("[]"), ReportError);
    j["schema"] = 1;
    j.erase("flows");
    CHECK_THROWS_AS(parse_report(j.dump()), ReportError);
}

TEST_CASE("text report layout") {
    Report r = sample_report();
    std::string text = render_text(r);
    auto occ = text.find("Personal data occurrences");
    auto flows = text.find("Personal data processing");
    auto matrix = text.find("Flows per source and sink");
    REQUIRE(occ != std::string::npos);
    REQUIRE(flows != std::string::npos);
    REQUIRE(matrix != std::string::npos);
    CHECK(occ < flows);
    CHECK(flows < matrix);
    // Zero cells are dashes; the contact/T cell holds 1.
    auto row = text.find("  account", matrix);
    REQUIRE(row != std::string::npos);
    std::string account = text.substr(row, text.find('\n', row) - row);
    CHECK(std::count(account.begin(), account.end(), '-') == 6);
    CHECK(text.find("4111 1111 1111 1111") == std::string::npos);
    CHECK(text.find("help.desk@example.com") == std::string::npos);
}

TEST_CASE("--no-mask shows raw matches") {
    ScanOptions opt;
    opt.mask = false;
    Report r = sample_report(opt);
    bool raw = std::any_of(r.occurrences.begin(), r.occurrences.end(),
                           [](const OccurrenceEntry& o) { return o.matched == "help.desk@example.com"; });
    CHECK(raw);
}

TEST_CASE("empty directory gives an empty report") {
    TempDir dir;
    Report r = run_scan(dir.path(), default_rules());
    CHECK(r.occurrences.empty());
    CHECK(r.flows.empty());
    CHECK(r.matrix.total() == 0);
    CHECK(r.files.scanned == 0);
    std::string text = render_text(r);
    CHECK(text.find("no findings") != std::string::npos);
    CHECK(parse_report(render_json(r)) == r);
}

TEST_CASE("label filter adds one group with the matching findings") {
    ScanOptions opt;
    opt.labels = {"source.contact", "kind.flow"};
    Report r = sample_report(opt);
    const auto* s = section(r, "label-filter");
    REQUIRE(s);
    REQUIRE(s->groups.size() == 1);
    CHECK(s->groups[0].id == "filter-1");
    std::set<std::string> want;
    for (const auto& f : r.flows)
        if (std::find(f.labels.begin(), f.labels.end(), "source.contact") != f.labels.end()) want.insert(f.id);
    CHECK(std::set<std::string>(s->groups[0].members.begin(), s->groups[0].members.end()) == want);
    CHECK(r.label_filter == opt.labels);
    // Findings without the labels are dropped from the report itself.
    CHECK(r.occurrences.empty());
    CHECK_FALSE(r.flows.empty());
    for (const auto& f : r.flows) CHECK(std::find(f.labels.begin(), f.labels.end(), "source.contact") != f.labels.end());
    CHECK(r.flows.size() < sample_report().flows.size());

    ScanOptions bad;
    bad.labels = {"sink.Q"};
    TempDir dir;
    CHECK_THROWS_AS(run_scan(dir.path(), default_rules(), bad), LabelError);
}

TEST_CASE("report_has_label") {
    Report r = sample_report();
    CHECK(report_has_label(r, "sens.down"));
    CHECK(report_has_label(r, "kind.occurrence"));
    CHECK_FALSE(report_has_label(r, "source.health"));
}

TEST_CASE("output does not depend on the number of jobs") {
    TempDir dir;
    write_sample(dir);
    for (int i = 0; i < 12; ++i)
        dir.write("gen/f" + std::to_string(i) + ".js",
                  "const userEmail" + std::to_string(i) + " = form.email;\nclient.send(userEmail" +
                      std::to_string(i) + ");\n");
    ScanOptions one;
    ScanOptions many;
    many.jobs = 8;
    std::string a = render_json(run_scan(dir.path(), default_rules(), one));
    std::string b = render_json(run_scan(dir.path(), default_rules(), many));
    CHECK(a == b);
}

TEST_CASE("fingerprint follows rule content") {
    RuleSpec a = default_rules();
    RuleSpec b = default_rules();
    CHECK(rules_fingerprint(a) == rules_fingerprint(b));
    b.sources[0].keywords.push_back("handle");
    CHECK(rules_fingerprint(a) != rules_fingerprint(b));
}

TEST_CASE("flow snippets are masked and single-line") {
    TempDir dir;
    dir.write("a.js", "mailer.send(userEmail,\n    \"jane.doe@example.org\");\n");
    Report r = run_scan(dir.path(), default_rules());
    REQUIRE(r.flows.size() == 1);
    CHECK(r.flows[0].snippet.find('\n') == std::string::npos);
    CHECK(r.flows[0].snippet.find("jane.doe@example.org") == std::string::npos);
    CHECK(r.flows[0].span == LineSpan{1, 2});
}

TEST_CASE("fixture: the five-flow file yields exactly its five annotated flows") {
    auto root = std::filesystem::path(PRIVLENS_SOURCE_DIR) / "fixtures" / "corpus";
    Report r = run_scan(root, default_rules());
    std::vector<std::pair<int, std::string>> got;
    for (const auto& f : r.flows)
        if (f.file == "js/five_flows.js") got.emplace_back(f.span.start, f.sink.category);
    CHECK(got == std::vector<std::pair<int, std::string>>{{9, "DB"}, {10, "L"}, {11, "M"}, {12, "T"}, {13, "E"}});
}

TEST_CASE("fixture: matrix contact/T equals the annotated contact to T flows") {
    auto fixtures = std::filesystem::path(PRIVLENS_SOURCE_DIR) / "fixtures";
    Report r = run_scan(fixtures / "corpus", default_rules());
    auto annotations = nlohmann::json::parse(oracle::read_file((fixtures / "annotations.json").string()));
    int annotated = 0;
    for (const auto& a : annotations.at("findings")) {
        if (a.at("kind") != "flow" || a.at("sink") != "T") continue;
        for (const auto& s : a.at("sources"))
            if (s == "contact") ++annotated;
    }
    CHECK(annotated > 0);
    CHECK(r.matrix.at("contact", "T") == annotated);
}
