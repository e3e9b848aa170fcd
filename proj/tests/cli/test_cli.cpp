#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "run.hpp"
#include "test_util.hpp"

using testutil::quote;
using testutil::run;
using testutil::TempDir;

namespace {

const std::string kCli = PRIVLENS_CLI;

std::string cli(const std::string& args) { return quote(kCli) + " " + args; }

void write_app(const TempDir& dir) {
    dir.write("app.js",
              "// owner: ops.team@example.com\n"
              "function store(userEmail) {\n"
              "  const h = hasher.hash(userEmail);\n"
              "  client.send(userEmail);\n"
              "}\n");
}

}  // namespace

TEST_CASE("--version") {
    auto r = run(cli("--version"));
    CHECK(r.status == 0);
    CHECK(r.out.find("0.1.0") != std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
    CHECK(run(cli("2>/dev/null")).status == 1);
    CHECK(run(cli("scan 2>/dev/null")).status == 1);
    CHECK(run(cli("scan /nonexistent/privlens 2>/dev/null")).status == 1);
    CHECK(run(cli("scan . --format xml 2>/dev/null")).status == 1);
    CHECK(run(cli("scan . --jobs 0 2>/dev/null")).status == 1);
}

TEST_CASE("scan writes a schema 1 JSON report") {
    TempDir dir;
    write_app(dir);
    auto r = run(cli("scan " + quote(dir.path().string())));
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("schema") == 1);
    CHECK(j.at("flows").size() == 2);
    CHECK(j.at("occurrences").size() == 1);
    CHECK(j.at("occurrences")[0].at("matched") == "ops***************om");
}

TEST_CASE("scan of an empty directory exits 0") {
    TempDir dir;
    auto r = run(cli("scan " + quote(dir.path().string())));
    CHECK(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("flows").empty());
}

TEST_CASE("--fail-on exits 2 only when a finding carries the label") {
    TempDir dir;
    write_app(dir);
    auto root = quote(dir.path().string());
    // hasher.hash(userEmail) assigned to a non-source variable: shape 5, sensitivity up.
    CHECK(run(cli("scan " + root + " --fail-on sens.up >/dev/null")).status == 2);
    CHECK(run(cli("scan " + root + " --fail-on source.health >/dev/null")).status == 0);
    CHECK(run(cli("scan " + root + " --fail-on sink.Q >/dev/null 2>&1")).status == 1);
}

TEST_CASE("--labels adds a label-filter group and rejects unknown labels") {
    TempDir dir;
    write_app(dir);
    auto root = quote(dir.path().string());
    auto r = run(cli("scan " + root + " --labels sink.T,source.contact"));
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.at("groups").contains("label-filter"));
    const auto& filtered = j.at("groups").at("label-filter");
    REQUIRE(filtered.size() == 1);
    CHECK(filtered[0].at("members") == nlohmann::json::array({"flow-2"}));
    auto bad = run(cli("scan " + root + " --labels sink.Q 2>&1"));
    CHECK(bad.status == 1);
    CHECK(bad.out.find("unknown label") != std::string::npos);
}

TEST_CASE("--format text --out and --no-mask") {
    TempDir dir;
    write_app(dir);
    auto out = dir.path() / "report.txt";
    auto r = run(cli("scan " + quote(dir.path().string()) + " --exclude '*.txt' --format text --no-mask --out " +
                     quote(out.string())));
    REQUIRE(r.status == 0);
    CHECK(r.out.empty());
    std::string text = oracle::read_file(out.string());
    CHECK(text.find("Personal data occurrences") != std::string::npos);
    CHECK(text.find("ops.team@example.com") != std::string::npos);
}

TEST_CASE("rules show prints the canonical rules and their fingerprint") {
    auto r = run(cli("rules show 2>/dev/null"));
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("sources").size() == 9);
    auto fp = run(cli("rules show 2>&1 >/dev/null"));
    TempDir dir;
    auto scan = nlohmann::json::parse(run(cli("scan " + quote(dir.path().string()))).out);
    CHECK(fp.out == scan.at("rules_fingerprint").get<std::string>() + "\n");

    auto labels = run(cli("rules show --labels"));
    CHECK(labels.status == 0);
    CHECK(labels.out.find("ssink.CD\n") != std::string::npos);
}

TEST_CASE("rules extend adds a category that scan then uses") {
    TempDir dir;
    auto rules = dir.path() / "rules.json";
    auto r = run(cli("rules extend --name employment --keywords 'employer, jobtitle' --out " + quote(rules.string())));
    REQUIRE(r.status == 0);
    dir.write("src/a.js", "client.send(employerName);\n");
    auto scan = run(cli("scan " + quote((dir.path() / "src").string()) + " --rules " + quote(rules.string())));
    REQUIRE(scan.status == 0);
    auto j = nlohmann::json::parse(scan.out);
    REQUIRE(j.at("flows").size() == 1);
    CHECK(j.at("flows")[0].at("labels")[0] == "source.employment");
    CHECK(run(cli("scan . --labels source.employment 2>/dev/null")).status == 1);
    CHECK(run(cli("scan " + quote(dir.path().string()) + " --rules " + quote(rules.string()) +
                  " --labels source.employment >/dev/null"))
              .status == 0);

    auto dup = run(cli("rules extend --name contact --keywords x 2>&1"));
    CHECK(dup.status == 1);
    CHECK(dup.out.find("duplicate source category") != std::string::npos);
}

TEST_CASE("a broken rules file exits 1 with the field path") {
    TempDir dir;
    dir.write("bad.json", R"({"version":1,"sources":[{"name":"contact","kind":"fixed","keywords":[1],"cleartext_patterns":[]}],"sinks":[],"apis":[]})");
    auto r = run(cli("scan " + quote(dir.path().string()) + " --rules " + quote((dir.path() / "bad.json").string()) +
                     " 2>&1"));
    CHECK(r.status == 1);
    CHECK(r.out.find("sources[0].keywords[0]") != std::string::npos);
}

TEST_CASE("--langs limits flow analysis") {
    TempDir dir;
    write_app(dir);
    dir.write("B.java", "class B { void f(String ssn) { repo.save(ssn); } }\n");
    auto j = nlohmann::json::parse(run(cli("scan " + quote(dir.path().string()) + " --langs java")).out);
    CHECK(j.at("flows").size() == 1);
    CHECK(j.at("occurrences").size() == 1);  // the JavaScript comment is still scanned
    CHECK(run(cli("scan . --langs cobol 2>/dev/null")).status == 1);
}
